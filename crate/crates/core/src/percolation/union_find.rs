//! Union-find cluster decomposition of a configuration.

use crate::graph::{GraphWindow, VertexSet};

use super::labels::OpenEdges;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns the surviving root.
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return ra;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        ra
    }

    pub fn size_of(&mut self, x: usize) -> usize {
        let r = self.find(x);
        self.size[r]
    }
}

/// Clusters of an open configuration.
///
/// `size`, `edge_count` and `pseudo_infinite` are indexed by root vertex.
/// `edge_count` counts edges touching the cluster, open or closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPartition {
    root: Vec<usize>,
    size: Vec<usize>,
    edge_count: Vec<usize>,
    pseudo_infinite: Vec<bool>,
}

/// Decomposes the open subgraph of `window` into clusters.
pub fn clusters(window: &GraphWindow, open: &impl OpenEdges) -> ClusterPartition {
    let n = window.num_vertices();
    let mut uf = UnionFind::new(n);
    let mut degree_sum: Vec<usize> = (0..n).map(|v| window.degree(v)).collect();
    for (e, &(a, b)) in window.edges().iter().enumerate() {
        if open.is_open(e) {
            let (ra, rb) = (uf.find(a), uf.find(b));
            if ra != rb {
                let r = uf.union(ra, rb);
                let merged = degree_sum[ra] + degree_sum[rb];
                degree_sum[r] = merged;
            }
        }
    }
    let root: Vec<usize> = (0..n).map(|v| uf.find(v)).collect();

    // Edges with both endpoints in one cluster were counted twice in the degree sum.
    let mut edge_count = vec![0; n];
    for v in 0..n {
        if root[v] == v {
            edge_count[v] = degree_sum[v];
        }
    }
    for &(a, b) in window.edges() {
        if root[a] == root[b] {
            edge_count[root[a]] -= 1;
        }
    }

    let mut size = vec![0; n];
    let mut pseudo_infinite = vec![false; n];
    for v in 0..n {
        size[root[v]] += 1;
        if window.is_boundary(v) {
            pseudo_infinite[root[v]] = true;
        }
    }
    ClusterPartition {
        root,
        size,
        edge_count,
        pseudo_infinite,
    }
}

impl ClusterPartition {
    pub fn root(&self, v: usize) -> usize {
        self.root[v]
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        self.root
            .iter()
            .enumerate()
            .filter(|&(v, &r)| v == r)
            .map(|(v, _)| v)
    }

    pub fn num_clusters(&self) -> usize {
        self.roots().count()
    }

    /// `|K_v|`.
    pub fn cluster_size(&self, v: usize) -> usize {
        self.size[self.root[v]]
    }

    /// `|E(K_v)|`, the number of edges touching `K_v`.
    pub fn edge_count(&self, v: usize) -> usize {
        self.edge_count[self.root[v]]
    }

    pub fn is_pseudo_infinite(&self, v: usize) -> bool {
        self.pseudo_infinite[self.root[v]]
    }

    pub fn same_cluster(&self, a: usize, b: usize) -> bool {
        self.root[a] == self.root[b]
    }

    pub fn members(&self, v: usize) -> VertexSet {
        let r = self.root[v];
        VertexSet::from_sorted_unchecked(
            (0..self.root.len())
                .filter(|&u| self.root[u] == r)
                .collect(),
        )
    }

    /// Indicator of `K_∞`, the union of pseudo-infinite clusters.
    pub fn infinite_mask(&self) -> Vec<bool> {
        self.root.iter().map(|&r| self.pseudo_infinite[r]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::percolation::labels::{assign_uniforms, Configuration};

    fn bfs_components(window: &GraphWindow, config: &Configuration) -> Vec<usize> {
        let n = window.num_vertices();
        let mut comp = vec![usize::MAX; n];
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = s;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for nb in window.neighbors(u) {
                    if config.is_open(nb.edge) && comp[nb.vertex] == usize::MAX {
                        comp[nb.vertex] = s;
                        stack.push(nb.vertex);
                    }
                }
            }
        }
        comp
    }

    #[test]
    fn union_find_merges() {
        let mut uf = UnionFind::new(6);
        uf.union(0, 1);
        uf.union(2, 3);
        uf.union(1, 3);
        assert_eq!(uf.find(0), uf.find(2));
        assert_ne!(uf.find(0), uf.find(4));
        assert_eq!(uf.size_of(3), 4);
        assert_eq!(uf.size_of(5), 1);
    }

    #[test]
    fn all_open_and_all_closed() {
        let w = GraphWindow::hypercubic(2, 4).unwrap();
        let labels = assign_uniforms(&w, 0, 0);
        let full = clusters(&w, &labels.threshold(1.0).unwrap());
        assert_eq!(full.num_clusters(), 1);
        assert_eq!(full.cluster_size(0), 16);
        assert_eq!(full.edge_count(5), w.num_edges());

        let empty = clusters(&w, &labels.threshold(0.0).unwrap());
        assert_eq!(empty.num_clusters(), 16);
        for v in 0..16 {
            assert_eq!(empty.cluster_size(v), 1);
            assert_eq!(empty.edge_count(v), w.degree(v));
        }
    }

    #[test]
    fn path_with_one_open_edge() {
        let w = GraphWindow::hypercubic(1, 3).unwrap();
        let config = Configuration::from_open([true, false], 0.5);
        let part = clusters(&w, &config);
        assert!(part.same_cluster(0, 1));
        assert!(!part.same_cluster(1, 2));
        assert_eq!(part.cluster_size(0), 2);
        assert_eq!(part.edge_count(0), 2);
        assert_eq!(part.edge_count(2), 1);
    }

    #[test]
    fn matches_bfs_on_random_configurations() {
        for (d, l) in [(2, 5), (3, 3), (2, 7)] {
            let w = GraphWindow::hypercubic(d, l).unwrap();
            for s in 0..350 {
                let p = 0.2 + 0.6 * (s % 7) as f64 / 7.0;
                let config = assign_uniforms(&w, 3, s).threshold(p).unwrap();
                let part = clusters(&w, &config);
                let comp = bfs_components(&w, &config);
                let mut total = 0;
                for r in part.roots() {
                    total += part.cluster_size(r);
                }
                assert_eq!(total, w.num_vertices());
                for a in 0..w.num_vertices() {
                    assert_eq!(part.root(part.root(a)), part.root(a));
                    for b in 0..w.num_vertices() {
                        assert_eq!(part.same_cluster(a, b), comp[a] == comp[b]);
                    }
                    let members = part.members(a);
                    let touching = w.touching_edges(&members).unwrap().len();
                    assert_eq!(part.edge_count(a), touching);
                    let infinite = members.iter().any(|u| w.is_boundary(u));
                    assert_eq!(part.is_pseudo_infinite(a), infinite);
                }
            }
        }
    }
}
