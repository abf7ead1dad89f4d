//! Bond percolation on a window: coupling, clusters, repulsion, hulls and
//! edge-disjoint paths.
//!
//! Edge `e` is open at level `p` iff its uniform label is below `p`, so one
//! label array realizes every level at once and `p₁ ≤ p₂` implies the
//! `p₁`-open set is contained in the `p₂`-open set.

pub mod labels;
pub mod maxflow;
pub mod search;
pub mod union_find;

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{GraphWindow, OrientedEdge, VertexSet};

pub use labels::{
    assign_uniforms, threshold, Configuration, EdgeLabels, LabelSource, LazyLabels, OpenEdges,
    Threshold,
};
pub use maxflow::Dinic;
pub use search::{cluster_of, FiniteCluster, Reach, SearchScratch};
pub use union_find::{clusters, ClusterPartition, UnionFind};

/// `τ(A, B)`: window edges (open or closed) with one endpoint in each set.
pub fn tau(window: &GraphWindow, a: &VertexSet, b: &VertexSet) -> Result<usize> {
    if a.iter().any(|v| b.contains(v)) {
        return Err(Error::domain("τ(A, B) requires disjoint sets"));
    }
    let in_b = b.mask(window.num_vertices());
    Ok(a.iter()
        .map(|v| {
            window
                .neighbors(v)
                .iter()
                .filter(|nb| in_b[nb.vertex])
                .count()
        })
        .sum())
}

/// Per-sample outcome of the sprinkled repulsion statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepulsionSample {
    /// `K_{v,p₂}` avoids the boundary.
    pub finite: bool,
    /// `τ(K_{v,p₂}, K_{∞,p₁})`; zero when `finite` is false.
    pub tau: usize,
}

/// Two search scratches, enough for every per-sample statistic.
#[derive(Debug, Clone)]
pub struct Scratch {
    pub primary: SearchScratch,
    pub secondary: SearchScratch,
}

impl Scratch {
    pub fn new(window: &GraphWindow) -> Self {
        Scratch {
            primary: SearchScratch::new(window),
            secondary: SearchScratch::new(window),
        }
    }
}

fn check_sprinkle(p1: f64, p2: f64) -> Result<()> {
    if !(0.0 < p1 && p1 < p2 && p2 < 1.0) {
        return Err(Error::domain(format!(
            "sprinkling needs 0 < p1 < p2 < 1, got p1 = {p1}, p2 = {p2}"
        )));
    }
    Ok(())
}

/// `(|K_{v,p₂}| < ∞, τ(K_{v,p₂}, K_{∞,p₁}))` under the label coupling.
pub fn repulsion_statistic<L: LabelSource + ?Sized>(
    window: &GraphWindow,
    labels: &L,
    p1: f64,
    p2: f64,
    v: usize,
) -> Result<RepulsionSample> {
    repulsion_statistic_with(window, labels, p1, p2, v, &mut Scratch::new(window))
}

/// [`repulsion_statistic`] with caller-provided scratch space.
pub fn repulsion_statistic_with<L: LabelSource + ?Sized>(
    window: &GraphWindow,
    labels: &L,
    p1: f64,
    p2: f64,
    v: usize,
    scratch: &mut Scratch,
) -> Result<RepulsionSample> {
    check_sprinkle(p1, p2)?;
    let upper = Threshold::new(labels, p2);
    let Some(cluster) = cluster_of(window, &upper, v, &mut scratch.primary) else {
        return Ok(RepulsionSample {
            finite: false,
            tau: 0,
        });
    };
    Ok(RepulsionSample {
        finite: true,
        tau: tau_to_infinity(
            window,
            labels,
            p1,
            &cluster.vertices,
            &mut scratch.secondary,
        ),
    })
}

/// `τ(K, K_{∞,p})` for a vertex set `K` disjoint from `K_{∞,p}`.
///
/// The caller guarantees that `K` meets no pseudo-infinite `p`-cluster, which
/// holds whenever `K` is a finite cluster at some level `≥ p`.
pub(crate) fn tau_to_infinity<L: LabelSource + ?Sized>(
    window: &GraphWindow,
    labels: &L,
    p: f64,
    cluster: &[usize],
    scratch: &mut SearchScratch,
) -> usize {
    let lower = Threshold::new(labels, p);
    scratch.reset();
    let mut inside = std::collections::HashSet::with_capacity(cluster.len());
    inside.extend(cluster.iter().copied());
    let mut count = 0;
    for &u in cluster {
        for nb in window.neighbors(u) {
            if !inside.contains(&nb.vertex)
                && scratch.reaches_boundary(window, &lower, nb.vertex, |_| false)
            {
                count += 1;
            }
        }
    }
    count
}

/// Repulsion statistic from precomputed cluster partitions at `p₁` and `p₂`.
pub fn repulsion_from_partitions(
    window: &GraphWindow,
    lower: &ClusterPartition,
    upper: &ClusterPartition,
    v: usize,
) -> RepulsionSample {
    if upper.is_pseudo_infinite(v) {
        return RepulsionSample {
            finite: false,
            tau: 0,
        };
    }
    let members = upper.members(v);
    let tau = members
        .iter()
        .flat_map(|u| window.neighbors(u))
        .filter(|nb| !upper.same_cluster(nb.vertex, v) && lower.is_pseudo_infinite(nb.vertex))
        .count();
    RepulsionSample { finite: true, tau }
}

/// Whether `x` is joined to the boundary by an open path avoiding `S`.
pub fn connected_off(
    window: &GraphWindow,
    open: &impl OpenEdges,
    x: usize,
    set: &VertexSet,
) -> Result<bool> {
    if set.contains(x) {
        return Err(Error::domain(format!(
            "start vertex {x} lies in the avoided set"
        )));
    }
    let mut scratch = SearchScratch::new(window);
    Ok(scratch.reaches_boundary(window, open, x, |u| set.contains(u)))
}

/// Indicator of vertices outside `S` joined to the boundary off `S`.
pub fn reachable_off(window: &GraphWindow, open: &impl OpenEdges, set: &VertexSet) -> Vec<bool> {
    let blocked = set.mask(window.num_vertices());
    let mut reach = vec![false; window.num_vertices()];
    let mut queue: VecDeque<usize> = window
        .boundary_vertices()
        .iter()
        .copied()
        .filter(|&b| !blocked[b])
        .collect();
    for &b in &queue {
        reach[b] = true;
    }
    while let Some(u) = queue.pop_front() {
        for nb in window.neighbors(u) {
            if !reach[nb.vertex] && !blocked[nb.vertex] && open.is_open(nb.edge) {
                reach[nb.vertex] = true;
                queue.push_back(nb.vertex);
            }
        }
    }
    reach
}

/// `{e ∈ ∂_E^→S : e⁺ ↔ ∞ off S}`; with `open_only` also require `e` open.
pub fn escaping_edges(
    window: &GraphWindow,
    open: &impl OpenEdges,
    set: &VertexSet,
    open_only: bool,
) -> Result<Vec<OrientedEdge>> {
    let reach = reachable_off(window, open, set);
    Ok(window
        .oriented_edge_boundary(set)?
        .into_iter()
        .filter(|oe| reach[oe.head] && (!open_only || open.is_open(oe.edge)))
        .collect())
}

/// Hull `Γ(S ∩ K_∞)` and its open outward boundary `∂_p^→Γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hull {
    pub vertices: VertexSet,
    pub open_boundary: Vec<OrientedEdge>,
}

/// Vertices of pseudo-infinite clusters whose every open route to the
/// boundary passes through `S`.
pub fn hull(window: &GraphWindow, config: &Configuration, set: &VertexSet) -> Hull {
    let partition = clusters(window, config);
    let reach = reachable_off(window, config, set);
    let in_set = set.mask(window.num_vertices());
    let members: Vec<usize> = (0..window.num_vertices())
        .filter(|&v| partition.is_pseudo_infinite(v) && (in_set[v] || !reach[v]))
        .collect();
    let vertices = VertexSet::from_sorted_unchecked(members);
    let open_boundary = open_oriented_boundary(window, config, &vertices);
    Hull {
        vertices,
        open_boundary,
    }
}

/// Open edges leaving `set`, oriented outward and sorted by edge index.
pub fn open_oriented_boundary(
    window: &GraphWindow,
    open: &impl OpenEdges,
    set: &VertexSet,
) -> Vec<OrientedEdge> {
    if set.is_empty() {
        return Vec::new();
    }
    window
        .oriented_edge_boundary(set)
        .expect("nonempty set")
        .into_iter()
        .filter(|oe| open.is_open(oe.edge))
        .collect()
}

/// Maximum number of edge-disjoint open paths from `S` to the boundary.
///
/// Boundary vertices inside `S` are not sinks. `limit` caps the search.
pub fn count_edge_disjoint_paths(
    window: &GraphWindow,
    open: &impl OpenEdges,
    set: &VertexSet,
    limit: Option<usize>,
) -> Result<usize> {
    if set.is_empty() {
        return Err(Error::domain("source set must be nonempty"));
    }
    let n = window.num_vertices();
    let (source, sink) = (n, n + 1);
    let mut net = Dinic::new(n + 2);
    for (e, &(a, b)) in window.edges().iter().enumerate() {
        if open.is_open(e) {
            net.add_undirected(a, b, 1);
        }
    }
    for v in set.iter() {
        net.add_arc(source, v, maxflow::INFINITE_CAPACITY);
    }
    let mut any_sink = false;
    for &b in window.boundary_vertices() {
        if !set.contains(b) {
            net.add_arc(b, sink, maxflow::INFINITE_CAPACITY);
            any_sink = true;
        }
    }
    if !any_sink {
        return Ok(0);
    }
    let cap = limit
        .map(|l| l.min(maxflow::INFINITE_CAPACITY as usize) as u32)
        .unwrap_or(maxflow::INFINITE_CAPACITY);
    Ok(net.max_flow(source, sink, cap) as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(window: &GraphWindow, open: bool) -> Configuration {
        Configuration::from_open(std::iter::repeat_n(open, window.num_edges()), 0.5)
    }

    #[test]
    fn tau_examples() {
        let w = GraphWindow::hypercubic(2, 3).unwrap();
        let s = |v: &[usize]| VertexSet::new(&w, v.iter().copied()).unwrap();
        assert_eq!(tau(&w, &s(&[4]), &s(&[5])).unwrap(), 1);
        assert_eq!(tau(&w, &s(&[0]), &s(&[8])).unwrap(), 0);
        // columns x = 0 and x = 1
        assert_eq!(tau(&w, &s(&[0, 3, 6]), &s(&[1, 4, 7])).unwrap(), 3);
        assert!(tau(&w, &s(&[0, 1]), &s(&[1])).is_err());
    }

    #[test]
    fn repulsion_examples() {
        let w = GraphWindow::hypercubic(2, 9).unwrap();
        let v = w.origin();
        let all_open = EdgeLabels::from_values(vec![0.0; w.num_edges()]).unwrap();
        let r = repulsion_statistic(&w, &all_open, 0.3, 0.6, v).unwrap();
        assert!(!r.finite);

        // v isolated at p2, nothing open at p1
        let mut values = vec![0.7; w.num_edges()];
        for nb in w.neighbors(v) {
            values[nb.edge] = 0.95;
        }
        let labels = EdgeLabels::from_values(values).unwrap();
        let r = repulsion_statistic(&w, &labels, 0.5, 0.9, v).unwrap();
        assert_eq!(
            r,
            RepulsionSample {
                finite: true,
                tau: 0
            }
        );
        // at p1 = 0.75 everything but v's edges is open: all 4 edges face K_∞
        let r = repulsion_statistic(&w, &labels, 0.75, 0.9, v).unwrap();
        assert_eq!(
            r,
            RepulsionSample {
                finite: true,
                tau: 4
            }
        );

        assert!(repulsion_statistic(&w, &labels, 0.9, 0.5, v).is_err());
    }

    #[test]
    fn local_repulsion_matches_partitions() {
        let w = GraphWindow::hypercubic(2, 11).unwrap();
        let v = w.origin();
        let mut scratch = Scratch::new(&w);
        let mut finite = 0;
        for s in 0..600 {
            let labels = assign_uniforms(&w, 17, s);
            let (p1, p2) = (0.45, 0.55);
            let lower = clusters(&w, &labels.threshold(p1).unwrap());
            let upper = clusters(&w, &labels.threshold(p2).unwrap());
            let expected = repulsion_from_partitions(&w, &lower, &upper, v);
            let got = repulsion_statistic_with(&w, &labels, p1, p2, v, &mut scratch).unwrap();
            assert_eq!(got, expected, "sample {s}");
            finite += usize::from(got.finite);
        }
        assert!(finite > 50);
    }

    #[test]
    fn connected_off_examples() {
        let w = GraphWindow::hypercubic(2, 7).unwrap();
        let open = all(&w, true);
        assert!(connected_off(&w, &open, 0, &VertexSet::empty()).unwrap());
        let closed = all(&w, false);
        assert!(!connected_off(&w, &closed, w.origin(), &VertexSet::empty()).unwrap());
        // ring of radius 2 around the centre blocks everything inside
        let c = w.origin();
        let dist = w.distances_from(c);
        let ring = VertexSet::new(&w, (0..w.num_vertices()).filter(|&u| dist[u] == 2)).unwrap();
        assert!(!connected_off(&w, &open, c, &ring).unwrap());
        assert!(connected_off(&w, &open, 0, &ring).unwrap());
        assert!(connected_off(&w, &open, c, &w.ball(c, 0).unwrap()).is_err());
    }

    #[test]
    fn hull_of_empty_intersection_is_empty() {
        let w = GraphWindow::hypercubic(2, 7).unwrap();
        let closed = all(&w, false);
        let h = hull(&w, &closed, &w.ball(w.origin(), 1).unwrap());
        assert!(h.vertices.is_empty());
        assert!(h.open_boundary.is_empty());
    }

    #[test]
    fn hull_on_a_path() {
        // path 0-1-2-3-4-5-6 with boundary {0, 6}; open edges 2-3, 3-4, 4-5, 5-6
        let w = GraphWindow::hypercubic(1, 7).unwrap();
        let config = Configuration::from_open([false, false, true, true, true, true], 0.5);
        let s = VertexSet::new(&w, [4]).unwrap();
        let h = hull(&w, &config, &s);
        // 2 and 3 reach infinity only through 4
        assert_eq!(h.vertices.members(), &[2, 3, 4]);
        assert_eq!(
            h.open_boundary,
            vec![OrientedEdge {
                tail: 4,
                head: 5,
                edge: 4
            }]
        );
        let esc = escaping_edges(&w, &config, &s, true).unwrap();
        assert_eq!(esc, h.open_boundary);
    }

    #[test]
    fn edge_disjoint_paths_examples() {
        let w = GraphWindow::hypercubic(2, 5).unwrap();
        let c = VertexSet::singleton(&w, w.origin()).unwrap();
        assert_eq!(
            count_edge_disjoint_paths(&w, &all(&w, false), &c, None).unwrap(),
            0
        );
        assert_eq!(
            count_edge_disjoint_paths(&w, &all(&w, true), &c, None).unwrap(),
            4
        );
        assert_eq!(
            count_edge_disjoint_paths(&w, &all(&w, true), &c, Some(2)).unwrap(),
            2
        );
        let ball = w.ball(w.origin(), 1).unwrap();
        assert_eq!(
            count_edge_disjoint_paths(&w, &all(&w, true), &ball, None).unwrap(),
            12
        );
    }

    #[test]
    fn hull_identity_and_menger_bound_on_samples() {
        let w = GraphWindow::hypercubic(2, 12).unwrap();
        let s = w.ball(w.origin(), 2).unwrap();
        for sample in 0..300 {
            let labels = assign_uniforms(&w, 5, sample);
            for p in [0.45, 0.6, 0.75] {
                let config = labels.threshold(p).unwrap();
                let h = hull(&w, &config, &s);
                let esc = escaping_edges(&w, &config, &s, true).unwrap();
                assert_eq!(h.open_boundary, esc);
                let all_esc = escaping_edges(&w, &config, &s, false).unwrap();
                let flow = count_edge_disjoint_paths(&w, &config, &s, None).unwrap();
                assert!(esc.len() >= flow && all_esc.len() >= esc.len());
            }
        }
    }

    #[test]
    fn monotone_coupling_random_checks() {
        let w = GraphWindow::hypercubic(2, 10).unwrap();
        for s in 0..2000u64 {
            let labels = assign_uniforms(&w, 99, s);
            let p1 = (s % 97) as f64 / 97.0;
            let p2 = p1 + (1.0 - p1) * ((s % 13) as f64 / 13.0);
            let lo = labels.threshold(p1).unwrap();
            let hi = labels.threshold(p2).unwrap();
            assert!(lo.is_subset_of(&hi));
        }
    }
}
