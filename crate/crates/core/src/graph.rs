//! Finite windows of infinite transitive graphs.
//!
//! A [`GraphWindow`] is a finite truncation of a hypercubic lattice, a regular
//! tree, or a Cartesian product of windows. Its boundary (the vertices that are
//! missing neighbours of the infinite graph) stands in for "infinity": a
//! cluster touching the boundary is treated as infinite.
//!
//! Edges are indexed lexicographically by `(min endpoint, max endpoint)`, so the
//! edge index doubles as the canonical edge enumeration used by exploration.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The infinite graph a window is cut from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    /// `{0, .., side-1}^dim` inside `Z^dim`.
    Hypercubic { dim: usize, side: usize },
    /// Ball of radius `radius` around the root of the `degree`-regular tree.
    RegularTree { degree: usize, radius: usize },
    /// Cartesian product of two windows.
    Product {
        left: Box<Family>,
        right: Box<Family>,
    },
}

impl Family {
    pub fn hypercubic(dim: usize, side: usize) -> Self {
        Family::Hypercubic { dim, side }
    }

    pub fn regular_tree(degree: usize, radius: usize) -> Self {
        Family::RegularTree { degree, radius }
    }

    pub fn product(left: Family, right: Family) -> Self {
        Family::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Degree of every vertex of the infinite transitive graph.
    pub fn infinite_degree(&self) -> usize {
        match self {
            Family::Hypercubic { dim, .. } => 2 * dim,
            Family::RegularTree { degree, .. } => *degree,
            Family::Product { left, right } => left.infinite_degree() + right.infinite_degree(),
        }
    }
}

/// A neighbour of a vertex together with the connecting edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Neighbor {
    pub vertex: usize,
    pub edge: usize,
}

/// An edge with a chosen orientation `tail -> head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OrientedEdge {
    pub tail: usize,
    pub head: usize,
    pub edge: usize,
}

/// Sorted, duplicate-free set of window vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    /// Builds a set from arbitrary vertex indices; duplicates are merged.
    pub fn new(window: &GraphWindow, vertices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = vertices.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&v| v >= window.num_vertices()) {
            return Err(Error::domain(format!(
                "vertex {bad} is not in a window with {} vertices",
                window.num_vertices()
            )));
        }
        Ok(VertexSet { members })
    }

    pub fn singleton(window: &GraphWindow, v: usize) -> Result<Self> {
        Self::new(window, [v])
    }

    pub fn empty() -> Self {
        VertexSet {
            members: Vec::new(),
        }
    }

    /// Wraps vertices that are already known to be valid, sorted and unique.
    pub(crate) fn from_sorted_unchecked(members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        VertexSet { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    /// Indicator vector of length `n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.members {
            mask[v] = true;
        }
        mask
    }
}

/// Immutable finite window of an infinite graph.
#[derive(Debug, Clone)]
pub struct GraphWindow {
    family: Family,
    neighbors: Vec<Vec<Neighbor>>,
    edges: Vec<(usize, usize)>,
    boundary: Vec<bool>,
    boundary_vertices: Vec<usize>,
    boundary_distance: Vec<usize>,
    origin: usize,
}

impl GraphWindow {
    /// Builds the window described by `family`.
    pub fn build(family: &Family) -> Result<Self> {
        let raw = RawWindow::build(family)?;
        Ok(Self::from_raw(family.clone(), raw))
    }

    pub fn hypercubic(dim: usize, side: usize) -> Result<Self> {
        Self::build(&Family::hypercubic(dim, side))
    }

    pub fn regular_tree(degree: usize, radius: usize) -> Result<Self> {
        Self::build(&Family::regular_tree(degree, radius))
    }

    fn from_raw(family: Family, raw: RawWindow) -> Self {
        let n = raw.num_vertices;
        let mut edges: Vec<(usize, usize)> = raw
            .edges
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        edges.sort_unstable();
        edges.dedup();

        let mut neighbors = vec![Vec::new(); n];
        for (id, &(a, b)) in edges.iter().enumerate() {
            neighbors[a].push(Neighbor {
                vertex: b,
                edge: id,
            });
            neighbors[b].push(Neighbor {
                vertex: a,
                edge: id,
            });
        }
        for list in &mut neighbors {
            list.sort_unstable_by_key(|nb| nb.vertex);
        }

        let mut window = GraphWindow {
            family,
            neighbors,
            edges,
            boundary: raw.boundary,
            boundary_vertices: Vec::new(),
            boundary_distance: Vec::new(),
            origin: raw.origin,
        };
        window.refresh_boundary();
        window
    }

    fn refresh_boundary(&mut self) {
        self.boundary_vertices = (0..self.num_vertices())
            .filter(|&v| self.boundary[v])
            .collect();
        let mut dist = vec![usize::MAX; self.num_vertices()];
        let mut queue = VecDeque::new();
        for &b in &self.boundary_vertices {
            dist[b] = 0;
            queue.push_back(b);
        }
        while let Some(u) = queue.pop_front() {
            for nb in &self.neighbors[u] {
                if dist[nb.vertex] == usize::MAX {
                    dist[nb.vertex] = dist[u] + 1;
                    queue.push_back(nb.vertex);
                }
            }
        }
        self.boundary_distance = dist;
    }

    /// Replaces the boundary ("infinity" proxy) by an explicit vertex list.
    ///
    /// Used on tiny windows where every vertex lies on the geometric boundary,
    /// so that exact-enumeration checks have non-degenerate targets.
    pub fn with_boundary(mut self, vertices: &[usize]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::config(
                "boundary",
                "boundary override must be nonempty",
            ));
        }
        let mut boundary = vec![false; self.num_vertices()];
        for &v in vertices {
            if v >= self.num_vertices() {
                return Err(Error::config(
                    "boundary",
                    format!("vertex {v} out of range"),
                ));
            }
            boundary[v] = true;
        }
        self.boundary = boundary;
        self.refresh_boundary();
        Ok(self)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn num_vertices(&self) -> usize {
        self.neighbors.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Endpoints `(min, max)` of edge `e`.
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other_endpoint(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn neighbors(&self, v: usize) -> &[Neighbor] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    /// Degree of the infinite graph; interior vertices attain it.
    pub fn infinite_degree(&self) -> usize {
        self.family.infinite_degree()
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub fn boundary_vertices(&self) -> &[usize] {
        &self.boundary_vertices
    }

    /// Graph distance from `v` to the nearest boundary vertex.
    pub fn boundary_distance(&self, v: usize) -> usize {
        self.boundary_distance[v]
    }

    /// Smallest boundary distance over `set`, or `None` for an empty set.
    pub fn margin(&self, set: &VertexSet) -> Option<usize> {
        set.iter().map(|v| self.boundary_distance[v]).min()
    }

    /// Default anchor vertex: the centre of the window.
    pub fn origin(&self) -> usize {
        self.origin
    }

    /// Coordinates of `v` for hypercubic windows and products of them.
    pub fn coordinates(&self, v: usize) -> Option<Vec<usize>> {
        coordinates(&self.family, v)
    }

    /// Vertex with the given coordinates, if the family has coordinates.
    pub fn vertex_at(&self, coords: &[usize]) -> Option<usize> {
        vertex_at(&self.family, coords)
    }

    /// Edge joining `a` and `b`, if adjacent.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.neighbors[a]
            .binary_search_by_key(&b, |nb| nb.vertex)
            .ok()
            .map(|i| self.neighbors[a][i].edge)
    }

    /// BFS distances from `source`.
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_vertices()];
        let mut queue = VecDeque::from([source]);
        dist[source] = 0;
        while let Some(u) = queue.pop_front() {
            for nb in &self.neighbors[u] {
                if dist[nb.vertex] == usize::MAX {
                    dist[nb.vertex] = dist[u] + 1;
                    queue.push_back(nb.vertex);
                }
            }
        }
        dist
    }

    /// Graph-distance ball of radius `radius` around `center`.
    pub fn ball(&self, center: usize, radius: usize) -> Result<VertexSet> {
        if center >= self.num_vertices() {
            return Err(Error::domain(format!("ball centre {center} out of range")));
        }
        let dist = self.distances_from(center);
        Ok(VertexSet::from_sorted_unchecked(
            (0..self.num_vertices())
                .filter(|&v| dist[v] <= radius)
                .collect(),
        ))
    }

    /// `∂_E S`: edges with exactly one endpoint in `S`, in index order.
    pub fn edge_boundary(&self, set: &VertexSet) -> Result<Vec<usize>> {
        Ok(self
            .oriented_edge_boundary(set)?
            .into_iter()
            .map(|oe| oe.edge)
            .collect())
    }

    /// `∂_E^→ S`: boundary edges oriented from `S` outward, sorted by edge index.
    pub fn oriented_edge_boundary(&self, set: &VertexSet) -> Result<Vec<OrientedEdge>> {
        self.require_nonempty(set)?;
        let inside = set.mask(self.num_vertices());
        let mut out: Vec<OrientedEdge> = set
            .iter()
            .flat_map(|v| {
                self.neighbors[v]
                    .iter()
                    .filter(|nb| !inside[nb.vertex])
                    .map(move |nb| OrientedEdge {
                        tail: v,
                        head: nb.vertex,
                        edge: nb.edge,
                    })
            })
            .collect();
        out.sort_unstable_by_key(|oe| oe.edge);
        Ok(out)
    }

    /// `E(S)`: edges with at least one endpoint in `S`, in index order.
    pub fn touching_edges(&self, set: &VertexSet) -> Result<Vec<usize>> {
        self.require_nonempty(set)?;
        let mut out: Vec<usize> = set
            .iter()
            .flat_map(|v| self.neighbors[v].iter().map(|nb| nb.edge))
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Number of edges with both endpoints in `S`.
    pub fn internal_edge_count(&self, set: &VertexSet) -> usize {
        let inside = set.mask(self.num_vertices());
        set.iter()
            .map(|v| {
                self.neighbors[v]
                    .iter()
                    .filter(|nb| nb.vertex > v && inside[nb.vertex])
                    .count()
            })
            .sum()
    }

    /// `Σ_{w∈S} deg(w)`.
    pub fn degree_volume(&self, set: &VertexSet) -> usize {
        set.iter().map(|v| self.degree(v)).sum()
    }

    /// Whether the subgraph induced by `S` is connected.
    pub fn is_connected_set(&self, set: &VertexSet) -> Result<bool> {
        self.require_nonempty(set)?;
        let inside = set.mask(self.num_vertices());
        let mut seen = vec![false; self.num_vertices()];
        let start = set.members()[0];
        let mut stack = vec![start];
        seen[start] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for nb in &self.neighbors[u] {
                if inside[nb.vertex] && !seen[nb.vertex] {
                    seen[nb.vertex] = true;
                    reached += 1;
                    stack.push(nb.vertex);
                }
            }
        }
        Ok(reached == set.len())
    }

    fn require_nonempty(&self, set: &VertexSet) -> Result<()> {
        if set.is_empty() {
            Err(Error::domain("vertex set must be nonempty"))
        } else {
            Ok(())
        }
    }
}

struct RawWindow {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    boundary: Vec<bool>,
    origin: usize,
}

impl RawWindow {
    fn build(family: &Family) -> Result<Self> {
        match *family {
            Family::Hypercubic { dim, side } => Self::hypercubic(dim, side),
            Family::RegularTree { degree, radius } => Self::tree(degree, radius),
            Family::Product {
                ref left,
                ref right,
            } => {
                let l = Self::build(left)?;
                let r = Self::build(right)?;
                Ok(Self::product(&l, &r))
            }
        }
    }

    fn hypercubic(dim: usize, side: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::config(
                "dim",
                "hypercubic dimension must be at least 1",
            ));
        }
        if side < 2 {
            return Err(Error::config("side", "hypercubic side must be at least 2"));
        }
        let n = side
            .checked_pow(dim as u32)
            .filter(|&n| n <= 1 << 26)
            .ok_or_else(|| Error::config("side", "window has too many vertices"))?;
        let mut edges = Vec::with_capacity(dim * n);
        let mut boundary = vec![false; n];
        for (v, on_boundary) in boundary.iter_mut().enumerate() {
            let mut stride = 1;
            let mut rest = v;
            for _ in 0..dim {
                let x = rest % side;
                rest /= side;
                if x == 0 || x == side - 1 {
                    *on_boundary = true;
                }
                if x + 1 < side {
                    edges.push((v, v + stride));
                }
                stride *= side;
            }
        }
        let mut origin = 0;
        let mut stride = 1;
        for _ in 0..dim {
            origin += (side / 2) * stride;
            stride *= side;
        }
        Ok(RawWindow {
            num_vertices: n,
            edges,
            boundary,
            origin,
        })
    }

    fn tree(degree: usize, radius: usize) -> Result<Self> {
        if degree < 3 {
            return Err(Error::config("degree", "tree degree must be at least 3"));
        }
        if radius < 1 {
            return Err(Error::config("radius", "tree radius must be at least 1"));
        }
        let mut edges = Vec::new();
        let mut frontier = vec![0usize];
        let mut next_id = 1usize;
        for depth in 0..radius {
            let children = if depth == 0 { degree } else { degree - 1 };
            let mut next = Vec::with_capacity(frontier.len() * children);
            for &parent in &frontier {
                for _ in 0..children {
                    edges.push((parent, next_id));
                    next.push(next_id);
                    next_id += 1;
                    if next_id > 1 << 26 {
                        return Err(Error::config("radius", "window has too many vertices"));
                    }
                }
            }
            frontier = next;
        }
        let mut boundary = vec![false; next_id];
        for &leaf in &frontier {
            boundary[leaf] = true;
        }
        Ok(RawWindow {
            num_vertices: next_id,
            edges,
            boundary,
            origin: 0,
        })
    }

    fn product(left: &RawWindow, right: &RawWindow) -> Self {
        let nr = right.num_vertices;
        let n = left.num_vertices * nr;
        let mut edges =
            Vec::with_capacity(left.edges.len() * nr + right.edges.len() * left.num_vertices);
        for &(a, b) in &left.edges {
            for y in 0..nr {
                edges.push((a * nr + y, b * nr + y));
            }
        }
        for x in 0..left.num_vertices {
            for &(a, b) in &right.edges {
                edges.push((x * nr + a, x * nr + b));
            }
        }
        let boundary = (0..n)
            .map(|v| left.boundary[v / nr] || right.boundary[v % nr])
            .collect();
        RawWindow {
            num_vertices: n,
            edges,
            boundary,
            origin: left.origin * nr + right.origin,
        }
    }
}

fn family_size(family: &Family) -> usize {
    match *family {
        Family::Hypercubic { dim, side } => side.pow(dim as u32),
        Family::RegularTree { degree, radius } => {
            let mut total = 1;
            let mut layer = degree;
            for _ in 0..radius {
                total += layer;
                layer *= degree - 1;
            }
            total
        }
        Family::Product {
            ref left,
            ref right,
        } => family_size(left) * family_size(right),
    }
}

fn coordinates(family: &Family, v: usize) -> Option<Vec<usize>> {
    match *family {
        Family::Hypercubic { dim, side } => {
            let mut rest = v;
            let mut out = Vec::with_capacity(dim);
            for _ in 0..dim {
                out.push(rest % side);
                rest /= side;
            }
            Some(out)
        }
        Family::RegularTree { .. } => None,
        Family::Product {
            ref left,
            ref right,
        } => {
            let nr = family_size(right);
            let mut out = coordinates(left, v / nr)?;
            out.extend(coordinates(right, v % nr)?);
            Some(out)
        }
    }
}

fn coordinate_rank(family: &Family) -> Option<usize> {
    match *family {
        Family::Hypercubic { dim, .. } => Some(dim),
        Family::RegularTree { .. } => None,
        Family::Product {
            ref left,
            ref right,
        } => Some(coordinate_rank(left)? + coordinate_rank(right)?),
    }
}

fn vertex_at(family: &Family, coords: &[usize]) -> Option<usize> {
    match *family {
        Family::Hypercubic { dim, side } => {
            if coords.len() != dim || coords.iter().any(|&x| x >= side) {
                return None;
            }
            Some(coords.iter().rev().fold(0, |acc, &x| acc * side + x))
        }
        Family::RegularTree { .. } => None,
        Family::Product {
            ref left,
            ref right,
        } => {
            let split = coordinate_rank(left)?;
            if coords.len() < split {
                return None;
            }
            let a = vertex_at(left, &coords[..split])?;
            let b = vertex_at(right, &coords[split..])?;
            Some(a * family_size(right) + b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(w: &GraphWindow, vs: &[usize]) -> VertexSet {
        VertexSet::new(w, vs.iter().copied()).unwrap()
    }

    #[test]
    fn hypercubic_counts() {
        let w = GraphWindow::hypercubic(2, 3).unwrap();
        assert_eq!(w.num_vertices(), 9);
        assert_eq!(w.num_edges(), 12);
        assert_eq!(w.boundary_vertices().len(), 8);
        assert_eq!(w.origin(), 4);

        let w = GraphWindow::hypercubic(1, 2).unwrap();
        assert_eq!(w.num_vertices(), 2);
        assert_eq!(w.num_edges(), 1);
        assert_eq!(w.boundary_vertices(), &[0, 1]);

        for (d, l) in [(1, 7), (2, 5), (3, 4), (4, 3)] {
            let w = GraphWindow::hypercubic(d, l).unwrap();
            assert_eq!(w.num_edges(), d * l.pow(d as u32 - 1) * (l - 1));
        }
    }

    #[test]
    fn tree_counts() {
        let w = GraphWindow::regular_tree(3, 2).unwrap();
        assert_eq!(w.num_vertices(), 10);
        assert_eq!(w.num_edges(), 9);
        assert_eq!(w.boundary_vertices().len(), 6);
        assert_eq!(w.degree(0), 3);
        assert!(w.boundary_vertices().iter().all(|&v| w.degree(v) == 1));
    }

    #[test]
    fn product_of_paths_is_grid() {
        let w = GraphWindow::build(&Family::product(
            Family::hypercubic(1, 2),
            Family::hypercubic(1, 3),
        ))
        .unwrap();
        assert_eq!(w.num_vertices(), 6);
        assert_eq!(w.num_edges(), 7);
        assert_eq!(w.infinite_degree(), 4);
        assert_eq!(w.vertex_at(&[1, 2]), Some(5));
        assert_eq!(w.coordinates(5), Some(vec![1, 2]));
    }

    #[test]
    fn invalid_params_name_field() {
        let err = GraphWindow::hypercubic(2, 1).unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "side"));
        let err = GraphWindow::hypercubic(0, 4).unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "dim"));
        let err = GraphWindow::regular_tree(2, 3).unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "degree"));
        let err = GraphWindow::regular_tree(3, 0).unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "radius"));
    }

    #[test]
    fn edges_are_lexicographic() {
        for w in [
            GraphWindow::hypercubic(3, 4).unwrap(),
            GraphWindow::regular_tree(4, 3).unwrap(),
        ] {
            assert!(w.edges().windows(2).all(|p| p[0] < p[1]));
            assert!(w.edges().iter().all(|&(a, b)| a < b));
        }
    }

    #[test]
    fn boundary_vertices_miss_a_neighbor() {
        for w in [
            GraphWindow::hypercubic(2, 2).unwrap(),
            GraphWindow::hypercubic(3, 5).unwrap(),
            GraphWindow::regular_tree(3, 3).unwrap(),
        ] {
            for &b in w.boundary_vertices() {
                assert!(w.degree(b) < w.infinite_degree());
            }
        }
    }

    #[test]
    fn center_boundary_sets() {
        let w = GraphWindow::hypercubic(2, 3).unwrap();
        let all = set(&w, &(0..9).collect::<Vec<_>>());
        assert!(w.edge_boundary(&all).unwrap().is_empty());
        assert_eq!(w.touching_edges(&all).unwrap().len(), 12);

        let center = set(&w, &[4]);
        assert_eq!(w.edge_boundary(&center).unwrap().len(), 4);
        assert_eq!(w.touching_edges(&center).unwrap().len(), 4);

        // vertex 5 sits on the window boundary and has degree 3 here
        let pair = set(&w, &[4, 5]);
        assert_eq!(w.edge_boundary(&pair).unwrap().len(), 5);
        assert_eq!(w.touching_edges(&pair).unwrap().len(), 6);
        let w5 = GraphWindow::hypercubic(2, 5).unwrap();
        let pair = set(&w5, &[12, 13]);
        assert_eq!(w5.edge_boundary(&pair).unwrap().len(), 6);
        assert_eq!(w5.touching_edges(&pair).unwrap().len(), 7);

        assert!(matches!(
            w.edge_boundary(&VertexSet::empty()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn oriented_boundary_points_outward() {
        let w = GraphWindow::hypercubic(2, 5).unwrap();
        let s = w.ball(w.origin(), 1).unwrap();
        let oriented = w.oriented_edge_boundary(&s).unwrap();
        assert_eq!(oriented.len(), 12);
        for oe in &oriented {
            assert!(s.contains(oe.tail) && !s.contains(oe.head));
            assert_eq!(w.edge_between(oe.tail, oe.head), Some(oe.edge));
        }
    }

    #[test]
    fn degree_volume_examples() {
        let w = GraphWindow::hypercubic(2, 3).unwrap();
        assert_eq!(w.degree_volume(&set(&w, &[4])), 4);
        let w5 = GraphWindow::hypercubic(2, 5).unwrap();
        let c = w5.origin();
        assert_eq!(w5.degree_volume(&set(&w5, &[c, c + 1])), 8);
        let all = set(&w, &(0..9).collect::<Vec<_>>());
        assert_eq!(w.degree_volume(&all), 2 * w.num_edges());
    }

    #[test]
    fn connectivity_examples() {
        let w = GraphWindow::hypercubic(2, 3).unwrap();
        assert!(w.is_connected_set(&set(&w, &[0])).unwrap());
        assert!(!w.is_connected_set(&set(&w, &[0, 8])).unwrap());
        let w = GraphWindow::hypercubic(3, 5).unwrap();
        for r in 0..4 {
            assert!(w.is_connected_set(&w.ball(w.origin(), r).unwrap()).unwrap());
        }
    }

    #[test]
    fn boundary_distance_and_override() {
        let w = GraphWindow::hypercubic(2, 9).unwrap();
        assert_eq!(w.boundary_distance(w.origin()), 4);
        let w = GraphWindow::hypercubic(2, 2)
            .unwrap()
            .with_boundary(&[3])
            .unwrap();
        assert_eq!(w.boundary_vertices(), &[3]);
        assert_eq!(w.boundary_distance(0), 2);
    }

    #[test]
    fn construction_is_deterministic() {
        let a = GraphWindow::hypercubic(3, 4).unwrap();
        let b = GraphWindow::hypercubic(3, 4).unwrap();
        assert_eq!(a.edges(), b.edges());
        assert_eq!(a.boundary_vertices(), b.boundary_vertices());
    }
}
