//! Local open-cluster searches with reusable scratch space.
//!
//! A search grows the open component of its sources, optionally avoiding a
//! blocked vertex set. When only "does it reach the boundary?" matters, the
//! frontier is expanded greedily toward the boundary, which answers quickly for
//! large clusters while still exhausting finite ones.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::graph::GraphWindow;

use super::labels::OpenEdges;

/// Result of a component search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reach {
    /// A boundary vertex was reached.
    Boundary,
    /// The component was exhausted without meeting the boundary.
    Finite,
}

/// Scratch buffers for repeated searches on one window.
#[derive(Debug, Clone)]
pub struct SearchScratch {
    stamp: Vec<u32>,
    current: u32,
    floor: u32,
    outcomes: Vec<bool>,
    heap: BinaryHeap<Reverse<(usize, usize)>>,
    visited: Vec<usize>,
}

impl SearchScratch {
    pub fn new(window: &GraphWindow) -> Self {
        SearchScratch {
            stamp: vec![0; window.num_vertices()],
            current: 0,
            floor: 1,
            outcomes: Vec::new(),
            heap: BinaryHeap::new(),
            visited: Vec::new(),
        }
    }

    /// Forgets all memoized outcomes; call when the configuration or the
    /// blocked set changes.
    pub fn reset(&mut self) {
        if self.current > u32::MAX - 1024 {
            self.stamp.fill(0);
            self.current = 0;
        }
        self.floor = self.current + 1;
        self.outcomes.clear();
    }

    /// Outcome of an earlier search since the last reset that visited `v`.
    pub fn known(&self, v: usize) -> Option<Reach> {
        let s = self.stamp[v];
        (s >= self.floor).then(|| {
            if self.outcomes[(s - self.floor) as usize] {
                Reach::Boundary
            } else {
                Reach::Finite
            }
        })
    }

    /// Whether `v` was visited by the most recent search.
    pub fn in_last(&self, v: usize) -> bool {
        self.stamp[v] == self.current && self.current >= self.floor
    }

    /// Vertices visited by the most recent search, in visiting order.
    pub fn visited(&self) -> &[usize] {
        &self.visited
    }

    /// Grows the open component of `sources` avoiding `blocked` vertices.
    ///
    /// With `stop_at_boundary` the search halts at the first boundary vertex;
    /// otherwise the whole component is visited.
    pub fn search<O, B>(
        &mut self,
        window: &GraphWindow,
        open: &O,
        sources: &[usize],
        blocked: B,
        stop_at_boundary: bool,
    ) -> Reach
    where
        O: OpenEdges + ?Sized,
        B: Fn(usize) -> bool,
    {
        self.current += 1;
        let stamp = self.current;
        self.visited.clear();
        self.heap.clear();
        let mut reach = Reach::Finite;
        for &s in sources {
            if self.stamp[s] != stamp {
                self.stamp[s] = stamp;
                self.visited.push(s);
                self.heap.push(Reverse((window.boundary_distance(s), s)));
            }
        }
        while let Some(Reverse((_, u))) = self.heap.pop() {
            if window.is_boundary(u) {
                reach = Reach::Boundary;
                if stop_at_boundary {
                    break;
                }
            }
            for nb in window.neighbors(u) {
                let w = nb.vertex;
                if self.stamp[w] != stamp && !blocked(w) && open.is_open(nb.edge) {
                    self.stamp[w] = stamp;
                    self.visited.push(w);
                    self.heap.push(Reverse((window.boundary_distance(w), w)));
                }
            }
        }
        self.outcomes.push(reach == Reach::Boundary);
        reach
    }

    /// Like [`search`](Self::search) but first consults memoized outcomes for
    /// a single source.
    pub fn reaches_boundary<O, B>(
        &mut self,
        window: &GraphWindow,
        open: &O,
        source: usize,
        blocked: B,
    ) -> bool
    where
        O: OpenEdges + ?Sized,
        B: Fn(usize) -> bool,
    {
        if let Some(known) = self.known(source) {
            return known == Reach::Boundary;
        }
        self.search(window, open, &[source], blocked, true) == Reach::Boundary
    }
}

/// Finite-cluster summary produced by [`cluster_of`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCluster {
    pub vertices: Vec<usize>,
    /// `|E(K)|`: edges touching the cluster.
    pub touching_edges: usize,
}

/// The open cluster of `v` if it avoids the boundary, `None` if pseudo-infinite.
pub fn cluster_of<O: OpenEdges + ?Sized>(
    window: &GraphWindow,
    open: &O,
    v: usize,
    scratch: &mut SearchScratch,
) -> Option<FiniteCluster> {
    if scratch.search(window, open, &[v], |_| false, true) == Reach::Boundary {
        return None;
    }
    let vertices = scratch.visited().to_vec();
    let mut degree_sum = 0;
    let mut internal_twice = 0;
    for &u in &vertices {
        degree_sum += window.degree(u);
        internal_twice += window
            .neighbors(u)
            .iter()
            .filter(|nb| scratch.in_last(nb.vertex))
            .count();
    }
    Some(FiniteCluster {
        vertices,
        touching_edges: degree_sum - internal_twice / 2,
    })
}
