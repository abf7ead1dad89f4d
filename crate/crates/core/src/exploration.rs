//! Edge-by-edge cluster exploration and its martingales.
//!
//! [`explore_cluster`] queries, at each step, the smallest (in the chosen
//! enumeration) unqueried edge touching the revealed part of the cluster of
//! `v`. Each query contributes `1 - p` if the edge is open and `-p` if it is
//! closed; the partial sums form the exploration martingale `Z`.
//!
//! [`explore_off_infinity`] first reveals `K_∞` for free and then explores the
//! cluster of `v` in the complement, giving the martingale `Z̃`. Edges between
//! `K_v` and `K_∞` are never queried in the second stage, which is why
//! `Z̃_T̃ - Z_T = p·τ(K_v, K_∞)`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::GraphWindow;
use crate::percolation::{reachable_off, LabelSource, Threshold};
use crate::VertexSet;

/// Enumeration used to break ties among candidate edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum EdgeOrder {
    /// Smallest edge index first.
    #[default]
    Ascending,
    /// Largest edge index first.
    Descending,
}

/// How an exploration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stopping {
    /// Every edge touching the cluster was queried after `time` steps.
    Stopped { time: usize },
    /// The revealed cluster touched the window boundary.
    Unstopped,
    /// The step horizon was reached first.
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExploreOptions {
    pub order: EdgeOrder,
    /// Abort as soon as a boundary vertex is revealed.
    pub stop_at_boundary: bool,
    /// Maximum number of queries.
    pub horizon: Option<usize>,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            order: EdgeOrder::Ascending,
            stop_at_boundary: true,
            horizon: None,
        }
    }
}

/// Ordered queries and martingale path of one exploration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExplorationTrace {
    pub p: f64,
    pub queried: Vec<usize>,
    /// `1 - p` for an open edge, `-p` for a closed one.
    pub increments: Vec<f64>,
    /// `Z_1, Z_2, ...`
    pub partial_sums: Vec<f64>,
    pub stopping: Stopping,
    /// Vertices revealed, in order.
    pub revealed: Vec<usize>,
}

impl ExplorationTrace {
    fn empty(p: f64) -> Self {
        ExplorationTrace {
            p,
            queried: Vec::new(),
            increments: Vec::new(),
            partial_sums: Vec::new(),
            stopping: Stopping::Stopped { time: 0 },
            revealed: Vec::new(),
        }
    }

    pub fn steps(&self) -> usize {
        self.queried.len()
    }

    /// `T`, when the exploration stopped naturally.
    pub fn stopping_time(&self) -> Option<usize> {
        match self.stopping {
            Stopping::Stopped { time } => Some(time),
            _ => None,
        }
    }

    /// `Z_T`, when the exploration stopped naturally.
    pub fn final_value(&self) -> Option<f64> {
        self.stopping_time().map(|_| self.value_at(usize::MAX))
    }

    /// `Z_{n ∧ steps}`.
    pub fn value_at(&self, n: usize) -> f64 {
        match n.min(self.partial_sums.len()) {
            0 => 0.0,
            k => self.partial_sums[k - 1],
        }
    }

    pub fn open_count(&self) -> usize {
        self.increments.iter().filter(|&&x| x > 0.0).count()
    }

    pub fn closed_count(&self) -> usize {
        self.increments.len() - self.open_count()
    }
}

fn check_p(p: f64) -> Result<()> {
    if 0.0 < p && p < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "exploration needs 0 < p < 1, got {p}"
        )))
    }
}

/// Explores `K_v` in ascending edge order, aborting at the boundary.
pub fn explore_cluster<L: LabelSource + ?Sized>(
    window: &GraphWindow,
    labels: &L,
    p: f64,
    v: usize,
) -> Result<ExplorationTrace> {
    explore_with(window, labels, p, v, ExploreOptions::default(), None)
}

/// General exploration. Edges touching a vertex of `pre_explored` are
/// treated as already queried and never contribute.
pub fn explore_with<L: LabelSource + ?Sized>(
    window: &GraphWindow,
    labels: &L,
    p: f64,
    v: usize,
    options: ExploreOptions,
    pre_explored: Option<&[bool]>,
) -> Result<ExplorationTrace> {
    check_p(p)?;
    if v >= window.num_vertices() {
        return Err(Error::domain(format!("vertex {v} out of range")));
    }
    if pre_explored.is_some_and(|mask| mask[v]) {
        return Ok(ExplorationTrace::empty(p));
    }
    let mut explorer = Explorer {
        window,
        options,
        pre_explored,
        revealed: vec![false; window.num_vertices()],
        queried: vec![false; window.num_edges()],
        heap: BinaryHeap::new(),
        trace: ExplorationTrace::empty(p),
    };
    explorer.run(labels, v);
    Ok(explorer.trace)
}

struct Explorer<'a> {
    window: &'a GraphWindow,
    options: ExploreOptions,
    pre_explored: Option<&'a [bool]>,
    revealed: Vec<bool>,
    queried: Vec<bool>,
    heap: BinaryHeap<Reverse<usize>>,
    trace: ExplorationTrace,
}

impl Explorer<'_> {
    fn key(&self, e: usize) -> usize {
        match self.options.order {
            EdgeOrder::Ascending => e,
            EdgeOrder::Descending => usize::MAX - e,
        }
    }

    fn skipped(&self, e: usize) -> bool {
        self.pre_explored.is_some_and(|mask| {
            let (a, b) = self.window.endpoints(e);
            mask[a] || mask[b]
        })
    }

    /// Reveals `u`; returns false if the exploration must abort.
    fn reveal(&mut self, u: usize) -> bool {
        self.revealed[u] = true;
        self.trace.revealed.push(u);
        for nb in self.window.neighbors(u) {
            if !self.queried[nb.edge] && !self.skipped(nb.edge) {
                let k = self.key(nb.edge);
                self.heap.push(Reverse(k));
            }
        }
        !(self.options.stop_at_boundary && self.window.is_boundary(u))
    }

    fn run<L: LabelSource + ?Sized>(&mut self, labels: &L, v: usize) {
        let p = self.trace.p;
        if !self.reveal(v) {
            self.trace.stopping = Stopping::Unstopped;
            return;
        }
        let mut sum = 0.0;
        while let Some(Reverse(k)) = self.heap.pop() {
            let e = self.key(k);
            if self.queried[e] {
                continue;
            }
            if self
                .options
                .horizon
                .is_some_and(|h| self.trace.queried.len() >= h)
            {
                self.trace.stopping = Stopping::Truncated;
                return;
            }
            self.queried[e] = true;
            let open = labels.label(e) < p;
            let inc = if open { 1.0 - p } else { -p };
            sum += inc;
            self.trace.queried.push(e);
            self.trace.increments.push(inc);
            self.trace.partial_sums.push(sum);
            if open {
                let (a, b) = self.window.endpoints(e);
                let fresh = if self.revealed[a] { b } else { a };
                if !self.revealed[fresh] && !self.reveal(fresh) {
                    self.trace.stopping = Stopping::Unstopped;
                    return;
                }
            }
        }
        self.trace.stopping = Stopping::Stopped {
            time: self.trace.queried.len(),
        };
    }
}

/// `K_∞` at level `p`: vertices joined to the boundary by open paths.
pub fn infinite_mask<L: LabelSource + ?Sized>(
    window: &GraphWindow,
    labels: &L,
    p: f64,
) -> Vec<bool> {
    reachable_off(window, &Threshold::new(labels, p), &VertexSet::empty())
}

/// The `Z̃` exploration: `K_∞` is revealed first at no cost.
pub fn explore_off_infinity<L: LabelSource + ?Sized>(
    window: &GraphWindow,
    labels: &L,
    p: f64,
    v: usize,
) -> Result<ExplorationTrace> {
    explore_off_infinity_with(window, labels, p, v, EdgeOrder::Ascending)
}

pub fn explore_off_infinity_with<L: LabelSource + ?Sized>(
    window: &GraphWindow,
    labels: &L,
    p: f64,
    v: usize,
    order: EdgeOrder,
) -> Result<ExplorationTrace> {
    check_p(p)?;
    let mask = infinite_mask(window, labels, p);
    let options = ExploreOptions {
        order,
        ..ExploreOptions::default()
    };
    explore_with(window, labels, p, v, options, Some(&mask))
}

/// Maximal Azuma–Hoeffding bound `2·exp(-p²n²/(8m))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AzumaBound {
    pub value: f64,
    /// The bound is at least 1 and says nothing.
    pub vacuous: bool,
}

impl AzumaBound {
    /// The bound clamped to a probability.
    pub fn clamped(&self) -> f64 {
        self.value.min(1.0)
    }
}

pub fn azuma_bound(p: f64, n: usize, m: usize) -> Result<AzumaBound> {
    check_p(p)?;
    if n == 0 || m == 0 {
        return Err(Error::domain("azuma bound needs n, m ≥ 1"));
    }
    let (n, m) = (n as f64, m as f64);
    let value = 2.0 * (-(p * p * n * n) / (8.0 * m)).exp();
    Ok(AzumaBound {
        value,
        vacuous: value >= 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::percolation::{assign_uniforms, clusters, tau, EdgeLabels};

    #[test]
    fn isolated_vertex() {
        let w = GraphWindow::hypercubic(2, 7).unwrap();
        let v = w.origin();
        let labels = EdgeLabels::from_values(vec![0.9; w.num_edges()]).unwrap();
        let t = explore_cluster(&w, &labels, 0.3, v).unwrap();
        assert_eq!(t.stopping_time(), Some(4));
        assert!((t.final_value().unwrap() + 0.3 * 4.0).abs() < 1e-12);
        let queried: Vec<usize> = w.neighbors(v).iter().map(|nb| nb.edge).collect();
        let mut sorted = queried.clone();
        sorted.sort_unstable();
        assert_eq!(t.queried, sorted);
    }

    #[test]
    fn star_with_open_spokes() {
        // K_{1,3} inside the 3-regular tree of radius 2: root plus its children,
        // children's outer edges closed
        let w = GraphWindow::regular_tree(3, 2).unwrap();
        let mut values = vec![0.99; w.num_edges()];
        for nb in w.neighbors(0) {
            values[nb.edge] = 0.0;
        }
        let labels = EdgeLabels::from_values(values).unwrap();
        let p = 0.4;
        let t = explore_cluster(&w, &labels, p, 0).unwrap();
        // 3 open spokes, 6 closed edges to the leaves
        assert_eq!(t.stopping_time(), Some(9));
        assert!((t.final_value().unwrap() - (3.0 * (1.0 - p) - 6.0 * p)).abs() < 1e-12);

        // on the bare star the closed edges do not exist
        let w = GraphWindow::regular_tree(3, 1).unwrap();
        let labels = EdgeLabels::from_values(vec![0.0; 3]).unwrap();
        let opts = ExploreOptions {
            stop_at_boundary: false,
            ..ExploreOptions::default()
        };
        let t = explore_with(&w, &labels, p, 0, opts, None).unwrap();
        assert!((t.final_value().unwrap() - 3.0 * (1.0 - p)).abs() < 1e-12);
    }

    #[test]
    fn boundary_aborts() {
        let w = GraphWindow::hypercubic(2, 5).unwrap();
        let labels = EdgeLabels::from_values(vec![0.0; w.num_edges()]).unwrap();
        let t = explore_cluster(&w, &labels, 0.5, w.origin()).unwrap();
        assert_eq!(t.stopping, Stopping::Unstopped);
        assert_eq!(t.final_value(), None);
        let t = explore_off_infinity(&w, &labels, 0.5, w.origin()).unwrap();
        assert_eq!(t.stopping_time(), Some(0));
        assert_eq!(t.final_value(), Some(0.0));
    }

    #[test]
    fn identities_hold_per_sample() {
        let w = GraphWindow::hypercubic(2, 16).unwrap();
        let v = w.origin();
        let p = 0.55;
        let mut finite = 0;
        for s in 0..400 {
            let labels = assign_uniforms(&w, 8, s);
            let z = explore_cluster(&w, &labels, p, v).unwrap();
            let zt = explore_off_infinity(&w, &labels, p, v).unwrap();
            let part = clusters(&w, &labels.threshold(p).unwrap());
            let Some(zt_final) = z.final_value() else {
                assert!(part.is_pseudo_infinite(v));
                assert_eq!(zt.final_value(), Some(0.0));
                continue;
            };
            finite += 1;
            let k = part.members(v);
            let touching = w.touching_edges(&k).unwrap();
            let open = touching.iter().filter(|&&e| labels.label(e) < p).count();
            let closed = touching.len() - open;
            let expected = (1.0 - p) * open as f64 - p * closed as f64;
            assert!((zt_final - expected).abs() < 1e-9);
            assert_eq!(z.stopping_time(), Some(touching.len()));

            let inf = VertexSet::new(
                &w,
                (0..w.num_vertices()).filter(|&u| part.is_pseudo_infinite(u)),
            )
            .unwrap();
            let tau_v = tau(&w, &k, &inf).unwrap();
            let diff = zt.final_value().unwrap() - zt_final;
            assert!((diff - p * tau_v as f64).abs() < 1e-9);

            let rev = explore_with(
                &w,
                &labels,
                p,
                v,
                ExploreOptions {
                    order: EdgeOrder::Descending,
                    ..ExploreOptions::default()
                },
                None,
            )
            .unwrap();
            assert!((rev.final_value().unwrap() - zt_final).abs() < 1e-9);
        }
        assert!(finite > 20);
    }

    #[test]
    fn increments_are_bounded_and_edges_distinct() {
        let w = GraphWindow::hypercubic(2, 12).unwrap();
        for s in 0..50 {
            let labels = assign_uniforms(&w, 1, s);
            let t = explore_with(
                &w,
                &labels,
                0.5,
                w.origin(),
                ExploreOptions {
                    stop_at_boundary: false,
                    ..ExploreOptions::default()
                },
                None,
            )
            .unwrap();
            let mut q = t.queried.clone();
            q.sort_unstable();
            q.dedup();
            assert_eq!(q.len(), t.queried.len());
            assert!(t.increments.iter().all(|x| x.abs() <= 0.5 + 1e-15));
        }
    }

    #[test]
    fn azuma_examples() {
        let b = azuma_bound(0.5, 8, 2).unwrap();
        assert!((b.value - 2.0 * (-1.0f64).exp()).abs() < 1e-12);
        assert!((b.value - 0.7358).abs() < 1e-4);
        assert!(!b.vacuous);
        let b = azuma_bound(0.5, 2, 4).unwrap();
        assert!(b.vacuous);
        assert!(b.value >= 2.0 * (-0.25f64 / 8.0).exp() - 1e-12);
        assert_eq!(b.clamped(), 1.0);
        let b = azuma_bound(0.5, 3, usize::MAX).unwrap();
        assert!((b.value - 2.0).abs() < 1e-12);
        assert!(azuma_bound(0.5, 0, 1).is_err());
        assert!(azuma_bound(1.0, 1, 1).is_err());
    }
}
