//! Exact values by exhaustive enumeration on small windows.
//!
//! These routines sum over all `2^M` configurations (or all `3^M` joint
//! states of a two-level coupling) with their exact probabilities. They use
//! the partition and breadth-first code paths rather than the local searches
//! used by the Monte Carlo estimators, so the two can be compared.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{GraphWindow, VertexSet};
use crate::percolation::{clusters, Configuration, OpenEdges};

/// Largest edge count for `2^M` enumeration.
pub const MAX_EDGES: usize = 20;
/// Largest edge count for `3^M` enumeration.
pub const MAX_EDGES_COUPLED: usize = 12;

fn guard(window: &GraphWindow, limit: usize) -> Result<()> {
    if window.num_edges() > limit {
        return Err(Error::Refused(format!(
            "exhaustive enumeration over {} edges exceeds the limit of {limit}",
            window.num_edges()
        )));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "percolation level {p} outside [0, 1]"
        )))
    }
}

/// Calls `f(config, probability)` for every configuration with positive
/// probability.
pub fn for_each_configuration<F>(window: &GraphWindow, p: f64, mut f: F) -> Result<()>
where
    F: FnMut(&Configuration, f64),
{
    guard(window, MAX_EDGES)?;
    check_p(p)?;
    let m = window.num_edges();
    for bits in 0u64..(1u64 << m) {
        let open = bits.count_ones() as i32;
        let prob = p.powi(open) * (1.0 - p).powi(m as i32 - open);
        if prob == 0.0 {
            continue;
        }
        let config = Configuration::from_open((0..m).map(|e| bits >> e & 1 == 1), p);
        f(&config, prob);
    }
    Ok(())
}

/// Calls `f(lower, upper, probability)` for every joint state of the
/// coupling at `p₁ < p₂` with positive probability.
pub fn for_each_coupled<F>(window: &GraphWindow, p1: f64, p2: f64, mut f: F) -> Result<()>
where
    F: FnMut(&Configuration, &Configuration, f64),
{
    guard(window, MAX_EDGES_COUPLED)?;
    if !(0.0 <= p1 && p1 <= p2 && p2 <= 1.0) {
        return Err(Error::domain(format!(
            "need 0 ≤ p1 ≤ p2 ≤ 1, got {p1}, {p2}"
        )));
    }
    let m = window.num_edges();
    let weights = [p1, p2 - p1, 1.0 - p2];
    let total = 3u64.pow(m as u32);
    let mut states = vec![0u8; m];
    for code in 0..total {
        let mut c = code;
        let mut prob = 1.0;
        for s in states.iter_mut() {
            *s = (c % 3) as u8;
            c /= 3;
            prob *= weights[*s as usize];
        }
        if prob == 0.0 {
            continue;
        }
        let lower = Configuration::from_open(states.iter().map(|&s| s == 0), p1);
        let upper = Configuration::from_open(states.iter().map(|&s| s <= 1), p2);
        f(&lower, &upper, prob);
    }
    Ok(())
}

/// `P_p(S ↮ ∞)`.
pub fn disconnect_prob(window: &GraphWindow, set: &VertexSet, p: f64) -> Result<f64> {
    let mut total = 0.0;
    for_each_configuration(window, p, |config, prob| {
        let part = clusters(window, config);
        if !set.iter().any(|v| part.is_pseudo_infinite(v)) {
            total += prob;
        }
    })?;
    Ok(total)
}

/// Number of `e ∈ ∂_E^→S` whose head joins the boundary by an open path
/// avoiding `S`, computed from the partition of the configuration with every
/// edge touching `S` removed.
pub fn escaping_count(window: &GraphWindow, config: &Configuration, set: &VertexSet) -> usize {
    let n = window.num_vertices();
    let inside = set.mask(n);
    let pruned = Configuration::from_open(
        window
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(a, b))| config.is_open(e) && !inside[a] && !inside[b]),
        config.level(),
    );
    let part = clusters(window, &pruned);
    set.iter()
        .flat_map(|v| window.neighbors(v))
        .filter(|nb| !inside[nb.vertex] && part.is_pseudo_infinite(nb.vertex))
        .count()
}

/// `Ψ_p(S) = Σ_{e∈∂_E^→S} P_p(e⁺ ↔ ∞ off S)`.
pub fn psi_sum(window: &GraphWindow, set: &VertexSet, p: f64) -> Result<f64> {
    let mut total = 0.0;
    for_each_configuration(window, p, |config, prob| {
        total += prob * escaping_count(window, config, set) as f64;
    })?;
    Ok(total)
}

/// Exact cluster laws of `v` up to `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterLaw {
    /// `size_tail[n] = P(n ≤ |K_v| < ∞)` for `n = 0..=n_max`.
    pub size_tail: Vec<f64>,
    /// `edge_pmf[n] = P(|E(K_v)| = n, |K_v| < ∞)` for `n = 0..=n_max`.
    pub edge_pmf: Vec<f64>,
}

pub fn cluster_law(window: &GraphWindow, v: usize, p: f64, n_max: usize) -> Result<ClusterLaw> {
    check_vertex(window, v)?;
    let mut size_tail = vec![0.0; n_max + 1];
    let mut edge_pmf = vec![0.0; n_max + 1];
    for_each_configuration(window, p, |config, prob| {
        let part = clusters(window, config);
        if part.is_pseudo_infinite(v) {
            return;
        }
        let size = part.cluster_size(v);
        for slot in size_tail.iter_mut().take(size.min(n_max) + 1) {
            *slot += prob;
        }
        let edges = part.edge_count(v);
        if edges <= n_max {
            edge_pmf[edges] += prob;
        }
    })?;
    Ok(ClusterLaw {
        size_tail,
        edge_pmf,
    })
}

fn check_vertex(window: &GraphWindow, v: usize) -> Result<()> {
    if v >= window.num_vertices() {
        return Err(Error::domain(format!("vertex {v} is not in the window")));
    }
    Ok(())
}

fn tau_from_partition(window: &GraphWindow, members: &VertexSet, infinite: &[bool]) -> usize {
    members
        .iter()
        .flat_map(|u| window.neighbors(u))
        .filter(|nb| !members.contains(nb.vertex) && infinite[nb.vertex])
        .count()
}

/// `P(|K_{v,p₂}| < ∞ ∧ τ(K_{v,p₂}, K_{∞,p₁}) ≥ n)` for `n = 0..=n_max`.
pub fn repulsion_tail(
    window: &GraphWindow,
    v: usize,
    p1: f64,
    p2: f64,
    n_max: usize,
) -> Result<Vec<f64>> {
    check_vertex(window, v)?;
    let mut tail = vec![0.0; n_max + 1];
    for_each_coupled(window, p1, p2, |lower, upper, prob| {
        let up = clusters(window, upper);
        if up.is_pseudo_infinite(v) {
            return;
        }
        let low = clusters(window, lower);
        let tau = tau_from_partition(window, &up.members(v), &low.infinite_mask());
        for slot in tail.iter_mut().take(tau.min(n_max) + 1) {
            *slot += prob;
        }
    })?;
    Ok(tail)
}

/// `P(|K_v| < ∞ ∧ |E(K_v)| ≤ m ∧ τ(K_v, K_∞) ≥ n)` for each `(m, n)`.
pub fn azuma_tail(
    window: &GraphWindow,
    v: usize,
    p: f64,
    pairs: &[(usize, usize)],
) -> Result<Vec<f64>> {
    check_vertex(window, v)?;
    let mut out = vec![0.0; pairs.len()];
    for_each_configuration(window, p, |config, prob| {
        let part = clusters(window, config);
        if part.is_pseudo_infinite(v) {
            return;
        }
        let edges = part.edge_count(v);
        let tau = tau_from_partition(window, &part.members(v), &part.infinite_mask());
        for (slot, &(m, n)) in out.iter_mut().zip(pairs) {
            if edges <= m && tau >= n {
                *slot += prob;
            }
        }
    })?;
    Ok(out)
}

fn connected_after_removal(
    window: &GraphWindow,
    config: &Configuration,
    set: &VertexSet,
    removed: &[usize],
) -> bool {
    let pruned = Configuration::from_open(
        (0..window.num_edges()).map(|e| config.is_open(e) && !removed.contains(&e)),
        config.level(),
    );
    let part = clusters(window, &pruned);
    set.iter().any(|v| part.is_pseudo_infinite(v))
}

/// Whether `S ↔ ∞` survives the removal of every set of at most `r` edges,
/// checked by trying all such sets.
pub fn robust_by_removal(
    window: &GraphWindow,
    config: &Configuration,
    set: &VertexSet,
    r: usize,
) -> bool {
    let open: Vec<usize> = (0..window.num_edges())
        .filter(|&e| config.is_open(e))
        .collect();
    let mut chosen = Vec::with_capacity(r);
    fn rec(
        window: &GraphWindow,
        config: &Configuration,
        set: &VertexSet,
        open: &[usize],
        start: usize,
        left: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if !connected_after_removal(window, config, set, chosen) {
            return false;
        }
        if left == 0 {
            return true;
        }
        for i in start..open.len() {
            chosen.push(open[i]);
            let ok = rec(window, config, set, open, i + 1, left - 1, chosen);
            chosen.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    rec(window, config, set, &open, 0, r, &mut chosen)
}

/// `P_p(I_r(S ↔ ∞))` from the edge-removal definition.
pub fn ir_prob(window: &GraphWindow, set: &VertexSet, p: f64, r: usize) -> Result<f64> {
    let mut total = 0.0;
    for_each_configuration(window, p, |config, prob| {
        if robust_by_removal(window, config, set, r) {
            total += prob;
        }
    })?;
    Ok(total)
}

/// Largest total-variation distance, over values of `K_{∞,p₁}`, between the
/// conditional law of the `p₂`-states of edges inside `V ∖ K_{∞,p₁}` and
/// independent Bernoulli(`p₂`).
pub fn conditional_law_distance(window: &GraphWindow, p1: f64, p2: f64) -> Result<f64> {
    let n = window.num_vertices();
    // K_∞ mask -> (its probability, joint law of the inner p₂-states)
    type Law = HashMap<Vec<bool>, f64>;
    let mut groups: HashMap<Vec<bool>, (f64, Law)> = HashMap::new();
    for_each_coupled(window, p1, p2, |lower, upper, prob| {
        let infinite = clusters(window, lower).infinite_mask();
        let states: Vec<bool> = window
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| !infinite[a] && !infinite[b])
            .map(|(e, _)| upper.is_open(e))
            .collect();
        let group = groups.entry(infinite).or_default();
        group.0 += prob;
        *group.1.entry(states).or_default() += prob;
    })?;
    let mut worst: f64 = 0.0;
    for (infinite, (mass, law)) in groups {
        let inner = window
            .edges()
            .iter()
            .filter(|&&(a, b)| !infinite[a] && !infinite[b])
            .count();
        debug_assert!(infinite.len() == n);
        let mut tv = 0.0;
        for bits in 0u64..(1u64 << inner) {
            let states: Vec<bool> = (0..inner).map(|i| bits >> i & 1 == 1).collect();
            let k = bits.count_ones() as i32;
            let product = p2.powi(k) * (1.0 - p2).powi(inner as i32 - k);
            let observed = law.get(&states).copied().unwrap_or(0.0) / mass;
            tv += (observed - product).abs();
        }
        worst = worst.max(tv / 2.0);
    }
    Ok(worst)
}

/// Escape probabilities and capacity of `S` by solving the harmonic
/// equations with Gauss–Seidel sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCapacity {
    pub capacity: f64,
    /// `(v, P_v(walk reaches the boundary before returning to S))`.
    pub escape: Vec<(usize, f64)>,
    pub sweeps: usize,
}

pub fn capacity(window: &GraphWindow, set: &VertexSet, tolerance: f64) -> Result<ExactCapacity> {
    if set.is_empty() {
        return Err(Error::domain("capacity needs a nonempty set"));
    }
    let n = window.num_vertices();
    let inside = set.mask(n);
    // h(u) = P_u(reach boundary ∖ S before S)
    let mut h = vec![0.0; n];
    let free: Vec<usize> = (0..n)
        .filter(|&u| !inside[u] && !window.is_boundary(u))
        .collect();
    for u in 0..n {
        if !inside[u] && window.is_boundary(u) {
            h[u] = 1.0;
        }
    }
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        let mut change: f64 = 0.0;
        for &u in &free {
            let nbs = window.neighbors(u);
            let mean = nbs.iter().map(|nb| h[nb.vertex]).sum::<f64>() / nbs.len() as f64;
            change = change.max((mean - h[u]).abs());
            h[u] = mean;
        }
        if change < tolerance || sweeps >= 10_000_000 {
            break;
        }
    }
    let escape: Vec<(usize, f64)> = set
        .iter()
        .map(|v| {
            let nbs = window.neighbors(v);
            (
                v,
                nbs.iter().map(|nb| h[nb.vertex]).sum::<f64>() / nbs.len() as f64,
            )
        })
        .collect();
    let capacity = escape
        .iter()
        .map(|&(v, e)| window.degree(v) as f64 * e)
        .sum();
    Ok(ExactCapacity {
        capacity,
        escape,
        sweeps,
    })
}
