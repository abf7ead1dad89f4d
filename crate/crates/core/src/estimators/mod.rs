//! Monte Carlo estimators with confidence intervals and bound verdicts.
//!
//! Sample `s` of an experiment with master seed `seed` always uses the labels
//! `(seed, s)`, so estimates at different levels `p`, and different
//! estimators run with the same seed, are coupled sample by sample.

mod capacity;
mod identities;
pub mod runner;

pub use capacity::{est_capacity, est_capacity_green, CapacityEstimate};
pub use identities::{
    check_exploration_identities, check_hull_menger, IdentityCheck, IDENTITY_TOLERANCE,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exploration::{explore_cluster, Stopping};
use crate::graph::{Family, GraphWindow, VertexSet};
use crate::isoperimetry::{bad_set_search, BadSetThreshold};
use crate::percolation::{
    assign_uniforms, cluster_of, count_edge_disjoint_paths, tau_to_infinity, LazyLabels, Reach,
    Scratch, SearchScratch,
};
use crate::stats::{proportion_se, wilson_interval, z_for_level, Moments};
use runner::{add_counts, fold_samples};

/// Sample count, seed and interval level shared by the estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct McSettings {
    pub samples: u64,
    pub seed: u64,
    pub ci_level: f64,
    /// Copied into every result for provenance.
    pub config_hash: String,
}

impl McSettings {
    pub fn new(samples: u64, seed: u64) -> Self {
        McSettings {
            samples,
            seed,
            ci_level: 0.99,
            config_hash: String::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::domain("at least one sample is required"));
        }
        z_for_level(self.ci_level).map(|_| ())
    }

    fn z(&self) -> f64 {
        z_for_level(self.ci_level).expect("validated level")
    }
}

/// A point estimate with a two-sided confidence interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MCResult {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub standard_error: f64,
    pub samples: u64,
    /// Number of successes, for indicator estimands.
    pub successes: Option<u64>,
    pub seed: u64,
    pub config_hash: String,
    pub warnings: Vec<String>,
}

impl MCResult {
    /// Frequency of `successes` in `settings.samples` trials with a Wilson
    /// interval.
    pub fn proportion(successes: u64, settings: &McSettings) -> Self {
        Self::proportion_of(successes, settings.samples, settings)
    }

    fn proportion_of(successes: u64, trials: u64, settings: &McSettings) -> Self {
        let (ci_low, ci_high) = wilson_interval(successes, trials, settings.z());
        MCResult {
            estimate: if trials == 0 {
                0.0
            } else {
                successes as f64 / trials as f64
            },
            ci_low,
            ci_high,
            standard_error: proportion_se(successes, trials),
            samples: trials,
            successes: Some(successes),
            seed: settings.seed,
            config_hash: settings.config_hash.clone(),
            warnings: Vec::new(),
        }
    }

    /// Sample mean with a normal interval clipped to `range`.
    pub fn mean(moments: &Moments, settings: &McSettings, range: (f64, f64)) -> Self {
        let estimate = moments.mean();
        let se = moments.standard_error();
        Self::normal(estimate, se, moments.count, settings, range)
    }

    fn normal(
        estimate: f64,
        se: f64,
        samples: u64,
        settings: &McSettings,
        range: (f64, f64),
    ) -> Self {
        let half = settings.z() * se;
        MCResult {
            estimate,
            ci_low: (estimate - half).max(range.0).min(estimate),
            ci_high: (estimate + half).min(range.1).max(estimate),
            standard_error: se,
            samples,
            successes: None,
            seed: settings.seed,
            config_hash: settings.config_hash.clone(),
            warnings: Vec::new(),
        }
    }

    fn warn(mut self, warning: Option<String>) -> Self {
        self.warnings.extend(warning);
        self
    }
}

/// Which side of the bound the estimate should lie on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Violated,
    /// The bound carries no information for a probability.
    Vacuous,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Violated => "violated",
            Verdict::Vacuous => "vacuous",
        }
    }
}

/// Comparison of an estimated probability with a proved bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundVerdict {
    pub check: String,
    pub parameter: String,
    pub bound: f64,
    /// Standard error of the bound when it is itself estimated.
    pub bound_se: f64,
    pub estimate: MCResult,
    pub direction: Direction,
    /// Distance from the estimate to the bound, positive on the proved side.
    pub slack: f64,
    pub verdict: Verdict,
    pub caveat: Option<String>,
}

impl BoundVerdict {
    /// Verdict for a probability estimate. "Violated" requires the interval
    /// of the estimate to exclude the bound widened by its own interval.
    pub fn probability(
        check: impl Into<String>,
        parameter: impl Into<String>,
        bound: f64,
        bound_se: f64,
        direction: Direction,
        estimate: MCResult,
        ci_level: f64,
    ) -> Result<Self> {
        let z = z_for_level(ci_level)?;
        let (slack, vacuous, violated) = match direction {
            Direction::AtMost => (
                bound - estimate.estimate,
                bound > 1.0,
                estimate.ci_low > bound + z * bound_se,
            ),
            Direction::AtLeast => (
                estimate.estimate - bound,
                bound < 0.0,
                estimate.ci_high < bound - z * bound_se,
            ),
        };
        let verdict = if violated {
            Verdict::Violated
        } else if vacuous {
            Verdict::Vacuous
        } else {
            Verdict::Consistent
        };
        Ok(BoundVerdict {
            check: check.into(),
            parameter: parameter.into(),
            bound,
            bound_se,
            estimate,
            direction,
            slack,
            verdict,
            caveat: None,
        })
    }

    pub fn with_caveat(mut self, caveat: impl Into<String>) -> Self {
        self.caveat = Some(caveat.into());
        self
    }

    /// Whether the estimate is on the proved side up to `k` combined
    /// standard errors.
    pub fn within(&self, k: f64) -> bool {
        let se = self.estimate.standard_error.hypot(self.bound_se);
        match self.direction {
            Direction::AtMost => self.estimate.estimate <= self.bound + k * se,
            Direction::AtLeast => self.estimate.estimate >= self.bound - k * se,
        }
    }
}

fn check_level(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "percolation level {p} outside [0, 1]"
        )))
    }
}

fn check_vertex(window: &GraphWindow, v: usize) -> Result<()> {
    if v >= window.num_vertices() {
        return Err(Error::domain(format!("vertex {v} is not in the window")));
    }
    Ok(())
}

fn check_set(window: &GraphWindow, set: &VertexSet) -> Result<()> {
    if set.is_empty() {
        return Err(Error::domain("the vertex set is empty"));
    }
    match set.members().last() {
        Some(&v) if v >= window.num_vertices() => {
            Err(Error::domain(format!("vertex {v} is not in the window")))
        }
        _ => Ok(()),
    }
}

/// Warning when `set` is within half the window depth of the boundary.
pub fn margin_warning(window: &GraphWindow, set: &VertexSet) -> Option<String> {
    let depth = (0..window.num_vertices())
        .map(|u| window.boundary_distance(u))
        .max()?;
    let margin = window.margin(set)?;
    (2 * margin < depth).then(|| {
        format!(
            "set lies {margin} steps from the window boundary (window depth {depth}); \
             truncation bias may be large"
        )
    })
}

/// `P_p(S ↮ ∞)`: no vertex of `S` is joined to the boundary.
pub fn est_disconnect_prob(
    window: &GraphWindow,
    set: &VertexSet,
    p: f64,
    settings: &McSettings,
) -> Result<MCResult> {
    settings.validate()?;
    check_level(p)?;
    check_set(window, set)?;
    let sources = set.members();
    let hits = fold_samples(
        settings.samples,
        || SearchScratch::new(window),
        |scratch, acc: &mut u64, s| {
            scratch.reset();
            let labels = LazyLabels::new(settings.seed, s);
            if scratch.search(window, &labels.at(p), sources, |_| false, true) == Reach::Finite {
                *acc += 1;
            }
            Ok(())
        },
        |a, b| *a += b,
    )?;
    Ok(MCResult::proportion(hits, settings).warn(margin_warning(window, set)))
}

/// `Ψ_p(S)`: mean number of outward edges of `S` whose head is joined to
/// the boundary by an open path avoiding `S`.
pub fn est_psi_sum(
    window: &GraphWindow,
    set: &VertexSet,
    p: f64,
    settings: &McSettings,
) -> Result<MCResult> {
    settings.validate()?;
    check_level(p)?;
    check_set(window, set)?;
    let heads: Vec<usize> = window
        .oriented_edge_boundary(set)?
        .iter()
        .map(|oe| oe.head)
        .collect();
    let inside = set.mask(window.num_vertices());
    let moments = fold_samples(
        settings.samples,
        || SearchScratch::new(window),
        |scratch, acc: &mut Moments, s| {
            scratch.reset();
            let labels = LazyLabels::new(settings.seed, s);
            let open = labels.at(p);
            let count = heads
                .iter()
                .filter(|&&h| scratch.reaches_boundary(window, &open, h, |u| inside[u]))
                .count();
            acc.push(count as f64);
            Ok(())
        },
        |a, b| a.merge(&b),
    )?;
    Ok(
        MCResult::mean(&moments, settings, (0.0, heads.len() as f64))
            .warn(margin_warning(window, set)),
    )
}

/// Cluster-size tail and edge-count law of `K_v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterTail {
    /// `P(n ≤ |K_v| < ∞)` per requested `n`.
    pub size_tail: Vec<(usize, MCResult)>,
    /// `P(|E(K_v)| = n, |K_v| < ∞)` per requested `n`.
    pub edge_pmf: Vec<(usize, MCResult)>,
    /// `P(|K_v| < ∞)`.
    pub finite: MCResult,
}

pub fn est_cluster_tail(
    window: &GraphWindow,
    v: usize,
    p: f64,
    n_grid: &[usize],
    settings: &McSettings,
) -> Result<ClusterTail> {
    settings.validate()?;
    check_level(p)?;
    check_vertex(window, v)?;
    let cap = n_grid.iter().copied().max().unwrap_or(0) + 1;
    // bins 0..cap for sizes, cap for larger sizes; then edge counts 0..cap
    let counts = fold_samples(
        settings.samples,
        || SearchScratch::new(window),
        |scratch, acc: &mut Vec<u64>, s| {
            if acc.is_empty() {
                acc.resize(2 * cap + 1, 0);
            }
            scratch.reset();
            let labels = LazyLabels::new(settings.seed, s);
            if let Some(cluster) = cluster_of(window, &labels.at(p), v, scratch) {
                acc[cluster.vertices.len().min(cap)] += 1;
                if cluster.touching_edges < cap {
                    acc[cap + 1 + cluster.touching_edges] += 1;
                }
            }
            Ok(())
        },
        add_counts,
    )?;
    let counts = if counts.is_empty() {
        vec![0; 2 * cap + 1]
    } else {
        counts
    };
    let finite: u64 = counts[..=cap].iter().sum();
    let warning = margin_warning(window, &VertexSet::singleton(window, v)?);
    let size_tail = n_grid
        .iter()
        .map(|&n| {
            let hits: u64 = counts[n.min(cap)..=cap].iter().sum();
            (
                n,
                MCResult::proportion(hits, settings).warn(warning.clone()),
            )
        })
        .collect();
    let edge_pmf = n_grid
        .iter()
        .map(|&n| {
            (
                n,
                MCResult::proportion(counts[cap + 1 + n], settings).warn(warning.clone()),
            )
        })
        .collect();
    Ok(ClusterTail {
        size_tail,
        edge_pmf,
        finite: MCResult::proportion(finite, settings).warn(warning),
    })
}

fn check_sprinkle(p1: f64, p2: f64) -> Result<()> {
    if !(0.0 < p1 && p1 < p2 && p2 < 1.0) {
        return Err(Error::domain(format!(
            "sprinkling needs 0 < p1 < p2 < 1, got p1 = {p1}, p2 = {p2}"
        )));
    }
    Ok(())
}

/// `P(|K_{v,p₂}| < ∞ ∧ τ(K_{v,p₂}, K_{∞,p₁}) ≥ n)` per requested `n`.
pub fn est_repulsion_tail(
    window: &GraphWindow,
    v: usize,
    p1: f64,
    p2: f64,
    n_grid: &[usize],
    settings: &McSettings,
) -> Result<Vec<(usize, MCResult)>> {
    settings.validate()?;
    check_sprinkle(p1, p2)?;
    check_vertex(window, v)?;
    let cap = n_grid.iter().copied().max().unwrap_or(0);
    let hist = fold_samples(
        settings.samples,
        || Scratch::new(window),
        |scratch, acc: &mut Vec<u64>, s| {
            if acc.is_empty() {
                acc.resize(cap + 1, 0);
            }
            scratch.primary.reset();
            let labels = LazyLabels::new(settings.seed, s);
            let Some(cluster) = cluster_of(window, &labels.at(p2), v, &mut scratch.primary) else {
                return Ok(());
            };
            let tau = tau_to_infinity(
                window,
                &labels,
                p1,
                &cluster.vertices,
                &mut scratch.secondary,
            );
            acc[tau.min(cap)] += 1;
            Ok(())
        },
        add_counts,
    )?;
    let hist = if hist.is_empty() {
        vec![0; cap + 1]
    } else {
        hist
    };
    let warning = margin_warning(window, &VertexSet::singleton(window, v)?);
    Ok(n_grid
        .iter()
        .map(|&n| {
            let hits: u64 = hist[n..].iter().sum();
            (
                n,
                MCResult::proportion(hits, settings).warn(warning.clone()),
            )
        })
        .collect())
}

/// `P(|K_v| < ∞ ∧ |E(K_v)| ≤ m ∧ τ(K_v, K_∞) ≥ n)` for each `(m, n)`, all
/// at the single level `p`.
pub fn est_azuma_tail(
    window: &GraphWindow,
    v: usize,
    p: f64,
    pairs: &[(usize, usize)],
    settings: &McSettings,
) -> Result<Vec<((usize, usize), MCResult)>> {
    settings.validate()?;
    if !(0.0 < p && p < 1.0) {
        return Err(Error::domain(format!("need 0 < p < 1, got {p}")));
    }
    check_vertex(window, v)?;
    let m_max = pairs.iter().map(|&(m, _)| m).max().unwrap_or(0);
    let counts = fold_samples(
        settings.samples,
        || Scratch::new(window),
        |scratch, acc: &mut Vec<u64>, s| {
            if acc.is_empty() {
                acc.resize(pairs.len(), 0);
            }
            scratch.primary.reset();
            let labels = LazyLabels::new(settings.seed, s);
            let Some(cluster) = cluster_of(window, &labels.at(p), v, &mut scratch.primary) else {
                return Ok(());
            };
            if cluster.touching_edges > m_max {
                return Ok(());
            }
            let tau = tau_to_infinity(
                window,
                &labels,
                p,
                &cluster.vertices,
                &mut scratch.secondary,
            );
            for (slot, &(m, n)) in acc.iter_mut().zip(pairs) {
                if cluster.touching_edges <= m && tau >= n {
                    *slot += 1;
                }
            }
            Ok(())
        },
        add_counts,
    )?;
    let counts = if counts.is_empty() {
        vec![0; pairs.len()]
    } else {
        counts
    };
    Ok(pairs
        .iter()
        .zip(counts)
        .map(|(&pair, hits)| (pair, MCResult::proportion(hits, settings)))
        .collect())
}

/// `P_p(I_r(S ↔ ∞))` for each `r`: at least `r + 1` edge-disjoint open
/// paths from `S` to the boundary.
pub fn est_ir_prob(
    window: &GraphWindow,
    set: &VertexSet,
    p: f64,
    rs: &[usize],
    settings: &McSettings,
) -> Result<Vec<(usize, MCResult)>> {
    settings.validate()?;
    check_level(p)?;
    check_set(window, set)?;
    let limit = rs.iter().copied().max().unwrap_or(0) + 1;
    let hist = fold_samples(
        settings.samples,
        || (),
        |_, acc: &mut Vec<u64>, s| {
            if acc.is_empty() {
                acc.resize(limit + 1, 0);
            }
            let labels = assign_uniforms(window, settings.seed, s);
            let flow = count_edge_disjoint_paths(window, &labels.at(p), set, Some(limit))?;
            acc[flow.min(limit)] += 1;
            Ok(())
        },
        add_counts,
    )?;
    let hist = if hist.is_empty() {
        vec![0; limit + 1]
    } else {
        hist
    };
    let warning = margin_warning(window, set);
    Ok(rs
        .iter()
        .map(|&r| {
            let hits: u64 = hist[r + 1..].iter().sum();
            (
                r,
                MCResult::proportion(hits, settings).warn(warning.clone()),
            )
        })
        .collect())
}

/// Frequency of the bad-set event for each `n`.
pub fn est_bad_set_freq(
    window: &GraphWindow,
    v: usize,
    p: f64,
    ns: &[usize],
    threshold: &BadSetThreshold,
    settings: &McSettings,
) -> Result<Vec<(usize, MCResult)>> {
    settings.validate()?;
    check_level(p)?;
    check_vertex(window, v)?;
    let counts = fold_samples(
        settings.samples,
        || (),
        |_, acc: &mut Vec<u64>, s| {
            if acc.is_empty() {
                acc.resize(ns.len(), 0);
            }
            let config = assign_uniforms(window, settings.seed, s).threshold(p)?;
            for (slot, &n) in acc.iter_mut().zip(ns) {
                if bad_set_search(window, &config, v, n, threshold)?.is_some() {
                    *slot += 1;
                }
            }
            Ok(())
        },
        add_counts,
    )?;
    let counts = if counts.is_empty() {
        vec![0; ns.len()]
    } else {
        counts
    };
    Ok(ns
        .iter()
        .zip(counts)
        .map(|(&n, hits)| (n, MCResult::proportion(hits, settings)))
        .collect())
}

/// `(1 − θ)·mean/M`, the lower bound on `P(X > θ·E X)` for `0 ≤ X ≤ M`.
pub fn markov_lower_bound(mean: f64, max: f64, theta: f64) -> Result<f64> {
    if !(0.0 < theta && theta < 1.0) {
        return Err(Error::domain(format!("θ must lie in (0, 1), got {theta}")));
    }
    if max.is_nan() || max <= 0.0 {
        return Err(Error::domain(format!("M must be positive, got {max}")));
    }
    if !(0.0 <= mean && mean <= max) {
        return Err(Error::domain(format!("mean {mean} outside [0, M = {max}]")));
    }
    Ok((1.0 - theta) * mean / max)
}

/// `(P(X > θ·E X), (1 − θ)·E X/M)` for a finite distribution on `[0, M]`.
pub fn markov_check(values: &[f64], probs: &[f64], max: f64, theta: f64) -> Result<(f64, f64)> {
    if values.len() != probs.len() || values.is_empty() {
        return Err(Error::domain(
            "values and probabilities must be nonempty and paired",
        ));
    }
    if values.iter().any(|&x| !(0.0..=max).contains(&x)) || probs.iter().any(|&q| q < 0.0) {
        return Err(Error::domain(
            "values must lie in [0, M] and probabilities be nonnegative",
        ));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!("probabilities sum to {total}")));
    }
    let mean = values
        .iter()
        .zip(probs)
        .fold(0.0, |acc, (x, q)| acc + x * q);
    let bound = markov_lower_bound(mean.min(max), max, theta)?;
    let tail = values
        .iter()
        .zip(probs)
        .filter(|(&x, _)| x > theta * mean)
        .fold(0.0, |acc, (_, q)| acc + q);
    Ok((tail, bound))
}

/// Checks `P_{p₂}(I_r) ≥ 1 − (p₂/(p₂−p₁))^r · (1 − P_{p₁}(S ↔ ∞))` for each
/// `r`, with `P_{p₁}` estimated on the same sample stream.
pub fn stability_check(
    window: &GraphWindow,
    set: &VertexSet,
    p1: f64,
    p2: f64,
    rs: &[usize],
    settings: &McSettings,
) -> Result<Vec<BoundVerdict>> {
    check_sprinkle(p1, p2)?;
    let disconnect = est_disconnect_prob(window, set, p1, settings)?;
    let robust = est_ir_prob(window, set, p2, rs, settings)?;
    robust
        .into_iter()
        .map(|(r, estimate)| {
            let factor = (p2 / (p2 - p1)).powi(r as i32);
            let bound = 1.0 - factor * disconnect.estimate;
            BoundVerdict::probability(
                "stability",
                format!("r={r};p1={p1};p2={p2}"),
                bound,
                factor * disconnect.standard_error,
                Direction::AtLeast,
                estimate,
                settings.ci_level,
            )
        })
        .collect()
}

fn dimension(family: &Family) -> Option<usize> {
    match family {
        Family::Hypercubic { dim, .. } => Some(*dim),
        Family::RegularTree { .. } => None,
        Family::Product { left, right } => Some(dimension(left)? + dimension(right)?),
    }
}

/// Why a DGRSY comparison on `family` cannot confirm or refute the theorem.
pub fn dgrsy_caveat(family: &Family) -> String {
    match dimension(family) {
        Some(d) if d <= 4 => format!(
            "informative only: the inequality is proved for dimension above 4 and p above an unknown p0; here d = {d}"
        ),
        Some(d) => format!("informative only: p may lie below the unknown p0 (d = {d})"),
        None => "informative only: the inequality is proved for dimension above 4 and p above an unknown p0".to_string(),
    }
}

/// Compares `P_p(S ↮ ∞)` with `exp(−Cap(S)/2)`, both estimated.
pub fn dgrsy_cross_check(
    window: &GraphWindow,
    set: &VertexSet,
    p: f64,
    settings: &McSettings,
    walkers: u64,
    max_steps: u64,
) -> Result<BoundVerdict> {
    let disconnect = est_disconnect_prob(window, set, p, settings)?;
    let cap = est_capacity(window, set, walkers, max_steps, settings)?;
    let bound = (-0.5 * cap.capacity.estimate).exp();
    // delta method for exp(−C/2)
    let bound_se = 0.5 * bound * cap.capacity.standard_error;
    let caveat = dgrsy_caveat(window.family());
    Ok(BoundVerdict::probability(
        "dgrsy",
        format!("p={p};capacity={:.6}", cap.capacity.estimate),
        bound,
        bound_se,
        Direction::AtMost,
        disconnect,
        settings.ci_level,
    )?
    .with_caveat(caveat))
}

/// Raw per-sample statistics of the cluster of `v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleRecord {
    pub sample: u64,
    pub v: usize,
    pub p: f64,
    pub finite: bool,
    pub cluster_size: Option<usize>,
    pub edge_count: Option<usize>,
    /// Stopping time of the exploration.
    pub stopping_time: Option<usize>,
    /// Final value of the exploration martingale.
    pub z_final: Option<f64>,
    /// `τ(K_v, K_∞)`.
    pub tau: Option<usize>,
}

/// Per-sample record for sample index `sample` under `seed`.
pub fn simulate_sample(
    window: &GraphWindow,
    v: usize,
    p: f64,
    seed: u64,
    sample: u64,
) -> Result<SampleRecord> {
    check_vertex(window, v)?;
    let labels = LazyLabels::new(seed, sample);
    let trace = explore_cluster(window, &labels, p, v)?;
    let mut record = SampleRecord {
        sample,
        v,
        p,
        finite: false,
        cluster_size: None,
        edge_count: None,
        stopping_time: None,
        z_final: None,
        tau: None,
    };
    if let Stopping::Stopped { time } = trace.stopping {
        let mut scratch = Scratch::new(window);
        let cluster = cluster_of(window, &labels.at(p), v, &mut scratch.primary)
            .ok_or_else(|| Error::domain("exploration and cluster search disagree"))?;
        record.finite = true;
        record.cluster_size = Some(cluster.vertices.len());
        record.edge_count = Some(cluster.touching_edges);
        record.stopping_time = Some(time);
        record.z_final = trace.final_value();
        record.tau = Some(tau_to_infinity(
            window,
            &labels,
            p,
            &cluster.vertices,
            &mut scratch.secondary,
        ));
    }
    Ok(record)
}

#[cfg(test)]
mod tests;
