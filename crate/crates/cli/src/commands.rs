//! The five commands. Each returns its rows; writing is left to the caller.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use percolab_core::estimators::{
    check_exploration_identities, check_hull_menger, dgrsy_caveat, dgrsy_cross_check,
    est_azuma_tail, est_bad_set_freq, est_capacity, est_capacity_green, est_cluster_tail,
    est_disconnect_prob, est_ir_prob, est_psi_sum, est_repulsion_tail, markov_check,
    simulate_sample, stability_check, BoundVerdict, Direction, IdentityCheck, MCResult, McSettings,
};
use percolab_core::exact;
use percolab_core::exploration::azuma_bound;
use percolab_core::isoperimetry::{
    anchored_profile, bad_set_search, check_uniform_isoperimetry, fit_dimension, Ambient,
    BadSetThreshold, ProfileOptions,
};
use percolab_core::stats::{least_squares, z_for_level};
use percolab_core::{GraphWindow, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{
    resolve_set, resolve_vertex, BadSetBound, CapacityMethod, Estimand, ExperimentConfig, SetSpec,
    VertexSpec,
};
use crate::output::{ProfileRow, ReportRow, ResultRow, Staging, VerdictRow};
use crate::CliError;

/// Largest tolerated total-variation error of the exact conditional law.
pub const CONDITIONAL_LAW_TOLERANCE: f64 = 1e-10;
const CAPACITY_TOLERANCE: f64 = 1e-12;
// Markov distributions are drawn from their own stream of the seed.
const MARKOV_STREAM: u64 = 1 << 61;
const SIMULATE_BATCH: u64 = 4096;

/// A validated config bound to its window.
pub struct Context {
    pub config: ExperimentConfig,
    pub window: GraphWindow,
    pub settings: McSettings,
    pub hash: String,
}

impl Context {
    pub fn new(config: ExperimentConfig) -> Result<Self, CliError> {
        let window = config.build_window()?;
        let hash = config.hash();
        let settings = McSettings {
            samples: config.samples,
            seed: config.seed,
            ci_level: config.ci_level,
            config_hash: hash.clone(),
        };
        Ok(Context {
            config,
            window,
            settings,
            hash,
        })
    }

    fn vertex(&self, spec: &VertexSpec, i: usize) -> Result<usize, CliError> {
        resolve_vertex(&self.window, spec, &format!("estimands[{i}].v"))
    }

    fn set(&self, spec: &SetSpec, i: usize) -> Result<VertexSet, CliError> {
        resolve_set(&self.window, spec, &format!("estimands[{i}].set"))
    }

    fn exhaustive(&self) -> bool {
        self.config.exhaustive
    }

    fn method(&self) -> &'static str {
        if self.exhaustive() {
            "exact"
        } else {
            "monte_carlo"
        }
    }

    fn exact(&self, value: f64) -> MCResult {
        MCResult {
            estimate: value,
            ci_low: value,
            ci_high: value,
            standard_error: 0.0,
            samples: 0,
            successes: None,
            seed: self.settings.seed,
            config_hash: self.hash.clone(),
            warnings: Vec::new(),
        }
    }

    fn result_row(
        &self,
        estimand: &str,
        parameter: String,
        method: &str,
        r: &MCResult,
    ) -> ResultRow {
        ResultRow {
            estimand: estimand.to_string(),
            parameter,
            method: method.to_string(),
            estimate: r.estimate,
            ci_low: r.ci_low,
            ci_high: r.ci_high,
            standard_error: r.standard_error,
            samples: r.samples,
            successes: r.successes,
            seed: r.seed,
            config_hash: self.hash.clone(),
            warnings: r.warnings.join("; "),
        }
    }

    fn verdict_row(&self, v: &BoundVerdict, method: &str) -> VerdictRow {
        VerdictRow {
            check: v.check.clone(),
            parameter: v.parameter.clone(),
            method: method.to_string(),
            direction: match v.direction {
                Direction::AtMost => "at_most",
                Direction::AtLeast => "at_least",
            }
            .to_string(),
            bound: v.bound,
            bound_se: v.bound_se,
            estimate: v.estimate.estimate,
            ci_low: v.estimate.ci_low,
            ci_high: v.estimate.ci_high,
            standard_error: v.estimate.standard_error,
            slack: v.slack,
            verdict: v.verdict.as_str().to_string(),
            caveat: v.caveat.clone().unwrap_or_default(),
            seed: self.settings.seed,
            config_hash: self.hash.clone(),
        }
    }

    fn identity_row(&self, c: &IdentityCheck, parameter: String) -> VerdictRow {
        let failures = c.failures as f64;
        VerdictRow {
            check: c.check.clone(),
            parameter,
            method: "per_sample".into(),
            direction: "identity".into(),
            bound: 0.0,
            bound_se: 0.0,
            estimate: failures,
            ci_low: failures,
            ci_high: failures,
            standard_error: 0.0,
            slack: 0.0 - failures,
            verdict: if c.holds() { "consistent" } else { "violated" }.into(),
            caveat: format!(
                "failures among {} applicable of {} samples; max error {:e}{}",
                c.applicable,
                c.samples,
                c.max_error,
                c.first_failure
                    .map(|s| format!("; first failure at sample {s}"))
                    .unwrap_or_default()
            ),
            seed: self.settings.seed,
            config_hash: self.hash.clone(),
        }
    }

    fn probability_verdict(
        &self,
        check: &str,
        parameter: String,
        bound: f64,
        bound_se: f64,
        direction: Direction,
        estimate: MCResult,
    ) -> Result<VerdictRow, CliError> {
        let v = BoundVerdict::probability(
            check,
            parameter,
            bound,
            bound_se,
            direction,
            estimate,
            self.settings.ci_level,
        )?;
        Ok(self.verdict_row(&v, self.method()))
    }
}

fn pairs(ms: &[usize], ns: &[usize]) -> Vec<(usize, usize)> {
    ms.iter()
        .flat_map(|&m| ns.iter().map(move |&n| (m, n)))
        .collect()
}

/// Exact probability of a per-configuration event, one value per entry of
/// `ns`.
fn exact_bad_set(
    window: &GraphWindow,
    v: usize,
    p: f64,
    ns: &[usize],
    threshold: &BadSetThreshold,
) -> Result<Vec<f64>, CliError> {
    let mut totals = vec![0.0; ns.len()];
    let mut failure = None;
    exact::for_each_configuration(window, p, |config, prob| {
        if failure.is_some() {
            return;
        }
        for (t, &n) in totals.iter_mut().zip(ns) {
            match bad_set_search(window, config, v, n, threshold) {
                Ok(Some(_)) => *t += prob,
                Ok(None) => {}
                Err(e) => {
                    failure = Some(e);
                    return;
                }
            }
        }
    })?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(totals),
    }
}

fn size_tail(
    ctx: &Context,
    v: usize,
    p: f64,
    grid: &[usize],
) -> Result<Vec<(usize, MCResult)>, CliError> {
    if ctx.exhaustive() {
        let n_max = grid.iter().copied().max().unwrap_or(0);
        let law = exact::cluster_law(&ctx.window, v, p, n_max)?;
        Ok(grid
            .iter()
            .map(|&n| (n, ctx.exact(law.size_tail[n])))
            .collect())
    } else {
        Ok(est_cluster_tail(&ctx.window, v, p, grid, &ctx.settings)?.size_tail)
    }
}

fn bad_set_frequencies(
    ctx: &Context,
    v: usize,
    p: f64,
    ns: &[usize],
    threshold: &BadSetThreshold,
) -> Result<Vec<(usize, MCResult)>, CliError> {
    if ctx.exhaustive() {
        let values = exact_bad_set(&ctx.window, v, p, ns, threshold)?;
        Ok(ns
            .iter()
            .zip(values)
            .map(|(&n, x)| (n, ctx.exact(x)))
            .collect())
    } else {
        Ok(est_bad_set_freq(
            &ctx.window,
            v,
            p,
            ns,
            threshold,
            &ctx.settings,
        )?)
    }
}

/// `cmd_estimate`: one row per (estimand, parameter point).
pub fn estimate(ctx: &Context) -> Result<Vec<ResultRow>, CliError> {
    let w = &ctx.window;
    let s = &ctx.settings;
    let method = ctx.method();
    let mut rows = Vec::new();
    let mut used = 0;
    for (i, est) in ctx.config.estimands.iter().enumerate() {
        let kind = est.kind();
        match est {
            Estimand::Disconnect { set, p } | Estimand::PsiSum { set, p } => {
                used += 1;
                let set = ctx.set(set, i)?;
                let psi = matches!(est, Estimand::PsiSum { .. });
                for &p in p {
                    let r = match (ctx.exhaustive(), psi) {
                        (true, false) => ctx.exact(exact::disconnect_prob(w, &set, p)?),
                        (true, true) => ctx.exact(exact::psi_sum(w, &set, p)?),
                        (false, false) => est_disconnect_prob(w, &set, p, s)?,
                        (false, true) => est_psi_sum(w, &set, p, s)?,
                    };
                    rows.push(ctx.result_row(kind, format!("p={p}"), method, &r));
                }
            }
            Estimand::ClusterTail { v, p, n } => {
                used += 1;
                let v = ctx.vertex(v, i)?;
                let grid = n.values();
                for &p in p {
                    let (tail, pmf, finite) = if ctx.exhaustive() {
                        let n_max = grid.iter().copied().max().unwrap_or(0);
                        let law = exact::cluster_law(w, v, p, n_max)?;
                        (
                            grid.iter()
                                .map(|&n| (n, ctx.exact(law.size_tail[n])))
                                .collect(),
                            grid.iter()
                                .map(|&n| (n, ctx.exact(law.edge_pmf[n])))
                                .collect(),
                            ctx.exact(law.size_tail[0]),
                        )
                    } else {
                        let t = est_cluster_tail(w, v, p, &grid, s)?;
                        (t.size_tail, t.edge_pmf, t.finite)
                    };
                    rows.push(ctx.result_row("cluster_finite", format!("p={p}"), method, &finite));
                    for (n, r) in &tail {
                        rows.push(ctx.result_row(kind, format!("p={p};n={n}"), method, r));
                    }
                    for (n, r) in &pmf {
                        rows.push(ctx.result_row(
                            "cluster_edge_pmf",
                            format!("p={p};n={n}"),
                            method,
                            r,
                        ));
                    }
                }
            }
            Estimand::DimensionFit { v, p, n_min, n_max } => {
                used += 1;
                let v = ctx.vertex(v, i)?;
                let grid: Vec<usize> = (*n_min..=*n_max).collect();
                let tail = size_tail(ctx, v, *p, &grid)?;
                let parameter = format!("p={p};n_min={n_min};n_max={n_max}");
                for (n, r) in &tail {
                    rows.push(ctx.result_row(
                        "dimension_fit_tail",
                        format!("p={p};n={n}"),
                        method,
                        r,
                    ));
                }
                let points: Vec<(f64, f64)> = tail
                    .iter()
                    .filter(|(_, r)| r.estimate > 0.0)
                    .map(|(n, r)| (*n as f64, -r.estimate.ln()))
                    .collect();
                let mut warnings = Vec::new();
                if let Some(p_c) = ctx.config.p_c {
                    if *p <= p_c {
                        warnings.push(format!("p = {p} is not above p_c = {p_c}"));
                    }
                }
                let fit = match fit_dimension(&points) {
                    Ok(f) => {
                        warnings.push(format!("{} points used; slope {}", f.points_used, f.slope));
                        ctx.normal(f.d_prime, f.standard_error)?
                    }
                    Err(e) => {
                        warnings.push(e.to_string());
                        ctx.normal(f64::NAN, f64::NAN)?
                    }
                };
                let mut fit = fit;
                fit.warnings = warnings;
                fit.samples = if ctx.exhaustive() { 0 } else { s.samples };
                rows.push(ctx.result_row(kind, parameter, method, &fit));
            }
            Estimand::Repulsion { v, p1, p2, n } => {
                used += 1;
                let v = ctx.vertex(v, i)?;
                for (n, r) in repulsion(ctx, v, *p1, *p2, &n.values())? {
                    rows.push(ctx.result_row(kind, format!("p1={p1};p2={p2};n={n}"), method, &r));
                }
            }
            Estimand::Azuma { v, p, m, n } => {
                used += 1;
                let v = ctx.vertex(v, i)?;
                for ((m, n), r) in azuma(ctx, v, *p, &pairs(m, n))? {
                    rows.push(ctx.result_row(kind, format!("p={p};m={m};n={n}"), method, &r));
                }
            }
            Estimand::Ir { set, p, r } => {
                used += 1;
                let set = ctx.set(set, i)?;
                for &p in p {
                    for (r, res) in ir(ctx, &set, p, r)? {
                        rows.push(ctx.result_row(kind, format!("p={p};r={r}"), method, &res));
                    }
                }
            }
            Estimand::BadSet {
                v, p, n, threshold, ..
            } => {
                used += 1;
                let v = ctx.vertex(v, i)?;
                for (n, r) in bad_set_frequencies(ctx, v, *p, n, &threshold.to_core())? {
                    rows.push(ctx.result_row(kind, format!("p={p};n={n}"), method, &r));
                }
            }
            Estimand::Capacity {
                set,
                walkers,
                max_steps,
                method: how,
            } => {
                used += 1;
                let set = ctx.set(set, i)?;
                if ctx.exhaustive() {
                    let cap = exact::capacity(w, &set, CAPACITY_TOLERANCE)?;
                    rows.push(ctx.result_row(
                        kind,
                        "method=exact".into(),
                        "exact",
                        &ctx.exact(cap.capacity),
                    ));
                    for (u, e) in cap.escape {
                        rows.push(ctx.result_row(
                            "escape",
                            format!("v={u}"),
                            "exact",
                            &ctx.exact(e),
                        ));
                    }
                    continue;
                }
                match how {
                    CapacityMethod::Escape => {
                        let cap = est_capacity(w, &set, *walkers, *max_steps, s)?;
                        let parameter =
                            format!("method=escape;walkers={walkers};max_steps={max_steps}");
                        rows.push(ctx.result_row(kind, parameter, method, &cap.capacity));
                        for (u, r) in &cap.escape {
                            rows.push(ctx.result_row("escape", format!("v={u}"), method, r));
                        }
                    }
                    CapacityMethod::Green => {
                        let [u] = set.members() else {
                            return Err(CliError::Config(format!(
                                "at `estimands[{i}].set`: the Green estimator needs a single vertex"
                            )));
                        };
                        let r = est_capacity_green(w, *u, *max_steps, s)?;
                        let parameter = format!("method=green;max_steps={max_steps}");
                        rows.push(ctx.result_row(kind, parameter, method, &r));
                    }
                }
            }
            Estimand::Samples { .. }
            | Estimand::Stability { .. }
            | Estimand::Dgrsy { .. }
            | Estimand::Markov { .. }
            | Estimand::ExplorationIdentities { .. }
            | Estimand::HullMenger { .. }
            | Estimand::ConditionalLaw { .. }
            | Estimand::Profile { .. }
            | Estimand::Uniform { .. } => {}
        }
    }
    if used == 0 {
        return Err(CliError::Config("no estimands for estimate".into()));
    }
    Ok(rows)
}

impl Context {
    fn normal(&self, estimate: f64, se: f64) -> Result<MCResult, CliError> {
        let half = z_for_level(self.settings.ci_level)? * se;
        Ok(MCResult {
            estimate,
            ci_low: estimate - half,
            ci_high: estimate + half,
            standard_error: se,
            samples: self.settings.samples,
            successes: None,
            seed: self.settings.seed,
            config_hash: self.hash.clone(),
            warnings: Vec::new(),
        })
    }
}

fn repulsion(
    ctx: &Context,
    v: usize,
    p1: f64,
    p2: f64,
    grid: &[usize],
) -> Result<Vec<(usize, MCResult)>, CliError> {
    if ctx.exhaustive() {
        let n_max = grid.iter().copied().max().unwrap_or(0);
        let tail = exact::repulsion_tail(&ctx.window, v, p1, p2, n_max)?;
        Ok(grid.iter().map(|&n| (n, ctx.exact(tail[n]))).collect())
    } else {
        Ok(est_repulsion_tail(
            &ctx.window,
            v,
            p1,
            p2,
            grid,
            &ctx.settings,
        )?)
    }
}

type PairResults = Vec<((usize, usize), MCResult)>;

fn azuma(
    ctx: &Context,
    v: usize,
    p: f64,
    pairs: &[(usize, usize)],
) -> Result<PairResults, CliError> {
    if ctx.exhaustive() {
        let values = exact::azuma_tail(&ctx.window, v, p, pairs)?;
        Ok(pairs
            .iter()
            .zip(values)
            .map(|(&pair, x)| (pair, ctx.exact(x)))
            .collect())
    } else {
        Ok(est_azuma_tail(&ctx.window, v, p, pairs, &ctx.settings)?)
    }
}

fn ir(
    ctx: &Context,
    set: &VertexSet,
    p: f64,
    rs: &[usize],
) -> Result<Vec<(usize, MCResult)>, CliError> {
    if ctx.exhaustive() {
        rs.iter()
            .map(|&r| Ok((r, ctx.exact(exact::ir_prob(&ctx.window, set, p, r)?))))
            .collect()
    } else {
        Ok(est_ir_prob(&ctx.window, set, p, rs, &ctx.settings)?)
    }
}

/// A random distribution on `[0, max]` with `support` atoms; endpoints are
/// included often so that extreme cases are exercised.
fn random_distribution(rng: &mut ChaCha8Rng, support: usize, max: f64) -> (Vec<f64>, Vec<f64>) {
    let values: Vec<f64> = (0..support)
        .map(|_| match rng.gen_range(0..4) {
            0 => 0.0,
            1 => max,
            _ => rng.gen_range(0.0..=max),
        })
        .collect();
    let weights: Vec<f64> = (0..support)
        .map(|_| rng.gen::<f64>() + f64::MIN_POSITIVE)
        .collect();
    let total: f64 = weights.iter().sum();
    let mut probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
    // make the probabilities sum to one in floating point
    let rest: f64 = probs[1..].iter().sum();
    probs[0] = (1.0 - rest).max(0.0);
    (values, probs)
}

fn markov_rows(
    ctx: &Context,
    distributions: usize,
    support: usize,
    max: f64,
    thetas: &[f64],
) -> Result<Vec<VerdictRow>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.settings.seed);
    rng.set_stream(MARKOV_STREAM);
    let dists: Vec<_> = (0..distributions)
        .map(|_| random_distribution(&mut rng, support, max))
        .collect();
    let mut rows = Vec::new();
    for &theta in thetas {
        // (slack, tail, bound, violations)
        let mut worst: Option<(f64, f64, f64)> = None;
        let mut violations = 0;
        for (values, probs) in &dists {
            let (tail, bound) = markov_check(values, probs, max, theta)?;
            let slack = tail - bound;
            if slack < 0.0 {
                violations += 1;
            }
            if worst.is_none_or(|(s, _, _)| slack < s) {
                worst = Some((slack, tail, bound));
            }
        }
        let (slack, tail, bound) = worst.expect("at least one distribution");
        rows.push(VerdictRow {
            check: "markov".into(),
            parameter: format!(
                "theta={theta};distributions={distributions};support={support};max={max}"
            ),
            method: "exact".into(),
            direction: "at_least".into(),
            bound,
            bound_se: 0.0,
            estimate: tail,
            ci_low: tail,
            ci_high: tail,
            standard_error: 0.0,
            slack,
            verdict: if violations == 0 {
                "consistent"
            } else {
                "violated"
            }
            .into(),
            caveat: format!(
                "worst case over {distributions} distributions; {violations} violations"
            ),
            seed: ctx.settings.seed,
            config_hash: ctx.hash.clone(),
        });
    }
    Ok(rows)
}

fn bad_set_rows(
    ctx: &Context,
    v: usize,
    p: f64,
    ns: &[usize],
    threshold: &BadSetThreshold,
    bound: &BadSetBound,
) -> Result<Vec<VerdictRow>, CliError> {
    let freqs = bad_set_frequencies(ctx, v, p, ns, threshold)?;
    let decay = |n: usize| (-(bound.c / 2.0) * bound.phi.eval(n as f64)).exp();
    // (C, standard error of C)
    let (constant, constant_se) = match (bound.constant, bound.fit_at) {
        (Some(c), _) => (c, 0.0),
        (None, Some(n0)) => {
            let (_, r) = freqs
                .iter()
                .find(|(n, _)| *n == n0)
                .expect("validated fit point");
            (r.estimate / decay(n0), r.standard_error / decay(n0))
        }
        (None, None) => unreachable!("validated bound"),
    };
    let mut rows = Vec::new();
    for (n, r) in freqs {
        if bound.fit_at == Some(n) {
            continue;
        }
        let b = constant * decay(n);
        let parameter = format!("p={p};n={n};c={};C={constant}", bound.c);
        rows.push(ctx.probability_verdict(
            "bad_set",
            parameter,
            b,
            constant_se * decay(n),
            Direction::AtMost,
            r,
        )?);
    }
    Ok(rows)
}

/// `cmd_verify`: one row per bound check or identity.
pub fn verify(ctx: &Context) -> Result<Vec<VerdictRow>, CliError> {
    let w = &ctx.window;
    let s = &ctx.settings;
    let mut rows = Vec::new();
    let mut used = 0;
    for (i, est) in ctx.config.estimands.iter().enumerate() {
        match est {
            Estimand::Repulsion { v, p1, p2, n } => {
                used += 1;
                let v = ctx.vertex(v, i)?;
                let ratio = (1.0 - p2) / (1.0 - p1);
                for (n, r) in repulsion(ctx, v, *p1, *p2, &n.values())? {
                    let bound = ratio.powi(n as i32);
                    let parameter = format!("p1={p1};p2={p2};n={n}");
                    rows.push(ctx.probability_verdict(
                        "repulsion",
                        parameter,
                        bound,
                        0.0,
                        Direction::AtMost,
                        r,
                    )?);
                }
            }
            Estimand::Azuma { v, p, m, n } => {
                used += 1;
                let v = ctx.vertex(v, i)?;
                for ((m, n), r) in azuma(ctx, v, *p, &pairs(m, n))? {
                    let bound = azuma_bound(*p, n, m)?.value;
                    let parameter = format!("p={p};m={m};n={n}");
                    rows.push(ctx.probability_verdict(
                        "azuma",
                        parameter,
                        bound,
                        0.0,
                        Direction::AtMost,
                        r,
                    )?);
                }
            }
            Estimand::Markov {
                distributions,
                support,
                max,
                theta,
            } => {
                used += 1;
                rows.extend(markov_rows(ctx, *distributions, *support, *max, theta)?);
            }
            Estimand::Stability { set, p1, p2, r } => {
                used += 1;
                let set = ctx.set(set, i)?;
                if ctx.exhaustive() {
                    let disconnect = exact::disconnect_prob(w, &set, *p1)?;
                    for &r in r {
                        let bound = 1.0 - (p2 / (p2 - p1)).powi(r as i32) * disconnect;
                        let est = ctx.exact(exact::ir_prob(w, &set, *p2, r)?);
                        let parameter = format!("r={r};p1={p1};p2={p2}");
                        rows.push(ctx.probability_verdict(
                            "stability",
                            parameter,
                            bound,
                            0.0,
                            Direction::AtLeast,
                            est,
                        )?);
                    }
                } else {
                    for v in stability_check(w, &set, *p1, *p2, r, s)? {
                        rows.push(ctx.verdict_row(&v, "monte_carlo"));
                    }
                }
            }
            Estimand::BadSet {
                v,
                p,
                n,
                threshold,
                bound: Some(bound),
            } => {
                used += 1;
                let v = ctx.vertex(v, i)?;
                rows.extend(bad_set_rows(ctx, v, *p, n, &threshold.to_core(), bound)?);
            }
            Estimand::Dgrsy {
                set,
                p,
                walkers,
                max_steps,
            } => {
                used += 1;
                let set = ctx.set(set, i)?;
                for &p in p {
                    if ctx.exhaustive() {
                        let cap = exact::capacity(w, &set, CAPACITY_TOLERANCE)?.capacity;
                        let est = ctx.exact(exact::disconnect_prob(w, &set, p)?);
                        let parameter = format!("p={p};capacity={cap:.6}");
                        let mut row = ctx.probability_verdict(
                            "dgrsy",
                            parameter,
                            (-0.5 * cap).exp(),
                            0.0,
                            Direction::AtMost,
                            est,
                        )?;
                        row.caveat = dgrsy_caveat(w.family());
                        rows.push(row);
                    } else {
                        let v = dgrsy_cross_check(w, &set, p, s, *walkers, *max_steps)?;
                        rows.push(ctx.verdict_row(&v, "monte_carlo"));
                    }
                }
            }
            Estimand::ExplorationIdentities { v, p } => {
                used += 1;
                let v = ctx.vertex(v, i)?;
                for &p in p {
                    for c in check_exploration_identities(w, v, p, s)? {
                        rows.push(ctx.identity_row(&c, format!("p={p}")));
                    }
                }
            }
            Estimand::HullMenger { set, p } => {
                used += 1;
                let set = ctx.set(set, i)?;
                for &p in p {
                    for c in check_hull_menger(w, &set, p, s)? {
                        rows.push(ctx.identity_row(&c, format!("p={p}")));
                    }
                }
            }
            Estimand::ConditionalLaw { p1, p2 } => {
                used += 1;
                let tv = exact::conditional_law_distance(w, *p1, *p2)?;
                rows.push(VerdictRow {
                    check: "conditional_law".into(),
                    parameter: format!("p1={p1};p2={p2}"),
                    method: "exact".into(),
                    direction: "at_most".into(),
                    bound: CONDITIONAL_LAW_TOLERANCE,
                    bound_se: 0.0,
                    estimate: tv,
                    ci_low: tv,
                    ci_high: tv,
                    standard_error: 0.0,
                    slack: CONDITIONAL_LAW_TOLERANCE - tv,
                    verdict: if tv <= CONDITIONAL_LAW_TOLERANCE {
                        "consistent"
                    } else {
                        "violated"
                    }
                    .into(),
                    caveat: "largest total-variation distance over values of the infinite cluster"
                        .into(),
                    seed: ctx.settings.seed,
                    config_hash: ctx.hash.clone(),
                });
            }
            _ => {}
        }
    }
    if used == 0 {
        return Err(CliError::Config("no estimands for verify".into()));
    }
    Ok(rows)
}

fn witness(set: &VertexSet) -> String {
    set.iter()
        .map(|u| u.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// `cmd_profile`: anchored profiles and uniform isoperimetry.
pub fn profile(ctx: &Context) -> Result<Vec<ProfileRow>, CliError> {
    let w = &ctx.window;
    let mut rows = Vec::new();
    let mut used = 0;
    for (i, est) in ctx.config.estimands.iter().enumerate() {
        match est {
            Estimand::Profile {
                v,
                max_size,
                phi,
                normalization,
                heuristic_sizes,
                schedule,
            } => {
                used += 1;
                let v = ctx.vertex(v, i)?;
                let options = ProfileOptions {
                    max_size: *max_size,
                    normalization: *normalization,
                    heuristic_sizes: heuristic_sizes.clone(),
                    schedule: schedule.clone().unwrap_or_default(),
                };
                for r in anchored_profile(&Ambient::full(w), v, phi, &options)? {
                    rows.push(ProfileRow {
                        profile: "anchored".into(),
                        anchor: v.to_string(),
                        n: r.size,
                        ratio: r.ratio,
                        boundary: Some(r.boundary),
                        volume: Some(r.volume),
                        normalization: r.normalization.as_str().into(),
                        exact_flag: r.exact,
                        witness: witness(&r.set),
                        config_hash: ctx.hash.clone(),
                    });
                }
            }
            Estimand::Uniform { d, max_size } => {
                used += 1;
                let check = check_uniform_isoperimetry(w, *d, *max_size)?;
                for &(n, ratio) in &check.per_size {
                    let is_min = n == check.witness.len();
                    rows.push(ProfileRow {
                        profile: format!("uniform;d={d}"),
                        anchor: String::new(),
                        n,
                        ratio,
                        boundary: None,
                        volume: None,
                        normalization: "degree_volume".into(),
                        exact_flag: true,
                        witness: if is_min {
                            witness(&check.witness)
                        } else {
                            String::new()
                        },
                        config_hash: ctx.hash.clone(),
                    });
                }
            }
            _ => {}
        }
    }
    if used == 0 {
        return Err(CliError::Config("no estimands for profile".into()));
    }
    Ok(rows)
}

/// `cmd_simulate`: one JSON line per (estimand, p, sample), streamed into
/// `name` in the staging area.
pub fn simulate(ctx: &Context, staging: &mut Staging, name: &str) -> Result<u64, CliError> {
    let jobs: Vec<(usize, f64)> = ctx
        .config
        .estimands
        .iter()
        .enumerate()
        .filter_map(|(i, est)| match est {
            Estimand::Samples { v, p } => {
                Some(ctx.vertex(v, i).map(|v| p.iter().map(move |&p| (v, p))))
            }
            _ => None,
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    if jobs.is_empty() {
        return Err(CliError::Config("no estimands for simulate".into()));
    }
    let dir = staging.dir().to_path_buf();
    let file = staging.create(name)?;
    let mut out = std::io::BufWriter::new(file.as_file_mut());
    let io =
        |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", dir.join(name).display()));
    let mut lines = 0;
    for (v, p) in jobs {
        let mut start = 0;
        while start < ctx.settings.samples {
            let end = (start + SIMULATE_BATCH).min(ctx.settings.samples);
            let batch = (start..end)
                .into_par_iter()
                .map(|sample| {
                    let record = simulate_sample(&ctx.window, v, p, ctx.settings.seed, sample)?;
                    Ok(serde_json::to_string(&record).expect("record serializes"))
                })
                .collect::<Result<Vec<String>, CliError>>()?;
            for line in batch {
                writeln!(out, "{line}").map_err(io)?;
                lines += 1;
            }
            start = end;
        }
    }
    out.flush().map_err(io)?;
    Ok(lines)
}

fn parameter_value(parameter: &str, key: &str) -> Option<String> {
    parameter
        .split(';')
        .find_map(|kv| kv.strip_prefix(key)?.strip_prefix('='))
        .map(str::to_string)
}

/// `cmd_report`: `log n` against `log(−log p̂_n)` for every tail in a run's
/// results, with the least-squares line over `n ≥ 8`.
pub fn report(run_dir: &Path) -> Result<(Vec<ReportRow>, String), CliError> {
    let path = run_dir.join("results.csv");
    let mut reader = csv::Reader::from_path(&path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    // (estimand, parameter without n) -> points
    let mut groups: BTreeMap<(String, String), Vec<(f64, f64)>> = BTreeMap::new();
    let mut hash = None;
    for row in reader.deserialize::<ResultRow>() {
        let row =
            row.map_err(|e| CliError::Config(format!("malformed {}: {e}", path.display())))?;
        hash.get_or_insert_with(|| row.config_hash.clone());
        if row.estimand != "cluster_tail" && row.estimand != "dimension_fit_tail" {
            continue;
        }
        let Some(n) = parameter_value(&row.parameter, "n").and_then(|n| n.parse::<f64>().ok())
        else {
            continue;
        };
        let rest: Vec<&str> = row
            .parameter
            .split(';')
            .filter(|kv| !kv.starts_with("n="))
            .collect();
        let points = groups
            .entry((row.estimand.clone(), rest.join(";")))
            .or_default();
        if n > 0.0 && row.estimate > 0.0 && row.estimate < 1.0 {
            points.push((n.ln(), (-row.estimate.ln()).ln()));
        }
    }
    let hash = hash.unwrap_or_default();
    if groups.is_empty() {
        return Err(CliError::Config(format!(
            "no tail estimates in {}",
            path.display()
        )));
    }
    let mut rows = Vec::new();
    for ((estimand, parameter), points) in groups {
        let row = |series: &str, x: f64, y: f64| ReportRow {
            estimand: estimand.clone(),
            parameter: parameter.clone(),
            series: series.into(),
            x,
            y,
            config_hash: hash.clone(),
        };
        for &(x, y) in &points {
            rows.push(row("log_neg_log_tail", x, y));
        }
        let used: Vec<(f64, f64)> = points
            .iter()
            .copied()
            .filter(|(x, _)| *x >= 8f64.ln())
            .collect();
        let (xs, ys): (Vec<f64>, Vec<f64>) = used.iter().copied().unzip();
        if let Ok(fit) = least_squares(&xs, &ys) {
            for &x in &xs {
                rows.push(row("fitted", x, fit.intercept + fit.slope * x));
            }
        }
    }
    Ok((rows, hash))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters_parse() {
        assert_eq!(parameter_value("p=0.5;n=12", "n").as_deref(), Some("12"));
        assert_eq!(parameter_value("p=0.5;nn=12", "n"), None);
        assert_eq!(parameter_value("p=0.5", "n"), None);
    }

    #[test]
    fn random_distributions_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for support in [1, 2, 7] {
            let (values, probs) = random_distribution(&mut rng, support, 2.5);
            assert_eq!(values.len(), support);
            assert!(values.iter().all(|x| (0.0..=2.5).contains(x)));
            assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(probs.iter().all(|&q| q >= 0.0));
        }
    }

    #[test]
    fn pairs_are_a_product() {
        assert_eq!(pairs(&[1, 2], &[3]), vec![(1, 3), (2, 3)]);
    }
}
