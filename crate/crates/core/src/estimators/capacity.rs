//! Capacity by simple random walks absorbed at the window boundary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::runner::fold_samples;
use super::{check_set, check_vertex, margin_warning, MCResult, McSettings};
use crate::error::{Error, Result};
use crate::graph::{GraphWindow, VertexSet};
use crate::stats::Moments;

// Walk streams live apart from label streams of the same seed.
const ESCAPE_STREAMS: u64 = 1 << 63;
const GREEN_STREAMS: u64 = 1 << 62;

fn walker_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Capacity estimate with per-vertex escape frequencies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityEstimate {
    pub capacity: MCResult,
    pub escape: Vec<(usize, MCResult)>,
    /// Walks stopped by the step budget; counted as returns.
    pub truncated: u64,
}

enum Outcome {
    Escaped,
    Returned,
    Truncated,
}

fn walk(
    window: &GraphWindow,
    inside: &[bool],
    start: usize,
    max_steps: u64,
    rng: &mut ChaCha8Rng,
) -> Outcome {
    let mut x = start;
    for _ in 0..max_steps {
        let nbs = window.neighbors(x);
        x = nbs[rng.gen_range(0..nbs.len())].vertex;
        if inside[x] {
            return Outcome::Returned;
        }
        if window.is_boundary(x) {
            return Outcome::Escaped;
        }
    }
    Outcome::Truncated
}

/// `Cap(S) = Σ_{v∈S} deg(v)·P_v(reach the boundary before returning to S)`
/// from `walkers` walks started at each vertex of `S`; only the seed, level
/// and hash of `settings` are used.
pub fn est_capacity(
    window: &GraphWindow,
    set: &VertexSet,
    walkers: u64,
    max_steps: u64,
    settings: &McSettings,
) -> Result<CapacityEstimate> {
    settings.validate()?;
    check_set(window, set)?;
    if walkers == 0 {
        return Err(Error::domain("at least one walker per vertex is required"));
    }
    let members = set.members();
    let inside = set.mask(window.num_vertices());
    let total = walkers * members.len() as u64;
    // per vertex: escapes, truncations
    let counts = fold_samples(
        total,
        || (),
        |_, acc: &mut Vec<u64>, s| {
            if acc.is_empty() {
                acc.resize(2 * members.len(), 0);
            }
            let i = (s / walkers) as usize;
            let mut rng = walker_rng(settings.seed, ESCAPE_STREAMS | s);
            match walk(window, &inside, members[i], max_steps, &mut rng) {
                Outcome::Escaped => acc[2 * i] += 1,
                Outcome::Returned => {}
                Outcome::Truncated => acc[2 * i + 1] += 1,
            }
            Ok(())
        },
        super::runner::add_counts,
    )?;
    let per_vertex = McSettings {
        samples: walkers,
        ..settings.clone()
    };
    let mut estimate = 0.0;
    let mut variance = 0.0;
    let mut escapes = 0;
    let mut truncated = 0;
    let mut escape = Vec::with_capacity(members.len());
    let mut degree_total = 0.0;
    for (i, &v) in members.iter().enumerate() {
        let k = counts[2 * i];
        escapes += k;
        truncated += counts[2 * i + 1];
        let r = MCResult::proportion(k, &per_vertex);
        let deg = window.degree(v) as f64;
        degree_total += deg;
        estimate += deg * r.estimate;
        variance += deg * deg * r.standard_error * r.standard_error;
        escape.push((v, r));
    }
    let mut capacity = MCResult::normal(
        estimate,
        variance.sqrt(),
        total,
        settings,
        (0.0, degree_total),
    );
    capacity.successes = Some(escapes);
    capacity.warnings.extend(margin_warning(window, set));
    if truncated * 100 > total {
        capacity.warnings.push(format!(
            "{truncated} of {total} walks hit the step budget of {max_steps} and were counted as returns"
        ));
    }
    Ok(CapacityEstimate {
        capacity,
        escape,
        truncated,
    })
}

/// `Cap({v}) = deg(v) / G(v, v)` where `G(v, v)` is the mean number of visits
/// to `v`, time zero included, before the walk is absorbed at the boundary.
pub fn est_capacity_green(
    window: &GraphWindow,
    v: usize,
    max_steps: u64,
    settings: &McSettings,
) -> Result<MCResult> {
    settings.validate()?;
    check_vertex(window, v)?;
    if window.is_boundary(v) {
        return Err(Error::domain(format!("vertex {v} lies on the boundary")));
    }
    let (moments, truncated) = fold_samples(
        settings.samples,
        || (),
        |_, acc: &mut (Moments, u64), s| {
            let mut rng = walker_rng(settings.seed, GREEN_STREAMS | s);
            let mut x = v;
            let mut visits = 1u64;
            let mut absorbed = false;
            for _ in 0..max_steps {
                let nbs = window.neighbors(x);
                x = nbs[rng.gen_range(0..nbs.len())].vertex;
                if window.is_boundary(x) {
                    absorbed = true;
                    break;
                }
                if x == v {
                    visits += 1;
                }
            }
            acc.0.push(visits as f64);
            if !absorbed {
                acc.1 += 1;
            }
            Ok(())
        },
        |a, b| {
            a.0.merge(&b.0);
            a.1 += b.1;
        },
    )?;
    let green = moments.mean();
    let deg = window.degree(v) as f64;
    let estimate = deg / green;
    let se = deg * moments.standard_error() / (green * green);
    let mut result = MCResult::normal(estimate, se, settings.samples, settings, (0.0, deg));
    result
        .warnings
        .extend(margin_warning(window, &VertexSet::singleton(window, v)?));
    if truncated * 100 > settings.samples {
        result.warnings.push(format!(
            "{truncated} of {} walks hit the step budget of {max_steps}",
            settings.samples
        ));
    }
    Ok(result)
}
