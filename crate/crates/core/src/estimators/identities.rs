//! Per-sample identities that must hold exactly in every configuration.

use serde::Serialize;

use super::runner::fold_samples;
use super::{check_set, check_vertex, McSettings};
use crate::error::{Error, Result};
use crate::exploration::{
    explore_cluster, explore_off_infinity, explore_with, EdgeOrder, ExploreOptions,
};
use crate::graph::{GraphWindow, VertexSet};
use crate::percolation::{
    assign_uniforms, clusters, count_edge_disjoint_paths, escaping_edges, hull, LabelSource,
};

/// Absolute tolerance for floating-point identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// Outcome of an identity over many samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub check: String,
    pub samples: u64,
    /// Samples in which the identity applies.
    pub applicable: u64,
    pub failures: u64,
    /// Largest absolute discrepancy seen (zero for set identities).
    pub max_error: f64,
    /// First failing sample, if any.
    pub first_failure: Option<u64>,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Default)]
struct Tally {
    applicable: u64,
    failures: u64,
    max_error: f64,
    first_failure: Option<u64>,
}

impl Tally {
    fn record(&mut self, sample: u64, error: f64, ok: bool) {
        self.applicable += 1;
        self.max_error = self.max_error.max(error);
        if !ok {
            self.failures += 1;
            self.first_failure.get_or_insert(sample);
        }
    }

    fn merge(&mut self, other: Tally) {
        self.applicable += other.applicable;
        self.failures += other.failures;
        self.max_error = self.max_error.max(other.max_error);
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }

    fn finish(self, check: &str, samples: u64) -> IdentityCheck {
        IdentityCheck {
            check: check.to_string(),
            samples,
            applicable: self.applicable,
            failures: self.failures,
            max_error: self.max_error,
            first_failure: self.first_failure,
        }
    }
}

/// Exploration identities on every sample with `K_v` finite:
/// `Z_T = (1−p)·#open − p·#closed` over the edges touching `K_v`,
/// `Z̃ − Z_T = p·τ(K_v, K_∞)`, and `Z_T` unchanged by reversing the edge order.
/// Cluster facts come from a union-find partition of the whole window.
pub fn check_exploration_identities(
    window: &GraphWindow,
    v: usize,
    p: f64,
    settings: &McSettings,
) -> Result<Vec<IdentityCheck>> {
    settings.validate()?;
    check_vertex(window, v)?;
    let tallies = fold_samples(
        settings.samples,
        || (),
        |_, acc: &mut [Tally; 3], s| {
            let labels = assign_uniforms(window, settings.seed, s);
            let part = clusters(window, &labels.at(p));
            let z = explore_cluster(window, &labels, p, v)?;
            let Some(z_final) = z.final_value() else {
                if !part.is_pseudo_infinite(v) {
                    return Err(Error::domain(format!(
                        "sample {s}: exploration reached the boundary from a finite cluster"
                    )));
                }
                return Ok(());
            };
            let members = part.members(v);
            let touching = window.touching_edges(&members)?;
            let open = touching.iter().filter(|&&e| labels.label(e) < p).count() as f64;
            let closed = touching.len() as f64 - open;
            let err = (z_final - ((1.0 - p) * open - p * closed)).abs();
            acc[0].record(
                s,
                err,
                err <= IDENTITY_TOLERANCE && z.stopping_time() == Some(touching.len()),
            );

            let infinite = part.infinite_mask();
            let tau = members
                .iter()
                .flat_map(|u| window.neighbors(u))
                .filter(|nb| infinite[nb.vertex])
                .count() as f64;
            let tilde = explore_off_infinity(window, &labels, p, v)?
                .final_value()
                .ok_or_else(|| Error::domain("the tilde exploration did not stop"))?;
            let err = (tilde - z_final - p * tau).abs();
            acc[1].record(s, err, err <= IDENTITY_TOLERANCE);

            let options = ExploreOptions {
                order: EdgeOrder::Descending,
                ..ExploreOptions::default()
            };
            let reversed = explore_with(window, &labels, p, v, options, None)?
                .final_value()
                .ok_or_else(|| Error::domain("the reversed exploration did not stop"))?;
            let err = (reversed - z_final).abs();
            acc[2].record(s, err, err <= IDENTITY_TOLERANCE);
            Ok(())
        },
        |a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.merge(y);
            }
        },
    )?;
    let [a, b, c] = tallies;
    Ok(vec![
        a.finish("exploration_final_value", settings.samples),
        b.finish("exploration_tilde_difference", settings.samples),
        c.finish("exploration_reversed_order", settings.samples),
    ])
}

/// Hull and Menger identities for `S` on every sample: the open outward
/// boundary of `Γ(S ∩ K_∞)` equals the set of open edges `e ∈ ∂_E^→S` with
/// `e⁺ ↔ ∞` off `S`, and the number of all `e ∈ ∂_E^→S` with `e⁺ ↔ ∞` off `S`
/// is at least the number of edge-disjoint open paths from `S`.
pub fn check_hull_menger(
    window: &GraphWindow,
    set: &VertexSet,
    p: f64,
    settings: &McSettings,
) -> Result<Vec<IdentityCheck>> {
    settings.validate()?;
    check_set(window, set)?;
    let tallies = fold_samples(
        settings.samples,
        || (),
        |_, acc: &mut [Tally; 2], s| {
            let config = assign_uniforms(window, settings.seed, s).threshold(p)?;
            let h = hull(window, &config, set);
            let escaping_open = escaping_edges(window, &config, set, true)?;
            acc[0].record(s, 0.0, h.open_boundary == escaping_open);
            let indicator_sum = escaping_edges(window, &config, set, false)?.len();
            let paths = count_edge_disjoint_paths(window, &config, set, None)?;
            acc[1].record(
                s,
                paths.saturating_sub(indicator_sum) as f64,
                indicator_sum >= paths,
            );
            Ok(())
        },
        |a, b| {
            for (x, y) in a.iter_mut().zip(b) {
                x.merge(y);
            }
        },
    )?;
    let [a, b] = tallies;
    Ok(vec![
        a.finish("hull_open_boundary", settings.samples),
        b.finish("menger_lower_bound", settings.samples),
    ])
}
