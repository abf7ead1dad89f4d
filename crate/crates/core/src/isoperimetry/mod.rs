//! Isoperimetric profiles of windows and percolation clusters.

mod anneal;
mod enumerate;

pub use anneal::AnnealSchedule;
pub use enumerate::{enumerate_anchored_sets, Ambient, ENUMERATION_GUARD};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphWindow, VertexSet};
use crate::percolation::Configuration;
use crate::stats::least_squares;

/// Largest edge count accepted by [`bad_set_search`].
pub const BAD_SET_GUARD: usize = 32;

/// Smallest `n` used by [`fit_dimension`]; shorter tails are dominated by
/// lattice effects.
pub const MIN_FIT_N: f64 = 8.0;

/// An increasing isoperimetric function with `φ(t) ≤ t` for `t ≥ 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum IsoFunction {
    /// `t ↦ t^((d′−1)/d′)`.
    Power { d_prime: f64 },
    /// Piecewise linear through `(t, φ(t))` knots, through the origin before
    /// the first knot and extended with the last slope after the last.
    Tabulated { points: Vec<(f64, f64)> },
}

impl IsoFunction {
    pub fn power(d_prime: f64) -> Result<Self> {
        let f = IsoFunction::Power { d_prime };
        f.validate()?;
        Ok(f)
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        let f = IsoFunction::Tabulated { points };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            IsoFunction::Power { d_prime } => {
                if !(d_prime.is_finite() && *d_prime >= 1.0) {
                    return Err(Error::config(
                        "d_prime",
                        format!("must be a finite number ≥ 1, got {d_prime}"),
                    ));
                }
            }
            IsoFunction::Tabulated { points } => {
                if points.is_empty() {
                    return Err(Error::config("points", "at least one knot is required"));
                }
                let mut prev = (0.0, 0.0);
                for &(t, y) in points {
                    if !(t.is_finite() && y.is_finite() && t > prev.0 && y > prev.1) {
                        return Err(Error::config(
                            "points",
                            format!("knots must be strictly increasing in both coordinates; ({t}, {y}) follows {prev:?}"),
                        ));
                    }
                    if y > t && t >= 1.0 {
                        return Err(Error::config("points", format!("φ({t}) = {y} exceeds t")));
                    }
                    prev = (t, y);
                }
                if self.tail_slope() > 1.0 {
                    return Err(Error::config(
                        "points",
                        "final slope above 1 makes φ(t) exceed t eventually",
                    ));
                }
            }
        }
        Ok(())
    }

    fn tail_slope(&self) -> f64 {
        match self {
            IsoFunction::Tabulated { points } => {
                let n = points.len();
                let (t1, y1) = points[n - 1];
                let (t0, y0) = if n >= 2 { points[n - 2] } else { (0.0, 0.0) };
                (y1 - y0) / (t1 - t0)
            }
            IsoFunction::Power { .. } => f64::NAN,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            IsoFunction::Power { d_prime } => {
                if t <= 0.0 {
                    0.0
                } else {
                    t.powf((d_prime - 1.0) / d_prime)
                }
            }
            IsoFunction::Tabulated { points } => {
                if t <= 0.0 {
                    return 0.0;
                }
                let mut prev = (0.0, 0.0);
                for &(x, y) in points {
                    if t <= x {
                        return prev.1 + (y - prev.1) * (t - prev.0) / (x - prev.0);
                    }
                    prev = (x, y);
                }
                prev.1 + self.tail_slope() * (t - prev.0)
            }
        }
    }
}

/// `ψ(t) = φ(t) / ln(2t/φ(t))`.
pub fn psi(phi: &IsoFunction, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("ψ needs t > 0, got {t}")));
    }
    let f = phi.eval(t);
    if f > t {
        return Err(Error::domain(format!("φ({t}) = {f} exceeds t")));
    }
    if f <= 0.0 {
        return Err(Error::domain(format!("φ({t}) = {f} is not positive")));
    }
    Ok(f / (2.0 * t / f).ln())
}

/// How an isoperimetric ratio is normalised.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `|∂W| / φ(Σ_{w∈W} deg w)`.
    DegreeVolume,
    /// `|∂W| / φ(|W|)`.
    Cardinality,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::DegreeVolume => "degree_volume",
            Normalization::Cardinality => "cardinality",
        }
    }
}

/// Best set found for one size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileResult {
    pub size: usize,
    pub ratio: f64,
    pub boundary: usize,
    pub volume: usize,
    pub set: VertexSet,
    pub exact: bool,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileOptions {
    pub max_size: usize,
    pub normalization: Normalization,
    /// Sizes beyond `max_size` to bound from above by annealing.
    pub heuristic_sizes: Vec<usize>,
    pub schedule: AnnealSchedule,
}

impl ProfileOptions {
    pub fn exact(max_size: usize, normalization: Normalization) -> Self {
        ProfileOptions {
            max_size,
            normalization,
            heuristic_sizes: Vec::new(),
            schedule: AnnealSchedule::default(),
        }
    }
}

fn volume_of(ambient: &Ambient<'_>, set: &[usize], normalization: Normalization) -> usize {
    match normalization {
        Normalization::DegreeVolume => set.iter().map(|&u| ambient.degree(u)).sum(),
        Normalization::Cardinality => set.len(),
    }
}

fn ratio(boundary: usize, volume: usize, phi: &IsoFunction) -> f64 {
    let denom = phi.eval(volume as f64);
    if denom > 0.0 {
        boundary as f64 / denom
    } else {
        f64::INFINITY
    }
}

/// Minimal isoperimetric ratio over connected sets containing `v`, per size.
///
/// Sizes up to `max_size` are exact minima over all such sets; the
/// `heuristic_sizes` are annealed upper bounds flagged `exact = false`. Sizes
/// larger than the anchor's ambient component are omitted. Sets with zero
/// volume (an isolated anchor) have infinite ratio.
pub fn anchored_profile(
    ambient: &Ambient<'_>,
    v: usize,
    phi: &IsoFunction,
    options: &ProfileOptions,
) -> Result<Vec<ProfileResult>> {
    phi.validate()?;
    let norm = options.normalization;
    // per size: (ratio, boundary, volume, set)
    type Best = Option<(f64, usize, usize, Vec<usize>)>;
    let mut best: Vec<Best> = vec![None; options.max_size + 1];
    let mut mask = vec![false; ambient.window().num_vertices()];
    enumerate_anchored_sets(ambient, v, options.max_size, |set| {
        for &u in set {
            mask[u] = true;
        }
        let b = ambient.boundary_size(set, &mask);
        for &u in set {
            mask[u] = false;
        }
        let vol = volume_of(ambient, set, norm);
        let r = ratio(b, vol, phi);
        let slot = &mut best[set.len()];
        if slot.as_ref().is_none_or(|s| r < s.0) {
            *slot = Some((r, b, vol, set.to_vec()));
        }
        true
    })?;
    let window = ambient.window();
    let mut out = Vec::new();
    for (size, entry) in best.into_iter().enumerate() {
        if let Some((r, b, vol, set)) = entry {
            out.push(ProfileResult {
                size,
                ratio: r,
                boundary: b,
                volume: vol,
                set: VertexSet::new(window, set)?,
                exact: true,
                normalization: norm,
            });
        }
    }
    for &size in &options.heuristic_sizes {
        if size <= options.max_size || size == 0 {
            continue;
        }
        let energy = |set: &[usize], inside: &[bool]| {
            ratio(
                ambient.boundary_size(set, inside),
                volume_of(ambient, set, norm),
                phi,
            )
        };
        if let Some((r, set)) = anneal::anneal(ambient, v, size, &options.schedule, energy) {
            let vs = VertexSet::new(window, set)?;
            let mask = vs.mask(window.num_vertices());
            out.push(ProfileResult {
                size,
                ratio: r,
                boundary: ambient.boundary_size(vs.members(), &mask),
                volume: volume_of(ambient, vs.members(), norm),
                set: vs,
                exact: false,
                normalization: norm,
            });
        }
    }
    Ok(out)
}

/// Cap on the open boundary of a bad set.
#[derive(Debug, Clone, PartialEq)]
pub enum BadSetThreshold {
    Constant(f64),
    /// `(c/4) · ψ(|W|)`.
    Scaled {
        c: f64,
        phi: IsoFunction,
    },
}

impl BadSetThreshold {
    fn cap(&self, size: usize) -> Result<f64> {
        match self {
            BadSetThreshold::Constant(x) => Ok(*x),
            BadSetThreshold::Scaled { c, phi } => Ok(c / 4.0 * psi(phi, size as f64)?),
        }
    }
}

/// A connected set witnessing the bad-set event.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BadSet {
    pub set: VertexSet,
    /// Edges of the window touching the set.
    pub edge_count: usize,
    /// Open edges with exactly one endpoint in the set.
    pub open_boundary: usize,
}

/// Searches for a set `W` connected by open edges with `v ∈ W`, exactly `n`
/// window edges touching `W`, and open edge boundary at most the threshold.
///
/// Returns `Ok(None)` only after every candidate has been examined. The
/// search prunes on the touching-edge count, which only grows as `W` grows;
/// if a candidate reaches the enumeration guard while still below `n`, the
/// search is refused instead of returning an uncertified answer.
pub fn bad_set_search(
    window: &GraphWindow,
    config: &Configuration,
    v: usize,
    n: usize,
    threshold: &BadSetThreshold,
) -> Result<Option<BadSet>> {
    if n > BAD_SET_GUARD {
        return Err(Error::Refused(format!(
            "bad-set search with n = {n} exceeds the guard of {BAD_SET_GUARD} edges"
        )));
    }
    if config.num_edges() != window.num_edges() {
        return Err(Error::domain("configuration does not match the window"));
    }
    if let BadSetThreshold::Scaled { phi, .. } = threshold {
        phi.validate()?;
    }
    let ambient = Ambient::open_subgraph(window, config);
    let mut mask = vec![false; window.num_vertices()];
    let mut found: Option<BadSet> = None;
    let mut capped = false;
    let mut failure: Option<Error> = None;
    enumerate_anchored_sets(&ambient, v, ENUMERATION_GUARD, |set| {
        if found.is_some() || failure.is_some() {
            return false;
        }
        for &u in set {
            mask[u] = true;
        }
        let mut degree_sum = 0;
        let mut internal_twice = 0;
        for &u in set {
            for nb in window.neighbors(u) {
                degree_sum += 1;
                if mask[nb.vertex] {
                    internal_twice += 1;
                }
            }
        }
        let touching = degree_sum - internal_twice / 2;
        let mut descend = touching < n;
        if touching == n {
            let open_boundary = ambient.boundary_size(set, &mask);
            match threshold.cap(set.len()) {
                Ok(cap) if open_boundary as f64 <= cap => {
                    found = Some(BadSet {
                        set: VertexSet::from_sorted_unchecked({
                            let mut s = set.to_vec();
                            s.sort_unstable();
                            s
                        }),
                        edge_count: touching,
                        open_boundary,
                    });
                }
                Ok(_) => {}
                Err(e) => failure = Some(e),
            }
        }
        if descend && set.len() == ENUMERATION_GUARD {
            capped = true;
            descend = false;
        }
        for &u in set {
            mask[u] = false;
        }
        descend
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    if found.is_none() && capped {
        return Err(Error::Refused(format!(
            "sets of {ENUMERATION_GUARD} vertices touch fewer than {n} edges; the search cannot be completed"
        )));
    }
    Ok(found)
}

/// Smallest observed uniform isoperimetric constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformCheck {
    pub constant: f64,
    pub witness: VertexSet,
    /// `(size, minimal ratio)` for every size examined.
    pub per_size: Vec<(usize, f64)>,
    pub sets_examined: u64,
}

/// Minimum of `|∂W| / (Σ deg)^((d−1)/d)` over connected sets of interior
/// vertices with at most `max_size` elements.
///
/// Interior vertices have their full degree in the window and are not on the
/// window boundary, so boundaries agree with those in the infinite graph.
/// Each set is enumerated once, from its smallest vertex.
pub fn check_uniform_isoperimetry(
    window: &GraphWindow,
    d: f64,
    max_size: usize,
) -> Result<UniformCheck> {
    if !(d > 1.0 && d.is_finite()) {
        return Err(Error::domain(format!("dimension must exceed 1, got {d}")));
    }
    let full_degree = window.infinite_degree();
    let interior: Vec<bool> = (0..window.num_vertices())
        .map(|u| !window.is_boundary(u) && window.degree(u) == full_degree)
        .collect();
    let exponent = (d - 1.0) / d;
    let full = Ambient::full(window);
    let mut allowed = vec![false; window.num_vertices()];
    let mut mask = vec![false; window.num_vertices()];
    let mut per_size = vec![f64::INFINITY; max_size + 1];
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut examined = 0;
    for anchor in 0..window.num_vertices() {
        if !interior[anchor] {
            continue;
        }
        for u in 0..window.num_vertices() {
            allowed[u] = interior[u] && u >= anchor;
        }
        let ambient = full.restricted(&allowed);
        examined += enumerate_anchored_sets(&ambient, anchor, max_size, |set| {
            for &u in set {
                mask[u] = true;
            }
            let b = full.boundary_size(set, &mask);
            for &u in set {
                mask[u] = false;
            }
            let vol = (set.len() * full_degree) as f64;
            let r = b as f64 / vol.powf(exponent);
            if r < per_size[set.len()] {
                per_size[set.len()] = r;
            }
            if best.as_ref().is_none_or(|(x, _)| r < *x) {
                best = Some((r, set.to_vec()));
            }
            true
        })?;
    }
    let (constant, set) = best.ok_or_else(|| Error::domain("window has no interior vertices"))?;
    Ok(UniformCheck {
        constant,
        witness: VertexSet::new(window, set)?,
        per_size: per_size
            .into_iter()
            .enumerate()
            .filter(|(_, r)| r.is_finite())
            .collect(),
        sets_examined: examined,
    })
}

/// Dimension estimate from a stretched-exponential tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionFit {
    pub d_prime: f64,
    pub standard_error: f64,
    pub slope: f64,
    pub slope_se: f64,
    pub points_used: usize,
}

/// Fits `log(−log p̂_n) = a + s·log n` over points with `n ≥ 8` and returns
/// `d′ = 1/(1−s)`. Input pairs are `(n, −log p̂_n)`.
pub fn fit_dimension(tail: &[(f64, f64)]) -> Result<DimensionFit> {
    let usable: Vec<(f64, f64)> = tail
        .iter()
        .copied()
        .filter(|&(n, y)| n >= MIN_FIT_N && y.is_finite() && y > 0.0)
        .collect();
    if usable.len() < 5 {
        return Err(Error::Unfittable(format!(
            "{} of {} points have n ≥ {MIN_FIT_N} and 0 < p̂ < 1; at least 5 are needed",
            usable.len(),
            tail.len()
        )));
    }
    let x: Vec<f64> = usable.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = usable.iter().map(|p| p.1.ln()).collect();
    let fit = least_squares(&x, &y)?;
    let s = fit.slope;
    const EPS: f64 = 1e-9;
    if !(s > EPS && s < 1.0 - EPS) {
        return Err(Error::Unfittable(format!(
            "fitted exponent s = {s:.6} (se {:.3e}) lies outside (0, 1); d′ = 1/(1−s) is not defined",
            fit.slope_se
        )));
    }
    Ok(DimensionFit {
        d_prime: 1.0 / (1.0 - s),
        standard_error: fit.slope_se / (1.0 - s).powi(2),
        slope: s,
        slope_se: fit.slope_se,
        points_used: usable.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_values() {
        let id = IsoFunction::tabulated(vec![(1.0, 1.0), (2.0, 2.0)]).unwrap();
        assert!((psi(&id, 5.0).unwrap() - 5.0 / 2f64.ln()).abs() < 1e-12);
        let sq = IsoFunction::power(2.0).unwrap();
        assert!((psi(&sq, 4.0).unwrap() - 2.0 / 4f64.ln()).abs() < 1e-12);
        let mut last = f64::INFINITY;
        for k in 1..40 {
            let t = 2f64.powi(k);
            let q = psi(&sq, t).unwrap() / sq.eval(t);
            assert!(q < last);
            last = q;
        }
        assert!(last < 0.1);
        let big = IsoFunction::Tabulated {
            points: vec![(1.0, 2.0)],
        };
        assert!(psi(&big, 1.0).is_err());
    }

    #[test]
    fn iso_function_validation() {
        assert!(IsoFunction::power(0.5).is_err());
        assert!(IsoFunction::tabulated(vec![(1.0, 1.0), (2.0, 0.5)]).is_err());
        assert!(IsoFunction::tabulated(vec![(1.0, 0.5), (2.0, 3.0)]).is_err());
        let f = IsoFunction::tabulated(vec![(2.0, 1.0), (4.0, 2.0)]).unwrap();
        assert_eq!(f.eval(1.0), 0.5);
        assert_eq!(f.eval(3.0), 1.5);
        assert_eq!(f.eval(8.0), 4.0);
        assert_eq!(IsoFunction::power(1.0).unwrap().eval(17.0), 1.0);
    }

    #[test]
    fn psi_below_phi_when_log_exceeds_one() {
        let f = IsoFunction::power(3.0).unwrap();
        for t in 1..500 {
            let t = t as f64;
            if 2.0 * t / f.eval(t) > std::f64::consts::E {
                assert!(psi(&f, t).unwrap() < f.eval(t));
            }
        }
    }

    #[test]
    fn path_profile_decays() {
        let w = GraphWindow::hypercubic(1, 12).unwrap();
        let phi = IsoFunction::power(2.0).unwrap();
        let prof = anchored_profile(
            &Ambient::full(&w),
            0,
            &phi,
            &ProfileOptions::exact(10, Normalization::DegreeVolume),
        )
        .unwrap();
        for r in &prof {
            let n = r.size as f64;
            assert_eq!(r.boundary, 1);
            assert!((r.ratio - 1.0 / (2.0 * n - 1.0).sqrt()).abs() < 1e-12);
        }
        let card = anchored_profile(
            &Ambient::full(&w),
            0,
            &phi,
            &ProfileOptions::exact(10, Normalization::Cardinality),
        )
        .unwrap();
        assert!((card[9].ratio - 1.0 / 10f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn profile_with_unit_phi_is_min_boundary() {
        let w = GraphWindow::hypercubic(2, 7).unwrap();
        let phi = IsoFunction::power(1.0).unwrap();
        let prof = anchored_profile(
            &Ambient::full(&w),
            w.origin(),
            &phi,
            &ProfileOptions::exact(6, Normalization::DegreeVolume),
        )
        .unwrap();
        let expected = [4, 6, 8, 8, 10, 10];
        for (r, e) in prof.iter().zip(expected) {
            assert_eq!(r.ratio, e as f64);
        }
    }

    #[test]
    fn square_grid_profile_positive_and_symmetric() {
        let w = GraphWindow::hypercubic(2, 9).unwrap();
        let phi = IsoFunction::power(2.0).unwrap();
        let opts = ProfileOptions::exact(9, Normalization::Cardinality);
        let v = w.origin();
        let prof = anchored_profile(&Ambient::full(&w), v, &phi, &opts).unwrap();
        for r in &prof {
            assert!(r.ratio >= 2.0 && r.exact);
        }
        // 3x3 square: boundary 12 over sqrt(9)
        assert_eq!(prof[8].ratio, 4.0);
        // reflecting the window maps minima to minima
        let reflect = |u: usize| {
            let c = w.coordinates(u).unwrap();
            w.vertex_at(&[8 - c[0], c[1]]).unwrap()
        };
        let shifted = w.vertex_at(&[3, 4]).unwrap();
        let a = anchored_profile(&Ambient::full(&w), shifted, &phi, &opts).unwrap();
        let b = anchored_profile(&Ambient::full(&w), reflect(shifted), &phi, &opts).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.ratio, y.ratio);
        }
    }

    #[test]
    fn heuristic_bounds_exact_from_above() {
        let w = GraphWindow::hypercubic(2, 11).unwrap();
        let phi = IsoFunction::power(2.0).unwrap();
        let mut opts = ProfileOptions::exact(7, Normalization::DegreeVolume);
        let exact = anchored_profile(&Ambient::full(&w), w.origin(), &phi, &opts).unwrap();
        opts.max_size = 3;
        opts.heuristic_sizes = vec![5, 6, 7];
        opts.schedule.steps = 800;
        let mixed = anchored_profile(&Ambient::full(&w), w.origin(), &phi, &opts).unwrap();
        for h in mixed.iter().filter(|r| !r.exact) {
            let e = &exact[h.size - 1];
            assert!(h.ratio >= e.ratio - 1e-12);
            assert!(w.is_connected_set(&h.set).unwrap() && h.set.contains(w.origin()));
        }
        assert_eq!(mixed.iter().filter(|r| !r.exact).count(), 3);
    }

    #[test]
    fn exponent_monotone_for_same_set() {
        let w = GraphWindow::hypercubic(2, 7).unwrap();
        let lo = IsoFunction::power(1.5).unwrap();
        let hi = IsoFunction::power(3.0).unwrap();
        let opts = ProfileOptions::exact(5, Normalization::DegreeVolume);
        let a = anchored_profile(&Ambient::full(&w), w.origin(), &lo, &opts).unwrap();
        let b = anchored_profile(&Ambient::full(&w), w.origin(), &hi, &opts).unwrap();
        for (x, y) in a.iter().zip(&b) {
            // evaluate the same set under both exponents
            assert!(x.boundary as f64 / hi.eval(x.volume as f64) <= x.ratio + 1e-12);
            assert!(y.ratio <= x.ratio + 1e-12);
        }
    }

    #[test]
    fn profile_rejects_unknown_anchor() {
        let w = GraphWindow::hypercubic(2, 3).unwrap();
        let phi = IsoFunction::power(2.0).unwrap();
        let opts = ProfileOptions::exact(3, Normalization::DegreeVolume);
        assert!(anchored_profile(&Ambient::full(&w), 9, &phi, &opts).is_err());
    }

    fn all_open(w: &GraphWindow) -> Configuration {
        Configuration::from_open(vec![true; w.num_edges()], 1.0)
    }

    #[test]
    fn bad_set_whole_cluster() {
        // path 0-1-2 with edges (0,1),(1,2) open and (2,3) closed
        let w = GraphWindow::hypercubic(1, 6).unwrap();
        let config = Configuration::from_open([true, true, false, true, true], 0.5);
        // the cluster {0,1,2} touches three window edges and has no open boundary
        let hit = bad_set_search(&w, &config, 0, 3, &BadSetThreshold::Constant(0.0))
            .unwrap()
            .unwrap();
        assert_eq!(hit.set.members(), &[0, 1, 2]);
        assert_eq!(hit.open_boundary, 0);
        // proper subsets of a finite cluster have open boundary at least 1
        assert!(
            bad_set_search(&w, &config, 0, 2, &BadSetThreshold::Constant(0.0))
                .unwrap()
                .is_none()
        );
        assert!(
            bad_set_search(&w, &config, 0, 2, &BadSetThreshold::Constant(1.0))
                .unwrap()
                .is_some()
        );
        assert!(
            bad_set_search(&w, &config, 0, 4, &BadSetThreshold::Constant(9.0))
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn bad_set_guard_and_refusal() {
        let w = GraphWindow::hypercubic(2, 9).unwrap();
        let open = all_open(&w);
        let err =
            bad_set_search(&w, &open, w.origin(), 33, &BadSetThreshold::Constant(0.0)).unwrap_err();
        assert!(matches!(err, Error::Refused(_)));
        // a long open path keeps touching few edges
        let p = GraphWindow::hypercubic(1, 40).unwrap();
        let err =
            bad_set_search(&p, &all_open(&p), 0, 30, &BadSetThreshold::Constant(0.0)).unwrap_err();
        assert!(matches!(err, Error::Refused(_)));
    }

    #[test]
    fn bad_set_edge_counts_on_grid() {
        // interior single vertex in Z^2 touches 4 edges; pairs 7; L-triples and lines 10
        let w = GraphWindow::hypercubic(2, 9).unwrap();
        let open = all_open(&w);
        let v = w.origin();
        let thr = BadSetThreshold::Constant(f64::INFINITY);
        for (n, expect) in [(4, true), (5, false), (7, true), (8, false), (10, true)] {
            assert_eq!(
                bad_set_search(&w, &open, v, n, &thr).unwrap().is_some(),
                expect,
                "n = {n}"
            );
        }
    }

    #[test]
    fn uniform_constant_on_square_grid() {
        let single =
            check_uniform_isoperimetry(&GraphWindow::hypercubic(2, 3).unwrap(), 2.0, 1).unwrap();
        assert!((single.constant - 4f64.sqrt()).abs() < 1e-12);
        let mut constants = Vec::new();
        for side in [7, 9] {
            let w = GraphWindow::hypercubic(2, side).unwrap();
            constants.push(check_uniform_isoperimetry(&w, 2.0, 6).unwrap().constant);
        }
        assert!(constants[0] > 0.9);
        assert!((constants[0] - constants[1]).abs() < 1e-12);
        let wrong =
            check_uniform_isoperimetry(&GraphWindow::hypercubic(2, 9).unwrap(), 6.0, 7).unwrap();
        let sizes: Vec<f64> = wrong.per_size.iter().map(|p| p.1).collect();
        assert!(sizes.last().unwrap() < &sizes[0]);
        assert!(
            check_uniform_isoperimetry(&GraphWindow::hypercubic(2, 3).unwrap(), 1.0, 2).is_err()
        );
    }

    #[test]
    fn uniform_counts_every_set_once() {
        let w = GraphWindow::hypercubic(2, 5).unwrap();
        let check = check_uniform_isoperimetry(&w, 2.0, 3).unwrap();
        // interior is a 3x3 block: 9 singletons, 12 dominoes, 22 trominoes
        assert_eq!(check.sets_examined, 9 + 12 + 22);
    }

    #[test]
    fn dimension_fit_synthetic() {
        let half: Vec<(f64, f64)> = (1..=20).map(|n| (n as f64, (n as f64).sqrt())).collect();
        let fit = fit_dimension(&half).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12 && (fit.d_prime - 2.0).abs() < 1e-10);
        assert_eq!(fit.points_used, 13);
        let linear: Vec<(f64, f64)> = (1..=20).map(|n| (n as f64, n as f64)).collect();
        assert!(matches!(fit_dimension(&linear), Err(Error::Unfittable(_))));
        let few: Vec<(f64, f64)> = (1..=10).map(|n| (n as f64, (n as f64).sqrt())).collect();
        assert!(matches!(fit_dimension(&few), Err(Error::Unfittable(_))));
    }
}
