//! Experiment configuration: parsing, validation, hashing and resolution of
//! vertex and set specifications against a window.

use std::path::{Path, PathBuf};

use percolab_core::isoperimetry::{AnnealSchedule, BadSetThreshold, IsoFunction, Normalization};
use percolab_core::{Family, GraphWindow, VertexSet};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// A full experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub window: WindowSpec,
    pub samples: u64,
    pub seed: u64,
    #[serde(default = "default_ci_level")]
    pub ci_level: f64,
    /// Critical point, used only to flag subcritical dimension fits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_c: Option<f64>,
    /// Replace Monte Carlo by exact enumeration wherever one exists.
    #[serde(default)]
    pub exhaustive: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(
        serialize_with = "kind_tagged::serialize",
        deserialize_with = "kind_tagged::deserialize"
    )]
    pub estimands: Vec<Estimand>,
}

fn default_ci_level() -> f64 {
    0.99
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub graph: Family,
    /// Vertices to treat as boundary instead of the natural one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Vec<VertexSpec>>,
}

/// A vertex: `"origin"`/`"center"`, an index, or coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexSpec {
    Index(usize),
    Coords(Vec<usize>),
    Named(String),
}

/// A vertex set: a list of vertices or `"ball(<vertex>, <radius>)"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetSpec {
    List(Vec<VertexSpec>),
    Text(String),
}

/// A list of sizes or an inclusive range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<usize>),
    Range { min: usize, max: usize },
}

impl Grid {
    pub fn values(&self) -> Vec<usize> {
        match self {
            Grid::List(v) => v.clone(),
            Grid::Range { min, max } => (*min..=*max).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityMethod {
    #[default]
    Escape,
    Green,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ThresholdSpec {
    Constant { constant: f64 },
    Scaled { c: f64, phi: IsoFunction },
}

impl ThresholdSpec {
    pub fn to_core(&self) -> BadSetThreshold {
        match self {
            ThresholdSpec::Constant { constant } => BadSetThreshold::Constant(*constant),
            ThresholdSpec::Scaled { c, phi } => BadSetThreshold::Scaled {
                c: *c,
                phi: phi.clone(),
            },
        }
    }
}

/// `C·exp(−(c/2)·φ(n))`; `C` is given or fitted at `fit_at`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BadSetBound {
    pub c: f64,
    pub phi: IsoFunction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_at: Option<usize>,
}

/// One quantity to estimate or check. In JSON the variant is named by a
/// `"kind"` field next to the parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Estimand {
    /// Raw per-sample records.
    Samples {
        v: VertexSpec,
        p: Vec<f64>,
    },
    Disconnect {
        set: SetSpec,
        p: Vec<f64>,
    },
    PsiSum {
        set: SetSpec,
        p: Vec<f64>,
    },
    ClusterTail {
        v: VertexSpec,
        p: Vec<f64>,
        n: Grid,
    },
    DimensionFit {
        v: VertexSpec,
        p: f64,
        #[serde(default = "default_fit_min")]
        n_min: usize,
        #[serde(default = "default_fit_max")]
        n_max: usize,
    },
    Repulsion {
        v: VertexSpec,
        p1: f64,
        p2: f64,
        n: Grid,
    },
    Azuma {
        v: VertexSpec,
        p: f64,
        m: Vec<usize>,
        n: Vec<usize>,
    },
    Ir {
        set: SetSpec,
        p: Vec<f64>,
        r: Vec<usize>,
    },
    Stability {
        set: SetSpec,
        p1: f64,
        p2: f64,
        r: Vec<usize>,
    },
    BadSet {
        v: VertexSpec,
        p: f64,
        n: Vec<usize>,
        threshold: ThresholdSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bound: Option<BadSetBound>,
    },
    Capacity {
        set: SetSpec,
        walkers: u64,
        max_steps: u64,
        #[serde(default)]
        method: CapacityMethod,
    },
    Dgrsy {
        set: SetSpec,
        p: Vec<f64>,
        walkers: u64,
        max_steps: u64,
    },
    Markov {
        distributions: usize,
        support: usize,
        max: f64,
        theta: Vec<f64>,
    },
    ExplorationIdentities {
        v: VertexSpec,
        p: Vec<f64>,
    },
    HullMenger {
        set: SetSpec,
        p: Vec<f64>,
    },
    ConditionalLaw {
        p1: f64,
        p2: f64,
    },
    Profile {
        v: VertexSpec,
        max_size: usize,
        phi: IsoFunction,
        #[serde(default = "default_normalization")]
        normalization: Normalization,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        heuristic_sizes: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        schedule: Option<AnnealSchedule>,
    },
    Uniform {
        d: f64,
        max_size: usize,
    },
}

fn default_fit_min() -> usize {
    8
}

fn default_fit_max() -> usize {
    200
}

fn default_normalization() -> Normalization {
    Normalization::DegreeVolume
}

impl Estimand {
    pub fn kind(&self) -> &'static str {
        match self {
            Estimand::Samples { .. } => "samples",
            Estimand::Disconnect { .. } => "disconnect",
            Estimand::PsiSum { .. } => "psi_sum",
            Estimand::ClusterTail { .. } => "cluster_tail",
            Estimand::DimensionFit { .. } => "dimension_fit",
            Estimand::Repulsion { .. } => "repulsion",
            Estimand::Azuma { .. } => "azuma",
            Estimand::Ir { .. } => "ir",
            Estimand::Stability { .. } => "stability",
            Estimand::BadSet { .. } => "bad_set",
            Estimand::Capacity { .. } => "capacity",
            Estimand::Dgrsy { .. } => "dgrsy",
            Estimand::Markov { .. } => "markov",
            Estimand::ExplorationIdentities { .. } => "exploration_identities",
            Estimand::HullMenger { .. } => "hull_menger",
            Estimand::ConditionalLaw { .. } => "conditional_law",
            Estimand::Profile { .. } => "profile",
            Estimand::Uniform { .. } => "uniform",
        }
    }
}

// Estimands are converted between `{"kind": k, ...}` and the externally
// tagged `{k: {...}}` form, which keeps error paths precise.
mod kind_tagged {
    use serde::de::Error as _;
    use serde::ser::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::{Map, Value};

    use super::Estimand;

    pub fn to_external(value: Value) -> Result<(String, Value), (String, String)> {
        let Value::Object(mut map) = value else {
            return Err((String::new(), "expected an object".into()));
        };
        let kind = match map.remove("kind") {
            Some(Value::String(k)) => k,
            Some(_) => return Err(("kind".into(), "expected a string".into())),
            None => return Err((String::new(), "missing field `kind`".into())),
        };
        let tagged = Value::Object(Map::from_iter([(kind.clone(), Value::Object(map))]));
        Ok((kind, tagged))
    }

    /// Parses one estimand; errors carry the path inside it.
    pub fn parse(value: Value) -> Result<Estimand, (String, String)> {
        let (kind, tagged) = to_external(value)?;
        serde_path_to_error::deserialize(tagged).map_err(|e| {
            let path = e.path().to_string();
            let inner = path
                .strip_prefix(kind.as_str())
                .unwrap_or("")
                .trim_start_matches('.');
            (inner.to_string(), e.into_inner().to_string())
        })
    }

    pub fn serialize<S: Serializer>(estimands: &[Estimand], s: S) -> Result<S::Ok, S::Error> {
        let mut out = Vec::with_capacity(estimands.len());
        for est in estimands {
            let Value::Object(map) = serde_json::to_value(est).map_err(S::Error::custom)? else {
                return Err(S::Error::custom("estimand did not serialize to an object"));
            };
            let (kind, body) = map
                .into_iter()
                .next()
                .ok_or_else(|| S::Error::custom("empty estimand"))?;
            let Value::Object(mut fields) = body else {
                return Err(S::Error::custom("estimand body is not an object"));
            };
            fields.insert("kind".into(), Value::String(kind));
            out.push(Value::Object(fields));
        }
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Estimand>, D::Error> {
        Vec::<Value>::deserialize(d)?
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                parse(v).map_err(|(path, msg)| D::Error::custom(format!("[{i}].{path}: {msg}")))
            })
            .collect()
    }
}

/// Reads and validates a config file; schema violations name the JSON path.
pub fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<ExperimentConfig, CliError> {
    let mut value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid JSON: {e}")))?;
    // Estimands are parsed one at a time so that errors keep their full path.
    let raw = match value.get_mut("estimands") {
        Some(serde_json::Value::Array(items)) => Some(std::mem::take(items)),
        _ => None,
    };
    let mut config: ExperimentConfig = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        CliError::Config(format!("at `{path}`: {}", e.into_inner()))
    })?;
    if let Some(items) = raw {
        config.estimands = items
            .into_iter()
            .enumerate()
            .map(|(i, v)| {
                kind_tagged::parse(v).map_err(|(path, msg)| {
                    let sep = if path.is_empty() { "" } else { "." };
                    CliError::Config(format!("at `estimands[{i}]{sep}{path}`: {msg}"))
                })
            })
            .collect::<Result<_, _>>()?;
    }
    config.validate()?;
    Ok(config)
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Config(format!("at `{}`: {}", path.into(), message.into()))
}

fn check_p(path: String, p: f64) -> Result<(), CliError> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(invalid(path, format!("p = {p} must lie in (0, 1]")))
    }
}

fn check_ps(path: String, ps: &[f64]) -> Result<(), CliError> {
    if ps.is_empty() {
        return Err(invalid(path, "at least one value is required"));
    }
    for (i, &p) in ps.iter().enumerate() {
        check_p(format!("{path}[{i}]"), p)?;
    }
    Ok(())
}

fn check_pair(path: &str, p1: f64, p2: f64) -> Result<(), CliError> {
    check_p(format!("{path}.p1"), p1)?;
    check_p(format!("{path}.p2"), p2)?;
    if !(p1 < p2 && p2 < 1.0) {
        return Err(invalid(
            path,
            format!("need p1 < p2 < 1, got {p1} and {p2}"),
        ));
    }
    Ok(())
}

fn nonempty<T>(path: String, values: &[T]) -> Result<(), CliError> {
    if values.is_empty() {
        Err(invalid(path, "at least one value is required"))
    } else {
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(invalid(
                "schema_version",
                format!(
                    "unsupported version {}, expected {SCHEMA_VERSION}",
                    self.schema_version
                ),
            ));
        }
        if self.samples == 0 {
            return Err(invalid("samples", "at least one sample is required"));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(invalid(
                "ci_level",
                format!("{} must lie in (0, 1)", self.ci_level),
            ));
        }
        if let Some(p_c) = self.p_c {
            check_p("p_c".into(), p_c)?;
        }
        if self.workers == Some(0) {
            return Err(invalid("workers", "must be at least 1"));
        }
        if self.estimands.is_empty() {
            return Err(CliError::Config("no estimands".into()));
        }
        for (i, est) in self.estimands.iter().enumerate() {
            validate_estimand(&format!("estimands[{i}]"), est)?;
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, ignoring fields that cannot
    /// change results (output directory and worker count).
    pub fn hash(&self) -> String {
        let mut view = self.clone();
        view.output_dir = None;
        view.workers = None;
        let bytes = serde_json::to_vec(&view).expect("config serializes");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn build_window(&self) -> Result<GraphWindow, CliError> {
        let window = GraphWindow::build(&self.window.graph)
            .map_err(|e| invalid("window.graph", e.to_string()))?;
        match &self.window.boundary {
            None => Ok(window),
            Some(specs) => {
                let vertices = specs
                    .iter()
                    .enumerate()
                    .map(|(i, s)| resolve_vertex(&window, s, &format!("window.boundary[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                window
                    .with_boundary(&vertices)
                    .map_err(|e| invalid("window.boundary", e.to_string()))
            }
        }
    }
}

fn validate_estimand(path: &str, est: &Estimand) -> Result<(), CliError> {
    match est {
        Estimand::Samples { p, .. }
        | Estimand::Disconnect { p, .. }
        | Estimand::PsiSum { p, .. }
        | Estimand::ExplorationIdentities { p, .. }
        | Estimand::HullMenger { p, .. } => check_ps(format!("{path}.p"), p),
        Estimand::ClusterTail { p, n, .. } => {
            check_ps(format!("{path}.p"), p)?;
            nonempty(format!("{path}.n"), &n.values())
        }
        Estimand::DimensionFit {
            p, n_min, n_max, ..
        } => {
            check_p(format!("{path}.p"), *p)?;
            if n_min > n_max {
                return Err(invalid(format!("{path}.n_min"), "must not exceed n_max"));
            }
            Ok(())
        }
        Estimand::Repulsion { p1, p2, n, .. } => {
            check_pair(path, *p1, *p2)?;
            nonempty(format!("{path}.n"), &n.values())
        }
        Estimand::Azuma { p, m, n, .. } => {
            check_p(format!("{path}.p"), *p)?;
            if *p >= 1.0 {
                return Err(invalid(format!("{path}.p"), "must be below 1"));
            }
            nonempty(format!("{path}.m"), m)?;
            nonempty(format!("{path}.n"), n)
        }
        Estimand::Ir { p, r, .. } => {
            check_ps(format!("{path}.p"), p)?;
            nonempty(format!("{path}.r"), r)
        }
        Estimand::Stability { p1, p2, r, .. } => {
            check_pair(path, *p1, *p2)?;
            nonempty(format!("{path}.r"), r)
        }
        Estimand::BadSet {
            p,
            n,
            threshold,
            bound,
            ..
        } => {
            check_p(format!("{path}.p"), *p)?;
            nonempty(format!("{path}.n"), n)?;
            if let ThresholdSpec::Scaled { phi, .. } = threshold {
                phi.validate()
                    .map_err(|e| invalid(format!("{path}.threshold.phi"), e.to_string()))?;
            }
            if let Some(b) = bound {
                b.phi
                    .validate()
                    .map_err(|e| invalid(format!("{path}.bound.phi"), e.to_string()))?;
                match (b.constant, b.fit_at) {
                    (Some(_), None) => {}
                    (None, Some(n0)) if n.contains(&n0) => {}
                    (None, Some(_)) => {
                        return Err(invalid(
                            format!("{path}.bound.fit_at"),
                            "must be one of the n values",
                        ))
                    }
                    _ => {
                        return Err(invalid(
                            format!("{path}.bound"),
                            "give exactly one of `constant` and `fit_at`",
                        ))
                    }
                }
            }
            Ok(())
        }
        Estimand::Capacity {
            walkers, max_steps, ..
        } => {
            if *walkers == 0 || *max_steps == 0 {
                return Err(invalid(path, "walkers and max_steps must be positive"));
            }
            Ok(())
        }
        Estimand::Dgrsy {
            p,
            walkers,
            max_steps,
            ..
        } => {
            check_ps(format!("{path}.p"), p)?;
            if *walkers == 0 || *max_steps == 0 {
                return Err(invalid(path, "walkers and max_steps must be positive"));
            }
            Ok(())
        }
        Estimand::Markov {
            distributions,
            support,
            max,
            theta,
        } => {
            if *distributions == 0 || *support == 0 {
                return Err(invalid(path, "distributions and support must be positive"));
            }
            if !(max.is_finite() && *max > 0.0) {
                return Err(invalid(format!("{path}.max"), "must be positive"));
            }
            nonempty(format!("{path}.theta"), theta)?;
            for (i, t) in theta.iter().enumerate() {
                if !(*t > 0.0 && *t < 1.0) {
                    return Err(invalid(
                        format!("{path}.theta[{i}]"),
                        format!("{t} must lie in (0, 1)"),
                    ));
                }
            }
            Ok(())
        }
        Estimand::ConditionalLaw { p1, p2 } => check_pair(path, *p1, *p2),
        Estimand::Profile { phi, .. } => phi
            .validate()
            .map_err(|e| invalid(format!("{path}.phi"), e.to_string())),
        Estimand::Uniform { d, .. } => {
            if !(*d > 1.0 && d.is_finite()) {
                return Err(invalid(format!("{path}.d"), "must exceed 1"));
            }
            Ok(())
        }
    }
}

/// Resolves a vertex specification; `path` is used in error messages.
pub fn resolve_vertex(
    window: &GraphWindow,
    spec: &VertexSpec,
    path: &str,
) -> Result<usize, CliError> {
    match spec {
        VertexSpec::Index(v) if *v < window.num_vertices() => Ok(*v),
        VertexSpec::Index(v) => Err(invalid(path, format!("vertex {v} is not in the window"))),
        VertexSpec::Coords(c) => window
            .vertex_at(c)
            .ok_or_else(|| invalid(path, format!("no vertex at coordinates {c:?}"))),
        VertexSpec::Named(name) => match name.trim() {
            "origin" | "center" => Ok(window.origin()),
            other => Err(invalid(path, format!("unknown vertex name `{other}`"))),
        },
    }
}

pub fn resolve_set(
    window: &GraphWindow,
    spec: &SetSpec,
    path: &str,
) -> Result<VertexSet, CliError> {
    match spec {
        SetSpec::List(items) => {
            let vertices = items
                .iter()
                .enumerate()
                .map(|(i, s)| resolve_vertex(window, s, &format!("{path}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            if vertices.is_empty() {
                return Err(invalid(path, "the set is empty"));
            }
            VertexSet::new(window, vertices).map_err(|e| invalid(path, e.to_string()))
        }
        SetSpec::Text(text) => {
            let (center, radius) = parse_ball(text).ok_or_else(|| {
                invalid(
                    path,
                    format!("expected \"ball(<vertex>, <radius>)\", got {text:?}"),
                )
            })?;
            let v = resolve_vertex(window, &center, path)?;
            window
                .ball(v, radius)
                .map_err(|e| invalid(path, e.to_string()))
        }
    }
}

fn parse_ball(text: &str) -> Option<(VertexSpec, usize)> {
    let inner = text.trim().strip_prefix("ball(")?.strip_suffix(')')?;
    let (center, radius) = inner.rsplit_once(',')?;
    let radius = radius.trim().parse().ok()?;
    let center = center.trim();
    let spec = match center {
        "origin" | "center" => VertexSpec::Named(center.to_string()),
        _ => serde_json::from_str::<VertexSpec>(center).ok()?,
    };
    match spec {
        VertexSpec::Named(ref s) if s != "origin" && s != "center" => None,
        spec => Some((spec, radius)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(estimands: &str) -> String {
        format!(
            r#"{{"schema_version": 1, "window": {{"graph": {{"family": "hypercubic", "dim": 2, "side": 8}}}},
               "samples": 10, "seed": 1, "estimands": {estimands}}}"#
        )
    }

    #[test]
    fn empty_estimands_rejected() {
        let err = parse(&minimal("[]")).unwrap_err();
        assert_eq!(err.to_string(), "no estimands");
    }

    #[test]
    fn schema_errors_name_the_path() {
        let err = parse(&minimal(
            r#"[{"kind": "disconnect", "set": "ball(origin, 1)", "p": [0.5, "x"]}]"#,
        ))
        .unwrap_err();
        assert!(err.to_string().contains("`estimands[0].p[1]`"), "{err}");
        let err = parse(&minimal(
            r#"[{"kind": "profile", "v": 0, "max_size": 3, "phi": {"kind": "power"}}]"#,
        ))
        .unwrap_err();
        assert!(err.to_string().contains("`estimands[0].phi`"), "{err}");
        let err = parse(r#"{"schema_version": 1, "window": {"graph": {"family": "hypercubic", "dim": "2", "side": 8}},
            "samples": 10, "seed": 1, "estimands": []}"#).unwrap_err();
        assert!(err.to_string().contains("window.graph"), "{err}");
        let err = parse(&minimal(
            r#"[{"kind": "disconnect", "set": "ball(origin, 1)", "p": [0.5, 1.5]}]"#,
        ))
        .unwrap_err();
        assert!(err.to_string().contains("estimands[0].p[1]"), "{err}");
        let err = parse(&minimal(
            r#"[{"kind": "repulsion", "v": "origin", "p1": 0.7, "p2": 0.5, "n": [1]}]"#,
        ))
        .unwrap_err();
        assert!(err.to_string().contains("estimands[0]"), "{err}");
    }

    #[test]
    fn estimands_round_trip_with_kind_fields() {
        let text = minimal(
            r#"[{"kind": "cluster_tail", "v": [1, 2], "p": [0.6], "n": {"min": 1, "max": 3}}]"#,
        );
        let config = parse(&text).unwrap();
        let json = serde_json::to_value(&config).unwrap();
        assert_eq!(json["estimands"][0]["kind"], "cluster_tail");
        assert_eq!(json["estimands"][0]["n"]["max"], 3);
        let again: ExperimentConfig = serde_json::from_value(json).unwrap();
        assert_eq!(again, config);
        let err = parse(&minimal(r#"[{"kind": "nonsense"}]"#)).unwrap_err();
        assert!(
            err.to_string().contains("estimands[0]") && err.to_string().contains("unknown variant"),
            "{err}"
        );
        let err = parse(&minimal(r#"[{"p": [0.5]}]"#)).unwrap_err();
        assert!(err.to_string().contains("missing field `kind`"), "{err}");
    }

    #[test]
    fn unknown_fields_rejected() {
        let err = parse(&minimal(
            r#"[{"kind": "disconnect", "set": [0], "p": [0.5], "q": 1}]"#,
        ))
        .unwrap_err();
        assert!(err.to_string().contains("estimands[0]"), "{err}");
    }

    #[test]
    fn ball_specs_resolve() {
        let w = GraphWindow::hypercubic(2, 9).unwrap();
        let s = resolve_set(&w, &SetSpec::Text("ball(origin, 1)".into()), "s").unwrap();
        assert_eq!(s, w.ball(w.origin(), 1).unwrap());
        let s = resolve_set(&w, &SetSpec::Text("ball([2, 3], 0)".into()), "s").unwrap();
        assert_eq!(s.members(), &[w.vertex_at(&[2, 3]).unwrap()]);
        assert!(resolve_set(&w, &SetSpec::Text("ball(nowhere, 1)".into()), "s").is_err());
        assert!(resolve_set(&w, &SetSpec::Text("disk(origin, 1)".into()), "s").is_err());
        assert!(resolve_set(&w, &SetSpec::List(vec![]), "s").is_err());
    }

    #[test]
    fn hash_ignores_workers_and_output() {
        let mut a = parse(&minimal(
            r#"[{"kind": "disconnect", "set": [0], "p": [0.5]}]"#,
        ))
        .unwrap();
        let h = a.hash();
        a.workers = Some(8);
        a.output_dir = Some("elsewhere".into());
        assert_eq!(a.hash(), h);
        a.seed = 2;
        assert_ne!(a.hash(), h);
    }
}
