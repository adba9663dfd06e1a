//! INI-style run configuration.
//!
//! ```text
//! # comment
//! [problem]
//! alpha = 0.5
//! a = 0.1, 0.2
//! ```
//!
//! Keys must appear under one of `[problem]`, `[numerics]`, `[output]`.
//! Lists are comma-separated. Unknown sections or keys, duplicates and
//! out-of-range values are rejected.

use std::fmt::Write as _;
use std::path::PathBuf;

use fracres_core::heat_example::{build_heat_problem_with_points, HeatExampleParams, Variant};
use fracres_core::{Error as CoreError, Prefactor, ProblemSpec};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown section [{name}]{}", hint(.suggestion))]
    UnknownSection {
        line: usize,
        name: String,
        suggestion: Option<String>,
    },
    #[error("line {line}: unknown key `{key}` in [{section}]{}", hint(.suggestion))]
    UnknownKey {
        line: usize,
        section: String,
        key: String,
        suggestion: Option<String>,
    },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("{}`{key}` = {value}: {reason}", at(.line))]
    Range {
        line: Option<usize>,
        key: String,
        value: String,
        reason: String,
    },
    #[error("{0}")]
    Problem(String),
}

fn hint(s: &Option<String>) -> String {
    s.as_ref()
        .map(|s| format!(" (did you mean `{s}`?)"))
        .unwrap_or_default()
}

fn at(line: &Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

const SECTIONS: [&str; 3] = ["problem", "numerics", "output"];
const PROBLEM_KEYS: [&str; 14] = [
    "alpha",
    "T",
    "k",
    "mu1",
    "mu2",
    "g_variant",
    "a",
    "t_points",
    "p_coeffs",
    "alpha1",
    "alpha2",
    "alpha3",
    "radius",
    "prefactor",
];
const NUMERICS_KEYS: [&str; 6] = [
    "J",
    "n_modes",
    "spatial_points",
    "tol",
    "max_iter",
    "require_hypotheses",
];
const OUTPUT_KEYS: [&str; 3] = ["dir", "probe_points", "coefficients"];

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub alpha: f64,
    pub t_end: f64,
    pub k: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub variant: Variant,
    pub a: Vec<f64>,
    pub t_points: Vec<f64>,
    pub p_coeffs: Vec<f64>,
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
    /// Ball radius for the Krasnoselskii check.
    pub radius: Option<f64>,
    pub prefactor: Prefactor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericsConfig {
    /// Number of time steps.
    pub steps: usize,
    pub n_modes: usize,
    pub spatial_points: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub require_hypotheses: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub probe_points: Vec<f64>,
    /// Write the `w` coefficient columns in `solution.csv`.
    pub coefficients: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    pub numerics: NumericsConfig,
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let r = HeatExampleParams::<f64>::reference();
        Self {
            problem: ProblemConfig {
                alpha: r.alpha,
                t_end: 1.0,
                k: r.k,
                mu1: r.mu1,
                mu2: r.mu2,
                variant: r.variant,
                a: r.a,
                t_points: r.t_points,
                p_coeffs: r.p_coeffs,
                alpha1: r.alpha1,
                alpha2: r.alpha2,
                alpha3: r.alpha3,
                radius: None,
                prefactor: Prefactor::Standard,
            },
            numerics: NumericsConfig {
                steps: 256,
                n_modes: 64,
                spatial_points: 128,
                tol: 1e-8,
                max_iter: 200,
                require_hypotheses: false,
            },
            output: OutputConfig {
                dir: PathBuf::from("."),
                probe_points: vec![0.25, 0.5, 0.75],
                coefficients: true,
            },
        }
    }
}

struct Entry<'a> {
    line: usize,
    key: &'a str,
    value: &'a str,
}

fn suggest(word: &str, candidates: &[&str]) -> Option<String> {
    candidates
        .iter()
        .map(|c| {
            (
                strsim::levenshtein(&word.to_lowercase(), &c.to_lowercase()),
                *c,
            )
        })
        .filter(|(d, c)| *d <= 2.max(c.len() / 3))
        .min()
        .map(|(_, c)| c.to_string())
}

fn range(e: &Entry, reason: impl Into<String>) -> ConfigError {
    ConfigError::Range {
        line: Some(e.line),
        key: e.key.to_string(),
        value: e.value.to_string(),
        reason: reason.into(),
    }
}

fn real(e: &Entry) -> Result<f64, ConfigError> {
    match e.value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(range(e, "expected a finite number")),
    }
}

fn count(e: &Entry) -> Result<usize, ConfigError> {
    e.value
        .parse::<usize>()
        .map_err(|_| range(e, "expected a non-negative integer"))
}

fn flag(e: &Entry) -> Result<bool, ConfigError> {
    match e.value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(range(e, "expected `true` or `false`")),
    }
}

fn list(e: &Entry) -> Result<Vec<f64>, ConfigError> {
    if e.value.is_empty() {
        return Ok(Vec::new());
    }
    e.value
        .split(',')
        .map(|s| match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(range(e, format!("`{}` is not a finite number", s.trim()))),
        })
        .collect()
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut section: Option<&str> = None;
    let mut entries: Vec<(&str, Entry)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(rest) = body.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::Syntax {
                    line,
                    message: "unterminated section header".into(),
                })?
                .trim();
            let known = SECTIONS.iter().find(|s| **s == name).ok_or_else(|| {
                ConfigError::UnknownSection {
                    line,
                    name: name.to_string(),
                    suggestion: suggest(name, &SECTIONS),
                }
            })?;
            section = Some(known);
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line,
            message: format!("expected `key = value`, found `{body}`"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                message: "empty key".into(),
            });
        }
        let sec = section.ok_or_else(|| ConfigError::Syntax {
            line,
            message: format!("key `{key}` appears before any section header"),
        })?;
        let keys: &[&str] = match sec {
            "problem" => &PROBLEM_KEYS,
            "numerics" => &NUMERICS_KEYS,
            _ => &OUTPUT_KEYS,
        };
        if !keys.contains(&key) {
            return Err(ConfigError::UnknownKey {
                line,
                section: sec.to_string(),
                key: key.to_string(),
                suggestion: suggest(key, keys),
            });
        }
        if entries.iter().any(|(s, e)| *s == sec && e.key == key) {
            return Err(ConfigError::Duplicate {
                line,
                key: key.to_string(),
            });
        }
        entries.push((sec, Entry { line, key, value }));
    }

    let mut cfg = RunConfig::default();
    let mut alpha_i: [Option<f64>; 3] = [None; 3];
    let mut points: Option<usize> = None;
    for (sec, e) in &entries {
        match (*sec, e.key) {
            ("problem", "alpha") => cfg.problem.alpha = real(e)?,
            ("problem", "T") => cfg.problem.t_end = real(e)?,
            ("problem", "k") => cfg.problem.k = real(e)?,
            ("problem", "mu1") => cfg.problem.mu1 = real(e)?,
            ("problem", "mu2") => cfg.problem.mu2 = real(e)?,
            ("problem", "g_variant") => {
                cfg.problem.variant = match e.value {
                    "I" => Variant::I,
                    "II" => Variant::II,
                    _ => return Err(range(e, "expected `I` or `II`")),
                }
            }
            ("problem", "a") => cfg.problem.a = list(e)?,
            ("problem", "t_points") => cfg.problem.t_points = list(e)?,
            ("problem", "p_coeffs") => cfg.problem.p_coeffs = list(e)?,
            ("problem", "alpha1") => alpha_i[0] = Some(real(e)?),
            ("problem", "alpha2") => alpha_i[1] = Some(real(e)?),
            ("problem", "alpha3") => alpha_i[2] = Some(real(e)?),
            ("problem", "radius") => cfg.problem.radius = Some(real(e)?),
            ("problem", "prefactor") => {
                cfg.problem.prefactor = match e.value {
                    "standard" => Prefactor::Standard,
                    "mutated" => Prefactor::Mutated,
                    _ => return Err(range(e, "expected `standard` or `mutated`")),
                }
            }
            ("numerics", "J") => cfg.numerics.steps = count(e)?,
            ("numerics", "n_modes") => cfg.numerics.n_modes = count(e)?,
            ("numerics", "spatial_points") => points = Some(count(e)?),
            ("numerics", "tol") => cfg.numerics.tol = real(e)?,
            ("numerics", "max_iter") => cfg.numerics.max_iter = count(e)?,
            ("numerics", "require_hypotheses") => cfg.numerics.require_hypotheses = flag(e)?,
            ("output", "dir") => cfg.output.dir = PathBuf::from(e.value),
            ("output", "probe_points") => cfg.output.probe_points = list(e)?,
            ("output", "coefficients") => cfg.output.coefficients = flag(e)?,
            _ => unreachable!("key table and dispatch disagree"),
        }
    }
    let half = cfg.problem.alpha / 2.0;
    cfg.problem.alpha1 = alpha_i[0].unwrap_or(half);
    cfg.problem.alpha2 = alpha_i[1].unwrap_or(half);
    cfg.problem.alpha3 = alpha_i[2].unwrap_or(half);
    cfg.numerics.spatial_points = points.unwrap_or(2 * cfg.numerics.n_modes);

    let line_of = |key: &str| {
        entries
            .iter()
            .find(|(_, e)| e.key == key)
            .map(|(_, e)| e.line)
    };
    cfg.validate().map_err(|err| match err {
        ConfigError::Range {
            line: None,
            key,
            value,
            reason,
        } => ConfigError::Range {
            line: line_of(&key),
            key,
            value,
            reason,
        },
        other => other,
    })?;
    Ok(cfg)
}

fn bad(key: &str, value: impl ToString, reason: &str) -> ConfigError {
    ConfigError::Range {
        line: None,
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.to_string(),
    }
}

fn core_key(name: &str) -> &str {
    match name {
        "t_end" => "T",
        "steps" => "J",
        other => other,
    }
}

impl RunConfig {
    /// Range checks, then a trial assembly of the problem.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let p = &self.problem;
        let n = &self.numerics;
        if !(p.alpha > 0.0 && p.alpha <= 1.0) {
            return Err(bad("alpha", p.alpha, "must lie in (0, 1]"));
        }
        if !(p.t_end > 0.0) {
            return Err(bad("T", p.t_end, "must be positive"));
        }
        if !(p.k > 0.0) {
            return Err(bad("k", p.k, "must be positive"));
        }
        for (key, v) in [("mu1", p.mu1), ("mu2", p.mu2)] {
            if !(v >= 0.0) {
                return Err(bad(key, v, "must be non-negative"));
            }
        }
        if p.a.len() != p.t_points.len() {
            return Err(bad(
                "t_points",
                p.t_points.len(),
                "needs one entry per coefficient in `a`",
            ));
        }
        if let Some(v) = p.a.iter().find(|v| !(**v >= 0.0)) {
            return Err(bad("a", v, "coefficients must be non-negative"));
        }
        if let Some(v) = p.t_points.iter().find(|t| !(**t > 0.0 && **t <= p.t_end)) {
            return Err(bad("t_points", v, "must lie in (0, T]"));
        }
        for (key, v) in [
            ("alpha1", p.alpha1),
            ("alpha2", p.alpha2),
            ("alpha3", p.alpha3),
        ] {
            if !(v > 0.0 && v < p.alpha) {
                return Err(bad(key, v, "must lie in (0, alpha)"));
            }
        }
        if let Some(r) = p.radius {
            if !(r > 0.0) {
                return Err(bad("radius", r, "must be positive"));
            }
        }
        if n.steps < 2 {
            return Err(bad("J", n.steps, "must be at least 2"));
        }
        if n.n_modes == 0 {
            return Err(bad("n_modes", n.n_modes, "must be at least 1"));
        }
        if n.n_modes < p.p_coeffs.len() {
            return Err(bad(
                "n_modes",
                n.n_modes,
                "must cover every entry of `p_coeffs`",
            ));
        }
        if n.spatial_points < 2 * n.n_modes {
            return Err(bad(
                "spatial_points",
                n.spatial_points,
                "must be at least 2 n_modes",
            ));
        }
        if !(n.tol > 0.0) {
            return Err(bad("tol", n.tol, "must be positive"));
        }
        if n.max_iter == 0 {
            return Err(bad("max_iter", n.max_iter, "must be at least 1"));
        }
        if let Some(v) = self
            .output
            .probe_points
            .iter()
            .find(|x| !(**x >= 0.0 && **x <= 1.0))
        {
            return Err(bad("probe_points", v, "must lie in [0, 1]"));
        }
        if self.output.dir.as_os_str().is_empty() {
            return Err(bad("dir", "", "must not be empty"));
        }
        let grid = fracres_core::TimeGrid::new(p.t_end, n.steps).map_err(|e| core_error(e))?;
        let spec = self.problem_spec()?;
        spec.snaps(&grid).map_err(core_error)?;
        Ok(())
    }

    pub fn heat_params(&self) -> HeatExampleParams<f64> {
        let p = &self.problem;
        HeatExampleParams {
            k: p.k,
            alpha: p.alpha,
            mu1: p.mu1,
            mu2: p.mu2,
            variant: p.variant,
            a: p.a.clone(),
            t_points: p.t_points.clone(),
            p_coeffs: p.p_coeffs.clone(),
            alpha1: p.alpha1,
            alpha2: p.alpha2,
            alpha3: p.alpha3,
        }
    }

    /// The heat problem on `[0, T]`.
    pub fn problem_spec(&self) -> Result<ProblemSpec, ConfigError> {
        let mut params = self.heat_params();
        // Assembled on [0, 1] and moved to [0, T] below.
        params.t_points = params.t_points.iter().map(|t| t.min(1.0)).collect();
        let unit = build_heat_problem_with_points(
            &params,
            self.numerics.n_modes,
            self.numerics.spatial_points,
        )
        .map_err(core_error)?;
        let nonlocal = match unit.nonlocal() {
            fracres_core::Nonlocal::Linear { a, .. } => fracres_core::Nonlocal::Linear {
                a: a.clone(),
                t: self.problem.t_points.clone(),
            },
            fracres_core::Nonlocal::Saturated { a, .. } => fracres_core::Nonlocal::Saturated {
                a: a.clone(),
                t: self.problem.t_points.clone(),
            },
            other => other.clone(),
        };
        ProblemSpec::new(
            unit.alpha(),
            self.problem.t_end,
            unit.operator().clone(),
            unit.x0().clone(),
            unit.forcing().clone(),
            nonlocal,
            unit.kernel().clone(),
            unit.basis(),
        )
        .map_err(core_error)
    }

    /// Canonical text form; [`parse_config`] maps it back to `self`.
    pub fn to_canonical(&self) -> String {
        let p = &self.problem;
        let n = &self.numerics;
        let o = &self.output;
        let join = |v: &[f64]| {
            v.iter()
                .map(|x| format!("{x:?}"))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut s = String::new();
        let _ = writeln!(s, "[problem]");
        let _ = writeln!(s, "alpha = {:?}", p.alpha);
        let _ = writeln!(s, "T = {:?}", p.t_end);
        let _ = writeln!(s, "k = {:?}", p.k);
        let _ = writeln!(s, "mu1 = {:?}", p.mu1);
        let _ = writeln!(s, "mu2 = {:?}", p.mu2);
        let _ = writeln!(
            s,
            "g_variant = {}",
            if p.variant == Variant::I { "I" } else { "II" }
        );
        let _ = writeln!(s, "a = {}", join(&p.a));
        let _ = writeln!(s, "t_points = {}", join(&p.t_points));
        let _ = writeln!(s, "p_coeffs = {}", join(&p.p_coeffs));
        let _ = writeln!(s, "alpha1 = {:?}", p.alpha1);
        let _ = writeln!(s, "alpha2 = {:?}", p.alpha2);
        let _ = writeln!(s, "alpha3 = {:?}", p.alpha3);
        if let Some(r) = p.radius {
            let _ = writeln!(s, "radius = {r:?}");
        }
        let pre = if p.prefactor == Prefactor::Standard {
            "standard"
        } else {
            "mutated"
        };
        let _ = writeln!(s, "prefactor = {pre}");
        let _ = writeln!(s, "\n[numerics]");
        let _ = writeln!(s, "J = {}", n.steps);
        let _ = writeln!(s, "n_modes = {}", n.n_modes);
        let _ = writeln!(s, "spatial_points = {}", n.spatial_points);
        let _ = writeln!(s, "tol = {:?}", n.tol);
        let _ = writeln!(s, "max_iter = {}", n.max_iter);
        let _ = writeln!(s, "require_hypotheses = {}", n.require_hypotheses);
        let _ = writeln!(s, "\n[output]");
        let _ = writeln!(s, "dir = {}", o.dir.display());
        let _ = writeln!(s, "probe_points = {}", join(&o.probe_points));
        let _ = writeln!(s, "coefficients = {}", o.coefficients);
        s
    }
}

fn core_error(e: CoreError) -> ConfigError {
    match e {
        CoreError::InvalidParameter {
            name,
            value,
            constraint,
        } => bad(core_key(name), value, constraint),
        other => ConfigError::Problem(other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = parse_config("[numerics]\n").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.numerics.steps, 256);
        assert_eq!(cfg.numerics.tol, 1e-8);
        assert_eq!(cfg.problem.alpha1, 0.25);
    }

    #[test]
    fn reference_example() {
        let text =
            "[problem]\nalpha=0.5\nk=1\nmu1=0.05\nmu2=0.05\ng_variant=I\na=0.1\nt_points=0.5\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.heat_params(), HeatExampleParams::reference());
        let spec = cfg.problem_spec().unwrap();
        assert_eq!(spec.t_end(), 1.0);
        assert_eq!(spec.n_modes(), 64);
    }

    #[test]
    fn errors_carry_location() {
        match parse_config("[problem]\n\nalpha = 1.5\n") {
            Err(ConfigError::Range {
                line: Some(3), key, ..
            }) => assert_eq!(key, "alpha"),
            other => panic!("{other:?}"),
        }
        match parse_config("[problem]\nmu3 = 1\n") {
            Err(ConfigError::UnknownKey {
                line: 2,
                suggestion,
                ..
            }) => {
                assert!(
                    suggestion.as_deref() == Some("mu1") || suggestion.as_deref() == Some("mu2")
                )
            }
            other => panic!("{other:?}"),
        }
        match parse_config("[numerics]\nmax_iters = 3\n") {
            Err(e @ ConfigError::UnknownKey { .. }) => {
                assert!(e.to_string().contains("`max_iter`"))
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_config("alpha = 0.5\n"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_config("[problem]\nalpha\n"),
            Err(ConfigError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_config("[numeric]\n"),
            Err(ConfigError::UnknownSection { .. })
        ));
        assert!(matches!(
            parse_config("[problem]\nalpha = 0.5\nalpha = 0.4\n"),
            Err(ConfigError::Duplicate { line: 3, .. })
        ));
        match parse_config("[problem]\nT = 2\nt_points = 2.5\n") {
            Err(ConfigError::Range {
                key, line: Some(3), ..
            }) => assert_eq!(key, "t_points"),
            other => panic!("{other:?}"),
        }
        match parse_config("[problem]\nalpha = 0.4\nalpha1 = 0.4\n") {
            Err(ConfigError::Range { key, .. }) => assert_eq!(key, "alpha1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn longer_horizon() {
        let cfg =
            parse_config("[problem]\nT = 2\nt_points = 1.5\n[numerics]\nn_modes = 4\n").unwrap();
        let spec = cfg.problem_spec().unwrap();
        assert_eq!(spec.t_end(), 2.0);
        assert_eq!(spec.n_modes(), 4);
    }
}
