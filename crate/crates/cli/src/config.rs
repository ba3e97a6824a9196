//! Scenario configuration: a line-based `key = value` format with
//! `[scenario <name>]` section headers. Every physical input lives in the
//! file; defaults are echoed into reports.

use std::fmt;

use reilly::mesh::RadialProfile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Reilly,
    ClassicalReilly,
    Hk,
    Brendle,
    Minkowski,
    Alexandrov,
    Rigidity,
}

pub const SUITE_NAMES: [(&str, Suite); 7] = [
    ("reilly", Suite::Reilly),
    ("classical_reilly", Suite::ClassicalReilly),
    ("hk", Suite::Hk),
    ("brendle", Suite::Brendle),
    ("minkowski", Suite::Minkowski),
    ("alexandrov", Suite::Alexandrov),
    ("rigidity", Suite::Rigidity),
];

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        SUITE_NAMES.iter().find(|(n, _)| *n == s).map(|(_, v)| *v)
    }

    pub fn name(&self) -> &'static str {
        SUITE_NAMES.iter().find(|(_, v)| v == self).unwrap().0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Euclidean,
    Hyperbolic,
    Spherical,
    CustomPoly(Vec<(usize, usize, f64)>),
    CustomPoincare,
}

impl ModelSpec {
    pub fn label(&self) -> String {
        match self {
            ModelSpec::Euclidean => "euclidean".into(),
            ModelSpec::Hyperbolic => "hyperbolic".into(),
            ModelSpec::Spherical => "spherical".into(),
            ModelSpec::CustomPoly(terms) => {
                let body: Vec<String> = terms
                    .iter()
                    .map(|(i, j, c)| format!("{i} {j} {c:.17e}"))
                    .collect();
                format!("custom-poly({})", body.join("; "))
            }
            ModelSpec::CustomPoincare => "custom-poincare".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    None,
    SolveGrowth { boundary_value: f64 },
    SolveTorsion,
    Poly(Vec<(usize, usize, f64)>),
    RandomPoly { degree: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Holds,
    StrictGap,
    NotCmc,
    PreconditionViolated,
    SolverFailure,
}

impl Expectation {
    pub fn parse(s: &str) -> Option<Expectation> {
        match s {
            "holds" => Some(Expectation::Holds),
            "strict" => Some(Expectation::StrictGap),
            "not-cmc" => Some(Expectation::NotCmc),
            "precondition" => Some(Expectation::PreconditionViolated),
            "solver-failure" => Some(Expectation::SolverFailure),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Expectation::Holds => "holds",
            Expectation::StrictGap => "strict",
            Expectation::NotCmc => "not-cmc",
            Expectation::PreconditionViolated => "precondition",
            Expectation::SolverFailure => "solver-failure",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Relative-residual threshold at the finest level for identity suites.
    pub residual: f64,
    /// Minimum mean convergence order.
    pub order: f64,
    /// CMC screen tolerance.
    pub cmc: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 5e-2,
            order: 0.8,
            cmc: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub suite: Suite,
    pub model: ModelSpec,
    pub profile: RadialProfile,
    pub levels: Vec<u32>,
    pub field: FieldSpec,
    /// Polynomial weight V for custom-metric identity scenarios; space forms
    /// default to their analytic potential, and randomized scenarios draw V
    /// from the seeded stream right after f.
    pub potential: Option<Vec<(usize, usize, f64)>>,
    /// Identity shift K for custom models (space forms use their own).
    pub k: Option<f64>,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub expect: Expectation,
    pub description: String,
    pub claim: String,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenarios: Vec<Scenario>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
}

#[derive(Debug)]
pub struct ConfigError {
    pub line: usize,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "config error at line {} ({}): {}",
            self.line, self.field, self.message
        )
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

fn parse_f64(line: usize, field: &str, s: &str) -> Result<f64, ConfigError> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| err(line, field, format!("bad number '{s}': {e}")))
}

fn parse_terms(line: usize, field: &str, s: &str) -> Result<Vec<(usize, usize, f64)>, ConfigError> {
    let mut out = Vec::new();
    for chunk in s.split(';') {
        let parts: Vec<&str> = chunk.split_whitespace().collect();
        if parts.is_empty() {
            continue;
        }
        if parts.len() != 3 {
            return Err(err(
                line,
                field,
                format!("term '{chunk}' must be 'i j coeff'"),
            ));
        }
        let i = parts[0]
            .parse::<usize>()
            .map_err(|e| err(line, field, format!("bad power '{}': {e}", parts[0])))?;
        let j = parts[1]
            .parse::<usize>()
            .map_err(|e| err(line, field, format!("bad power '{}': {e}", parts[1])))?;
        let c = parse_f64(line, field, parts[2])?;
        out.push((i, j, c));
    }
    if out.is_empty() {
        return Err(err(line, field, "no polynomial terms given"));
    }
    Ok(out)
}

pub fn parse_levels(line: usize, s: &str) -> Result<Vec<u32>, ConfigError> {
    let s = s.trim();
    let levels: Vec<u32> = if let Some((a, b)) = s.split_once("..") {
        let a: u32 = a
            .trim()
            .parse()
            .map_err(|e| err(line, "levels", format!("bad level '{a}': {e}")))?;
        let b: u32 = b
            .trim()
            .parse()
            .map_err(|e| err(line, "levels", format!("bad level '{b}': {e}")))?;
        if b < a {
            return Err(err(line, "levels", format!("descending range {a}..{b}")));
        }
        (a..=b).collect()
    } else {
        let mut out = Vec::new();
        for tok in s.split_whitespace() {
            out.push(
                tok.parse()
                    .map_err(|e| err(line, "levels", format!("bad level '{tok}': {e}")))?,
            );
        }
        out
    };
    if levels.is_empty() {
        return Err(err(line, "levels", "empty level list"));
    }
    if !levels.windows(2).all(|w| w[1] > w[0]) {
        return Err(err(line, "levels", "levels must be strictly increasing"));
    }
    Ok(levels)
}

struct Builder {
    line: usize,
    name: String,
    suite: Option<Suite>,
    model: Option<ModelSpec>,
    phi: Option<Vec<(usize, usize, f64)>>,
    profile_a0: Option<f64>,
    profile_cos: [f64; 8],
    profile_sin: [f64; 8],
    levels: Option<Vec<u32>>,
    field: FieldSpec,
    potential: Option<Vec<(usize, usize, f64)>>,
    k: Option<f64>,
    seed: Option<u64>,
    tolerances: Tolerances,
    expect: Expectation,
    description: String,
}

impl Builder {
    fn new(line: usize, name: String) -> Self {
        Builder {
            line,
            name,
            suite: None,
            model: None,
            phi: None,
            profile_a0: None,
            profile_cos: [0.0; 8],
            profile_sin: [0.0; 8],
            levels: None,
            field: FieldSpec::None,
            potential: None,
            k: None,
            seed: None,
            tolerances: Tolerances::default(),
            expect: Expectation::Holds,
            description: String::new(),
        }
    }

    fn finish(self, global_seed: Option<u64>) -> Result<Scenario, ConfigError> {
        let suite = self
            .suite
            .ok_or_else(|| err(self.line, "suite", format!("scenario '{}' has no suite", self.name)))?;
        let mut model = self.model.ok_or_else(|| {
            err(self.line, "model", format!("scenario '{}' has no model", self.name))
        })?;
        if let ModelSpec::CustomPoly(ref mut terms) = model {
            if terms.is_empty() {
                if let Some(phi) = self.phi.clone() {
                    *terms = phi;
                } else {
                    return Err(err(
                        self.line,
                        "phi",
                        format!("scenario '{}' uses custom-poly but gives no phi", self.name),
                    ));
                }
            }
        }
        let a0 = self.profile_a0.ok_or_else(|| {
            err(
                self.line,
                "profile.a0",
                format!("scenario '{}' has no radial profile", self.name),
            )
        })?;
        let levels = self.levels.ok_or_else(|| {
            err(self.line, "levels", format!("scenario '{}' has no levels", self.name))
        })?;
        let seed = self.seed.or(global_seed);
        if matches!(self.field, FieldSpec::RandomPoly { .. }) && seed.is_none() {
            return Err(err(
                self.line,
                "seed",
                format!(
                    "scenario '{}' uses a randomized field but no seed is given",
                    self.name
                ),
            ));
        }
        let claim = suite.name().to_string();
        Ok(Scenario {
            name: self.name,
            suite,
            model,
            profile: RadialProfile::new(a0, self.profile_cos, self.profile_sin),
            levels,
            field: self.field,
            potential: self.potential,
            k: self.k,
            seed,
            tolerances: self.tolerances,
            expect: self.expect,
            description: self.description,
            claim,
        })
    }
}

/// Parse a config file's text. Errors carry line and field.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut scenarios = Vec::new();
    let mut current: Option<Builder> = None;
    let mut global_seed: Option<u64> = None;
    let mut jobs: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let inner = rest
                .strip_suffix(']')
                .ok_or_else(|| err(line_no, "section", "unterminated '[' section header"))?;
            let mut parts = inner.split_whitespace();
            match parts.next() {
                Some("scenario") => {
                    let name = parts
                        .next()
                        .ok_or_else(|| err(line_no, "scenario", "missing scenario name"))?;
                    if let Some(b) = current.take() {
                        scenarios.push(b.finish(global_seed)?);
                    }
                    current = Some(Builder::new(line_no, name.to_string()));
                }
                other => {
                    return Err(err(
                        line_no,
                        "section",
                        format!("unknown section {other:?}, expected [scenario <name>]"),
                    ))
                }
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, "line", format!("expected 'key = value', got '{line}'")))?;
        let key = key.trim();
        let value = value.trim();

        let Some(b) = current.as_mut() else {
            // global keys
            match key {
                "seed" => {
                    global_seed = Some(value.parse().map_err(|e| {
                        err(line_no, "seed", format!("bad seed '{value}': {e}"))
                    })?)
                }
                "jobs" => {
                    jobs = Some(value.parse().map_err(|e| {
                        err(line_no, "jobs", format!("bad jobs '{value}': {e}"))
                    })?)
                }
                _ => {
                    return Err(err(
                        line_no,
                        key,
                        "key outside any [scenario] section (only 'seed' and 'jobs' are global)",
                    ))
                }
            }
            continue;
        };

        match key {
            "suite" => {
                b.suite = Some(Suite::parse(value).ok_or_else(|| {
                    err(
                        line_no,
                        "suite",
                        format!(
                            "unknown suite '{value}'; valid: {}",
                            SUITE_NAMES.map(|(n, _)| n).join(", ")
                        ),
                    )
                })?)
            }
            "model" => {
                b.model = Some(match value {
                    "euclidean" => ModelSpec::Euclidean,
                    "hyperbolic" => ModelSpec::Hyperbolic,
                    "spherical" => ModelSpec::Spherical,
                    "custom-poly" => ModelSpec::CustomPoly(Vec::new()),
                    "custom-poincare" => ModelSpec::CustomPoincare,
                    _ => {
                        return Err(err(
                            line_no,
                            "model",
                            format!("unknown model '{value}'"),
                        ))
                    }
                })
            }
            "phi" => b.phi = Some(parse_terms(line_no, "phi", value)?),
            "levels" => b.levels = Some(parse_levels(line_no, value)?),
            "field" => {
                b.field = if value == "none" {
                    FieldSpec::None
                } else if let Some(c) = value.strip_prefix("solve-growth:") {
                    FieldSpec::SolveGrowth {
                        boundary_value: parse_f64(line_no, "field", c)?,
                    }
                } else if value == "solve-torsion" {
                    FieldSpec::SolveTorsion
                } else if let Some(t) = value.strip_prefix("poly:") {
                    FieldSpec::Poly(parse_terms(line_no, "field", t)?)
                } else if let Some(d) = value.strip_prefix("random:") {
                    FieldSpec::RandomPoly {
                        degree: d.trim().parse().map_err(|e| {
                            err(line_no, "field", format!("bad degree '{d}': {e}"))
                        })?,
                    }
                } else {
                    return Err(err(line_no, "field", format!("unknown field '{value}'")));
                }
            }
            "potential" => b.potential = Some(parse_terms(line_no, "potential", value)?),
            "k" => b.k = Some(parse_f64(line_no, "k", value)?),
            "seed" => {
                b.seed = Some(value.parse().map_err(|e| {
                    err(line_no, "seed", format!("bad seed '{value}': {e}"))
                })?)
            }
            "expect" => {
                b.expect = Expectation::parse(value).ok_or_else(|| {
                    err(
                        line_no,
                        "expect",
                        format!("unknown expectation '{value}'; valid: holds, strict, not-cmc, precondition, solver-failure"),
                    )
                })?
            }
            "description" => b.description = value.to_string(),
            "tol.residual" => b.tolerances.residual = parse_f64(line_no, key, value)?,
            "tol.order" => b.tolerances.order = parse_f64(line_no, key, value)?,
            "tol.cmc" => b.tolerances.cmc = parse_f64(line_no, key, value)?,
            _ if key == "profile.a0" => b.profile_a0 = Some(parse_f64(line_no, key, value)?),
            _ if key.starts_with("profile.cos") => {
                let k: usize = key["profile.cos".len()..]
                    .parse()
                    .map_err(|e| err(line_no, key, format!("bad harmonic index: {e}")))?;
                if !(1..=8).contains(&k) {
                    return Err(err(line_no, key, "harmonic index must be 1..=8"));
                }
                b.profile_cos[k - 1] = parse_f64(line_no, key, value)?;
            }
            _ if key.starts_with("profile.sin") => {
                let k: usize = key["profile.sin".len()..]
                    .parse()
                    .map_err(|e| err(line_no, key, format!("bad harmonic index: {e}")))?;
                if !(1..=8).contains(&k) {
                    return Err(err(line_no, key, "harmonic index must be 1..=8"));
                }
                b.profile_sin[k - 1] = parse_f64(line_no, key, value)?;
            }
            _ => return Err(err(line_no, key, "unknown key")),
        }
    }
    if let Some(b) = current.take() {
        scenarios.push(b.finish(global_seed)?);
    }
    if scenarios.is_empty() {
        return Err(err(0, "config", "no scenarios defined"));
    }
    Ok(RunConfig {
        scenarios,
        seed: global_seed,
        jobs,
    })
}
