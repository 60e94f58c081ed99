use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::refinement::{Criterion, TriggerWeight, Variant};

/// Benchmark problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Ode,
    Ko1d,
    Ko2d,
    Ko3d,
    Ks,
    Burgers,
}

impl Experiment {
    pub const ALL: [Experiment; 6] = [Self::Ode, Self::Ko1d, Self::Ko2d, Self::Ko3d, Self::Ks, Self::Burgers];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ode => "ode",
            Self::Ko1d => "ko1d",
            Self::Ko2d => "ko2d",
            Self::Ko3d => "ko3d",
            Self::Ks => "ks",
            Self::Burgers => "burgers",
        }
    }

    pub fn random_dim(self) -> usize {
        match self {
            Self::Ko2d => 2,
            Self::Ko3d => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment '{s}' (expected ode, ko1d, ko2d, ko3d, ks or burgers)"))
    }
}

/// Solution method.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    AmrGalerkin,
    AmrCollocation,
    GlobalGpc,
    GlobalCollocation,
    Mc,
    Sobol,
}

impl RunMode {
    pub const ALL: [RunMode; 6] = [
        Self::AmrGalerkin,
        Self::AmrCollocation,
        Self::GlobalGpc,
        Self::GlobalCollocation,
        Self::Mc,
        Self::Sobol,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::AmrGalerkin => "amr-galerkin",
            Self::AmrCollocation => "amr-collocation",
            Self::GlobalGpc => "global-gpc",
            Self::GlobalCollocation => "global-collocation",
            Self::Mc => "mc",
            Self::Sobol => "sobol",
        }
    }

    pub fn is_sampling(self) -> bool {
        matches!(self, Self::Mc | Self::Sobol)
    }

    pub fn refines(self) -> bool {
        matches!(self, Self::AmrGalerkin | Self::AmrCollocation)
    }
}

impl fmt::Display for RunMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RunMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| {
            format!("unknown mode '{s}' (expected amr-galerkin, amr-collocation, global-gpc, global-collocation, mc or sobol)")
        })
    }
}

/// Where reference statistics come from.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceSpec {
    None,
    /// Closed form (linear ODE only).
    Exact,
    /// A `moments.csv` written by an earlier run.
    File(PathBuf),
    /// Computed on the fly: high-order AMR collocation for K-O 1D, Sobol
    /// sampling otherwise.
    Generate,
}

impl fmt::Display for ReferenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::None => f.write_str("none"),
            Self::Exact => f.write_str("exact"),
            Self::File(p) => write!(f, "file:{}", p.display()),
            Self::Generate => f.write_str("generate"),
        }
    }
}

impl FromStr for ReferenceSpec {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "none" => Ok(Self::None),
            "exact" => Ok(Self::Exact),
            "generate" => Ok(Self::Generate),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(Self::File(PathBuf::from(p))),
                _ => Err(format!(
                    "unknown reference '{s}' (expected none, exact, generate or file:<path>)"
                )),
            },
        }
    }
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Section label, `experiment` or `experiment.name`.
    pub label: String,
    pub experiment: Experiment,
    pub mode: RunMode,
    pub p: usize,
    /// Reduced degree; `⌈(p+1)/2⌉` when unset.
    pub p0: Option<usize>,
    pub variant: Variant,
    pub tol1: f64,
    pub tol2: f64,
    pub criterion: Criterion,
    pub trigger: TriggerWeight,
    pub elements: Vec<usize>,
    pub dt: f64,
    pub t_final: f64,
    pub check_interval: usize,
    pub max_depth: u32,
    pub max_elements: usize,
    /// Gauss points per dimension; `p + 1` when unset.
    pub quad_points: Option<usize>,
    /// Steps between rows of `moments.csv`.
    pub output_interval: usize,
    pub dump_mesh_at: Vec<f64>,
    pub output: PathBuf,
    pub seed: u64,
    pub samples: usize,
    pub reference: ReferenceSpec,
    pub reference_samples: usize,
    /// Points of the single-element Burgers run in global mode.
    pub global_points: usize,
    pub ks_modes: usize,
}

const KEYS: &[&str] = &[
    "mode",
    "p",
    "p0",
    "variant",
    "tol1",
    "tol2",
    "criterion",
    "trigger",
    "elements",
    "dt",
    "t_final",
    "check_interval",
    "max_depth",
    "max_elements",
    "quad_points",
    "output_interval",
    "dump_mesh_at",
    "output",
    "seed",
    "samples",
    "reference",
    "reference_samples",
    "global_points",
    "ks_modes",
];

fn parse_list<T: FromStr>(value: &str) -> std::result::Result<Vec<T>, String> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<T>()
                .map_err(|_| format!("'{}' is not a valid entry", v.trim()))
        })
        .collect()
}

fn parse_f64(value: &str) -> std::result::Result<f64, String> {
    match value {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        _ => value.parse().map_err(|_| format!("'{value}' is not a number")),
    }
}

fn fmt_list<T: fmt::Display>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl ExperimentConfig {
    /// Standard settings for each benchmark.
    pub fn defaults(experiment: Experiment) -> Self {
        let base = Self {
            label: experiment.name().to_string(),
            experiment,
            mode: RunMode::AmrCollocation,
            p: 5,
            p0: None,
            variant: Variant::SingleSystem,
            tol1: 1e-1,
            tol2: 0.1,
            criterion: Criterion::S2,
            trigger: TriggerWeight::Probability,
            elements: vec![1],
            dt: 0.01,
            t_final: 10.0,
            check_interval: 1,
            max_depth: 20,
            max_elements: 100_000,
            quad_points: None,
            output_interval: 1,
            dump_mesh_at: Vec::new(),
            output: PathBuf::from("out").join(experiment.name()),
            seed: 1,
            samples: 1 << 12,
            reference: ReferenceSpec::None,
            reference_samples: 1 << 16,
            global_points: 256,
            ks_modes: 64,
        };
        match experiment {
            Experiment::Ode => Self {
                trigger: TriggerWeight::Unit,
                reference: ReferenceSpec::Exact,
                ..base
            },
            Experiment::Ko1d => Self {
                p: 9,
                tol1: 1e-4,
                elements: vec![2],
                t_final: 30.0,
                output_interval: 10,
                reference: ReferenceSpec::Generate,
                ..base
            },
            Experiment::Ko2d => Self {
                p: 7,
                tol1: 1e-3,
                elements: vec![2, 2],
                output_interval: 10,
                reference: ReferenceSpec::Generate,
                ..base
            },
            Experiment::Ko3d => Self {
                p: 4,
                tol1: 1e-2,
                elements: vec![2, 2, 2],
                t_final: 6.0,
                output_interval: 10,
                reference: ReferenceSpec::Generate,
                ..base
            },
            Experiment::Ks => Self {
                p: 11,
                elements: vec![32],
                dt: 1e-3,
                check_interval: 10,
                max_elements: 128,
                output_interval: 100,
                ..base
            },
            Experiment::Burgers => Self {
                tol1: 1e-2,
                elements: vec![8],
                dt: 1e-5,
                t_final: 0.1592,
                check_interval: 10,
                output_interval: 1000,
                ..base
            },
        }
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let value = value.trim();
        let usize_ = |v: &str| {
            v.parse::<usize>()
                .map_err(|_| format!("'{v}' is not a non-negative integer"))
        };
        match key {
            "mode" => self.mode = value.parse()?,
            "p" => self.p = usize_(value)?,
            "p0" => self.p0 = Some(usize_(value)?),
            "variant" => {
                self.variant = match value {
                    "single" => Variant::SingleSystem,
                    "two" => Variant::TwoSystem,
                    _ => return Err(format!("unknown variant '{value}' (expected single or two)")),
                }
            }
            "tol1" => self.tol1 = parse_f64(value)?,
            "tol2" => self.tol2 = parse_f64(value)?,
            "criterion" => {
                self.criterion = match value {
                    "s1" => Criterion::S1,
                    "s2" => Criterion::S2,
                    _ => return Err(format!("unknown criterion '{value}' (expected s1 or s2)")),
                }
            }
            "trigger" => {
                self.trigger = match value {
                    "probability" => TriggerWeight::Probability,
                    "unit" => TriggerWeight::Unit,
                    _ => return Err(format!("unknown trigger '{value}' (expected probability or unit)")),
                }
            }
            "elements" => self.elements = parse_list(value)?,
            "dt" => self.dt = parse_f64(value)?,
            "t_final" => self.t_final = parse_f64(value)?,
            "check_interval" => self.check_interval = usize_(value)?,
            "max_depth" => self.max_depth = value.parse().map_err(|_| format!("'{value}' is not an integer"))?,
            "max_elements" => self.max_elements = usize_(value)?,
            "quad_points" => self.quad_points = Some(usize_(value)?),
            "output_interval" => self.output_interval = usize_(value)?,
            "dump_mesh_at" => self.dump_mesh_at = parse_list(value)?,
            "output" => self.output = PathBuf::from(value),
            "seed" => self.seed = value.parse().map_err(|_| format!("'{value}' is not an integer"))?,
            "samples" => self.samples = usize_(value)?,
            "reference" => self.reference = value.parse()?,
            "reference_samples" => self.reference_samples = usize_(value)?,
            "global_points" => self.global_points = usize_(value)?,
            "ks_modes" => self.ks_modes = usize_(value)?,
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    /// Builds a config from a section's settings on top of the defaults,
    /// reporting every offending key at once.
    pub fn from_pairs(label: &str, pairs: &[(String, String)]) -> Result<Self> {
        let kind = label.split('.').next().unwrap_or(label);
        let experiment: Experiment = kind.parse().map_err(|e: String| Error::Config(vec![e]))?;
        let mut cfg = Self::defaults(experiment);
        cfg.label = label.to_string();
        let mut errs = Vec::new();
        for (k, v) in pairs {
            if let Err(e) = cfg.set(k, v) {
                errs.push(format!("[{label}] {k}: {e}"));
            }
        }
        if !errs.is_empty() {
            return Err(Error::Config(errs));
        }
        Ok(cfg)
    }

    /// Checks ranges and combinations, listing every problem.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        let d = self.experiment.random_dim();
        if self.p == 0 {
            errs.push("p must be at least 1".to_string());
        }
        if let Some(p0) = self.p0 {
            if p0 >= self.p {
                errs.push(format!("p0 = {p0} must be below p = {}", self.p));
            }
        }
        if self.tol1.is_nan() || self.tol1 <= 0.0 {
            errs.push(format!("tol1 must be positive, got {}", self.tol1));
        }
        if !(0.0..=1.0).contains(&self.tol2) || self.tol2 == 0.0 {
            errs.push(format!("tol2 must lie in (0, 1], got {}", self.tol2));
        }
        if self.elements.len() != d {
            errs.push(format!(
                "elements needs {d} entries for {}, got {}",
                self.experiment,
                self.elements.len()
            ));
        }
        if self.elements.contains(&0) {
            errs.push("element counts must be positive".into());
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            errs.push(format!("dt must be positive, got {}", self.dt));
        }
        if !self.t_final.is_finite() || self.t_final <= 0.0 {
            errs.push(format!("t_final must be positive, got {}", self.t_final));
        }
        for (name, v) in [
            ("check_interval", self.check_interval),
            ("max_elements", self.max_elements),
            ("output_interval", self.output_interval),
            ("samples", self.samples),
            ("reference_samples", self.reference_samples),
        ] {
            if v == 0 {
                errs.push(format!("{name} must be positive"));
            }
        }
        if let Some(q) = self.quad_points {
            if q < self.p + 1 {
                errs.push(format!("quad_points = {q} is below p + 1 = {}", self.p + 1));
            }
        }
        if self.dump_mesh_at.iter().any(|t| t.is_nan() || *t < 0.0) {
            errs.push("dump_mesh_at times must be non-negative".into());
        }
        if self.experiment == Experiment::Burgers {
            if !matches!(self.mode, RunMode::AmrCollocation | RunMode::GlobalCollocation) {
                errs.push(format!(
                    "burgers supports amr-collocation and global-collocation, not {}",
                    self.mode
                ));
            }
            if self.global_points < 2 {
                errs.push("global_points must be at least 2".into());
            }
        }
        if self.experiment == Experiment::Ks && (self.ks_modes < 8 || !self.ks_modes.is_power_of_two()) {
            errs.push(format!("ks_modes must be a power of two ≥ 8, got {}", self.ks_modes));
        }
        if self.reference == ReferenceSpec::Exact && self.experiment != Experiment::Ode {
            errs.push(format!(
                "reference = exact is only available for ode, not {}",
                self.experiment
            ));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(
                errs.into_iter().map(|e| format!("[{}] {e}", self.label)).collect(),
            ))
        }
    }

    /// The effective settings as a config section.
    pub fn to_text(&self) -> String {
        let variant = match self.variant {
            Variant::SingleSystem => "single",
            Variant::TwoSystem => "two",
        };
        let criterion = match self.criterion {
            Criterion::S1 => "s1",
            Criterion::S2 => "s2",
        };
        let trigger = match self.trigger {
            TriggerWeight::Probability => "probability",
            TriggerWeight::Unit => "unit",
        };
        let mut lines = vec![
            format!("[{}]", self.label),
            format!("mode = {}", self.mode),
            format!("p = {}", self.p),
        ];
        if let Some(p0) = self.p0 {
            lines.push(format!("p0 = {p0}"));
        }
        lines.extend([
            format!("variant = {variant}"),
            format!(
                "tol1 = {}",
                if self.tol1.is_infinite() {
                    "inf".into()
                } else {
                    format!("{:e}", self.tol1)
                }
            ),
            format!("tol2 = {}", self.tol2),
            format!("criterion = {criterion}"),
            format!("trigger = {trigger}"),
            format!("elements = {}", fmt_list(&self.elements)),
            format!("dt = {:e}", self.dt),
            format!("t_final = {}", self.t_final),
            format!("check_interval = {}", self.check_interval),
            format!("max_depth = {}", self.max_depth),
            format!("max_elements = {}", self.max_elements),
        ]);
        if let Some(q) = self.quad_points {
            lines.push(format!("quad_points = {q}"));
        }
        lines.extend([
            format!("output_interval = {}", self.output_interval),
            format!("dump_mesh_at = {}", fmt_list(&self.dump_mesh_at)),
            format!("output = {}", self.output.display()),
            format!("seed = {}", self.seed),
            format!("samples = {}", self.samples),
            format!("reference = {}", self.reference),
            format!("reference_samples = {}", self.reference_samples),
            format!("global_points = {}", self.global_points),
            format!("ks_modes = {}", self.ks_modes),
        ]);
        lines.join("\n") + "\n"
    }
}

/// `(label, [(key, value)])` per section, in file order.
pub type Sections = Vec<(String, Vec<(String, String)>)>;

/// Parses flat `key = value` text with `[section]` headers. `#` starts a
/// comment. Settings before the first header are rejected.
pub fn parse_sections(text: &str) -> Result<Sections> {
    let mut sections: Sections = Vec::new();
    let mut errs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            sections.push((name.trim().to_string(), Vec::new()));
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            errs.push(format!("line {}: expected 'key = value', got '{line}'", i + 1));
            continue;
        };
        let key = k.trim().to_string();
        match sections.last_mut() {
            Some((_, pairs)) => {
                if !KEYS.contains(&key.as_str()) {
                    errs.push(format!("line {}: unknown key '{key}'", i + 1));
                } else if pairs.iter().any(|(k, _)| *k == key) {
                    errs.push(format!("line {}: duplicate key '{key}'", i + 1));
                } else {
                    pairs.push((key, v.trim().to_string()));
                }
            }
            None => errs.push(format!("line {}: '{key}' appears before any [section]", i + 1)),
        }
    }
    if errs.is_empty() {
        Ok(sections)
    } else {
        Err(Error::Config(errs))
    }
}

/// Every section of a config file as a validated config.
pub fn parse_config(text: &str) -> Result<Vec<ExperimentConfig>> {
    let sections = parse_sections(text)?;
    let mut errs = Vec::new();
    let mut out = Vec::new();
    let mut seen = BTreeMap::new();
    for (label, pairs) in &sections {
        if seen.insert(label.clone(), ()).is_some() {
            errs.push(format!("duplicate section [{label}]"));
            continue;
        }
        match ExperimentConfig::from_pairs(label, pairs).and_then(|c| c.validate().map(|_| c)) {
            Ok(c) => out.push(c),
            Err(Error::Config(e)) => errs.extend(e),
            Err(e) => errs.push(e.to_string()),
        }
    }
    if errs.is_empty() {
        Ok(out)
    } else {
        Err(Error::Config(errs))
    }
}
