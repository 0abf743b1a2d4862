//! Experiment configuration files.
//!
//! Blank lines and lines starting with `#` are ignored. Every other line is
//! either a section header `[experiment]` or `key = value`. Keys before the
//! first header are global; each header opens one experiment.
//!
//! Global keys:
//!
//! - `output`: output directory, relative to the config file.
//!
//! Experiment keys:
//!
//! - `kind` (required): one of the names in [`Kind`].
//! - `name`: file stem for the outputs; defaults to `<kind>-<index>`.
//! - `model` (required): a preset, see [`crate::presets`].
//! - `epsilon`: driving strength for single-`ε` experiments.
//! - `eps_grid`, `T_grid`: comma-separated lists. A horizon written `k/gap`
//!   means `k` divided by the spectral gap of the reference chain.
//! - `n_samples`, `seed`: Monte Carlo size and seed; `seed` is required
//!   whenever samples are drawn.
//! - `tolerance`: overrides the deterministic contract tolerance.
//! - `z_bound`: bound on `|estimate − exact| / standard error` (default 3).
//! - `F1`, `G1`: drivings for `green-kubo`; `model` (the model's own
//!   driving), `random:seed=<s>`, or `file:<path>` with `from,to,value` lines.
//!
//! ```text
//! output = results
//!
//! [experiment]
//! kind = limit-exchange
//! model = random:n=4,seed=2024
//! eps_grid = 0.002, 0.001
//! T_grid = 10/gap, 20/gap, 40/gap
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use crate::presets::{parse_preset, ModelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    LimitExchange,
    McLennanVsExact,
    FluctuationSymmetry,
    DentNorm,
    GreenKubo,
    LosIdentity,
    LocalEquilibrium,
    RlcCheck,
    TransientExcess,
}

impl Kind {
    pub const ALL: [Kind; 9] = [
        Kind::LimitExchange,
        Kind::McLennanVsExact,
        Kind::FluctuationSymmetry,
        Kind::DentNorm,
        Kind::GreenKubo,
        Kind::LosIdentity,
        Kind::LocalEquilibrium,
        Kind::RlcCheck,
        Kind::TransientExcess,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::LimitExchange => "limit-exchange",
            Kind::McLennanVsExact => "mclennan-vs-exact",
            Kind::FluctuationSymmetry => "fluctuation-symmetry",
            Kind::DentNorm => "dent-norm",
            Kind::GreenKubo => "green-kubo",
            Kind::LosIdentity => "los-identity",
            Kind::LocalEquilibrium => "local-equilibrium",
            Kind::RlcCheck => "rlc-check",
            Kind::TransientExcess => "transient-excess",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.as_str() == s)
    }

    fn samples(self) -> bool {
        matches!(self, Kind::FluctuationSymmetry | Kind::DentNorm | Kind::GreenKubo | Kind::RlcCheck)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A horizon, either absolute or in units of the relaxation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Horizon {
    Absolute(f64),
    PerGap(f64),
}

impl Horizon {
    pub fn resolve(self, gap: f64) -> f64 {
        match self {
            Horizon::Absolute(t) => t,
            Horizon::PerGap(k) => k / gap,
        }
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Horizon::Absolute(t) => write!(f, "{t}"),
            Horizon::PerGap(k) => write!(f, "{k}/gap"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    Model,
    Random(u64),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub kind: Kind,
    /// The preset text as written, echoed into output metadata.
    pub model_text: String,
    pub model: ModelSpec,
    pub epsilon: Option<f64>,
    pub eps_grid: Vec<f64>,
    pub t_grid: Vec<Horizon>,
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub z_bound: f64,
    pub f1: FieldSpec,
    pub g1: FieldSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub output: Option<PathBuf>,
    pub experiments: Vec<ExperimentConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosticKind {
    Malformed,
    UnknownPreset,
    InvalidGrid,
    SizeLimit,
}

impl DiagnosticKind {
    pub fn exit_code(self) -> u8 {
        match self {
            DiagnosticKind::Malformed => 2,
            DiagnosticKind::UnknownPreset => 3,
            DiagnosticKind::InvalidGrid => 4,
            DiagnosticKind::SizeLimit => 5,
        }
    }
}

/// One problem found in a config.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    /// 1-based experiment index; `None` for global problems.
    pub experiment: Option<usize>,
    pub line: Option<usize>,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self.kind {
            DiagnosticKind::Malformed => "malformed config",
            DiagnosticKind::UnknownPreset => "unknown preset",
            DiagnosticKind::InvalidGrid => "invalid grid",
            DiagnosticKind::SizeLimit => "size limit",
        };
        write!(f, "{label}")?;
        if let Some(e) = self.experiment {
            write!(f, ", experiment {e}")?;
        }
        if let Some(l) = self.line {
            write!(f, " (line {l})")?;
        }
        write!(f, ": {}", self.message)
    }
}

const GLOBAL_KEYS: [&str; 1] = ["output"];
const EXPERIMENT_KEYS: [&str; 12] =
    ["kind", "name", "model", "epsilon", "eps_grid", "T_grid", "n_samples", "seed", "tolerance", "z_bound", "F1", "G1"];

struct Entry {
    key: String,
    value: String,
    line: usize,
}

struct Section {
    line: usize,
    entries: Vec<Entry>,
}

impl Section {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }
}

struct Collector {
    diagnostics: Vec<Diagnostic>,
    experiment: Option<usize>,
}

impl Collector {
    fn push(&mut self, line: Option<usize>, kind: DiagnosticKind, message: impl Into<String>) {
        self.diagnostics.push(Diagnostic { experiment: self.experiment, line, kind, message: message.into() });
    }
}

fn lex(text: &str, c: &mut Collector) -> (Section, Vec<Section>) {
    let mut global = Section { line: 0, entries: Vec::new() };
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        if s.starts_with('[') {
            if s == "[experiment]" {
                sections.push(Section { line, entries: Vec::new() });
            } else {
                c.push(Some(line), DiagnosticKind::Malformed, format!("unknown section `{s}`; only [experiment] is allowed"));
            }
            continue;
        }
        let Some((k, v)) = s.split_once('=') else {
            c.push(Some(line), DiagnosticKind::Malformed, format!("expected `key = value`, found `{s}`"));
            continue;
        };
        let (key, value) = (k.trim().to_string(), v.trim().to_string());
        let target = sections.last_mut().unwrap_or(&mut global);
        let allowed: &[&str] = if target.line == 0 { &GLOBAL_KEYS } else { &EXPERIMENT_KEYS };
        if !allowed.contains(&key.as_str()) {
            c.push(Some(line), DiagnosticKind::Malformed, format!("unknown key `{key}`"));
        } else if target.get(&key).is_some() {
            c.push(Some(line), DiagnosticKind::Malformed, format!("key `{key}` given twice"));
        } else if value.is_empty() && key != "eps_grid" && key != "T_grid" {
            c.push(Some(line), DiagnosticKind::Malformed, format!("key `{key}` has no value"));
        } else {
            target.entries.push(Entry { key, value, line });
        }
    }
    (global, sections)
}

fn number<T: std::str::FromStr>(c: &mut Collector, e: &Entry) -> Option<T> {
    let v = e.value.parse().ok();
    if v.is_none() {
        c.push(Some(e.line), DiagnosticKind::Malformed, format!("`{}` is not a valid value for `{}`", e.value, e.key));
    }
    v
}

fn grid<T>(c: &mut Collector, e: &Entry, parse: impl Fn(&str) -> Option<T>, what: &str) -> Vec<T> {
    let items: Vec<&str> = e.value.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        c.push(Some(e.line), DiagnosticKind::InvalidGrid, format!("{} must be nonempty", e.key));
        return Vec::new();
    }
    let mut out = Vec::new();
    for item in items {
        match parse(item) {
            Some(v) => out.push(v),
            None => c.push(Some(e.line), DiagnosticKind::InvalidGrid, format!("{}: `{item}` is not {what}", e.key)),
        }
    }
    out
}

fn positive(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| *v > 0.0 && v.is_finite())
}

fn horizon(s: &str) -> Option<Horizon> {
    match s.strip_suffix("/gap") {
        Some(k) => positive(k.trim()).map(Horizon::PerGap),
        None => positive(s).map(Horizon::Absolute),
    }
}

fn field(c: &mut Collector, e: Option<&Entry>, default: FieldSpec, base: &Path) -> FieldSpec {
    let Some(e) = e else { return default };
    let v = e.value.as_str();
    if v == "model" {
        FieldSpec::Model
    } else if let Some(rest) = v.strip_prefix("random:seed=") {
        match rest.trim().parse() {
            Ok(s) => FieldSpec::Random(s),
            Err(_) => {
                c.push(Some(e.line), DiagnosticKind::Malformed, format!("{}: bad seed `{rest}`", e.key));
                default
            }
        }
    } else if let Some(path) = v.strip_prefix("file:") {
        FieldSpec::File(base.join(path.trim()))
    } else {
        c.push(Some(e.line), DiagnosticKind::Malformed, format!("{}: expected `model`, `random:seed=<s>` or `file:<path>`", e.key));
        default
    }
}

fn experiment(c: &mut Collector, s: &Section, index: usize, base: &Path) -> Option<ExperimentConfig> {
    let before = c.diagnostics.len();
    let kind = match s.get("kind") {
        None => {
            c.push(Some(s.line), DiagnosticKind::Malformed, "missing `kind`");
            None
        }
        Some(e) => {
            let k = Kind::parse(&e.value);
            if k.is_none() {
                let all: Vec<&str> = Kind::ALL.iter().map(|k| k.as_str()).collect();
                c.push(Some(e.line), DiagnosticKind::Malformed, format!("unknown kind `{}` (one of {})", e.value, all.join(", ")));
            }
            k
        }
    };
    let model = match s.get("model") {
        None => {
            c.push(Some(s.line), DiagnosticKind::Malformed, "missing `model`");
            None
        }
        Some(e) => match parse_preset(&e.value, base) {
            Ok(m) => Some((e.value.clone(), m)),
            Err(d) => {
                c.push(Some(e.line), d.kind, d.message);
                None
            }
        },
    };
    let name = s.get("name").map(|e| e.value.clone());
    if let Some(n) = &name {
        if !n.chars().all(|ch| ch.is_ascii_alphanumeric() || "-_.".contains(ch)) || n.starts_with('.') {
            c.push(s.get("name").map(|e| e.line), DiagnosticKind::Malformed, "name may only contain letters, digits, `-`, `_` and `.`");
        }
    }
    let epsilon = s.get("epsilon").and_then(|e| {
        let v: f64 = number(c, e)?;
        if !(v >= 0.0 && v.is_finite()) {
            c.push(Some(e.line), DiagnosticKind::InvalidGrid, "epsilon must be finite and nonnegative");
        }
        Some(v)
    });
    let eps_grid = s.get("eps_grid").map(|e| grid(c, e, positive, "a positive number")).unwrap_or_default();
    let t_grid = s.get("T_grid").map(|e| grid(c, e, horizon, "a positive horizon")).unwrap_or_default();
    let n_samples = s.get("n_samples").and_then(|e| {
        let v: usize = number(c, e)?;
        if v == 0 {
            c.push(Some(e.line), DiagnosticKind::InvalidGrid, "n_samples must be positive");
        }
        Some(v)
    });
    let seed = s.get("seed").and_then(|e| number(c, e));
    let tolerance = s.get("tolerance").and_then(|e| {
        let v = number::<f64>(c, e)?;
        if !(v > 0.0) {
            c.push(Some(e.line), DiagnosticKind::Malformed, "tolerance must be positive");
        }
        Some(v)
    });
    let z_bound = s.get("z_bound").and_then(|e| {
        let v = number::<f64>(c, e)?;
        if !(v > 0.0) {
            c.push(Some(e.line), DiagnosticKind::Malformed, "z_bound must be positive");
        }
        Some(v)
    });
    let f1 = field(c, s.get("F1"), FieldSpec::Model, base);
    let g1 = field(c, s.get("G1"), FieldSpec::Random(1), base);

    let kind = kind?;
    let at = Some(s.line);
    let require = |c: &mut Collector, key: &str, present: bool| {
        if !present {
            c.push(at, DiagnosticKind::Malformed, format!("{kind} needs `{key}`"));
        }
    };
    let forbid = |c: &mut Collector, key: &str| {
        if let Some(e) = s.get(key) {
            c.push(Some(e.line), DiagnosticKind::Malformed, format!("{kind} does not use `{key}`"));
        }
    };
    match kind {
        Kind::LimitExchange | Kind::TransientExcess => {
            require(c, "eps_grid", s.get("eps_grid").is_some());
            require(c, "T_grid", s.get("T_grid").is_some());
            forbid(c, "epsilon");
        }
        Kind::McLennanVsExact => {
            require(c, "eps_grid", s.get("eps_grid").is_some());
            forbid(c, "epsilon");
            forbid(c, "T_grid");
        }
        Kind::FluctuationSymmetry | Kind::DentNorm => {
            require(c, "epsilon", epsilon.is_some());
            require(c, "T_grid", s.get("T_grid").is_some());
            require(c, "n_samples", n_samples.is_some());
            forbid(c, "eps_grid");
        }
        Kind::GreenKubo => {
            require(c, "n_samples", n_samples.is_some());
            forbid(c, "epsilon");
            forbid(c, "eps_grid");
        }
        Kind::LosIdentity => {
            for k in ["epsilon", "eps_grid", "T_grid", "n_samples", "seed"] {
                forbid(c, k);
            }
        }
        Kind::LocalEquilibrium => {
            require(c, "epsilon", epsilon.is_some());
            for k in ["eps_grid", "T_grid", "n_samples", "seed"] {
                forbid(c, k);
            }
        }
        Kind::RlcCheck => {
            for k in ["epsilon", "eps_grid"] {
                forbid(c, k);
            }
        }
    }
    if kind != Kind::GreenKubo {
        forbid(c, "F1");
        forbid(c, "G1");
    }
    if kind.samples() && n_samples.is_some() && seed.is_none() {
        c.push(at, DiagnosticKind::Malformed, "`seed` is required whenever samples are drawn");
    }
    if !kind.samples() && !matches!(kind, Kind::LosIdentity | Kind::LocalEquilibrium) {
        forbid(c, "n_samples");
        forbid(c, "seed");
    }
    if matches!(kind, Kind::McLennanVsExact | Kind::TransientExcess) && eps_grid.len() == 1 {
        c.push(at, DiagnosticKind::InvalidGrid, format!("{kind} needs at least two ε values to judge the ε² scaling"));
    }
    if kind == Kind::TransientExcess && t_grid.len() == 1 {
        c.push(at, DiagnosticKind::InvalidGrid, "transient-excess needs at least two horizons to judge convergence");
    }
    if kind == Kind::RlcCheck && t_grid.len() > 1 {
        c.push(at, DiagnosticKind::InvalidGrid, "rlc-check takes at most one horizon");
    }
    if kind == Kind::GreenKubo && t_grid.len() > 1 {
        c.push(at, DiagnosticKind::InvalidGrid, "green-kubo takes at most one horizon");
    }
    let (model_text, model) = model?;
    match kind {
        Kind::RlcCheck if model.is_jump() => c.push(at, DiagnosticKind::Malformed, "rlc-check needs an `rlc` model"),
        Kind::LosIdentity | Kind::LocalEquilibrium if model.lattice_gas(0.0).is_none() => {
            c.push(at, DiagnosticKind::Malformed, format!("{kind} needs a `latgas` model"))
        }
        k if k != Kind::RlcCheck && !model.is_jump() => {
            c.push(at, DiagnosticKind::Malformed, format!("{kind} needs a jump-process model"))
        }
        _ => {}
    }
    if c.diagnostics.len() > before {
        return None;
    }
    Some(ExperimentConfig {
        name: name.unwrap_or_else(|| format!("{kind}-{index}")),
        kind,
        model_text,
        model,
        epsilon,
        eps_grid,
        t_grid,
        n_samples,
        seed,
        tolerance,
        z_bound: z_bound.unwrap_or(3.0),
        f1,
        g1,
    })
}

/// Parses a config; file paths inside it are resolved against `base`.
/// Returns every diagnostic found, not just the first.
pub fn parse(text: &str, base: &Path) -> Result<Config, Vec<Diagnostic>> {
    let mut c = Collector { diagnostics: Vec::new(), experiment: None };
    let (global, sections) = lex(text, &mut c);
    if sections.is_empty() {
        c.push(None, DiagnosticKind::Malformed, "no [experiment] section");
    }
    let mut experiments = Vec::new();
    for (i, s) in sections.iter().enumerate() {
        c.experiment = Some(i + 1);
        if let Some(e) = experiment(&mut c, s, i + 1, base) {
            experiments.push(e);
        }
    }
    c.experiment = None;
    let mut names: Vec<&str> = experiments.iter().map(|e| e.name.as_str()).collect();
    names.sort_unstable();
    for w in names.windows(2) {
        if w[0] == w[1] {
            c.push(None, DiagnosticKind::Malformed, format!("two experiments are named `{}`", w[0]));
        }
    }
    if !c.diagnostics.is_empty() {
        return Err(c.diagnostics);
    }
    Ok(Config { output: global.get("output").map(|e| base.join(&e.value)), experiments })
}

/// All diagnostics for a config; empty when it is valid.
pub fn validate(text: &str, base: &Path) -> Vec<Diagnostic> {
    parse(text, base).err().unwrap_or_default()
}
