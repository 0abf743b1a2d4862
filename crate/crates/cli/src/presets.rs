//! Named model presets.
//!
//! A preset is `name` or `name:key=value,key=value,...`. Unlisted keys take
//! their defaults.
//!
//! | preset    | keys (defaults)                                  | model |
//! |-----------|--------------------------------------------------|-------|
//! | `ring`    | `n` (3)                                          | uniform ring, `F1 = +1` clockwise, `β = 1` |
//! | `random`  | `n` (4), `seed` (0)                              | complete graph with random `U`, `γ`, `F1`, `β = 1` |
//! | `latgas`  | `N` (2), `beta` (1), `J` (0), `h` (0), `seed`    | boundary-driven lattice gas on sites `−N..=0`; `U = J Σ x(i)x(i+1) + h Σ x(i)`, or `U ~ U[−1,1]` per configuration when `seed` is given |
//! | `rlc`     | `R1`, `R2`, `L`, `C`, `beta` (all 1), `E` (0.1)  | noisy RLC circuit |
//! | `file`    | `file:<path>`                                    | jump model read from a key-value file |
//!
//! A model file holds `beta = <b>`, `potential = <u0>, <u1>, ...`, and the
//! matrices `gamma` and `driving` written row by row, rows separated by `;`
//! and entries by `,`. An optional `labels` line names the states.

use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use ness_core::models::lattice_gas::MAX_SITES_N;
use ness_core::models::{driven_ring, random_model, LatticeGasSpec, RlcSpec};
use ness_core::JumpModel;

use crate::config::{Diagnostic, DiagnosticKind};

/// Largest jump state space the dense solvers accept from a preset or file.
pub const MAX_STATES: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Ring { n: usize },
    Random { n: usize, seed: u64 },
    LatticeGas { n: usize, beta: f64, coupling: f64, field: f64, seed: Option<u64> },
    Rlc(RlcSpec),
    File(PathBuf),
}

/// One-line grammar summaries, printed by `ness-lab presets`.
pub const PRESET_HELP: &[(&str, &str)] = &[
    ("ring:n=3", "uniform driven ring, F1 = +1 on every clockwise jump, beta = 1"),
    ("random:n=4,seed=0", "complete graph, U ~ U[-1,1], gamma ~ U[0.5,1.5], F1 ~ U[-1,1], beta = 1"),
    ("latgas:N=2,beta=1,J=0,h=0[,seed=S]", "boundary-driven lattice gas on sites -N..0 (N <= 10); seed selects a random energy table"),
    ("rlc:R1=1,R2=1,L=1,C=1,beta=1,E=0.1", "RLC circuit with Johnson-Nyquist noise in both resistors, source E"),
    ("file:<path>", "jump model file with beta, potential, gamma and driving (rows split by ';')"),
];

fn diag(kind: DiagnosticKind, message: String) -> Diagnostic {
    Diagnostic { experiment: None, line: None, kind, message }
}

fn malformed(message: String) -> Diagnostic {
    diag(DiagnosticKind::Malformed, message)
}

struct Params<'a> {
    preset: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(preset: &'a str, body: &'a str, allowed: &[&str]) -> Result<Self, Diagnostic> {
        let mut pairs = Vec::new();
        for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| malformed(format!("preset `{preset}`: expected key=value, found `{item}`")))?;
            let k = k.trim();
            if !allowed.contains(&k) {
                return Err(malformed(format!("preset `{preset}` has no parameter `{k}` (allowed: {})", allowed.join(", "))));
            }
            if pairs.iter().any(|(p, _)| *p == k) {
                return Err(malformed(format!("preset `{preset}`: parameter `{k}` given twice")));
            }
            pairs.push((k, v.trim()));
        }
        Ok(Self { preset, pairs })
    }

    fn raw(&self, key: &str) -> Option<&'a str> {
        self.pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn num<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, Diagnostic> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| malformed(format!("preset `{}`: `{key}={v}` is not a valid number", self.preset))),
        }
    }

    fn positive(&self, key: &str, default: f64) -> Result<f64, Diagnostic> {
        let v: f64 = self.num(key, default)?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(malformed(format!("preset `{}`: `{key}` must be positive and finite", self.preset)));
        }
        Ok(v)
    }

    fn finite(&self, key: &str, default: f64) -> Result<f64, Diagnostic> {
        let v: f64 = self.num(key, default)?;
        if !v.is_finite() {
            return Err(malformed(format!("preset `{}`: `{key}` must be finite", self.preset)));
        }
        Ok(v)
    }
}

fn size_check(n: usize, limit: usize, what: &str) -> Result<(), Diagnostic> {
    if n > limit {
        return Err(diag(DiagnosticKind::SizeLimit, format!("{what} {n} exceeds the limit {limit}")));
    }
    Ok(())
}

/// Parses a preset string, resolving `file:` paths against `base`.
pub fn parse_preset(text: &str, base: &Path) -> Result<ModelSpec, Diagnostic> {
    let text = text.trim();
    let (name, body) = text.split_once(':').unwrap_or((text, ""));
    match name.trim() {
        "ring" => {
            let p = Params::parse("ring", body, &["n"])?;
            let n = p.num("n", 3usize)?;
            size_check(n, MAX_STATES, "ring size")?;
            if n < 3 {
                return Err(malformed("preset `ring`: need n ≥ 3".into()));
            }
            Ok(ModelSpec::Ring { n })
        }
        "random" => {
            let p = Params::parse("random", body, &["n", "seed"])?;
            let n = p.num("n", 4usize)?;
            size_check(n, MAX_STATES, "state count")?;
            if n < 2 {
                return Err(malformed("preset `random`: need n ≥ 2".into()));
            }
            Ok(ModelSpec::Random { n, seed: p.num("seed", 0u64)? })
        }
        "latgas" => {
            let p = Params::parse("latgas", body, &["N", "beta", "J", "h", "seed"])?;
            let n = p.num("N", 2usize)?;
            size_check(n, MAX_SITES_N, "lattice-gas N")?;
            if n < 1 {
                return Err(malformed("preset `latgas`: need N ≥ 1".into()));
            }
            let seed = match p.raw("seed") {
                Some(_) => Some(p.num("seed", 0u64)?),
                None => None,
            };
            Ok(ModelSpec::LatticeGas {
                n,
                beta: p.positive("beta", 1.0)?,
                coupling: p.finite("J", 0.0)?,
                field: p.finite("h", 0.0)?,
                seed,
            })
        }
        "rlc" => {
            let p = Params::parse("rlc", body, &["R1", "R2", "L", "C", "beta", "E"])?;
            Ok(ModelSpec::Rlc(RlcSpec::new(
                p.positive("R1", 1.0)?,
                p.positive("R2", 1.0)?,
                p.positive("L", 1.0)?,
                p.positive("C", 1.0)?,
                p.positive("beta", 1.0)?,
                p.finite("E", 0.1)?,
            )))
        }
        "file" => {
            if body.trim().is_empty() {
                return Err(malformed("preset `file` needs a path: `file:<path>`".into()));
            }
            let path = base.join(body.trim());
            load_model_file(&path)?;
            Ok(ModelSpec::File(path))
        }
        other => Err(diag(
            DiagnosticKind::UnknownPreset,
            format!("unknown model preset `{other}` (run `ness-lab presets` for the list)"),
        )),
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, Diagnostic> {
    s.split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| malformed(format!("{what}: `{}` is not a number", v.trim()))))
        .collect()
}

fn parse_matrix(s: &str, n: usize, what: &str) -> Result<DMatrix<f64>, Diagnostic> {
    let rows: Vec<Vec<f64>> = s.split(';').map(|r| parse_list(r, what)).collect::<Result<_, _>>()?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(malformed(format!("{what} must be {n}x{n}")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

/// Reads and builds a jump model from a model file, at `ε = 0`.
pub fn load_model_file(path: &Path) -> Result<JumpModel, Diagnostic> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| malformed(format!("cannot read model file {}: {e}", path.display())))?;
    let mut fields: Vec<(String, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| malformed(format!("{}:{}: expected key = value", path.display(), i + 1)))?;
        fields.push((k.trim().to_string(), v.trim().to_string()));
    }
    let get = |key: &str| fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
    for (k, _) in &fields {
        if !["beta", "potential", "gamma", "driving", "labels"].contains(&k.as_str()) {
            return Err(malformed(format!("{}: unknown key `{k}`", path.display())));
        }
    }
    let need = |key: &str| get(key).ok_or_else(|| malformed(format!("{}: missing `{key}`", path.display())));
    let beta: f64 = need("beta")?.parse().map_err(|_| malformed(format!("{}: bad beta", path.display())))?;
    let potential = parse_list(need("potential")?, "potential")?;
    let n = potential.len();
    size_check(n, MAX_STATES, "state count")?;
    let gamma = parse_matrix(need("gamma")?, n, "gamma")?;
    let driving = parse_matrix(need("driving")?, n, "driving")?;
    let model = JumpModel::new(potential, beta, driving, gamma, 0.0)
        .map_err(|e| malformed(format!("{}: {e}", path.display())))?;
    match get("labels") {
        Some(l) => model
            .with_labels(l.split(',').map(|s| s.trim().to_string()).collect())
            .map_err(|e| malformed(format!("{}: {e}", path.display()))),
        None => Ok(model),
    }
}

impl ModelSpec {
    pub fn is_jump(&self) -> bool {
        !matches!(self, ModelSpec::Rlc(_))
    }

    /// Lattice-gas spec at reservoir bias `epsilon`, if this is a lattice gas.
    pub fn lattice_gas(&self, epsilon: f64) -> Option<LatticeGasSpec> {
        match *self {
            ModelSpec::LatticeGas { n, beta, coupling, field, seed } => Some(match seed {
                Some(s) => LatticeGasSpec::with_random_energy(n, beta, epsilon, s),
                None => LatticeGasSpec::new(n, beta, coupling, field, epsilon),
            }),
            _ => None,
        }
    }

    /// The jump model at `ε = 0`; `None` for the RLC circuit.
    pub fn jump_model(&self) -> Option<ness_core::Result<JumpModel>> {
        Some(match self {
            ModelSpec::Ring { n } => driven_ring(*n, 0.0),
            ModelSpec::Random { n, seed } => random_model(*n, *seed, 0.0),
            ModelSpec::LatticeGas { .. } => {
                ness_core::models::lattice_gas::lattice_gas_model(&self.lattice_gas(0.0).expect("lattice gas"))
            }
            ModelSpec::File(path) => {
                load_model_file(path).map_err(|d| ness_core::Error::InvalidArgument(d.message))
            }
            ModelSpec::Rlc(_) => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_with_defaults() {
        let base = Path::new(".");
        assert_eq!(parse_preset("ring", base).unwrap(), ModelSpec::Ring { n: 3 });
        assert_eq!(parse_preset("random:n=5,seed=9", base).unwrap(), ModelSpec::Random { n: 5, seed: 9 });
        let ModelSpec::Rlc(s) = parse_preset("rlc:E=0.3", base).unwrap() else { panic!() };
        assert_eq!((s.r1, s.e), (1.0, 0.3));
    }

    #[test]
    fn preset_errors_are_classified() {
        let base = Path::new(".");
        assert_eq!(parse_preset("torus:n=3", base).unwrap_err().kind, DiagnosticKind::UnknownPreset);
        assert_eq!(parse_preset("latgas:N=12", base).unwrap_err().kind, DiagnosticKind::SizeLimit);
        assert_eq!(parse_preset("ring:m=3", base).unwrap_err().kind, DiagnosticKind::Malformed);
        assert_eq!(parse_preset("rlc:R1=-1", base).unwrap_err().kind, DiagnosticKind::Malformed);
    }
}
