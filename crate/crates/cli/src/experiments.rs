//! One function per experiment kind. Each returns its tables and whether
//! its contract held; nothing is written here.

use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use ness_core::csv::{fmt_f64, Table};
use ness_core::greenkubo::response_report;
use ness_core::mclennan::{limit_exchange_table, linear_work, mclennan_correction, transient_excess};
use ness_core::models::lattice_gas::LatticeGas;
use ness_core::models::random_edge_field;
use ness_core::models::rlc::{rlc_mclennan_check, RlcModel};
use ness_core::pathspace::{density_via_equilibrium, fluctuation_symmetry_many, normalization_check, EndState, Observable};
use ness_core::{Distribution, Error, JumpModel};

use crate::config::{ExperimentConfig, FieldSpec, Kind};
use crate::presets::ModelSpec;

/// A finished experiment.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub name: String,
    pub kind: Kind,
    pub pass: bool,
    pub contract: String,
    pub summary: String,
    /// `(file name, table)` pairs.
    pub tables: Vec<(String, Table)>,
}

#[derive(Debug)]
pub enum RunError {
    Model { experiment: String, source: Error },
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Model { source: Error::SizeLimit { .. }, .. } => 5,
            RunError::Model { .. } => 1,
            RunError::Io { .. } => 6,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Model { experiment, source } => write!(f, "experiment `{experiment}` failed: {source}"),
            RunError::Io { path, source } => write!(f, "cannot write {}: {source}", path.display()),
        }
    }
}

impl std::error::Error for RunError {}

type Res<T> = ness_core::Result<T>;

fn identity(kind: Kind) -> &'static str {
    match kind {
        Kind::LimitExchange => "lim_{ε→0} lim_{T→∞} (1/ε) log(ρ_T^ε/ρ₀) = lim_{T→∞} lim_{ε→0} (1/ε) log(ρ_T^ε/ρ₀) = h1 = β L₀⁻¹ w1",
        Kind::McLennanVsExact => "ρ_ε(x) = ρ₀(x) exp(ε h1(x) + O(ε²)), h1 = β L₀⁻¹ w1",
        Kind::TransientExcess => "lim_{T→∞} [⟨S_T⟩_x − T σ_ε] = −ε h1(x) + O(ε²)",
        Kind::FluctuationSymmetry => "⟨f(ω)⟩_ε = ⟨f(θω) exp(−S(ω))⟩_ε from ρ₀ at every T",
        Kind::DentNorm => "ρ_T^ε(x)/ρ₀(x) = ⟨exp(−(S+𝒯)/2)⟩⁰_x and ⟨exp((S−𝒯)/2)⟩⁰_μ = 1",
        Kind::GreenKubo => "½ Σ G1 𝔧^F = ½ Σ F1 𝔧^G and β·that = lim_{T→∞} (β/2T) ⟨J_G J_F⟩⁰",
        Kind::LosIdentity => "L₀ Σ_i v_i x(i) = −(1/N) Σ_i j_i + w1, v_i = 1 + i/N",
        Kind::LocalEquilibrium => "ρ₀ exp(εβ Σ v_i x(i) + (εβ/N) Σ_i L₀⁻¹ j_i) = ρ₀ exp(ε h1)",
        Kind::RlcCheck => "h1(U,I) = βE [R1C U + L I]/(R1+R2), stationary mean Σ ∇(εh1)",
    }
}

fn annotate(mut table: Table, cfg: &ExperimentConfig, contract: &str, pass: bool) -> Table {
    let seed = cfg.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    table = table
        .meta("experiment", format!("{} ({})", cfg.name, cfg.kind))
        .meta("identity", identity(cfg.kind))
        .meta("model", &cfg.model_text)
        .meta("seed", seed)
        .meta("contract", contract)
        .meta("result", if pass { "PASS" } else { "FAIL" })
        .meta("version", concat!("ness-lab ", env!("CARGO_PKG_VERSION")));
    table
}

fn jump_model(cfg: &ExperimentConfig) -> Res<JumpModel> {
    cfg.model.jump_model().unwrap_or_else(|| Err(Error::InvalidModel("not a jump-process model".into())))
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m: f64, v| m.max(v.abs()))
}

/// `max/min` of positive values; infinite when some value is not positive.
fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if min > 0.0 { max / min } else { f64::INFINITY }
}

fn limit_exchange(cfg: &ExperimentConfig) -> Res<Outcome> {
    let model = jump_model(cfg)?;
    let gap = model.reference_rates()?.spectral_gap()?;
    let t_grid: Vec<f64> = cfg.t_grid.iter().map(|h| h.resolve(gap)).collect();
    let table = limit_exchange_table(&model, &cfg.eps_grid, &t_grid)?;
    let h1 = mclennan_correction(&model)?.h1;
    let labels = model.labels();
    let extrapolate = cfg.eps_grid.len() > 1;
    let (a, b) = if extrapolate {
        (&table.t_then_eps_extrapolated, &table.eps_then_t_extrapolated)
    } else {
        (&table.t_then_eps, &table.eps_then_t)
    };
    let worst = max_abs((0..labels.len()).flat_map(|x| [a[x] - b[x], a[x] - h1[x], b[x] - h1[x]]));
    let tol = cfg.tolerance.unwrap_or(1e-3);
    let pass = worst <= tol;
    let contract = format!(
        "both iterated limits{} agree with each other and with h1 to {tol:e}",
        if extrapolate { " (extrapolated linearly in ε)" } else { "" }
    );

    let mut main = Table::new(["epsilon", "T", "state", "value"]);
    for e in &table.entries {
        main.push([fmt_f64(e.epsilon), fmt_f64(e.horizon), labels[e.state].clone(), fmt_f64(e.value)]);
    }
    let mut summary = Table::new(["state", "t_then_eps", "eps_then_t", "t_then_eps_extrapolated", "eps_then_t_extrapolated", "h1"]);
    for (x, l) in labels.iter().enumerate() {
        summary.push([
            l.clone(),
            fmt_f64(table.t_then_eps[x]),
            fmt_f64(table.eps_then_t[x]),
            fmt_f64(table.t_then_eps_extrapolated[x]),
            fmt_f64(table.eps_then_t_extrapolated[x]),
            fmt_f64(h1[x]),
        ]);
    }
    let mut diag = Table::new(["epsilon", "state", "monotone", "residual"]);
    for d in &table.diagnostics {
        diag.push([fmt_f64(d.epsilon), labels[d.state].clone(), d.monotone.to_string(), fmt_f64(d.residual)]);
    }
    Ok(Outcome {
        name: cfg.name.clone(),
        kind: cfg.kind,
        pass,
        summary: format!("max deviation {worst:.3e}"),
        tables: vec![
            (format!("{}.csv", cfg.name), annotate(main, cfg, &contract, pass)),
            (format!("{}.summary.csv", cfg.name), annotate(summary, cfg, &contract, pass)),
            (format!("{}.diagnostics.csv", cfg.name), annotate(diag, cfg, &contract, pass)),
        ],
        contract,
    })
}

fn mclennan_vs_exact(cfg: &ExperimentConfig) -> Res<Outcome> {
    let model = jump_model(cfg)?;
    let h1 = mclennan_correction(&model)?.h1;
    let rho0 = model.equilibrium_density()?;
    let labels = model.labels();
    let mut t = Table::new(["epsilon", "state", "exact", "mclennan", "log_error"]);
    let mut constants = Vec::new();
    for &eps in &cfg.eps_grid {
        let m = model.with_epsilon(eps)?;
        let exact = m.rates()?.stationary()?;
        let approx = mclennan_correction(&m)?.rho_mclennan;
        let mut worst: f64 = 0.0;
        for (x, l) in labels.iter().enumerate() {
            let err = (exact[x] / rho0[x]).ln() - eps * h1[x];
            worst = worst.max(err.abs());
            t.push([fmt_f64(eps), l.clone(), fmt_f64(exact[x]), fmt_f64(approx[x]), fmt_f64(err)]);
        }
        constants.push(worst / (eps * eps));
    }
    let ratio = spread(&constants);
    let bound_ok = cfg.tolerance.is_none_or(|tol| constants.iter().all(|c| *c <= tol));
    let pass = ratio <= 2.0 && bound_ok;
    let mut contract = "C(ε) = max_x |log(ρ_ε/ρ₀) − ε h1| / ε² stable within a factor 2".to_string();
    if let Some(tol) = cfg.tolerance {
        contract.push_str(&format!(" and ≤ {tol:e}"));
    }
    Ok(Outcome {
        name: cfg.name.clone(),
        kind: cfg.kind,
        pass,
        summary: format!("C(ε) = {constants:.4?}, max/min = {ratio:.3}"),
        tables: vec![(format!("{}.csv", cfg.name), annotate(t, cfg, &contract, pass))],
        contract,
    })
}

fn transient(cfg: &ExperimentConfig) -> Res<Outcome> {
    let model = jump_model(cfg)?;
    let gap = model.reference_rates()?.spectral_gap()?;
    let mut t_grid: Vec<f64> = cfg.t_grid.iter().map(|h| h.resolve(gap)).collect();
    t_grid.sort_by(f64::total_cmp);
    let h1 = mclennan_correction(&model)?.h1;
    let labels = model.labels();
    let mut t = Table::new(["epsilon", "T", "state", "value", "minus_eps_h1"]);
    let mut constants = Vec::new();
    let mut residual: f64 = 0.0;
    for &eps in &cfg.eps_grid {
        let m = model.with_epsilon(eps)?;
        let mut worst: f64 = 0.0;
        for (x, l) in labels.iter().enumerate() {
            let values: Vec<f64> = t_grid.iter().map(|&h| transient_excess(&m, x, h)).collect::<Res<_>>()?;
            for (h, v) in t_grid.iter().zip(&values) {
                t.push([fmt_f64(eps), fmt_f64(*h), l.clone(), fmt_f64(*v), fmt_f64(-eps * h1[x])]);
            }
            let last = values[values.len() - 1];
            if values.len() > 1 {
                residual = residual.max((last - values[values.len() - 2]).abs());
            }
            worst = worst.max((last + eps * h1[x]).abs());
        }
        constants.push(worst / (eps * eps));
    }
    let tol = cfg.tolerance.unwrap_or(1e-8);
    let ratio = spread(&constants);
    let pass = ratio <= 2.0 && residual <= tol;
    let contract = format!(
        "C(ε) = max_x |excess + ε h1| / ε² stable within a factor 2; change between the two largest T ≤ {tol:e}"
    );
    Ok(Outcome {
        name: cfg.name.clone(),
        kind: cfg.kind,
        pass,
        summary: format!("C(ε) = {constants:.4?}, max/min = {ratio:.3}, T-residual = {residual:.2e}"),
        tables: vec![(format!("{}.csv", cfg.name), annotate(t, cfg, &contract, pass))],
        contract,
    })
}

fn sample_params(cfg: &ExperimentConfig) -> (usize, u64) {
    (cfg.n_samples.unwrap_or(0), cfg.seed.unwrap_or(0))
}

fn fluctuation(cfg: &ExperimentConfig) -> Res<Outcome> {
    let model = jump_model(cfg)?.with_epsilon(cfg.epsilon.unwrap_or(0.0))?;
    let gap = model.reference_rates()?.spectral_gap()?;
    let (n, seed) = sample_params(cfg);
    let labels = model.labels();
    let ends: Vec<EndState> = (0..labels.len()).map(EndState).collect();
    let obs: Vec<&dyn Observable> = ends.iter().map(|e| e as &dyn Observable).collect();
    let mut t = Table::new(["T", "observable", "lhs", "lhs_std_error", "rhs", "rhs_std_error", "z"]);
    let mut worst: f64 = 0.0;
    for (k, h) in cfg.t_grid.iter().enumerate() {
        let horizon = h.resolve(gap);
        let results = fluctuation_symmetry_many(&model, &obs, horizon, n, seed.wrapping_add(k as u64))?;
        for ((lhs, rhs), l) in results.iter().zip(labels) {
            let z = lhs.z_score(rhs);
            worst = worst.max(z);
            t.push([
                fmt_f64(horizon),
                format!("end={l}"),
                fmt_f64(lhs.mean),
                fmt_f64(lhs.std_error),
                fmt_f64(rhs.mean),
                fmt_f64(rhs.std_error),
                fmt_f64(z),
            ]);
        }
    }
    let pass = worst <= cfg.z_bound;
    let contract = format!("|lhs − rhs| ≤ {} combined standard errors for every end-state indicator", cfg.z_bound);
    Ok(Outcome {
        name: cfg.name.clone(),
        kind: cfg.kind,
        pass,
        summary: format!("largest z = {worst:.2}"),
        tables: vec![(format!("{}.csv", cfg.name), annotate(t, cfg, &contract, pass))],
        contract,
    })
}

fn dent_norm(cfg: &ExperimentConfig) -> Res<Outcome> {
    let model = jump_model(cfg)?.with_epsilon(cfg.epsilon.unwrap_or(0.0))?;
    let gap = model.reference_rates()?.spectral_gap()?;
    let (n, seed) = sample_params(cfg);
    let labels = model.labels();
    let size = labels.len();
    let rho0 = model.equilibrium_density()?;
    let rates = model.rates()?;
    let laws = [
        ("uniform".to_string(), Distribution::uniform(size)),
        ("equilibrium".to_string(), rho0.clone()),
        (format!("point:{}", labels[0]), Distribution::point_mass(size, 0)),
    ];
    let mut t = Table::new(["T", "quantity", "target", "estimate", "std_error", "exact", "z"]);
    let mut worst: f64 = 0.0;
    let mut stream = seed;
    let mut next_seed = || {
        let s = stream;
        stream = stream.wrapping_add(1);
        s
    };
    for h in &cfg.t_grid {
        let horizon = h.resolve(gap);
        let rho_t = rates.evolve(&rho0, horizon)?;
        for (x, l) in labels.iter().enumerate() {
            let exact = rho_t[x] / rho0[x];
            let e = density_via_equilibrium(&model, x, horizon, n, next_seed())?;
            let z = e.z_against(exact);
            worst = worst.max(z);
            let row = [fmt_f64(e.mean), fmt_f64(e.std_error), fmt_f64(exact), fmt_f64(z)];
            t.push([fmt_f64(horizon), "density".into(), l.clone()].into_iter().chain(row));
        }
        for (name, mu) in &laws {
            let e = normalization_check(&model, mu, horizon, n, next_seed())?;
            let z = e.z_against(1.0);
            worst = worst.max(z);
            let row = [fmt_f64(e.mean), fmt_f64(e.std_error), fmt_f64(1.0), fmt_f64(z)];
            t.push([fmt_f64(horizon), "normalization".into(), name.clone()].into_iter().chain(row));
        }
    }
    let pass = worst <= cfg.z_bound;
    let contract = format!("every estimate within {} standard errors of its exact value", cfg.z_bound);
    Ok(Outcome {
        name: cfg.name.clone(),
        kind: cfg.kind,
        pass,
        summary: format!("largest z = {worst:.2}"),
        tables: vec![(format!("{}.csv", cfg.name), annotate(t, cfg, &contract, pass))],
        contract,
    })
}

fn read_edge_field(path: &Path, model: &JumpModel) -> Res<DMatrix<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    let n = model.n_states();
    let mut f = DMatrix::zeros(n, n);
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        if line == "from,to,value" {
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = || Error::Parse(format!("{}: bad edge line `{line}`", path.display()));
        if cells.len() != 3 {
            return Err(bad());
        }
        let x: usize = cells[0].parse().map_err(|_| bad())?;
        let y: usize = cells[1].parse().map_err(|_| bad())?;
        let v: f64 = cells[2].parse().map_err(|_| bad())?;
        if x >= n || y >= n || x == y {
            return Err(bad());
        }
        f[(x, y)] = v;
        f[(y, x)] = -v;
    }
    Ok(f)
}

fn field(spec: &FieldSpec, model: &JumpModel) -> Res<DMatrix<f64>> {
    match spec {
        FieldSpec::Model => Ok(model.driving().clone()),
        FieldSpec::Random(s) => Ok(random_edge_field(model, *s)),
        FieldSpec::File(p) => read_edge_field(p, model),
    }
}

fn green_kubo(cfg: &ExperimentConfig) -> Res<Outcome> {
    let model = jump_model(cfg)?;
    let gap = model.reference_rates()?.spectral_gap()?;
    let horizon = cfg.t_grid.first().map_or(20.0 / gap, |h| h.resolve(gap));
    let (n, seed) = sample_params(cfg);
    let f = field(&cfg.f1, &model)?;
    let g = field(&cfg.g1, &model)?;
    let r = response_report(&model, &f, &g, horizon, n, seed)?;
    let tol = cfg.tolerance.unwrap_or(1e-10);
    let asym = (r.pairing_gf - r.pairing_fg).abs();
    let dev = (r.gk_estimate.mean - r.gk_deterministic).abs();
    let allowed = cfg.z_bound * r.gk_estimate.std_error + r.horizon_bias();
    let pass = asym <= tol * r.pairing_gf.abs().max(1.0) && dev <= allowed;
    let contract = format!(
        "pairings symmetric to {tol:e}; |estimate − limit| ≤ {} standard errors + |finite-T value − limit|",
        cfg.z_bound
    );
    let mut t = Table::new([
        "pairing_gf",
        "pairing_fg",
        "gk_estimate",
        "gk_std_error",
        "gk_deterministic",
        "gk_finite_horizon",
        "horizon",
    ]);
    t.push([
        fmt_f64(r.pairing_gf),
        fmt_f64(r.pairing_fg),
        fmt_f64(r.gk_estimate.mean),
        fmt_f64(r.gk_estimate.std_error),
        fmt_f64(r.gk_deterministic),
        fmt_f64(r.gk_finite_horizon),
        fmt_f64(r.horizon),
    ]);
    Ok(Outcome {
        name: cfg.name.clone(),
        kind: cfg.kind,
        pass,
        summary: format!(
            "pairing asymmetry {asym:.1e}; estimate {:.5} ± {:.5} vs limit {:.5} (finite-T {:.5})",
            r.gk_estimate.mean, r.gk_estimate.std_error, r.gk_deterministic, r.gk_finite_horizon
        ),
        tables: vec![(format!("{}.csv", cfg.name), annotate(t, cfg, &contract, pass))],
        contract,
    })
}

fn gas(cfg: &ExperimentConfig, epsilon: f64) -> Res<LatticeGas> {
    let spec = cfg.model.lattice_gas(epsilon).ok_or_else(|| Error::InvalidModel("not a lattice gas".into()))?;
    LatticeGas::new(spec)
}

fn los_identity(cfg: &ExperimentConfig) -> Res<Outcome> {
    let gas = gas(cfg, 0.0)?;
    let residual = gas.los_residual(&gas.linear_profile())?;
    let w1 = linear_work(gas.model())?;
    let closed = gas.w1_closed_form();
    let w1_err = max_abs(w1.iter().zip(&closed).map(|(a, b)| a - b));
    let tol = cfg.tolerance.unwrap_or(1e-12);
    let pass = residual <= tol && w1_err <= tol;
    let contract = format!("bond-current identity and closed-form w1 hold on every configuration to {tol:e}");
    let mut t = Table::new(["configuration", "w1", "w1_closed_form"]);
    for (x, l) in gas.model().labels().iter().enumerate() {
        t.push([l.clone(), fmt_f64(w1[x]), fmt_f64(closed[x])]);
    }
    let t = annotate(t, cfg, &contract, pass).meta("bond_current_residual", fmt_f64(residual));
    Ok(Outcome {
        name: cfg.name.clone(),
        kind: cfg.kind,
        pass,
        summary: format!("identity residual {residual:.1e}, w1 residual {w1_err:.1e}"),
        tables: vec![(format!("{}.csv", cfg.name), t)],
        contract,
    })
}

fn local_equilibrium(cfg: &ExperimentConfig) -> Res<Outcome> {
    let gas = gas(cfg, cfg.epsilon.unwrap_or(0.0))?;
    let le = gas.local_equilibrium()?;
    let mc = mclennan_correction(gas.model())?.rho_mclennan;
    let exact = gas.model().rates()?.stationary()?;
    let rho0 = gas.model().equilibrium_density()?;
    let err = le.density.max_abs_diff(&mc);
    let tol = cfg.tolerance.unwrap_or(1e-10);
    let pass = err <= tol;
    let contract = format!("local-equilibrium form equals the McLennan density to {tol:e}");
    let mut t = Table::new(["configuration", "rho0", "local_equilibrium_factor", "remainder", "local_equilibrium", "mclennan", "exact"]);
    for (x, l) in gas.model().labels().iter().enumerate() {
        t.push([
            l.clone(),
            fmt_f64(rho0[x]),
            fmt_f64(le.factor[x]),
            fmt_f64(le.remainder[x]),
            fmt_f64(le.density[x]),
            fmt_f64(mc[x]),
            fmt_f64(exact[x]),
        ]);
    }
    Ok(Outcome {
        name: cfg.name.clone(),
        kind: cfg.kind,
        pass,
        summary: format!("max difference {err:.1e}, remainder size {:.3e}", le.remainder_size()),
        tables: vec![(format!("{}.csv", cfg.name), annotate(t, cfg, &contract, pass))],
        contract,
    })
}

/// Slowest relaxation rate of the circuit, `min Re(−λ)` over the drift.
fn relaxation_rate(model: &RlcModel) -> f64 {
    let a = model.drift();
    let half_trace = 0.5 * a.trace();
    let disc = half_trace * half_trace - a.determinant();
    if disc >= 0.0 { -(half_trace + disc.sqrt()) } else { -half_trace }
}

fn rlc_check(cfg: &ExperimentConfig) -> Res<Outcome> {
    let ModelSpec::Rlc(spec) = cfg.model else {
        return Err(Error::InvalidModel("rlc-check needs an rlc model".into()));
    };
    let model = RlcModel::new(spec)?;
    let rate = relaxation_rate(&model);
    let horizon = cfg.t_grid.first().map_or(30.0 / rate, |h| h.resolve(rate));
    let (n, seed) = sample_params(cfg);
    let r = rlc_mclennan_check(&spec, horizon, n, seed)?;
    let s = spec.r1 + spec.r2;
    let expected = [spec.r1 * spec.c / s, spec.l / s];
    let tol = cfg.tolerance.unwrap_or(1e-12);
    let coef_err = max_abs([
        r.coef_u - expected[0],
        r.coef_i - expected[1],
        r.coef_u_parity - expected[0],
        r.coef_i_parity - expected[1],
    ]) / max_abs(expected).max(1.0);
    let scale = max_abs(r.exact_mean).max(1e-300);
    let mean_err = max_abs([r.implied_mean[0] - r.exact_mean[0], r.implied_mean[1] - r.exact_mean[1]]) / scale;
    let zs = if n > 0 {
        vec![r.simulated_u.z_against(r.exact_mean[0]), r.simulated_i.z_against(r.exact_mean[1])]
    } else {
        Vec::new()
    };
    let pass = coef_err <= tol && mean_err <= tol && zs.iter().all(|z| *z <= cfg.z_bound);
    let contract = format!(
        "h1 coefficients and implied mean exact to {tol:e} (relative){}",
        if n > 0 { format!("; simulated means within {} standard errors", cfg.z_bound) } else { String::new() }
    );
    let mut t = Table::new([
        "coef_u",
        "coef_i",
        "coef_u_expected",
        "coef_i_expected",
        "implied_mean_u",
        "implied_mean_i",
        "exact_mean_u",
        "exact_mean_i",
        "simulated_u",
        "simulated_u_std_error",
        "simulated_i",
        "simulated_i_std_error",
        "horizon",
    ]);
    t.push([
        r.coef_u,
        r.coef_i,
        expected[0],
        expected[1],
        r.implied_mean[0],
        r.implied_mean[1],
        r.exact_mean[0],
        r.exact_mean[1],
        r.simulated_u.mean,
        r.simulated_u.std_error,
        r.simulated_i.mean,
        r.simulated_i.std_error,
        horizon,
    ]
    .map(fmt_f64));
    let sim = if n > 0 {
        format!(
            "; ⟨U⟩ = {:.5} ± {:.5}, ⟨I⟩ = {:.5} ± {:.5} vs ({:.5}, {:.5})",
            r.simulated_u.mean, r.simulated_u.std_error, r.simulated_i.mean, r.simulated_i.std_error, r.exact_mean[0], r.exact_mean[1]
        )
    } else {
        String::new()
    };
    Ok(Outcome {
        name: cfg.name.clone(),
        kind: cfg.kind,
        pass,
        summary: format!("coefficient error {coef_err:.1e}, mean error {mean_err:.1e}{sim}"),
        tables: vec![(format!("{}.csv", cfg.name), annotate(t, cfg, &contract, pass))],
        contract,
    })
}

/// Runs one experiment without touching the filesystem.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome, RunError> {
    let result = match cfg.kind {
        Kind::LimitExchange => limit_exchange(cfg),
        Kind::McLennanVsExact => mclennan_vs_exact(cfg),
        Kind::TransientExcess => transient(cfg),
        Kind::FluctuationSymmetry => fluctuation(cfg),
        Kind::DentNorm => dent_norm(cfg),
        Kind::GreenKubo => green_kubo(cfg),
        Kind::LosIdentity => los_identity(cfg),
        Kind::LocalEquilibrium => local_equilibrium(cfg),
        Kind::RlcCheck => rlc_check(cfg),
    };
    result.map_err(|source| RunError::Model { experiment: cfg.name.clone(), source })
}
