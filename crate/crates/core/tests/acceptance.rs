//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Criteria run sequentially so each runtime is measured alone.

use std::process::ExitCode;
use std::time::Instant;

use nalgebra::DMatrix;
use ness_core::diffusion::{gk_diffusion_estimate, DiffusionModel, PeriodicField, StepScheme};
use ness_core::greenkubo::{default_horizon, gk_correlation_estimate, gk_finite_horizon, gk_deterministic, onsager_check};
use ness_core::mclennan::{
    coupled_rates, coupling_perturbation_correction, entropic_form_correction, limit_exchange_table,
    mclennan_correction, projection_residual, transient_excess,
};
use ness_core::models::lattice_gas::LatticeGas;
use ness_core::models::rlc::rlc_mclennan_check;
use ness_core::models::{random_edge_field, random_model, LatticeGasSpec, RlcSpec};
use ness_core::pathspace::{
    density_via_equilibrium, fluctuation_symmetry_many, normalization_check, EndState, EndStateIn, Observable,
};
use ness_core::{Distribution, RateMatrix, Result};

const MODEL_SEED: u64 = 2024;
const EPS_GRID: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn stable(values: &[f64]) -> (bool, f64) {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let ratio = max / min;
    (min > 0.0 && max.is_finite() && ratio <= 2.0, ratio)
}

fn first_order_exactness() -> Result<Outcome> {
    let base = random_model(4, MODEL_SEED, 0.0)?;
    let h1 = mclennan_correction(&base)?.h1;
    let rho0 = base.equilibrium_density()?;
    let mut scaled = Vec::new();
    for eps in EPS_GRID {
        let rho = base.with_epsilon(eps)?.rates()?.stationary()?;
        let err = (0..4).map(|x| ((rho[x] / rho0[x]).ln() - eps * h1[x]).abs()).fold(0.0, f64::max);
        scaled.push(err / (eps * eps));
    }
    let (ok, ratio) = stable(&scaled);
    outcome(ok, format!("err/ε² = {scaled:.4?}, max/min = {ratio:.3}"))
}

fn limit_exchange() -> Result<Outcome> {
    let eps = 1e-3;
    let model = random_model(4, MODEL_SEED, eps)?;
    let gap = model.rates()?.spectral_gap()?;
    let table = limit_exchange_table(&model, &[eps], &[10.0 / gap, 20.0 / gap, 40.0 / gap])?;
    let h1 = mclennan_correction(&model)?.h1;
    let mut worst: f64 = 0.0;
    for x in 0..4 {
        worst = worst
            .max((table.t_then_eps[x] - table.eps_then_t[x]).abs())
            .max((table.t_then_eps[x] - h1[x]).abs())
            .max((table.eps_then_t[x] - h1[x]).abs());
    }
    outcome(worst <= 1e-3, format!("max deviation among both limits and h1 = {worst:.2e} (tolerance 1e-3)"))
}

fn counterterm() -> Result<Outcome> {
    let base = random_model(4, MODEL_SEED, 0.0)?;
    let h1 = mclennan_correction(&base)?.h1;
    let mut constants = Vec::new();
    let mut t_residual: f64 = 0.0;
    for eps in EPS_GRID {
        let model = base.with_epsilon(eps)?;
        let gap = model.rates()?.spectral_gap()?;
        let mut err: f64 = 0.0;
        for x in 0..4 {
            let a = transient_excess(&model, x, 20.0 / gap)?;
            let b = transient_excess(&model, x, 40.0 / gap)?;
            t_residual = t_residual.max((a - b).abs());
            err = err.max((b + eps * h1[x]).abs());
        }
        constants.push(err / (eps * eps));
    }
    let (ok, ratio) = stable(&constants);
    outcome(
        ok && t_residual <= 1e-8,
        format!("C(ε) = {constants:.4?}, max/min = {ratio:.3}, T-residual = {t_residual:.1e}"),
    )
}

fn fluctuation_symmetry() -> Result<Outcome> {
    let model = random_model(4, MODEL_SEED, 0.05)?;
    let ends: Vec<EndState> = (0..4).map(EndState).collect();
    let set = EndStateIn(vec![0, 2]);
    let mut obs: Vec<&dyn Observable> = ends.iter().map(|e| e as &dyn Observable).collect();
    obs.push(&set);
    let results = fluctuation_symmetry_many(&model, &obs, 2.0, 100_000, 11)?;
    let z: Vec<f64> = results.iter().map(|(l, r)| l.z_score(r)).collect();
    outcome(z.iter().all(|v| *v <= 3.0), format!("z-scores {z:.2?} (bound 3)"))
}

fn generalized_representation() -> Result<Outcome> {
    let model = random_model(4, MODEL_SEED, 0.05)?;
    let horizon = 2.0;
    let rho0 = model.equilibrium_density()?;
    let rho_t = model.rates()?.evolve(&rho0, horizon)?;
    let mut z_density = Vec::new();
    for x in 0..4 {
        let e = density_via_equilibrium(&model, x, horizon, 100_000, 21 + x as u64)?;
        z_density.push(e.z_against(rho_t[x] / rho0[x]));
    }
    let laws = [Distribution::uniform(4), Distribution::point_mass(4, 1), rho0.clone()];
    let mut z_norm = Vec::new();
    for (k, mu) in laws.iter().enumerate() {
        z_norm.push(normalization_check(&model, mu, horizon, 100_000, 31 + k as u64)?.z_against(1.0));
    }
    let ok = z_density.iter().chain(&z_norm).all(|v| *v <= 3.0);
    outcome(ok, format!("density z {z_density:.2?}, normalization z {z_norm:.2?} (bound 3)"))
}

fn lattice_gas() -> Result<Outcome> {
    let mut los: f64 = 0.0;
    let mut regroup: f64 = 0.0;
    for n in [2, 3, 4] {
        let gas = LatticeGas::new(LatticeGasSpec::with_random_energy(n, 1.0, 0.1, 40 + n as u64))?;
        los = los.max(gas.los_residual(&gas.linear_profile())?);
        let le = gas.local_equilibrium()?;
        let mc = mclennan_correction(gas.model())?.rho_mclennan;
        regroup = regroup.max(le.density.max_abs_diff(&mc));
    }
    outcome(los <= 1e-12 && regroup <= 1e-10, format!("bond-current residual {los:.1e}, regrouping error {regroup:.1e}"))
}

fn rlc() -> Result<Outcome> {
    let mut coef_err: f64 = 0.0;
    for spec in [RlcSpec::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.1), RlcSpec::new(2.3, 0.7, 1.9, 0.4, 1.6, -0.3)] {
        let r = rlc_mclennan_check(&spec, 1.0, 0, 0)?;
        let s = spec.r1 + spec.r2;
        coef_err = coef_err
            .max((r.coef_u - spec.r1 * spec.c / s).abs())
            .max((r.coef_i - spec.l / s).abs())
            .max((r.coef_u_parity - r.coef_u).abs())
            .max((r.coef_i_parity - r.coef_i).abs());
    }
    let r = rlc_mclennan_check(&RlcSpec::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.1), 30.0, 100_000, 7)?;
    let zu = r.simulated_u.z_against(0.05);
    let zi = r.simulated_i.z_against(0.05);
    outcome(
        coef_err <= 1e-12 && zu <= 3.0 && zi <= 3.0,
        format!(
            "coefficient error {coef_err:.1e}; ⟨U⟩ = {:.4} ± {:.4} (z {zu:.2}), ⟨I⟩ = {:.4} ± {:.4} (z {zi:.2})",
            r.simulated_u.mean, r.simulated_u.std_error, r.simulated_i.mean, r.simulated_i.std_error
        ),
    )
}

fn green_kubo() -> Result<Outcome> {
    let model = random_model(5, MODEL_SEED, 0.0)?;
    let f = random_edge_field(&model, 1);
    let g = random_edge_field(&model, 2);
    let (a, b) = onsager_check(&model, &f, &g)?;
    let t = default_horizon(&model)?;
    let det = gk_deterministic(&model, &f, &g)?;
    let bias = (gk_finite_horizon(&model, &f, &g, t)? - det).abs();
    let est = gk_correlation_estimate(&model, &f, &g, t, 100_000, 51)?;
    let jump_ok = (a - b).abs() <= 1e-10 && (est.mean - det).abs() <= 3.0 * est.std_error + bias;

    let diffusion = DiffusionModel::new(
        64,
        1.0,
        PeriodicField::new(1.0, vec![0.3], vec![]),
        PeriodicField::new(0.0, vec![0.5], vec![0.0, 0.2]),
        PeriodicField::zero(),
        0.0,
    )?;
    let ff = PeriodicField::new(1.0, vec![], vec![0.5]);
    let gg = PeriodicField::new(0.8, vec![0.4], vec![]);
    let chain = diffusion.chain()?;
    let (da, db) = onsager_check(&chain, &diffusion.edge_field(&ff), &diffusion.edge_field(&gg))?;
    let td = default_horizon(&chain)?;
    let dt = 2e-4;
    let r = gk_diffusion_estimate(&diffusion, &ff, &gg, td, 100_000, dt, 61, StepScheme::Plain)?;
    let diff_ok = (da - db).abs() <= 1e-10
        && (r.estimate.mean - r.deterministic).abs() <= 3.0 * r.estimate.std_error + r.horizon_bias();
    outcome(
        jump_ok && diff_ok,
        format!(
            "jump: pairings Δ {:.1e}, MC {:.4} ± {:.4} vs {det:.4} (T-bias {bias:.1e}); \
             diffusion: pairings Δ {:.1e}, MC {:.4} ± {:.4} vs {:.4} (T-bias {:.1e}, dt {dt})",
            (a - b).abs(),
            est.mean,
            est.std_error,
            (da - db).abs(),
            r.estimate.mean,
            r.estimate.std_error,
            r.deterministic,
            r.horizon_bias()
        ),
    )
}

/// Two 3-state blocks `{0,1,2}` and `{3,4,5}` mapped onto each other by
/// `i ↦ i+3`, coupled through the forbidden pairs `{0,4}` and `{1,3}`.
fn two_blocks() -> Result<(Distribution, RateMatrix, DMatrix<f64>)> {
    let u = [0.0, 0.4, -0.3, 0.0, 0.4, -0.3];
    let rho0 = Distribution::new(ness_core::markov::boltzmann(&u, 1.0)?)?;
    let mut gamma = DMatrix::zeros(6, 6);
    for off in [0, 3] {
        for (a, b, v) in [(0, 1, 1.0), (1, 2, 0.7), (0, 2, 1.3)] {
            gamma[(a + off, b + off)] = v;
            gamma[(b + off, a + off)] = v;
        }
    }
    let base = RateMatrix::new(DMatrix::from_fn(6, 6, |x, y| gamma[(x, y)] / rho0[x]))?;
    let (k1, k2) = (0.8, 1.7);
    let mut k = DMatrix::zeros(6, 6);
    k[(0, 4)] = k1;
    k[(3, 1)] = k1;
    k[(4, 0)] = k2;
    k[(1, 3)] = k2;
    Ok((rho0, base, k))
}

fn non_entropic() -> Result<Outcome> {
    let (rho0, base, k) = two_blocks()?;
    let correction = coupling_perturbation_correction(&rho0, &base, &k, 1.0)?;
    // forward differences from ρ₀, one Richardson step
    let slope = |e: f64| -> Result<Vec<f64>> {
        let rho = coupled_rates(&base, &k, e)?.stationary()?;
        Ok((0..6).map(|x| (rho[x] - rho0[x]) / e).collect())
    };
    let (coarse, fine) = (slope(1e-4)?, slope(5e-5)?);
    let fd_err = (0..6).map(|x| (2.0 * fine[x] - coarse[x] - correction[x]).abs()).fold(0.0, f64::max);
    let entropic = entropic_form_correction(&rho0, &base, &k, 1.0)?;
    let (_, residual) = projection_residual(&correction, &entropic);
    outcome(
        fd_err <= 1e-6 && residual > 1e-3,
        format!("finite-difference error {fd_err:.1e} (≤ 1e-6), entropic-form residual {residual:.3} (> 1e-3)"),
    )
}

type Criterion = (&'static str, f64, fn() -> Result<Outcome>);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("first-order exactness of the McLennan density", 1.0, first_order_exactness),
        ("exchange of the ε and T limits", 10.0, limit_exchange),
        ("counterterm identity for the transient entropy flux", 10.0, counterterm),
        ("finite-time fluctuation symmetry", 30.0, fluctuation_symmetry),
        ("entropy-traffic representation and normalization", 60.0, generalized_representation),
        ("lattice-gas bond-current identity and local equilibrium", 5.0, lattice_gas),
        ("RLC first-order correction and stationary means", 30.0, rlc),
        ("Onsager reciprocity and Green-Kubo correlations", 120.0, green_kubo),
        ("non-entropic coupling perturbation", 5.0, non_entropic),
    ];
    let mut failures = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match result {
            Ok(o) => (o.pass && secs < *limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "[{}] {}. {name}: {detail} [{secs:.2} s, limit {limit} s]",
            if pass { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
