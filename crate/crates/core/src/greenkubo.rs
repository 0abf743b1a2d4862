//! Linear response around equilibrium for jump processes.
//!
//! For a driving field `F1` the first-order stationary current is
//! `J_ε = ε β 𝔧^F + O(ε²)` with
//!
//! ```text
//! 𝔧^F(x,y) = γ(x,y) [F1(x,y) + h^F(x) − h^F(y)],    h^F = L₀⁻¹ w1^F.
//! ```
//!
//! The pairing `½ Σ G1 𝔧^F = ½ Σ γ G1 F1 + ⟨w1^G, L₀⁻¹ w1^F⟩₀` is symmetric in
//! `(F1, G1)`, and `β` times it is the long-time limit of the equilibrium
//! current–current correlation `(β/2T) ⟨J_G J_F⟩⁰`, where
//! `J_F = Σ_jumps F1(x_{t−}, x_t)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::markov::JumpModel;
use crate::mclennan::{linear_work_for, PoissonSolver};
use crate::pathspace::JumpSampler;
use crate::stats::{draw_index, parallel_samples, PathEstimate};

fn check_field(model: &JumpModel, f: &DMatrix<f64>) -> Result<()> {
    let n = model.n_states();
    if f.nrows() != n || f.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f.nrows() });
    }
    for x in 0..n {
        for y in x..n {
            if (f[(x, y)] + f[(y, x)]).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!("field not antisymmetric at ({x},{y})")));
            }
        }
    }
    Ok(())
}

/// `𝔧^F(x,y) = γ(x,y) [F1(x,y) + h^F(x) − h^F(y)]`; antisymmetric and
/// divergence-free. The physical first-order current is `β 𝔧^F`.
pub fn linear_response_current(model: &JumpModel, f1: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_field(model, f1)?;
    let solver = PoissonSolver::for_model(model)?;
    current_with(model, &solver, f1)
}

fn current_with(model: &JumpModel, solver: &PoissonSolver, f1: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let h = solver.solve(&linear_work_for(model, f1)?)?;
    let g = model.gamma();
    let n = model.n_states();
    Ok(DMatrix::from_fn(n, n, |x, y| if g[(x, y)] > 0.0 { g[(x, y)] * (f1[(x, y)] + h[x] - h[y]) } else { 0.0 }))
}

/// `½ Σ_{x,y} G1(x,y) 𝔧^F(x,y)`.
pub fn pairing(model: &JumpModel, f1: &DMatrix<f64>, g1: &DMatrix<f64>) -> Result<f64> {
    Ok(0.5 * g1.component_mul(&linear_response_current(model, f1)?).sum())
}

/// `(½ Σ G1 𝔧^F, ½ Σ F1 𝔧^G)`, each from its own Poisson solve.
pub fn onsager_check(model: &JumpModel, f1: &DMatrix<f64>, g1: &DMatrix<f64>) -> Result<(f64, f64)> {
    check_field(model, f1)?;
    check_field(model, g1)?;
    let solver = PoissonSolver::for_model(model)?;
    let jf = current_with(model, &solver, f1)?;
    let jg = current_with(model, &solver, g1)?;
    Ok((0.5 * g1.component_mul(&jf).sum(), 0.5 * f1.component_mul(&jg).sum()))
}

/// `β [½ Σ γ G1 F1 + Σ ρ₀ w1^G L₀⁻¹ w1^F]`, computed from the mobility term
/// and the Poisson solve rather than from the current.
pub fn gk_deterministic(model: &JumpModel, f1: &DMatrix<f64>, g1: &DMatrix<f64>) -> Result<f64> {
    check_field(model, f1)?;
    check_field(model, g1)?;
    let rho0 = model.equilibrium_density()?;
    let solver = PoissonSolver::for_model(model)?;
    let mobility = 0.5 * model.gamma().component_mul(&g1.component_mul(f1)).sum();
    let wg = linear_work_for(model, g1)?;
    let hf = solver.solve(&linear_work_for(model, f1)?)?;
    let cross: f64 = (0..model.n_states()).map(|x| rho0[x] * wg[x] * hf[x]).sum();
    Ok(model.beta() * (mobility + cross))
}

/// Exact `(β/2T) ⟨J_G J_F⟩⁰` at finite `T` for paths started from `ρ₀`:
/// the limit plus `(β/T) ⟨w1^G, L₀⁻²(I − e^{TL₀}) w1^F⟩₀`.
pub fn gk_finite_horizon(model: &JumpModel, f1: &DMatrix<f64>, g1: &DMatrix<f64>, horizon: f64) -> Result<f64> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon {horizon} must be positive")));
    }
    let limit = gk_deterministic(model, f1, g1)?;
    let rho0 = model.equilibrium_density()?;
    let r0 = model.reference_rates()?;
    let solver = PoissonSolver::new(&r0, &rho0)?;
    let wg = linear_work_for(model, g1)?;
    let a = solver.solve(&linear_work_for(model, f1)?)?;
    let b = solver.solve(&a)?;
    let (eb, _) = r0.propagate_observable(&b, horizon)?;
    let bias: f64 = (0..model.n_states()).map(|x| rho0[x] * wg[x] * (b[x] - eb[x])).sum();
    Ok(limit + model.beta() * bias / horizon)
}

/// Monte Carlo estimate of `(β/2T) ⟨J_G J_F⟩⁰` over `n` equilibrium paths
/// started from `ρ₀`. Both integrals are taken on the same path.
pub fn gk_correlation_estimate(
    model: &JumpModel,
    f1: &DMatrix<f64>,
    g1: &DMatrix<f64>,
    horizon: f64,
    n: usize,
    seed: u64,
) -> Result<PathEstimate> {
    check_field(model, f1)?;
    check_field(model, g1)?;
    if !(horizon > 0.0 && horizon.is_finite()) || n == 0 {
        return Err(Error::InvalidArgument("need a positive horizon and at least one sample".into()));
    }
    let rho0 = model.equilibrium_density()?;
    let sampler = JumpSampler::new(&model.reference_rates()?);
    let scale = model.beta() / (2.0 * horizon);
    let values = parallel_samples(n, seed, 0, |_, rng| {
        let x0 = draw_index(rho0.as_slice(), rng);
        let path = sampler.sample(x0, horizon, rng);
        scale * path.jump_sum(g1) * path.jump_sum(f1)
    });
    Ok(PathEstimate::from_samples(&values, seed))
}

/// Deterministic and sampled sides of the response relations.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseReport {
    /// `½ Σ G1 𝔧^F`.
    pub pairing_gf: f64,
    /// `½ Σ F1 𝔧^G`.
    pub pairing_fg: f64,
    pub gk_estimate: PathEstimate,
    /// `β` times the pairing, the `T → ∞` value of the correlation.
    pub gk_deterministic: f64,
    /// Exact expectation of the estimator at the sampled horizon.
    pub gk_finite_horizon: f64,
    pub horizon: f64,
}

impl ResponseReport {
    /// `|finite-T value − limit|`.
    pub fn horizon_bias(&self) -> f64 {
        (self.gk_finite_horizon - self.gk_deterministic).abs()
    }
}

/// Runs all checks at horizon `T` (default choice: `20 / gap`).
pub fn response_report(
    model: &JumpModel,
    f1: &DMatrix<f64>,
    g1: &DMatrix<f64>,
    horizon: f64,
    n: usize,
    seed: u64,
) -> Result<ResponseReport> {
    let (pairing_gf, pairing_fg) = onsager_check(model, f1, g1)?;
    Ok(ResponseReport {
        pairing_gf,
        pairing_fg,
        gk_estimate: gk_correlation_estimate(model, f1, g1, horizon, n, seed)?,
        gk_deterministic: gk_deterministic(model, f1, g1)?,
        gk_finite_horizon: gk_finite_horizon(model, f1, g1, horizon)?,
        horizon,
    })
}

/// Default horizon `20 / gap` of the reference process.
pub fn default_horizon(model: &JumpModel) -> Result<f64> {
    Ok(20.0 / model.reference_rates()?.spectral_gap()?)
}

/// Stationary mean work rate `½ Σ J_ε(x,y) ε F1(x,y)` of the model.
pub fn stationary_work(model: &JumpModel) -> Result<f64> {
    let rates = model.rates()?;
    let j = rates.probability_current(&rates.stationary()?);
    Ok(0.5 * j.component_mul(&model.scaled_driving()).sum())
}
