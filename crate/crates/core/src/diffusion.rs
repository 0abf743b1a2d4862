//! One-dimensional diffusions on the unit circle.
//!
//! The process
//!
//! ```text
//! dx = [χ(εF1 − U') + D'] dt + √(2D) dB,      D = χ / β,
//! ```
//!
//! is discretized on the nodes `x_i = iΔ`, `Δ = 1/n`, as a nearest-neighbour
//! jump process with edge rates
//!
//! ```text
//! λ(i, i±1) = (D_e / Δ²) exp(−β (U_{i±1} − U_i) / 2) exp(± β ε Δ F1_e / 2)
//! ```
//!
//! where `e` is the edge midpoint. This chain is a [`JumpModel`] in its own
//! right: it is in detailed balance with `ρ₀(i) ∝ e^{−βU(x_i)}` at `ε = 0`,
//! and every exact statement about jump processes holds for it at any
//! resolution. Refinement only controls the distance to the continuum.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::greenkubo;
use crate::markov::{Distribution, JumpModel};
use crate::mclennan::{self, linear_work};
use crate::stats::{parallel_samples, substream, PathEstimate};

/// `f(x) = a₀ + Σ_k [a_k cos(2πkx) + b_k sin(2πkx)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicField {
    mean: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl PeriodicField {
    /// Coefficients for `k = 1, 2, …`; missing entries count as zero.
    pub fn new(mean: f64, cos: Vec<f64>, sin: Vec<f64>) -> Self {
        Self { mean, cos, sin }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(c, Vec::new(), Vec::new())
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.mean == 0.0 && self.cos.iter().chain(&self.sin).all(|c| *c == 0.0)
    }

    fn modes(&self) -> usize {
        self.cos.len().max(self.sin.len())
    }

    fn coeff(v: &[f64], k: usize) -> f64 {
        v.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn value(&self, x: f64) -> f64 {
        (1..=self.modes()).fold(self.mean, |acc, k| {
            let (s, c) = (TAU * k as f64 * x).sin_cos();
            acc + Self::coeff(&self.cos, k) * c + Self::coeff(&self.sin, k) * s
        })
    }

    pub fn derivative(&self, x: f64) -> f64 {
        (1..=self.modes()).fold(0.0, |acc, k| {
            let w = TAU * k as f64;
            let (s, c) = (w * x).sin_cos();
            acc + w * (Self::coeff(&self.sin, k) * c - Self::coeff(&self.cos, k) * s)
        })
    }

    /// Primitive of the oscillating part, `∫ (f − a₀)`, which is periodic.
    pub fn periodic_primitive(&self, x: f64) -> f64 {
        (1..=self.modes()).fold(0.0, |acc, k| {
            let w = TAU * k as f64;
            let (s, c) = (w * x).sin_cos();
            acc + (Self::coeff(&self.cos, k) * s - Self::coeff(&self.sin, k) * c) / w
        })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }
}

/// Number of points in the interpolation tables used by the SDE sampler.
const TABLE_SIZE: usize = 8192;

/// Periodic piecewise-linear interpolant on a uniform grid of `[0, 1)`.
#[derive(Debug, Clone)]
struct Table {
    values: Vec<f64>,
}

impl Table {
    fn new(f: impl Fn(f64) -> f64) -> Self {
        let mut values: Vec<f64> = (0..TABLE_SIZE).map(|i| f(i as f64 / TABLE_SIZE as f64)).collect();
        values.push(values[0]);
        Self { values }
    }

    #[inline]
    fn eval(&self, x: f64) -> f64 {
        let u = (x - x.floor()) * TABLE_SIZE as f64;
        let i = (u as usize).min(TABLE_SIZE - 1);
        let t = u - i as f64;
        self.values[i] + t * (self.values[i + 1] - self.values[i])
    }
}

/// Grid discretization of a periodic diffusion.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionModel {
    n_cells: usize,
    beta: f64,
    chi: PeriodicField,
    potential: PeriodicField,
    force: PeriodicField,
    epsilon: f64,
}

impl DiffusionModel {
    /// `force` is `F1`; the applied force is `ε F1`.
    pub fn new(
        n_cells: usize,
        beta: f64,
        chi: PeriodicField,
        potential: PeriodicField,
        force: PeriodicField,
        epsilon: f64,
    ) -> Result<Self> {
        if n_cells < 3 {
            return Err(Error::InvalidModel(format!("need at least 3 cells, got {n_cells}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidModel(format!("beta must be positive, got {beta}")));
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidModel(format!("epsilon must be finite and nonnegative, got {epsilon}")));
        }
        let probe = 16 * n_cells.max(TABLE_SIZE / 16);
        if (0..probe).any(|i| !(chi.value(i as f64 / probe as f64) > 0.0)) {
            return Err(Error::InvalidModel("mobility must be positive everywhere".into()));
        }
        Ok(Self { n_cells, beta, chi, potential, force, epsilon })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn chi(&self) -> &PeriodicField {
        &self.chi
    }

    pub fn potential(&self) -> &PeriodicField {
        &self.potential
    }

    pub fn force(&self) -> &PeriodicField {
        &self.force
    }

    pub fn delta(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    /// `D(x) = χ(x) / β`.
    pub fn diffusivity(&self, x: f64) -> f64 {
        self.chi.value(x) / self.beta
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.n_cells, self.beta, self.chi.clone(), self.potential.clone(), self.force.clone(), epsilon)
    }

    pub fn with_cells(&self, n_cells: usize) -> Result<Self> {
        Self::new(n_cells, self.beta, self.chi.clone(), self.potential.clone(), self.force.clone(), self.epsilon)
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| i as f64 * self.delta()).collect()
    }

    /// Edge field `Δ · f((i + ½)Δ)` on the pair `(i, i+1)`, antisymmetric.
    pub fn edge_field(&self, f: &PeriodicField) -> DMatrix<f64> {
        let n = self.n_cells;
        let d = self.delta();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            let j = (i + 1) % n;
            let v = d * f.value((i as f64 + 0.5) * d);
            m[(i, j)] += v;
            m[(j, i)] -= v;
        }
        m
    }

    /// The grid chain as a jump model with the same `ε`.
    pub fn chain(&self) -> Result<JumpModel> {
        let n = self.n_cells;
        let d = self.delta();
        let u: Vec<f64> = self.nodes().iter().map(|x| self.potential.value(*x)).collect();
        let rho0 = crate::markov::boltzmann(&u, self.beta)?;
        let mut gamma = DMatrix::zeros(n, n);
        for i in 0..n {
            let j = (i + 1) % n;
            let de = self.diffusivity((i as f64 + 0.5) * d);
            let g = rho0[i] * de / (d * d) * (-0.5 * self.beta * (u[j] - u[i])).exp();
            gamma[(i, j)] += g;
            gamma[(j, i)] += g;
        }
        JumpModel::new(u, self.beta, self.edge_field(&self.force), gamma, self.epsilon)
    }
}

/// Discrete backward generator `L₀` and forward generator `L*` at the
/// model's `ε`, as `(L₀, L*)`.
pub fn fp_generator(model: &DiffusionModel) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let chain = model.chain()?;
    Ok((chain.reference_rates()?.backward_generator(), chain.rates()?.forward_generator()))
}

/// A density on the grid nodes: `values[i] · Δ` is the mass at node `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    pub values: Vec<f64>,
    pub delta: f64,
}

impl GridDensity {
    pub fn from_distribution(p: &Distribution) -> Self {
        let delta = 1.0 / p.len() as f64;
        Self { values: p.as_slice().iter().map(|v| v / delta).collect(), delta }
    }

    pub fn to_distribution(&self) -> Result<Distribution> {
        Distribution::new(self.values.iter().map(|v| v * self.delta).collect())
    }
}

/// Probability current across each edge `(i, i+1)` for the law `mu` under
/// the rates at the model's `ε`.
pub fn current_density(model: &DiffusionModel, mu: &Distribution) -> Result<Vec<f64>> {
    let n = model.n_cells();
    if mu.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: mu.len() });
    }
    let r = model.chain()?.rates()?;
    Ok((0..n).map(|i| {
        let j = (i + 1) % n;
        mu[i] * r.rate(i, j) - mu[j] * r.rate(j, i)
    }).collect())
}

/// `(w, w1)` per node: the mean work rate `Σ_y λ(i,y) ε F1_e` at the model's
/// `ε`, and its linear coefficient `Σ_y λ₀(i,y) F1_e`.
pub fn work_density(model: &DiffusionModel) -> Result<(Vec<f64>, Vec<f64>)> {
    let chain = model.chain()?;
    let r = chain.rates()?;
    let f = chain.scaled_driving();
    let n = model.n_cells();
    let w = (0..n).map(|x| (0..n).map(|y| r.rate(x, y) * f[(x, y)]).sum()).collect();
    Ok((w, linear_work(&chain)?))
}

/// `h1 = β L₀⁻¹ w1` on the grid, in the `ρ₀`-mean-zero gauge.
pub fn mclennan_h1_diffusion(model: &DiffusionModel) -> Result<Vec<f64>> {
    Ok(mclennan::mclennan_correction(&model.chain()?)?.h1)
}

/// Continuum `h1` at the grid nodes from the one-dimensional solution
/// `h1' = β F1 + c / (ρ₀ D)`, `c = −β ∫F1 / ∫(ρ₀D)⁻¹`, evaluated by
/// composite Simpson quadrature on `quad` subintervals per cell, and shifted
/// to the mean-zero gauge of the discrete `ρ₀`.
pub fn continuum_h1(model: &DiffusionModel, quad: usize) -> Result<Vec<f64>> {
    let n = model.n_cells();
    let m = 2 * quad.max(1) * n;
    let h = 1.0 / m as f64;
    let beta = model.beta();
    let weight = |x: f64| (beta * model.potential.value(x)).exp() / model.diffusivity(x);
    // ρ₀ normalization cancels in c / ρ₀
    let simpson = |f: &dyn Fn(f64) -> f64, a: usize, b: usize| -> f64 {
        (a..b).step_by(2).map(|k| {
            let x = k as f64 * h;
            h / 3.0 * (f(x) + 4.0 * f(x + h) + f(x + 2.0 * h))
        }).sum()
    };
    let total = simpson(&weight, 0, m);
    let c = -beta * model.force.mean() / total;
    let slope = |x: f64| beta * model.force.value(x) + c * weight(x);
    let per_cell = m / n;
    let mut h1 = Vec::with_capacity(n);
    let mut acc = 0.0;
    for i in 0..n {
        h1.push(acc);
        acc += simpson(&slope, i * per_cell, (i + 1) * per_cell);
    }
    let rho0 = model.chain()?.equilibrium_density()?;
    let mean = rho0.expect(&h1);
    Ok(h1.into_iter().map(|v| v - mean).collect())
}

/// Sampled positions on a uniform time grid. Positions are unwrapped
/// (not reduced mod 1); `noise[k]` is the Brownian increment of step `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionPath {
    pub dt: f64,
    pub positions: Vec<f64>,
    pub noise: Vec<f64>,
}

impl DiffusionPath {
    pub fn horizon(&self) -> f64 {
        self.dt * self.noise.len() as f64
    }

    /// Positions in reverse order; the noise record is dropped.
    pub fn time_reverse(&self) -> DiffusionPath {
        DiffusionPath { dt: self.dt, positions: self.positions.iter().rev().copied().collect(), noise: Vec::new() }
    }
}

/// Tabulated drift and noise amplitude of the SDE.
#[derive(Debug, Clone)]
struct SdeTables {
    drift: Table,
    amplitude: Table,
}

impl SdeTables {
    fn new(model: &DiffusionModel) -> Self {
        let b = model.beta;
        let e = model.epsilon;
        let drift = Table::new(|x| {
            let chi = model.chi.value(x);
            chi * (e * model.force.value(x) - model.potential.derivative(x)) + model.chi.derivative(x) / b
        });
        let amplitude = Table::new(|x| (2.0 * model.diffusivity(x)).sqrt());
        Self { drift, amplitude }
    }
}

fn check_step(step: usize, dx: f64) -> Result<()> {
    if dx.abs() > 0.5 || !dx.is_finite() {
        return Err(Error::DtTooLarge { step, displacement: dx });
    }
    Ok(())
}

fn steps_for(horizon: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0 && dt.is_finite()) || !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("need dt > 0 and T ≥ 0, got dt = {dt}, T = {horizon}")));
    }
    Ok((horizon / dt).round() as usize)
}

/// Euler–Maruyama path with Itô drift `χ(εF1 − U') + D'`.
///
/// Takes `round(T/dt)` steps of exactly `dt`.
pub fn sde_sample(model: &DiffusionModel, x0: f64, dt: f64, horizon: f64, seed: u64) -> Result<DiffusionPath> {
    let steps = steps_for(horizon, dt)?;
    let tables = SdeTables::new(model);
    let mut rng = substream(seed, 0);
    let mut positions = Vec::with_capacity(steps + 1);
    let mut noise = Vec::with_capacity(steps);
    let mut x = x0;
    positions.push(x);
    let sq = dt.sqrt();
    for k in 0..steps {
        let db = sq * rng.sample::<f64, _>(StandardNormal);
        let dx = tables.drift.eval(x) * dt + tables.amplitude.eval(x) * db;
        check_step(k, dx)?;
        x += dx;
        positions.push(x);
        noise.push(db);
    }
    Ok(DiffusionPath { dt, positions, noise })
}

/// Midpoint-rule Stratonovich integral `Σ f((x_k + x_{k+1})/2) (x_{k+1} − x_k)`.
pub fn stratonovich_integral(path: &DiffusionPath, f: &PeriodicField) -> Result<f64> {
    let mut total = 0.0;
    for (k, w) in path.positions.windows(2).enumerate() {
        let dx = w[1] - w[0];
        check_step(k, dx)?;
        total += f.value(0.5 * (w[0] + w[1])) * dx;
    }
    Ok(total)
}

/// Itô form of the same integral, `Σ [w1^f(x_k) dt + f(x_k) √(2D(x_k)) ΔB_k]`
/// with `w1^f = (ρ₀ D f)' / ρ₀`, valid for equilibrium paths.
pub fn ito_decomposition(model: &DiffusionModel, path: &DiffusionPath, f: &PeriodicField) -> f64 {
    path.noise
        .iter()
        .zip(&path.positions)
        .map(|(db, x)| continuum_w1(model, f, *x) * path.dt + f.value(*x) * (2.0 * model.diffusivity(*x)).sqrt() * db)
        .sum()
}

/// `w1^f(x) = (D f)' − β U' D f`.
pub fn continuum_w1(model: &DiffusionModel, f: &PeriodicField, x: f64) -> f64 {
    let d = model.diffusivity(x);
    let dp = model.chi.derivative(x) / model.beta;
    dp * f.value(x) + d * f.derivative(x) - model.beta * model.potential.derivative(x) * d * f.value(x)
}

/// Draws from `ρ₀ ∝ e^{−βU}` on the circle by rejection from the uniform law.
fn draw_equilibrium(u_table: &Table, u_min: f64, beta: f64, rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let x: f64 = rng.random();
        let a: f64 = rng.random();
        if a < (-beta * (u_table.eval(x) - u_min)).exp() {
            return x;
        }
    }
}

/// Deterministic and sampled sides of the diffusion Green–Kubo relation.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionGkReport {
    pub estimate: PathEstimate,
    /// `⟨G1 χ F1⟩⁰ + β ⟨w1^G L₀⁻¹ w1^F⟩⁰` on the grid chain.
    pub deterministic: f64,
    /// Exact expectation of the estimator at horizon `T` on the grid chain.
    pub finite_horizon: f64,
    pub horizon: f64,
    pub dt: f64,
}

impl DiffusionGkReport {
    pub fn horizon_bias(&self) -> f64 {
        (self.finite_horizon - self.deterministic).abs()
    }
}

/// Whether to extrapolate the time step away.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepScheme {
    /// Plain Euler–Maruyama at `dt`.
    Plain,
    /// `2·(value at dt) − (value at 2dt)` on coupled paths, removing the
    /// first-order time-step bias.
    Richardson,
}

/// `(β/2T) ⟨∫G1∘dx ∫F1∘dx⟩⁰` over `n` equilibrium paths from `ρ₀`, and the
/// deterministic pairing. Sampling uses the `ε = 0` dynamics regardless of
/// the model's `ε`.
#[allow(clippy::too_many_arguments)]
pub fn gk_diffusion_estimate(
    model: &DiffusionModel,
    f1: &PeriodicField,
    g1: &PeriodicField,
    horizon: f64,
    n: usize,
    dt: f64,
    seed: u64,
    scheme: StepScheme,
) -> Result<DiffusionGkReport> {
    let eq = model.with_epsilon(0.0)?;
    let chain = eq.chain()?;
    let ef = eq.edge_field(f1);
    let eg = eq.edge_field(g1);
    let deterministic = greenkubo::gk_deterministic(&chain, &ef, &eg)?;
    let finite_horizon = greenkubo::gk_finite_horizon(&chain, &ef, &eg, horizon)?;
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let steps = steps_for(horizon, dt)?;
    if scheme == StepScheme::Richardson && steps % 2 == 1 {
        return Err(Error::InvalidArgument("Richardson needs an even number of steps".into()));
    }
    let tables = SdeTables::new(&eq);
    let ft = Table::new(|x| f1.value(x));
    let gt = Table::new(|x| g1.value(x));
    let ut = Table::new(|x| eq.potential.value(x));
    // the interpolant never dips below the smallest node value
    let u_min = ut.values.iter().copied().fold(f64::INFINITY, f64::min);
    let beta = eq.beta;
    let scale = beta / (2.0 * steps as f64 * dt);
    let sq = dt.sqrt();
    let failed = std::sync::atomic::AtomicBool::new(false);
    let values = parallel_samples(n, seed, 0, |_, rng| {
        let x0 = draw_equilibrium(&ut, u_min, beta, rng);
        let (mut x, mut jf, mut jg) = (x0, 0.0, 0.0);
        let (mut xc, mut jfc, mut jgc) = (x0, 0.0, 0.0);
        let mut pending = 0.0;
        for k in 0..steps {
            let db = sq * rng.sample::<f64, _>(StandardNormal);
            let dx = tables.drift.eval(x) * dt + tables.amplitude.eval(x) * db;
            if dx.abs() > 0.5 {
                failed.store(true, std::sync::atomic::Ordering::Relaxed);
                return f64::NAN;
            }
            let mid = x + 0.5 * dx;
            jf += ft.eval(mid) * dx;
            jg += gt.eval(mid) * dx;
            x += dx;
            if scheme == StepScheme::Richardson {
                pending += db;
                if k % 2 == 1 {
                    let dxc = tables.drift.eval(xc) * 2.0 * dt + tables.amplitude.eval(xc) * pending;
                    let midc = xc + 0.5 * dxc;
                    jfc += ft.eval(midc) * dxc;
                    jgc += gt.eval(midc) * dxc;
                    xc += dxc;
                    pending = 0.0;
                }
            }
        }
        match scheme {
            StepScheme::Plain => scale * jf * jg,
            StepScheme::Richardson => scale * (2.0 * jf * jg - jfc * jgc),
        }
    });
    if failed.load(std::sync::atomic::Ordering::Relaxed) {
        return Err(Error::DtTooLarge { step: 0, displacement: f64::NAN });
    }
    Ok(DiffusionGkReport {
        estimate: PathEstimate::from_samples(&values, seed),
        deterministic,
        finite_horizon,
        horizon: steps as f64 * dt,
        dt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn generic(n: usize, eps: f64) -> DiffusionModel {
        DiffusionModel::new(
            n,
            1.0,
            PeriodicField::new(1.0, vec![0.3], vec![]),
            PeriodicField::new(0.0, vec![0.5], vec![0.0, 0.2]),
            PeriodicField::new(1.0, vec![], vec![0.5]),
            eps,
        )
        .unwrap()
    }

    #[test]
    fn field_derivative_matches_finite_difference() {
        let f = PeriodicField::new(0.2, vec![0.5, -0.1], vec![0.3]);
        for x in [0.0, 0.13, 0.77] {
            let h = 1e-6;
            let fd = (f.value(x + h) - f.value(x - h)) / (2.0 * h);
            assert_relative_eq!(f.derivative(x), fd, epsilon = 1e-7);
            let pd = (f.periodic_primitive(x + h) - f.periodic_primitive(x - h)) / (2.0 * h);
            assert_relative_eq!(pd, f.value(x) - 0.2, epsilon = 1e-7);
        }
    }

    #[test]
    fn flat_model_has_uniform_stationary_law() {
        let m = DiffusionModel::new(16, 2.0, PeriodicField::constant(1.0), PeriodicField::zero(), PeriodicField::zero(), 0.0)
            .unwrap();
        let rho = m.chain().unwrap().rates().unwrap().stationary().unwrap();
        for i in 0..16 {
            assert_relative_eq!(rho[i], 1.0 / 16.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn reference_chain_is_in_detailed_balance() {
        let m = generic(32, 0.0);
        let chain = m.chain().unwrap();
        let r = chain.rates().unwrap();
        let rho0 = chain.equilibrium_density().unwrap();
        for i in 0..32 {
            let j = (i + 1) % 32;
            assert!((rho0[i] * r.rate(i, j) - rho0[j] * r.rate(j, i)).abs() < 1e-14);
        }
        let rho = r.stationary().unwrap();
        assert!(rho.max_abs_diff(&rho0) < 1e-12);
    }

    #[test]
    fn equilibrium_carries_no_current() {
        let m = generic(24, 0.0);
        let rho0 = m.chain().unwrap().equilibrium_density().unwrap();
        assert!(current_density(&m, &rho0).unwrap().iter().all(|j| j.abs() < 1e-14));
    }

    #[test]
    fn discrete_w1_is_centred() {
        let m = generic(40, 0.2);
        let (w, w1) = work_density(&m).unwrap();
        let rho0 = m.chain().unwrap().equilibrium_density().unwrap();
        assert!(rho0.expect(&w1).abs() < 1e-12);
        assert!(w.iter().any(|v| *v != 0.0));
        let flat = DiffusionModel::new(20, 1.0, PeriodicField::constant(1.0), PeriodicField::zero(), PeriodicField::constant(1.0), 0.1)
            .unwrap();
        assert!(work_density(&flat).unwrap().1.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn stratonovich_of_constant_is_displacement() {
        let m = generic(16, 0.0);
        let p = sde_sample(&m, 0.3, 1e-4, 0.05, 2).unwrap();
        let s = stratonovich_integral(&p, &PeriodicField::constant(2.5)).unwrap();
        assert_relative_eq!(s, 2.5 * (p.positions.last().unwrap() - 0.3), epsilon = 1e-12);
        let back = stratonovich_integral(&p.time_reverse(), &PeriodicField::new(0.1, vec![0.4], vec![0.2])).unwrap();
        let fwd = stratonovich_integral(&p, &PeriodicField::new(0.1, vec![0.4], vec![0.2])).unwrap();
        assert_relative_eq!(back, -fwd, epsilon = 1e-12);
    }

    #[test]
    fn oversized_steps_are_rejected() {
        let m = generic(16, 0.0);
        assert!(matches!(sde_sample(&m, 0.0, 10.0, 20.0, 1), Err(Error::DtTooLarge { .. })));
    }
}
