//! Noisy RLC circuit: two resistors in series with a source `E`, an
//! inductance `L` and a capacitance `C` parallel to the first resistor.
//!
//! The voltage `U` over `R1` (even under time reversal) and the current `I`
//! through `R2` (odd) follow the linear SDE
//!
//! ```text
//! dU = (I − U/R1)/C dt + √(2/(βR1))/C dB₁
//! dI = (E − R2 I − U)/L dt + √(2R2/β)/L dB₂
//! ```
//!
//! whose equilibrium (`E = 0`) law is `ρ₀ ∝ exp(−β(C U² + L I²)/2)`.
//! Paths are sampled with the exact Gaussian transition kernel.

use nalgebra::{Cholesky, Matrix2, Vector2};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::stats::{parallel_rows, substream, PathEstimate};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RlcSpec {
    pub r1: f64,
    pub r2: f64,
    pub l: f64,
    pub c: f64,
    pub beta: f64,
    pub e: f64,
}

impl RlcSpec {
    pub fn new(r1: f64, r2: f64, l: f64, c: f64, beta: f64, e: f64) -> Self {
        Self { r1, r2, l, c, beta, e }
    }
}

/// Assembled linear SDE `dx = (A x + b) dt + S dB` on `x = (U, I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RlcModel {
    spec: RlcSpec,
    drift: Matrix2<f64>,
    offset: Vector2<f64>,
    noise: Matrix2<f64>,
    covariance: Matrix2<f64>,
}

/// `π(U, I) = (U, −I)`.
pub const PARITY: Matrix2<f64> = Matrix2::new(1.0, 0.0, 0.0, -1.0);

impl RlcModel {
    pub fn new(spec: RlcSpec) -> Result<Self> {
        let RlcSpec { r1, r2, l, c, beta, e } = spec;
        for (name, v) in [("R1", r1), ("R2", r2), ("L", l), ("C", c), ("beta", beta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidModel(format!("{name} must be positive, got {v}")));
            }
        }
        if !e.is_finite() {
            return Err(Error::InvalidModel("E must be finite".into()));
        }
        let drift = Matrix2::new(-1.0 / (r1 * c), 1.0 / c, -1.0 / l, -r2 / l);
        let offset = Vector2::new(0.0, e / l);
        let noise = Matrix2::new((2.0 / (beta * r1)).sqrt() / c, 0.0, 0.0, (2.0 * r2 / beta).sqrt() / l);
        let covariance = Matrix2::new(1.0 / (beta * c), 0.0, 0.0, 1.0 / (beta * l));
        Ok(Self { spec, drift, offset, noise, covariance })
    }

    pub fn spec(&self) -> RlcSpec {
        self.spec
    }

    pub fn drift(&self) -> Matrix2<f64> {
        self.drift
    }

    pub fn offset(&self) -> Vector2<f64> {
        self.offset
    }

    pub fn noise(&self) -> Matrix2<f64> {
        self.noise
    }

    /// Stationary covariance `diag(1/(βC), 1/(βL))`, the same for every `E`.
    pub fn covariance(&self) -> Matrix2<f64> {
        self.covariance
    }

    /// Solves `A m + b = 0`.
    pub fn stationary_mean(&self) -> Result<Vector2<f64>> {
        self.drift.lu().solve(&(-self.offset)).ok_or_else(|| Error::Range("singular drift".into()))
    }

    /// Residual of the Lyapunov equation `AΣ + ΣAᵀ + SSᵀ = 0`.
    pub fn lyapunov_residual(&self) -> f64 {
        (self.drift * self.covariance + self.covariance * self.drift.transpose() + self.noise * self.noise.transpose()).amax()
    }

    /// `max |π e^{At}Σ π − (e^{At}Σ)ᵀ|`: the stationary time correlation is
    /// symmetric up to the parity of `I`.
    pub fn generalized_detailed_balance_residual(&self, t: f64) -> f64 {
        let k = (self.drift * t).exp() * self.covariance;
        (PARITY * k * PARITY - k.transpose()).amax()
    }

    /// Exact transition kernel over time `t`: mean map and covariance.
    pub fn propagator(&self, t: f64) -> Result<Propagator> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("step {t} must be positive")));
        }
        let phi = (self.drift * t).exp();
        let m = self.stationary_mean()?;
        let cov = self.covariance - phi * self.covariance * phi.transpose();
        let cov = 0.5 * (cov + cov.transpose());
        let chol = Cholesky::new(cov).ok_or_else(|| Error::Range("transition covariance not positive".into()))?;
        Ok(Propagator { phi, mean: m, factor: chol.l() })
    }

    /// Draws from `ρ₀`, the `E = 0` equilibrium law.
    pub fn sample_equilibrium<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector2<f64> {
        let z: Vector2<f64> = Vector2::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        Vector2::new(self.covariance[(0, 0)].sqrt() * z[0], self.covariance[(1, 1)].sqrt() * z[1])
    }

    /// Path on the grid `k·dt`, `k = 0..=steps`, deterministic in `seed`.
    pub fn sample_path(&self, x0: Vector2<f64>, dt: f64, steps: usize, seed: u64) -> Result<RlcPath> {
        let p = self.propagator(dt)?;
        let mut rng = substream(seed, 0);
        let mut states = Vec::with_capacity(steps + 1);
        let mut x = x0;
        states.push([x[0], x[1]]);
        for _ in 0..steps {
            x = p.step(&x, &mut rng);
            states.push([x[0], x[1]]);
        }
        Ok(RlcPath { dt, states })
    }

    /// Means of `(U, I)` after evolving `n` independent copies from `ρ₀`
    /// for time `horizon` in one exact step.
    pub fn simulated_means(&self, horizon: f64, n: usize, seed: u64) -> Result<(PathEstimate, PathEstimate)> {
        let p = self.propagator(horizon)?;
        let rows = parallel_rows(n, seed, 0, |_, rng| {
            let x0 = self.sample_equilibrium(rng);
            let x = p.step(&x0, rng);
            vec![x[0], x[1]]
        });
        let col = |k| crate::stats::column(&rows, k);
        Ok((PathEstimate::from_samples(&col(0), seed), PathEstimate::from_samples(&col(1), seed)))
    }
}

/// `x_{t} = m + Φ(x_0 − m) + K z`, `z` standard normal.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    pub phi: Matrix2<f64>,
    pub mean: Vector2<f64>,
    pub factor: Matrix2<f64>,
}

impl Propagator {
    pub fn step<R: Rng + ?Sized>(&self, x: &Vector2<f64>, rng: &mut R) -> Vector2<f64> {
        let z = Vector2::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        self.mean + self.phi * (x - self.mean) + self.factor * z
    }
}

/// Sampled `(U, I)` on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RlcPath {
    pub dt: f64,
    pub states: Vec<[f64; 2]>,
}

impl RlcPath {
    pub fn horizon(&self) -> f64 {
        self.dt * (self.states.len().saturating_sub(1)) as f64
    }

    /// `(U, −I)` at every time, reversed in order.
    pub fn time_reverse(&self) -> RlcPath {
        RlcPath { dt: self.dt, states: self.states.iter().rev().map(|s| [s[0], -s[1]]).collect() }
    }
}

/// `β E ∫₀ᵀ I_t dt` by the trapezoid rule.
pub fn rlc_entropy_flux(path: &RlcPath, spec: &RlcSpec) -> f64 {
    let integral: f64 = path.states.windows(2).map(|w| 0.5 * (w[0][1] + w[1][1]) * path.dt).sum();
    spec.beta * spec.e * integral
}

/// Closed-form first-order correction and its cross-checks.
#[derive(Debug, Clone, PartialEq)]
pub struct RlcReport {
    /// `h1(U, I) = β E (coef_u U + coef_i I)`, via the ρ₀-adjoint `Σ⁻¹AΣ`.
    pub coef_u: f64,
    pub coef_i: f64,
    /// The same coefficients via the parity conjugation `π Aᵀ π`.
    pub coef_u_parity: f64,
    pub coef_i_parity: f64,
    /// Mean shift `Σ ∇h1` implied by the McLennan density.
    pub implied_mean: [f64; 2],
    /// Exact stationary mean of the driven circuit.
    pub exact_mean: [f64; 2],
    pub simulated_u: PathEstimate,
    pub simulated_i: PathEstimate,
}

/// Coefficient vector `c` of `(L₀⁺)⁻¹ I = c · (U, I)` from the generator
/// restricted to linear functions, `M` acting on coefficients.
fn inverse_on_current(m: Matrix2<f64>) -> Result<Vector2<f64>> {
    m.lu().solve(&Vector2::new(0.0, 1.0)).ok_or_else(|| Error::Range("singular generator".into()))
}

/// Solves the adjoint Poisson problem on linear functions in two ways,
/// compares with the exact stationary mean and with `n` exact-propagator
/// samples at time `horizon` started from `ρ₀`.
pub fn rlc_mclennan_check(spec: &RlcSpec, horizon: f64, n: usize, seed: u64) -> Result<RlcReport> {
    let model = RlcModel::new(*spec)?;
    let a = model.drift();
    let s = model.covariance();
    // on f(x) = c·x the backward generator at E = 0 acts as c ↦ Aᵀc and its
    // ρ₀-adjoint as c ↦ Σ⁻¹AΣ c
    let s_inv = s.try_inverse().ok_or_else(|| Error::Range("singular covariance".into()))?;
    let adjoint = s_inv * a * s;
    let parity = PARITY * a.transpose() * PARITY;
    // h1 = −βE (L₀⁺)⁻¹ I
    let c_adj = -inverse_on_current(adjoint)?;
    let c_par = -inverse_on_current(parity)?;
    let implied = s * (c_adj * spec.beta * spec.e);
    let exact = model.stationary_mean()?;
    let (simulated_u, simulated_i) = if n > 0 { model.simulated_means(horizon, n, seed)? } else {
        (PathEstimate::exact(f64::NAN), PathEstimate::exact(f64::NAN))
    };
    Ok(RlcReport {
        coef_u: c_adj[0],
        coef_i: c_adj[1],
        coef_u_parity: c_par[0],
        coef_i_parity: c_par[1],
        implied_mean: [implied[0], implied[1]],
        exact_mean: [exact[0], exact[1]],
        simulated_u,
        simulated_i,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covariance_solves_lyapunov_equation() {
        let m = RlcModel::new(RlcSpec::new(2.0, 0.5, 1.5, 0.3, 0.8, 0.7)).unwrap();
        assert!(m.lyapunov_residual() < 1e-12);
    }

    #[test]
    fn adjoint_equals_parity_conjugate() {
        let m = RlcModel::new(RlcSpec::new(2.0, 0.5, 1.5, 0.3, 0.8, 0.0)).unwrap();
        let s = m.covariance();
        let adj = s.try_inverse().unwrap() * m.drift() * s;
        assert!((adj - PARITY * m.drift().transpose() * PARITY).amax() < 1e-14);
        for t in [0.1, 1.0, 3.0] {
            assert!(m.generalized_detailed_balance_residual(t) < 1e-14);
        }
    }

    #[test]
    fn zero_source_has_no_correction() {
        let r = rlc_mclennan_check(&RlcSpec::new(1.0, 2.0, 1.0, 1.0, 1.0, 0.0), 1.0, 0, 1).unwrap();
        assert_eq!(r.exact_mean, [0.0, 0.0]);
        assert_eq!(r.implied_mean, [0.0, 0.0]);
    }

    #[test]
    fn entropy_flux_is_odd() {
        let spec = RlcSpec::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.3);
        let m = RlcModel::new(spec).unwrap();
        let p = m.sample_path(Vector2::new(0.1, -0.2), 0.05, 200, 4).unwrap();
        let flipped = RlcPath { dt: p.dt, states: p.states.iter().map(|s| [s[0], -s[1]]).collect() };
        let neg = RlcSpec { e: -0.3, ..spec };
        assert_eq!(rlc_entropy_flux(&flipped, &neg), rlc_entropy_flux(&p, &spec));
        assert_eq!(rlc_entropy_flux(&p, &RlcSpec { e: 0.0, ..spec }), 0.0);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(RlcModel::new(RlcSpec::new(0.0, 1.0, 1.0, 1.0, 1.0, 0.1)).is_err());
        assert!(RlcModel::new(RlcSpec::new(1.0, 1.0, 1.0, 1.0, -1.0, 0.1)).is_err());
    }
}
