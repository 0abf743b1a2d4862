//! First-order nonequilibrium corrections.
//!
//! For a model driven at strength `ε`, the stationary law is, to first order,
//!
//! ```text
//! ρ_ε(x) ∝ ρ₀(x) exp(ε h1(x)),    h1 = β L₀⁻¹ w1 = −β ∫₀^∞ ⟨w1(x_t)⟩⁰ₓ dt,
//! ```
//!
//! with `w1(x) = Σ_y λ₀(x,y) F1(x,y)` the linear part of the expected
//! entropy flux. `L₀⁻¹` is the inverse of the reference generator on the
//! functions with `ρ₀`-mean zero, computed by [`PoissonSolver`].

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::markov::{components, Distribution, JumpModel, RateMatrix};

/// Relative tolerance for the centring condition of a Poisson right-hand side.
const CENTRING_TOL: f64 = 1e-10;
/// Horizon multiplier for semigroup quadratures, `T_max = 30 / gap`.
pub const QUADRATURE_HORIZON: f64 = 30.0;

/// `w1(x) = Σ_{y≠x} λ₀(x,y) F1(x,y)` for the model's own driving.
pub fn linear_work(model: &JumpModel) -> Result<Vec<f64>> {
    linear_work_for(model, model.driving())
}

/// `w1` for an arbitrary antisymmetric field `f1` on the model's edges.
pub fn linear_work_for(model: &JumpModel, f1: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = model.n_states();
    if f1.nrows() != n || f1.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f1.nrows() });
    }
    let r0 = model.reference_rates()?;
    Ok((0..n).map(|x| (0..n).map(|y| r0.rate(x, y) * f1[(x, y)]).sum()).collect())
}

/// Solves `L₀ g = rhs` with `Σ ρ₀ g = 0` on every communicating class.
///
/// The generator must be reversible with respect to `ρ₀`. The system is
/// bordered with one constraint per class, `[[L₀, B], [Bᵀ diag ρ₀, 0]]`,
/// which is nonsingular for reducible chains as well.
#[derive(Debug, Clone)]
pub struct PoissonSolver {
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    bordered: DMatrix<f64>,
    rho0: Vec<f64>,
    class: Vec<usize>,
    n_classes: usize,
}

impl PoissonSolver {
    pub fn new(rates: &RateMatrix, rho0: &Distribution) -> Result<Self> {
        let n = rates.n_states();
        if rho0.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: rho0.len() });
        }
        let comps = components(rates.lambda());
        let k = comps.count;
        let mut a = DMatrix::zeros(n + k, n + k);
        a.view_mut((0, 0), (n, n)).copy_from(&rates.backward_generator());
        for x in 0..n {
            let c = comps.label[x];
            a[(x, n + c)] = 1.0;
            a[(n + c, x)] = rho0[x];
        }
        let lu = a.clone().lu();
        if !lu.is_invertible() {
            return Err(Error::Range("bordered Poisson system is singular".into()));
        }
        Ok(Self { lu, bordered: a, rho0: rho0.as_slice().to_vec(), class: comps.label, n_classes: k })
    }

    /// Solver for the reference generator of `model`.
    pub fn for_model(model: &JumpModel) -> Result<Self> {
        Self::new(&model.reference_rates()?, &model.equilibrium_density()?)
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    /// Class label of each state.
    pub fn classes(&self) -> &[usize] {
        &self.class
    }

    /// `Σ_{x ∈ class} ρ₀(x) f(x)` for every class.
    pub fn class_means(&self, f: &[f64]) -> Vec<f64> {
        let mut m = vec![0.0; self.n_classes];
        for (x, v) in f.iter().enumerate() {
            m[self.class[x]] += self.rho0[x] * v;
        }
        m
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.rho0.len();
        if rhs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: rhs.len() });
        }
        let scale = rhs.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for mean in self.class_means(rhs) {
            if mean.abs() > CENTRING_TOL * scale {
                return Err(Error::Solvability { mean });
            }
        }
        let mut b = DVector::zeros(n + self.n_classes);
        b.rows_mut(0, n).copy_from_slice(rhs);
        let mut sol = self.lu.solve(&b).ok_or_else(|| Error::Range("Poisson solve failed".into()))?;
        let r = &b - &self.bordered * &sol;
        if let Some(d) = self.lu.solve(&r) {
            sol += d;
        }
        Ok(sol.rows(0, n).iter().copied().collect())
    }
}

/// `g` with `L₀ g = rhs` and `Σ ρ₀ g = 0`; fails unless `Σ ρ₀ rhs = 0`.
pub fn solve_poisson(model: &JumpModel, rhs: &[f64]) -> Result<Vec<f64>> {
    PoissonSolver::for_model(model)?.solve(rhs)
}

/// `h1`, `w1` and the McLennan density of a model.
#[derive(Debug, Clone, PartialEq)]
pub struct McLennanResult {
    pub h1: Vec<f64>,
    /// Bare `Σ_y λ₀ F1`, without the factor `β`.
    pub w1: Vec<f64>,
    pub sigma_eps: f64,
    pub rho_mclennan: Distribution,
}

pub fn mclennan_correction(model: &JumpModel) -> Result<McLennanResult> {
    let w1 = linear_work(model)?;
    let rho0 = model.equilibrium_density()?;
    let solver = PoissonSolver::new(&model.reference_rates()?, &rho0)?;
    let h1: Vec<f64> = solver.solve(&w1)?.into_iter().map(|g| model.beta() * g).collect();
    let rho_mclennan = mclennan_density(&rho0, &h1, model.epsilon())?;
    let rates = model.rates()?;
    let sigma_eps = stationary_entropy_flux(&rates, &rates.stationary()?, model)?;
    Ok(McLennanResult { h1, w1, sigma_eps, rho_mclennan })
}

/// `ρ₀ e^{ε h} / Z`; adding a constant to `h` leaves the result unchanged.
pub fn mclennan_density(rho0: &Distribution, h: &[f64], epsilon: f64) -> Result<Distribution> {
    let shift = h.iter().map(|v| epsilon * v).fold(f64::NEG_INFINITY, f64::max);
    Distribution::from_weights(rho0.as_slice().iter().zip(h).map(|(p, v)| p * (epsilon * v - shift).exp()).collect())
}

/// Expected entropy production rate from each state, `β Σ_y λ(x,y) ε F1(x,y)`.
fn entropy_rate(rates: &RateMatrix, model: &JumpModel) -> Vec<f64> {
    let n = rates.n_states();
    let f = model.scaled_driving();
    (0..n).map(|x| model.beta() * (0..n).map(|y| rates.rate(x, y) * f[(x, y)]).sum::<f64>()).collect()
}

/// `σ_ε = β Σ_x ρ(x) Σ_y λ(x,y) ε F1(x,y)`.
pub fn stationary_entropy_flux(rates: &RateMatrix, rho: &Distribution, model: &JumpModel) -> Result<f64> {
    check_len(model.n_states(), rates.n_states())?;
    check_len(model.n_states(), rho.len())?;
    Ok(rho.expect(&entropy_rate(rates, model)))
}

/// `(β/2) Σ_{x,y} [ρ(x)λ(x,y) − ρ(y)λ(y,x)] ε F1(x,y)`, equal to
/// [`stationary_entropy_flux`] by antisymmetry of `F1`.
pub fn stationary_entropy_flux_antisymmetric(rates: &RateMatrix, rho: &Distribution, model: &JumpModel) -> Result<f64> {
    check_len(model.n_states(), rates.n_states())?;
    let j = rates.probability_current(rho);
    Ok(0.5 * model.beta() * j.component_mul(&model.scaled_driving()).sum())
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

/// `⟨S_IRR^T⟩ₓ − σ_ε T`, from the occupation integral of the master
/// equation started at `δₓ`.
pub fn transient_excess(model: &JumpModel, x: usize, horizon: f64) -> Result<f64> {
    let rates = model.rates()?;
    let n = rates.n_states();
    if x >= n {
        return Err(Error::InvalidArgument(format!("state {x} out of range")));
    }
    let s = entropy_rate(&rates, model);
    let sigma = rates.stationary()?.expect(&s);
    let (_, occupation) = rates.evolve_with_integral(&Distribution::point_mass(n, x), horizon)?;
    // Σ occupation = T, so subtracting σ inside avoids cancellation
    Ok(occupation.iter().zip(&s).map(|(o, v)| o * (v - sigma)).sum())
}

/// One cell of [`LimitTable`]: `(1/ε) log(ρ_T^ε(x) / ρ₀(x))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEntry {
    pub epsilon: f64,
    /// `f64::INFINITY` marks the exact stationary law.
    pub horizon: f64,
    pub state: usize,
    pub value: f64,
}

/// Convergence in `T` of one `(ε, x)` row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowDiagnostic {
    pub epsilon: f64,
    pub state: usize,
    /// Whether `|value(T) − value(∞)|` is nonincreasing along the `T` grid.
    pub monotone: bool,
    /// `|value(T_max) − value(∞)|`.
    pub residual: f64,
}

/// Both iterated limits of `(1/ε) log(ρ_T^ε/ρ₀)` on a finite grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitTable {
    pub entries: Vec<LimitEntry>,
    pub diagnostics: Vec<RowDiagnostic>,
    /// `T → ∞` then `ε → 0`: stationary values at the smallest `ε`.
    pub t_then_eps: Vec<f64>,
    /// `ε → 0` then `T → ∞`: values at the largest `T` and smallest `ε`.
    pub eps_then_t: Vec<f64>,
    /// Linear extrapolation to `ε = 0` from the two smallest `ε`, in the
    /// same two orders (equal to the plain values on a one-point grid).
    pub t_then_eps_extrapolated: Vec<f64>,
    pub eps_then_t_extrapolated: Vec<f64>,
}

/// Evolves `ρ₀` under the rates at each `ε` for each `T` and tabulates the
/// scaled log-ratio, together with the stationary value (`T = ∞`).
pub fn limit_exchange_table(model: &JumpModel, eps_grid: &[f64], t_grid: &[f64]) -> Result<LimitTable> {
    if eps_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::InvalidArgument("grids must be nonempty".into()));
    }
    if eps_grid.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::InvalidArgument("epsilon values must be positive".into()));
    }
    let rho0 = model.equilibrium_density()?;
    let n = model.n_states();
    let mut eps: Vec<f64> = eps_grid.to_vec();
    eps.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut ts: Vec<f64> = t_grid.to_vec();
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let scaled = |e: f64, rho: &Distribution| -> Vec<f64> { (0..n).map(|x| (rho[x] / rho0[x]).ln() / e).collect() };

    let mut entries = Vec::new();
    let mut diagnostics = Vec::new();
    let mut at_largest_t = Vec::new();
    let mut at_infinity = Vec::new();
    for &e in &eps {
        let rates = model.with_epsilon(e)?.rates()?;
        let stationary = scaled(e, &rates.stationary()?);
        let mut rows = Vec::with_capacity(ts.len());
        for &t in &ts {
            let v = scaled(e, &rates.evolve(&rho0, t)?);
            for x in 0..n {
                entries.push(LimitEntry { epsilon: e, horizon: t, state: x, value: v[x] });
            }
            rows.push(v);
        }
        for x in 0..n {
            entries.push(LimitEntry { epsilon: e, horizon: f64::INFINITY, state: x, value: stationary[x] });
            let dist: Vec<f64> = rows.iter().map(|r| (r[x] - stationary[x]).abs()).collect();
            let monotone = dist.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-14);
            diagnostics.push(RowDiagnostic { epsilon: e, state: x, monotone, residual: *dist.last().unwrap() });
        }
        at_largest_t.push(rows.pop().unwrap());
        at_infinity.push(stationary);
    }
    let extrapolate = |rows: &[Vec<f64>]| -> Vec<f64> {
        let k = rows.len();
        if k < 2 {
            return rows[k - 1].clone();
        }
        let (e1, e2) = (eps[k - 2], eps[k - 1]);
        (0..n).map(|x| (e1 * rows[k - 1][x] - e2 * rows[k - 2][x]) / (e1 - e2)).collect()
    };
    Ok(LimitTable {
        entries,
        diagnostics,
        t_then_eps: at_infinity.last().unwrap().clone(),
        eps_then_t: at_largest_t.last().unwrap().clone(),
        t_then_eps_extrapolated: extrapolate(&at_infinity),
        eps_then_t_extrapolated: extrapolate(&at_largest_t),
    })
}

/// Result of the fundamental-theorem-of-calculus route.
#[derive(Debug, Clone, PartialEq)]
pub struct FtcResult {
    /// `∫₀^∞ e^{tL₀}(−εβ w1) dt = ε β L₀⁻¹ w1`, the relative first-order
    /// density correction, by semigroup quadrature.
    pub first_order: Vec<f64>,
    /// `h(x) = Σ_y λ(x,y) [e^{−βεF1(x,y)} − 1]` at the model's `ε`.
    pub h: Vec<f64>,
    /// `∫₀^{T_max} e^{tL₀} h dt`.
    pub full: Vec<f64>,
    /// `Σ ρ₀ h`; the full integral only converges when this vanishes.
    pub full_mean: f64,
    pub horizon: f64,
}

/// `ρ_ε = ρ₀ [1 + ∫₀^∞ e^{tL₀} h dt] + O(ε²)` evaluated by uniformization up
/// to `T_max = 30 / gap`, independently of any linear solve.
pub fn ftc_correction(model: &JumpModel) -> Result<FtcResult> {
    let n = model.n_states();
    let r0 = model.reference_rates()?;
    let rates = model.rates()?;
    let rho0 = model.equilibrium_density()?;
    let horizon = QUADRATURE_HORIZON / r0.spectral_gap()?;
    let be = model.beta() * model.epsilon();
    let w1 = linear_work(model)?;
    let source: Vec<f64> = w1.iter().map(|w| -be * w).collect();
    let (_, first_order) = r0.propagate_observable(&source, horizon)?;
    let f1 = model.driving();
    let h: Vec<f64> = (0..n)
        .map(|x| (0..n).map(|y| rates.rate(x, y) * ((-be * f1[(x, y)]).exp() - 1.0)).sum())
        .collect();
    let full_mean = rho0.expect(&h);
    let scale = h.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if full_mean.abs() > CENTRING_TOL * scale {
        log::warn!("Σ ρ₀ h = {full_mean:e} ≠ 0: the full time integral diverges and the expansion is only formal");
    }
    let (_, full) = r0.propagate_observable(&h, horizon)?;
    Ok(FtcResult { first_order, h, full, full_mean, horizon })
}

/// Checks the coupling rates `k` against `base`: nonnegative, symmetric
/// support, and only on pairs the base forbids both ways.
fn check_coupling(base: &RateMatrix, k: &DMatrix<f64>) -> Result<()> {
    let n = base.n_states();
    if k.nrows() != n || k.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: k.nrows() });
    }
    for x in 0..n {
        for y in 0..n {
            let v = k[(x, y)];
            if x == y || v == 0.0 {
                continue;
            }
            if !(v > 0.0 && v.is_finite()) || !(k[(y, x)] > 0.0) {
                return Err(Error::InvalidArgument(format!("coupling rates at ({x},{y}) must be positive both ways")));
            }
            if base.rate(x, y) > 0.0 || base.rate(y, x) > 0.0 {
                return Err(Error::CouplingOverlap { from: x, to: y });
            }
        }
    }
    Ok(())
}

/// Chain with rates `base + ε k`.
pub fn coupled_rates(base: &RateMatrix, k: &DMatrix<f64>, epsilon: f64) -> Result<RateMatrix> {
    check_coupling(base, k)?;
    RateMatrix::new(base.lambda() + k * epsilon)
}

/// `φ(x,y) = log[ρ₀(x) k(x,y) / (ρ₀(y) k(y,x))]` on the coupled pairs.
pub fn coupling_entropy(rho0: &Distribution, k: &DMatrix<f64>) -> DMatrix<f64> {
    let n = k.nrows();
    DMatrix::from_fn(n, n, |x, y| {
        if k[(x, y)] > 0.0 { (rho0[x] * k[(x, y)] / (rho0[y] * k[(y, x)])).ln() } else { 0.0 }
    })
}

fn coupling_setup(rho0: &Distribution, base: &RateMatrix, k: &DMatrix<f64>, epsilon: f64) -> Result<PoissonSolver> {
    check_coupling(base, k)?;
    let (balanced, worst) = base.check_detailed_balance(rho0, 1e-12 * base.escape().iter().fold(1.0, |m: f64, v| m.max(*v)));
    if !balanced {
        return Err(Error::InvalidModel(format!("base rates violate detailed balance by {worst:e}")));
    }
    coupled_rates(base, k, epsilon.max(1.0))?.stationary()?;
    PoissonSolver::new(base, rho0)
}

/// First-order density correction `ρ₀ ∫₀^∞ e^{tL₀} h dt` for rates
/// `λ₀ + ε k` where `k` lives on pairs the base chain forbids, with
/// `h(x) = ε Σ_y k(x,y) [e^{−φ(x,y)} − 1]`.
///
/// The base may be reducible; `h` must then be `ρ₀`-centred on each class,
/// otherwise the coupling also moves weight between classes at zeroth order.
pub fn coupling_perturbation_correction(
    rho0: &Distribution,
    base: &RateMatrix,
    k: &DMatrix<f64>,
    epsilon: f64,
) -> Result<Vec<f64>> {
    let solver = coupling_setup(rho0, base, k, epsilon)?;
    let phi = coupling_entropy(rho0, k);
    let n = base.n_states();
    let h: Vec<f64> = (0..n)
        .map(|x| epsilon * (0..n).filter(|&y| k[(x, y)] > 0.0).map(|y| k[(x, y)] * ((-phi[(x, y)]).exp() - 1.0)).sum::<f64>())
        .collect();
    let g = solver.solve(&h)?;
    Ok((0..n).map(|x| -rho0[x] * g[x]).collect())
}

/// The correction an entropy-flux perturbation with per-jump entropy `φ`
/// would produce: source `−ε Σ_y k(x,y) φ(x,y)` in place of `h`, centred
/// under `ρ₀` on each base class.
pub fn entropic_form_correction(
    rho0: &Distribution,
    base: &RateMatrix,
    k: &DMatrix<f64>,
    epsilon: f64,
) -> Result<Vec<f64>> {
    let solver = coupling_setup(rho0, base, k, epsilon)?;
    let phi = coupling_entropy(rho0, k);
    let n = base.n_states();
    let mut source: Vec<f64> = (0..n)
        .map(|x| -epsilon * (0..n).filter(|&y| k[(x, y)] > 0.0).map(|y| k[(x, y)] * phi[(x, y)]).sum::<f64>())
        .collect();
    let mass = solver.class_means(&vec![1.0; n]);
    let means = solver.class_means(&source);
    for (x, v) in source.iter_mut().enumerate() {
        let c = solver.classes()[x];
        *v -= means[c] / mass[c];
    }
    let g = solver.solve(&source)?;
    Ok((0..n).map(|x| -rho0[x] * g[x]).collect())
}

/// Least-squares fit `correction ≈ c · entropic`; returns `c` and the
/// residual norm relative to `‖correction‖`.
pub fn projection_residual(correction: &[f64], entropic: &[f64]) -> (f64, f64) {
    let dot: f64 = correction.iter().zip(entropic).map(|(a, b)| a * b).sum();
    let nn: f64 = entropic.iter().map(|b| b * b).sum();
    let c = if nn > 0.0 { dot / nn } else { 0.0 };
    let res: f64 = correction.iter().zip(entropic).map(|(a, b)| (a - c * b).powi(2)).sum::<f64>().sqrt();
    let norm: f64 = correction.iter().map(|a| a * a).sum::<f64>().sqrt();
    (c, if norm > 0.0 { res / norm } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{driven_ring, gradient_driving, random_model};
    use approx::assert_relative_eq;

    #[test]
    fn linear_work_of_uniform_ring_vanishes() {
        for w in linear_work(&driven_ring(3, 0.2).unwrap()).unwrap() {
            assert!(w.abs() < 1e-14);
        }
    }

    #[test]
    fn poisson_residual_and_centring() {
        let m = random_model(5, 4, 0.0).unwrap();
        let rho0 = m.equilibrium_density().unwrap();
        let raw = [0.3, -1.0, 2.0, 0.1, 0.7];
        let mean = rho0.expect(&raw);
        let rhs: Vec<f64> = raw.iter().map(|v| v - mean).collect();
        let g = solve_poisson(&m, &rhs).unwrap();
        let l0 = m.reference_rates().unwrap().backward_generator();
        let lg = &l0 * DVector::from_column_slice(&g);
        for x in 0..5 {
            assert!((lg[x] - rhs[x]).abs() < 1e-11);
        }
        assert!(rho0.expect(&g).abs() < 1e-12);
        assert!(matches!(solve_poisson(&m, &raw), Err(Error::Solvability { .. })));
        assert_eq!(solve_poisson(&m, &[0.0; 5]).unwrap(), vec![0.0; 5]);
    }

    #[test]
    fn no_driving_no_correction() {
        let m = random_model(4, 1, 0.3).unwrap();
        let m = m.with_driving(DMatrix::zeros(4, 4)).unwrap();
        let r = mclennan_correction(&m).unwrap();
        assert!(r.h1.iter().all(|h| h.abs() < 1e-15));
        assert!(r.rho_mclennan.max_abs_diff(&m.equilibrium_density().unwrap()) < 1e-15);
        assert_eq!(r.sigma_eps, 0.0);
    }

    #[test]
    fn both_entropy_flux_forms_agree() {
        let m = random_model(5, 9, 0.4).unwrap();
        let r = m.rates().unwrap();
        let rho = r.stationary().unwrap();
        let a = stationary_entropy_flux(&r, &rho, &m).unwrap();
        let b = stationary_entropy_flux_antisymmetric(&r, &rho, &m).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-12);
        assert!(a > 0.0);
    }

    #[test]
    fn gauge_driving_gives_boltzmann_stationary_law() {
        // F1 = V(x) − V(y) tilts the potential to U + εV
        let m = random_model(4, 2, 0.0).unwrap();
        let v = [0.5, -0.3, 1.0, 0.0];
        let eps = 0.7;
        let m = m.with_driving(gradient_driving(&m, &v).unwrap()).unwrap().with_epsilon(eps).unwrap();
        let tilted: Vec<f64> = m.potential().iter().zip(&v).map(|(u, w)| u + eps * w).collect();
        let rho = Distribution::new(crate::markov::boltzmann(&tilted, 1.0).unwrap()).unwrap();
        assert!(m.rates().unwrap().check_detailed_balance(&rho, 1e-12).0);
    }

    #[test]
    fn transient_excess_at_zero_time() {
        assert_eq!(transient_excess(&random_model(3, 1, 0.1).unwrap(), 0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn coupling_overlap_is_rejected() {
        let m = random_model(3, 1, 0.0).unwrap();
        let base = m.reference_rates().unwrap();
        let mut k = DMatrix::zeros(3, 3);
        k[(0, 1)] = 1.0;
        k[(1, 0)] = 1.0;
        let rho0 = m.equilibrium_density().unwrap();
        assert_eq!(
            coupling_perturbation_correction(&rho0, &base, &k, 0.1),
            Err(Error::CouplingOverlap { from: 0, to: 1 })
        );
    }
}
