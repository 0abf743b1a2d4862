//! Finite-state continuous-time Markov jump processes.
//!
//! A [`JumpModel`] carries a potential `U`, an inverse temperature `β`, an
//! antisymmetric driving `F1`, a symmetric activity kernel `γ` and a driving
//! strength `ε`. Its jump rates are
//!
//! ```text
//! λ(x,y) = γ(x,y) · exp(β ε F1(x,y) / 2) / ρ₀(x),     ρ₀(x) ∝ exp(−β U(x))
//! ```
//!
//! so that `λ(x,y) / λ(y,x) = exp(β [ε F1(x,y) + U(x) − U(y)])` holds exactly
//! (local detailed balance). At `ε = 0` the rates are in detailed balance with
//! `ρ₀`.
//!
//! # Matrix conventions
//!
//! States are indexed `0..n`. The forward generator `L*` acts on column
//! vectors of probabilities, `(L*μ)(x) = Σ_y [λ(y,x) μ(y) − λ(x,y) μ(x)]`, so
//! entry `(x, y)` of [`RateMatrix::forward_generator`] is `λ(y,x)` off the
//! diagonal and every column sums to zero. The backward generator
//! `(L f)(x) = Σ_y λ(x,y) [f(y) − f(x)]` is its transpose and every row of it
//! sums to zero.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Absolute tolerance for the structural symmetry checks on `F1` and `γ`.
const STRUCTURE_TOL: f64 = 1e-12;

/// A probability vector over `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    /// Wraps `p`, checking nonnegativity and normalization to `1e-9`.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidArgument("distribution over zero states".into()));
        }
        if p.iter().any(|v| !v.is_finite() || *v < -1e-12) {
            return Err(Error::InvalidArgument("distribution has negative or non-finite entries".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("distribution sums to {total}, not 1")));
        }
        Ok(Self(p))
    }

    /// Normalizes nonnegative weights.
    pub fn from_weights(w: Vec<f64>) -> Result<Self> {
        let total: f64 = w.iter().sum();
        if !(total > 0.0) || !total.is_finite() || w.iter().any(|v| *v < 0.0) {
            return Err(Error::InvalidArgument("weights must be nonnegative with a positive finite sum".into()));
        }
        Ok(Self(w.into_iter().map(|v| v / total).collect()))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![1.0 / n as f64; n])
    }

    pub fn point_mass(n: usize, x: usize) -> Self {
        let mut p = vec![0.0; n];
        p[x] = 1.0;
        Self(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn to_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.0)
    }

    /// Expectation of `f` under this law.
    pub fn expect(&self, f: &[f64]) -> f64 {
        self.0.iter().zip(f).map(|(p, v)| p * v).sum()
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for Distribution {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Normalized Boltzmann weights `exp(−β U) / Z`, computed with the exponent
/// shifted by its maximum.
pub fn boltzmann(potential: &[f64], beta: f64) -> Result<Vec<f64>> {
    let exponents: Vec<f64> = potential.iter().map(|u| -beta * u).collect();
    if exponents.iter().any(|e| !e.is_finite()) {
        return Err(Error::Range("non-finite Boltzmann exponent".into()));
    }
    let shift = exponents.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = exponents.iter().map(|e| (e - shift).exp()).collect();
    let z: f64 = w.iter().sum();
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::Range("Boltzmann normalization out of range".into()));
    }
    Ok(w.into_iter().map(|v| v / z).collect())
}

/// A driven jump process obeying local detailed balance.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpModel {
    potential: Vec<f64>,
    beta: f64,
    driving: DMatrix<f64>,
    gamma: DMatrix<f64>,
    epsilon: f64,
    labels: Vec<String>,
}

impl JumpModel {
    /// Builds and validates a model.
    ///
    /// `driving` must be antisymmetric with zero diagonal, `gamma` symmetric,
    /// nonnegative with zero diagonal, and the graph `{γ > 0}` connected.
    pub fn new(
        potential: Vec<f64>,
        beta: f64,
        driving: DMatrix<f64>,
        gamma: DMatrix<f64>,
        epsilon: f64,
    ) -> Result<Self> {
        let n = potential.len();
        if n == 0 {
            return Err(Error::InvalidModel("empty state space".into()));
        }
        for (name, m) in [("driving", &driving), ("gamma", &gamma)] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::InvalidModel(format!(
                    "{name} is {}x{}, expected {n}x{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if m.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidModel(format!("{name} has non-finite entries")));
            }
        }
        if potential.iter().any(|u| !u.is_finite()) {
            return Err(Error::InvalidModel("potential has non-finite entries".into()));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidModel(format!("beta must be finite and nonnegative, got {beta}")));
        }
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidModel(format!("epsilon must be finite and nonnegative, got {epsilon}")));
        }
        for x in 0..n {
            if driving[(x, x)] != 0.0 || gamma[(x, x)] != 0.0 {
                return Err(Error::InvalidModel(format!("nonzero diagonal at state {x}")));
            }
            for y in (x + 1)..n {
                if (driving[(x, y)] + driving[(y, x)]).abs() > STRUCTURE_TOL {
                    return Err(Error::InvalidModel(format!("driving not antisymmetric at ({x},{y})")));
                }
                if (gamma[(x, y)] - gamma[(y, x)]).abs() > STRUCTURE_TOL {
                    return Err(Error::InvalidModel(format!("gamma not symmetric at ({x},{y})")));
                }
                if gamma[(x, y)] < 0.0 {
                    return Err(Error::InvalidModel(format!("gamma negative at ({x},{y})")));
                }
            }
        }
        let components = components(&gamma);
        if components.count > 1 {
            return Err(Error::InvalidModel(format!(
                "gamma graph has {} connected components; the reference process must be irreducible",
                components.count
            )));
        }
        let labels = (0..n).map(|x| x.to_string()).collect();
        Ok(Self { potential, beta, driving, gamma, epsilon, labels })
    }

    /// Same model with a different driving strength.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidModel(format!("epsilon must be finite and nonnegative, got {epsilon}")));
        }
        Ok(Self { epsilon, ..self.clone() })
    }

    /// Same model with a different driving field `F1`.
    pub fn with_driving(&self, driving: DMatrix<f64>) -> Result<Self> {
        let mut m = Self::new(self.potential.clone(), self.beta, driving, self.gamma.clone(), self.epsilon)?;
        m.labels = self.labels.clone();
        Ok(m)
    }

    /// The `ε = 0` reference model.
    pub fn reference(&self) -> Self {
        Self { epsilon: 0.0, ..self.clone() }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n_states() {
            return Err(Error::DimensionMismatch { expected: self.n_states(), got: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn n_states(&self) -> usize {
        self.potential.len()
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn driving(&self) -> &DMatrix<f64> {
        &self.driving
    }

    pub fn gamma(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `ρ₀(x) = exp(−β U(x)) / Σ_y exp(−β U(y))`.
    pub fn equilibrium_density(&self) -> Result<Distribution> {
        boltzmann(&self.potential, self.beta).map(Distribution)
    }

    /// Rates at the model's own `ε`.
    pub fn rates(&self) -> Result<RateMatrix> {
        self.rates_at(self.epsilon)
    }

    /// Rates of the `ε = 0` reference process.
    pub fn reference_rates(&self) -> Result<RateMatrix> {
        self.rates_at(0.0)
    }

    fn rates_at(&self, epsilon: f64) -> Result<RateMatrix> {
        let rho0 = boltzmann(&self.potential, self.beta)?;
        let n = self.n_states();
        let mut lambda = DMatrix::zeros(n, n);
        for x in 0..n {
            for y in 0..n {
                let g = self.gamma[(x, y)];
                if x != y && g > 0.0 {
                    lambda[(x, y)] = g * (0.5 * self.beta * epsilon * self.driving[(x, y)]).exp() / rho0[x];
                }
            }
        }
        RateMatrix::new(lambda)
    }

    /// `F = ε F1` as a matrix.
    pub fn scaled_driving(&self) -> DMatrix<f64> {
        &self.driving * self.epsilon
    }
}

/// Off-diagonal jump rates and escape rates.
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    lambda: DMatrix<f64>,
    escape: Vec<f64>,
}

impl RateMatrix {
    /// Wraps a square matrix of nonnegative rates; the diagonal is ignored.
    pub fn new(mut lambda: DMatrix<f64>) -> Result<Self> {
        let n = lambda.nrows();
        if lambda.ncols() != n || n == 0 {
            return Err(Error::InvalidArgument("rate matrix must be square and nonempty".into()));
        }
        for x in 0..n {
            lambda[(x, x)] = 0.0;
        }
        if lambda.iter().any(|v| !v.is_finite()) {
            return Err(Error::Range("non-finite jump rate".into()));
        }
        if lambda.iter().any(|v| *v < 0.0) {
            return Err(Error::InvalidArgument("negative jump rate".into()));
        }
        let escape = (0..n).map(|x| lambda.row(x).sum()).collect();
        Ok(Self { lambda, escape })
    }

    pub fn n_states(&self) -> usize {
        self.escape.len()
    }

    /// `λ(x, y)`.
    pub fn rate(&self, x: usize, y: usize) -> f64 {
        self.lambda[(x, y)]
    }

    pub fn lambda(&self) -> &DMatrix<f64> {
        &self.lambda
    }

    /// `ξ(x) = Σ_{y≠x} λ(x,y)`.
    pub fn escape(&self) -> &[f64] {
        &self.escape
    }

    /// `L*` with `(L*)[(x, y)] = λ(y, x)` for `x ≠ y`; columns sum to zero.
    pub fn forward_generator(&self) -> DMatrix<f64> {
        let mut g = self.lambda.transpose();
        for x in 0..self.n_states() {
            g[(x, x)] = -self.escape[x];
        }
        g
    }

    /// `L = (L*)ᵀ`, acting on observables; rows sum to zero.
    pub fn backward_generator(&self) -> DMatrix<f64> {
        let mut g = self.lambda.clone();
        for x in 0..self.n_states() {
            g[(x, x)] = -self.escape[x];
        }
        g
    }

    /// Solves the master equation `dμ/dt = L*μ` up to time `t`.
    pub fn evolve(&self, mu0: &Distribution, t: f64) -> Result<Distribution> {
        let (mu, _) = self.evolve_with_integral(mu0, t)?;
        Ok(mu)
    }

    /// Returns `μ_t` together with the occupation integral `∫₀ᵗ μ_s ds`.
    pub fn evolve_with_integral(&self, mu0: &Distribution, t: f64) -> Result<(Distribution, Vec<f64>)> {
        if mu0.len() != self.n_states() {
            return Err(Error::DimensionMismatch { expected: self.n_states(), got: mu0.len() });
        }
        let flow = Uniformized::new(&self.forward_generator(), &self.escape);
        let (mu, integral) = flow.run(&mu0.to_dvector(), t)?;
        Ok((Distribution(mu.iter().map(|v| v.max(0.0)).collect()), integral.iter().copied().collect()))
    }

    /// Backward semigroup: `(e^{tL} f, ∫₀ᵗ e^{sL} f ds)`.
    pub fn propagate_observable(&self, f: &[f64], t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        if f.len() != self.n_states() {
            return Err(Error::DimensionMismatch { expected: self.n_states(), got: f.len() });
        }
        let flow = Uniformized::new(&self.backward_generator(), &self.escape);
        let (v, integral) = flow.run(&DVector::from_column_slice(f), t)?;
        Ok((v.iter().copied().collect(), integral.iter().copied().collect()))
    }

    /// Unique stationary law, from the augmented system `[L*; 1ᵀ] ρ = [0; 1]`.
    pub fn stationary(&self) -> Result<Distribution> {
        let n = self.n_states();
        let classes = strongly_connected_count(&self.lambda);
        if classes > 1 {
            return Err(Error::Reducible { components: classes });
        }
        let g = self.forward_generator();
        let mut a = g.clone();
        for y in 0..n {
            a[(n - 1, y)] = 1.0;
        }
        let mut b = DVector::zeros(n);
        b[n - 1] = 1.0;
        let lu = a.clone().lu();
        let mut rho = lu.solve(&b).ok_or(Error::Reducible { components: 0 })?;
        // one step of iterative refinement
        let r = &b - &a * &rho;
        if let Some(d) = lu.solve(&r) {
            rho += d;
        }
        if rho.iter().any(|v| !v.is_finite()) {
            return Err(Error::Range("stationary solve produced non-finite values".into()));
        }
        let total: f64 = rho.iter().sum();
        Ok(Distribution(rho.iter().map(|v| (v / total).max(0.0)).collect()))
    }

    /// Returns whether `max |ρ(x)λ(x,y) − ρ(y)λ(y,x)| ≤ tol`, and the maximum.
    pub fn check_detailed_balance(&self, rho: &Distribution, tol: f64) -> (bool, f64) {
        let n = self.n_states();
        let mut worst: f64 = 0.0;
        for x in 0..n {
            for y in (x + 1)..n {
                let v = (rho[x] * self.lambda[(x, y)] - rho[y] * self.lambda[(y, x)]).abs();
                worst = worst.max(v);
            }
        }
        (worst <= tol, worst)
    }

    /// Smallest nonzero relaxation rate, `min Re(−λ)` over the non-stationary
    /// eigenvalues of `L*`.
    pub fn spectral_gap(&self) -> Result<f64> {
        let n = self.n_states();
        if n < 2 {
            return Err(Error::NearDegenerate { gap: 0.0 });
        }
        let eig = self.forward_generator().complex_eigenvalues();
        let mut decay: Vec<f64> = eig.iter().map(|z| -z.re).collect();
        decay.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());
        // the first entry is the stationary eigenvalue
        let gap = decay[1..].iter().copied().fold(f64::INFINITY, f64::min);
        if !(gap >= 1e-12) {
            return Err(Error::NearDegenerate { gap });
        }
        Ok(gap)
    }

    /// Stationary probability current `J(x,y) = ρ(x)λ(x,y) − ρ(y)λ(y,x)`.
    pub fn probability_current(&self, rho: &Distribution) -> DMatrix<f64> {
        let n = self.n_states();
        DMatrix::from_fn(n, n, |x, y| rho[x] * self.lambda[(x, y)] - rho[y] * self.lambda[(y, x)])
    }
}

/// Uniformization of a generator: `e^{tG} = Σ_k Pois(k; qt) Pᵏ` with
/// `P = I + G/q`. Long horizons are split into chunks with `qΔ ≤ 32`.
struct Uniformized {
    p: DMatrix<f64>,
    q: f64,
}

const CHUNK_RATE: f64 = 32.0;
const POISSON_TAIL: f64 = 1e-18;
const MAX_TERMS: usize = 100_000;

impl Uniformized {
    fn new(generator: &DMatrix<f64>, escape: &[f64]) -> Self {
        let n = generator.nrows();
        let q = escape.iter().copied().fold(0.0, f64::max);
        let p = if q > 0.0 { DMatrix::identity(n, n) + generator / q } else { DMatrix::identity(n, n) };
        Self { p, q }
    }

    fn run(&self, v0: &DVector<f64>, t: f64) -> Result<(DVector<f64>, DVector<f64>)> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidArgument(format!("time must be finite and nonnegative, got {t}")));
        }
        if t == 0.0 {
            return Ok((v0.clone(), DVector::zeros(v0.len())));
        }
        if self.q == 0.0 {
            return Ok((v0.clone(), v0 * t));
        }
        let chunks = (self.q * t / CHUNK_RATE).ceil().max(1.0) as usize;
        let dt = t / chunks as f64;
        let weights = poisson_weights(self.q * dt).ok_or(Error::Integration { achieved: 0.0 })?;
        // tails[k] = P(N ≥ k+1)
        let mut tails = vec![0.0; weights.len()];
        let mut acc = 0.0;
        for k in (0..weights.len()).rev() {
            tails[k] = acc;
            acc += weights[k];
        }
        let mut v = v0.clone();
        let mut integral = DVector::zeros(v0.len());
        let mut term = DVector::zeros(v0.len());
        for chunk in 0..chunks {
            let mut power = v.clone();
            let mut next = DVector::zeros(v0.len());
            for (k, (w, tail)) in weights.iter().zip(&tails).enumerate() {
                if k > 0 {
                    self.p.mul_to(&power, &mut term);
                    std::mem::swap(&mut power, &mut term);
                }
                next.axpy(*w, &power, 1.0);
                integral.axpy(*tail / self.q, &power, 1.0);
            }
            if next.iter().any(|x| !x.is_finite()) {
                return Err(Error::Integration { achieved: chunk as f64 * dt });
            }
            v = next;
        }
        Ok((v, integral))
    }
}

/// Poisson(a) probabilities truncated once the remaining tail is below
/// [`POISSON_TAIL`].
fn poisson_weights(a: f64) -> Option<Vec<f64>> {
    let mut w = Vec::new();
    let mut p = (-a).exp();
    let mut k = 0usize;
    loop {
        w.push(p);
        k += 1;
        if k > MAX_TERMS {
            return None;
        }
        p *= a / k as f64;
        // the tail beyond k is bounded by p / (1 − a/(k+1)) once k+1 > a
        if (k as f64 + 1.0) > a && p * (k as f64 + 1.0) / (k as f64 + 1.0 - a) < POISSON_TAIL {
            w.push(p);
            return Some(w);
        }
    }
}

/// Connected components of the undirected graph `{m(x,y) > 0}`.
pub(crate) struct Components {
    pub count: usize,
    pub label: Vec<usize>,
}

pub(crate) fn components(m: &DMatrix<f64>) -> Components {
    let n = m.nrows();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        label[start] = count;
        while let Some(x) = stack.pop() {
            for y in 0..n {
                if label[y] == usize::MAX && (m[(x, y)] > 0.0 || m[(y, x)] > 0.0) {
                    label[y] = count;
                    stack.push(y);
                }
            }
        }
        count += 1;
    }
    Components { count, label }
}

/// Number of strongly connected classes of the directed graph `{m(x,y) > 0}`.
fn strongly_connected_count(m: &DMatrix<f64>) -> usize {
    let n = m.nrows();
    let reach = |forward: bool, from: usize| {
        let mut seen = vec![false; n];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(x) = stack.pop() {
            for y in 0..n {
                let w = if forward { m[(x, y)] } else { m[(y, x)] };
                if !seen[y] && w > 0.0 {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    let mut assigned = vec![false; n];
    let mut classes = 0;
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let f = reach(true, x);
        let b = reach(false, x);
        for y in 0..n {
            if f[y] && b[y] {
                assigned[y] = true;
            }
        }
        classes += 1;
    }
    classes
}
