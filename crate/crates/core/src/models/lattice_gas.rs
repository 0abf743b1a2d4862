//! Boundary-driven lattice gas on sites `−N..=0`.
//!
//! Particles hop between neighbouring sites by exchange of occupations and
//! are created or annihilated at the two boundary sites. With activities
//! `a_i` on the bonds and reservoir chemical potentials `b_{−N} = 0`,
//! `b_0 = ε`, the rates are
//!
//! ```text
//! λ(x, x^{i,i+1}) = a_i exp(−β/2 [U(x^{i,i+1}) − U(x)])
//! λ(x, x^i)       = exp(−β/2 [U(x^i) − U(x)]) · exp(−β b_i (2x(i) − 1) / 2)
//! ```
//!
//! which is a [`JumpModel`] with `γ(x,y) = a · e^{−β(U(x)+U(y))/2} / Z` and
//! `F1(x, x^0) = 1 − 2x(0)` on the right boundary flip.
//!
//! Configurations are bitmasks: site `i` is bit `i + N`. Labels list the
//! occupations in site order, `−N` first.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::markov::{boltzmann, Distribution, JumpModel};
use crate::mclennan::{mclennan_density, PoissonSolver};

/// Largest supported `N`; the state space has `2^{N+1}` configurations.
pub const MAX_SITES_N: usize = 10;

/// Energy of a configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum Energy {
    /// `J Σ x(i) x(i+1) + field Σ x(i)`.
    NearestNeighbour { coupling: f64, field: f64 },
    /// One value per configuration, indexed by bitmask.
    Table(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeGasSpec {
    /// Sites run over `−N..=0`.
    pub n: usize,
    pub beta: f64,
    pub energy: Energy,
    /// Exchange activities `a_{−N}, …, a_{−1}`, one per bond.
    pub activities: Vec<f64>,
    /// Right reservoir chemical potential `b_0`; the left one is zero.
    pub epsilon: f64,
}

impl LatticeGasSpec {
    /// Unit activities and nearest-neighbour energy.
    pub fn new(n: usize, beta: f64, coupling: f64, field: f64, epsilon: f64) -> Self {
        Self { n, beta, energy: Energy::NearestNeighbour { coupling, field }, activities: vec![1.0; n], epsilon }
    }

    /// Unit activities and `U(x) ~ U[−1, 1]` independently per configuration.
    pub fn with_random_energy(n: usize, beta: f64, epsilon: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = (0..1usize << (n + 1)).map(|_| rng.random_range(-1.0..1.0)).collect();
        Self { n, beta, energy: Energy::Table(table), activities: vec![1.0; n], epsilon }
    }

    pub fn n_configurations(&self) -> usize {
        1 << (self.n + 1)
    }

    fn validate(&self) -> Result<()> {
        if self.n > MAX_SITES_N {
            return Err(Error::SizeLimit { size: self.n, limit: MAX_SITES_N });
        }
        if self.n == 0 {
            return Err(Error::InvalidArgument("need at least one bond (N ≥ 1)".into()));
        }
        if self.activities.len() != self.n || self.activities.iter().any(|a| !(*a > 0.0)) {
            return Err(Error::InvalidArgument(format!("need {} positive bond activities", self.n)));
        }
        if let Energy::Table(t) = &self.energy {
            if t.len() != self.n_configurations() {
                return Err(Error::DimensionMismatch { expected: self.n_configurations(), got: t.len() });
            }
        }
        Ok(())
    }
}

/// A built lattice gas together with its configuration bijection.
#[derive(Debug, Clone)]
pub struct LatticeGas {
    spec: LatticeGasSpec,
    energy: Vec<f64>,
    model: JumpModel,
}

impl LatticeGas {
    pub fn new(spec: LatticeGasSpec) -> Result<Self> {
        spec.validate()?;
        let size = spec.n_configurations();
        let n = spec.n;
        let energy: Vec<f64> = match &spec.energy {
            Energy::Table(t) => t.clone(),
            Energy::NearestNeighbour { coupling, field } => (0..size)
                .map(|x| {
                    let occ = |k: usize| ((x >> k) & 1) as f64;
                    let bonds: f64 = (0..n).map(|k| occ(k) * occ(k + 1)).sum();
                    let count: f64 = (0..=n).map(occ).sum();
                    coupling * bonds + field * count
                })
                .collect(),
        };
        let rho0 = boltzmann(&energy, spec.beta)?;
        let mut gamma = DMatrix::zeros(size, size);
        let mut driving = DMatrix::zeros(size, size);
        let right = 1usize << n;
        for x in 0..size {
            let base = |y: usize| (rho0[x] * rho0[y]).sqrt();
            for k in 0..n {
                let y = exchange_bits(x, k);
                if y != x {
                    gamma[(x, y)] = spec.activities[k] * base(y);
                }
            }
            for bit in [1usize, right] {
                let y = x ^ bit;
                gamma[(x, y)] = base(y);
            }
            let y = x ^ right;
            driving[(x, y)] = if x & right == 0 { 1.0 } else { -1.0 };
        }
        let labels = (0..size).map(|x| label_of(x, n)).collect();
        let model = JumpModel::new(energy.clone(), spec.beta, driving, gamma, spec.epsilon)?.with_labels(labels)?;
        Ok(Self { spec, energy, model })
    }

    pub fn spec(&self) -> &LatticeGasSpec {
        &self.spec
    }

    pub fn model(&self) -> &JumpModel {
        &self.model
    }

    pub fn energy(&self) -> &[f64] {
        &self.energy
    }

    /// `x(i)` for `i ∈ −N..=0`.
    pub fn occupation(&self, x: usize, site: i64) -> u8 {
        ((x >> self.bit(site)) & 1) as u8
    }

    fn bit(&self, site: i64) -> usize {
        let n = self.spec.n as i64;
        assert!((-n..=0).contains(&site), "site {site} outside −{n}..=0");
        (site + n) as usize
    }

    /// `x^i`, occupation at `i` inverted.
    pub fn flip(&self, x: usize, site: i64) -> usize {
        x ^ (1 << self.bit(site))
    }

    /// `x^{i,i+1}`, occupations at `i` and `i+1` interchanged.
    pub fn exchange(&self, x: usize, site: i64) -> usize {
        exchange_bits(x, self.bit(site))
    }

    /// `w1(x) = exp(−β/2 [U(x⁰) − U(x)]) · [1 − 2x(0)]`.
    pub fn w1_closed_form(&self) -> Vec<f64> {
        (0..self.spec.n_configurations())
            .map(|x| {
                let y = self.flip(x, 0);
                (-0.5 * self.spec.beta * (self.energy[y] - self.energy[x])).exp() * (1.0 - 2.0 * f64::from(self.occupation(x, 0)))
            })
            .collect()
    }

    /// Bond current `j_i(x) = λ₀(x, x^{i,i+1}) [x(i+1) − x(i)]`.
    pub fn bond_current(&self, site: i64) -> Result<Vec<f64>> {
        let r0 = self.model.reference_rates()?;
        Ok((0..self.spec.n_configurations())
            .map(|x| {
                let d = f64::from(self.occupation(x, site + 1)) - f64::from(self.occupation(x, site));
                if d == 0.0 { 0.0 } else { r0.rate(x, self.exchange(x, site)) * d }
            })
            .collect())
    }

    /// `g(x) = Σ v_i x(i)` for a profile `v` listed from site `−N`.
    pub fn linear_observable(&self, profile: &[f64]) -> Vec<f64> {
        (0..self.spec.n_configurations())
            .map(|x| (0..=self.spec.n).map(|k| profile[k] * ((x >> k) & 1) as f64).sum())
            .collect()
    }

    /// `v_i = 1 + i/N`.
    pub fn linear_profile(&self) -> Vec<f64> {
        let n = self.spec.n as f64;
        (0..=self.spec.n).map(|k| k as f64 / n).collect()
    }

    /// `max_x |L₀g(x) + (1/N) Σ_i j_i(x) − w1(x)|` for `g = Σ v_i x(i)`.
    pub fn los_residual(&self, profile: &[f64]) -> Result<f64> {
        if profile.len() != self.spec.n + 1 {
            return Err(Error::DimensionMismatch { expected: self.spec.n + 1, got: profile.len() });
        }
        let size = self.spec.n_configurations();
        let r0 = self.model.reference_rates()?;
        let g = self.linear_observable(profile);
        let w1 = self.w1_closed_form();
        let n = self.spec.n as i64;
        let mut currents = vec![0.0; size];
        for site in -n..0 {
            for (c, j) in currents.iter_mut().zip(self.bond_current(site)?) {
                *c += j;
            }
        }
        let mut worst: f64 = 0.0;
        for x in 0..size {
            let lg: f64 = (0..size).map(|y| r0.rate(x, y) * (g[y] - g[x])).sum();
            worst = worst.max((lg + currents[x] / n as f64 - w1[x]).abs());
        }
        Ok(worst)
    }

    /// Splits the McLennan density into a local-equilibrium factor and a
    /// bond-current remainder.
    pub fn local_equilibrium(&self) -> Result<LocalEquilibrium> {
        let size = self.spec.n_configurations();
        let beta = self.spec.beta;
        let eps = self.spec.epsilon;
        let n = self.spec.n as i64;
        let rho0 = self.model.equilibrium_density()?;
        let g = self.linear_observable(&self.linear_profile());
        let factor = mclennan_density(&rho0, &g, eps * beta)?;
        let solver = PoissonSolver::new(&self.model.reference_rates()?, &rho0)?;
        let mut remainder = vec![0.0; size];
        for site in -n..0 {
            let u = solver.solve(&self.bond_current(site)?)?;
            for (r, v) in remainder.iter_mut().zip(u) {
                // L₀⁻¹ j = −∫₀^∞ e^{tL₀} j dt
                *r += eps * beta / n as f64 * v;
            }
        }
        let exponent: Vec<f64> = g.iter().zip(&remainder).map(|(a, b)| eps * beta * a + b).collect();
        let density = mclennan_density(&rho0, &exponent, 1.0)?;
        Ok(LocalEquilibrium { factor, remainder, density })
    }
}

/// Output of [`LatticeGas::local_equilibrium`].
#[derive(Debug, Clone, PartialEq)]
pub struct LocalEquilibrium {
    /// `ρ₀ e^{εβ Σ v_i x(i)}`, normalized.
    pub factor: Distribution,
    /// `−(εβ/N) Σ_i ∫₀^∞ ⟨j_i(x_t)⟩⁰ₓ dt`, in the `ρ₀`-mean-zero gauge.
    pub remainder: Vec<f64>,
    /// `ρ₀ e^{εβ g + remainder}`, normalized.
    pub density: Distribution,
}

impl LocalEquilibrium {
    /// `max_x |remainder(x)|`.
    pub fn remainder_size(&self) -> f64 {
        self.remainder.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn exchange_bits(x: usize, k: usize) -> usize {
    let a = (x >> k) & 1;
    let b = (x >> (k + 1)) & 1;
    if a == b { x } else { x ^ (0b11 << k) }
}

fn label_of(x: usize, n: usize) -> String {
    (0..=n).map(|k| if (x >> k) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Builds the jump model of `spec`.
pub fn lattice_gas_model(spec: &LatticeGasSpec) -> Result<JumpModel> {
    Ok(LatticeGas::new(spec.clone())?.model)
}

/// Maximum residual of the bond-current identity for `v_i = 1 + i/N`.
pub fn verify_los_identity(spec: &LatticeGasSpec) -> Result<f64> {
    let gas = LatticeGas::new(spec.clone())?;
    gas.los_residual(&gas.linear_profile())
}

/// See [`LatticeGas::local_equilibrium`].
pub fn local_equilibrium_density(spec: &LatticeGasSpec) -> Result<LocalEquilibrium> {
    LatticeGas::new(spec.clone())?.local_equilibrium()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mclennan::linear_work;

    #[test]
    fn flat_gas_is_product_bernoulli() {
        let gas = LatticeGas::new(LatticeGasSpec::new(2, 1.0, 0.0, 0.0, 0.0)).unwrap();
        let rho = gas.model().rates().unwrap().stationary().unwrap();
        for x in 0..8 {
            assert!((rho[x] - 0.125).abs() < 1e-14);
        }
    }

    #[test]
    fn equilibrium_matches_brute_force_sum() {
        let spec = LatticeGasSpec::new(2, 0.7, 0.5, -0.3, 0.0);
        let gas = LatticeGas::new(spec).unwrap();
        let w: Vec<f64> = (0..8usize)
            .map(|x| {
                let o: Vec<f64> = (0..3).map(|k| ((x >> k) & 1) as f64).collect();
                (-0.7 * (0.5 * (o[0] * o[1] + o[1] * o[2]) - 0.3 * (o[0] + o[1] + o[2]))).exp()
            })
            .collect();
        let z: f64 = w.iter().sum();
        let rho = gas.model().equilibrium_density().unwrap();
        for x in 0..8 {
            assert!((rho[x] - w[x] / z).abs() < 1e-15);
        }
    }

    #[test]
    fn rates_follow_exchange_and_boundary_formulas() {
        let beta = 0.9;
        let eps = 0.4;
        let gas = LatticeGas::new(LatticeGasSpec::with_random_energy(2, beta, eps, 3)).unwrap();
        let r = gas.model().rates().unwrap();
        let u = gas.energy();
        for x in 0..8 {
            let y = gas.exchange(x, -1);
            if y != x {
                let expected = (-beta / 2.0 * (u[y] - u[x])).exp();
                assert!((r.rate(x, y) - expected).abs() < 1e-12 * expected);
            }
            for (site, b) in [(-2i64, 0.0), (0, eps)] {
                let y = gas.flip(x, site);
                let sign = 2.0 * f64::from(gas.occupation(x, site)) - 1.0;
                let expected = (-beta / 2.0 * (u[y] - u[x])).exp() * (-beta * b * sign / 2.0).exp();
                assert!((r.rate(x, y) - expected).abs() < 1e-12 * expected);
            }
        }
    }

    #[test]
    fn linear_work_matches_closed_form() {
        let gas = LatticeGas::new(LatticeGasSpec::with_random_energy(3, 1.2, 0.1, 5)).unwrap();
        let w = linear_work(gas.model()).unwrap();
        for (a, b) in w.iter().zip(gas.w1_closed_form()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn size_limit_is_enforced() {
        let spec = LatticeGasSpec::new(12, 1.0, 0.0, 0.0, 0.0);
        assert_eq!(LatticeGas::new(spec).err(), Some(Error::SizeLimit { size: 12, limit: MAX_SITES_N }));
    }

    #[test]
    fn labels_list_sites_from_the_left() {
        let gas = LatticeGas::new(LatticeGasSpec::new(2, 1.0, 0.0, 0.0, 0.0)).unwrap();
        // bit 0 is site −2
        assert_eq!(gas.model().labels()[1], "100");
        assert_eq!(gas.occupation(1, -2), 1);
        assert_eq!(gas.occupation(4, 0), 1);
    }
}
