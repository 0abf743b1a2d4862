//! Trajectories of jump processes and functionals on path space.
//!
//! For a model with rates `λ` (at driving `ε`) and reference rates `λ₀`
//! (at `ε = 0`), the Girsanov action of a path `ω` on `[0, T]` is
//!
//! ```text
//! A(ω) = ∫₀ᵀ (ξ − ξ₀)(x_t) dt − Σ_jumps log[λ(x_{t−}, x_t) / λ₀(x_{t−}, x_t)]
//! ```
//!
//! Its time-antisymmetric part `S = A∘θ − A` is the irreversible entropy
//! flux `β Σ_jumps ε F1(x_{t−}, x_t)`; its time-symmetric part `𝒯 = A∘θ + A`
//! is the traffic. The estimators in this module check, by Monte Carlo,
//! identities between these functionals that hold exactly at every finite
//! horizon.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::Exp1;

use crate::error::{Error, Result};
use crate::markov::{Distribution, JumpModel, RateMatrix};
use crate::stats::{draw_index, parallel_rows, parallel_samples, substream, PathEstimate};

/// A single transition of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub time: f64,
    pub from: usize,
    pub to: usize,
}

/// A piecewise-constant, right-continuous path on `[0, T]`.
///
/// Jump times lie strictly inside `(0, T)`; a jump exactly at an endpoint
/// has probability zero and would make time reversal lossy.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    x0: usize,
    jumps: Vec<Jump>,
    horizon: f64,
}

impl Trajectory {
    pub fn new(x0: usize, jumps: Vec<Jump>, horizon: f64) -> Result<Self> {
        if !(horizon >= 0.0 && horizon.is_finite()) {
            return Err(Error::InvalidTrajectory(format!("horizon {horizon} must be finite and nonnegative")));
        }
        let mut state = x0;
        let mut last = 0.0;
        for (k, j) in jumps.iter().enumerate() {
            if !(j.time > last && j.time < horizon) {
                return Err(Error::InvalidTrajectory(format!("jump {k} at t = {} is out of order or outside (0, T)", j.time)));
            }
            if j.from != state {
                return Err(Error::InvalidTrajectory(format!("jump {k} leaves {} but the path is in {state}", j.from)));
            }
            if j.from == j.to {
                return Err(Error::InvalidTrajectory(format!("jump {k} is a self-loop")));
            }
            state = j.to;
            last = j.time;
        }
        Ok(Self { x0, jumps, horizon })
    }

    pub fn x0(&self) -> usize {
        self.x0
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn final_state(&self) -> usize {
        self.jumps.last().map_or(self.x0, |j| j.to)
    }

    /// `x_t`, right-continuous.
    pub fn state_at(&self, t: f64) -> usize {
        let k = self.jumps.partition_point(|j| j.time <= t);
        if k == 0 { self.x0 } else { self.jumps[k - 1].to }
    }

    /// `(state, duration)` for every holding interval, in time order.
    pub fn holding_intervals(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let starts = std::iter::once((self.x0, 0.0)).chain(self.jumps.iter().map(|j| (j.to, j.time)));
        let ends = self.jumps.iter().map(|j| j.time).chain(std::iter::once(self.horizon));
        starts.zip(ends).map(|((s, t0), t1)| (s, t1 - t0))
    }

    /// `∫₀ᵀ f(x_t) dt`, exact for a piecewise-constant path.
    pub fn time_integral(&self, f: &[f64]) -> f64 {
        self.holding_intervals().map(|(s, d)| f[s] * d).sum()
    }

    /// `Σ_jumps g(x_{t−}, x_t)`.
    pub fn jump_sum(&self, g: &DMatrix<f64>) -> f64 {
        self.jumps.iter().map(|j| g[(j.from, j.to)]).sum()
    }

    /// The right-continuous modification of `t ↦ x_{T−t}`.
    pub fn time_reverse(&self) -> Trajectory {
        let jumps = self
            .jumps
            .iter()
            .rev()
            .map(|j| Jump { time: self.horizon - j.time, from: j.to, to: j.from })
            .collect();
        Trajectory { x0: self.final_state(), jumps, horizon: self.horizon }
    }

    /// Line format: `x0=<state> T=<horizon>`, then one `time,from,to` line
    /// per jump. Floats use the shortest representation that round-trips.
    pub fn to_text(&self) -> String {
        let mut s = format!("x0={} T={}\n", self.x0, self.horizon);
        for j in &self.jumps {
            let _ = writeln!(s, "{},{},{}", j.time, j.from, j.to);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty trajectory".into()))?;
        let mut x0 = None;
        let mut horizon = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("x0", v)) => x0 = v.parse::<usize>().ok(),
                Some(("T", v)) => horizon = v.parse::<f64>().ok(),
                _ => return Err(Error::Parse(format!("unexpected header field `{field}`"))),
            }
        }
        let (x0, horizon) = match (x0, horizon) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::Parse("header must be `x0=<state> T=<horizon>`".into())),
        };
        let mut jumps = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("jump line `{line}` must be time,from,to")));
            }
            let bad = |_| Error::Parse(format!("cannot parse jump line `{line}`"));
            jumps.push(Jump {
                time: parts[0].parse().map_err(|e: std::num::ParseFloatError| bad(e.to_string()))?,
                from: parts[1].parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
                to: parts[2].parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
            });
        }
        Trajectory::new(x0, jumps, horizon)
    }
}

/// Exact sampler for a jump process (stochastic simulation algorithm).
#[derive(Debug, Clone)]
pub struct JumpSampler {
    escape: Vec<f64>,
    targets: Vec<Vec<usize>>,
    cumulative: Vec<Vec<f64>>,
}

impl JumpSampler {
    pub fn new(rates: &RateMatrix) -> Self {
        let n = rates.n_states();
        let mut targets = Vec::with_capacity(n);
        let mut cumulative = Vec::with_capacity(n);
        for x in 0..n {
            let mut t = Vec::new();
            let mut c = Vec::new();
            let mut acc = 0.0;
            for y in 0..n {
                let r = rates.rate(x, y);
                if y != x && r > 0.0 {
                    acc += r;
                    t.push(y);
                    c.push(acc);
                }
            }
            targets.push(t);
            cumulative.push(c);
        }
        Self { escape: rates.escape().to_vec(), targets, cumulative }
    }

    /// Holding times are `Exp(ξ(x))`; the next state is `y` with probability
    /// `λ(x,y)/ξ(x)`.
    pub fn sample<R: Rng + ?Sized>(&self, x0: usize, horizon: f64, rng: &mut R) -> Trajectory {
        let mut jumps = Vec::new();
        let mut t = 0.0;
        let mut x = x0;
        loop {
            let xi = self.escape[x];
            if xi <= 0.0 {
                break;
            }
            let e: f64 = rng.sample(Exp1);
            t += e / xi;
            if t >= horizon {
                break;
            }
            let u: f64 = rng.random::<f64>() * xi;
            let c = &self.cumulative[x];
            let k = c.partition_point(|v| *v <= u).min(c.len() - 1);
            let y = self.targets[x][k];
            jumps.push(Jump { time: t, from: x, to: y });
            x = y;
        }
        Trajectory { x0, jumps, horizon }
    }
}

/// Draws one path of the process with the given rates, deterministic in `seed`.
pub fn sample_path(rates: &RateMatrix, x0: usize, horizon: f64, seed: u64) -> Result<Trajectory> {
    if x0 >= rates.n_states() {
        return Err(Error::InvalidArgument(format!("initial state {x0} out of range")));
    }
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon {horizon} must be finite and nonnegative")));
    }
    Ok(JumpSampler::new(rates).sample(x0, horizon, &mut substream(seed, 0)))
}

/// Precomputed rates for evaluating action, entropy flux and traffic.
#[derive(Debug, Clone)]
pub struct PathFunctionals {
    rates: RateMatrix,
    reference: RateMatrix,
    escape_excess: Vec<f64>,
    entropy_per_jump: DMatrix<f64>,
    beta: f64,
}

impl PathFunctionals {
    pub fn new(model: &JumpModel) -> Result<Self> {
        let rates = model.rates()?;
        let reference = model.reference_rates()?;
        let escape_excess = rates.escape().iter().zip(reference.escape()).map(|(a, b)| a - b).collect();
        let entropy_per_jump = model.scaled_driving() * model.beta();
        Ok(Self { rates, reference, escape_excess, entropy_per_jump, beta: model.beta() })
    }

    pub fn rates(&self) -> &RateMatrix {
        &self.rates
    }

    pub fn reference(&self) -> &RateMatrix {
        &self.reference
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `S_IRR(ω) = β Σ_jumps ε F1(x_{t−}, x_t)`.
    pub fn entropy_flux(&self, path: &Trajectory) -> f64 {
        path.jump_sum(&self.entropy_per_jump)
    }

    fn log_ratio(&self, from: usize, to: usize) -> Result<f64> {
        let r0 = self.reference.rate(from, to);
        if r0 <= 0.0 {
            return Err(Error::AbsoluteContinuity { from, to });
        }
        Ok((self.rates.rate(from, to) / r0).ln())
    }

    /// Girsanov action of the driven process relative to the reference one.
    pub fn action(&self, path: &Trajectory) -> Result<f64> {
        let mut a = path.time_integral(&self.escape_excess);
        for j in path.jumps() {
            a -= self.log_ratio(j.from, j.to)?;
        }
        Ok(a)
    }

    /// `𝒯(ω) = A(θω) + A(ω)`.
    pub fn traffic(&self, path: &Trajectory) -> Result<f64> {
        let mut t = 2.0 * path.time_integral(&self.escape_excess);
        for j in path.jumps() {
            t -= self.log_ratio(j.from, j.to)? + self.log_ratio(j.to, j.from)?;
        }
        Ok(t)
    }

    /// Expected number of jumps on `[0, T]` from `ρ₀`, used for the weight
    /// degeneracy warning.
    fn expected_jumps(&self, rho0: &Distribution, horizon: f64) -> f64 {
        horizon * rho0.expect(self.rates.escape())
    }
}

/// `S_IRR` of a path under `model`.
pub fn entropy_flux(path: &Trajectory, model: &JumpModel) -> Result<f64> {
    Ok(PathFunctionals::new(model)?.entropy_flux(path))
}

/// Girsanov action `A` of a path under `model`.
pub fn action(path: &Trajectory, model: &JumpModel) -> Result<f64> {
    PathFunctionals::new(model)?.action(path)
}

/// Traffic `𝒯` of a path under `model`.
pub fn traffic(path: &Trajectory, model: &JumpModel) -> Result<f64> {
    PathFunctionals::new(model)?.traffic(path)
}

/// A real function of a whole trajectory.
pub trait Observable: Sync {
    fn eval(&self, path: &Trajectory) -> f64;
}

impl<F> Observable for F
where
    F: Fn(&Trajectory) -> f64 + Sync,
{
    fn eval(&self, path: &Trajectory) -> f64 {
        self(path)
    }
}

/// `1[x_T = x]`.
#[derive(Debug, Clone, Copy)]
pub struct EndState(pub usize);

impl Observable for EndState {
    fn eval(&self, path: &Trajectory) -> f64 {
        f64::from(u8::from(path.final_state() == self.0))
    }
}

/// `1[x_T ∈ set]`.
#[derive(Debug, Clone)]
pub struct EndStateIn(pub Vec<usize>);

impl Observable for EndStateIn {
    fn eval(&self, path: &Trajectory) -> f64 {
        f64::from(u8::from(self.0.contains(&path.final_state())))
    }
}

/// `1[x_0 = a, x_T = b]`.
#[derive(Debug, Clone, Copy)]
pub struct StartEnd {
    pub start: usize,
    pub end: usize,
}

impl Observable for StartEnd {
    fn eval(&self, path: &Trajectory) -> f64 {
        f64::from(u8::from(path.x0() == self.start && path.final_state() == self.end))
    }
}

/// Number of jumps on `[0, T]`.
#[derive(Debug, Clone, Copy)]
pub struct JumpCount;

impl Observable for JumpCount {
    fn eval(&self, path: &Trajectory) -> f64 {
        path.jumps().len() as f64
    }
}

fn warn_if_degenerate(functionals: &PathFunctionals, model: &JumpModel, horizon: f64) -> Result<()> {
    let rho0 = model.equilibrium_density()?;
    let per_jump = functionals.entropy_per_jump.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let load = per_jump * functionals.expected_jumps(&rho0, horizon);
    if load > 2.0 {
        log::warn!("exponential path weights may degenerate: β·ε·max|F1| × expected jumps = {load:.2} > 2");
    }
    Ok(())
}

fn check_horizon(horizon: f64, n: usize) -> Result<()> {
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!("horizon {horizon} must be finite and nonnegative")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    Ok(())
}

/// Monte Carlo check of `⟨f⟩_{ρ₀} = ⟨f∘θ · e^{−S_IRR}⟩_{ρ₀}` for the driven
/// process started from `ρ₀`. The two sides use disjoint substreams and are
/// therefore independent.
pub fn fluctuation_symmetry_test(
    model: &JumpModel,
    f: &dyn Observable,
    horizon: f64,
    n: usize,
    seed: u64,
) -> Result<(PathEstimate, PathEstimate)> {
    Ok(fluctuation_symmetry_many(model, &[f], horizon, n, seed)?.remove(0))
}

/// [`fluctuation_symmetry_test`] for several observables on shared paths.
pub fn fluctuation_symmetry_many(
    model: &JumpModel,
    observables: &[&dyn Observable],
    horizon: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<(PathEstimate, PathEstimate)>> {
    check_horizon(horizon, n)?;
    let functionals = PathFunctionals::new(model)?;
    warn_if_degenerate(&functionals, model, horizon)?;
    let rho0 = model.equilibrium_density()?;
    let sampler = JumpSampler::new(functionals.rates());
    let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
        let x0 = draw_index(rho0.as_slice(), rng);
        sampler.sample(x0, horizon, rng)
    };
    let lhs = parallel_rows(n, seed, 0, |_, rng| {
        let path = draw(rng);
        observables.iter().map(|f| f.eval(&path)).collect()
    });
    let rhs = parallel_rows(n, seed, n as u64, |_, rng| {
        let path = draw(rng);
        let weight = (-functionals.entropy_flux(&path)).exp();
        let reversed = path.time_reverse();
        observables.iter().map(|f| f.eval(&reversed) * weight).collect()
    });
    Ok((0..observables.len())
        .map(|k| {
            (
                PathEstimate::from_samples(&crate::stats::column(&lhs, k), seed),
                PathEstimate::from_samples(&crate::stats::column(&rhs, k), seed),
            )
        })
        .collect())
}

/// Estimates `⟨e^{−S_IRR}⟩ₓ` under the driven process started at `x`;
/// `ρ₀(x)` times the estimate is `ρ_T^ε(x)`.
pub fn density_via_entropy(model: &JumpModel, x: usize, horizon: f64, n: usize, seed: u64) -> Result<PathEstimate> {
    check_horizon(horizon, n)?;
    check_state(model, x)?;
    let functionals = PathFunctionals::new(model)?;
    warn_if_degenerate(&functionals, model, horizon)?;
    let sampler = JumpSampler::new(functionals.rates());
    let values = parallel_samples(n, seed, 0, |_, rng| {
        let path = sampler.sample(x, horizon, rng);
        (-functionals.entropy_flux(&path)).exp()
    });
    Ok(PathEstimate::from_samples(&values, seed))
}

/// Estimates `⟨e^{−(S+𝒯)/2}⟩⁰ₓ` over paths of the reference process started
/// at `x`; `ρ₀(x)` times the estimate is `ρ_T^ε(x)`.
pub fn density_via_equilibrium(model: &JumpModel, x: usize, horizon: f64, n: usize, seed: u64) -> Result<PathEstimate> {
    check_horizon(horizon, n)?;
    check_state(model, x)?;
    let functionals = PathFunctionals::new(model)?;
    warn_if_degenerate(&functionals, model, horizon)?;
    let sampler = JumpSampler::new(functionals.reference());
    let values = parallel_rows(n, seed, 0, |_, rng| {
        let path = sampler.sample(x, horizon, rng);
        let s = functionals.entropy_flux(&path);
        match functionals.traffic(&path) {
            Ok(t) => vec![(-(s + t) / 2.0).exp()],
            Err(_) => vec![f64::NAN],
        }
    });
    finish_weights(values, seed)
}

/// Estimates `⟨e^{(S−𝒯)/2}⟩⁰_μ`, which equals one for every initial law.
pub fn normalization_check(model: &JumpModel, mu: &Distribution, horizon: f64, n: usize, seed: u64) -> Result<PathEstimate> {
    check_horizon(horizon, n)?;
    if mu.len() != model.n_states() {
        return Err(Error::DimensionMismatch { expected: model.n_states(), got: mu.len() });
    }
    let functionals = PathFunctionals::new(model)?;
    warn_if_degenerate(&functionals, model, horizon)?;
    let sampler = JumpSampler::new(functionals.reference());
    let values = parallel_rows(n, seed, 0, |_, rng| {
        let x0 = draw_index(mu.as_slice(), rng);
        let path = sampler.sample(x0, horizon, rng);
        let s = functionals.entropy_flux(&path);
        match functionals.traffic(&path) {
            Ok(t) => vec![((s - t) / 2.0).exp()],
            Err(_) => vec![f64::NAN],
        }
    });
    finish_weights(values, seed)
}

fn finish_weights(rows: Vec<Vec<f64>>, seed: u64) -> Result<PathEstimate> {
    let values = crate::stats::column(&rows, 0);
    if values.iter().any(|v| v.is_nan()) {
        // reference paths only use allowed transitions, so this means the
        // model itself is inconsistent
        return Err(Error::InvalidModel("driven and reference supports differ".into()));
    }
    Ok(PathEstimate::from_samples(&values, seed))
}

fn check_state(model: &JumpModel, x: usize) -> Result<()> {
    if x >= model.n_states() {
        return Err(Error::InvalidArgument(format!("state {x} out of range")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::driven_ring;
    use approx::assert_relative_eq;

    #[test]
    fn zero_horizon_has_no_jumps() {
        let r = driven_ring(3, 0.5).unwrap().rates().unwrap();
        let p = sample_path(&r, 1, 0.0, 3).unwrap();
        assert!(p.jumps().is_empty());
        assert_eq!(p.final_state(), 1);
    }

    #[test]
    fn reversal_of_single_jump() {
        let p = Trajectory::new(0, vec![Jump { time: 1.0, from: 0, to: 1 }], 3.0).unwrap();
        let r = p.time_reverse();
        assert_eq!(r.x0(), 1);
        assert_eq!(r.jumps(), &[Jump { time: 2.0, from: 1, to: 0 }]);
        assert_eq!(r.final_state(), 0);
        let still = Trajectory::new(2, vec![], 5.0).unwrap();
        assert_eq!(still.time_reverse(), still);
    }

    #[test]
    fn invalid_trajectories_are_rejected() {
        let j = |time, from, to| Jump { time, from, to };
        assert!(Trajectory::new(0, vec![j(1.0, 1, 0)], 2.0).is_err());
        assert!(Trajectory::new(0, vec![j(1.0, 0, 1), j(0.5, 1, 0)], 2.0).is_err());
        assert!(Trajectory::new(0, vec![j(2.0, 0, 1)], 2.0).is_err());
        assert!(Trajectory::new(0, vec![j(1.0, 0, 0)], 2.0).is_err());
    }

    #[test]
    fn state_lookup_is_right_continuous() {
        let p = Trajectory::new(0, vec![Jump { time: 1.0, from: 0, to: 2 }], 3.0).unwrap();
        assert_eq!(p.state_at(0.999), 0);
        assert_eq!(p.state_at(1.0), 2);
        assert_eq!(p.state_at(3.0), 2);
    }

    #[test]
    fn entropy_flux_counts_net_circulation() {
        let eps = 0.3;
        let model = driven_ring(3, eps).unwrap();
        let j = |time, from, to| Jump { time, from, to };
        // three clockwise jumps and one counterclockwise
        let p = Trajectory::new(0, vec![j(0.1, 0, 1), j(0.2, 1, 2), j(0.3, 2, 0), j(0.4, 0, 2)], 1.0).unwrap();
        assert_relative_eq!(entropy_flux(&p, &model).unwrap(), eps * 2.0, epsilon = 1e-15);
        assert_eq!(entropy_flux(&Trajectory::new(1, vec![], 1.0).unwrap(), &model).unwrap(), 0.0);
    }

    #[test]
    fn action_vanishes_without_driving() {
        let model = driven_ring(4, 0.0).unwrap();
        let p = sample_path(&model.rates().unwrap(), 0, 5.0, 9).unwrap();
        assert_eq!(action(&p, &model).unwrap(), 0.0);
        assert_eq!(traffic(&p, &model).unwrap(), 0.0);
    }

    #[test]
    fn forbidden_jump_breaks_absolute_continuity() {
        // a path that uses a pair the model does not connect
        let model = driven_ring(4, 0.2).unwrap();
        let p = Trajectory::new(0, vec![Jump { time: 0.5, from: 0, to: 2 }], 1.0).unwrap();
        assert_eq!(action(&p, &model), Err(Error::AbsoluteContinuity { from: 0, to: 2 }));
    }

    #[test]
    fn text_format_example() {
        let p = Trajectory::new(2, vec![Jump { time: 0.25, from: 2, to: 0 }], 1.5).unwrap();
        assert_eq!(p.to_text(), "x0=2 T=1.5\n0.25,2,0\n");
        assert_eq!(Trajectory::from_text(&p.to_text()).unwrap(), p);
        assert!(Trajectory::from_text("x0=1\n").is_err());
        assert!(Trajectory::from_text("x0=0 T=1\n0.5,1,0\n").is_err());
    }

    #[test]
    fn fluctuation_symmetry_with_unit_observable() {
        let model = driven_ring(3, 0.2).unwrap();
        let one = |_: &Trajectory| 1.0;
        let (lhs, rhs) = fluctuation_symmetry_test(&model, &one, 1.0, 4000, 5).unwrap();
        assert_eq!(lhs.mean, 1.0);
        assert!(rhs.z_against(1.0) < 4.0, "{rhs:?}");
    }
}
