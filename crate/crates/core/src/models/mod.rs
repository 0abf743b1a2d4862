//! Ready-made models: small driven chains used throughout the test suite,
//! the boundary-driven lattice gas and the noisy RLC circuit.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::markov::JumpModel;

pub mod lattice_gas;
pub mod rlc;

pub use lattice_gas::{LatticeGas, LatticeGasSpec};
pub use rlc::{RlcModel, RlcSpec};

/// Ring of `n ≥ 3` states with flat potential, unit activity on ring edges,
/// `β = 1` and `F1 = +1` on every clockwise jump.
pub fn driven_ring(n: usize, epsilon: f64) -> Result<JumpModel> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("a ring needs at least 3 states, got {n}")));
    }
    let mut f = DMatrix::zeros(n, n);
    let mut g = DMatrix::zeros(n, n);
    for x in 0..n {
        let y = (x + 1) % n;
        f[(x, y)] = 1.0;
        f[(y, x)] = -1.0;
        g[(x, y)] = 1.0;
        g[(y, x)] = 1.0;
    }
    JumpModel::new(vec![0.0; n], 1.0, f, g, epsilon)
}

/// Complete graph on `n` states with `U ~ U[−1, 1]`, `γ ~ U[0.5, 1.5]`,
/// `F1 ~ U[−1, 1]` (antisymmetrized) and `β = 1`, drawn from `seed`.
pub fn random_model(n: usize, seed: u64, epsilon: f64) -> Result<JumpModel> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 states, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let potential = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut f = DMatrix::zeros(n, n);
    let mut g = DMatrix::zeros(n, n);
    for x in 0..n {
        for y in (x + 1)..n {
            let a = rng.random_range(0.5..1.5);
            let v = rng.random_range(-1.0..1.0);
            g[(x, y)] = a;
            g[(y, x)] = a;
            f[(x, y)] = v;
            f[(y, x)] = -v;
        }
    }
    JumpModel::new(potential, 1.0, f, g, epsilon)
}

/// A random antisymmetric field supported on the edges of `model`.
pub fn random_edge_field(model: &JumpModel, seed: u64) -> DMatrix<f64> {
    let n = model.n_states();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = DMatrix::zeros(n, n);
    for x in 0..n {
        for y in (x + 1)..n {
            let v = rng.random_range(-1.0..1.0);
            if model.gamma()[(x, y)] > 0.0 {
                f[(x, y)] = v;
                f[(y, x)] = -v;
            }
        }
    }
    f
}

/// `F1(x,y) = V(x) − V(y)` on the edges of `model`, zero elsewhere.
pub fn gradient_driving(model: &JumpModel, v: &[f64]) -> Result<DMatrix<f64>> {
    let n = model.n_states();
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.len() });
    }
    Ok(DMatrix::from_fn(n, n, |x, y| if model.gamma()[(x, y)] > 0.0 { v[x] - v[y] } else { 0.0 }))
}
