//! Monte Carlo plumbing: seeded substreams, deterministic parallel
//! estimation and Richardson extrapolation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Sample mean with its standard error, tagged with the seed that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub seed: u64,
}

impl PathEstimate {
    /// Summarizes `values` in index order, so the result does not depend on
    /// how they were produced.
    pub fn from_samples(values: &[f64], seed: u64) -> Self {
        let n = values.len().max(1);
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self { mean, std_error: (var / n as f64).sqrt(), n_samples: values.len(), seed }
    }

    /// A noiseless value, reported in the same shape as an estimate.
    pub fn exact(value: f64) -> Self {
        Self { mean: value, std_error: 0.0, n_samples: 1, seed: 0 }
    }

    /// Number of combined standard errors separating two independent estimates.
    pub fn z_score(&self, other: &PathEstimate) -> f64 {
        let se = self.std_error.hypot(other.std_error);
        let d = (self.mean - other.mean).abs();
        if se == 0.0 {
            if d == 0.0 { 0.0 } else { f64::INFINITY }
        } else {
            d / se
        }
    }

    /// Number of standard errors separating the estimate from a known value.
    pub fn z_against(&self, value: f64) -> f64 {
        let d = (self.mean - value).abs();
        if self.std_error == 0.0 {
            if d == 0.0 { 0.0 } else { f64::INFINITY }
        } else {
            d / self.std_error
        }
    }
}

/// Generator for sample `index` of a run seeded with `seed`.
///
/// Each sample owns a ChaCha stream, so results are reproducible bit-for-bit
/// regardless of how samples are distributed over threads.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Evaluates `sample(i, rng_i)` for `i in 0..n` in parallel and returns the
/// values in index order.
pub fn parallel_samples<F>(n: usize, seed: u64, stream_offset: u64, sample: F) -> Vec<f64>
where
    F: Fn(usize, &mut ChaCha8Rng) -> f64 + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, stream_offset + i as u64);
            sample(i, &mut rng)
        })
        .collect()
}

/// Like [`parallel_samples`] but each sample yields a fixed-width row.
pub fn parallel_rows<F>(n: usize, seed: u64, stream_offset: u64, sample: F) -> Vec<Vec<f64>>
where
    F: Fn(usize, &mut ChaCha8Rng) -> Vec<f64> + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, stream_offset + i as u64);
            sample(i, &mut rng)
        })
        .collect()
}

/// Column `c` of a row-major sample table.
pub fn column(rows: &[Vec<f64>], c: usize) -> Vec<f64> {
    rows.iter().map(|r| r[c]).collect()
}

/// One Richardson step for a quantity with error expansion `a + c hᵖ + …`
/// given values at step `h` and `h/2`.
pub fn richardson(coarse: f64, fine: f64, order: i32) -> f64 {
    let k = 2f64.powi(order);
    (k * fine - coarse) / (k - 1.0)
}

/// Draws an index from the discrete law `p` by inversion.
pub fn draw_index<R: rand::Rng>(p: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, w) in p.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    // rounding left a sliver above the last cumulative value
    p.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn estimate_of_constant_has_zero_error() {
        let e = PathEstimate::from_samples(&[2.0; 10], 1);
        assert_eq!(e.mean, 2.0);
        assert_eq!(e.std_error, 0.0);
        assert_eq!(e.z_against(2.0), 0.0);
    }

    #[test]
    fn substreams_are_reproducible_and_distinct() {
        let a: f64 = substream(7, 3).random();
        let b: f64 = substream(7, 3).random();
        let c: f64 = substream(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn parallel_samples_do_not_depend_on_pool_size() {
        let f = |i: usize, rng: &mut ChaCha8Rng| i as f64 + rng.random::<f64>();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| parallel_samples(1000, 11, 0, f));
        let b = four.install(|| parallel_samples(1000, 11, 0, f));
        assert_eq!(a, b);
    }

    #[test]
    fn richardson_removes_leading_order() {
        let f = |h: f64| 3.0 + 2.0 * h + 0.5 * h * h;
        let r = richardson(f(0.1), f(0.05), 1);
        assert!((r - 3.0).abs() < 0.01);
        let g = |h: f64| 3.0 + 2.0 * h * h;
        assert!((richardson(g(0.1), g(0.05), 2) - 3.0).abs() < 1e-14);
    }
}
