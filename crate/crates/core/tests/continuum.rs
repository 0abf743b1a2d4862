use approx::assert_relative_eq;
use ness_core::diffusion::{
    continuum_h1, current_density, ito_decomposition, mclennan_h1_diffusion, sde_sample, stratonovich_integral,
    DiffusionModel, PeriodicField,
};
use ness_core::models::rlc::{rlc_entropy_flux, RlcModel};
use ness_core::models::{LatticeGasSpec, RlcSpec};
use ness_core::models::lattice_gas::LatticeGas;
use ness_core::pathspace::sample_path;
use ness_core::stats::{parallel_samples, substream, PathEstimate};
use ness_core::Error;
use nalgebra::Vector2;

fn smooth(n: usize, eps: f64) -> DiffusionModel {
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

fn max_err(model: &DiffusionModel) -> f64 {
    let grid = mclennan_h1_diffusion(model).unwrap();
    let exact = continuum_h1(model, 16).unwrap();
    grid.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

#[test]
fn grid_h1_converges_at_second_order() {
    let e32 = max_err(&smooth(32, 0.0));
    let e64 = max_err(&smooth(64, 0.0));
    let e128 = max_err(&smooth(128, 0.0));
    assert!(e64 < e32 && e128 < e64);
    let order = (e64 / e128).log2();
    assert!((1.7..2.3).contains(&order), "observed order {order}");
}

#[test]
fn first_order_density_error_is_quadratic() {
    let err = |eps: f64| {
        let model = smooth(64, eps);
        let h1 = mclennan_h1_diffusion(&model).unwrap();
        let chain = model.chain().unwrap();
        let rho0 = chain.equilibrium_density().unwrap();
        let rho = chain.rates().unwrap().stationary().unwrap();
        (0..64).map(|i| (rho[i] - rho0[i] * (eps * h1[i]).exp()).abs() / rho0[i]).fold(0.0, f64::max)
    };
    let ratio = err(0.1) / err(0.05);
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn flat_ring_current_is_exact() {
    let (n, chi, beta, eps) = (40, 1.3, 2.0, 0.7);
    let model =
        DiffusionModel::new(n, beta, PeriodicField::constant(chi), PeriodicField::zero(), PeriodicField::constant(1.0), eps)
            .unwrap();
    let rho = model.chain().unwrap().rates().unwrap().stationary().unwrap();
    let d = chi / beta;
    let delta = 1.0 / n as f64;
    let expected = 2.0 * d / delta * (beta * eps * delta / 2.0).sinh();
    for j in current_density(&model, &rho).unwrap() {
        assert_relative_eq!(j, expected, max_relative = 1e-12);
    }
    assert_relative_eq!(expected, chi * eps, max_relative = 1e-3);
}

#[test]
fn free_brownian_variance_grows_linearly() {
    let chi = 0.8;
    let model =
        DiffusionModel::new(16, 1.0, PeriodicField::constant(chi), PeriodicField::zero(), PeriodicField::zero(), 0.0).unwrap();
    let t = 0.5;
    let disp = parallel_samples(4000, 2, 0, |i, _| {
        let p = sde_sample(&model, 0.0, 1e-3, t, 1000 + i as u64).unwrap();
        p.positions.last().unwrap().powi(2)
    });
    let est = PathEstimate::from_samples(&disp, 2);
    assert!(est.z_against(2.0 * chi * t) < 4.0, "{est:?}");
}

#[test]
fn stratonovich_and_ito_forms_agree_pathwise() {
    let model = smooth(64, 0.0);
    let f = PeriodicField::new(0.4, vec![0.3], vec![-0.2]);
    let path = sde_sample(&model, 0.3, 1e-5, 1.0, 17).unwrap();
    let s = stratonovich_integral(&path, &f).unwrap();
    let i = ito_decomposition(&model, &path, &f);
    assert!((s - i).abs() < 0.02, "{s} vs {i}");
}

#[test]
fn oversized_steps_are_reported() {
    let model = smooth(16, 0.0);
    assert!(matches!(sde_sample(&model, 0.0, 1.0, 5.0, 1), Err(Error::DtTooLarge { .. })));
}

#[test]
fn long_run_histogram_matches_the_driven_grid_law() {
    let model = smooth(256, 1.0);
    let rho = model.chain().unwrap().rates().unwrap().stationary().unwrap();
    let bins = 8;
    let mut p = vec![0.0; bins];
    for i in 0..256 {
        p[i * bins / 256] += rho[i];
    }
    let n = 4000;
    let ends = parallel_samples(n, 5, 0, |i, _| {
        let path = sde_sample(&model, 0.5, 1e-3, 1.0, 500 + i as u64).unwrap();
        path.positions.last().unwrap().rem_euclid(1.0)
    });
    for b in 0..bins {
        let freq = ends.iter().filter(|x| (**x * bins as f64) as usize == b).count() as f64 / n as f64;
        assert!((freq - p[b]).abs() < 4.0 * (p[b] * (1.0 - p[b]) / n as f64).sqrt(), "bin {b}: {freq} vs {}", p[b]);
    }
}

#[test]
fn lattice_gas_occupation_matches_the_stationary_law() {
    let gas = LatticeGas::new(LatticeGasSpec::new(2, 1.0, 0.5, 0.2, 0.8)).unwrap();
    let rates = gas.model().rates().unwrap();
    let rho = rates.stationary().unwrap();
    let occ: Vec<f64> = (0..rho.len()).map(|x| f64::from(gas.occupation(x, 0))).collect();
    let exact = rho.expect(&occ);
    let t = 50.0;
    let values = parallel_samples(400, 8, 0, |i, rng| {
        let x0 = ness_core::stats::draw_index(rho.as_slice(), rng);
        sample_path(&rates, x0, t, 900 + i as u64).unwrap().time_integral(&occ) / t
    });
    let est = PathEstimate::from_samples(&values, 8);
    assert!(est.z_against(exact) < 4.0, "{est:?} vs {exact}");
}

#[test]
fn rlc_entropy_production_rate_is_joule_heating() {
    let spec = RlcSpec::new(1.5, 0.5, 0.8, 1.2, 1.0, 0.6);
    let model = RlcModel::new(spec).unwrap();
    let m = model.stationary_mean().unwrap();
    let (dt, steps) = (0.01, 2000);
    let values = parallel_samples(2000, 4, 0, |i, _| {
        let x0 = model.sample_equilibrium(&mut substream(77, i as u64)) + Vector2::new(m[0], m[1]);
        let path = model.sample_path(x0, dt, steps, 3000 + i as u64).unwrap();
        rlc_entropy_flux(&path, &spec) / path.horizon()
    });
    let est = PathEstimate::from_samples(&values, 4);
    let expected = spec.beta * spec.e * spec.e / (spec.r1 + spec.r2);
    assert!(est.z_against(expected) < 4.0, "{est:?} vs {expected}");
}
