use std::f64::consts::PI;

use num_complex::Complex64;
use phasetomo::error::Error;
use phasetomo::grid::Axis;
use phasetomo::oracle::{damped_quadrature, richardson_in_damping, QuadratureSpec, Window};
use phasetomo::states::{
    complex_gaussian_integral, gaussian_eval, gaussian_ground, psi_stationary, ComplexGaussian, PhysParams,
    StationaryState,
};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn tapered_overlap(e1: f64, e2: f64, lo: f64, hi: f64, fraction: f64) -> f64 {
    let p = PhysParams::natural();
    let (s1, s2) = (StationaryState::new(e1, p).unwrap(), StationaryState::new(e2, p).unwrap());
    let axis = Axis::linspace(lo, hi, ((hi - lo) / 0.005) as usize + 1).unwrap();
    let f: Vec<Complex64> = axis
        .points()
        .iter()
        .map(|&x| c(psi_stationary(x, &s1) * psi_stationary(x, &s2), 0.0))
        .collect();
    let spec = QuadratureSpec {
        window: Window::PlanckTaper { fraction },
        ..Default::default()
    };
    damped_quadrature(&f, &axis, &spec).unwrap().value.re
}

// Reference values from scipy.special.airy with the same window.
#[test]
fn tapered_overlaps_match_reference() {
    assert!((tapered_overlap(1.0, 3.0, -60.0, 20.0, 0.2) + 0.084_296_753).abs() < 1e-6);
    assert!((tapered_overlap(1.0, 1.0, -60.0, 20.0, 0.2) - 1.614_565_897).abs() < 1e-6);
}

#[test]
fn weak_delta_orthogonality() {
    // a 20% taper leaves |overlap| ≈ 0.084; from 30% on it is small
    let off = tapered_overlap(1.0, 3.0, -60.0, 20.0, 0.3);
    assert!(off.abs() <= 0.05, "{off}");
    // the diagonal grows with the window on the oscillatory side
    let diag: Vec<f64> = [20.0, 80.0, 320.0]
        .iter()
        .map(|&hi| tapered_overlap(1.0, 1.0, -60.0, hi, 0.3))
        .collect();
    assert!(diag[1] > 2.0 * diag[0] && diag[2] > 1.5 * diag[1], "{diag:?}");
    assert!(diag[0] > 10.0 * off.abs());
}

#[test]
fn second_moment_by_quadrature() {
    let p = PhysParams::natural();
    let g = gaussian_ground(2.0, &p).unwrap();
    let axis = Axis::linspace(-10.0, 10.0, 4001).unwrap();
    let f: Vec<Complex64> = axis.points().iter().map(|&x| c(x * x * g.eval(x).norm_sqr(), 0.0)).collect();
    let q = damped_quadrature(&f, &axis, &QuadratureSpec::default()).unwrap();
    assert!((q.value.re - 0.25).abs() < 1e-12);
    assert!((g.moments(1.0).var_q - 0.25).abs() < 1e-15);
}

#[test]
fn ground_state_norm_for_several_frequencies() {
    let p = PhysParams::new(1.3, 0.4, 0.7).unwrap();
    for omega in [0.5, 1.0, 2.0] {
        assert!((gaussian_ground(omega, &p).unwrap().norm() - 1.0).abs() < 1e-14);
    }
    assert!(matches!(gaussian_ground(0.0, &p), Err(Error::Domain(_))));
}

#[test]
fn sampling_matches_direct_evaluation() {
    let g = ComplexGaussian::new(c(0.7, 0.2), c(-0.4, 0.9), c(0.3, -1.1)).unwrap();
    let axis = Axis::linspace(-8.0, 8.0, 1024).unwrap();
    for (i, v) in g.sample(&axis).iter().enumerate() {
        assert_eq!(*v, gaussian_eval(&g, axis.at(i)));
    }
}

#[test]
fn gaussian_integral_against_damped_quadrature() {
    let mut rng = StdRng::seed_from_u64(11);
    let axis = Axis::linspace(-40.0, 40.0, 160_001).unwrap();
    for _ in 0..20 {
        let a = c(rng.gen_range(-3.0..-0.1), rng.gen_range(-3.0..3.0));
        let b = c(rng.gen_range(-2.1..2.1), rng.gen_range(-2.1..2.1));
        let f: Vec<Complex64> = axis.points().iter().map(|&x| (a * x * x + b * x).exp()).collect();
        let quad = damped_quadrature(&f, &axis, &QuadratureSpec::default()).unwrap().value;
        let exact = complex_gaussian_integral(a, b).unwrap();
        assert!((quad - exact).norm() <= 1e-8 * exact.norm(), "a = {a}, b = {b}");
    }
}

#[test]
fn fresnel_limit_by_extrapolation() {
    let axis = Axis::linspace(-30.0, 30.0, 120_001).unwrap();
    let f: Vec<Complex64> = axis.points().iter().map(|&x| c(0.0, x * x).exp()).collect();
    let spec = QuadratureSpec {
        window: Window::PlanckTaper { fraction: 0.3 },
        ..Default::default()
    };
    let v = richardson_in_damping(&f, &axis, &spec, &[0.1, 0.05, 0.025]).unwrap();
    let exact = complex_gaussian_integral(c(0.0, 1.0), c(0.0, 0.0)).unwrap();
    assert!((exact - PI.sqrt() * Complex64::from_polar(1.0, PI / 4.0)).norm() < 1e-15);
    assert!((v - exact).norm() < 1e-4, "{v} vs {exact}");
}

#[test]
fn branch_is_continuous_towards_the_imaginary_axis() {
    let mut prev = complex_gaussian_integral(c(-1.0, 0.0), c(0.3, 0.0)).unwrap();
    let steps = 2000;
    let t_max = 0.99 * (PI / 2.0 - 1e-3).tan();
    for k in 1..=steps {
        let t = t_max * (k as f64 / steps as f64).powi(2);
        let v = complex_gaussian_integral(c(-1.0, t), c(0.3, 0.0)).unwrap();
        // a branch flip would show up as a jump comparable to |v| itself
        assert!((v - prev).norm() < 0.1 * v.norm().max(prev.norm()), "t = {t}");
        assert!(v.re > 0.0);
        prev = v;
    }
}

proptest! {
    #[test]
    fn product_closure(
        ar1 in -3.0f64..-0.1, ai1 in -3.0f64..3.0, br1 in -2.0f64..2.0, bi1 in -2.0f64..2.0,
        ar2 in -3.0f64..-0.1, ai2 in -3.0f64..3.0, br2 in -2.0f64..2.0, bi2 in -2.0f64..2.0,
        x in -3.0f64..3.0,
    ) {
        let g1 = ComplexGaussian::new(c(0.8, 0.1), c(ar1, ai1), c(br1, bi1)).unwrap();
        let g2 = ComplexGaussian::new(c(1.2, -0.4), c(ar2, ai2), c(br2, bi2)).unwrap();
        let lhs = g1.eval(x) * g2.eval(x);
        let rhs = g1.product(&g2).eval(x);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1e-300));
    }

    #[test]
    fn translation_covariance(e in -3.0f64..3.0, d in -2.0f64..2.0, x in -8.0f64..4.0) {
        let p = PhysParams::new(1.4, 0.8, 0.9).unwrap();
        let f = p.field();
        let a = psi_stationary(x, &StationaryState::new(e + f * d, p).unwrap());
        let b = psi_stationary(x + d, &StationaryState::new(e, p).unwrap());
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn normalized_constructor_has_unit_norm(ar in -5.0f64..-0.05, ai in -5.0f64..5.0, br in -3.0f64..3.0, bi in -3.0f64..3.0) {
        let g = ComplexGaussian::normalized(c(ar, ai), c(br, bi)).unwrap();
        prop_assert!((g.norm() - 1.0).abs() <= 1e-12);
    }
}
