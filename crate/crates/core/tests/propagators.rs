use num_complex::Complex64;
use phasetomo::error::Error;
use phasetomo::grid::Axis;
use phasetomo::oracle::{damped_quadrature, evolve, GridState, OracleConfig, QuadratureSpec};
use phasetomo::propagators::{
    compose_check, green, green_pde_residual, integrals_of_motion, propagate_gaussian, trajectory, ClassicalPoint,
};
use phasetomo::states::{gaussian_ground, ComplexGaussian, PhysParams};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn smeared(x: f64, t: f64, p: &PhysParams) -> Complex64 {
    // ∫G(x, x′, t) φ(x′) dx′ for φ = exp(−x′²/2)
    let axis = Axis::linspace(-12.0, 12.0, 48_001).unwrap();
    let f: Vec<Complex64> = axis
        .points()
        .iter()
        .map(|&xp| green(x, xp, t, p).unwrap() * (-xp * xp / 2.0).exp())
        .collect();
    damped_quadrature(&f, &axis, &QuadratureSpec::default()).unwrap().value
}

#[test]
fn kernel_tends_to_a_delta_function() {
    let p = PhysParams::natural();
    let x: f64 = 0.3;
    let want = (-x * x / 2.0).exp();
    let e1 = (smeared(x, 0.1, &p) - want).norm();
    let e2 = (smeared(x, 0.01, &p) - want).norm();
    assert!(e2 < e1 / 5.0, "{e1} {e2}");
    assert!(e2 < 1e-2);
    assert!(matches!(green(0.0, 0.0, 0.0, &p), Err(Error::DeltaLimit)));
}

#[test]
fn kernel_quadrature_matches_gaussian_algebra() {
    let p = PhysParams::new(1.0, 0.7, 1.0).unwrap();
    let g = ComplexGaussian::new(c(1.0, 0.0), c(-0.5, 0.0), c(0.0, 0.0)).unwrap();
    let t = 0.8;
    let exact = propagate_gaussian(&g, t, &p).unwrap();
    for x in [-1.0, 0.0, 0.6, 2.0] {
        let q = smeared(x, t, &p);
        assert!((q - exact.eval(x)).norm() < 1e-10, "x = {x}");
    }
}

#[test]
fn free_packet_against_crank_nicolson() {
    let p = PhysParams::new(1.0, 0.0, 1.0).unwrap();
    let g = gaussian_ground(1.0, &p).unwrap();
    let cfg = OracleConfig::default();
    let axis = cfg.axis().unwrap();
    let out = evolve(&GridState::from_gaussian(&g, axis, p), 1.0, cfg.dt).unwrap();
    let exact = propagate_gaussian(&g, 1.0, &p).unwrap();
    assert!(out.l2_distance(&exact.sample(&axis)) < 1e-4);
    assert!((exact.a.re + 0.25).abs() < 1e-15);
}

#[test]
fn accelerated_packet_against_crank_nicolson() {
    let p = PhysParams::natural();
    let g = gaussian_ground(1.0, &p).unwrap();
    let cfg = OracleConfig::default();
    let axis = cfg.axis().unwrap();
    let out = evolve(&GridState::from_gaussian(&g, axis, p), 1.0, cfg.dt).unwrap();
    let exact = propagate_gaussian(&g, 1.0, &p).unwrap();
    assert!(out.l2_distance(&exact.sample(&axis)) < 1e-4);
    assert!((exact.moments(1.0).mean_q - 0.5).abs() < 1e-14);
    assert!((out.mean_x() - 0.5).abs() < 1e-4);
}

#[test]
fn pde_residual_on_default_windows() {
    for p in [PhysParams::natural(), PhysParams::new(1.0, 0.0, 1.0).unwrap()] {
        for t in [0.1, 1.0] {
            for xp in [0.0, 1.0] {
                let grid = Axis::linspace(xp - 2.0, xp + 2.0, 4001).unwrap();
                let r = green_pde_residual(&grid, xp, t, &p).unwrap();
                assert!(r <= 1e-6, "t = {t}, xp = {xp}: {r:e}");
            }
        }
    }
}

#[test]
fn semigroup_near_the_endpoint() {
    let p = PhysParams::natural();
    let g = gaussian_ground(1.0, &p).unwrap();
    assert!(compose_check(1.0, 0.5, &g, &p).unwrap() <= 1e-12);
    assert!(compose_check(2.0, 1.999, &g, &p).unwrap() <= 1e-12);
    let free = p.with_field(0.0).unwrap();
    assert!(compose_check(1.0, 0.5, &g, &free).unwrap() <= 1e-12);
    assert!(matches!(compose_check(1.0, 1.0, &g, &p), Err(Error::Domain(_))));
}

fn gaussian() -> impl Strategy<Value = ComplexGaussian> {
    (-2.0f64..-0.2, -1.5f64..1.5, -1.5f64..1.5, -1.5f64..1.5)
        .prop_map(|(ar, ai, br, bi)| ComplexGaussian::normalized(c(ar, ai), c(br, bi)).unwrap())
}

fn params() -> impl Strategy<Value = PhysParams> {
    (0.5f64..2.0, 0.0f64..2.0, 0.5f64..2.0).prop_map(|(m, f, h)| PhysParams::new(m, f, h).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn propagation_is_unitary(g in gaussian(), p in params(), t in 0.01f64..5.0) {
        let out = propagate_gaussian(&g, t, &p).unwrap();
        prop_assert!((out.norm() - g.norm()).abs() <= 1e-12);
    }

    #[test]
    fn semigroup(g in gaussian(), p in params(), t in 0.01f64..5.0, frac in 0.001f64..0.999) {
        prop_assert!(compose_check(t, t * frac, &g, &p).unwrap() <= 1e-12);
    }

    #[test]
    fn kernel_modulus_is_constant(x in -5.0f64..5.0, xp in -5.0f64..5.0, t in 0.05f64..5.0, p in params()) {
        let want = (p.mass() / (2.0 * std::f64::consts::PI * p.hbar() * t)).sqrt();
        prop_assert!((green(x, xp, t, &p).unwrap().norm() - want).abs() <= 1e-14 * want);
    }

    #[test]
    fn integrals_of_motion_are_conserved(x in -3.0f64..3.0, v in -3.0f64..3.0, t in 0.0f64..5.0, p in params()) {
        let start = ClassicalPoint::new(x, v);
        let back = integrals_of_motion(trajectory(start, t, &p), t, &p);
        prop_assert!((back.x - x).abs() <= 1e-12 * (1.0 + t * t));
        prop_assert!((back.p - v).abs() <= 1e-12 * (1.0 + t));
    }

    #[test]
    fn expected_integrals_stay_constant(g in gaussian(), p in params(), t in 0.0f64..5.0) {
        let (m, f, h) = (p.mass(), p.field(), p.hbar());
        let m0 = g.moments(h);
        let mt = propagate_gaussian(&g, t, &p).unwrap().moments(h);
        let x0 = mt.mean_q - mt.mean_p * t / m + f * t * t / (2.0 * m);
        let p0 = mt.mean_p - f * t;
        prop_assert!((x0 - m0.mean_q).abs() <= 1e-10);
        prop_assert!((p0 - m0.mean_p).abs() <= 1e-10);
    }
}
