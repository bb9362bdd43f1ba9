//! Verification suites behind `phasetomo verify`. Each check reports a
//! residual and the tolerance it is held to; a suite passes when every
//! residual is within tolerance.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::Result;
use crate::grid::Axis;
use crate::io::SCHEMA_VERSION;
use crate::oracle::{damped_quadrature, evolve, GridState, OracleConfig, QuadratureSpec, Window};
use crate::phasespace::{
    correspondence_residual, gaussian_wigner, moyal_evolve_points, moyal_propagator_apply, wigner_from_psi,
    wigner_stationary,
};
use crate::propagators::{compose_check, green, green_pde_residual, propagate_gaussian};
use crate::specfun::{self, airy_phi};
use crate::states::{gaussian_ground, psi_stationary, ComplexGaussian, PhysParams, StationaryState};
use crate::tomography::{
    chirp_grid, gaussian_tomogram, tomogram_from_psi, tomogram_from_wigner, tomogram_stationary, tomographic_pde_residual,
    tomographic_propagate, wigner_from_tomogram, TomogramField, TomogramSlice,
};

/// Φ(0) = √π · 3^{−2/3} / Γ(2/3).
pub const PHI_AT_ZERO: f64 = 0.629_270_841_292_952_7;
/// First zero of Φ (and of Ai).
pub const FIRST_AIRY_ZERO: f64 = -2.338_107_410_459_767;

const SEED: u64 = 0x5eed_0fa1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Specfun,
    Green,
    Wigner,
    Tomography,
    All,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    /// `None` when the computation itself failed.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub suite: Suite,
    pub params: ParamsRecord,
    pub tolerance_override: Option<f64>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamsRecord {
    pub mass: f64,
    pub field: f64,
    pub hbar: f64,
}

impl From<&PhysParams> for ParamsRecord {
    fn from(p: &PhysParams) -> Self {
        Self {
            mass: p.mass(),
            field: p.field(),
            hbar: p.hbar(),
        }
    }
}

struct Runner {
    suite: &'static str,
    tol: Option<f64>,
    checks: Vec<Check>,
}

impl Runner {
    fn check(&mut self, name: &'static str, tolerance: f64, f: impl FnOnce() -> Result<f64>) {
        let tolerance = self.tol.unwrap_or(tolerance);
        let check = match f() {
            Ok(r) => Check {
                suite: self.suite,
                name,
                residual: Some(r),
                tolerance,
                passed: r <= tolerance,
                error: None,
            },
            Err(e) => Check {
                suite: self.suite,
                name,
                residual: None,
                tolerance,
                passed: false,
                error: Some(e.to_string()),
            },
        };
        log::info!("{}/{}: {:?} (tol {:e})", check.suite, check.name, check.residual, tolerance);
        self.checks.push(check);
    }
}

/// Runs `suite`; `tol` replaces every built-in tolerance when given.
pub fn run(suite: Suite, params: &PhysParams, tol: Option<f64>) -> Report {
    let mut checks = Vec::new();
    let wanted = |s: Suite| suite == Suite::All || suite == s;
    let mut go = |name: &'static str, body: fn(&mut Runner, &PhysParams)| {
        let mut r = Runner {
            suite: name,
            tol,
            checks: Vec::new(),
        };
        body(&mut r, params);
        checks.extend(r.checks);
    };
    if wanted(Suite::Specfun) {
        go("specfun", specfun_suite);
    }
    if wanted(Suite::Green) {
        go("green", green_suite);
    }
    if wanted(Suite::Wigner) {
        go("wigner", wigner_suite);
    }
    if wanted(Suite::Tomography) {
        go("tomography", tomography_suite);
    }
    Report {
        schema_version: SCHEMA_VERSION,
        suite,
        params: params.into(),
        tolerance_override: tol,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn specfun_suite(r: &mut Runner, _: &PhysParams) {
    r.check("phi_at_zero", 1e-10, || Ok((airy_phi(0.0)?.value - PHI_AT_ZERO).abs()));
    r.check("ode_residual", 1e-6, || {
        let h = 5e-3;
        let grid = Axis::linspace(-8.0, 4.0, 241)?;
        let mut worst: f64 = 0.0;
        for x in grid.points() {
            let f = |d: f64| specfun::phi(x + d);
            let second = (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h)) / (12.0 * h * h);
            worst = worst.max((second - x * f(0.0)).abs());
        }
        Ok(worst)
    });
    r.check("first_zero", 1e-10, || {
        let (mut lo, mut hi) = (-3.0, -2.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if specfun::phi(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok((0.5 * (lo + hi) - FIRST_AIRY_ZERO).abs())
    });
    r.check("branch_overlap", 1e-11, || {
        let mut worst: f64 = 0.0;
        for k in 0..=30 {
            let x = 6.0 + 0.05 * k as f64;
            worst = worst.max((specfun::series(x).value - specfun::asymptotic_decaying(x).value).abs());
        }
        for k in 0..=40 {
            let x = -10.0 + 0.05 * k as f64;
            worst = worst.max((specfun::series(x).value - specfun::asymptotic_oscillatory(x).value).abs());
        }
        Ok(worst)
    });
    r.check("decay_at_10", 1e-9, || Ok(airy_phi(10.0)?.value.abs()));
    r.check("monotone_positive_decay", 0.0, || {
        let mut violations = 0;
        let mut prev = specfun::phi(0.0);
        for k in 1..=1000 {
            let v = specfun::phi(0.01 * k as f64);
            if !(v > 0.0 && v < prev) {
                violations += 1;
            }
            prev = v;
        }
        Ok(violations as f64)
    });
}

fn random_gaussian(rng: &mut StdRng) -> Result<ComplexGaussian> {
    ComplexGaussian::normalized(
        Complex64::new(rng.gen_range(-2.0..-0.2), rng.gen_range(-1.0..1.0)),
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    )
}

fn green_suite(r: &mut Runner, params: &PhysParams) {
    let p = *params;
    r.check("semigroup", 1e-12, || {
        let mut rng = StdRng::seed_from_u64(SEED);
        let g = gaussian_ground(1.0, &p)?;
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let t = rng.gen_range(0.01..5.0);
            let tau = t * rng.gen_range(0.001..0.999);
            worst = worst.max(compose_check(t, tau, &g, &p)?);
        }
        Ok(worst)
    });
    r.check("kernel_pde", 1e-6, || {
        let mut worst: f64 = 0.0;
        for t in [0.1, 1.0] {
            for xp in [0.0, 1.0] {
                let grid = Axis::linspace(xp - 2.0, xp + 2.0, 4001)?;
                worst = worst.max(green_pde_residual(&grid, xp, t, &p)?);
            }
        }
        Ok(worst)
    });
    r.check("free_reduction", 0.0, || {
        let free = p.with_field(0.0)?;
        let (m, hbar) = (p.mass(), p.hbar());
        let mut worst: f64 = 0.0;
        for (x, xp, t) in [(0.0, 0.0, 1.0), (1.0, -0.5, 0.3), (-2.0, 3.0, 2.0)] {
            let c = Complex64::new(0.0, -m / (2.0 * PI * hbar * t)).sqrt();
            let d: f64 = x - xp;
            let want = c * Complex64::from_polar(1.0, (m * d * d / (2.0 * t)) / hbar);
            worst = worst.max((green(x, xp, t, &free)? - want).norm());
        }
        Ok(worst)
    });
    r.check("unitarity", 1e-12, || {
        let mut rng = StdRng::seed_from_u64(SEED + 1);
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let g = random_gaussian(&mut rng)?;
            for t in [0.1, 1.0, 5.0] {
                worst = worst.max((propagate_gaussian(&g, t, &p)?.norm() - g.norm()).abs());
            }
        }
        Ok(worst)
    });
    r.check("integrals_of_motion", 1e-10, || {
        let (m, f, hbar) = (p.mass(), p.field(), p.hbar());
        let g = random_gaussian(&mut StdRng::seed_from_u64(SEED + 2))?;
        let m0 = g.moments(hbar);
        let mut worst: f64 = 0.0;
        for t in [0.5, 1.0, 2.0, 5.0] {
            let mt = propagate_gaussian(&g, t, &p)?.moments(hbar);
            let x0 = mt.mean_q - mt.mean_p * t / m + f * t * t / (2.0 * m);
            let p0 = mt.mean_p - f * t;
            worst = worst.max((x0 - m0.mean_q).abs()).max((p0 - m0.mean_p).abs());
        }
        Ok(worst)
    });
    r.check("oracle_l2", 1e-4, || oracle_deviation(&p, 1.0, 1.0));
}

/// L² distance at time `t` between the exactly propagated ground state of
/// frequency `omega` and its Crank–Nicolson evolution on the default grid,
/// widened where the state would reach the boundary.
pub fn oracle_deviation(p: &PhysParams, omega: f64, t: f64) -> Result<f64> {
    let g = gaussian_ground(omega, p)?;
    let cfg = OracleConfig::covering(&g, t, p)?;
    let axis = cfg.axis()?;
    let out = evolve(&GridState::from_gaussian(&g, axis, *p), t, cfg.dt)?;
    Ok(out.l2_distance(&propagate_gaussian(&g, t, p)?.sample(&axis)))
}

fn wigner_suite(r: &mut Runner, params: &PhysParams) {
    let p = *params;
    let hbar = p.hbar();
    r.check("consistency_triangle", 1e-6, || {
        let g = gaussian_ground(1.0, &p)?;
        let w0 = gaussian_wigner(&g, &p)?;
        let x = Axis::linspace(-16.0, 16.0, 1024)?;
        let q = Axis::linspace(-3.0, 4.0, 57)?;
        let mom = Axis::linspace(-3.0, 4.5, 61)?;
        let mut worst: f64 = 0.0;
        for t in [0.5, 1.0] {
            let psi = propagate_gaussian(&g, t, &p)?.sample(&x);
            let grid = wigner_from_psi(&psi, &x, &q, &mom, &p)?;
            for i in 1..q.len - 1 {
                for j in 1..mom.len - 1 {
                    let exact = moyal_evolve_points(|a, b| w0.eval(a, b), q.at(i), mom.at(j), t, &p);
                    worst = worst.max((grid.at(i, j) - exact).abs());
                }
            }
        }
        Ok(worst)
    });
    r.check("correspondence_ground", 1e-6, || correspondence_residual(&gaussian_ground(1.0, &p)?, &p));
    r.check("correspondence_displaced", 1e-6, || {
        let g = ComplexGaussian::normalized(Complex64::new(-0.5, 0.2), Complex64::new(0.5, 0.0))?;
        correspondence_residual(&g, &p)
    });
    r.check("liouville", 1e-10, || {
        let mut rng = StdRng::seed_from_u64(SEED + 3);
        let w0 = gaussian_wigner(&gaussian_ground(1.0, &p)?, &p)?;
        let (m, f) = (p.mass(), p.field());
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let (q, mom, t) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(0.0..2.0));
            let (w, rate) = w0.evolved_with_rate(t, &p);
            let (v, vq, vp) = w.gradient(q, mom);
            let monomials = [q * q, q * mom, mom * mom, q, mom, 1.0];
            let vt = v * rate.iter().zip(monomials).map(|(a, b)| a * b).sum::<f64>();
            worst = worst.max((vt + mom / m * vq + f * vp).abs());
        }
        Ok(worst)
    });
    r.check("normalization", 1e-6, || {
        let g = propagate_gaussian(&gaussian_ground(1.0, &p)?, 0.7, &p)?;
        let x = Axis::linspace(-16.0, 16.0, 1024)?;
        let mom = g.moments(hbar);
        let q = Axis::linspace(mom.mean_q - 10.0, mom.mean_q + 10.0, 201)?;
        let pa = Axis::linspace(mom.mean_p - 10.0, mom.mean_p + 10.0, 201)?;
        Ok((wigner_from_psi(&g.sample(&x), &x, &q, &pa, &p)?.normalization(hbar) - 1.0).abs())
    });
    r.check("moyal_pullback", 1e-6, || {
        let w0 = gaussian_wigner(&gaussian_ground(1.0, &p)?, &p)?;
        let axis = Axis::linspace(-8.0, 8.0, 641)?;
        let t = 0.73;
        let out = moyal_propagator_apply(&w0.sample(axis, axis), t, &p)?;
        let mut worst: f64 = 0.0;
        for i in (80..561).step_by(4) {
            for j in (80..561).step_by(4) {
                let exact = moyal_evolve_points(|a, b| w0.eval(a, b), axis.at(i), axis.at(j), t, &p);
                worst = worst.max((out.at(i, j) - exact).abs());
            }
        }
        Ok(worst)
    });
    r.check("stationary_wigner_quadrature", 1e-2, || {
        let s = StationaryState::new(1.0, p)?;
        let u = Axis::linspace(-30.0, 30.0, 6001)?;
        let spec = QuadratureSpec {
            window: Window::PlanckTaper { fraction: 0.2 },
            damping: 0.0,
            cesaro_widths: vec![40.0, 50.0, 60.0],
            tolerance: None,
        };
        let mut worst: f64 = 0.0;
        for (q, mom) in [(0.0, 0.5), (-0.5, 0.0), (1.0, 1.0)] {
            let f: Vec<Complex64> = u
                .points()
                .iter()
                .map(|&u| {
                    let rho = psi_stationary(q + u / 2.0, &s) * psi_stationary(q - u / 2.0, &s);
                    Complex64::from_polar(rho, -mom * u / hbar)
                })
                .collect();
            let quad = damped_quadrature(&f, &u, &spec)?.value.re;
            let exact = wigner_stationary(q, mom, &s);
            worst = worst.max((quad - exact).abs() / exact.abs());
        }
        Ok(worst)
    });
}

fn unit_angles(rng: &mut StdRng, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| {
            let theta: f64 = rng.gen_range(0.0..PI);
            (theta.cos(), theta.sin())
        })
        .collect()
}

/// `tomogram_from_psi` of a Gaussian sampled on a grid adapted to `(μ, ν)`.
fn gaussian_slice(g: &ComplexGaussian, mu: f64, nu: f64, out: &Axis, p: &PhysParams) -> Result<TomogramSlice> {
    let hbar = p.hbar();
    let m = g.moments(hbar);
    let (sq, sp) = (m.var_q.sqrt(), m.var_p.sqrt());
    let max_step = (sq / 20.0).min(PI * hbar / (4.0 * (m.mean_p.abs() + 10.0 * sp)));
    let axis = chirp_grid(m.mean_q, 12.0 * sq, max_step, mu, nu, hbar)?;
    tomogram_from_psi(&g.sample(&axis), &axis, mu, nu, out, p)
}

fn tomography_suite(r: &mut Runner, params: &PhysParams) {
    let p = *params;
    let hbar = p.hbar();
    let x = Axis::linspace(-16.0, 16.0, 1024).expect("static axis");
    let out = Axis::linspace(-6.0, 6.0, 241).expect("static axis");
    let ground = gaussian_ground(1.0, &p);

    r.check("dual_path", 1e-5, || {
        let g = ground.clone()?;
        let psi = g.sample(&x);
        let grid_axis = Axis::linspace(-8.0, 8.0, 321)?;
        let w = wigner_from_psi(&psi, &x, &grid_axis, &grid_axis, &p)?;
        let mut worst: f64 = 0.0;
        for (mu, nu) in unit_angles(&mut StdRng::seed_from_u64(SEED + 4), 5) {
            let a = gaussian_slice(&g, mu, nu, &out, &p)?;
            let b = tomogram_from_wigner(&w, mu, nu, &out, hbar)?;
            for (u, v) in a.values.iter().zip(&b.values) {
                worst = worst.max((u - v).abs());
            }
        }
        Ok(worst)
    });
    r.check("slice_normalization", 1e-6, || {
        let g = propagate_gaussian(&ground.clone()?, 0.5, &p)?;
        let wide = Axis::linspace(-12.0, 12.0, 481)?;
        let mut worst: f64 = 0.0;
        for k in 0..12 {
            let theta = (k as f64 + 0.5) * PI / 12.0;
            let s = gaussian_slice(&g, theta.cos(), theta.sin(), &wide, &p)?;
            worst = worst.max((s.integral() - 1.0).abs());
        }
        Ok(worst)
    });
    r.check("homogeneity", 1e-6, || {
        let g = propagate_gaussian(&ground.clone()?, 0.5, &p)?;
        let (mu, nu) = (0.6, 0.8);
        let base = gaussian_slice(&g, mu, nu, &out, &p)?;
        let mut worst: f64 = 0.0;
        for lambda in [0.5, 2.0, -1.0] {
            let scaled_axis = Axis {
                start: out.start * lambda,
                step: out.step * lambda,
                len: out.len,
            };
            let s = gaussian_slice(&g, lambda * mu, lambda * nu, &scaled_axis, &p)?;
            for (a, b) in s.values.iter().zip(&base.values) {
                worst = worst.max((a * lambda.abs() - b).abs());
            }
        }
        Ok(worst)
    });
    r.check("nonnegativity", 1e-8, || {
        let g = propagate_gaussian(&ground.clone()?, 1.0, &p)?;
        let mut worst: f64 = 0.0;
        for k in 0..18 {
            let theta = (k as f64 + 0.25) * PI / 18.0;
            let s = gaussian_slice(&g, theta.cos(), theta.sin(), &out, &p)?;
            worst = worst.max(-s.min());
        }
        let s = StationaryState::new(1.0, p)?;
        for k in 0..=40 {
            let v = tomogram_stationary(-4.0 + 0.2 * k as f64, 0.8, 0.6, &s)?;
            worst = worst.max(-v);
        }
        Ok(worst.max(0.0))
    });
    r.check("inverse_radon_ground", 1e-3, || fbp_error(&ground.clone()?, &p));
    r.check("inverse_radon_evolved", 3e-3, || {
        fbp_error(&propagate_gaussian(&ground.clone()?, 1.0, &p)?, &p)
    });
    r.check("evolution_consistency", 1e-5, || {
        let g = ground.clone()?;
        let mut worst: f64 = 0.0;
        for t in [0.5, 1.0] {
            let gt = propagate_gaussian(&g, t, &p)?;
            for (mu, nu) in unit_angles(&mut StdRng::seed_from_u64(SEED + 5), 4) {
                let s = gaussian_slice(&gt, mu, nu, &out, &p)?;
                for (i, v) in s.values.iter().enumerate() {
                    let w = tomographic_propagate(
                        |a, b, c| gaussian_tomogram(&g, a, b, c, hbar),
                        out.at(i),
                        mu,
                        nu,
                        t,
                        &p,
                    );
                    worst = worst.max((v - w).abs());
                }
            }
        }
        Ok(worst)
    });
    r.check("pde_residual", 1e-5, || {
        let mut rng = StdRng::seed_from_u64(SEED + 6);
        let points: Vec<(f64, f64, f64)> = unit_angles(&mut rng, 20)
            .into_iter()
            .map(|(mu, nu)| (rng.gen_range(-2.0..2.0), mu, nu))
            .collect();
        tomographic_pde_residual(&ground.clone()?, &points, 0.5, &p)
    });
    r.check("stationary_flow", 1e-3, || {
        let s = StationaryState::new(1.0, p)?;
        let w0 = |a: f64, b: f64, c: f64| tomogram_stationary(a, b, c, &s).unwrap_or(f64::NAN);
        let mut worst: f64 = 0.0;
        for (xv, mu, nu) in [(0.0, 1.0, 0.0), (-1.0, 0.8, 0.6), (0.5, -0.6, 0.8), (1.5, 0.6, -0.8)] {
            let before = w0(xv, mu, nu);
            for t in [0.5, 1.0, 2.0] {
                let after = tomographic_propagate(w0, xv, mu, nu, t, &p);
                // a stationary tomogram is a fixed point of the flow
                worst = worst.max((after - before).abs() / before.abs().max(1e-3));
            }
        }
        Ok(worst)
    });
    r.check("stationary_tomogram_quadrature", 1e-3, || {
        let s = StationaryState::new(1.0, p)?;
        let mut worst: f64 = 0.0;
        for (mu, nu) in [(1.0, 0.0), (1.0, 1.0)] {
            for xv in [-1.0, 0.0, 1.0] {
                let quad = windowed_stationary_tomogram(&s, mu, nu, xv, &p)?;
                let exact = tomogram_stationary(xv, mu, nu, &s)?;
                worst = worst.max((quad - exact).abs() / exact);
            }
        }
        Ok(worst)
    });
}

/// Reconstruction error of filtered back-projection for a Gaussian state:
/// 180 angles, 512 `X` samples, relative to the peak of the exact `W`.
pub fn fbp_error(g: &ComplexGaussian, p: &PhysParams) -> Result<f64> {
    let hbar = p.hbar();
    let w = gaussian_wigner(g, p)?;
    let mom = g.moments(hbar);
    let fine_q = Axis::linspace(mom.mean_q - 10.0, mom.mean_q + 10.0, 401)?;
    let fine_p = Axis::linspace(mom.mean_p - 10.0, mom.mean_p + 10.0, 401)?;
    let centre = (mom.mean_q.powi(2) + mom.mean_p.powi(2)).sqrt();
    let reach = 6.0 + centre;
    let x_axis = Axis::linspace(-reach, reach, 512)?;
    let field = TomogramField::from_wigner(&w.sample(fine_q, fine_p), TomogramField::angles(180), x_axis, hbar)?;
    let q = Axis::linspace(mom.mean_q - 4.0, mom.mean_q + 4.0, 81)?;
    let pa = Axis::linspace(mom.mean_p - 4.0, mom.mean_p + 4.0, 81)?;
    let rec = wigner_from_tomogram(&field, &q, &pa, hbar)?;
    let exact = w.sample(q, pa);
    let diff = rec
        .values
        .iter()
        .zip(&exact.values)
        .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()));
    Ok(diff / exact.max_abs())
}

/// Tomogram of the stationary state by chirp quadrature of a right-tapered
/// window of `ψ_E`, averaged over several window lengths.
pub fn windowed_stationary_tomogram(s: &StationaryState, mu: f64, nu: f64, x: f64, p: &PhysParams) -> Result<f64> {
    // start deep in the classically forbidden side, where ψ has died out
    let start = s.turning_point() - 11.0 / s.alpha().abs();
    let lengths = [40.0, 50.0, 60.0, 70.0];
    let mut acc = 0.0;
    for len in lengths {
        let axis = Axis::linspace(start, start + len, (len / 0.01) as usize + 1)?;
        let ramp = 0.3 * len;
        let psi: Vec<Complex64> = axis
            .points()
            .iter()
            .map(|&y| {
                let d = start + len - y;
                let w = if d >= ramp {
                    1.0
                } else if d <= 0.0 {
                    0.0
                } else {
                    1.0 / (1.0 + (ramp / d - ramp / (ramp - d)).exp())
                };
                Complex64::new(w * psi_stationary(y, s), 0.0)
            })
            .collect();
        let target = Axis {
            start: x,
            step: 1.0,
            len: 1,
        };
        acc += tomogram_from_psi(&psi, &axis, mu, nu, &target, p)?.values[0];
    }
    Ok(acc / lengths.len() as f64)
}
