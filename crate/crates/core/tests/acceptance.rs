//! One PASS/FAIL line per acceptance criterion, with the residual, the
//! pinned tolerance and the wall time against its budget.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the table.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use phasetomo::grid::Axis;
use phasetomo::oracle::{damped_quadrature, QuadratureSpec, Window};
use phasetomo::phasespace::{
    correspondence_residual, gaussian_wigner, moyal_evolve_points, wigner_from_psi, wigner_stationary,
};
use phasetomo::propagators::{compose_check, green, green_pde_residual, propagate_gaussian};
use phasetomo::specfun::airy_phi;
use phasetomo::states::{gaussian_ground, psi_stationary, ComplexGaussian, PhysParams, StationaryState};
use phasetomo::tomography::{
    chirp_grid, gaussian_tomogram, tomogram_from_psi, tomogram_from_wigner, tomogram_stationary,
    tomographic_pde_residual, tomographic_propagate, TomogramSlice,
};
use phasetomo::verify::{fbp_error, oracle_deviation, windowed_stationary_tomogram};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// The anchor value as printed in the criterion.
const PHI_ZERO_LITERAL: f64 = 0.629_269_518_5;
/// Γ(2/3).
const GAMMA_TWO_THIRDS: f64 = 1.354_117_939_426_400_4;

struct Line {
    id: &'static str,
    what: &'static str,
    residual: f64,
    tol: f64,
    elapsed: Duration,
    budget: Duration,
}

impl Line {
    fn passed(&self) -> bool {
        self.residual <= self.tol && self.elapsed <= self.budget
    }
}

struct Table(Vec<Line>);

impl Table {
    fn run(&mut self, id: &'static str, what: &'static str, tol: f64, budget_s: u64, f: impl FnOnce() -> f64) {
        let start = Instant::now();
        let residual = f();
        let line = Line {
            id,
            what,
            residual,
            tol,
            elapsed: start.elapsed(),
            budget: Duration::from_secs(budget_s),
        };
        println!(
            "{} {:<4} {:<46} residual {:.3e} tol {:.0e} time {:.2}s / {}s",
            if line.passed() { "PASS" } else { "FAIL" },
            line.id,
            line.what,
            line.residual,
            line.tol,
            line.elapsed.as_secs_f64(),
            budget_s
        );
        self.0.push(line);
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()))
}

fn unit_angles(rng: &mut StdRng, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| {
            let theta: f64 = rng.gen_range(0.0..PI);
            (theta.cos(), theta.sin())
        })
        .collect()
}

fn slice_of(g: &ComplexGaussian, mu: f64, nu: f64, out: &Axis, p: &PhysParams) -> TomogramSlice {
    let m = g.moments(p.hbar());
    let (sq, sp) = (m.var_q.sqrt(), m.var_p.sqrt());
    let max_step = (sq / 20.0).min(PI * p.hbar() / (4.0 * (m.mean_p.abs() + 10.0 * sp)));
    let axis = chirp_grid(m.mean_q, 12.0 * sq, max_step, mu, nu, p.hbar()).unwrap();
    tomogram_from_psi(&g.sample(&axis), &axis, mu, nu, out, p).unwrap()
}

#[test]
fn acceptance() {
    let p = PhysParams::natural();
    let ground = gaussian_ground(1.0, &p).unwrap();
    let mut table = Table(Vec::new());

    // 1. Airy anchor
    table.run("1a", "Φ(0) against the printed anchor", 1e-10, 1, || {
        (airy_phi(0.0).unwrap().value - PHI_ZERO_LITERAL).abs()
    });
    table.run("1b", "Φ(0) against √π 3^(-2/3) / Γ(2/3)", 1e-10, 1, || {
        let exact = PI.sqrt() * 3f64.powf(-2.0 / 3.0) / GAMMA_TWO_THIRDS;
        (airy_phi(0.0).unwrap().value - exact).abs()
    });
    table.run("1c", "Φ'' − xΦ on 241 points of [−8, 4]", 1e-6, 1, || {
        let h = 5e-3;
        Axis::linspace(-8.0, 4.0, 241)
            .unwrap()
            .points()
            .iter()
            .map(|&x| {
                let f = |d: f64| airy_phi(x + d).unwrap().value;
                let d2 = (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f(0.0) + 16.0 * f(-h) - f(-2.0 * h)) / (12.0 * h * h);
                (d2 - x * f(0.0)).abs()
            })
            .fold(0.0, f64::max)
    });

    // 2. Green function against Crank–Nicolson, and the free reduction
    table.run("2a", "exact propagation vs Crank–Nicolson, L2", 1e-4, 60, || {
        oracle_deviation(&p, 1.0, 1.0).unwrap()
    });
    table.run("2b", "F = 0 kernel equals the free kernel", 0.0, 60, || {
        let free = p.with_field(0.0).unwrap();
        let mut worst: f64 = 0.0;
        for (x, xp, t) in [(0.0, 0.0, 1.0), (1.0, -0.5, 0.3), (-2.0, 3.0, 2.0), (0.7, 0.7, 4.0)] {
            let d: f64 = x - xp;
            let want = Complex64::new(0.0, -1.0 / (2.0 * PI * t)).sqrt() * Complex64::from_polar(1.0, d * d / (2.0 * t));
            worst = worst.max((green(x, xp, t, &free).unwrap() - want).norm());
        }
        worst
    });

    // 3. semigroup
    table.run("3", "composition over 20 random (t, τ)", 1e-12, 1, || {
        let mut rng = StdRng::seed_from_u64(3);
        (0..20)
            .map(|_| {
                let t = rng.gen_range(0.01..=5.0);
                let tau = t * rng.gen_range(0.001..0.999);
                compose_check(t, tau, &ground, &p).unwrap()
            })
            .fold(0.0, f64::max)
    });

    // 4. kernel PDEs
    table.run("4", "kernel PDE residual, 4001-point windows", 1e-6, 5, || {
        let mut worst: f64 = 0.0;
        for t in [0.1, 1.0] {
            for xp in [0.0, 1.0] {
                let grid = Axis::linspace(xp - 2.0, xp + 2.0, 4001).unwrap();
                worst = worst.max(green_pde_residual(&grid, xp, t, &p).unwrap());
            }
        }
        worst
    });

    // 5. Schrödinger → Wigner against Wigner → Moyal
    table.run("5", "consistency triangle at t = 0.5, 1", 1e-6, 30, || {
        let w0 = gaussian_wigner(&ground, &p).unwrap();
        let x = Axis::linspace(-16.0, 16.0, 1024).unwrap();
        let q = Axis::linspace(-3.0, 4.0, 57).unwrap();
        let k = Axis::linspace(-3.0, 4.5, 61).unwrap();
        let mut worst: f64 = 0.0;
        for t in [0.5, 1.0] {
            let psi = propagate_gaussian(&ground, t, &p).unwrap().sample(&x);
            let grid = wigner_from_psi(&psi, &x, &q, &k, &p).unwrap();
            for i in 1..q.len - 1 {
                for j in 1..k.len - 1 {
                    let want = moyal_evolve_points(|a, b| w0.eval(a, b), q.at(i), k.at(j), t, &p);
                    worst = worst.max((grid.at(i, j) - want).abs());
                }
            }
        }
        worst
    });

    // 6. correspondence rules
    table.run("6", "correspondence rules, ground and displaced", 1e-6, 10, || {
        let displaced = ComplexGaussian::normalized(Complex64::new(-0.5, 0.2), Complex64::new(0.5, 0.0)).unwrap();
        correspondence_residual(&ground, &p)
            .unwrap()
            .max(correspondence_residual(&displaced, &p).unwrap())
    });

    // 7. tomograms from ψ and from W
    let out = Axis::linspace(-6.0, 6.0, 241).unwrap();
    table.run("7a", "dual path at 5 random unit (μ, ν)", 1e-5, 30, || {
        let x = Axis::linspace(-16.0, 16.0, 1024).unwrap();
        let axis = Axis::linspace(-8.0, 8.0, 321).unwrap();
        let w = wigner_from_psi(&ground.sample(&x), &x, &axis, &axis, &p).unwrap();
        unit_angles(&mut StdRng::seed_from_u64(7), 5)
            .into_iter()
            .map(|(mu, nu)| {
                let a = slice_of(&ground, mu, nu, &out, &p);
                let b = tomogram_from_wigner(&w, mu, nu, &out, 1.0).unwrap();
                max_abs_diff(&a.values, &b.values)
            })
            .fold(0.0, f64::max)
    });
    let evolved = propagate_gaussian(&ground, 0.5, &p).unwrap();
    table.run("7b", "slice normalization", 1e-6, 30, || {
        let wide = Axis::linspace(-12.0, 12.0, 481).unwrap();
        unit_angles(&mut StdRng::seed_from_u64(8), 12)
            .into_iter()
            .map(|(mu, nu)| (slice_of(&evolved, mu, nu, &wide, &p).integral() - 1.0).abs())
            .fold(0.0, f64::max)
    });
    table.run("7c", "homogeneity at λ = 0.5, 2, −1", 1e-6, 30, || {
        let (mu, nu) = (0.6, 0.8);
        let base = slice_of(&evolved, mu, nu, &out, &p);
        let mut worst: f64 = 0.0;
        for lambda in [0.5, 2.0, -1.0] {
            let scaled = Axis {
                start: out.start * lambda,
                step: out.step * lambda,
                len: out.len,
            };
            let s = slice_of(&evolved, lambda * mu, lambda * nu, &scaled, &p);
            let rescaled: Vec<f64> = s.values.iter().map(|v| v * lambda.abs()).collect();
            worst = worst.max(max_abs_diff(&rescaled, &base.values));
        }
        worst
    });

    // 8. inverse Radon
    table.run("8a", "back-projection, ground state", 1e-3, 60, || fbp_error(&ground, &p).unwrap());
    table.run("8b", "back-projection, evolved anisotropic state", 3e-3, 60, || {
        fbp_error(&propagate_gaussian(&ground, 1.0, &p).unwrap(), &p).unwrap()
    });

    // 9. tomographic evolution
    table.run("9a", "tomogram flow vs propagated ψ", 1e-5, 30, || {
        let mut worst: f64 = 0.0;
        for t in [0.5, 1.0] {
            let gt = propagate_gaussian(&ground, t, &p).unwrap();
            for (mu, nu) in unit_angles(&mut StdRng::seed_from_u64(9), 4) {
                let s = slice_of(&gt, mu, nu, &out, &p);
                for (i, v) in s.values.iter().enumerate() {
                    let w = tomographic_propagate(
                        |a, b, c| gaussian_tomogram(&ground, a, b, c, 1.0),
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
        worst
    });
    table.run("9b", "tomographic PDE at 20 points", 1e-5, 30, || {
        let mut rng = StdRng::seed_from_u64(10);
        let points: Vec<(f64, f64, f64)> = unit_angles(&mut rng, 20)
            .into_iter()
            .map(|(mu, nu)| (rng.gen_range(-2.0..2.0), mu, nu))
            .collect();
        tomographic_pde_residual(&ground, &points, 0.5, &p).unwrap()
    });

    // 10. stationary state
    let s = StationaryState::new(1.0, p).unwrap();
    table.run("10a", "stationary tomogram vs chirp quadrature", 1e-3, 120, || {
        let peak = (0..=400)
            .map(|k| tomogram_stationary(-8.0 + 0.04 * k as f64, 1.0, 0.0, &s).unwrap())
            .fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        for (mu, nu) in [(1.0, 0.0), (1.0, 1.0)] {
            for x in [-1.0, 0.0, 1.0] {
                let exact = tomogram_stationary(x, mu, nu, &s).unwrap();
                if exact <= 1e-3 * peak {
                    continue;
                }
                let quad = windowed_stationary_tomogram(&s, mu, nu, x, &p).unwrap();
                worst = worst.max((quad - exact).abs() / exact);
            }
        }
        worst
    });
    table.run("10b", "stationary Wigner vs regularized quadrature", 1e-2, 120, || {
        let u = Axis::linspace(-30.0, 30.0, 6001).unwrap();
        let spec = QuadratureSpec {
            window: Window::PlanckTaper { fraction: 0.2 },
            damping: 0.0,
            cesaro_widths: vec![40.0, 50.0, 60.0],
            tolerance: None,
        };
        let mut worst: f64 = 0.0;
        for (q, k) in [(0.0, 0.5), (-0.5, 0.0), (1.0, 1.0)] {
            let f: Vec<Complex64> = u
                .points()
                .iter()
                .map(|&u| Complex64::from_polar(psi_stationary(q + u / 2.0, &s) * psi_stationary(q - u / 2.0, &s), -k * u))
                .collect();
            let quad = damped_quadrature(&f, &u, &spec).unwrap().value.re;
            let exact = wigner_stationary(q, k, &s);
            worst = worst.max((quad - exact).abs() / exact.abs());
        }
        worst
    });

    // 11. the CLI verification suite
    table.run("11", "`phasetomo verify all` exit status", 0.0, 300, || {
        let run = Command::new(env!("CARGO_BIN_EXE_phasetomo"))
            .args(["verify", "all"])
            .output()
            .unwrap();
        run.status.code().map_or(f64::INFINITY, |c| c as f64)
    });

    let failed: Vec<&str> = table.0.iter().filter(|l| !l.passed()).map(|l| l.id).collect();
    println!("{} of {} lines pass", table.0.len() - failed.len(), table.0.len());
    // The printed anchor differs from Φ(0) in the seventh digit; the closed
    // constant in 1b is the one the implementation meets.
    assert_eq!(failed, ["1a"], "unexpected acceptance failures");
}
