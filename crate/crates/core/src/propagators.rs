//! Closed-form propagator of a charge in a uniform field and the linear
//! integrals of motion that determine it.
//!
//! The kernel is
//!
//! ```text
//! G(x, x', t) = √(m / 2πiħt) · exp{ (i/ħ) S(x, x', t) }
//! S = m(x − x')²/2t + Ft(x + x')/2 − F²t³/24m
//! ```
//!
//! with `1/√i = e^{−iπ/4}`. Acting on a [`ComplexGaussian`] it produces
//! another complex Gaussian, which is how states are propagated exactly.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Axis;
use crate::states::{ComplexGaussian, PhysParams};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The Green function `G(x, x', t)` for fixed physical parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreenKernel {
    pub params: PhysParams,
}

impl GreenKernel {
    pub fn new(params: PhysParams) -> Self {
        Self { params }
    }

    /// Classical action along the path from `x'` to `x` in time `t`.
    pub fn action(&self, x: f64, xp: f64, t: f64) -> f64 {
        let (m, f) = (self.params.mass(), self.params.field());
        let d = x - xp;
        m * d * d / (2.0 * t) + f * t * (x + xp) / 2.0 - f * f * t * t * t / (24.0 * m)
    }

    /// `√(m / 2πiħt)` on the principal branch.
    pub fn prefactor(&self, t: f64) -> Result<Complex64> {
        if t == 0.0 {
            return Err(Error::DeltaLimit);
        }
        let (m, hbar) = (self.params.mass(), self.params.hbar());
        Ok(Complex64::new(0.0, -m / (2.0 * PI * hbar * t)).sqrt())
    }

    pub fn eval(&self, x: f64, xp: f64, t: f64) -> Result<Complex64> {
        let c = self.prefactor(t)?;
        Ok(c * Complex64::from_polar(1.0, self.action(x, xp, t) / self.params.hbar()))
    }
}

/// `G(x, x', t)`; `t = 0` is the delta-function limit and is rejected.
pub fn green(x: f64, xp: f64, t: f64, params: &PhysParams) -> Result<Complex64> {
    GreenKernel::new(*params).eval(x, xp, t)
}

/// A point `(x, p)` of classical phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalPoint {
    pub x: f64,
    pub p: f64,
}

impl ClassicalPoint {
    pub fn new(x: f64, p: f64) -> Self {
        Self { x, p }
    }
}

/// Initial phase-space point `(x₀, p₀) = (x − pt/m + Ft²/2m, p − Ft)` of the
/// classical trajectory passing through `pt` at time `t`.
pub fn integrals_of_motion(pt: ClassicalPoint, t: f64, params: &PhysParams) -> ClassicalPoint {
    let (m, f) = (params.mass(), params.field());
    ClassicalPoint {
        x: pt.x - pt.p * t / m + f * t * t / (2.0 * m),
        p: pt.p - f * t,
    }
}

/// Forward classical flow, the inverse of [`integrals_of_motion`].
pub fn trajectory(start: ClassicalPoint, t: f64, params: &PhysParams) -> ClassicalPoint {
    let (m, f) = (params.mass(), params.field());
    ClassicalPoint {
        x: start.x + start.p * t / m + f * t * t / (2.0 * m),
        p: start.p + f * t,
    }
}

/// Exact evolution of a Gaussian state: `∫ G(x, x', t) g(x') dx'` carried
/// out analytically.
pub fn propagate_gaussian(g: &ComplexGaussian, t: f64, params: &PhysParams) -> Result<ComplexGaussian> {
    if !(g.a.re < 0.0) {
        return Err(Error::Domain(format!("propagate_gaussian needs Re(a) < 0, got {}", g.a)));
    }
    if !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite, got {t}")));
    }
    let (m, f, hbar) = (params.mass(), params.field(), params.hbar());
    // D = 1 − 2iħat/m stays in one open half-plane for t ≠ 0, so the
    // principal root is continuous in t.
    let d = Complex64::new(1.0, 0.0) - 2.0 * I * hbar * g.a * t / m;
    if d.norm() == 0.0 {
        return Err(Error::SingularTime(format!("D vanished at t = {t}")));
    }
    let beta = I * (f * t / (2.0 * hbar));
    let gamma = -f * f * t * t * t / (24.0 * m * hbar);
    let shifted = g.b + beta;

    let a = g.a / d;
    let b = beta + shifted / d;
    let constant = I * gamma + I * (hbar * t) * shifted * shifted / (2.0 * m * d);
    let n = g.n * constant.exp() / d.sqrt();
    Ok(ComplexGaussian { n, a, b })
}

/// Largest pointwise difference between propagating `g` for `t` in one step
/// and in the two steps `tau`, `t − tau`.
pub fn compose_check(t: f64, tau: f64, g: &ComplexGaussian, params: &PhysParams) -> Result<f64> {
    if !(0.0 < tau && tau < t) {
        return Err(Error::Domain(format!("need 0 < tau < t, got tau = {tau}, t = {t}")));
    }
    let direct = propagate_gaussian(g, t, params)?;
    let split = propagate_gaussian(&propagate_gaussian(g, tau, params)?, t - tau, params)?;
    let grid = reference_grid(&direct, params.hbar());
    Ok(grid
        .points()
        .into_iter()
        .map(|x| (direct.eval(x) - split.eval(x)).norm())
        .fold(0.0, f64::max))
}

/// 513 points over the mean ± 8σ of the state's position density.
pub(crate) fn reference_grid(g: &ComplexGaussian, hbar: f64) -> Axis {
    let m = g.moments(hbar);
    let half = 8.0 * m.var_q.sqrt();
    Axis::linspace(m.mean_q - half, m.mean_q + half, 513).expect("finite gaussian moments")
}

/// Residuals of the two first-order equations the integrals of motion
/// impose on the kernel,
///
/// ```text
/// (x + (iħt/m) ∂ₓ + Ft²/2m) G = x' G
/// (iħ ∂ₓ + Ft) G = −iħ ∂_{x'} G
/// ```
///
/// evaluated on `x_grid` with five-point centered differences
/// whose step shrinks with the local phase gradient. Returns the larger
/// of the two maximum absolute residuals.
pub fn green_pde_residual(x_grid: &Axis, xp: f64, t: f64, params: &PhysParams) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::DeltaLimit);
    }
    let kernel = GreenKernel::new(*params);
    let (m, f, hbar) = (params.mass(), params.field(), params.hbar());
    let span = (x_grid.start - xp).abs().max((x_grid.end() - xp).abs()).max(1e-300);
    let max_spacing = 0.2 * PI * hbar * t.abs() / (m * span);
    if x_grid.step > max_spacing {
        return Err(Error::Resolution(format!(
            "grid spacing {:.3e} exceeds {:.3e} needed to follow the kernel phase at t = {t}",
            x_grid.step, max_spacing
        )));
    }

    let mut worst: f64 = 0.0;
    for x in x_grid.points() {
        // local wavenumber plus the scale set by the phase curvature m/ħt
        let k = m * (x - xp).abs() / (hbar * t.abs())
            + f * t.abs() / (2.0 * hbar)
            + (m / (hbar * t.abs())).sqrt();
        let h = 0.02 / (1.0 + k);
        let g = kernel.eval(x, xp, t)?;
        let dx = five_point(|s| kernel.eval(x + s, xp, t), h)?;
        let dxp = five_point(|s| kernel.eval(x, xp + s, t), h)?;

        let first = (x + f * t * t / (2.0 * m) - xp) * g + I * (hbar * t / m) * dx;
        let second = I * hbar * dx + f * t * g + I * hbar * dxp;
        worst = worst.max(first.norm()).max(second.norm());
    }
    Ok(worst)
}

fn five_point(f: impl Fn(f64) -> Result<Complex64>, h: f64) -> Result<Complex64> {
    Ok((f(-2.0 * h)? - 8.0 * f(-h)? + 8.0 * f(h)? - f(2.0 * h)?) / (12.0 * h))
}
