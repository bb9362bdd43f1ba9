//! Physical parameters and the two families of states used throughout the
//! crate: Airy stationary states of the linear potential and complex
//! Gaussian wave packets `n·exp(a x² + b x)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::Axis;
use crate::specfun;

/// Mass `m`, field strength `F` and Planck constant `ħ` of the Hamiltonian
/// `H = p²/2m − F x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysParams {
    mass: f64,
    field: f64,
    hbar: f64,
}

impl PhysParams {
    pub fn new(mass: f64, field: f64, hbar: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Domain(format!("mass must be positive, got {mass}")));
        }
        if !(field.is_finite() && field >= 0.0) {
            return Err(Error::Domain(format!("field must be non-negative, got {field}")));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { mass, field, hbar })
    }

    /// `m = F = ħ = 1`.
    pub const fn natural() -> Self {
        Self {
            mass: 1.0,
            field: 1.0,
            hbar: 1.0,
        }
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn field(&self) -> f64 {
        self.field
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Same mass and ħ with a different field.
    pub fn with_field(&self, field: f64) -> Result<Self> {
        Self::new(self.mass, field, self.hbar)
    }
}

impl Default for PhysParams {
    fn default() -> Self {
        Self::natural()
    }
}

/// Energy eigenstate `ψ_E(x) = A Φ(αx + ε)` of the linear potential,
/// normalized to `δ(E − E')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryState {
    energy: f64,
    params: PhysParams,
    norm: f64,
    alpha: f64,
    epsilon: f64,
}

impl StationaryState {
    pub fn new(energy: f64, params: PhysParams) -> Result<Self> {
        if !energy.is_finite() {
            return Err(Error::Domain(format!("energy must be finite, got {energy}")));
        }
        let (m, f, hbar) = (params.mass, params.field, params.hbar);
        if f <= 0.0 {
            return Err(Error::Domain(
                "stationary Airy states need a positive field".into(),
            ));
        }
        let norm = (2.0 * m).cbrt() / (PI.sqrt() * f.powf(1.0 / 6.0) * hbar.powf(2.0 / 3.0));
        let alpha = -(2.0 * m * f / (hbar * hbar)).cbrt();
        Ok(Self {
            energy,
            params,
            norm,
            alpha,
            epsilon: alpha * energy / f,
        })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn params(&self) -> PhysParams {
        self.params
    }

    /// Normalization constant `A = (2m)^{1/3} / (π^{1/2} F^{1/6} ħ^{2/3})`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// `α = −(2mF/ħ²)^{1/3}`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `ε = αE/F`.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Classical turning point `x = −E/F` where the Airy argument vanishes.
    pub fn turning_point(&self) -> f64 {
        -self.energy / self.params.field
    }
}

/// `ψ_E(x) = A Φ(αx + ε)`.
pub fn psi_stationary(x: f64, s: &StationaryState) -> f64 {
    s.norm * specfun::phi(s.alpha * x + s.epsilon)
}

/// Gaussian pure state `n·exp(a x² + b x)` with `Re a < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexGaussian {
    pub n: Complex64,
    pub a: Complex64,
    pub b: Complex64,
}

/// First and second moments of a Gaussian state in phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Moments {
    pub mean_q: f64,
    pub mean_p: f64,
    pub var_q: f64,
    pub var_p: f64,
    pub cov_qp: f64,
}

impl ComplexGaussian {
    pub fn new(n: Complex64, a: Complex64, b: Complex64) -> Result<Self> {
        if !(a.re < 0.0) || !a.im.is_finite() || !(b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::Domain(format!(
                "gaussian needs Re(a) < 0 and finite coefficients, got a = {a}, b = {b}"
            )));
        }
        Ok(Self { n, a, b })
    }

    /// The unit-norm Gaussian with the given exponent coefficients and a
    /// real positive prefactor.
    pub fn normalized(a: Complex64, b: Complex64) -> Result<Self> {
        let g = Self::new(Complex64::new(1.0, 0.0), a, b)?;
        let n = 1.0 / g.norm().sqrt();
        Ok(Self { n: n.into(), ..g })
    }

    /// `∫|ψ|² dx = |n|² √(π/(−2 Re a)) exp(Re(b)²/(−2 Re a))`.
    pub fn norm(&self) -> f64 {
        let ar = self.a.re;
        self.n.norm_sqr() * (PI / (-2.0 * ar)).sqrt() * (self.b.re * self.b.re / (-2.0 * ar)).exp()
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        gaussian_eval(self, x)
    }

    pub fn sample(&self, axis: &Axis) -> Vec<Complex64> {
        (0..axis.len).map(|i| self.eval(axis.at(i))).collect()
    }

    /// Pointwise product, which stays in the family.
    pub fn product(&self, other: &ComplexGaussian) -> ComplexGaussian {
        ComplexGaussian {
            n: self.n * other.n,
            a: self.a + other.a,
            b: self.b + other.b,
        }
    }

    /// Position and momentum moments of the normalized state.
    pub fn moments(&self, hbar: f64) -> Moments {
        let (ar, ai) = (self.a.re, self.a.im);
        let mean_q = -self.b.re / (2.0 * ar);
        let var_q = -1.0 / (4.0 * ar);
        // momentum density: p = ħ(2 a_i x + b_i) plus an independent part of variance −ħ² a_r
        let mean_p = hbar * (2.0 * ai * mean_q + self.b.im);
        let var_p = hbar * hbar * self.a.norm_sqr() / (-ar);
        let cov_qp = 2.0 * hbar * ai * var_q;
        Moments {
            mean_q,
            mean_p,
            var_q,
            var_p,
            cov_qp,
        }
    }
}

/// Ground state of a harmonic trap of frequency `omega`,
/// `(mω/πħ)^{1/4} exp(−(mω/2ħ) x²)`.
pub fn gaussian_ground(omega: f64, params: &PhysParams) -> Result<ComplexGaussian> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Domain(format!("omega must be positive, got {omega}")));
    }
    let k = params.mass * omega / params.hbar;
    ComplexGaussian::new(
        Complex64::new((k / PI).powf(0.25), 0.0),
        Complex64::new(-k / 2.0, 0.0),
        Complex64::new(0.0, 0.0),
    )
}

pub fn gaussian_eval(g: &ComplexGaussian, x: f64) -> Complex64 {
    g.n * (g.a * x * x + g.b * x).exp()
}

/// `∫ exp(a x² + b x) dx = √(π/(−a)) exp(−b²/(4a))`, principal branch of the
/// root. `Re a = 0` with `Im a ≠ 0` is read as a Fresnel integral.
pub fn complex_gaussian_integral(a: Complex64, b: Complex64) -> Result<Complex64> {
    if a.re > 0.0 || (a.re == 0.0 && a.im == 0.0) {
        return Err(Error::Divergent(format!(
            "gaussian integral needs Re(a) < 0 or a purely imaginary, got a = {a}"
        )));
    }
    let minus_a = -a;
    Ok((Complex64::from(PI) / minus_a).sqrt() * (-b * b / (4.0 * a)).exp())
}
