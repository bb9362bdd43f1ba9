//! The Airy function in the normalization
//!
//! ```text
//! Φ(x) = (1/√π) ∫₀^∞ cos(u³/3 + ux) du = √π · Ai(x)
//! ```
//!
//! Evaluation uses the two Maclaurin solutions of `y'' = xy` summed in
//! double-double arithmetic on `[NEG_SWITCH, POS_SWITCH]`, the exponentially
//! decaying asymptotic expansion to the right of that interval and the
//! oscillatory one to the left.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this argument the oscillatory asymptotic expansion is used.
pub const NEG_SWITCH: f64 = -9.0;
/// Above this argument the decaying asymptotic expansion is used.
pub const POS_SWITCH: f64 = 6.5;

// Ai(0) and -Ai'(0) as unevaluated sums hi + lo.
const AI0: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
const MINUS_AIP0: Dd = Dd::new(0.2588194037928068, -2.522243111610832e-17);
const SQRT_PI: Dd = Dd::new(1.772453850905516, -7.666586499825799e-17);

/// Value of Φ together with a bound on its absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryEval {
    pub value: f64,
    pub abs_error_estimate: f64,
}

/// Φ(x) = √π · Ai(x).
pub fn airy_phi(x: f64) -> Result<AiryEval> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("airy_phi argument must be finite, got {x}")));
    }
    Ok(if x > POS_SWITCH {
        asymptotic_decaying(x)
    } else if x < NEG_SWITCH {
        asymptotic_oscillatory(x)
    } else {
        series(x)
    })
}

/// Φ''(x), taken from the Airy equation `Φ'' = xΦ`.
pub fn airy_phi_second_derivative(x: f64) -> Result<f64> {
    Ok(x * airy_phi(x)?.value)
}

/// Shorthand for `airy_phi(x)?.value` on arguments already known to be finite.
pub(crate) fn phi(x: f64) -> f64 {
    match airy_phi(x) {
        Ok(e) => e.value,
        Err(_) => f64::NAN,
    }
}

pub(crate) fn series(x: f64) -> AiryEval {
    let x3 = Dd::from(x) * x * x;
    // f = 1 + x³/3! + 1·4 x⁶/6! + ...,  g = x + 2x⁴/4! + 2·5 x⁷/7! + ...
    let mut f_sum = Dd::from(1.0);
    let mut f_term = Dd::from(1.0);
    let mut f_abs = 1.0;
    let mut g_sum = Dd::from(x);
    let mut g_term = Dd::from(x);
    let mut g_abs = x.abs();
    for k in 1..200usize {
        let k3 = (3 * k) as f64;
        f_term = (f_term * x3) / (k3 * (k3 - 1.0));
        g_term = (g_term * x3) / ((k3 + 1.0) * k3);
        f_sum = f_sum + f_term;
        g_sum = g_sum + g_term;
        f_abs += f_term.hi.abs();
        g_abs += g_term.hi.abs();
        let tiny = 1e-34 * (f_abs + g_abs);
        if f_term.hi.abs() < tiny && g_term.hi.abs() < tiny {
            break;
        }
    }
    let ai = AI0 * f_sum - MINUS_AIP0 * g_sum;
    let value = (SQRT_PI * ai).to_f64();
    let magnitude = SQRT_PI.hi * (AI0.hi * f_abs + MINUS_AIP0.hi * g_abs);
    AiryEval {
        value,
        abs_error_estimate: 1e-31 * magnitude + f64::EPSILON * value.abs(),
    }
}

/// Coefficients u_k of the Airy asymptotic expansions, u_0 = 1,
/// u_k = u_{k-1} (6k-5)(6k-3)(6k-1) / (216 k (2k-1)).
fn u_coefficient(k: usize, prev: f64) -> f64 {
    let k = k as f64;
    prev * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / (216.0 * k * (2.0 * k - 1.0))
}

pub(crate) fn asymptotic_decaying(x: f64) -> AiryEval {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let mut sum = 1.0;
    let mut u = 1.0;
    let mut last = 1.0_f64;
    let mut omitted = 0.0;
    for k in 1..60 {
        u = u_coefficient(k, u);
        let term = u / zeta.powi(k as i32);
        // stop at the smallest term
        if term >= last {
            omitted = term;
            break;
        }
        let signed = if k % 2 == 1 { -term } else { term };
        sum += signed;
        last = term;
        omitted = term;
        if term < 1e-17 {
            break;
        }
    }
    let prefactor = (-zeta).exp() / (2.0 * x.powf(0.25));
    AiryEval {
        value: prefactor * sum,
        abs_error_estimate: prefactor * omitted + f64::EPSILON * (prefactor * sum).abs(),
    }
}

pub(crate) fn asymptotic_oscillatory(x: f64) -> AiryEval {
    let z = -x;
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    // P = Σ (-1)^k u_{2k} ζ^{-2k},  Q = Σ (-1)^k u_{2k+1} ζ^{-2k-1}
    let mut p = 0.0;
    let mut q = 0.0;
    let mut u = 1.0;
    let mut last = f64::INFINITY;
    let mut omitted = 0.0;
    for k in 0..60usize {
        if k > 0 {
            u = u_coefficient(k, u);
        }
        let term = u / zeta.powi(k as i32);
        if term >= last {
            omitted = term;
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        last = term;
        omitted = term;
        if term < 1e-17 {
            break;
        }
    }
    let phase = zeta - std::f64::consts::FRAC_PI_4;
    let amplitude = z.powf(-0.25);
    let value = amplitude * (phase.cos() * p + phase.sin() * q);
    // the phase itself is only known to about ζ·ε
    AiryEval {
        value,
        abs_error_estimate: amplitude * (omitted + 2.0 * zeta * f64::EPSILON),
    }
}

/// Double-double number `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl From<f64> for Dd {
    fn from(v: f64) -> Self {
        Self::new(v, 0.0)
    }
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl std::ops::Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd::new(hi, lo)
    }
}

impl std::ops::Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd::new(-self.hi, -self.lo)
    }
}

impl std::ops::Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl std::ops::Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd::new(hi, lo)
    }
}

impl std::ops::Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, b: f64) -> Dd {
        let (p, e) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p, e + self.lo * b);
        Dd::new(hi, lo)
    }
}

impl std::ops::Div<f64> for Dd {
    type Output = Dd;
    fn div(self, b: f64) -> Dd {
        let q1 = self.hi / b;
        let r = self - Dd::from(b) * q1;
        let q2 = r.hi / b;
        let r = r - Dd::from(b) * q2;
        let q3 = r.hi / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd::new(hi, lo) + Dd::from(q3)
    }
}
