//! Wigner functions: the Weyl transform of a density matrix,
//!
//! ```text
//! W(q, p) = ∫ ρ(q + u/2, q − u/2) exp(−ipu/ħ) du,
//! ```
//!
//! their evolution by the classical flow of the linear potential, and the
//! closed forms for Gaussian and stationary states.
//!
//! With this convention `∫∫ W dq dp = 2πħ` for a normalized state and the
//! marginals carry a factor `1/2πħ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Axis;
use crate::interp::Bicubic;
use crate::propagators::{integrals_of_motion, trajectory, ClassicalPoint};
use crate::specfun::phi;
use crate::states::{ComplexGaussian, PhysParams, StationaryState};
use crate::transform::{BandLimited, FourierSum};

/// Largest fraction of phase-space mass a pullback may push off the grid.
pub const MAX_LOST_FRACTION: f64 = 1e-3;
/// `|ψ|` at the grid ends, relative to its peak, above which a wavefunction
/// counts as truncated.
pub const TRUNCATION_THRESHOLD: f64 = 1e-8;

/// A Wigner function sampled on a `(q, p)` grid, row-major with `q` outer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub q_axis: Axis,
    pub p_axis: Axis,
    pub values: Vec<f64>,
    /// Largest imaginary part discarded by the transform, relative to the
    /// peak of the real part.
    pub imag_residue: f64,
    /// Fraction of the mass that a pullback mapped outside the grid.
    pub lost_fraction: f64,
}

impl WignerGrid {
    pub fn from_fn(q_axis: Axis, p_axis: Axis, f: impl Fn(f64, f64) -> f64 + Sync) -> Self {
        let values = (0..q_axis.len)
            .into_par_iter()
            .flat_map_iter(|i| {
                let q = q_axis.at(i);
                let f = &f;
                (0..p_axis.len).map(move |j| f(q, p_axis.at(j)))
            })
            .collect();
        Self {
            q_axis,
            p_axis,
            values,
            imag_residue: 0.0,
            lost_fraction: 0.0,
        }
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.p_axis.len + j]
    }

    /// Trapezoid approximation of `∫∫ W dq dp`.
    pub fn integral(&self) -> f64 {
        let (nq, np) = (self.q_axis.len, self.p_axis.len);
        let mut acc = 0.0;
        for i in 0..nq {
            let wi = if i == 0 || i == nq - 1 { 0.5 } else { 1.0 };
            let row: f64 = (0..np)
                .map(|j| {
                    let wj = if j == 0 || j == np - 1 { 0.5 } else { 1.0 };
                    wj * self.at(i, j)
                })
                .sum();
            acc += wi * row;
        }
        acc * self.q_axis.step * self.p_axis.step
    }

    /// `(1/2πħ) ∫∫ W dq dp`, which is 1 for a normalized state.
    pub fn normalization(&self, hbar: f64) -> f64 {
        self.integral() / (2.0 * PI * hbar)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Wigner function of a [`ComplexGaussian`]:
/// `prefactor · exp(c_qq q² + c_qp qp + c_pp p² + c_q q + c_p p + c_0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianWigner {
    pub c_qq: f64,
    pub c_qp: f64,
    pub c_pp: f64,
    pub c_q: f64,
    pub c_p: f64,
    pub c_0: f64,
    pub prefactor: f64,
}

impl GaussianWigner {
    fn exponent(&self, q: f64, p: f64) -> f64 {
        self.c_qq * q * q + self.c_qp * q * p + self.c_pp * p * p + self.c_q * q + self.c_p * p + self.c_0
    }

    pub fn eval(&self, q: f64, p: f64) -> f64 {
        self.prefactor * self.exponent(q, p).exp()
    }

    /// `(W, ∂W/∂q, ∂W/∂p)`.
    pub fn gradient(&self, q: f64, p: f64) -> (f64, f64, f64) {
        let w = self.eval(q, p);
        let dq = 2.0 * self.c_qq * q + self.c_qp * p + self.c_q;
        let dp = self.c_qp * q + 2.0 * self.c_pp * p + self.c_p;
        (w, w * dq, w * dp)
    }

    /// `(∂²W/∂q², ∂²W/∂q∂p, ∂²W/∂p²)`.
    pub fn hessian(&self, q: f64, p: f64) -> (f64, f64, f64) {
        let (w, wq, wp) = self.gradient(q, p);
        (
            wq * wq / w + 2.0 * self.c_qq * w,
            wq * wp / w + self.c_qp * w,
            wp * wp / w + 2.0 * self.c_pp * w,
        )
    }

    /// `c_qq c_pp − c_qp²/4`, equal to `1/ħ²` for a pure state.
    pub fn determinant(&self) -> f64 {
        self.c_qq * self.c_pp - 0.25 * self.c_qp * self.c_qp
    }

    /// Analytic `∫∫ W dq dp`.
    pub fn integral(&self) -> f64 {
        let det = self.determinant();
        // complete the square in (q, p)
        let shift = (self.c_pp * self.c_q * self.c_q - self.c_qp * self.c_q * self.c_p + self.c_qq * self.c_p * self.c_p)
            / (4.0 * det);
        self.prefactor * PI / det.sqrt() * (self.c_0 - shift).exp()
    }

    /// The Wigner function at time `t`: `W₀(q − pt/m + Ft²/2m, p − Ft)`
    /// expanded into new coefficients.
    pub fn evolved(&self, t: f64, params: &PhysParams) -> GaussianWigner {
        self.evolved_with_rate(t, params).0
    }

    /// Evolved coefficients together with their time derivatives, ordered
    /// `(c_qq, c_qp, c_pp, c_q, c_p, c_0)`.
    pub fn evolved_with_rate(&self, t: f64, params: &PhysParams) -> (GaussianWigner, [f64; 6]) {
        let (m, f) = (params.mass(), params.field());
        let (a, b, c, d, e, g) = (self.c_qq, self.c_qp, self.c_pp, self.c_q, self.c_p, self.c_0);
        // q₀ = q − s p + c1,  p₀ = p + c2
        let s = t / m;
        let c1 = f * t * t / (2.0 * m);
        let c2 = -f * t;
        let (ds, dc1, dc2) = (1.0 / m, f * t / m, -f);

        let out = GaussianWigner {
            c_qq: a,
            c_qp: -2.0 * s * a + b,
            c_pp: s * s * a - s * b + c,
            c_q: 2.0 * c1 * a + c2 * b + d,
            c_p: -2.0 * s * c1 * a + (c1 - s * c2) * b + 2.0 * c2 * c - s * d + e,
            c_0: c1 * c1 * a + c1 * c2 * b + c2 * c2 * c + c1 * d + c2 * e + g,
            prefactor: self.prefactor,
        };
        let d_sc1 = ds * c1 + s * dc1;
        let d_sc2 = ds * c2 + s * dc2;
        let rate = [
            0.0,
            -2.0 * ds * a,
            2.0 * s * ds * a - ds * b,
            2.0 * dc1 * a + dc2 * b,
            -2.0 * d_sc1 * a + (dc1 - d_sc2) * b + 2.0 * dc2 * c - ds * d,
            2.0 * c1 * dc1 * a + (dc1 * c2 + c1 * dc2) * b + 2.0 * c2 * dc2 * c + dc1 * d + dc2 * e,
        ];
        (out, rate)
    }

    pub fn sample(&self, q_axis: Axis, p_axis: Axis) -> WignerGrid {
        WignerGrid::from_fn(q_axis, p_axis, |q, p| self.eval(q, p))
    }
}

/// Closed-form Wigner function of `n·exp(ax² + bx)`.
pub fn gaussian_wigner(g: &ComplexGaussian, params: &PhysParams) -> Result<GaussianWigner> {
    if !(g.a.re < 0.0) {
        return Err(Error::Domain(format!("gaussian_wigner needs Re(a) < 0, got {}", g.a)));
    }
    let hbar = params.hbar();
    let (ar, ai, br, bi) = (g.a.re, g.a.im, g.b.re, g.b.im);
    Ok(GaussianWigner {
        c_qq: 2.0 * ar + 2.0 * ai * ai / ar,
        c_qp: -2.0 * ai / (ar * hbar),
        c_pp: 1.0 / (2.0 * ar * hbar * hbar),
        c_q: 2.0 * br + 2.0 * ai * bi / ar,
        c_p: -bi / (ar * hbar),
        c_0: bi * bi / (2.0 * ar),
        prefactor: g.n.norm_sqr() * (2.0 * PI / -ar).sqrt(),
    })
}

/// Weyl transform of an arbitrary kernel `K(x, x')`:
/// `∫ K(q + u/2, q − u/2) exp(−ipu/ħ) du` by the trapezoid rule on `u_axis`
/// (which must be symmetric about 0 and cover the kernel's support).
pub fn weyl_transform(
    kernel: impl Fn(f64, f64) -> Complex64 + Sync,
    q_axis: &Axis,
    p_axis: &Axis,
    u_axis: &Axis,
    hbar: f64,
) -> Vec<Complex64> {
    let k_axis = Axis {
        start: p_axis.start / hbar,
        step: p_axis.step / hbar,
        len: p_axis.len,
    };
    let sum = FourierSum::new(*u_axis, k_axis);
    (0..q_axis.len)
        .into_par_iter()
        .flat_map_iter(|i| {
            let q = q_axis.at(i);
            let f: Vec<Complex64> = (0..u_axis.len)
                .map(|j| {
                    let u = u_axis.at(j);
                    let w = if j == 0 || j == u_axis.len - 1 { 0.5 } else { 1.0 };
                    kernel(q + u / 2.0, q - u / 2.0) * w
                })
                .collect();
            sum.apply(&f).into_iter().map(|v| v * u_axis.step)
        })
        .collect()
}

/// Wigner function of a pure state sampled on `x_axis`.
///
/// For each `q` the samples are shifted (band-limited) so that `q ± j·dx`
/// land on the grid; the `u`-integral with `u = 2j·dx` is then one chirp-z
/// transform onto `p_axis`.
pub fn wigner_from_psi(
    psi: &[Complex64],
    x_axis: &Axis,
    q_axis: &Axis,
    p_axis: &Axis,
    params: &PhysParams,
) -> Result<WignerGrid> {
    if psi.len() != x_axis.len {
        return Err(Error::Grid("wavefunction length does not match its axis".into()));
    }
    check_decay(psi)?;
    let hbar = params.hbar();
    let n = x_axis.len;
    let dx = x_axis.step;
    let interp = BandLimited::new(psi, x_axis);
    let u_axis = Axis {
        start: -2.0 * (n as f64 - 1.0) * dx,
        step: 2.0 * dx,
        len: 2 * n - 1,
    };
    let k_axis = Axis {
        start: p_axis.start / hbar,
        step: p_axis.step / hbar,
        len: p_axis.len,
    };
    let sum = FourierSum::new(u_axis, k_axis);

    let rows: Vec<(Vec<f64>, f64)> = (0..q_axis.len)
        .into_par_iter()
        .map(|i| {
            let q = q_axis.at(i);
            let pos = x_axis.position(q);
            let base = pos.floor();
            let shift = (pos - base) * dx;
            let shifted = if shift == 0.0 {
                psi.to_vec()
            } else {
                interp.eval(&Axis {
                    start: x_axis.start + shift,
                    step: dx,
                    len: n,
                })
            };
            let base = base as isize;
            let mut f = vec![Complex64::new(0.0, 0.0); 2 * n - 1];
            for (slot, value) in f.iter_mut().enumerate() {
                let j = slot as isize - (n as isize - 1);
                let (plus, minus) = (base + j, base - j);
                if (0..n as isize).contains(&plus) && (0..n as isize).contains(&minus) {
                    *value = shifted[plus as usize] * shifted[minus as usize].conj() * (2.0 * dx);
                }
            }
            let out = sum.apply(&f);
            let imag = out.iter().fold(0.0, |m: f64, v| m.max(v.im.abs()));
            (out.into_iter().map(|v| v.re).collect(), imag)
        })
        .collect();

    let imag = rows.iter().fold(0.0, |m: f64, r| m.max(r.1));
    let values: Vec<f64> = rows.into_iter().flat_map(|r| r.0).collect();
    let peak = values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    Ok(WignerGrid {
        q_axis: *q_axis,
        p_axis: *p_axis,
        values,
        imag_residue: if peak > 0.0 { imag / peak } else { imag },
        lost_fraction: 0.0,
    })
}

fn check_decay(psi: &[Complex64]) -> Result<()> {
    let peak = psi.iter().fold(0.0, |m: f64, v| m.max(v.norm()));
    if peak == 0.0 {
        return Ok(());
    }
    let edge = psi[0].norm().max(psi[psi.len() - 1].norm()) / peak;
    if edge > TRUNCATION_THRESHOLD {
        return Err(Error::Truncation { boundary: edge });
    }
    Ok(())
}

/// `W(q, p, t) = W₀(x₀, p₀)` with `(x₀, p₀)` the integrals of motion.
pub fn moyal_evolve_points(w0: impl Fn(f64, f64) -> f64, q: f64, p: f64, t: f64, params: &PhysParams) -> f64 {
    let start = integrals_of_motion(ClassicalPoint::new(q, p), t, params);
    w0(start.x, start.p)
}

/// Applies the delta-kernel Moyal propagator to a sampled Wigner function:
/// every output node pulls back along the classical flow and interpolates
/// `W₀` bicubically there. Nodes whose preimage lies off the grid get 0.
pub fn moyal_propagator_apply(w0: &WignerGrid, t: f64, params: &PhysParams) -> Result<WignerGrid> {
    if t == 0.0 {
        return Ok(w0.clone());
    }
    let (q_axis, p_axis) = (w0.q_axis, w0.p_axis);

    // mass carried off the rectangle, found by pushing input nodes forward
    let mut total = 0.0;
    let mut lost = 0.0;
    for i in 0..q_axis.len {
        for j in 0..p_axis.len {
            let v = w0.at(i, j).abs();
            total += v;
            let end = trajectory(ClassicalPoint::new(q_axis.at(i), p_axis.at(j)), t, params);
            if !(q_axis.contains(end.x) && p_axis.contains(end.p)) {
                lost += v;
            }
        }
    }
    let lost_fraction = if total > 0.0 { lost / total } else { 0.0 };
    if lost_fraction > MAX_LOST_FRACTION {
        return Err(Error::Window { lost: lost_fraction });
    }

    let interp = Bicubic::new(q_axis, p_axis, &w0.values);
    let mut out = WignerGrid::from_fn(q_axis, p_axis, |q, p| {
        moyal_evolve_points(|x, y| interp.eval(x, y), q, p, t, params)
    });
    out.lost_fraction = lost_fraction;
    out.imag_residue = w0.imag_residue;
    Ok(out)
}

/// Wigner function of the stationary state,
/// `(2/√π) (m/F²ħ²)^{1/3} Φ(4^{1/3} (p²/α²ħ² + αq + ε))`.
pub fn wigner_stationary(q: f64, p: f64, s: &StationaryState) -> f64 {
    let params = s.params();
    let (m, f, hbar) = (params.mass(), params.field(), params.hbar());
    let alpha = s.alpha();
    let scale = 2.0 / PI.sqrt() * (m / (f * f * hbar * hbar)).cbrt();
    let arg = p * p / (alpha * alpha * hbar * hbar) + alpha * q + s.epsilon();
    scale * phi(4f64.cbrt() * arg)
}

/// Checks the four operator correspondence rules, and the Moyal equation of
/// the linear potential assembled from them, on the pure state `g`.
///
/// Each left side is the Weyl transform (by quadrature) of the kernel
/// `x ρ`, `x' ρ`, `∂ρ/∂x`, `∂ρ/∂x'` or `[H, ρ]/iħ`; each right side is the
/// matching differential operator applied to the closed-form Wigner
/// function. Returns the largest deviation relative to the peak of the
/// right side.
pub fn correspondence_residual(g: &ComplexGaussian, params: &PhysParams) -> Result<f64> {
    let hbar = params.hbar();
    let (m, f) = (params.mass(), params.field());
    let w = gaussian_wigner(g, params)?;
    let mom = g.moments(hbar);
    let (sq, sp) = (mom.var_q.sqrt(), mom.var_p.sqrt());
    let q_axis = Axis::linspace(mom.mean_q - 5.0 * sq, mom.mean_q + 5.0 * sq, 41)?;
    let p_axis = Axis::linspace(mom.mean_p - 5.0 * sp, mom.mean_p + 5.0 * sp, 41)?;

    // the u-integrand is a Gaussian of width 1/√(−Re a) modulated at
    // wavenumbers up to k_max; the trapezoid rule is exact to e^{−72} when
    // (π/h − k_max)·width ≥ 12
    let width = 1.0 / (-g.a.re).sqrt();
    let q_far = q_axis.start.abs().max(q_axis.end().abs());
    let p_far = p_axis.start.abs().max(p_axis.end().abs());
    let k_max = 2.0 * g.a.im.abs() * q_far + g.b.im.abs() + p_far / hbar;
    let h = PI / (k_max + 12.0 / width);
    let half = 14.0 * width;
    let count = (2.0 * half / h).ceil() as usize + 1;
    if count > 1 << 20 {
        return Err(Error::Resolution(format!(
            "u-quadrature would need {count} nodes to resolve wavenumbers up to {k_max:.3e}"
        )));
    }
    let u_axis = Axis::linspace(-half, half, count.max(3) | 1)?;

    let psi = |x: f64| g.eval(x);
    let dpsi = |x: f64| (2.0 * g.a * x + g.b) * g.eval(x);
    let d2psi = |x: f64| {
        let s = 2.0 * g.a * x + g.b;
        (s * s + 2.0 * g.a) * g.eval(x)
    };
    let i = Complex64::new(0.0, 1.0);

    type Kernel<'a> = Box<dyn Fn(f64, f64) -> Complex64 + Sync + 'a>;
    type Rhs<'a> = Box<dyn Fn(f64, f64) -> Complex64 + 'a>;
    let checks: Vec<(Kernel, Rhs)> = vec![
        (
            Box::new(|x, y| x * psi(x) * psi(y).conj()),
            Box::new(|q, p| {
                let (v, _, vp) = w.gradient(q, p);
                q * v + i * (hbar / 2.0) * vp
            }),
        ),
        (
            Box::new(|x, y| y * psi(x) * psi(y).conj()),
            Box::new(|q, p| {
                let (v, _, vp) = w.gradient(q, p);
                q * v - i * (hbar / 2.0) * vp
            }),
        ),
        (
            Box::new(|x, y| dpsi(x) * psi(y).conj()),
            Box::new(|q, p| {
                let (v, vq, _) = w.gradient(q, p);
                0.5 * vq + i * (p / hbar) * v
            }),
        ),
        (
            Box::new(|x, y| psi(x) * dpsi(y).conj()),
            Box::new(|q, p| {
                let (v, vq, _) = w.gradient(q, p);
                0.5 * vq - i * (p / hbar) * v
            }),
        ),
        (
            // ∂ρ/∂t = [H, ρ]/iħ with H = p²/2m − F x
            Box::new(|x, y| {
                let kinetic = -(hbar * hbar) / (2.0 * m) * (d2psi(x) * psi(y).conj() - psi(x) * d2psi(y).conj());
                let potential = -f * (x - y) * psi(x) * psi(y).conj();
                (kinetic + potential) / (i * hbar)
            }),
            Box::new(|q, p| {
                let (_, vq, vp) = w.gradient(q, p);
                Complex64::new(-(p / m) * vq - f * vp, 0.0)
            }),
        ),
    ];

    let mut worst: f64 = 0.0;
    for (kernel, rhs) in &checks {
        let lhs = weyl_transform(kernel, &q_axis, &p_axis, &u_axis, hbar);
        let mut peak: f64 = 0.0;
        let mut diff: f64 = 0.0;
        for a in 0..q_axis.len {
            for b in 0..p_axis.len {
                let want = rhs(q_axis.at(a), p_axis.at(b));
                peak = peak.max(want.norm());
                diff = diff.max((lhs[a * p_axis.len + b] - want).norm());
            }
        }
        worst = worst.max(diff / peak);
    }
    Ok(worst)
}
