//! Symplectic tomograms
//!
//! ```text
//! w(X, μ, ν) = (1/2πħ) ∫∫ W(q, p) δ(X − μq − νp) dq dp,
//! ```
//!
//! the probability density of the observable `μq̂ + νp̂`. The tomogram is
//! homogeneous, `w(λX, λμ, λν) = w(X, μ, ν)/|λ|`, so the half circle
//! `(μ, ν) = (cos θ, sin θ)` carries all of it and the inverse map is an
//! inverse Radon transform.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Axis;
use crate::interp::lagrange;
use crate::phasespace::WignerGrid;
use crate::propagators::propagate_gaussian;
use crate::specfun::phi;
use crate::states::{ComplexGaussian, PhysParams, StationaryState};
use crate::transform::{BandLimited, FourierSum};

/// Below this `|ν|` the chirped integral is replaced by its `ν → 0` limit.
pub const NU_MIN: f64 = 1e-3;
/// Relative size of `W` on the grid frame above which line integrals are
/// considered cut off.
pub const FRAME_THRESHOLD: f64 = 1e-6;
/// Relative re-projection residual above which a reconstruction is flagged
/// as streaky.
pub const STREAK_TOLERANCE: f64 = 1e-2;

/// Largest chirp phase advance per sample accepted by [`tomogram_from_psi`].
pub const MAX_CHIRP_ADVANCE: f64 = PI / 2.0;

const LAGRANGE_ORDER: usize = 8;

/// `w(X; μ, ν)` on an `X` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomogramSlice {
    pub mu: f64,
    pub nu: f64,
    pub x_axis: Axis,
    pub values: Vec<f64>,
}

impl TomogramSlice {
    /// Trapezoid approximation of `∫ w dX`.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.values) * self.x_axis.step.abs()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn trapezoid(v: &[f64]) -> f64 {
    let n = v.len();
    v.iter().sum::<f64>() - 0.5 * (v[0] + v[n - 1])
}

/// Slices at `(μ, ν) = (cos θ, sin θ)` for every `θ` on `theta_axis`,
/// row-major with `θ` outer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomogramField {
    pub theta_axis: Axis,
    pub x_axis: Axis,
    pub values: Vec<f64>,
}

impl TomogramField {
    /// `count` angles `θ_k = kπ/count`.
    pub fn angles(count: usize) -> Axis {
        Axis {
            start: 0.0,
            step: PI / count as f64,
            len: count,
        }
    }

    pub fn from_fn(theta_axis: Axis, x_axis: Axis, f: impl Fn(f64, f64, f64) -> f64 + Sync) -> Self {
        let values = (0..theta_axis.len)
            .into_par_iter()
            .flat_map_iter(|k| {
                let theta = theta_axis.at(k);
                let (mu, nu) = (theta.cos(), theta.sin());
                let f = &f;
                (0..x_axis.len).map(move |i| f(x_axis.at(i), mu, nu))
            })
            .collect();
        Self {
            theta_axis,
            x_axis,
            values,
        }
    }

    /// Forward Radon transform of a sampled Wigner function.
    pub fn from_wigner(w: &WignerGrid, theta_axis: Axis, x_axis: Axis, hbar: f64) -> Result<Self> {
        let rows: Vec<Vec<f64>> = (0..theta_axis.len)
            .into_par_iter()
            .map(|k| {
                let theta = theta_axis.at(k);
                tomogram_from_wigner(w, theta.cos(), theta.sin(), &x_axis, hbar).map(|s| s.values)
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            theta_axis,
            x_axis,
            values: rows.concat(),
        })
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.values[k * self.x_axis.len..(k + 1) * self.x_axis.len]
    }

    pub fn slice(&self, k: usize) -> TomogramSlice {
        let theta = self.theta_axis.at(k);
        TomogramSlice {
            mu: theta.cos(),
            nu: theta.sin(),
            x_axis: self.x_axis,
            values: self.row(k).to_vec(),
        }
    }
}

/// Line integrals of `W` along `μq + νp = X`, one per point of `x_axis`.
/// The integration runs over the grid rows (or columns) that cross the line
/// most steeply, interpolating `W` along the other direction.
pub fn tomogram_from_wigner(w: &WignerGrid, mu: f64, nu: f64, x_axis: &Axis, hbar: f64) -> Result<TomogramSlice> {
    check_frame(w)?;
    Ok(project(w, mu, nu, x_axis, hbar))
}

fn project(w: &WignerGrid, mu: f64, nu: f64, x_axis: &Axis, hbar: f64) -> TomogramSlice {
    let (q_axis, p_axis) = (w.q_axis, w.p_axis);
    let scale = 1.0 / (2.0 * PI * hbar);
    let values = if nu.abs() >= mu.abs() {
        // p = (X − μq)/ν along each q row
        let rows: Vec<&[f64]> = w.values.chunks(p_axis.len).collect();
        (0..x_axis.len)
            .map(|i| {
                let x = x_axis.at(i);
                let line: Vec<f64> = rows
                    .iter()
                    .enumerate()
                    .map(|(a, row)| lagrange(row, &p_axis, (x - mu * q_axis.at(a)) / nu, LAGRANGE_ORDER))
                    .collect();
                scale * trapezoid(&line) * q_axis.step / nu.abs()
            })
            .collect()
    } else {
        let columns: Vec<Vec<f64>> = (0..p_axis.len)
            .map(|b| (0..q_axis.len).map(|a| w.at(a, b)).collect())
            .collect();
        (0..x_axis.len)
            .map(|i| {
                let x = x_axis.at(i);
                let line: Vec<f64> = columns
                    .iter()
                    .enumerate()
                    .map(|(b, col)| lagrange(col, &q_axis, (x - nu * p_axis.at(b)) / mu, LAGRANGE_ORDER))
                    .collect();
                scale * trapezoid(&line) * p_axis.step / mu.abs()
            })
            .collect()
    };
    TomogramSlice {
        mu,
        nu,
        x_axis: *x_axis,
        values,
    }
}

fn check_frame(w: &WignerGrid) -> Result<()> {
    let (nq, np) = (w.q_axis.len, w.p_axis.len);
    let peak = w.max_abs();
    if peak == 0.0 {
        return Ok(());
    }
    let mut frame: f64 = 0.0;
    for a in 0..nq {
        frame = frame.max(w.at(a, 0).abs()).max(w.at(a, np - 1).abs());
    }
    for b in 0..np {
        frame = frame.max(w.at(0, b).abs()).max(w.at(nq - 1, b).abs());
    }
    if frame / peak > FRAME_THRESHOLD {
        return Err(Error::Window { lost: frame / peak });
    }
    Ok(())
}

/// Filtered back-projection: each slice is convolved with the band-limited
/// ramp kernel (Hann-apodized up to the Nyquist frequency of the `X`
/// sampling) and smeared back over the `(q, p)` grid.
pub fn wigner_from_tomogram(t: &TomogramField, q_axis: &Axis, p_axis: &Axis, hbar: f64) -> Result<WignerGrid> {
    let k_count = t.theta_axis.len;
    if k_count < 2 {
        return Err(Error::Grid("back-projection needs at least two angles".into()));
    }
    let filtered = ramp_filter(t);
    let x_axis = t.x_axis;
    let weight = 2.0 * PI * hbar * t.theta_axis.step;
    let trig: Vec<(f64, f64)> = (0..k_count)
        .map(|k| {
            let theta = t.theta_axis.at(k);
            (theta.cos(), theta.sin())
        })
        .collect();

    let mut out = WignerGrid::from_fn(*q_axis, *p_axis, |q, p| {
        let mut acc = 0.0;
        for (row, &(c, s)) in filtered.chunks(x_axis.len).zip(&trig) {
            acc += lagrange(row, &x_axis, q * c + p * s, LAGRANGE_ORDER);
        }
        weight * acc
    });
    out.imag_residue = 0.0;

    let held_out = k_count / 3;
    let residual = reprojection_residual(t, &out, held_out, hbar);
    if residual > STREAK_TOLERANCE {
        log::warn!(
            "back-projection re-projects slice {held_out} with relative residual {residual:.2e}; \
             the angular sampling may be too coarse (streak artifacts)"
        );
    }
    Ok(out)
}

/// Relative deviation between slice `k` of `t` and the re-projection of a
/// reconstruction at the same angle.
pub fn reprojection_residual(t: &TomogramField, w: &WignerGrid, k: usize, hbar: f64) -> f64 {
    let slice = t.slice(k);
    let again = project(w, slice.mu, slice.nu, &t.x_axis, hbar);
    let peak = slice.values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let diff = slice
        .values
        .iter()
        .zip(&again.values)
        .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()));
    if peak > 0.0 {
        diff / peak
    } else {
        diff
    }
}

/// Convolves each row with the discrete ramp kernel
/// `h(0) = 1/4τ²`, `h(n odd) = −1/(nπτ)²`, `h(n even) = 0`, apodized by a
/// Hann window in frequency. Returns `τ (h ∗ row)` for every row.
fn ramp_filter(t: &TomogramField) -> Vec<f64> {
    let n = t.x_axis.len;
    let tau = t.x_axis.step.abs();
    let len = (2 * n).next_power_of_two();
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(len);
    let inverse = planner.plan_fft_inverse(len);

    let mut kernel = vec![Complex64::new(0.0, 0.0); len];
    for i in 0..n {
        let h = if i == 0 {
            1.0 / (4.0 * tau * tau)
        } else if i % 2 == 1 {
            -1.0 / ((i as f64) * PI * tau).powi(2)
        } else {
            0.0
        };
        kernel[i] = Complex64::new(h, 0.0);
        if i > 0 {
            kernel[len - i] = Complex64::new(h, 0.0);
        }
    }
    forward.process(&mut kernel);
    for (b, v) in kernel.iter_mut().enumerate() {
        let f = if b <= len / 2 { b } else { len - b } as f64 / len as f64;
        // f is in cycles per sample; Nyquist is 1/2
        let hann = 0.5 * (1.0 + (2.0 * PI * f).cos());
        *v *= hann * tau / len as f64;
    }

    let rows: Vec<Vec<f64>> = (0..t.theta_axis.len)
        .into_par_iter()
        .map(|k| {
            let mut buf = vec![Complex64::new(0.0, 0.0); len];
            for (slot, v) in buf.iter_mut().zip(t.row(k)) {
                *slot = Complex64::new(*v, 0.0);
            }
            forward.process(&mut buf);
            for (v, h) in buf.iter_mut().zip(&kernel) {
                *v *= h;
            }
            inverse.process(&mut buf);
            buf[..n].iter().map(|v| v.re).collect()
        })
        .collect();
    rows.concat()
}

/// Tomogram of a pure state sampled on `x_axis`:
///
/// ```text
/// w(X, μ, ν) = (1/2πħ|ν|) |∫ ψ(y) exp{(iμ/2νħ) y² − (iX/νħ) y} dy|²
/// ```
///
/// evaluated as a chirp multiplication followed by a chirp-z transform. At
/// `ν = 0` the limit `|ψ(X/μ)|²/|μ|` is used instead.
pub fn tomogram_from_psi(
    psi: &[Complex64],
    x_axis: &Axis,
    mu: f64,
    nu: f64,
    out_axis: &Axis,
    params: &PhysParams,
) -> Result<TomogramSlice> {
    if psi.len() != x_axis.len {
        return Err(Error::Grid("wavefunction length does not match its axis".into()));
    }
    if mu == 0.0 && nu == 0.0 {
        return Err(Error::Domain("(mu, nu) = (0, 0) has no tomogram".into()));
    }
    let hbar = params.hbar();
    if nu == 0.0 {
        let targets = Axis {
            start: out_axis.start / mu,
            step: out_axis.step / mu,
            len: out_axis.len,
        };
        let values = BandLimited::new(psi, x_axis)
            .eval(&targets)
            .into_iter()
            .map(|v| v.norm_sqr() / mu.abs())
            .collect();
        return Ok(TomogramSlice {
            mu,
            nu,
            x_axis: *out_axis,
            values,
        });
    }
    if nu.abs() < NU_MIN && mu != 0.0 {
        return Err(Error::NuTooSmall {
            nu,
            nu_min: NU_MIN,
        });
    }

    // the chirp must not advance by more than π/2 per sample wherever ψ lives
    let peak = psi.iter().fold(0.0, |m: f64, v| m.max(v.norm()));
    let reach = (0..x_axis.len)
        .filter(|&j| psi[j].norm() > 1e-10 * peak)
        .map(|j| x_axis.at(j).abs())
        .fold(0.0, f64::max);
    let advance = (mu / (nu * hbar)).abs() * reach * x_axis.step;
    if advance > MAX_CHIRP_ADVANCE {
        return Err(Error::Resolution(format!(
            "chirp advances {advance:.3} rad per sample at |y| = {reach:.3}; refine the wavefunction grid"
        )));
    }

    let dy = x_axis.step;
    let chirped: Vec<Complex64> = psi
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let y = x_axis.at(j);
            let w = if j == 0 || j == x_axis.len - 1 { 0.5 } else { 1.0 };
            v * Complex64::from_polar(w * dy, mu * y * y / (2.0 * nu * hbar))
        })
        .collect();
    let k_axis = Axis {
        start: out_axis.start / (nu * hbar),
        step: out_axis.step / (nu * hbar),
        len: out_axis.len,
    };
    let scale = 1.0 / (2.0 * PI * hbar * nu.abs());
    let values = FourierSum::new(*x_axis, k_axis)
        .apply(&chirped)
        .into_iter()
        .map(|v| scale * v.norm_sqr())
        .collect();
    Ok(TomogramSlice {
        mu,
        nu,
        x_axis: *out_axis,
        values,
    })
}

/// A grid on `[centre − half_width, centre + half_width]` no coarser than
/// `max_step` and fine enough for the `(μ, ν)` chirp to stay below
/// two thirds of [`MAX_CHIRP_ADVANCE`] per sample.
pub fn chirp_grid(centre: f64, half_width: f64, max_step: f64, mu: f64, nu: f64, hbar: f64) -> Result<Axis> {
    if !(half_width > 0.0 && max_step > 0.0) {
        return Err(Error::Grid("half width and step must be positive".into()));
    }
    let reach = centre.abs() + half_width;
    let step = if nu == 0.0 {
        max_step
    } else {
        max_step.min(2.0 / 3.0 * MAX_CHIRP_ADVANCE * (nu * hbar / mu).abs() / reach)
    };
    let len = (2.0 * half_width / step).ceil() as usize + 1;
    Axis::linspace(centre - half_width, centre + half_width, len.max(2))
}

/// Tomogram of the stationary state,
/// `(A²/|μ|) Φ(ε + αX/μ − ħ²α⁴ν²/4μ²)²`.
pub fn tomogram_stationary(x: f64, mu: f64, nu: f64, s: &StationaryState) -> Result<f64> {
    if mu == 0.0 {
        return Err(Error::Domain(
            "the stationary tomogram is not normalizable at mu = 0".into(),
        ));
    }
    let hbar = s.params().hbar();
    let alpha = s.alpha();
    let a = s.norm();
    let arg = s.epsilon() + alpha * x / mu - hbar * hbar * alpha.powi(4) * nu * nu / (4.0 * mu * mu);
    Ok(a * a / mu.abs() * phi(arg).powi(2))
}

/// `w(X, μ, ν, t) = w₀(X − Fνt − Fμt²/2m, μ, ν + μt/m)`: the tomogram
/// carried along the characteristics of
/// `∂w/∂t − (μ/m) ∂w/∂ν + Fν ∂w/∂X = 0`.
pub fn tomographic_propagate(
    w0: impl Fn(f64, f64, f64) -> f64,
    x: f64,
    mu: f64,
    nu: f64,
    t: f64,
    params: &PhysParams,
) -> f64 {
    let (m, f) = (params.mass(), params.field());
    w0(x - f * nu * t - f * mu * t * t / (2.0 * m), mu, nu + mu * t / m)
}

/// Closed-form tomogram of a Gaussian state: a normal density in `X` with
/// mean `μ⟨q⟩ + ν⟨p⟩` and variance `μ²σ_q² + 2μν σ_qp + ν²σ_p²`.
pub fn gaussian_tomogram(g: &ComplexGaussian, x: f64, mu: f64, nu: f64, hbar: f64) -> f64 {
    let m = g.moments(hbar);
    let mean = mu * m.mean_q + nu * m.mean_p;
    let var = mu * mu * m.var_q + 2.0 * mu * nu * m.cov_qp + nu * nu * m.var_p;
    let d = x - mean;
    (-d * d / (2.0 * var)).exp() / (2.0 * PI * var).sqrt() * g.norm()
}

/// Default finite-difference step of [`tomographic_pde_residual`].
pub const PDE_STEP: f64 = 1e-3;

/// Residual of `∂w/∂t − (μ/m) ∂w/∂ν + Fν ∂w/∂X` for the exactly evolved
/// Gaussian state, by five-point differences with step [`PDE_STEP`].
pub fn tomographic_pde_residual(
    g: &ComplexGaussian,
    points: &[(f64, f64, f64)],
    t: f64,
    params: &PhysParams,
) -> Result<f64> {
    tomographic_pde_residual_with_step(g, points, t, params, PDE_STEP)
}

pub fn tomographic_pde_residual_with_step(
    g: &ComplexGaussian,
    points: &[(f64, f64, f64)],
    t: f64,
    params: &PhysParams,
    h: f64,
) -> Result<f64> {
    let (m, f, hbar) = (params.mass(), params.field(), params.hbar());
    let w = |x: f64, mu: f64, nu: f64, time: f64| -> Result<f64> {
        Ok(gaussian_tomogram(&propagate_gaussian(g, time, params)?, x, mu, nu, hbar))
    };
    let mut worst: f64 = 0.0;
    for &(x, mu, nu) in points {
        if ((mu * mu + nu * nu) - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("sample point ({mu}, {nu}) is not on the unit circle")));
        }
        let mom = propagate_gaussian(g, t, params)?.moments(hbar);
        let width = (mu * mu * mom.var_q + 2.0 * mu * nu * mom.cov_qp + nu * nu * mom.var_p).sqrt();
        if h > 0.05 * width {
            return Err(Error::Resolution(format!(
                "step {h:e} is coarse against the tomogram width {width:.3e}"
            )));
        }
        let dt = d5(|s| w(x, mu, nu, t + s), h)?;
        let dnu = d5(|s| w(x, mu, nu + s, t), h)?;
        let dx = d5(|s| w(x + s, mu, nu, t), h)?;
        worst = worst.max((dt - mu / m * dnu + f * nu * dx).abs());
    }
    Ok(worst)
}

fn d5(f: impl Fn(f64) -> Result<f64>, h: f64) -> Result<f64> {
    Ok((f(-2.0 * h)? - 8.0 * f(-h)? + 8.0 * f(h)? - f(2.0 * h)?) / (12.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasespace::gaussian_wigner;
    use crate::states::gaussian_ground;
    use approx::assert_relative_eq;

    #[test]
    fn stationary_tomogram_homogeneity() {
        let s = StationaryState::new(1.0, PhysParams::natural()).unwrap();
        let base = tomogram_stationary(0.4, 0.8, 0.6, &s).unwrap();
        let scaled = tomogram_stationary(0.8, 1.6, 1.2, &s).unwrap() * 2.0;
        assert_relative_eq!(base, scaled, max_relative = 1e-14);
        assert!(tomogram_stationary(0.0, 0.0, 1.0, &s).is_err());
    }

    #[test]
    fn stationary_tomogram_position_limit() {
        let s = StationaryState::new(1.0, PhysParams::natural()).unwrap();
        for x in [-1.0, 0.0, 2.0] {
            let psi = crate::states::psi_stationary(x, &s);
            assert_relative_eq!(tomogram_stationary(x, 1.0, 0.0, &s).unwrap(), psi * psi, max_relative = 1e-14);
        }
    }

    #[test]
    fn momentum_marginal_of_ground_state() {
        let p = PhysParams::natural();
        let g = gaussian_ground(1.0, &p).unwrap();
        let x = Axis::linspace(-10.0, 10.0, 801).unwrap();
        let out = Axis::linspace(-1.0, 1.0, 3).unwrap();
        let slice = tomogram_from_psi(&g.sample(&x), &x, 0.0, 1.0, &out, &p).unwrap();
        assert_relative_eq!(slice.values[1], PI.powf(-0.5), max_relative = 1e-12);
        assert_relative_eq!(slice.values[2], PI.powf(-0.5) * (-1.0f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn small_nu_is_rejected() {
        let p = PhysParams::natural();
        let g = gaussian_ground(1.0, &p).unwrap();
        let x = Axis::linspace(-10.0, 10.0, 801).unwrap();
        let out = Axis::linspace(-1.0, 1.0, 3).unwrap();
        assert!(matches!(
            tomogram_from_psi(&g.sample(&x), &x, 1.0, 5e-4, &out, &p),
            Err(Error::NuTooSmall { .. })
        ));
    }

    #[test]
    fn wigner_projection_matches_closed_form() {
        let p = PhysParams::natural();
        let g = gaussian_ground(1.0, &p).unwrap();
        let w = gaussian_wigner(&g, &p).unwrap();
        let axis = Axis::linspace(-8.0, 8.0, 321).unwrap();
        let grid = w.sample(axis, axis);
        let out = Axis::linspace(-2.0, 2.0, 9).unwrap();
        for (mu, nu) in [(1.0, 0.0), (0.0, 1.0), (0.6, 0.8), (-0.28, 0.96)] {
            let slice = tomogram_from_wigner(&grid, mu, nu, &out, 1.0).unwrap();
            for (i, v) in slice.values.iter().enumerate() {
                assert!((v - gaussian_tomogram(&g, out.at(i), mu, nu, 1.0)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn frame_check() {
        let p = PhysParams::natural();
        let w = gaussian_wigner(&gaussian_ground(1.0, &p).unwrap(), &p).unwrap();
        let axis = Axis::linspace(-2.0, 2.0, 41).unwrap();
        let out = Axis::linspace(-1.0, 1.0, 3).unwrap();
        assert!(matches!(
            tomogram_from_wigner(&w.sample(axis, axis), 1.0, 0.0, &out, 1.0),
            Err(Error::Window { .. })
        ));
    }

    #[test]
    fn propagate_identity_and_free_shear() {
        let free = PhysParams::new(1.0, 0.0, 1.0).unwrap();
        let w0 = |x: f64, mu: f64, nu: f64| x + 10.0 * mu + 100.0 * nu;
        assert_eq!(tomographic_propagate(w0, 0.3, 0.6, 0.8, 0.0, &free), w0(0.3, 0.6, 0.8));
        assert_relative_eq!(
            tomographic_propagate(w0, 0.3, 0.6, 0.8, 2.0, &free),
            w0(0.3, 0.6, 0.8 + 1.2),
            epsilon = 1e-12
        );
    }
}
