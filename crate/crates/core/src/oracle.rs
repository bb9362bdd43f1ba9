//! Independent numerical ground truth: a Crank–Nicolson solver for
//! `iħ ψ_t = −(ħ²/2m) ψ_xx − F x ψ` on a Dirichlet box, and windowed,
//! damped quadrature for oscillatory integrals.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Axis;
use crate::propagators::propagate_gaussian;
use crate::states::{ComplexGaussian, PhysParams};

/// Boundary magnitude above which a warning is logged.
pub const REFLECTION_WARN: f64 = 1e-6;
/// Boundary magnitude above which evolution is aborted.
pub const REFLECTION_FAIL: f64 = 1e-3;
/// `dt` may not exceed this multiple of `m dx²/ħ`.
pub const ACCURACY_GUARD: f64 = 50.0;

/// Default solver box and step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub dt: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            x_min: -20.0,
            x_max: 20.0,
            points: 4096,
            dt: 1e-3,
        }
    }
}

impl OracleConfig {
    pub fn axis(&self) -> Result<Axis> {
        Axis::linspace(self.x_min, self.x_max, self.points)
    }

    /// The default grid, widened and refined where needed so that the
    /// exactly propagated `g` stays clear of the boundary up to time `t`
    /// and its momentum content stays resolved.
    pub fn covering(g: &ComplexGaussian, t: f64, params: &PhysParams) -> Result<Self> {
        let base = Self::default();
        let hbar = params.hbar();
        let (mut lo, mut hi, mut p_max) = (base.x_min, base.x_max, 0.0_f64);
        for k in 0..=32 {
            let m = propagate_gaussian(g, t * k as f64 / 32.0, params)?.moments(hbar);
            let reach = 12.0 * m.var_q.sqrt();
            lo = lo.min(m.mean_q - reach);
            hi = hi.max(m.mean_q + reach);
            p_max = p_max.max(m.mean_p.abs() + 10.0 * m.var_p.sqrt());
        }
        let base_step = (base.x_max - base.x_min) / (base.points - 1) as f64;
        // the default grid resolves kdx ≈ 0.08 at the top of its spectrum
        let step = base_step.min(0.08 * hbar / p_max);
        let points = ((hi - lo) / step).ceil() as usize + 1;
        let step = (hi - lo) / (points - 1) as f64;
        Ok(Self {
            x_min: lo,
            x_max: hi,
            points,
            dt: base.dt.min(ACCURACY_GUARD * params.mass() * step * step / hbar),
        })
    }
}

/// A wavefunction sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub x_axis: Axis,
    pub psi: Vec<Complex64>,
    pub params: PhysParams,
}

impl GridState {
    pub fn new(x_axis: Axis, psi: Vec<Complex64>, params: PhysParams) -> Result<Self> {
        if psi.len() != x_axis.len {
            return Err(Error::Grid(format!(
                "{} samples for an axis of {} points",
                psi.len(),
                x_axis.len
            )));
        }
        Ok(Self { x_axis, psi, params })
    }

    pub fn from_gaussian(g: &ComplexGaussian, x_axis: Axis, params: PhysParams) -> Self {
        Self {
            x_axis,
            psi: g.sample(&x_axis),
            params,
        }
    }

    /// Discrete `Σ |ψ|² dx`.
    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.x_axis.step
    }

    pub fn mean_x(&self) -> f64 {
        let dx = self.x_axis.step;
        self.psi
            .iter()
            .enumerate()
            .map(|(i, v)| self.x_axis.at(i) * v.norm_sqr())
            .sum::<f64>()
            * dx
            / self.norm()
    }

    pub fn width(&self) -> f64 {
        let mean = self.mean_x();
        let dx = self.x_axis.step;
        let second = self
            .psi
            .iter()
            .enumerate()
            .map(|(i, v)| (self.x_axis.at(i) - mean).powi(2) * v.norm_sqr())
            .sum::<f64>()
            * dx
            / self.norm();
        second.sqrt()
    }

    /// Largest `|ψ|` among the two outermost samples at either end.
    pub fn boundary_magnitude(&self) -> f64 {
        let n = self.psi.len();
        [0, 1, n.saturating_sub(2), n.saturating_sub(1)]
            .iter()
            .map(|&i| self.psi[i].norm())
            .fold(0.0, f64::max)
    }

    /// `√(Σ |ψ − φ|² dx)` against samples on the same grid.
    pub fn l2_distance(&self, other: &[Complex64]) -> f64 {
        assert_eq!(other.len(), self.psi.len());
        (self
            .psi
            .iter()
            .zip(other)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            * self.x_axis.step)
            .sqrt()
    }
}

/// Crank–Nicolson stepper `(1 + iτK) ψ' = (1 − iτK) ψ`, `τ = dt/2ħ`, with the
/// five-point fourth-order Laplacian inside `K`. `K` is real symmetric, so
/// the step is exactly unitary in the discrete `ℓ²` norm; the banded
/// factorization is computed once and reused.
pub struct CrankNicolson {
    tau: f64,
    kinetic: f64,
    potential: Vec<f64>,
    // LU factors of 1 + iτK in band storage: column 2 is the diagonal
    bands: Vec<[Complex64; 5]>,
}

impl CrankNicolson {
    pub fn new(x_axis: &Axis, params: &PhysParams, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Domain(format!("dt must be positive, got {dt}")));
        }
        let (m, f, hbar) = (params.mass(), params.field(), params.hbar());
        let dx = x_axis.step;
        let limit = ACCURACY_GUARD * m * dx * dx / hbar;
        if dt > limit {
            return Err(Error::Resolution(format!(
                "dt = {dt:e} exceeds the accuracy guard {limit:e} for dx = {dx:e}"
            )));
        }
        let n = x_axis.len;
        if n < 5 {
            return Err(Error::Grid("Crank–Nicolson needs at least 5 points".into()));
        }
        let tau = dt / (2.0 * hbar);
        let kinetic = hbar * hbar / (2.0 * m * dx * dx);
        let potential: Vec<f64> = x_axis.points().into_iter().map(|x| -f * x).collect();

        let mut bands = vec![[Complex64::new(0.0, 0.0); 5]; n];
        for (i, row) in bands.iter_mut().enumerate() {
            for (slot, w) in LAPLACIAN.iter().enumerate() {
                let j = i as isize + slot as isize - 2;
                if (0..n as isize).contains(&j) {
                    row[slot] = Complex64::new(0.0, -tau * kinetic * w);
                }
            }
            row[2] += Complex64::new(1.0, tau * potential[i]);
        }
        // no pivoting: the Hermitian part of 1 + iτK is the identity
        for k in 0..n {
            let pivot = bands[k][2];
            for i in k + 1..(k + 3).min(n) {
                let l = bands[i][k + 2 - i] / pivot;
                bands[i][k + 2 - i] = l;
                for j in k + 1..(k + 3).min(n) {
                    let upper = bands[k][j + 2 - k];
                    bands[i][j + 2 - i] -= l * upper;
                }
            }
        }
        Ok(Self {
            tau,
            kinetic,
            potential,
            bands,
        })
    }

    pub fn step(&self, psi: &mut [Complex64]) {
        let n = psi.len();
        assert_eq!(n, self.bands.len());
        let mut rhs = vec![Complex64::new(0.0, 0.0); n];
        for (i, out) in rhs.iter_mut().enumerate() {
            let mut k_psi = Complex64::new(self.potential[i], 0.0) * psi[i];
            for (slot, w) in LAPLACIAN.iter().enumerate() {
                let j = i as isize + slot as isize - 2;
                if (0..n as isize).contains(&j) {
                    k_psi -= self.kinetic * w * psi[j as usize];
                }
            }
            *out = psi[i] - Complex64::new(0.0, self.tau) * k_psi;
        }
        for i in 0..n {
            for j in i.saturating_sub(2)..i {
                let l = self.bands[i][j + 2 - i];
                let prev = rhs[j];
                rhs[i] -= l * prev;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..(i + 3).min(n) {
                let u = self.bands[i][j + 2 - i];
                let next = rhs[j];
                rhs[i] -= u * next;
            }
            rhs[i] /= self.bands[i][2];
        }
        psi.copy_from_slice(&rhs);
    }
}

const LAPLACIAN: [f64; 5] = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];

fn check_boundary(s: &GridState) -> Result<f64> {
    let b = s.boundary_magnitude();
    if b > REFLECTION_FAIL {
        return Err(Error::Reflection { magnitude: b });
    }
    Ok(b)
}

fn warn_boundary(b: f64) {
    if b > REFLECTION_WARN {
        log::warn!("wavefunction magnitude {b:.3e} at the oracle grid boundary");
    }
}

/// One Crank–Nicolson step of length `dt`.
pub fn crank_nicolson_step(s: &GridState, dt: f64) -> Result<GridState> {
    let stepper = CrankNicolson::new(&s.x_axis, &s.params, dt)?;
    let mut out = s.clone();
    stepper.step(&mut out.psi);
    warn_boundary(check_boundary(&out)?);
    Ok(out)
}

/// Evolves to time `t` with steps of `dt` and one shorter final step when
/// `t/dt` is not an integer.
pub fn evolve(s: &GridState, t: f64, dt: f64) -> Result<GridState> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("evolution time must be ≥ 0, got {t}")));
    }
    let mut out = s.clone();
    if t == 0.0 {
        return Ok(out);
    }
    let ratio = t / dt;
    let (full, rest) = if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) {
        (ratio.round() as usize, 0.0)
    } else {
        let full = ratio.floor() as usize;
        (full, t - full as f64 * dt)
    };
    let mut worst: f64 = 0.0;
    if full > 0 {
        let stepper = CrankNicolson::new(&s.x_axis, &s.params, dt)?;
        for _ in 0..full {
            stepper.step(&mut out.psi);
            worst = worst.max(check_boundary(&out)?);
        }
    }
    if rest > 0.0 {
        CrankNicolson::new(&s.x_axis, &s.params, rest)?.step(&mut out.psi);
        worst = worst.max(check_boundary(&out)?);
    }
    warn_boundary(worst);
    Ok(out)
}

/// Smooth window applied before summation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Window {
    None,
    /// Planck taper over the window, with `fraction` of its width rolled
    /// off at each end. Windows are centred on the middle of the axis.
    PlanckTaper { fraction: f64 },
    /// Planck taper at the right end only; windows start at the first sample.
    /// Suited to half-line integrals such as the Airy cosine integral.
    PlanckTaperRight { fraction: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub window: Window,
    /// Multiplies the integrand by `exp(−damping·x²)`.
    pub damping: f64,
    /// Window widths averaged over; empty means one window spanning the axis.
    pub cesaro_widths: Vec<f64>,
    /// Largest acceptable spread between the per-width results.
    pub tolerance: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            window: Window::None,
            damping: 0.0,
            cesaro_widths: Vec::new(),
            tolerance: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    /// Largest deviation of a single-width result from the average.
    pub spread: f64,
}

/// Trapezoid integral of `samples` (on `axis`) after windowing and damping,
/// averaged over the Cesàro widths.
pub fn damped_quadrature(samples: &[Complex64], axis: &Axis, spec: &QuadratureSpec) -> Result<Quadrature> {
    if samples.len() != axis.len {
        return Err(Error::Grid("sample count does not match the axis".into()));
    }
    if spec.damping < 0.0 {
        return Err(Error::Domain("damping must be ≥ 0".into()));
    }
    match spec.window {
        Window::PlanckTaper { fraction } | Window::PlanckTaperRight { fraction } => {
            if !(fraction > 0.0 && fraction <= 0.5) {
                return Err(Error::Domain(format!("taper fraction {fraction} outside (0, 0.5]")));
            }
        }
        Window::None => {}
    }
    let full = axis.end() - axis.start;
    let widths: Vec<f64> = if spec.cesaro_widths.is_empty() {
        vec![full]
    } else {
        spec.cesaro_widths.clone()
    };
    let centre = 0.5 * (axis.start + axis.end());
    let results: Vec<Complex64> = widths
        .iter()
        .map(|&w| {
            let (lo, hi) = match spec.window {
                Window::PlanckTaperRight { .. } => (axis.start, axis.start + w),
                _ => (centre - w / 2.0, centre + w / 2.0),
            };
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, v) in samples.iter().enumerate() {
                let x = axis.at(i);
                let mut weight = window_weight(spec.window, x, lo, hi);
                if i == 0 || i == axis.len - 1 {
                    weight *= 0.5;
                }
                if weight != 0.0 {
                    acc += v * (weight * (-spec.damping * x * x).exp());
                }
            }
            acc * axis.step
        })
        .collect();
    let value = results.iter().sum::<Complex64>() / results.len() as f64;
    let spread = results.iter().map(|r| (r - value).norm()).fold(0.0, f64::max);
    if let Some(tolerance) = spec.tolerance {
        if spread > tolerance {
            return Err(Error::NonConvergence { spread, tolerance });
        }
    }
    Ok(Quadrature { value, spread })
}

fn window_weight(window: Window, x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo || x > hi {
        return 0.0;
    }
    match window {
        Window::None => 1.0,
        Window::PlanckTaper { fraction } => {
            let ramp = fraction * (hi - lo);
            planck_ramp(x - lo, ramp) * planck_ramp(hi - x, ramp)
        }
        Window::PlanckTaperRight { fraction } => planck_ramp(hi - x, fraction * (hi - lo)),
    }
}

/// Rises smoothly from 0 at `d = 0` to 1 at `d = ramp`.
fn planck_ramp(d: f64, ramp: f64) -> f64 {
    if d <= 0.0 {
        0.0
    } else if d >= ramp {
        1.0
    } else {
        let z = ramp / d - ramp / (ramp - d);
        1.0 / (1.0 + z.exp())
    }
}

/// Richardson extrapolation to `η → 0` of `damped_quadrature` for damping
/// values `η₀, η₀/2, η₀/4, ...` (the regularized value is analytic in η).
pub fn richardson_in_damping(
    samples: &[Complex64],
    axis: &Axis,
    spec: &QuadratureSpec,
    dampings: &[f64],
) -> Result<Complex64> {
    if dampings.is_empty() {
        return Err(Error::Domain("need at least one damping value".into()));
    }
    for pair in dampings.windows(2) {
        if (pair[0] - 2.0 * pair[1]).abs() > 1e-12 * pair[0] {
            return Err(Error::Domain("damping sequence must halve at every step".into()));
        }
    }
    let mut table: Vec<Complex64> = Vec::with_capacity(dampings.len());
    for &eta in dampings {
        let spec = QuadratureSpec {
            damping: eta,
            ..spec.clone()
        };
        let mut current = damped_quadrature(samples, axis, &spec)?.value;
        // new diagonal of the Neville tableau
        let mut factor = 2.0;
        for prev in table.iter_mut() {
            let next = current + (current - *prev) / (factor - 1.0);
            *prev = current;
            current = next;
            factor *= 2.0;
        }
        table.push(current);
    }
    Ok(*table.last().unwrap())
}
