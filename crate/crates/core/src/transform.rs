//! Fourier sums evaluated on arbitrary uniform frequency grids.
//!
//! The Wigner transform, the tomogram of a wave function and band-limited
//! resampling all need `Σ_j f_j exp(−i k u_j)` at frequencies that do not
//! line up with FFT bins. Bluestein's chirp-z factorization
//! `jk = (j² + k² − (k − j)²)/2` turns that sum into one circular
//! convolution.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::Axis;

/// A prepared chirp-z transform `X_k = Σ_{j<n} x_j exp(−i θ j k)`, `k < m`.
pub struct ChirpZ {
    n: usize,
    m: usize,
    theta: f64,
    fft_len: usize,
    kernel_hat: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl ChirpZ {
    pub fn new(n: usize, m: usize, theta: f64) -> Self {
        let fft_len = (n + m - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(fft_len);
        let inverse = planner.plan_fft_inverse(fft_len);

        let mut kernel = vec![Complex64::new(0.0, 0.0); fft_len];
        for (k, v) in kernel.iter_mut().enumerate().take(m) {
            *v = chirp(theta, k as f64);
        }
        for j in 1..n {
            kernel[fft_len - j] = chirp(theta, j as f64);
        }
        forward.process(&mut kernel);
        let scale = 1.0 / fft_len as f64;
        kernel.iter_mut().for_each(|v| *v *= scale);

        Self {
            n,
            m,
            theta,
            fft_len,
            kernel_hat: kernel,
            forward,
            inverse,
        }
    }

    pub fn apply(&self, input: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(input.len(), self.n, "chirp-z input length");
        let mut buf = vec![Complex64::new(0.0, 0.0); self.fft_len];
        for (j, (slot, x)) in buf.iter_mut().zip(input).enumerate() {
            *slot = x * chirp(self.theta, j as f64).conj();
        }
        self.forward.process(&mut buf);
        for (v, k) in buf.iter_mut().zip(&self.kernel_hat) {
            *v *= k;
        }
        self.inverse.process(&mut buf);
        (0..self.m)
            .map(|k| buf[k] * chirp(self.theta, k as f64).conj())
            .collect()
    }
}

#[inline]
fn chirp(theta: f64, j: f64) -> Complex64 {
    Complex64::from_polar(1.0, 0.5 * theta * j * j)
}

/// Evaluates `F(k) = Σ_j f_j exp(−i k u_j)` with `u_j = u.at(j)` for every
/// `k` on `freq`.
pub struct FourierSum {
    u: Axis,
    freq: Axis,
    czt: ChirpZ,
}

impl FourierSum {
    pub fn new(u: Axis, freq: Axis) -> Self {
        let czt = ChirpZ::new(u.len, freq.len, freq.step * u.step);
        Self { u, freq, czt }
    }

    pub fn apply(&self, f: &[Complex64]) -> Vec<Complex64> {
        let k0 = self.freq.start;
        let du = self.u.step;
        // exp(−i(k0 + i dk)(u0 + j du)) = exp(−i k u0) exp(−i k0 j du) exp(−i θ i j)
        let modulated: Vec<Complex64> = f
            .iter()
            .enumerate()
            .map(|(j, v)| v * Complex64::from_polar(1.0, -k0 * du * j as f64))
            .collect();
        let out = self.czt.apply(&modulated);
        out.into_iter()
            .enumerate()
            .map(|(i, v)| v * Complex64::from_polar(1.0, -self.freq.at(i) * self.u.start))
            .collect()
    }
}

/// Trigonometric interpolant of samples that have decayed at both ends of
/// their axis. The data is zero-padded to at least twice its length so
/// nothing wraps around.
pub struct BandLimited {
    axis: Axis,
    len: usize,
    signed: Vec<Complex64>,
}

impl BandLimited {
    pub fn new(samples: &[Complex64], axis: &Axis) -> Self {
        assert_eq!(samples.len(), axis.len);
        let len = (2 * axis.len).next_power_of_two();
        let mut spectrum = vec![Complex64::new(0.0, 0.0); len];
        spectrum[..axis.len].copy_from_slice(samples);
        FftPlanner::new().plan_fft_forward(len).process(&mut spectrum);

        // reorder to signed bins −len/2 .. len/2 − 1
        let half = len / 2;
        let mut signed = Vec::with_capacity(len + 1);
        signed.extend_from_slice(&spectrum[half..]);
        signed.extend_from_slice(&spectrum[..half]);
        // the Nyquist bin is split symmetrically so real data stays real
        signed[0] *= 0.5;
        let nyquist = signed[0];
        signed.push(nyquist);
        Self {
            axis: *axis,
            len,
            signed,
        }
    }

    /// Values at every point of `targets`.
    pub fn eval(&self, targets: &Axis) -> Vec<Complex64> {
        // ψ(x) = (1/len) Σ_k ψ̂_k exp(+2πi k (x − x0)/(len dx))
        let half = self.len / 2;
        let bins = Axis {
            start: -(half as f64),
            step: 1.0,
            len: self.len + 1,
        };
        let scale = -2.0 * std::f64::consts::PI / (self.len as f64 * self.axis.step);
        let freq = Axis {
            start: scale * (targets.start - self.axis.start),
            step: scale * targets.step,
            len: targets.len,
        };
        let inv = 1.0 / self.len as f64;
        FourierSum::new(bins, freq)
            .apply(&self.signed)
            .into_iter()
            .map(|v| v * inv)
            .collect()
    }
}

/// One-shot form of [`BandLimited`].
pub fn interpolate_bandlimited(samples: &[Complex64], axis: &Axis, targets: &Axis) -> Vec<Complex64> {
    BandLimited::new(samples, axis).eval(targets)
}
