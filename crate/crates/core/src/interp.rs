//! Local polynomial interpolation on uniform grids, with zero extension
//! outside the sampled window.

use crate::grid::Axis;

/// Lagrange interpolation through the `order` samples nearest to `x`
/// (`order` even). Samples outside the array count as zero.
pub fn lagrange(values: &[f64], axis: &Axis, x: f64, order: usize) -> f64 {
    debug_assert!(order >= 2 && order.is_multiple_of(2));
    let t = axis.position(x);
    let n = values.len() as isize;
    let half = (order / 2) as isize;
    if t < -(half as f64) || t > (n - 1 + half) as f64 {
        return 0.0;
    }
    let base = t.floor() as isize;
    let frac = t - base as f64;
    if frac == 0.0 {
        return if (0..n).contains(&base) { values[base as usize] } else { 0.0 };
    }
    let first = base - half + 1;
    let mut acc = 0.0;
    for i in 0..order as isize {
        let idx = first + i;
        if !(0..n).contains(&idx) {
            continue;
        }
        let node = (idx - base) as f64;
        let mut weight = 1.0;
        for j in 0..order as isize {
            if j != i {
                let other = (first + j - base) as f64;
                weight *= (frac - other) / (node - other);
            }
        }
        acc += weight * values[idx as usize];
    }
    acc
}

/// Bicubic Hermite interpolation on a row-major grid (`q` outer, `p`
/// inner). Partial derivatives at the nodes come from fourth-order centered
/// differences, which keeps the scheme fourth-order accurate overall.
pub struct Bicubic<'a> {
    q: Axis,
    p: Axis,
    values: &'a [f64],
    dq: Vec<f64>,
    dp: Vec<f64>,
    dqp: Vec<f64>,
}

impl<'a> Bicubic<'a> {
    pub fn new(q: Axis, p: Axis, values: &'a [f64]) -> Self {
        assert_eq!(values.len(), q.len * p.len);
        let at = |i: isize, j: isize| -> f64 {
            if i < 0 || j < 0 || i >= q.len as isize || j >= p.len as isize {
                0.0
            } else {
                values[i as usize * p.len + j as usize]
            }
        };
        let mut dq = vec![0.0; values.len()];
        let mut dp = vec![0.0; values.len()];
        for i in 0..q.len as isize {
            for j in 0..p.len as isize {
                let k = i as usize * p.len + j as usize;
                dq[k] = d4(|s| at(i + s, j)) / q.step;
                dp[k] = d4(|s| at(i, j + s)) / p.step;
            }
        }
        let mut dqp = vec![0.0; values.len()];
        let dp_at = |i: isize, j: isize| -> f64 {
            if i < 0 || i >= q.len as isize {
                0.0
            } else {
                dp[i as usize * p.len + j as usize]
            }
        };
        for i in 0..q.len as isize {
            for j in 0..p.len {
                dqp[i as usize * p.len + j] = d4(|s| dp_at(i + s, j as isize)) / q.step;
            }
        }
        Self { q, p, values, dq, dp, dqp }
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let tx = self.q.position(x);
        let ty = self.p.position(y);
        let (nq, np) = (self.q.len as f64, self.p.len as f64);
        if tx < 0.0 || ty < 0.0 || tx > nq - 1.0 || ty > np - 1.0 {
            return 0.0;
        }
        let i = (tx.floor() as usize).min(self.q.len - 2);
        let j = (ty.floor() as usize).min(self.p.len - 2);
        let u = tx - i as f64;
        let v = ty - j as f64;
        let (hq, hp) = (self.q.step, self.p.step);

        let hu = hermite(u);
        let hv = hermite(v);
        let mut acc = 0.0;
        for (a, (bu0, bu1)) in [(0usize, (hu.0, hu.2)), (1, (hu.1, hu.3))] {
            for (b, (bv0, bv1)) in [(0usize, (hv.0, hv.2)), (1, (hv.1, hv.3))] {
                let k = (i + a) * self.p.len + j + b;
                acc += bu0 * bv0 * self.values[k]
                    + bu1 * hq * bv0 * self.dq[k]
                    + bu0 * bv1 * hp * self.dp[k]
                    + bu1 * hq * bv1 * hp * self.dqp[k];
            }
        }
        acc
    }
}

fn d4(f: impl Fn(isize) -> f64) -> f64 {
    (f(-2) - 8.0 * f(-1) + 8.0 * f(1) - f(2)) / 12.0
}

/// Cubic Hermite basis (h00, h01, h10, h11) where h0x weight values at the
/// left/right node and h1x weight (unit-step) slopes.
fn hermite(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    (
        2.0 * t3 - 3.0 * t2 + 1.0,
        -2.0 * t3 + 3.0 * t2,
        t3 - 2.0 * t2 + t,
        t3 - t2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrange_is_exact_for_polynomials() {
        let axis = Axis::linspace(-1.0, 1.0, 41).unwrap();
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(3) - x.powi(5);
        let vals: Vec<f64> = axis.points().into_iter().map(f).collect();
        for x in [-0.73, -0.111, 0.0, 0.3333, 0.52] {
            assert!((lagrange(&vals, &axis, x, 6) - f(x)).abs() < 1e-13);
        }
        assert_eq!(lagrange(&vals, &axis, 5.0, 6), 0.0);
    }

    #[test]
    fn bicubic_fourth_order() {
        let f = |x: f64, y: f64| (-(x * x) - 0.5 * y * y + 0.3 * x * y).exp();
        let err = |h: f64| {
            let n = (8.0 / h) as usize + 1;
            let q = Axis::linspace(-4.0, 4.0, n).unwrap();
            let p = Axis::linspace(-4.0, 4.0, n).unwrap();
            let vals: Vec<f64> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| f(q.at(i), p.at(j)))
                .collect();
            let b = Bicubic::new(q, p, &vals);
            let mut worst: f64 = 0.0;
            for k in 0..200 {
                let x = -1.5 + 3.0 * (k as f64 * 0.618034).fract();
                let y = -1.5 + 3.0 * (k as f64 * 0.414214).fract();
                worst = worst.max((b.eval(x, y) - f(x, y)).abs());
            }
            worst
        };
        let (e1, e2) = (err(0.1), err(0.05));
        assert!(e1 / e2 > 12.0, "ratio {}", e1 / e2);
        assert!(e2 < 1e-5);
    }
}
