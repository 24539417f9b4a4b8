//! Periodic grids, trapezoidal quadrature, discrete Fourier analysis, trigonometric
//! interpolation and the quadrature weights for the logarithmic kernel.
//!
//! The node convention is fixed project-wide: `t_l = 2πl/L` for `l = 0..L`, on `[0, 2π)`.

use std::f64::consts::{PI, TAU};

use faer::Mat;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// `L` equispaced nodes on `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeriodicGrid {
    len: usize,
}

impl PeriodicGrid {
    /// `len` must be even and at least 8.
    pub fn new(len: usize) -> Result<Self> {
        if len < 8 || len % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "grid size must be even and >= 8, got {len}"
            )));
        }
        Ok(Self { len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.len as f64
    }

    pub fn node(&self, l: usize) -> f64 {
        TAU * l as f64 / self.len as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len).map(|l| self.node(l)).collect()
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..self.len).map(|l| f(self.node(l))).collect()
    }

    fn check(&self, values: &[f64]) -> Result<()> {
        if values.len() != self.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: values.len(),
            });
        }
        Ok(())
    }
}

/// `h Σ values_l speed_l`, the trapezoidal approximation of `∫_{∂Ω} v dσ`.
pub fn trapezoid(values: &[f64], speed: &[f64], grid: &PeriodicGrid) -> Result<f64> {
    grid.check(values)?;
    grid.check(speed)?;
    let sum: f64 = values.iter().zip(speed).map(|(v, s)| v * s).sum();
    Ok(sum * grid.spacing())
}

/// Coefficients `c_n`, `|n| ≤ N`, of `Σ c_n e^{int}`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoefficients {
    order: usize,
    coeffs: Vec<Complex64>,
}

impl FourierCoefficients {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * order + 1],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `c_n`, zero outside `|n| ≤ N`.
    pub fn get(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.order {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[(n + self.order as i64) as usize]
    }

    pub fn set(&mut self, n: i64, value: Complex64) {
        assert!(n.unsigned_abs() as usize <= self.order, "index {n} out of range");
        self.coeffs[(n + self.order as i64) as usize] = value;
    }

    /// Evaluates the real part of the series at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        let mut acc = self.get(0).re;
        for n in 1..=self.order as i64 {
            let e = Complex64::cis(n as f64 * t);
            acc += (self.get(n) * e + self.get(-n) * e.conj()).re;
        }
        acc
    }
}

fn fft(values: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::new();
    let plan = if inverse {
        planner.plan_fft_inverse(values.len())
    } else {
        planner.plan_fft_forward(values.len())
    };
    plan.process(values);
}

/// Balanced discrete Fourier transform with `|n| ≤ L/2`; the Nyquist term is split evenly
/// between `±L/2`.
pub fn dft(values: &[f64], grid: &PeriodicGrid) -> Result<FourierCoefficients> {
    grid.check(values)?;
    let len = grid.len();
    let half = len / 2;
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft(&mut buf, false);
    let scale = 1.0 / len as f64;
    let mut out = FourierCoefficients::zeros(half);
    for n in 0..half {
        out.set(n as i64, buf[n] * scale);
        if n > 0 {
            out.set(-(n as i64), buf[len - n] * scale);
        }
    }
    let nyq = buf[half] * scale * 0.5;
    out.set(half as i64, nyq);
    out.set(-(half as i64), nyq);
    Ok(out)
}

/// Nodal values of a Fourier series on `grid`. Coefficients beyond `L/2` alias.
pub fn idft(coeffs: &FourierCoefficients, grid: &PeriodicGrid) -> Vec<f64> {
    let len = grid.len();
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    let order = coeffs.order() as i64;
    for n in -order..=order {
        let k = n.rem_euclid(len as i64) as usize;
        buf[k] += coeffs.get(n);
    }
    fft(&mut buf, true);
    buf.iter().map(|c| c.re).collect()
}

/// Value at `tau` of the balanced trigonometric interpolant of nodal data.
pub fn trig_interp_eval(values: &[f64], grid: &PeriodicGrid, tau: f64) -> Result<f64> {
    Ok(TrigInterpolant::new(values, grid)?.eval(tau))
}

/// Trigonometric interpolant prepared for repeated evaluation.
#[derive(Clone, Debug)]
pub struct TrigInterpolant {
    coeffs: FourierCoefficients,
}

impl TrigInterpolant {
    pub fn new(values: &[f64], grid: &PeriodicGrid) -> Result<Self> {
        Ok(Self {
            coeffs: dft(values, grid)?,
        })
    }

    pub fn coefficients(&self) -> &FourierCoefficients {
        &self.coeffs
    }

    pub fn eval(&self, tau: f64) -> f64 {
        self.coeffs.eval(tau)
    }
}

/// Resamples nodal data onto another grid through its trigonometric interpolant
/// (zero padding or truncation in frequency).
pub fn resample(values: &[f64], from: &PeriodicGrid, to: &PeriodicGrid) -> Result<Vec<f64>> {
    let c = dft(values, from)?;
    if to.len() >= from.len() {
        return Ok(idft(&c, to));
    }
    let half = to.len() / 2;
    let mut trunc = FourierCoefficients::zeros(half);
    for n in -(half as i64)..=half as i64 {
        trunc.set(n, c.get(n));
    }
    Ok(idft(&trunc, to))
}

/// First row `r(d)` of the circulant weight matrix: `R_{kj} = r((k − j) mod L)`.
pub fn log_kernel_weight_row(grid: &PeriodicGrid) -> Vec<f64> {
    let len = grid.len();
    let n = len / 2;
    let nf = n as f64;
    (0..len)
        .map(|d| {
            let s = TAU * d as f64 / len as f64;
            let series: f64 = (1..n).map(|m| (m as f64 * s).cos() / m as f64).sum();
            -(TAU / nf) * series - (PI / (nf * nf)) * (nf * s).cos()
        })
        .collect()
}

/// Weights `R` with `Σ_j R_{kj} f(t_j) = ∫_0^{2π} log(4 sin²((t_k − t)/2)) f(t) dt` for every
/// trigonometric polynomial `f` of degree below `L/2`.
pub fn log_kernel_weights(grid: &PeriodicGrid) -> Mat<f64> {
    let row = log_kernel_weight_row(grid);
    let len = grid.len();
    Mat::from_fn(len, len, |k, j| row[(k + len - j) % len])
}

/// Gregory end-corrected trapezoid weights on `intervals + 1` nodes of unit spacing.
///
/// Corrections use differences up to `order` (at most 6), which integrates polynomials of
/// degree `order` exactly.
pub fn gregory_weights(intervals: usize, order: usize) -> Result<Vec<f64>> {
    const GAMMA: [f64; 6] = [
        1.0 / 12.0,
        1.0 / 24.0,
        19.0 / 720.0,
        3.0 / 160.0,
        863.0 / 60480.0,
        275.0 / 24192.0,
    ];
    if order > GAMMA.len() || intervals < 2 * order.max(1) {
        return Err(Error::InvalidArgument(format!(
            "Gregory order {order} needs at least {} intervals, got {intervals}",
            2 * order.max(1)
        )));
    }
    let mut w = vec![1.0; intervals + 1];
    w[0] = 0.5;
    w[intervals] = 0.5;
    let binom = |k: usize, j: usize| -> f64 {
        (0..j).fold(1.0, |acc, i| acc * (k - i) as f64 / (i + 1) as f64)
    };
    for k in 1..=order {
        let c = GAMMA[k - 1];
        let sign_k = if k % 2 == 0 { 1.0 } else { -1.0 };
        for j in 0..=k {
            let b = binom(k, j);
            // ∇^k f_n = Σ_j (−1)^j C(k,j) f_{n−j}
            let back = if j % 2 == 0 { b } else { -b };
            w[intervals - j] -= c * back;
            // (−1)^k Δ^k f_0 = Σ_j (−1)^j C(k,j) f_j
            let fwd = if (k - j) % 2 == 0 { b } else { -b };
            w[j] -= c * sign_k * fwd;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn grid(l: usize) -> PeriodicGrid {
        PeriodicGrid::new(l).unwrap()
    }

    #[test]
    fn grid_contract() {
        assert!(PeriodicGrid::new(6).is_err());
        assert!(PeriodicGrid::new(9).is_err());
        let g = grid(16);
        let nodes = g.nodes();
        assert_eq!(nodes[0], 0.0);
        for w in nodes.windows(2) {
            assert_abs_diff_eq!(w[1] - w[0], g.spacing(), epsilon = 1e-15);
        }
    }

    #[test]
    fn trapezoid_examples() {
        let g = grid(64);
        let ones = vec![1.0; 64];
        assert_abs_diff_eq!(trapezoid(&ones, &ones, &g).unwrap(), TAU, epsilon = 1e-13);
        let c2 = g.sample(|t| t.cos().powi(2));
        assert_abs_diff_eq!(trapezoid(&c2, &ones, &g).unwrap(), PI, epsilon = 1e-13);
        assert!(matches!(
            trapezoid(&ones[..10], &ones, &g),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn trapezoid_converges_geometrically_for_exp_cos() {
        let exact = {
            let g = grid(512);
            trapezoid(&g.sample(|t| t.cos().exp()), &vec![1.0; 512], &g).unwrap()
        };
        let err = |l: usize| {
            let g = grid(l);
            (trapezoid(&g.sample(|t| t.cos().exp()), &vec![1.0; l], &g).unwrap() - exact).abs()
        };
        // errors reach round-off quickly; compare where still resolvable
        let e8 = err(8);
        let e16 = err(16);
        assert!(e8 / e16.max(1e-300) >= 10.0);
        for l in [32, 64, 128] {
            assert!(err(l) <= 1e-13 || err(l) / err(2 * l).max(1e-300) >= 10.0);
        }
    }

    #[test]
    fn dft_examples() {
        let g = grid(32);
        let c = dft(&g.sample(|t| (3.0 * t).cos()), &g).unwrap();
        for n in -16i64..=16 {
            let expected = if n.abs() == 3 { 0.5 } else { 0.0 };
            assert_abs_diff_eq!(c.get(n).re, expected, epsilon = 1e-14);
            assert_abs_diff_eq!(c.get(n).im, 0.0, epsilon = 1e-14);
        }
        let c1 = dft(&vec![1.0; 32], &g).unwrap();
        assert_abs_diff_eq!(c1.get(0).re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn nyquist_mode_round_trips() {
        let g = grid(16);
        let v = g.sample(|t| (8.0 * t).cos());
        let c = dft(&v, &g).unwrap();
        assert_abs_diff_eq!(c.get(8).re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(c.get(-8).re, 0.5, epsilon = 1e-14);
        let back = idft(&c, &g);
        for (a, b) in v.iter().zip(&back) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn interpolation_examples() {
        let g = grid(32);
        let v = g.sample(|t| (2.0 * t).sin());
        assert_abs_diff_eq!(trig_interp_eval(&v, &g, 0.3).unwrap(), 0.6f64.sin(), epsilon = 1e-12);
        for l in 0..32 {
            assert_abs_diff_eq!(trig_interp_eval(&v, &g, g.node(l)).unwrap(), v[l], epsilon = 1e-13);
        }
        let g = grid(64);
        let f = |t: f64| t.cos().exp();
        let interp = TrigInterpolant::new(&g.sample(f), &g).unwrap();
        for k in 0..50 {
            let tau = 0.123 + 0.1234567 * k as f64;
            assert_abs_diff_eq!(interp.eval(tau), f(tau), epsilon = 1e-10);
        }
    }

    #[test]
    fn resample_reproduces_band_limited_data() {
        let f = |t: f64| (3.0 * t).sin() + 0.5 * (5.0 * t).cos();
        let a = grid(32);
        let b = grid(96);
        let up = resample(&a.sample(f), &a, &b).unwrap();
        for (l, v) in up.iter().enumerate() {
            assert_abs_diff_eq!(*v, f(b.node(l)), epsilon = 1e-13);
        }
        let down = resample(&up, &b, &a).unwrap();
        for (l, v) in down.iter().enumerate() {
            assert_abs_diff_eq!(*v, f(a.node(l)), epsilon = 1e-13);
        }
    }

    #[test]
    fn gregory_weights_integrate_polynomials() {
        for order in 1..=6 {
            let n = 20;
            let w = gregory_weights(n, order).unwrap();
            for deg in 0..=order {
                let q: f64 = w.iter().enumerate().map(|(j, wj)| wj * (j as f64).powi(deg as i32)).sum();
                let exact = (n as f64).powi(deg as i32 + 1) / (deg as f64 + 1.0);
                assert!((q - exact).abs() <= 1e-9 * exact.max(1.0), "order {order} degree {deg}");
            }
        }
        assert!(gregory_weights(5, 4).is_err());
    }

    #[test]
    fn log_weight_identities() {
        let g = grid(64);
        let r = log_kernel_weights(&g);
        for k in 0..64 {
            let s: f64 = (0..64).map(|j| r[(k, j)]).sum();
            assert_abs_diff_eq!(s, 0.0, epsilon = 1e-12);
        }
        for m in 1..32 {
            for k in [0usize, 5, 40] {
                let tk = g.node(k);
                let s: f64 = (0..64).map(|j| r[(k, j)] * (m as f64 * (tk - g.node(j))).cos()).sum();
                assert_abs_diff_eq!(s, -TAU / m as f64, epsilon = 1e-12);
            }
        }
        for k in 0..64 {
            for j in 0..64 {
                assert_abs_diff_eq!(r[(k, j)], r[((k + 1) % 64, (j + 1) % 64)], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn log_weights_match_dense_quadrature_oracle() {
        // oracle: integrate log(4 sin²(s/2)) f(t_k − s) by a midpoint rule in the variable
        // s = u³ mapping, which resolves the logarithmic endpoint singularities
        let g = grid(16);
        let r = log_kernel_weights(&g);
        let f = |t: f64| (2.0 * t).cos() + 0.3 * t.sin() + 0.1;
        let k = 3;
        let tk = g.node(k);
        let quad: f64 = (0..16).map(|j| r[(k, j)] * f(g.node(j))).sum();
        let n = 400_000;
        let mut oracle = 0.0;
        for i in 0..n {
            let u = (i as f64 + 0.5) / n as f64;
            // s in (0, π] from both ends: s = π u³ and s = 2π − π u³
            let s = PI * u * u * u;
            let ds = 3.0 * PI * u * u / n as f64;
            let w = (4.0 * (s / 2.0).sin().powi(2)).ln();
            oracle += w * (f(tk - s) + f(tk + s)) * ds;
        }
        assert_abs_diff_eq!(quad, oracle, epsilon = 1e-8);
    }

    proptest! {
        #[test]
        fn dft_round_trip(v in proptest::collection::vec(-10.0f64..10.0, 16)) {
            let g = grid(16);
            let c = dft(&v, &g).unwrap();
            let back = idft(&c, &g);
            for (a, b) in v.iter().zip(&back) {
                prop_assert!((a - b).abs() <= 1e-13 * 10.0);
            }
            for n in 0..=8i64 {
                prop_assert!((c.get(-n) - c.get(n).conj()).norm() <= 1e-12);
            }
        }

        #[test]
        fn interpolant_hits_nodes(v in proptest::collection::vec(-1.0f64..1.0, 24), l in 0usize..24) {
            let g = grid(24);
            let p = TrigInterpolant::new(&v, &g).unwrap();
            prop_assert!((p.eval(g.node(l)) - v[l]).abs() <= 1e-12);
        }
    }
}
