//! Steklov eigenpairs: `Δs = 0` in Ω, `∂_ν s = λ s` on ∂Ω.
//!
//! Three solvers produce a [`SteklovBasis`] of boundary traces on a periodic grid:
//!
//! - [`solve_conformal`] expands `s = Re Ψ` with `Ψ` a polynomial in the disk variable and
//!   collocates the Steklov condition pulled back by a conformal map.
//! - [`solve_weak_form`] imposes Green's identity against harmonic polynomial test functions.
//! - [`solve_collocation`] represents `s` by a single layer potential plus a constant and
//!   solves the boundary integral pencil.
//!
//! [`square_exact`] gives the closed-form spectrum of `[−1, 1]²`. Every basis is normalized
//! so that `(1 + λ_i) ∫ s_i s_j dσ = δ_ij`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{
    BoundaryCurve, ConformalBoundary, ConformalMap, Domain, Smoothness, Square,
};
use crate::layer_ops::{assemble_neumann_poincare, assemble_single_layer};
use crate::numerics::{
    eig, qr_thin, real_spectrum, solve_gevp, svd, symmetric_gevp, GevpSolution, MatrixPencil,
};
use crate::trig_tools::PeriodicGrid;

/// Gram–Schmidt treats eigenvalues within `CLUSTER_TOLERANCE · (1 + λ)` as one cluster.
pub const CLUSTER_TOLERANCE: f64 = 1e-6;

/// Singular values below this fraction of the largest are dropped by the conformal method.
pub const SVD_CUTOFF: f64 = 1e-10;

/// Highest test-function order accepted by the weak form without an explicit override.
pub const MAX_TEST_ORDER: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Conformal,
    WeakForm,
    Collocation,
    SquareExact,
}

impl Method {
    pub const NAMES: [&'static str; 4] = ["conformal", "weak-form", "collocation", "square-exact"];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Conformal => "conformal",
            Method::WeakForm => "weak-form",
            Method::Collocation => "collocation",
            Method::SquareExact => "square-exact",
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conformal" => Ok(Method::Conformal),
            "weak-form" => Ok(Method::WeakForm),
            "collocation" => Ok(Method::Collocation),
            "square-exact" => Ok(Method::SquareExact),
            _ => Err(Error::UnknownName {
                kind: "method",
                name: s.to_owned(),
            }),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Separable harmonic functions on `[−1, 1]²` that are Steklov eigenfunctions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareFamily {
    Constant,
    /// `xy`, λ = 1.
    Xy,
    /// `sin(kx) cosh(ky)`, `tan k tanh k = 1`, λ = k tanh k.
    SinCosh,
    /// `cos(kx) cosh(ky)`, `tan k + tanh k = 0`, λ = k tanh k.
    CosCosh,
    /// `cos(kx) sinh(ky)`, `tan k + coth k = 0`, λ = k coth k.
    CosSinh,
    /// `sin(kx) sinh(ky)`, `tan k = coth k`, λ = k coth k.
    SinSinh,
}

/// One closed-form square eigenfunction, possibly with x and y swapped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SquareMode {
    pub family: SquareFamily,
    pub k: f64,
    pub swapped: bool,
}

impl SquareMode {
    pub fn lambda(&self) -> f64 {
        let k = self.k;
        match self.family {
            SquareFamily::Constant => 0.0,
            SquareFamily::Xy => 1.0,
            SquareFamily::SinCosh | SquareFamily::CosCosh => k * k.tanh(),
            SquareFamily::CosSinh | SquareFamily::SinSinh => k / k.tanh(),
        }
    }

    pub fn eval(&self, p: Complex64) -> f64 {
        let (x, y) = if self.swapped { (p.im, p.re) } else { (p.re, p.im) };
        let k = self.k;
        match self.family {
            SquareFamily::Constant => 1.0,
            SquareFamily::Xy => x * y,
            SquareFamily::SinCosh => (k * x).sin() * (k * y).cosh(),
            SquareFamily::CosCosh => (k * x).cos() * (k * y).cosh(),
            SquareFamily::CosSinh => (k * x).cos() * (k * y).sinh(),
            SquareFamily::SinSinh => (k * x).sin() * (k * y).sinh(),
        }
    }
}

/// One eigenpair with its nodal boundary trace.
#[derive(Clone, Debug)]
pub struct SteklovEigenpair {
    pub lambda: f64,
    pub trace: Vec<f64>,
    /// Single layer density (collocation only). The interior potential is
    /// `𝒮[density] + density_offset`.
    pub density: Option<Vec<f64>>,
    pub density_offset: f64,
    /// Closed-form representation as a combination of square modes, when known.
    pub exact: Vec<(SquareMode, f64)>,
}

impl SteklovEigenpair {
    fn new(lambda: f64, trace: Vec<f64>) -> Self {
        Self {
            lambda,
            trace,
            density: None,
            density_offset: 0.0,
            exact: Vec::new(),
        }
    }

    /// Analytic interior value, when a closed form is attached.
    pub fn eval_exact(&self, p: Complex64) -> Option<f64> {
        if self.exact.is_empty() {
            return None;
        }
        Some(self.exact.iter().map(|(m, c)| c * m.eval(p)).sum())
    }
}

/// Solver diagnostics.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveDiagnostics {
    pub discarded_complex: usize,
    pub discarded_infinite: usize,
    /// Numerical rank of the reduced system (conformal method).
    pub rank: Option<usize>,
}

/// Ordered Steklov eigenpairs on a grid, orthonormal in the boundary form.
#[derive(Clone, Debug)]
pub struct SteklovBasis {
    pub pairs: Vec<SteklovEigenpair>,
    pub grid: PeriodicGrid,
    pub curve: Arc<dyn BoundaryCurve>,
    pub method: Method,
    /// Trapezoid weights `h |T(t_l)|`.
    pub weights: Vec<f64>,
    pub diagnostics: SolveDiagnostics,
}

impl SteklovBasis {
    fn from_pairs(
        pairs: Vec<SteklovEigenpair>,
        grid: PeriodicGrid,
        curve: Arc<dyn BoundaryCurve>,
        method: Method,
        diagnostics: SolveDiagnostics,
    ) -> Self {
        let weights = curve.quadrature_weights(&grid);
        Self {
            pairs,
            grid,
            curve,
            method,
            weights,
            diagnostics,
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.lambda).collect()
    }

    pub fn lambda(&self, i: usize) -> f64 {
        self.pairs[i].lambda
    }

    pub fn trace(&self, i: usize) -> &[f64] {
        &self.pairs[i].trace
    }

    pub fn perimeter(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `∫ u v dσ` by the trapezoidal rule.
    pub fn boundary_dot(&self, u: &[f64], v: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(u.iter().zip(v))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }

    /// Matrix of `(1 + λ_j) ∫ s_i s_j dσ` over the first `count` pairs.
    pub fn gram(&self, count: usize) -> Mat<f64> {
        let count = count.min(self.len());
        Mat::from_fn(count, count, |i, j| {
            (1.0 + self.lambda(j)) * self.boundary_dot(self.trace(i), self.trace(j))
        })
    }

    /// Keeps the first `count` pairs.
    pub fn truncate(&mut self, count: usize) {
        self.pairs.truncate(count);
    }
}

/// Gram–Schmidt within eigenvalue clusters under `(1 + λ) ∫ u v dσ`, followed by scaling
/// to unit norm and a sign convention (first component above 1e−8 in magnitude is positive).
pub fn orthonormalize(mut basis: SteklovBasis) -> Result<SteklovBasis> {
    basis
        .pairs
        .sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let weights = basis.weights.clone();
    let dot = |u: &[f64], v: &[f64]| -> f64 {
        weights.iter().zip(u.iter().zip(v)).map(|(w, (a, b))| w * a * b).sum()
    };
    let n = basis.pairs.len();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n {
            let prev = basis.pairs[end - 1].lambda;
            if basis.pairs[end].lambda - prev <= CLUSTER_TOLERANCE * (1.0 + prev.abs()) {
                end += 1;
            } else {
                break;
            }
        }
        let m = end - start;
        // rows of `t` express the new vectors in terms of the old ones
        let mut t = vec![vec![0.0; m]; m];
        let mut vecs: Vec<Vec<f64>> = Vec::with_capacity(m);
        for a in 0..m {
            let idx = start + a;
            let mut v = basis.pairs[idx].trace.clone();
            let mut coeffs = vec![0.0; m];
            coeffs[a] = 1.0;
            let before = dot(&v, &v);
            for (b, u) in vecs.iter().enumerate() {
                let p = dot(u, &v);
                for (l, x) in v.iter_mut().enumerate() {
                    *x -= p * u[l];
                }
                for c in 0..m {
                    coeffs[c] -= p * t[b][c];
                }
            }
            let after = dot(&v, &v);
            if !(after > 1e-20 * before) || !(after > 0.0) {
                return Err(Error::ZeroNorm { index: idx });
            }
            let scale = 1.0 / after.sqrt();
            v.iter_mut().for_each(|x| *x *= scale);
            coeffs.iter_mut().for_each(|c| *c *= scale);
            t[a] = coeffs;
            vecs.push(v);
        }
        let old: Vec<SteklovEigenpair> = basis.pairs[start..end].to_vec();
        for a in 0..m {
            let lambda = old[a].lambda;
            let mut s = 1.0 / (1.0 + lambda).sqrt();
            let first = vecs[a].iter().copied().find(|x| x.abs() > 1e-8).unwrap_or(1.0);
            if first < 0.0 {
                s = -s;
            }
            let coeffs: Vec<f64> = t[a].iter().map(|c| c * s).collect();
            let combine = |get: &dyn Fn(&SteklovEigenpair) -> &[f64]| -> Vec<f64> {
                let len = get(&old[0]).len();
                let mut out = vec![0.0; len];
                for (c, p) in coeffs.iter().zip(&old) {
                    if *c != 0.0 {
                        for (o, x) in out.iter_mut().zip(get(p)) {
                            *o += c * x;
                        }
                    }
                }
                out
            };
            let pair = &mut basis.pairs[start + a];
            pair.trace = vecs[a].iter().map(|x| x * s).collect();
            if old.iter().all(|p| p.density.is_some()) {
                pair.density = Some(combine(&|p| p.density.as_deref().unwrap_or(&[])));
                pair.density_offset = coeffs
                    .iter()
                    .zip(&old)
                    .map(|(c, p)| c * p.density_offset)
                    .sum();
            }
            if old.iter().all(|p| !p.exact.is_empty()) {
                let mut exact = Vec::new();
                for (c, p) in coeffs.iter().zip(&old) {
                    if *c != 0.0 {
                        exact.extend(p.exact.iter().map(|(mode, w)| (*mode, w * c)));
                    }
                }
                pair.exact = exact;
            }
        }
        start = end;
    }
    Ok(basis)
}

fn collect_real(
    values: Vec<f64>,
    vectors: &Mat<f64>,
    count: usize,
) -> Vec<(f64, Vec<f64>)> {
    let mut out: Vec<(f64, Vec<f64>)> = values
        .into_iter()
        .enumerate()
        .map(|(j, v)| (v, (0..vectors.nrows()).map(|i| vectors[(i, j)]).collect()))
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out.truncate(count);
    out
}

/// Method 3: collocation of `(−½I + 𝒦*)φ = λ 𝒮φ`.
///
/// The single layer alone cannot represent constants when the logarithmic capacity of the
/// boundary is one (the unit disk makes the pencil singular), so the trace is represented as
/// `𝒮φ + ∫ φ dσ` instead: `s = S̃φ` with `S̃ = S + 1 wᵀ`, `w = h|T|`. Eigenpairs of
/// `(−½I + K, S̃)` are exactly the Steklov eigenpairs. Where the capacity differs from one the
/// stored density is shifted by a multiple of the equilibrium density so that `s = 𝒮φ`.
pub fn solve_collocation(
    curve: Arc<dyn BoundaryCurve>,
    grid: &PeriodicGrid,
    count: usize,
) -> Result<SteklovBasis> {
    let n = grid.len();
    let count = count.min(n / 2);
    let s = assemble_single_layer(curve.as_ref(), grid)?.matrix;
    let k = assemble_neumann_poincare(curve.as_ref(), grid)?.matrix;
    let h = grid.spacing();
    let w: Vec<f64> = grid.nodes().iter().map(|&t| h * curve.speed(t)).collect();
    let a = Mat::from_fn(n, n, |i, j| k[(i, j)] - if i == j { 0.5 } else { 0.0 });
    let st = Mat::from_fn(n, n, |i, j| s[(i, j)] + w[j]);
    let pencil = MatrixPencil::new(a, st.clone())?;
    let spectrum = real_spectrum(solve_gevp(&pencil)?);
    let diagnostics = SolveDiagnostics {
        discarded_complex: spectrum.discarded_complex,
        discarded_infinite: spectrum.discarded_infinite,
        rank: None,
    };
    let found = collect_real(spectrum.values, &spectrum.vectors, count);
    if found.len() < count {
        return Err(Error::NotEnoughEigenpairs {
            requested: count,
            available: found.len(),
        });
    }
    // equilibrium density: eigenvector of the smallest eigenvalue
    let f0 = found[0].1.clone();
    let sf0: Vec<f64> = (0..n).map(|i| (0..n).map(|j| s[(i, j)] * f0[j]).sum()).collect();
    let cap = sf0.iter().sum::<f64>() / n as f64;
    let spread = sf0.iter().map(|v| (v - cap).abs()).fold(0.0, f64::max);
    let shift_ok = cap.abs() > 1e-6 && spread < 1e-6 * cap.abs().max(1.0);

    let mut pairs = Vec::with_capacity(found.len());
    for (lambda, phi) in found {
        let trace: Vec<f64> = (0..n).map(|i| (0..n).map(|j| st[(i, j)] * phi[j]).sum()).collect();
        let offset: f64 = w.iter().zip(&phi).map(|(a, b)| a * b).sum();
        let mut pair = SteklovEigenpair::new(lambda, trace);
        if shift_ok {
            let beta = offset / cap;
            pair.density = Some(phi.iter().zip(&f0).map(|(p, f)| p + beta * f).collect());
            pair.density_offset = 0.0;
        } else {
            pair.density = Some(phi);
            pair.density_offset = offset;
        }
        pairs.push(pair);
    }
    orthonormalize(SteklovBasis::from_pairs(
        pairs,
        *grid,
        curve,
        Method::Collocation,
        diagnostics,
    ))
}

/// Residual `‖(−½I + K)φ_i − λ_i (Sφ_i + offset)‖ / ‖φ_i‖` of a collocation eigenpair.
pub fn collocation_residual(basis: &SteklovBasis, i: usize) -> Result<f64> {
    Ok(collocation_residuals(basis, i..i + 1)?[0])
}

/// Residuals for a range of eigenpairs, assembling the operators once.
pub fn collocation_residuals(
    basis: &SteklovBasis,
    range: std::ops::Range<usize>,
) -> Result<Vec<f64>> {
    if range.end > basis.pairs.len() {
        return Err(Error::InvalidArgument(format!(
            "requested pair {} of {}",
            range.end,
            basis.pairs.len()
        )));
    }
    let s = assemble_single_layer(basis.curve.as_ref(), &basis.grid)?;
    let k = assemble_neumann_poincare(basis.curve.as_ref(), &basis.grid)?;
    range
        .map(|i| {
            let pair = &basis.pairs[i];
            let phi = pair
                .density
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("eigenpair has no density".into()))?;
            let sphi = s.apply(phi)?;
            let kphi = k.apply(phi)?;
            let mut r = 0.0;
            for l in 0..phi.len() {
                let v = kphi[l] - 0.5 * phi[l] - pair.lambda * (sphi[l] + pair.density_offset);
                r += v * v;
            }
            let norm = phi.iter().map(|x| x * x).sum::<f64>().sqrt();
            Ok(r.sqrt() / norm)
        })
        .collect()
}

/// A conformal map precomposed with a rotation of the disk by `delta`.
#[derive(Debug)]
struct RotatedMap {
    inner: Arc<dyn ConformalMap>,
    delta: f64,
}

impl ConformalMap for RotatedMap {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn eval(&self, w: Complex64) -> Complex64 {
        self.inner.eval(w * Complex64::cis(self.delta))
    }

    fn derivative(&self, w: Complex64) -> Result<Complex64> {
        let r = Complex64::cis(self.delta);
        Ok(self.inner.derivative(w * r)? * r)
    }

    fn second_derivative(&self, w: Complex64) -> Option<Complex64> {
        let r = Complex64::cis(self.delta);
        self.inner.second_derivative(w * r).map(|d| d * r * r)
    }

    fn speed(&self, theta: f64) -> Result<f64> {
        self.inner.speed(theta + self.delta)
    }

    fn is_polygonal(&self) -> bool {
        self.inner.is_polygonal()
    }
}

/// Method 1: `Re(ω Ψ′(ω)) = λ |f′(ω)| Re Ψ(ω)` on the unit circle with
/// `Ψ = Σ_{n=0}^{N} b_n ωⁿ`.
///
/// For polygonal maps the nodes are rotated by half a spacing so that no node hits a corner
/// preimage; the returned basis lives on the rotated parametrization.
pub fn solve_conformal(
    map: Arc<dyn ConformalMap>,
    order: usize,
    nodes: usize,
) -> Result<SteklovBasis> {
    let grid = PeriodicGrid::new(nodes)?;
    if order == 0 || 2 * order > nodes {
        return Err(Error::InvalidArgument(format!(
            "Fourier order {order} must satisfy 1 <= 2N <= L = {nodes}"
        )));
    }
    if let Some(moments) = map.speed_moments(2 * order + 1) {
        return solve_conformal_galerkin(map, &moments, order, grid);
    }
    let delta = if map.is_polygonal() { PI / nodes as f64 } else { 0.0 };
    let map: Arc<dyn ConformalMap> = if delta != 0.0 {
        Arc::new(RotatedMap { inner: map, delta })
    } else {
        map
    };
    let thetas = grid.nodes();
    let speed: Vec<f64> = thetas
        .iter()
        .map(|&t| map.speed(t))
        .collect::<Result<_>>()?;
    // columns: Re-part coefficients 0..=N, then Im-part coefficients 1..=N (minus Nyquist)
    let mut cols: Vec<(usize, bool)> = (0..=order).map(|n| (n, false)).collect();
    let nyquist_vanishes = 2 * order == nodes;
    for n in 1..=order {
        if !(nyquist_vanishes && n == order) {
            cols.push((n, true));
        }
    }
    let m = cols.len();
    let basis_val = |l: usize, (n, imag): (usize, bool)| -> f64 {
        let z = Complex64::cis(n as f64 * thetas[l]);
        if imag {
            -z.im
        } else {
            z.re
        }
    };
    let r = Mat::from_fn(nodes, m, |l, c| basis_val(l, cols[c]));
    let a = Mat::from_fn(nodes, m, |l, c| cols[c].0 as f64 * r[(l, c)]);
    let dr = Mat::from_fn(nodes, m, |l, c| speed[l] * r[(l, c)]);

    let mut diagnostics = SolveDiagnostics::default();
    let mut pairs = Vec::new();
    if m == nodes {
        let spectrum = real_spectrum(solve_gevp(&MatrixPencil::new(a, dr)?)?);
        diagnostics.discarded_complex = spectrum.discarded_complex;
        diagnostics.discarded_infinite = spectrum.discarded_infinite;
        diagnostics.rank = Some(m);
        for (lambda, x) in collect_real(spectrum.values, &spectrum.vectors, m) {
            let trace = (0..nodes)
                .map(|l| (0..m).map(|c| r[(l, c)] * x[c]).sum())
                .collect();
            pairs.push(SteklovEigenpair::new(lambda, trace));
        }
    } else {
        let d = svd(&dr)?;
        let rank = d.rank(SVD_CUTOFF);
        if rank == 0 {
            return Err(Error::RankDeficient { rank, cols: m });
        }
        diagnostics.rank = Some(rank);
        let u = d.u.subcols(0, rank).to_owned();
        let v = d.v.subcols(0, rank).to_owned();
        let vs = Mat::from_fn(m, rank, |i, j| v[(i, j)] / d.s[j]);
        let reduced = u.transpose() * (&a * &vs);
        let spectrum = real_spectrum(GevpSolution {
            pairs: eig(&reduced)?,
            discarded_infinite: 0,
        });
        let complex = spectrum.discarded_complex;
        for (lambda, y) in collect_real(spectrum.values, &spectrum.vectors, rank) {
            // trace = R x = D⁻¹ U y
            let trace = (0..nodes)
                .map(|l| (0..rank).map(|j| u[(l, j)] * y[j]).sum::<f64>() / speed[l])
                .collect();
            pairs.push(SteklovEigenpair::new(lambda, trace));
        }
        diagnostics.discarded_complex = complex;
    }
    let curve: Arc<dyn BoundaryCurve> = Arc::new(ConformalBoundary::new(
        map.clone(),
        if map.is_polygonal() {
            Smoothness::Corner
        } else {
            Smoothness::Analytic
        },
    ));
    orthonormalize(SteklovBasis::from_pairs(
        pairs,
        grid,
        curve,
        Method::Conformal,
        diagnostics,
    ))
}

/// Galerkin form of Method 1 for maps with a singular speed: testing against
/// `cos mθ`, `sin mθ` gives `diag(πn) x = λ M x`, where the mass matrix `M` of the weight
/// `|f′|` comes from its exact Fourier moments. Traces are sampled at the half-shifted nodes.
fn solve_conformal_galerkin(
    map: Arc<dyn ConformalMap>,
    moments: &[Complex64],
    order: usize,
    grid: PeriodicGrid,
) -> Result<SteklovBasis> {
    let nodes = grid.len();
    let mu = |j: i64| {
        let z = moments[j.unsigned_abs() as usize];
        if j < 0 {
            z.conj()
        } else {
            z
        }
    };
    // (n, is_sine)
    let cols: Vec<(i64, bool)> = (0..=order as i64)
        .map(|n| (n, false))
        .chain((1..=order as i64).map(|n| (n, true)))
        .collect();
    let m = cols.len();
    let mass = Mat::from_fn(m, m, |r, c| {
        let ((p, ps), (q, qs)) = (cols[r], cols[c]);
        match (ps, qs) {
            (false, false) => 0.5 * (mu(p - q) + mu(p + q)).re,
            (true, true) => 0.5 * (mu(p - q) - mu(p + q)).re,
            (false, true) => 0.5 * (mu(q + p) + mu(q - p)).im,
            (true, false) => 0.5 * (mu(p + q) + mu(p - q)).im,
        }
    });
    let stiff = Mat::from_fn(m, m, |r, c| {
        if r == c {
            PI * cols[r].0 as f64
        } else {
            0.0
        }
    });
    let (values, vectors) = symmetric_gevp(&stiff, &mass)?;
    let delta = if map.is_polygonal() { PI / nodes as f64 } else { 0.0 };
    let thetas = grid.nodes();
    let sample = Mat::from_fn(nodes, m, |l, c| {
        let (n, sine) = cols[c];
        let a = n as f64 * (thetas[l] + delta);
        if sine {
            a.sin()
        } else {
            a.cos()
        }
    });
    let traces = &sample * &vectors;
    let pairs = values
        .iter()
        .enumerate()
        .map(|(e, &lambda)| {
            SteklovEigenpair::new(lambda, (0..nodes).map(|l| traces[(l, e)]).collect())
        })
        .collect();
    let map: Arc<dyn ConformalMap> = if delta != 0.0 {
        Arc::new(RotatedMap { inner: map, delta })
    } else {
        map
    };
    let smoothness = if map.is_polygonal() {
        Smoothness::Corner
    } else {
        Smoothness::Analytic
    };
    let curve: Arc<dyn BoundaryCurve> = Arc::new(ConformalBoundary::new(map, smoothness));
    orthonormalize(SteklovBasis::from_pairs(
        pairs,
        grid,
        curve,
        Method::Conformal,
        SolveDiagnostics {
            rank: Some(m),
            ..SolveDiagnostics::default()
        },
    ))
}

/// Values and normal derivatives of the harmonic polynomials `Re zⁿ`, `Im zⁿ` at the
/// boundary nodes, columns scaled by their largest value.
fn harmonic_test_matrices(
    curve: &dyn BoundaryCurve,
    grid: &PeriodicGrid,
    order: usize,
) -> (Mat<f64>, Mat<f64>) {
    let nodes = grid.nodes();
    let points: Vec<Complex64> = nodes.iter().map(|&t| curve.point(t)).collect();
    let normals: Vec<Complex64> = nodes.iter().map(|&t| curve.quadrature_normal(t)).collect();
    let m = 2 * order + 1;
    let len = nodes.len();
    let mut f = Mat::<f64>::zeros(len, m);
    let mut fd = Mat::<f64>::zeros(len, m);
    for l in 0..len {
        let z = points[l];
        let nu = normals[l];
        let mut zn = Complex64::new(1.0, 0.0);
        let mut dzn = Complex64::new(0.0, 0.0);
        for n in 0..=order {
            // ∇ Re zⁿ = (Re p, −Im p), ∇ Im zⁿ = (Im p, Re p), p = n z^{n−1}
            let p = dzn;
            let col = if n == 0 { 0 } else { 2 * n - 1 };
            f[(l, col)] = zn.re;
            fd[(l, col)] = nu.re * p.re - nu.im * p.im;
            if n > 0 {
                f[(l, col + 1)] = zn.im;
                fd[(l, col + 1)] = nu.re * p.im + nu.im * p.re;
            }
            dzn = (n + 1) as f64 * zn;
            zn *= z;
        }
    }
    for c in 0..m {
        let scale = (0..len).map(|l| f[(l, c)].abs()).fold(0.0, f64::max);
        if scale > 0.0 {
            for l in 0..len {
                f[(l, c)] /= scale;
                fd[(l, c)] /= scale;
            }
        }
    }
    (f, fd)
}

/// Method 2 with the default order cap.
pub fn solve_weak_form(
    curve: Arc<dyn BoundaryCurve>,
    grid: &PeriodicGrid,
    order: usize,
) -> Result<SteklovBasis> {
    solve_weak_form_with(curve, grid, order, false)
}

/// Method 2: `∫ s ∂_ν v dσ = λ ∫ s v dσ` for the harmonic polynomials `v` of degree at most
/// `order`, with `s` in the span of the same polynomials.
///
/// With `√Σ F = QR` (Σ the trapezoid weights), `B = F R⁻¹` has `Σ`-orthonormal columns, and
/// writing `s = B c` turns the condition into the standard eigenproblem
/// `B_∂ᵀ Σ B c = λ c` of size `2·order + 1`.
pub fn solve_weak_form_with(
    curve: Arc<dyn BoundaryCurve>,
    grid: &PeriodicGrid,
    order: usize,
    allow_high_order: bool,
) -> Result<SteklovBasis> {
    if order > MAX_TEST_ORDER && !allow_high_order {
        return Err(Error::InvalidArgument(format!(
            "test order {order} exceeds {MAX_TEST_ORDER}; boundary radii overflow the basis"
        )));
    }
    let len = grid.len();
    let m = 2 * order + 1;
    if m > len {
        return Err(Error::InvalidArgument(format!(
            "{m} test functions exceed the {len} nodes"
        )));
    }
    let (f, fd) = harmonic_test_matrices(curve.as_ref(), grid, order);
    let sigma = curve.quadrature_weights(grid);
    let sf = Mat::from_fn(len, m, |l, c| sigma[l].sqrt() * f[(l, c)]);
    let (_, r) = qr_thin(&sf)?;
    // B = F R⁻¹ and B_∂ = F_∂ R⁻¹, via Rᵀ Bᵀ = Fᵀ
    let rt = r.transpose().to_owned();
    let lu = rt.partial_piv_lu();
    let b = lu.solve(f.transpose()).transpose().to_owned();
    let bd = lu.solve(fd.transpose()).transpose().to_owned();
    let sb = Mat::from_fn(len, m, |l, c| sigma[l] * b[(l, c)]);
    let k = bd.transpose() * &sb;
    let spectrum = real_spectrum(GevpSolution {
        pairs: eig(&k)?,
        discarded_infinite: 0,
    });
    let complex = spectrum.discarded_complex;
    let mut pairs = Vec::new();
    for (lambda, c) in collect_real(spectrum.values, &spectrum.vectors, m) {
        let trace = (0..len)
            .map(|l| (0..m).map(|j| b[(l, j)] * c[j]).sum())
            .collect();
        pairs.push(SteklovEigenpair::new(lambda, trace));
    }
    let diagnostics = SolveDiagnostics {
        discarded_complex: complex,
        discarded_infinite: 0,
        rank: Some(m),
    };
    orthonormalize(SteklovBasis::from_pairs(
        pairs,
        *grid,
        curve,
        Method::WeakForm,
        diagnostics,
    ))
}

/// Largest `|∫ s_i ∂_ν v dσ − λ_i ∫ s_i v dσ|` over harmonic test polynomials `v` of degree at
/// most `order`, each scaled to unit maximum on the boundary.
pub fn weak_residual(basis: &SteklovBasis, i: usize, order: usize) -> f64 {
    let (f, fd) = harmonic_test_matrices(basis.curve.as_ref(), &basis.grid, order);
    let s = basis.trace(i);
    let lambda = basis.lambda(i);
    (0..f.ncols())
        .map(|c| {
            let mut acc = 0.0;
            for l in 0..s.len() {
                acc += basis.weights[l] * s[l] * (fd[(l, c)] - lambda * f[(l, c)]);
            }
            acc.abs()
        })
        .fold(0.0, f64::max)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (a, b) = (lo, hi);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracketing { lo: a, hi: b });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Closed-form eigenvalues of `[−1, 1]²`, ascending, with their modes.
pub fn square_modes(count: usize) -> Result<Vec<SquareMode>> {
    let mut modes = vec![
        SquareMode {
            family: SquareFamily::Constant,
            k: 0.0,
            swapped: false,
        },
        SquareMode {
            family: SquareFamily::Xy,
            k: 0.0,
            swapped: false,
        },
    ];
    // λ ≈ k for large k and each period contributes eight modes
    let periods = count / 8 + 3;
    let eps = 1e-12;
    for m in 0..=periods {
        let mf = m as f64;
        let right = (mf * PI + eps, mf * PI + PI / 2.0 - eps);
        let left = (mf * PI - PI / 2.0 + eps, mf * PI - eps);
        let mut ks = vec![(
            SquareFamily::SinCosh,
            bisect(|k| k.sin() * k.tanh() - k.cos(), right.0, right.1)?,
        )];
        if m >= 1 {
            ks.push((
                SquareFamily::CosCosh,
                bisect(|k| k.sin() + k.cos() * k.tanh(), left.0, left.1)?,
            ));
            ks.push((
                SquareFamily::CosSinh,
                bisect(|k| k.sin() * k.tanh() + k.cos(), left.0, left.1)?,
            ));
            ks.push((
                SquareFamily::SinSinh,
                bisect(|k| k.sin() - k.cos() * k.tanh(), right.0, right.1)?,
            ));
        }
        for (family, k) in ks {
            for swapped in [false, true] {
                modes.push(SquareMode { family, k, swapped });
            }
        }
    }
    modes.sort_by(|a, b| a.lambda().total_cmp(&b.lambda()));
    modes.truncate(count);
    Ok(modes)
}

/// Exact eigenpairs of the square sampled on the arclength grid of [`Square`].
pub fn square_exact(count: usize, grid: &PeriodicGrid) -> Result<SteklovBasis> {
    let curve: Arc<dyn BoundaryCurve> = Arc::new(Square);
    let points: Vec<Complex64> = grid.nodes().iter().map(|&t| curve.point(t)).collect();
    let pairs = square_modes(count)?
        .into_iter()
        .map(|mode| {
            let trace = points.iter().map(|&p| mode.eval(p)).collect();
            let mut pair = SteklovEigenpair::new(mode.lambda(), trace);
            pair.exact = vec![(mode, 1.0)];
            pair
        })
        .collect();
    orthonormalize(SteklovBasis::from_pairs(
        pairs,
        *grid,
        curve,
        Method::SquareExact,
        SolveDiagnostics::default(),
    ))
}

/// Parameters for [`solve`].
#[derive(Clone, Debug)]
pub struct SolveParams {
    /// Grid size `L`.
    pub nodes: usize,
    /// Number of eigenpairs to keep.
    pub count: usize,
    /// Polynomial order `N` of the conformal method (default `min(L/2, 400)`).
    pub fourier_order: Option<usize>,
    /// Test order of the weak form (default 40, i.e. 81 test functions).
    pub test_order: usize,
    /// Allows the conformal method on the square and weak-form orders above the cap.
    pub experimental: bool,
}

impl SolveParams {
    pub fn new(nodes: usize, count: usize) -> Self {
        Self {
            nodes,
            count,
            fourier_order: None,
            test_order: 40,
            experimental: false,
        }
    }
}

fn routing(method: Method, domain: Domain, reason: &str) -> Error {
    Error::Routing {
        method: method.name().into(),
        domain: domain.to_string(),
        reason: reason.into(),
    }
}

/// Solves a builtin domain with the requested method, applying the routing rules: the square
/// is served by `weak-form` and `square-exact` (and by `conformal` only when experimental);
/// collocation rejects polygons; `conformal` needs a known map.
pub fn solve(domain: Domain, method: Method, params: &SolveParams) -> Result<SteklovBasis> {
    let grid = PeriodicGrid::new(params.nodes)?;
    let mut basis = match method {
        Method::Collocation => {
            if domain == Domain::Square {
                return Err(routing(method, domain, "collocation does not work on polygons"));
            }
            solve_collocation(domain.curve(), &grid, params.count)?
        }
        Method::Conformal => {
            let map = domain
                .conformal_map()
                .ok_or_else(|| routing(method, domain, "no conformal map is available"))?;
            if map.is_polygonal() && !params.experimental {
                return Err(routing(
                    method,
                    domain,
                    "the square map has singular speed; pass the experimental flag",
                ));
            }
            let order = params.fourier_order.unwrap_or((params.nodes / 2).min(400));
            solve_conformal(map, order, params.nodes)?
        }
        Method::WeakForm => {
            solve_weak_form_with(domain.curve(), &grid, params.test_order, params.experimental)?
        }
        Method::SquareExact => {
            if domain != Domain::Square {
                return Err(routing(method, domain, "closed forms exist only for the square"));
            }
            if params.nodes % 8 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "square grids need L divisible by 8 so corners are nodes, got {}",
                    params.nodes
                )));
            }
            square_exact(params.count, &grid)?
        }
    };
    if basis.len() < params.count {
        return Err(Error::NotEnoughEigenpairs {
            requested: params.count,
            available: basis.len(),
        });
    }
    basis.truncate(params.count);
    Ok(basis)
}
