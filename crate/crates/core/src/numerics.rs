//! Dense linear algebra used by the solvers, backed by `faer`.

use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Eigenvalues above this magnitude are treated as infinite.
pub const INFINITE_EIGENVALUE: f64 = 1e12;

/// Relative imaginary part above which an eigenpair is not considered real.
pub const COMPLEX_TOLERANCE: f64 = 1e-8;

/// A square pencil `(A, B)` for `A v = λ B v`.
#[derive(Clone, Debug)]
pub struct MatrixPencil {
    a: Mat<f64>,
    b: Mat<f64>,
}

impl MatrixPencil {
    pub fn new(a: Mat<f64>, b: Mat<f64>) -> Result<Self> {
        let n = a.nrows();
        for (m, name) in [(&a, "A"), (&b, "B")] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::InvalidArgument(format!(
                    "pencil matrix {name} is {}x{}, expected {n}x{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if !all_finite(m) {
                return Err(Error::InvalidArgument(format!(
                    "pencil matrix {name} has non-finite entries"
                )));
            }
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &Mat<f64> {
        &self.a
    }

    pub fn b(&self) -> &Mat<f64> {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }
}

fn all_finite(m: &Mat<f64>) -> bool {
    (0..m.ncols()).all(|j| (0..m.nrows()).all(|i| m[(i, j)].is_finite()))
}

/// One (possibly complex) eigenpair.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: Complex64,
    pub vector: Vec<Complex64>,
}

/// Finite eigenpairs of a pencil, sorted by real part, and the number of infinite or NaN
/// eigenvalues that were dropped.
#[derive(Clone, Debug, Default)]
pub struct GevpSolution {
    pub pairs: Vec<EigenPair>,
    pub discarded_infinite: usize,
}

/// Real eigenpairs with unit-norm real eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct RealSpectrum {
    pub values: Vec<f64>,
    pub vectors: Mat<f64>,
    pub discarded_complex: usize,
    pub discarded_infinite: usize,
}

/// Solves `A v = λ B v`.
///
/// When `B` is comfortably invertible the pencil is reduced to `B⁻¹A` and handed to the
/// standard nonsymmetric solver, which is much faster than QZ at the sizes used here.
/// Otherwise the QZ algorithm is used so that singular `B` yields (discarded) infinite
/// eigenvalues.
pub fn solve_gevp(pencil: &MatrixPencil) -> Result<GevpSolution> {
    let n = pencil.dim();
    if n == 0 {
        return Ok(GevpSolution::default());
    }
    let lu = pencil.b.partial_piv_lu();
    let u = lu.U();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n {
        let d = u[(i, i)].abs();
        lo = lo.min(d);
        hi = hi.max(d);
    }
    let raw: Vec<(Complex64, Vec<Complex64>)> = if hi > 0.0 && lo > 1e-10 * hi {
        let c = lu.solve(&pencil.a);
        if !all_finite(&c) {
            return Err(Error::NoConvergence);
        }
        eig_raw(&c)?
    } else {
        let g = pencil
            .a
            .generalized_eigen(&pencil.b)
            .map_err(|_| Error::NoConvergence)?;
        let sa = g.S_a().column_vector();
        let sb = g.S_b().column_vector();
        let vecs = g.U();
        (0..n)
            .map(|j| {
                let value = if sb[j].norm() == 0.0 {
                    Complex64::new(f64::INFINITY, 0.0)
                } else {
                    sa[j] / sb[j]
                };
                (value, (0..n).map(|i| vecs[(i, j)]).collect())
            })
            .collect()
    };
    let mut pairs = Vec::with_capacity(raw.len());
    let mut discarded_infinite = 0;
    for (value, vector) in raw {
        if !value.re.is_finite() || !value.im.is_finite() || value.norm() > INFINITE_EIGENVALUE {
            discarded_infinite += 1;
            continue;
        }
        pairs.push(EigenPair { value, vector });
    }
    pairs.sort_by(|x, y| x.value.re.total_cmp(&y.value.re));
    Ok(GevpSolution {
        pairs,
        discarded_infinite,
    })
}

fn eig_raw(m: &Mat<f64>) -> Result<Vec<(Complex64, Vec<Complex64>)>> {
    let n = m.nrows();
    let e = m.eigen().map_err(|_| Error::NoConvergence)?;
    let s = e.S().column_vector();
    let u = e.U();
    Ok((0..n)
        .map(|j| (s[j], (0..n).map(|i| u[(i, j)]).collect()))
        .collect())
}

/// Standard eigenproblem `M v = λ v`, sorted by real part.
pub fn eig(m: &Mat<f64>) -> Result<Vec<EigenPair>> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidArgument("eig needs a square matrix".into()));
    }
    let mut pairs: Vec<EigenPair> = eig_raw(m)?
        .into_iter()
        .map(|(value, vector)| EigenPair { value, vector })
        .collect();
    pairs.sort_by(|x, y| x.value.re.total_cmp(&y.value.re));
    Ok(pairs)
}

/// Symmetric-definite pencil `A v = λ M v` with `M` positive definite, through
/// `M^{-1/2} A M^{-1/2}`. Eigenvalues ascend; eigenvectors are `M`-orthonormal columns.
pub fn symmetric_gevp(a: &Mat<f64>, m: &Mat<f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let n = a.nrows();
    if a.ncols() != n || m.nrows() != n || m.ncols() != n {
        return Err(Error::InvalidArgument(
            "symmetric pencil needs square matrices of equal size".into(),
        ));
    }
    let em = m
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::NoConvergence)?;
    let d = em.S().column_vector();
    let q = em.U();
    let top = (0..n).map(|i| d[i].abs()).fold(0.0, f64::max);
    if (0..n).any(|i| !(d[i] > 1e-14 * top)) {
        return Err(Error::InvalidArgument("mass matrix is not positive definite".into()));
    }
    let isqrt = Mat::from_fn(n, n, |i, j| q[(i, j)] / d[j].sqrt());
    let c = isqrt.transpose() * (a * &isqrt);
    let sym = Mat::from_fn(n, n, |i, j| 0.5 * (c[(i, j)] + c[(j, i)]));
    let ec = sym
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::NoConvergence)?;
    let values = (0..n).map(|i| ec.S().column_vector()[i]).collect();
    Ok((values, &isqrt * ec.U()))
}

/// Rotates a complex vector so its largest entry is real, then returns the unit-norm real
/// part.
pub fn realify(v: &[Complex64]) -> Vec<f64> {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = if pivot.norm() > 0.0 {
        pivot.conj() / pivot.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let re: Vec<f64> = v.iter().map(|z| (z * phase).re).collect();
    let norm = re.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        re.iter().map(|x| x / norm).collect()
    } else {
        re
    }
}

/// Keeps the eigenpairs whose imaginary part is below `1e−8(1 + |Re λ|)` and converts them
/// to real pairs.
///
/// Within a cluster of (numerically) equal eigenvalues the solver may return complex
/// combinations such as `cos + i sin`; a real basis of the eigenspace is then extracted from
/// the real and imaginary parts of all cluster members by pivoted Gram–Schmidt.
pub fn real_spectrum(solution: GevpSolution) -> RealSpectrum {
    let mut real: Vec<EigenPair> = Vec::new();
    let mut discarded_complex = 0;
    for p in solution.pairs {
        if p.value.im.abs() > COMPLEX_TOLERANCE * (1.0 + p.value.re.abs()) {
            discarded_complex += 1;
        } else {
            real.push(p);
        }
    }
    real.sort_by(|a, b| a.value.re.total_cmp(&b.value.re));
    let mut values = Vec::with_capacity(real.len());
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(real.len());
    let mut start = 0;
    while start < real.len() {
        let mut end = start + 1;
        while end < real.len()
            && real[end].value.re - real[end - 1].value.re
                <= EIGENSPACE_TOLERANCE * (1.0 + real[end - 1].value.re.abs())
        {
            end += 1;
        }
        if end - start == 1 {
            values.push(real[start].value.re);
            columns.push(realify(&real[start].vector));
        } else {
            let mut candidates: Vec<Vec<f64>> = Vec::new();
            for p in &real[start..end] {
                candidates.push(p.vector.iter().map(|z| z.re).collect());
                candidates.push(p.vector.iter().map(|z| z.im).collect());
            }
            for (k, v) in pivoted_basis(candidates, end - start).into_iter().enumerate() {
                values.push(real[start + k].value.re);
                columns.push(v);
            }
        }
        start = end;
    }
    let rows = columns.first().map_or(0, Vec::len);
    let vectors = Mat::from_fn(rows, columns.len(), |i, j| columns[j][i]);
    RealSpectrum {
        values,
        vectors,
        discarded_complex,
        discarded_infinite: solution.discarded_infinite,
    }
}

/// Relative gap below which real eigenvalues are treated as one eigenspace.
const EIGENSPACE_TOLERANCE: f64 = 1e-8;

/// `count` orthonormal vectors spanning the dominant part of `candidates`.
fn pivoted_basis(mut candidates: Vec<Vec<f64>>, count: usize) -> Vec<Vec<f64>> {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(count);
    for _ in 0..count {
        let (best, _) = candidates
            .iter()
            .enumerate()
            .map(|(i, v)| (i, norm(v)))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("candidates are never exhausted");
        let mut v = candidates.swap_remove(best);
        let n = norm(&v);
        if n > 0.0 {
            v.iter_mut().for_each(|x| *x /= n);
        }
        for c in candidates.iter_mut() {
            let p: f64 = c.iter().zip(&v).map(|(a, b)| a * b).sum();
            c.iter_mut().zip(&v).for_each(|(a, b)| *a -= p * b);
        }
        out.push(v);
    }
    out
}

/// Thin QR factorization `M = QR` of a tall matrix with full column rank.
pub fn qr_thin(m: &Mat<f64>) -> Result<(Mat<f64>, Mat<f64>)> {
    let (rows, cols) = (m.nrows(), m.ncols());
    if rows < cols {
        return Err(Error::InvalidArgument(format!(
            "qr_thin needs rows >= cols, got {rows}x{cols}"
        )));
    }
    let qr = m.qr();
    let q = qr.compute_thin_Q();
    let r = qr.thin_R().to_owned();
    let max = (0..cols).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    let rank = (0..cols)
        .filter(|&i| r[(i, i)].abs() > 1e-13 * max && r[(i, i)] != 0.0)
        .count();
    if rank < cols {
        return Err(Error::RankDeficient { rank, cols });
    }
    Ok((q, r))
}

/// Thin singular value decomposition `M = U diag(S) Vᵀ`, `S` non-increasing.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Mat<f64>,
    pub s: Vec<f64>,
    pub v: Mat<f64>,
}

impl Svd {
    /// Number of singular values above `rel · σ_max`.
    pub fn rank(&self, rel: f64) -> usize {
        let max = self.s.first().copied().unwrap_or(0.0);
        self.s.iter().filter(|&&x| x > rel * max).count()
    }
}

pub fn svd(m: &Mat<f64>) -> Result<Svd> {
    let d = m.thin_svd().map_err(|_| Error::NoConvergence)?;
    let s = d.S().column_vector().iter().copied().collect();
    Ok(Svd {
        u: d.U().to_owned(),
        s,
        v: d.V().to_owned(),
    })
}

/// Least-squares slope of `log y` against `log x` over at least three points.
pub fn lstsq_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 points, got {}",
            points.len()
        )));
    }
    loglog_fit(points).map(|(slope, _)| slope)
}

/// Slope and intercept of the least-squares line through `(log x, log y)`.
pub fn loglog_fit(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit("need at least 2 points".into()));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::DegenerateFit("coordinates must be positive".into()));
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx < 1e-14 {
        return Err(Error::DegenerateFit("x values do not span a range".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Frobenius norm.
pub fn frobenius(m: &Mat<f64>) -> f64 {
    m.norm_l2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn lcg_mat(rows: usize, cols: usize, seed: u64) -> Mat<f64> {
        let mut s = seed;
        Mat::from_fn(rows, cols, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        })
    }

    fn residual(p: &MatrixPencil, pair: &EigenPair) -> f64 {
        let n = p.dim();
        let mut r = 0.0;
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += (p.a()[(i, j)] - pair.value * p.b()[(i, j)]) * pair.vector[j];
            }
            r += acc.norm_sqr();
        }
        r.sqrt()
    }

    #[test]
    fn diagonal_pencil() {
        let a = Mat::from_fn(2, 2, |i, j| if i == j { [2.0, 6.0][i] } else { 0.0 });
        let b = Mat::from_fn(2, 2, |i, j| if i == j { [1.0, 2.0][i] } else { 0.0 });
        let sol = solve_gevp(&MatrixPencil::new(a, b).unwrap()).unwrap();
        let vals: Vec<f64> = sol.pairs.iter().map(|p| p.value.re).collect();
        assert_abs_diff_eq!(vals[0], 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(vals[1], 3.0, epsilon = 1e-14);
    }

    #[test]
    fn identity_pencil() {
        let i5 = Mat::<f64>::identity(5, 5);
        let sol = solve_gevp(&MatrixPencil::new(i5.clone(), i5).unwrap()).unwrap();
        assert_eq!(sol.pairs.len(), 5);
        for p in &sol.pairs {
            assert_abs_diff_eq!(p.value.re, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn random_pencil_with_identity_matches_standard_eig() {
        let a = lcg_mat(20, 20, 3);
        let i = Mat::<f64>::identity(20, 20);
        let p = MatrixPencil::new(a.clone(), i).unwrap();
        let g = solve_gevp(&p).unwrap();
        let s = eig(&a).unwrap();
        assert_eq!(g.pairs.len(), 20);
        // match each standard eigenvalue to the nearest pencil eigenvalue
        for e in &s {
            let d = g
                .pairs
                .iter()
                .map(|x| (x.value - e.value).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(d < 1e-10);
        }
        let na = frobenius(&a);
        for pair in &g.pairs {
            let vn = pair.vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(residual(&p, pair) <= 1e-10 * na * vn);
        }
    }

    #[test]
    fn singular_b_drops_infinite_eigenvalues() {
        let a = Mat::from_fn(3, 3, |i, j| if i == j { (i + 1) as f64 } else { 0.0 });
        let b = Mat::from_fn(3, 3, |i, j| if i == j && i < 2 { 1.0 } else { 0.0 });
        let sol = solve_gevp(&MatrixPencil::new(a, b).unwrap()).unwrap();
        assert_eq!(sol.pairs.len(), 2);
        assert_eq!(sol.discarded_infinite, 1);
        assert_abs_diff_eq!(sol.pairs[0].value.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sol.pairs[1].value.re, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_definite_pencil_is_real() {
        let x = lcg_mat(12, 12, 9);
        let y = lcg_mat(12, 12, 10);
        let a = &x + x.transpose();
        let b = &y * y.transpose() + Mat::<f64>::identity(12, 12);
        let sol = solve_gevp(&MatrixPencil::new(a, b).unwrap()).unwrap();
        for p in &sol.pairs {
            assert!(p.value.im.abs() <= 1e-10);
        }
        let real = real_spectrum(sol);
        assert_eq!(real.values.len(), 12);
        assert_eq!(real.discarded_complex, 0);
    }

    #[test]
    fn symmetric_pencil_matches_general_solver() {
        let n = 7;
        let g = Mat::from_fn(n, n, |i, j| ((i * 5 + j * 3) % 7) as f64 / 7.0 - 0.4);
        let m = Mat::from_fn(n, n, |i, j| {
            (0..n).map(|k| g[(k, i)] * g[(k, j)]).sum::<f64>() + if i == j { 1.0 } else { 0.0 }
        });
        let a = Mat::from_fn(n, n, |i, j| 1.0 / (1.0 + i as f64 + j as f64));
        let (values, vecs) = symmetric_gevp(&a, &m).unwrap();
        let general = solve_gevp(&MatrixPencil::new(a.clone(), m.clone()).unwrap()).unwrap();
        for (v, p) in values.iter().zip(&general.pairs) {
            assert!((v - p.value.re).abs() < 1e-10);
        }
        let gram = vecs.transpose() * (&m * &vecs);
        for i in 0..n {
            for j in 0..n {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)] - e).abs() < 1e-10);
            }
        }
        let singular = Mat::<f64>::zeros(n, n);
        assert!(symmetric_gevp(&a, &singular).is_err());
    }

    #[test]
    fn rotation_eigenvalues_are_complex_and_filtered() {
        let a = Mat::from_fn(2, 2, |i, j| [[0.0, -1.0], [1.0, 0.0]][i][j]);
        let sol = solve_gevp(&MatrixPencil::new(a, Mat::identity(2, 2)).unwrap()).unwrap();
        let real = real_spectrum(sol);
        assert_eq!(real.values.len(), 0);
        assert_eq!(real.discarded_complex, 2);
    }

    #[test]
    fn pencil_rejects_bad_shapes() {
        assert!(MatrixPencil::new(Mat::zeros(2, 2), Mat::zeros(3, 3)).is_err());
        let mut a = Mat::<f64>::zeros(2, 2);
        a[(0, 0)] = f64::NAN;
        assert!(MatrixPencil::new(a, Mat::identity(2, 2)).is_err());
    }

    #[test]
    fn qr_examples() {
        let (q, r) = qr_thin(&Mat::identity(3, 3)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(q[(i, j)].abs(), e, epsilon = 1e-15);
                assert_abs_diff_eq!(r[(i, j)].abs(), e, epsilon = 1e-15);
            }
        }
        let m = Mat::from_fn(2, 1, |i, _| [3.0, 4.0][i]);
        let (_, r) = qr_thin(&m).unwrap();
        assert_abs_diff_eq!(r[(0, 0)].abs(), 5.0, epsilon = 1e-14);
        let mut d = Mat::<f64>::zeros(4, 2);
        d[(0, 0)] = 1.0;
        d[(1, 0)] = 1.0;
        d[(0, 1)] = 2.0;
        d[(1, 1)] = 2.0;
        assert!(matches!(qr_thin(&d), Err(Error::RankDeficient { rank: 1, cols: 2 })));
    }

    #[test]
    fn qr_reconstruction() {
        let m = lcg_mat(50, 10, 5);
        let (q, r) = qr_thin(&m).unwrap();
        assert!(frobenius(&(&q * &r - &m)) <= 1e-12 * frobenius(&m));
        assert!(frobenius(&(q.transpose() * &q - Mat::<f64>::identity(10, 10))) <= 1e-12);
        for i in 0..10 {
            for j in 0..i {
                assert_eq!(r[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn svd_examples() {
        let d = svd(&Mat::from_fn(2, 2, |i, j| if i == j { [3.0, 1.0][i] } else { 0.0 })).unwrap();
        assert_abs_diff_eq!(d.s[0], 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.s[1], 1.0, epsilon = 1e-14);
        let z = svd(&Mat::zeros(3, 2)).unwrap();
        assert!(z.s.iter().all(|&x| x == 0.0));
        let m = lcg_mat(30, 20, 8);
        let d = svd(&m).unwrap();
        let us = Mat::from_fn(30, 20, |i, j| d.u[(i, j)] * d.s[j]);
        assert!(frobenius(&(us * d.v.transpose() - &m)) <= 1e-12 * frobenius(&m));
        for w in d.s.windows(2) {
            assert!(w[0] >= w[1] && w[1] >= 0.0);
        }
        assert_eq!(d.rank(1e-10), 20);
    }

    #[test]
    fn slope_examples() {
        let pts: Vec<(f64, f64)> = (1..6).map(|k| (k as f64, (k * k) as f64)).collect();
        assert_abs_diff_eq!(lstsq_slope(&pts).unwrap(), 2.0, epsilon = 1e-12);
        let pts: Vec<(f64, f64)> = (1..6).map(|k| (k as f64, 3.0 * (k as f64).powf(-1.5))).collect();
        assert_abs_diff_eq!(lstsq_slope(&pts).unwrap(), -1.5, epsilon = 1e-12);
        let pts: Vec<(f64, f64)> = (1..30)
            .map(|k| {
                let x = k as f64;
                (x, (1.0 + 0.01 * x.sin()) / x)
            })
            .collect();
        assert!((lstsq_slope(&pts).unwrap() + 1.0).abs() <= 0.02);
        assert!(lstsq_slope(&pts[..2]).is_err());
        assert!(lstsq_slope(&[(1.0, 1.0), (1.0, 2.0), (1.0, 3.0)]).is_err());
        assert!(lstsq_slope(&[(1.0, -1.0), (2.0, 2.0), (3.0, 3.0)]).is_err());
    }

    proptest! {
        #[test]
        fn slope_recovers_power_laws(p in -4.0f64..4.0, c in 0.1f64..10.0) {
            let pts: Vec<(f64, f64)> = (1..8).map(|k| {
                let x = 1.5f64.powi(k);
                (x, c * x.powf(p))
            }).collect();
            prop_assert!((lstsq_slope(&pts).unwrap() - p).abs() < 1e-10);
        }

        #[test]
        fn qr_reconstructs_random_tall(seed in 0u64..1000) {
            let m = lcg_mat(12, 5, seed);
            let (q, r) = qr_thin(&m).unwrap();
            prop_assert!(frobenius(&(&q * &r - &m)) <= 1e-12 * frobenius(&m));
        }
    }
}
