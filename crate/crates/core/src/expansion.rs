//! Truncated Steklov series for the Dirichlet and Robin problems.
//!
//! With the normalization `(1 + λ_i) ∫ s_i s_j dσ = δ_ij`, the harmonic extension of `g`
//! is `Σ c_i s_i` with `c_i = (1 + λ_i) ∫ g s_i dσ`. For `∂_ν u + b u = g` the
//! coefficients are `(1 + λ_i) ∫ g s_i dσ / (λ_i + b)`.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::{Arc, OnceLock};

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::BoundaryCurve;
use crate::layer_ops::BoundaryNodes;
use crate::steklov::SteklovBasis;
use crate::trig_tools::{PeriodicGrid, TrigInterpolant};

/// Where boundary data is evaluated.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryPoint {
    /// Curve parameter.
    pub theta: f64,
    pub x: Complex64,
    /// Outward unit normal.
    pub normal: Complex64,
}

type PointFn = Arc<dyn Fn(&BoundaryPoint) -> f64 + Send + Sync>;
type FieldFn = Arc<dyn Fn(Complex64) -> f64 + Send + Sync>;
type GradientFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// Boundary data `g`, optionally the trace of a known function `u` defined near the
/// boundary (with its gradient for Robin data).
#[derive(Clone)]
pub struct BoundaryData {
    name: String,
    value: PointFn,
    field: Option<FieldFn>,
    gradient: Option<GradientFn>,
    regularity: Option<f64>,
    singular_point: Option<Complex64>,
}

impl fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryData")
            .field("name", &self.name)
            .field("has_field", &self.field.is_some())
            .field("has_gradient", &self.gradient.is_some())
            .field("regularity", &self.regularity)
            .field("singular_point", &self.singular_point)
            .finish()
    }
}

impl BoundaryData {
    /// Data given as a function of the curve parameter.
    pub fn from_parameter(
        name: impl Into<String>,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::from_boundary(name, move |p| f(p.theta))
    }

    /// Data depending on the full boundary point.
    pub fn from_boundary(
        name: impl Into<String>,
        f: impl Fn(&BoundaryPoint) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            value: Arc::new(f),
            field: None,
            gradient: None,
            regularity: None,
            singular_point: None,
        }
    }

    /// Trace of a function `u` of the plane. `u` doubles as the interior reference.
    pub fn from_field(
        name: impl Into<String>,
        u: impl Fn(Complex64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let u: FieldFn = Arc::new(u);
        let trace = u.clone();
        let mut data = Self::from_boundary(name, move |p| trace(p.x));
        data.field = Some(u);
        data
    }

    /// Attaches `∇u` as `u_x + i u_y`.
    pub fn with_gradient(
        mut self,
        gradient: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    /// Sobolev regularity tag `q` (data in `H^q(∂Ω)` for every smaller exponent).
    pub fn with_regularity(mut self, q: f64) -> Self {
        self.regularity = Some(q);
        self
    }

    /// A boundary point where the data is singular. Nodes on it get zero quadrature weight.
    pub fn with_singular_point(mut self, p: Complex64) -> Self {
        self.singular_point = Some(p);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn regularity(&self) -> Option<f64> {
        self.regularity
    }

    pub fn singular_point(&self) -> Option<Complex64> {
        self.singular_point
    }

    pub fn eval(&self, p: &BoundaryPoint) -> f64 {
        (self.value)(p)
    }

    /// `∂_ν u` at a boundary point, when a gradient is attached.
    pub fn normal_derivative(&self, p: &BoundaryPoint) -> Option<f64> {
        self.gradient.as_ref().map(|g| {
            let d = g(p.x);
            d.re * p.normal.re + d.im * p.normal.im
        })
    }

    /// Value of the underlying field at an interior point, when known.
    pub fn interior(&self, x: Complex64) -> Option<f64> {
        self.field.as_ref().map(|u| u(x))
    }

    /// Robin data `∂_ν u + b u` of the underlying field.
    pub fn robin_data(&self, b: f64) -> Result<BoundaryData> {
        let (Some(u), Some(grad)) = (self.field.clone(), self.gradient.clone()) else {
            return Err(Error::InvalidArgument(format!(
                "data `{}` has no field and gradient to build Robin data from",
                self.name
            )));
        };
        let mut data = Self::from_boundary(format!("{}:robin", self.name), move |p| {
            let d = grad(p.x);
            d.re * p.normal.re + d.im * p.normal.im + b * u(p.x)
        });
        data.singular_point = self.singular_point;
        Ok(data)
    }

    fn is_singular_at(&self, x: Complex64) -> bool {
        self.singular_point
            .is_some_and(|p| (x - p).norm() <= 1e-12 * (1.0 + p.norm()))
    }

    /// Values at the grid nodes (zero at a singular node).
    pub fn sample(&self, curve: &dyn BoundaryCurve, grid: &PeriodicGrid) -> Result<Vec<f64>> {
        grid.nodes()
            .into_iter()
            .map(|theta| {
                let x = curve.point(theta);
                if self.is_singular_at(x) {
                    return Ok(0.0);
                }
                let p = BoundaryPoint {
                    theta,
                    x,
                    normal: curve.normal(theta),
                };
                let v = self.eval(&p);
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::InvalidArgument(format!(
                        "data `{}` is not finite at θ = {theta}",
                        self.name
                    )))
                }
            })
            .collect()
    }

    /// Quadrature weights of `basis` with singular nodes removed.
    pub fn weights(&self, basis: &SteklovBasis) -> Vec<f64> {
        let nodes = basis.grid.nodes();
        basis
            .weights
            .iter()
            .zip(nodes)
            .map(|(&w, t)| {
                if self.is_singular_at(basis.curve.point(t)) {
                    0.0
                } else {
                    w
                }
            })
            .collect()
    }
}

/// Boundary condition of a series solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProblemKind {
    Dirichlet,
    Robin { b: f64 },
}

/// `Σ_{i=0}^{M} c_i s_i` over a shared basis.
#[derive(Clone, Debug)]
pub struct SeriesSolution {
    basis: Arc<SteklovBasis>,
    coefficients: Vec<f64>,
    kind: ProblemKind,
    nodes: Arc<OnceLock<BoundaryNodes>>,
}

/// Full-data projections `(1 + λ_i) ∫ g s_i dσ` for every basis function.
///
/// When `g` is singular at a node, the integral is split with a smooth cutoff `χ` around
/// that node: `g(1 − χ) s_i` goes to the grid quadrature and `g χ s_i` to geometrically
/// graded Gauss–Legendre panels, with `s_i` trigonometrically interpolated.
pub fn projections(g: &BoundaryData, basis: &SteklovBasis) -> Result<Vec<f64>> {
    let values = g.sample(basis.curve.as_ref(), &basis.grid)?;
    let mut w = g.weights(basis);
    let nodes = basis.grid.nodes();
    let singular = (0..nodes.len()).find(|&l| g.is_singular_at(basis.curve.point(nodes[l])));
    let local = match singular {
        Some(l0) => {
            let window = SingularWindow::new(basis, nodes[l0]);
            for (l, wl) in w.iter_mut().enumerate() {
                *wl *= 1.0 - window.cutoff(nodes[l] - nodes[l0]);
            }
            Some(window.projections(g, basis)?)
        }
        None => None,
    };
    Ok(basis
        .pairs
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut dot: f64 = (0..values.len()).map(|l| w[l] * values[l] * p.trace[l]).sum();
            if let Some(local) = &local {
                dot += local[i];
            }
            (1.0 + p.lambda) * dot
        })
        .collect())
}

/// Cutoff half-width in grid spacings, and the largest half-width in parameter.
const WINDOW_CELLS: f64 = 48.0;
const WINDOW_MAX: f64 = TAU / 16.0;
const GRADED_LEVELS: usize = 48;
const PANEL_POINTS: usize = 12;

struct SingularWindow {
    centre: f64,
    half_width: f64,
}

impl SingularWindow {
    fn new(basis: &SteklovBasis, centre: f64) -> Self {
        Self {
            centre,
            half_width: (WINDOW_CELLS * basis.grid.spacing()).min(WINDOW_MAX),
        }
    }

    /// `C^∞` cutoff, one at the centre and zero beyond the half-width.
    fn cutoff(&self, offset: f64) -> f64 {
        let d = ((offset + TAU / 2.0).rem_euclid(TAU) - TAU / 2.0).abs() / self.half_width;
        if d >= 1.0 {
            return 0.0;
        }
        let f = |r: f64| if r > 0.0 { (-1.0 / r).exp() } else { 0.0 };
        1.0 - f(d) / (f(d) + f(1.0 - d))
    }

    /// `∫ g χ s_i dσ` for every basis function.
    fn projections(&self, g: &BoundaryData, basis: &SteklovBasis) -> Result<Vec<f64>> {
        let rule = gauss_quad::legendre::GaussLegendre::new(
            std::num::NonZeroUsize::new(PANEL_POINTS).expect("nonzero"),
        );
        let mut points = Vec::new();
        for level in 0..GRADED_LEVELS {
            let (a, b) = (
                self.half_width * 0.5f64.powi(level as i32 + 1),
                self.half_width * 0.5f64.powi(level as i32),
            );
            for &(x, wx) in rule.as_node_weight_pairs() {
                let tau = 0.5 * (a + b) + 0.5 * (b - a) * x;
                for side in [-1.0, 1.0] {
                    points.push((side * tau, 0.5 * (b - a) * wx));
                }
            }
        }
        let curve = basis.curve.as_ref();
        let len = basis.grid.len();
        let h = basis.grid.spacing();
        let mut out = vec![0.0; basis.len()];
        let mut kernel = vec![0.0; len];
        for (tau, weight) in points {
            let theta = self.centre + tau;
            let p = BoundaryPoint {
                theta,
                x: curve.point(theta),
                normal: curve.normal(theta),
            };
            let v = g.eval(&p);
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "data `{}` is not finite at θ = {theta}",
                    g.name
                )));
            }
            let scale = weight * v * self.cutoff(tau) * curve.speed(theta);
            // periodic interpolation kernel of the balanced trigonometric interpolant
            for (l, k) in kernel.iter_mut().enumerate() {
                let x = theta - l as f64 * h;
                let half = (0.5 * x).sin();
                *k = if half.abs() < 1e-15 {
                    1.0
                } else {
                    (0.5 * len as f64 * x).sin() * (0.5 * x).cos() / (half * len as f64)
                };
            }
            for (o, pair) in out.iter_mut().zip(&basis.pairs) {
                let s: f64 = kernel.iter().zip(&pair.trace).map(|(k, t)| k * t).sum();
                *o += scale * s;
            }
        }
        Ok(out)
    }
}

fn check_order(basis: &SteklovBasis, m: usize) -> Result<()> {
    if m + 1 > basis.len() {
        return Err(Error::NotEnoughEigenpairs {
            requested: m + 1,
            available: basis.len(),
        });
    }
    Ok(())
}

/// Truncated harmonic extension of Dirichlet data `g`.
pub fn dirichlet_solve(
    g: &BoundaryData,
    basis: &Arc<SteklovBasis>,
    m: usize,
) -> Result<SeriesSolution> {
    check_order(basis, m)?;
    let mut c = projections(g, basis)?;
    c.truncate(m + 1);
    Ok(SeriesSolution::new(basis.clone(), c, ProblemKind::Dirichlet))
}

/// Truncated series for `∂_ν u + b u = g`.
pub fn robin_solve(
    g: &BoundaryData,
    basis: &Arc<SteklovBasis>,
    m: usize,
    b: f64,
) -> Result<SeriesSolution> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Robin constant must be positive, got {b}"
        )));
    }
    check_order(basis, m)?;
    let mut c = projections(g, basis)?;
    c.truncate(m + 1);
    for (ci, p) in c.iter_mut().zip(&basis.pairs) {
        *ci /= p.lambda + b;
    }
    Ok(SeriesSolution::new(basis.clone(), c, ProblemKind::Robin { b }))
}

impl SeriesSolution {
    pub fn new(basis: Arc<SteklovBasis>, coefficients: Vec<f64>, kind: ProblemKind) -> Self {
        Self {
            basis,
            coefficients,
            kind,
            nodes: Arc::new(OnceLock::new()),
        }
    }

    pub fn basis(&self) -> &Arc<SteklovBasis> {
        &self.basis
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn kind(&self) -> ProblemKind {
        self.kind
    }

    /// Truncation order `M` (the series has `M + 1` terms).
    pub fn order(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// The same series cut after `m + 1` terms. Coefficients do not depend on `M`.
    pub fn truncated(&self, m: usize) -> Result<SeriesSolution> {
        if m + 1 > self.coefficients.len() {
            return Err(Error::NotEnoughEigenpairs {
                requested: m + 1,
                available: self.coefficients.len(),
            });
        }
        Ok(Self {
            basis: self.basis.clone(),
            coefficients: self.coefficients[..=m].to_vec(),
            kind: self.kind,
            nodes: self.nodes.clone(),
        })
    }

    /// `Σ c_i s_i` at the grid nodes.
    pub fn boundary_values(&self) -> Vec<f64> {
        self.combine(|_| 1.0)
    }

    /// `Σ c_i λ_i s_i`, the normal derivative at the grid nodes.
    pub fn boundary_flux(&self) -> Vec<f64> {
        self.combine(|lambda| lambda)
    }

    fn combine(&self, scale: impl Fn(f64) -> f64) -> Vec<f64> {
        let n = self.basis.grid.len();
        let mut out = vec![0.0; n];
        for (c, p) in self.coefficients.iter().zip(&self.basis.pairs) {
            let f = c * scale(p.lambda);
            for (o, s) in out.iter_mut().zip(&p.trace) {
                *o += f * s;
            }
        }
        out
    }

    /// Trigonometric interpolation of the nodal values at parameter `theta`.
    pub fn eval_boundary(&self, theta: f64) -> Result<f64> {
        Ok(TrigInterpolant::new(&self.boundary_values(), &self.basis.grid)?.eval(theta))
    }

    fn boundary_nodes(&self) -> &BoundaryNodes {
        self.nodes
            .get_or_init(|| BoundaryNodes::new(self.basis.curve.as_ref(), &self.basis.grid))
    }

    fn has_exact(&self) -> bool {
        self.basis.pairs[..self.coefficients.len()]
            .iter()
            .all(|p| !p.exact.is_empty())
    }

    /// Evaluator for many interior points.
    pub fn interior(&self) -> InteriorEvaluator<'_> {
        let exact = self.has_exact();
        let (trace, flux) = if exact {
            (Vec::new(), Vec::new())
        } else {
            (self.boundary_values(), self.boundary_flux())
        };
        InteriorEvaluator {
            solution: self,
            nodes: self.boundary_nodes(),
            exact,
            trace,
            flux,
        }
    }

    /// Value at an interior point beyond the near-boundary threshold.
    pub fn eval_interior(&self, x: Complex64) -> Result<f64> {
        self.interior().eval(x)
    }
}

/// Interior evaluation of a series by the representation formula on the combined trace
/// `Σ c_i s_i` and flux `Σ c_i λ_i s_i`, or by closed forms when the basis carries them.
pub struct InteriorEvaluator<'a> {
    solution: &'a SeriesSolution,
    nodes: &'a BoundaryNodes,
    exact: bool,
    trace: Vec<f64>,
    flux: Vec<f64>,
}

impl InteriorEvaluator<'_> {
    /// Minimum distance from the boundary nodes for representation-formula evaluation.
    pub fn threshold(&self) -> f64 {
        if self.exact {
            0.0
        } else {
            self.nodes.threshold
        }
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn eval(&self, x: Complex64) -> Result<f64> {
        if self.exact {
            if !self.nodes.contains(x) {
                return Err(Error::InvalidArgument(format!(
                    "point ({}, {}) lies outside the domain",
                    x.re, x.im
                )));
            }
            return Ok(self.eval_unchecked(x));
        }
        self.nodes.check_interior(x)?;
        Ok(self.eval_unchecked(x))
    }

    /// Evaluation without the inside and threshold checks.
    pub fn eval_unchecked(&self, x: Complex64) -> f64 {
        if self.exact {
            let s = self.solution;
            s.coefficients
                .iter()
                .zip(&s.basis.pairs)
                .map(|(c, p)| c * p.eval_exact(x).unwrap_or(0.0))
                .sum()
        } else {
            self.nodes.representation_at(&self.trace, &self.flux, x)
        }
    }
}

/// `‖u − g‖_{L²(∂Ω)}` by the basis quadrature (singular nodes of `g` excluded).
pub fn error_l2_boundary(solution: &SeriesSolution, reference: &BoundaryData) -> Result<f64> {
    let basis = solution.basis();
    let r = reference.sample(basis.curve.as_ref(), &basis.grid)?;
    let w = reference.weights(basis);
    Ok(weighted_l2(&solution.boundary_values(), &r, &w))
}

/// `‖u − values‖_{L²(∂Ω)}` against nodal values on the same grid.
pub fn error_l2_boundary_values(solution: &SeriesSolution, values: &[f64]) -> Result<f64> {
    let basis = solution.basis();
    if values.len() != basis.grid.len() {
        return Err(Error::LengthMismatch {
            expected: basis.grid.len(),
            actual: values.len(),
        });
    }
    Ok(weighted_l2(&solution.boundary_values(), values, &basis.weights))
}

fn weighted_l2(u: &[f64], v: &[f64], w: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .zip(w)
        .map(|((a, b), w)| w * (a - b).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Sample points of the domain quadrature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DomainGrid {
    pub radial: usize,
    pub angular: usize,
}

impl Default for DomainGrid {
    fn default() -> Self {
        Self {
            radial: 64,
            angular: 512,
        }
    }
}

/// Quadrature points `(x, weight)` covering the domain.
///
/// Smooth star-shaped curves use `φ(r, θ) = r x(θ)` with midpoints in `r`, equispaced `θ` and
/// Jacobian `r · (x × x′)`. Polygons use cell midpoints of an equidistant Cartesian grid on
/// the bounding box with `⌈√(radial · angular)⌉` cells per side, keeping interior points.
pub fn domain_quadrature(curve: &dyn BoundaryCurve, grid: DomainGrid) -> Result<Vec<(Complex64, f64)>> {
    if grid.radial == 0 || grid.angular == 0 {
        return Err(Error::InvalidArgument("domain grid must be nonempty".into()));
    }
    if curve.is_polygonal() {
        let boundary = PeriodicGrid::new(4096)?;
        let pts: Vec<Complex64> = boundary.nodes().iter().map(|&t| curve.point(t)).collect();
        let (mut lo, mut hi) = (pts[0], pts[0]);
        for p in &pts {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        let n = ((grid.radial * grid.angular) as f64).sqrt().ceil() as usize;
        let (dx, dy) = ((hi.re - lo.re) / n as f64, (hi.im - lo.im) / n as f64);
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let x = Complex64::new(lo.re + (i as f64 + 0.5) * dx, lo.im + (j as f64 + 0.5) * dy);
                if crate::geometry::winding_number(&pts, x).abs() > 0.5 {
                    out.push((x, dx * dy));
                }
            }
        }
        return Ok(out);
    }
    let dr = 1.0 / grid.radial as f64;
    let dt = TAU / grid.angular as f64;
    let mut out = Vec::with_capacity(grid.radial * grid.angular);
    for j in 0..grid.angular {
        let t = j as f64 * dt;
        let f = curve.point(t);
        let df = curve.tangent(t);
        let cross = f.re * df.im - f.im * df.re;
        if !(cross > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "curve `{}` is not star-shaped about the origin",
                curve.name()
            )));
        }
        for i in 0..grid.radial {
            let r = (i as f64 + 0.5) * dr;
            out.push((f * r, r * cross * dr * dt));
        }
    }
    Ok(out)
}

/// `‖u − reference‖_{L²(Ω)}` over [`domain_quadrature`], skipping points inside the
/// near-boundary band where the representation formula is inaccurate.
pub fn error_l2_domain(
    solution: &SeriesSolution,
    reference: &dyn Fn(Complex64) -> f64,
    grid: DomainGrid,
) -> Result<f64> {
    let eval = solution.interior();
    let points = domain_quadrature(solution.basis().curve.as_ref(), grid)?;
    let nodes = solution.boundary_nodes();
    let threshold = eval.threshold();
    let mut acc = 0.0;
    for (x, w) in points {
        if threshold > 0.0 && nodes.distance(x) < threshold {
            continue;
        }
        acc += w * (eval.eval_unchecked(x) - reference(x)).powi(2);
    }
    Ok(acc.sqrt())
}

/// Points evaluated per block in [`error_l2_domain_sweep`].
const SWEEP_BLOCK: usize = 1024;

/// `‖u_M − u‖_{L²(Ω)}` for every truncation `M` in `orders` of `solution`, in one pass.
///
/// Every basis function is evaluated once per quadrature point (through blocked matrix
/// products of the representation kernels with the traces), and partial sums give all
/// truncations. Agrees with [`error_l2_domain`] on each truncated solution.
pub fn error_l2_domain_sweep(
    solution: &SeriesSolution,
    orders: &[usize],
    reference: &dyn Fn(Complex64) -> f64,
    grid: DomainGrid,
) -> Result<Vec<f64>> {
    let count = solution.coefficients.len();
    if let Some(&m) = orders.iter().find(|&&m| m >= count) {
        return Err(Error::NotEnoughEigenpairs {
            requested: m + 1,
            available: count,
        });
    }
    let basis = solution.basis();
    let exact = solution.has_exact();
    let nodes = solution.boundary_nodes();
    let mut points = domain_quadrature(basis.curve.as_ref(), grid)?;
    if !exact {
        points.retain(|(x, _)| nodes.distance(*x) >= nodes.threshold);
    }
    let pairs = &basis.pairs[..count];
    let n = nodes.points.len();
    let trace = Mat::from_fn(n, count, |l, i| pairs[i].trace[l]);
    let flux = Mat::from_fn(n, count, |l, i| pairs[i].lambda * pairs[i].trace[l]);
    let sorted = sorted_orders(orders);
    let mut acc = vec![0.0; orders.len()];
    for block in points.chunks(SWEEP_BLOCK) {
        let values: Mat<f64> = if exact {
            Mat::from_fn(block.len(), count, |p, i| {
                pairs[i].eval_exact(block[p].0).unwrap_or(0.0)
            })
        } else {
            let double = Mat::from_fn(block.len(), n, |p, l| {
                let d = nodes.points[l] - block[p].0;
                let nd = nodes.normals[l].re * d.re + nodes.normals[l].im * d.im;
                nodes.weights[l] * nd / d.norm_sqr() / TAU
            });
            let single = Mat::from_fn(block.len(), n, |p, l| {
                nodes.weights[l] * (nodes.points[l] - block[p].0).norm_sqr().ln() / (2.0 * TAU)
            });
            &double * &trace - &single * &flux
        };
        for (p, &(x, w)) in block.iter().enumerate() {
            let r = reference(x);
            let mut partial = 0.0;
            let mut next = 0;
            for &(k, m) in &sorted {
                while next <= m {
                    partial += solution.coefficients[next] * values[(p, next)];
                    next += 1;
                }
                acc[k] += w * (partial - r).powi(2);
            }
        }
    }
    Ok(acc.into_iter().map(f64::sqrt).collect())
}

/// `(position, order)` pairs sorted by order.
fn sorted_orders(orders: &[usize]) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = orders.iter().copied().enumerate().collect();
    v.sort_by_key(|&(_, m)| m);
    v
}

/// `⟨u, v⟩_∂ = ∫ ∇u·∇v dx + ∫ u v dσ = Σ c_i^u c_i^v` for series over one basis.
pub fn inner_partial(a: &SeriesSolution, b: &SeriesSolution) -> Result<f64> {
    if !Arc::ptr_eq(&a.basis, &b.basis) {
        return Err(Error::BasisMismatch);
    }
    Ok(a.coefficients
        .iter()
        .zip(&b.coefficients)
        .map(|(x, y)| x * y)
        .sum())
}
