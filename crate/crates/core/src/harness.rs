//! Experiment driver: eigenvalue tables, convergence sweeps in `M` and `N`, CSV output and
//! log-log SVG plots.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::{self, Write as _};
use std::io::{Read, Write};
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expansion::{
    dirichlet_solve, error_l2_boundary, error_l2_domain_sweep, robin_solve, BoundaryData, DomainGrid,
    SeriesSolution,
};
use crate::geometry::{BoundaryCurve, Domain};
use crate::numerics::{loglog_fit, lstsq_slope};
use crate::steklov::{solve, solve_collocation, Method, SolveParams, SteklovBasis};
use crate::trig_tools::{resample, PeriodicGrid};

/// Exterior source point of the `log-source` data.
pub const LOG_SOURCE_POINT: Complex64 = Complex64::new(0.0, 2.5);

/// Curve parameter of the boundary point where `nonsmooth-harmonic` is centred.
pub const NONSMOOTH_PARAMETER: f64 = FRAC_PI_2;

/// Names accepted by [`catalog`].
pub const DATA_NAMES: [&str; 6] = [
    "exp-cos",
    "abs",
    "sqrt-abs",
    "step",
    "log-source",
    "nonsmooth-harmonic",
];

/// `u(x) = ½ log|x − y|²` with `y = (0, 2.5)`, harmonic in every built-in domain.
pub fn log_source() -> BoundaryData {
    let y = LOG_SOURCE_POINT;
    BoundaryData::from_field("log-source", move |x| 0.5 * (x - y).norm_sqr().ln())
        .with_gradient(move |x| (x - y) / (x - y).norm_sqr())
}

/// `g₀(x₁, x₂) = π x₂ + x₁ log(x₁² + x₂²) + 2 x₂ atan(x₁/x₂)`, harmonic for `x₂ ≠ 0`.
///
/// Up to the linear term this is `2 Re(z log z)` on the lower half-plane: continuous at the
/// origin, with a logarithmically singular gradient, so it lies in `H¹` of every domain
/// touching the origin from below. `atan(x₁/x₂)` is taken as `−atan2(x₁, −x₂)`, the branch
/// continuous on the closed lower half-plane, so values on a boundary segment along
/// `x₂ = 0` are the limits from inside.
pub fn nonsmooth_g0(x: Complex64) -> f64 {
    let (x1, x2) = (x.re, x.im);
    PI * x2 + x1 * (x1 * x1 + x2 * x2).ln() - 2.0 * x2 * x1.atan2(-x2)
}

/// Gradient of [`nonsmooth_g0`] as `∂₁ + i ∂₂`.
pub fn nonsmooth_g0_gradient(x: Complex64) -> Complex64 {
    let (x1, x2) = (x.re, x.im);
    Complex64::new((x1 * x1 + x2 * x2).ln() + 2.0, PI - 2.0 * x1.atan2(-x2))
}

/// `g₀(x − y)` with `y` the boundary point at parameter π/2 (the top of every built-in
/// domain, so the line `x₂ = y₂` does not cross the interior).
pub fn nonsmooth_harmonic(curve: &dyn BoundaryCurve) -> BoundaryData {
    let y = curve.point(NONSMOOTH_PARAMETER);
    BoundaryData::from_field("nonsmooth-harmonic", move |x| nonsmooth_g0(x - y))
        .with_gradient(move |x| nonsmooth_g0_gradient(x - y))
        .with_singular_point(y)
}

/// Named boundary data. Functions of the angle use the curve parameter `θ ∈ [0, 2π)`.
pub fn catalog(name: &str, curve: &dyn BoundaryCurve) -> Result<BoundaryData> {
    let angle = |t: f64| t.rem_euclid(2.0 * PI);
    Ok(match name {
        "exp-cos" => BoundaryData::from_parameter(name, |t| t.cos().exp()),
        "abs" => BoundaryData::from_parameter(name, move |t| (angle(t) - PI).abs())
            .with_regularity(1.5),
        "sqrt-abs" => BoundaryData::from_parameter(name, move |t| (angle(t) - PI).abs().sqrt())
            .with_regularity(1.0),
        "step" => BoundaryData::from_parameter(name, move |t| if angle(t) >= PI { 1.0 } else { -1.0 })
            .with_regularity(0.5),
        "log-source" => log_source(),
        "nonsmooth-harmonic" => nonsmooth_harmonic(curve),
        _ => {
            return Err(Error::UnknownName {
                kind: "data",
                name: name.to_owned(),
            })
        }
    })
}

/// Method used when none is given: conformal where a map is known and smooth, the exact
/// formulas on the square, collocation otherwise.
pub fn default_method(domain: Domain) -> Method {
    match domain {
        Domain::Sine => Method::Conformal,
        Domain::Square => Method::SquareExact,
        _ => Method::Collocation,
    }
}

/// Boundary condition of an experiment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryCondition {
    Dirichlet,
    Robin { b: f64 },
}

impl BoundaryCondition {
    /// Parses `dirichlet` or `robin`, the latter with the given constant.
    pub fn parse(name: &str, b: f64) -> Result<Self> {
        match name {
            "dirichlet" => Ok(Self::Dirichlet),
            "robin" if b > 0.0 && b.is_finite() => Ok(Self::Robin { b }),
            "robin" => Err(Error::InvalidArgument(format!(
                "Robin constant must be positive, got {b}"
            ))),
            _ => Err(Error::UnknownName {
                kind: "boundary condition",
                name: name.to_owned(),
            }),
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dirichlet => f.write_str("dirichlet"),
            Self::Robin { b } => write!(f, "robin(b={b})"),
        }
    }
}

/// Error norm of a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    Boundary,
    Domain,
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boundary" => Ok(Self::Boundary),
            "domain" => Ok(Self::Domain),
            _ => Err(Error::UnknownName {
                kind: "norm",
                name: s.to_owned(),
            }),
        }
    }
}

/// One experiment.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub domain: Domain,
    pub method: Method,
    pub condition: BoundaryCondition,
    pub data: String,
    /// Truncation orders of an `M` sweep.
    pub m_values: Vec<usize>,
    /// Node counts of an `N` sweep.
    pub n_values: Vec<usize>,
    /// Boundary nodes `L` of an `M` sweep.
    pub nodes: usize,
    pub norms: Vec<Norm>,
    pub domain_grid: DomainGrid,
    /// Truncation order held fixed in an `N` sweep.
    pub n_study_order: usize,
    /// Node count of the `N`-sweep reference.
    pub reference_nodes: usize,
}

impl ExperimentSpec {
    /// Boundary-norm `M` sweep at `L = 2^11` with the default method.
    pub fn new(domain: Domain, condition: BoundaryCondition, data: &str) -> Self {
        Self {
            domain,
            method: default_method(domain),
            condition,
            data: data.to_owned(),
            m_values: (10..=100).step_by(5).collect(),
            n_values: vec![64, 96, 128, 192, 256, 384, 512],
            nodes: 2048,
            norms: vec![Norm::Boundary],
            domain_grid: DomainGrid::default(),
            n_study_order: 20,
            reference_nodes: 2400,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_values.is_empty() || self.n_values.is_empty() || self.norms.is_empty() {
            return Err(Error::EmptyInput("experiment lists must be nonempty".into()));
        }
        if !DATA_NAMES.contains(&self.data.as_str()) {
            return Err(Error::UnknownName {
                kind: "data",
                name: self.data.clone(),
            });
        }
        Ok(())
    }

    /// Eigenpairs needed for the largest `M`.
    pub fn basis_size(&self) -> usize {
        self.m_values.iter().copied().max().unwrap_or(0) + 1
    }

    /// Solves for the basis of an `M` sweep.
    pub fn basis(&self) -> Result<SteklovBasis> {
        solve(
            self.domain,
            self.method,
            &SolveParams::new(self.nodes, self.basis_size()),
        )
    }
}

/// One row of an eigenvalue table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenRow {
    pub index: usize,
    pub lambda: f64,
}

/// The first `count` Steklov eigenvalues of a domain.
pub fn run_eigen_table(
    domain: Domain,
    method: Method,
    count: usize,
    nodes: usize,
) -> Result<Vec<EigenRow>> {
    let basis = solve(domain, method, &SolveParams::new(nodes, count))?;
    Ok(basis
        .eigenvalues()
        .into_iter()
        .take(count)
        .enumerate()
        .map(|(index, lambda)| EigenRow { index, lambda })
        .collect())
}

fn full(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV `index,lambda`.
pub fn write_eigen_csv(rows: &[EigenRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "lambda"])?;
    for r in rows {
        w.write_record([r.index.to_string(), full(r.lambda)])?;
    }
    w.flush()?;
    Ok(())
}

/// Errors at one truncation order (or node count).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub x: usize,
    pub boundary: Option<f64>,
    pub domain: Option<f64>,
}

/// Result of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    /// Name of the swept variable, `M` or `N`.
    pub variable: &'static str,
    pub rows: Vec<ConvergenceRow>,
    pub slope_boundary: Option<f64>,
    pub slope_domain: Option<f64>,
    /// Smallest swept value included in the slope fit.
    pub fit_from: usize,
    pub metadata: Vec<(String, String)>,
}

/// The second half of a sweep, where slopes are fitted.
fn fit_tail(points: &[(f64, f64)]) -> &[(f64, f64)] {
    &points[points.len() / 2..]
}

/// Least-squares log-log slope over the second half of the sweep, skipping zero errors.
pub fn tail_slope(points: &[(f64, f64)]) -> Option<f64> {
    let tail: Vec<(f64, f64)> = fit_tail(points)
        .iter()
        .copied()
        .filter(|p| p.1 > 0.0)
        .collect();
    lstsq_slope(&tail).ok()
}

/// How an error sequence decays.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decay {
    /// `e ≈ C exp(−rate · x)`.
    Exponential { rate: f64 },
    /// `e ≈ C x^slope`.
    Algebraic { slope: f64 },
}

fn line_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rss = points
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
        .sum();
    (slope, rss)
}

/// Compares a straight-line fit of `log e` against `x` with one against `log x` over the
/// second half of the sweep and reports the better model.
pub fn classify_decay(points: &[(f64, f64)]) -> Result<Decay> {
    let tail: Vec<(f64, f64)> = fit_tail(points)
        .iter()
        .copied()
        .filter(|p| p.0 > 0.0 && p.1 > 0.0)
        .collect();
    if tail.len() < 3 {
        return Err(Error::DegenerateFit(format!(
            "need at least 3 positive points, got {}",
            tail.len()
        )));
    }
    let semilog: Vec<(f64, f64)> = tail.iter().map(|p| (p.0, p.1.ln())).collect();
    let loglog: Vec<(f64, f64)> = tail.iter().map(|p| (p.0.ln(), p.1.ln())).collect();
    let (rate, rss_exp) = line_fit(&semilog);
    let (slope, rss_alg) = line_fit(&loglog);
    Ok(if rss_exp < rss_alg && rate < 0.0 {
        Decay::Exponential { rate: -rate }
    } else {
        Decay::Algebraic { slope }
    })
}

fn reference_error(data: &BoundaryData, what: &str) -> Error {
    Error::InvalidArgument(format!("data `{}` has no {what}", data.name()))
}

/// Solves the experiment's boundary value problem at the largest `M`.
pub fn series_for(
    spec: &ExperimentSpec,
    basis: &Arc<SteklovBasis>,
) -> Result<(SeriesSolution, BoundaryData)> {
    let data = catalog(&spec.data, basis.curve.as_ref())?;
    let m = spec.basis_size() - 1;
    let solution = match spec.condition {
        BoundaryCondition::Dirichlet => dirichlet_solve(&data, basis, m)?,
        BoundaryCondition::Robin { b } => robin_solve(&data.robin_data(b)?, basis, m, b)?,
    };
    Ok((solution, data))
}

/// `M` sweep with a freshly solved basis.
pub fn run_convergence_m(spec: &ExperimentSpec) -> Result<ConvergenceReport> {
    spec.validate()?;
    run_convergence_m_with(spec, &Arc::new(spec.basis()?))
}

/// `M` sweep on a given basis. The boundary reference is the data (Dirichlet) or the trace
/// of the known field (Robin). The domain reference is the known field or, failing that,
/// the series at the largest available order.
pub fn run_convergence_m_with(
    spec: &ExperimentSpec,
    basis: &Arc<SteklovBasis>,
) -> Result<ConvergenceReport> {
    spec.validate()?;
    let (full_solution, data) = series_for(spec, basis)?;
    if matches!(spec.condition, BoundaryCondition::Robin { .. }) && data.interior(0.0.into()).is_none()
    {
        return Err(reference_error(&data, "field for a Robin reference"));
    }
    let self_reference = if spec.norms.contains(&Norm::Domain) && data.interior(0.0.into()).is_none()
    {
        let m = basis.len() - 1;
        Some(match spec.condition {
            BoundaryCondition::Dirichlet => dirichlet_solve(&data, basis, m)?,
            BoundaryCondition::Robin { b } => robin_solve(&data.robin_data(b)?, basis, m, b)?,
        })
    } else {
        None
    };
    let self_eval = self_reference.as_ref().map(|s| s.interior());
    let reference = |x: Complex64| match &self_eval {
        Some(ev) => ev.eval_unchecked(x),
        None => data.interior(x).unwrap_or(f64::NAN),
    };
    let domain_errors = if spec.norms.contains(&Norm::Domain) {
        Some(error_l2_domain_sweep(
            &full_solution,
            &spec.m_values,
            &reference,
            spec.domain_grid,
        )?)
    } else {
        None
    };
    let mut rows = Vec::with_capacity(spec.m_values.len());
    for (k, &m) in spec.m_values.iter().enumerate() {
        let boundary = if spec.norms.contains(&Norm::Boundary) {
            Some(error_l2_boundary(&full_solution.truncated(m)?, &data)?)
        } else {
            None
        };
        rows.push(ConvergenceRow {
            x: m,
            boundary,
            domain: domain_errors.as_ref().map(|e| e[k]),
        });
    }
    let series = |f: fn(&ConvergenceRow) -> Option<f64>| -> Vec<(f64, f64)> {
        rows.iter()
            .filter_map(|r| f(r).map(|e| (r.x as f64, e)))
            .collect()
    };
    let slope_boundary = tail_slope(&series(|r| r.boundary));
    let slope_domain = tail_slope(&series(|r| r.domain));
    let fit_from = spec.m_values[spec.m_values.len() / 2];
    let mut metadata = vec![
        ("domain".to_owned(), spec.domain.to_string()),
        ("method".to_owned(), spec.method.to_string()),
        ("condition".to_owned(), spec.condition.to_string()),
        ("data".to_owned(), spec.data.clone()),
        ("nodes".to_owned(), spec.nodes.to_string()),
        (
            "domain_grid".to_owned(),
            format!("{}x{}", spec.domain_grid.radial, spec.domain_grid.angular),
        ),
        ("slope_fit".to_owned(), format!("second half of the sweep, M >= {fit_from}")),
    ];
    if let Some(y) = data.singular_point() {
        metadata.push(("singular_point".to_owned(), format!("({}, {})", y.re, y.im)));
    }
    if self_reference.is_some() {
        metadata.push((
            "domain_reference".to_owned(),
            format!("series with M = {}", basis.len() - 1),
        ));
    }
    Ok(ConvergenceReport {
        variable: "M",
        rows,
        slope_boundary,
        slope_domain,
        fit_from,
        metadata,
    })
}

/// `N` sweep: collocation with `L = N` nodes and fixed truncation order, compared on the
/// boundary with the same order at `reference_nodes` nodes after trigonometric resampling.
pub fn run_convergence_n(spec: &ExperimentSpec) -> Result<ConvergenceReport> {
    spec.validate()?;
    if spec.method != Method::Collocation {
        return Err(Error::InvalidArgument(
            "the N study uses the collocation method".into(),
        ));
    }
    if spec.condition != BoundaryCondition::Dirichlet {
        return Err(Error::InvalidArgument(
            "the N study uses Dirichlet data".into(),
        ));
    }
    let curve = spec.domain.curve();
    let m = spec.n_study_order;
    let series_at = |n: usize| -> Result<(PeriodicGrid, Vec<f64>)> {
        let grid = PeriodicGrid::new(n)?;
        let basis = Arc::new(solve_collocation(curve.clone(), &grid, m + 1)?);
        let data = catalog(&spec.data, curve.as_ref())?;
        Ok((grid, dirichlet_solve(&data, &basis, m)?.boundary_values()))
    };
    let (ref_grid, reference) = series_at(spec.reference_nodes)?;
    let weights = curve.quadrature_weights(&ref_grid);
    let mut rows = Vec::with_capacity(spec.n_values.len());
    for &n in &spec.n_values {
        let error = if n == spec.reference_nodes {
            0.0
        } else {
            let (grid, values) = series_at(n)?;
            let on_ref = resample(&values, &grid, &ref_grid)?;
            on_ref
                .iter()
                .zip(&reference)
                .zip(&weights)
                .map(|((a, b), w)| w * (a - b).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        rows.push(ConvergenceRow {
            x: n,
            boundary: Some(error),
            domain: None,
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.x as f64, r.boundary.unwrap_or(0.0)))
        .collect();
    let fit_from = spec.n_values[spec.n_values.len() / 2];
    Ok(ConvergenceReport {
        variable: "N",
        rows,
        slope_boundary: tail_slope(&points),
        slope_domain: None,
        fit_from,
        metadata: vec![
            ("domain".to_owned(), spec.domain.to_string()),
            ("method".to_owned(), Method::Collocation.to_string()),
            ("data".to_owned(), spec.data.clone()),
            ("order".to_owned(), m.to_string()),
            ("reference_nodes".to_owned(), spec.reference_nodes.to_string()),
            ("slope_fit".to_owned(), format!("second half of the sweep, N >= {fit_from}")),
        ],
    })
}

/// CSV with `#` metadata lines, then `variable,error_boundary,error_domain`. Missing values
/// are empty fields.
pub fn write_convergence_csv(report: &ConvergenceReport, mut out: impl Write) -> Result<()> {
    for (k, v) in &report.metadata {
        writeln!(out, "# {k}={v}")?;
    }
    let slope = |s: Option<f64>| s.map(full).unwrap_or_default();
    writeln!(out, "# slope_boundary={}", slope(report.slope_boundary))?;
    writeln!(out, "# slope_domain={}", slope(report.slope_domain))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record([report.variable, "error_boundary", "error_domain"])?;
    for r in &report.rows {
        let cell = |v: Option<f64>| v.map(full).unwrap_or_default();
        w.write_record([r.x.to_string(), cell(r.boundary), cell(r.domain)])?;
    }
    w.flush()?;
    Ok(())
}

/// A plottable series read from CSV: header, `#` comments skipped, first column against
/// the first nonempty positive value in the remaining columns.
#[derive(Clone, Debug, PartialEq)]
pub struct PlotSeries {
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

pub fn read_series(input: impl Read) -> Result<PlotSeries> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let headers = r.headers()?.clone();
    if headers.len() < 2 {
        return Err(Error::EmptyInput("need at least two columns".into()));
    }
    let mut column = None;
    let mut points = Vec::new();
    for record in r.records() {
        let record = record?;
        let x: f64 = match record.get(0).and_then(|s| s.trim().parse().ok()) {
            Some(x) => x,
            None => continue,
        };
        let pick = |c: usize| {
            record
                .get(c)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .filter(|y| *y > 0.0)
        };
        let c = match column {
            Some(c) => c,
            None => match (1..record.len()).find(|&c| pick(c).is_some()) {
                Some(c) => {
                    column = Some(c);
                    c
                }
                None => continue,
            },
        };
        if let Some(y) = pick(c) {
            if x > 0.0 {
                points.push((x, y));
            }
        }
    }
    let y_label = column
        .and_then(|c| headers.get(c))
        .unwrap_or("error")
        .to_owned();
    Ok(PlotSeries {
        x_label: headers.get(0).unwrap_or("x").to_owned(),
        y_label,
        points,
    })
}

/// Deterministic log-log SVG of a series with its least-squares slope.
pub fn emit_plot(series: &PlotSeries) -> Result<String> {
    let pts = &series.points;
    if pts.len() < 2 {
        return Err(Error::EmptyInput(format!(
            "a plot needs at least 2 positive points, got {}",
            pts.len()
        )));
    }
    let (slope, _) = loglog_fit(pts)?;
    let (w, h, pad) = (640.0, 480.0, 60.0);
    let lx: Vec<f64> = pts.iter().map(|p| p.0.log10()).collect();
    let ly: Vec<f64> = pts.iter().map(|p| p.1.log10()).collect();
    let bounds = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min).floor();
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max).ceil();
        if hi > lo {
            (lo, hi)
        } else {
            (lo, lo + 1.0)
        }
    };
    let (x0, x1) = bounds(&lx);
    let (y0, y1) = bounds(&ly);
    let sx = |v: f64| pad + (v - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |v: f64| h - pad - (v - y0) / (y1 - y0) * (h - 2.0 * pad);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{pad}" y="{pad}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    for d in x0 as i64..=x1 as i64 {
        let x = sx(d as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{pad}" stroke="#ddd"/><text x="{x:.2}" y="{:.2}" font-size="12" text-anchor="middle">1e{d}</text>"##,
            h - pad,
            h - pad + 18.0
        );
    }
    for d in y0 as i64..=y1 as i64 {
        let y = sy(d as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{pad}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">1e{d}</text>"##,
            w - pad,
            pad - 6.0,
            y + 4.0
        );
    }
    let path: Vec<String> = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| format!("{:.2},{:.2}", sx(*a), sy(*b)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        path.join(" ")
    );
    for (a, b) in lx.iter().zip(&ly) {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#,
            sx(*a),
            sy(*b)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">{}</text>"#,
        w / 2.0,
        h - 12.0,
        xml_escape(&series.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
        h / 2.0,
        h / 2.0,
        xml_escape(&series.y_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="end">slope {slope:.2}</text>"#,
        w - pad - 8.0,
        pad + 20.0
    );
    s.push_str("</svg>\n");
    Ok(s)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
