//! Boundary parametrizations, conformal maps and the builtin benchmark domains.
//!
//! Points in the plane are represented as [`Complex64`] (`x + iy`). Every curve is
//! parametrized counterclockwise over a 2π-periodic parameter, so the outward normal is the
//! tangent rotated by −90°.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use statrs::function::beta::{beta, beta_reg};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::trig_tools::{gregory_weights, PeriodicGrid};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Regularity of a boundary curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    /// Real-analytic (and in particular C^∞).
    Analytic,
    /// C^p but not C^{p+1}.
    Finite(u32),
    /// Piecewise smooth with corners (polygons).
    Corner,
}

/// A 2π-periodic, counterclockwise parametrization of a closed boundary curve.
///
/// Derivatives are analytic, never finite differences.
pub trait BoundaryCurve: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn point(&self, t: f64) -> Complex64;

    /// dx/dt.
    fn tangent(&self, t: f64) -> Complex64;

    /// d²x/dt².
    fn second_derivative(&self, t: f64) -> Complex64;

    fn smoothness(&self) -> Smoothness;

    fn speed(&self, t: f64) -> f64 {
        self.tangent(t).norm()
    }

    /// Unit outward normal.
    fn normal(&self, t: f64) -> Complex64 {
        let tan = self.tangent(t);
        -I * tan / tan.norm()
    }

    /// Normal used when the boundary integral of a normal derivative is discretized by the
    /// trapezoidal rule. At a corner node this is the mean of the one-sided normals, which
    /// splits the node weight evenly between the two adjacent edges.
    fn quadrature_normal(&self, t: f64) -> Complex64 {
        self.normal(t)
    }

    /// Signed curvature (positive for a convex counterclockwise curve).
    fn curvature(&self, t: f64) -> f64 {
        let d1 = self.tangent(t);
        let d2 = self.second_derivative(t);
        (d1.re * d2.im - d1.im * d2.re) / d1.norm().powi(3)
    }

    fn is_polygonal(&self) -> bool {
        self.smoothness() == Smoothness::Corner
    }

    /// Boundary quadrature weights at the grid nodes; `h |T(t_l)|` (the trapezoidal rule)
    /// unless the curve knows better.
    fn quadrature_weights(&self, grid: &PeriodicGrid) -> Vec<f64> {
        let h = grid.spacing();
        grid.nodes().iter().map(|&t| h * self.speed(t)).collect()
    }

    /// Star-shaped radial parametrization `(r, θ) ↦ r·x(θ)` about the origin, if the curve
    /// supports it.
    fn is_star_shaped(&self) -> bool {
        true
    }
}

/// Circle of the given radius centred at the origin.
#[derive(Clone, Debug)]
pub struct Circle {
    pub radius: f64,
}

impl BoundaryCurve for Circle {
    fn name(&self) -> &str {
        "disk"
    }

    fn point(&self, t: f64) -> Complex64 {
        self.radius * Complex64::cis(t)
    }

    fn tangent(&self, t: f64) -> Complex64 {
        self.radius * I * Complex64::cis(t)
    }

    fn second_derivative(&self, t: f64) -> Complex64 {
        -self.radius * Complex64::cis(t)
    }

    fn speed(&self, _t: f64) -> f64 {
        self.radius
    }

    fn normal(&self, t: f64) -> Complex64 {
        Complex64::cis(t)
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Analytic
    }
}

/// Kite: `(cos θ + 0.65 cos 2θ − 0.65, 1.5 sin θ)`.
#[derive(Clone, Debug, Default)]
pub struct Kite;

impl BoundaryCurve for Kite {
    fn name(&self) -> &str {
        "kite"
    }

    fn point(&self, t: f64) -> Complex64 {
        Complex64::new(t.cos() + 0.65 * (2.0 * t).cos() - 0.65, 1.5 * t.sin())
    }

    fn tangent(&self, t: f64) -> Complex64 {
        Complex64::new(-t.sin() - 1.3 * (2.0 * t).sin(), 1.5 * t.cos())
    }

    fn second_derivative(&self, t: f64) -> Complex64 {
        Complex64::new(-t.cos() - 2.6 * (2.0 * t).cos(), -1.5 * t.sin())
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Analytic
    }
}

/// Reading of the perturbed-circle formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PerturbationVariant {
    /// `(p(θ) cos θ, sin θ)` with `p(θ) = |θ−π|³ e^{−2(θ−π)²}`, as printed. Degenerate: the
    /// curve collapses onto the y-axis near θ = π.
    Literal,
    /// `((1 + p(θ)) cos θ, sin θ)`: the unit circle with its left half pushed outwards.
    #[default]
    Radial,
    /// `(1 + p(θ)) (cos θ, sin θ)`: both coordinates scaled.
    Polar,
}

impl FromStr for PerturbationVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "literal" => Ok(Self::Literal),
            "radial" => Ok(Self::Radial),
            "polar" => Ok(Self::Polar),
            _ => Err(Error::UnknownName {
                kind: "perturbation variant",
                name: s.to_owned(),
            }),
        }
    }
}

/// Circle perturbed by a C² bump centred at θ = π.
#[derive(Clone, Debug, Default)]
pub struct PerturbedCircle {
    pub variant: PerturbationVariant,
}

impl PerturbedCircle {
    /// `p(θ)`, `p'(θ)`, `p''(θ)` for θ reduced to `[0, 2π)`.
    fn bump(t: f64) -> (f64, f64, f64) {
        let u = t.rem_euclid(TAU) - PI;
        let a = u.abs();
        let e = (-2.0 * u * u).exp();
        let p = a * a * a * e;
        let dp = e * (3.0 * u * a - 4.0 * u * a * a * a);
        let ddp = e * a * (6.0 - 28.0 * u * u + 16.0 * u.powi(4));
        (p, dp, ddp)
    }

    /// Largest radial displacement, attained at θ = π ± √3/2.
    pub fn max_bump() -> f64 {
        let u: f64 = 3f64.sqrt() / 2.0;
        u.powi(3) * (-2.0 * u * u).exp()
    }
}

impl BoundaryCurve for PerturbedCircle {
    fn name(&self) -> &str {
        "perturbed-circle"
    }

    fn point(&self, t: f64) -> Complex64 {
        let (p, _, _) = Self::bump(t);
        match self.variant {
            PerturbationVariant::Literal => Complex64::new(p * t.cos(), t.sin()),
            PerturbationVariant::Radial => Complex64::new((1.0 + p) * t.cos(), t.sin()),
            PerturbationVariant::Polar => (1.0 + p) * Complex64::cis(t),
        }
    }

    fn tangent(&self, t: f64) -> Complex64 {
        let (p, dp, _) = Self::bump(t);
        let (s, c) = t.sin_cos();
        match self.variant {
            PerturbationVariant::Literal => Complex64::new(dp * c - p * s, c),
            PerturbationVariant::Radial => Complex64::new(dp * c - (1.0 + p) * s, c),
            PerturbationVariant::Polar => {
                dp * Complex64::cis(t) + (1.0 + p) * I * Complex64::cis(t)
            }
        }
    }

    fn second_derivative(&self, t: f64) -> Complex64 {
        let (p, dp, ddp) = Self::bump(t);
        let (s, c) = t.sin_cos();
        match self.variant {
            PerturbationVariant::Literal => {
                Complex64::new(ddp * c - 2.0 * dp * s - p * c, -s)
            }
            PerturbationVariant::Radial => {
                Complex64::new(ddp * c - 2.0 * dp * s - (1.0 + p) * c, -s)
            }
            PerturbationVariant::Polar => {
                let w = Complex64::cis(t);
                ddp * w + 2.0 * dp * I * w - (1.0 + p) * w
            }
        }
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Finite(2)
    }
}

/// The square `[−1, 1]²`, parametrized proportionally to arclength with corners at
/// θ = π/4 + kπ/2 and edge midpoints at θ = kπ/2.
///
/// Corners fall on grid nodes exactly when the node count is a multiple of 8.
#[derive(Clone, Debug, Default)]
pub struct Square;

const SQUARE_CORNERS: [Complex64; 4] = [
    Complex64::new(1.0, -1.0),
    Complex64::new(1.0, 1.0),
    Complex64::new(-1.0, 1.0),
    Complex64::new(-1.0, -1.0),
];

impl Square {
    /// Edge index (0 = right, 1 = top, 2 = left, 3 = bottom) and local fraction in `[0, 1)`.
    fn locate(t: f64) -> (usize, f64) {
        let u = (t + FRAC_PI_4).rem_euclid(TAU) / FRAC_PI_2;
        let k = (u.floor() as usize).min(3);
        (k, u - k as f64)
    }

    fn edge_direction(k: usize) -> Complex64 {
        (SQUARE_CORNERS[(k + 1) % 4] - SQUARE_CORNERS[k]) / 2.0
    }

    /// Returns the corner index if `t` is a corner parameter (to within 1e−12).
    pub fn corner_at(t: f64) -> Option<usize> {
        let u = (t - FRAC_PI_4).rem_euclid(TAU) / FRAC_PI_2;
        let r = u.round();
        if (u - r).abs() < 1e-12 {
            Some((r as usize + 1) % 4)
        } else {
            None
        }
    }
}

impl BoundaryCurve for Square {
    fn name(&self) -> &str {
        "square"
    }

    fn point(&self, t: f64) -> Complex64 {
        let (k, s) = Self::locate(t);
        SQUARE_CORNERS[k] + 2.0 * s * Self::edge_direction(k)
    }

    fn tangent(&self, t: f64) -> Complex64 {
        let (k, _) = Self::locate(t);
        Self::edge_direction(k) * (4.0 / PI)
    }

    fn second_derivative(&self, _t: f64) -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    fn speed(&self, _t: f64) -> f64 {
        4.0 / PI
    }

    fn quadrature_normal(&self, t: f64) -> Complex64 {
        match Self::corner_at(t) {
            Some(c) => {
                let before = -I * Self::edge_direction((c + 3) % 4);
                let after = -I * Self::edge_direction(c);
                (before + after) / 2.0
            }
            None => self.normal(t),
        }
    }

    fn curvature(&self, _t: f64) -> f64 {
        0.0
    }

    fn smoothness(&self) -> Smoothness {
        Smoothness::Corner
    }

    /// Gregory end-corrected trapezoid rule on each edge when the corners are nodes
    /// (`L ≡ 0 mod 8`), which keeps high order for integrands smooth on each edge.
    fn quadrature_weights(&self, grid: &PeriodicGrid) -> Vec<f64> {
        let len = grid.len();
        let h = grid.spacing() * 4.0 / PI;
        if len % 8 != 0 {
            return vec![h; len];
        }
        let per_edge = len / 4;
        let order = (per_edge / 2).min(6);
        let edge = match gregory_weights(per_edge, order) {
            Ok(w) => w,
            Err(_) => return vec![h; len],
        };
        let mut w = vec![0.0; len];
        for k in 0..4 {
            let start = len / 8 + k * per_edge;
            for (j, e) in edge.iter().enumerate() {
                w[(start + j) % len] += h * e;
            }
        }
        w
    }
}

/// A conformal map from the closed unit disk onto a domain, evaluated on the unit circle.
pub trait ConformalMap: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    /// Image of a unit-modulus point.
    fn eval(&self, w: Complex64) -> Complex64;

    /// Complex derivative f′(w).
    fn derivative(&self, w: Complex64) -> Result<Complex64>;

    /// f″(w), when the map is smooth on the closed disk.
    fn second_derivative(&self, _w: Complex64) -> Option<Complex64> {
        None
    }

    /// |f′(e^{iθ})|.
    fn speed(&self, theta: f64) -> Result<f64> {
        Ok(self.derivative(Complex64::cis(theta))?.norm())
    }

    fn is_polygonal(&self) -> bool {
        false
    }

    /// Closed-form moments `∫₀^{2π} |f′(e^{iθ})| e^{ijθ} dθ` for `j = 0..count`, for maps
    /// whose speed is too singular for pointwise collocation.
    fn speed_moments(&self, _count: usize) -> Option<Vec<Complex64>> {
        None
    }
}

#[derive(Clone, Debug, Default)]
pub struct IdentityMap;

impl ConformalMap for IdentityMap {
    fn name(&self) -> &str {
        "disk"
    }

    fn eval(&self, w: Complex64) -> Complex64 {
        w
    }

    fn derivative(&self, _w: Complex64) -> Result<Complex64> {
        Ok(Complex64::new(1.0, 0.0))
    }

    fn second_derivative(&self, _w: Complex64) -> Option<Complex64> {
        Some(Complex64::new(0.0, 0.0))
    }
}

/// `w ↦ sin(w)`.
#[derive(Clone, Debug, Default)]
pub struct SineMap;

impl ConformalMap for SineMap {
    fn name(&self) -> &str {
        "sine"
    }

    fn eval(&self, w: Complex64) -> Complex64 {
        w.sin()
    }

    fn derivative(&self, w: Complex64) -> Result<Complex64> {
        Ok(w.cos())
    }

    fn second_derivative(&self, w: Complex64) -> Option<Complex64> {
        Some(-w.sin())
    }
}

/// Normalising constant `Γ(3/4) / (2√π Γ(5/4))` of the disk-to-square map.
pub fn square_map_constant() -> f64 {
    gamma(0.75) / (2.0 * PI.sqrt() * gamma(1.25))
}

/// |f′(e^{iθ})| for the Schwarz–Christoffel map of the unit disk onto `[−1, 1]²`.
///
/// Singular where `cos θ`, `cos(θ/2)` or `sin(θ/2)` vanishes.
pub fn square_conformal_speed(theta: f64) -> Result<f64> {
    let th = theta.rem_euclid(TAU);
    let th = if th > PI { th - TAU } else { th };
    let denom = th.cos().abs() * (th / 2.0).cos() * (th / 2.0).sin().abs();
    if !(denom > 1e-15) || !theta.is_finite() {
        return Err(Error::SingularAngle(theta));
    }
    let c = square_map_constant();
    Ok(c / denom.sqrt())
}

/// Disk-to-square conformal map. Corners are the images of θ = kπ/2; the map is evaluated
/// on the unit circle only.
#[derive(Clone, Debug, Default)]
pub struct SquareMap;

impl SquareMap {
    fn quarter(theta: f64) -> (usize, f64) {
        let u = theta.rem_euclid(TAU) / FRAC_PI_2;
        let k = (u.floor() as usize).min(3);
        (k, (u - k as f64) * FRAC_PI_2)
    }
}

impl ConformalMap for SquareMap {
    fn name(&self) -> &str {
        "square"
    }

    fn eval(&self, w: Complex64) -> Complex64 {
        let (k, phi) = Self::quarter(w.arg());
        // arclength along the edge is 2·I_{sin²φ}(1/4, 1/4)
        let s = 2.0 * beta_reg(0.25, 0.25, phi.sin().powi(2));
        SQUARE_CORNERS[k] + s * Square::edge_direction(k)
    }

    fn derivative(&self, w: Complex64) -> Result<Complex64> {
        let theta = w.arg();
        let speed = square_conformal_speed(theta)?;
        let (k, _) = Self::quarter(theta);
        Ok(speed * Square::edge_direction(k) / (I * w))
    }

    fn is_polygonal(&self) -> bool {
        true
    }

    // |f′| = 2c |sin 2θ|^{-1/2}; only multiples of 4 survive, with
    // ∫₀^{2π} |sin 2θ|^{-1/2} cos 4kθ dθ = 2 I_k, I_k = ∫₀^π sin^{-1/2}x cos 2kx dx,
    // I_0 = B(¼, ½) and I_k = I_{k−1} (k − ¾)/(k − ¼).
    fn speed_moments(&self, count: usize) -> Option<Vec<Complex64>> {
        let scale = 4.0 * square_map_constant();
        let mut ik = beta(0.25, 0.5);
        let mut out = vec![Complex64::new(0.0, 0.0); count];
        for (j, m) in out.iter_mut().enumerate() {
            if j % 4 != 0 {
                continue;
            }
            let k = (j / 4) as f64;
            if k > 0.0 {
                ik *= (k - 0.75) / (k - 0.25);
            }
            *m = Complex64::new(scale * ik, 0.0);
        }
        Some(out)
    }
}

/// Boundary curve `t ↦ f(e^{it})` traced by a conformal map.
#[derive(Clone, Debug)]
pub struct ConformalBoundary {
    map: Arc<dyn ConformalMap>,
    name: String,
    smoothness: Smoothness,
}

impl ConformalBoundary {
    pub fn new(map: Arc<dyn ConformalMap>, smoothness: Smoothness) -> Self {
        let name = map.name().to_owned();
        Self {
            map,
            name,
            smoothness,
        }
    }

    pub fn map(&self) -> &Arc<dyn ConformalMap> {
        &self.map
    }
}

impl BoundaryCurve for ConformalBoundary {
    fn name(&self) -> &str {
        &self.name
    }

    fn point(&self, t: f64) -> Complex64 {
        self.map.eval(Complex64::cis(t))
    }

    fn tangent(&self, t: f64) -> Complex64 {
        let w = Complex64::cis(t);
        self.map.derivative(w).map(|d| d * I * w).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn second_derivative(&self, t: f64) -> Complex64 {
        let w = Complex64::cis(t);
        match (self.map.derivative(w), self.map.second_derivative(w)) {
            (Ok(d1), Some(d2)) => -w * w * d2 - w * d1,
            _ => Complex64::new(0.0, 0.0),
        }
    }

    fn speed(&self, t: f64) -> f64 {
        self.map.speed(t).unwrap_or(f64::NAN)
    }

    fn smoothness(&self) -> Smoothness {
        self.smoothness
    }
}

pub fn make_disk() -> Arc<dyn BoundaryCurve> {
    Arc::new(Circle { radius: 1.0 })
}

pub fn make_sine_domain() -> (Arc<dyn BoundaryCurve>, Arc<dyn ConformalMap>) {
    let map: Arc<dyn ConformalMap> = Arc::new(SineMap);
    let curve = Arc::new(ConformalBoundary::new(map.clone(), Smoothness::Analytic));
    (curve, map)
}

pub fn make_kite() -> Arc<dyn BoundaryCurve> {
    Arc::new(Kite)
}

pub fn make_perturbed_circle(variant: PerturbationVariant) -> Arc<dyn BoundaryCurve> {
    Arc::new(PerturbedCircle { variant })
}

pub fn make_square() -> Arc<dyn BoundaryCurve> {
    Arc::new(Square)
}

/// Builtin benchmark domains, addressable by their CLI names.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Disk,
    Sine,
    Kite,
    PerturbedCircle(PerturbationVariant),
    Square,
}

impl Domain {
    pub const NAMES: [&'static str; 5] = ["disk", "sine", "kite", "perturbed-circle", "square"];

    pub fn name(&self) -> &'static str {
        match self {
            Domain::Disk => "disk",
            Domain::Sine => "sine",
            Domain::Kite => "kite",
            Domain::PerturbedCircle(_) => "perturbed-circle",
            Domain::Square => "square",
        }
    }

    pub fn curve(&self) -> Arc<dyn BoundaryCurve> {
        match self {
            Domain::Disk => make_disk(),
            Domain::Sine => make_sine_domain().0,
            Domain::Kite => make_kite(),
            Domain::PerturbedCircle(v) => make_perturbed_circle(*v),
            Domain::Square => make_square(),
        }
    }

    pub fn conformal_map(&self) -> Option<Arc<dyn ConformalMap>> {
        match self {
            Domain::Disk => Some(Arc::new(IdentityMap)),
            Domain::Sine => Some(Arc::new(SineMap)),
            Domain::Square => Some(Arc::new(SquareMap)),
            _ => None,
        }
    }
}

impl FromStr for Domain {
    type Err = Error;

    /// Accepts the CLI names; `perturbed-circle` may carry a variant suffix, e.g.
    /// `perturbed-circle:literal`.
    fn from_str(s: &str) -> Result<Self> {
        let (base, variant) = match s.split_once(':') {
            Some((b, v)) => (b, Some(v)),
            None => (s, None),
        };
        let domain = match base {
            "disk" => Domain::Disk,
            "sine" => Domain::Sine,
            "kite" => Domain::Kite,
            "perturbed-circle" => {
                let v = variant.map(str::parse).transpose()?.unwrap_or_default();
                return Ok(Domain::PerturbedCircle(v));
            }
            "square" => Domain::Square,
            _ => {
                return Err(Error::UnknownName {
                    kind: "domain",
                    name: s.to_owned(),
                })
            }
        };
        if variant.is_some() {
            return Err(Error::UnknownName {
                kind: "domain",
                name: s.to_owned(),
            });
        }
        Ok(domain)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::PerturbedCircle(PerturbationVariant::Radial) | Domain::Disk
            | Domain::Sine | Domain::Kite | Domain::Square => f.write_str(self.name()),
            Domain::PerturbedCircle(PerturbationVariant::Literal) => {
                f.write_str("perturbed-circle:literal")
            }
            Domain::PerturbedCircle(PerturbationVariant::Polar) => {
                f.write_str("perturbed-circle:polar")
            }
        }
    }
}

/// Winding number of the closed polygon through `points` around `x`.
pub fn winding_number(points: &[Complex64], x: Complex64) -> f64 {
    let n = points.len();
    let mut total = 0.0;
    for k in 0..n {
        let a = points[k] - x;
        let b = points[(k + 1) % n] - x;
        total += (b / a).arg();
    }
    total / TAU
}
