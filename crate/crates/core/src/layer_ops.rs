//! Discretized single layer and Neumann–Poincaré operators and interior potentials.
//!
//! The fundamental solution is `Γ(x, y) = (1/2π) log|x − y|` throughout. The single layer
//! kernel is split as
//!
//! ```text
//! (1/4π) log(4 sin²((τ−t)/2)) + (1/4π) log(|x(τ) − x(t)|² / (4 sin²((τ−t)/2)))
//! ```
//!
//! where the first part is integrated with [`crate::trig_tools::log_kernel_weights`] and
//! the second, smooth part with the trapezoidal rule.

use std::f64::consts::PI;
use std::sync::Arc;

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{winding_number, BoundaryCurve};
use crate::trig_tools::{log_kernel_weight_row, PeriodicGrid};

/// Interior points closer than this many node spacings to the boundary are refused.
pub const NEAR_BOUNDARY_FACTOR: f64 = 8.0;

/// Nodal values of a boundary density.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityVector {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl DensityVector {
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("density has non-finite entries".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// A boundary operator discretized on a grid.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    pub matrix: Mat<f64>,
    pub grid: PeriodicGrid,
    pub curve: Arc<str>,
}

impl OperatorMatrix {
    pub fn apply(&self, density: &[f64]) -> Result<Vec<f64>> {
        let n = self.grid.len();
        if density.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: density.len(),
            });
        }
        Ok((0..n)
            .map(|i| (0..n).map(|j| self.matrix[(i, j)] * density[j]).sum())
            .collect())
    }
}

/// Curve samples at the grid nodes.
#[derive(Clone, Debug)]
pub struct BoundaryNodes {
    pub grid: PeriodicGrid,
    pub points: Vec<Complex64>,
    pub normals: Vec<Complex64>,
    pub speed: Vec<f64>,
    /// Trapezoid weights `h |T(t_l)|`.
    pub weights: Vec<f64>,
    /// Minimum admissible distance of an interior evaluation point from the nodes.
    pub threshold: f64,
}

impl BoundaryNodes {
    pub fn new(curve: &dyn BoundaryCurve, grid: &PeriodicGrid) -> Self {
        let nodes = grid.nodes();
        let points: Vec<Complex64> = nodes.iter().map(|&t| curve.point(t)).collect();
        let normals = nodes.iter().map(|&t| curve.quadrature_normal(t)).collect();
        let speed: Vec<f64> = nodes.iter().map(|&t| curve.speed(t)).collect();
        let weights = curve.quadrature_weights(grid);
        let n = points.len();
        let spacing = (0..n)
            .map(|l| (points[(l + 1) % n] - points[l]).norm())
            .fold(0.0, f64::max);
        Self {
            grid: *grid,
            points,
            normals,
            speed,
            weights,
            threshold: NEAR_BOUNDARY_FACTOR * spacing,
        }
    }

    /// Perimeter by the trapezoidal rule.
    pub fn perimeter(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Distance from `x` to the nearest node.
    pub fn distance(&self, x: Complex64) -> f64 {
        self.points
            .iter()
            .map(|p| (p - x).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: Complex64) -> bool {
        winding_number(&self.points, x).abs() > 0.5
    }

    /// Refuses points outside the domain or inside the near-boundary band.
    pub fn check_interior(&self, x: Complex64) -> Result<()> {
        let distance = self.distance(x);
        if distance < self.threshold {
            return Err(Error::NearBoundary {
                x: x.re,
                y: x.im,
                distance,
                threshold: self.threshold,
            });
        }
        if !self.contains(x) {
            return Err(Error::InvalidArgument(format!(
                "point ({}, {}) lies outside the domain",
                x.re, x.im
            )));
        }
        Ok(())
    }

    /// `Σ_l w_l (1/2π) log|x − x_l| φ_l`, with no distance check.
    pub fn single_layer_at(&self, density: &[f64], x: Complex64) -> f64 {
        let mut acc = 0.0;
        for l in 0..self.points.len() {
            acc += self.weights[l] * (self.points[l] - x).norm_sqr().ln() * density[l];
        }
        acc / (4.0 * PI)
    }

    /// Representation formula `u(x) = ∫ ∂_ν Γ(x,·) u dσ − ∫ Γ(x,·) ∂_ν u dσ`, with no distance
    /// check.
    pub fn representation_at(&self, trace: &[f64], flux: &[f64], x: Complex64) -> f64 {
        let mut double = 0.0;
        let mut single = 0.0;
        for l in 0..self.points.len() {
            let d = self.points[l] - x;
            let r2 = d.norm_sqr();
            let nd = self.normals[l].re * d.re + self.normals[l].im * d.im;
            double += self.weights[l] * nd / r2 * trace[l];
            single += self.weights[l] * r2.ln() * flux[l];
        }
        double / (2.0 * PI) - single / (4.0 * PI)
    }
}

fn reject_polygon(curve: &dyn BoundaryCurve, op: &'static str) -> Result<()> {
    if curve.is_polygonal() {
        Err(Error::PolygonalCurve(op))
    } else {
        Ok(())
    }
}

/// Nyström matrix of the single layer operator `𝒮[φ](τ) = ∫ Γ(x(τ), x(t)) φ(t) |T(t)| dt`.
pub fn assemble_single_layer(
    curve: &dyn BoundaryCurve,
    grid: &PeriodicGrid,
) -> Result<OperatorMatrix> {
    reject_polygon(curve, "the single layer discretization")?;
    let n = grid.len();
    let h = grid.spacing();
    let nodes = grid.nodes();
    let points: Vec<Complex64> = nodes.iter().map(|&t| curve.point(t)).collect();
    let speed: Vec<f64> = nodes.iter().map(|&t| curve.speed(t)).collect();
    let row = log_kernel_weight_row(grid);
    let c = 1.0 / (4.0 * PI);
    let matrix = Mat::from_fn(n, n, |k, j| {
        let smooth = if k == j {
            speed[k].powi(2).ln()
        } else {
            let s = ((nodes[k] - nodes[j]) / 2.0).sin();
            ((points[k] - points[j]).norm_sqr() / (4.0 * s * s)).ln()
        };
        c * (row[(k + n - j) % n] + h * smooth) * speed[j]
    });
    Ok(OperatorMatrix {
        matrix,
        grid: *grid,
        curve: curve.name().into(),
    })
}

/// Nyström matrix of `𝒦*[φ](τ) = ∫ ∂_ν(τ) Γ(x(τ), x(t)) φ(t) |T(t)| dt`.
pub fn assemble_neumann_poincare(
    curve: &dyn BoundaryCurve,
    grid: &PeriodicGrid,
) -> Result<OperatorMatrix> {
    reject_polygon(curve, "the Neumann-Poincare discretization")?;
    let n = grid.len();
    let h = grid.spacing();
    let nodes = grid.nodes();
    let points: Vec<Complex64> = nodes.iter().map(|&t| curve.point(t)).collect();
    let normals: Vec<Complex64> = nodes.iter().map(|&t| curve.normal(t)).collect();
    let speed: Vec<f64> = nodes.iter().map(|&t| curve.speed(t)).collect();
    let kappa: Vec<f64> = nodes.iter().map(|&t| curve.curvature(t)).collect();
    let matrix = Mat::from_fn(n, n, |k, j| {
        if k == j {
            h * kappa[k] * speed[k] / (4.0 * PI)
        } else {
            let d = points[k] - points[j];
            let nd = normals[k].re * d.re + normals[k].im * d.im;
            h * nd / (2.0 * PI * d.norm_sqr()) * speed[j]
        }
    });
    Ok(OperatorMatrix {
        matrix,
        grid: *grid,
        curve: curve.name().into(),
    })
}

/// Single layer potential of a density at an interior point.
pub fn single_layer_interior(
    curve: &dyn BoundaryCurve,
    grid: &PeriodicGrid,
    density: &[f64],
    x: Complex64,
) -> Result<f64> {
    if density.len() != grid.len() {
        return Err(Error::LengthMismatch {
            expected: grid.len(),
            actual: density.len(),
        });
    }
    let nodes = BoundaryNodes::new(curve, grid);
    nodes.check_interior(x)?;
    Ok(nodes.single_layer_at(density, x))
}

/// Interior value of a Steklov eigenfunction from its boundary trace and eigenvalue:
/// `s(x) = ∫ ∂_ν Γ(x,y) s dσ − λ ∫ Γ(x,y) s dσ`.
pub fn greens_identity_interior(
    curve: &dyn BoundaryCurve,
    grid: &PeriodicGrid,
    trace: &[f64],
    lambda: f64,
    x: Complex64,
) -> Result<f64> {
    if trace.len() != grid.len() {
        return Err(Error::LengthMismatch {
            expected: grid.len(),
            actual: trace.len(),
        });
    }
    let nodes = BoundaryNodes::new(curve, grid);
    nodes.check_interior(x)?;
    let flux: Vec<f64> = trace.iter().map(|s| lambda * s).collect();
    Ok(nodes.representation_at(trace, &flux, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_disk, make_kite, Circle};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn grid(l: usize) -> PeriodicGrid {
        PeriodicGrid::new(l).unwrap()
    }

    /// Oracle for `𝒮[φ](τ)` on a circle of radius `r`: a fine midpoint rule in the variable
    /// `s = π u³` on both sides of `τ`, which resolves the logarithmic singularity.
    fn circle_single_layer_oracle(r: f64, phi: impl Fn(f64) -> f64, tau: f64) -> f64 {
        let n = 200_000;
        let mut acc = 0.0;
        for i in 0..n {
            let u = (i as f64 + 0.5) / n as f64;
            let s = PI * u * u * u;
            let ds = 3.0 * PI * u * u / n as f64;
            let dist = 2.0 * r * (s / 2.0).sin();
            acc += dist.ln() / TAU * (phi(tau - s) + phi(tau + s)) * r * ds;
        }
        acc
    }

    #[test]
    fn circle_single_layer_examples() {
        let g = grid(64);
        let s = assemble_single_layer(make_disk().as_ref(), &g).unwrap();
        for n in 1..=8 {
            let phi = g.sample(|t| (n as f64 * t).cos());
            let out = s.apply(&phi).unwrap();
            for (k, v) in out.iter().enumerate() {
                assert_abs_diff_eq!(*v, -phi[k] / (2.0 * n as f64), epsilon = 1e-12);
            }
        }
        let ones = vec![1.0; 64];
        for v in s.apply(&ones).unwrap() {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }
        let s2 = assemble_single_layer(&Circle { radius: 2.0 }, &g).unwrap();
        let oracle = circle_single_layer_oracle(2.0, |_| 1.0, 0.0);
        for v in s2.apply(&ones).unwrap() {
            assert_abs_diff_eq!(v, 2.0f64.ln() * 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(v, oracle, epsilon = 1e-6);
        }
        let oracle = circle_single_layer_oracle(1.0, |t| (3.0 * t).cos(), g.node(5));
        let out = s.apply(&g.sample(|t| (3.0 * t).cos())).unwrap();
        assert_abs_diff_eq!(out[5], oracle, epsilon = 1e-6);
    }

    #[test]
    fn circle_neumann_poincare_examples() {
        let g = grid(64);
        let k = assemble_neumann_poincare(make_disk().as_ref(), &g).unwrap();
        for n in 1..=8 {
            for v in k.apply(&g.sample(|t| (n as f64 * t).sin())).unwrap() {
                assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
            }
        }
        for v in k.apply(&[1.0; 64]).unwrap() {
            assert_abs_diff_eq!(v, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn circle_diagonalization_at_256() {
        let g = grid(256);
        let d = make_disk();
        let s = assemble_single_layer(d.as_ref(), &g).unwrap();
        let k = assemble_neumann_poincare(d.as_ref(), &g).unwrap();
        for n in 1..=8 {
            for e in [
                g.sample(|t| (n as f64 * t).cos()),
                g.sample(|t| (n as f64 * t).sin()),
            ] {
                let se = s.apply(&e).unwrap();
                let ke = k.apply(&e).unwrap();
                for l in 0..256 {
                    assert!((se[l] + e[l] / (2.0 * n as f64)).abs() <= 1e-12);
                    assert!(ke[l].abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn polygons_are_rejected() {
        let sq = crate::geometry::make_square();
        assert!(matches!(
            assemble_single_layer(sq.as_ref(), &grid(16)),
            Err(Error::PolygonalCurve(_))
        ));
        assert!(assemble_neumann_poincare(sq.as_ref(), &grid(16)).is_err());
    }

    #[test]
    fn kite_single_layer_self_converges() {
        let kite = make_kite();
        let norm = |l: usize| {
            let g = grid(l);
            let s = assemble_single_layer(kite.as_ref(), &g).unwrap();
            let v = s.apply(&g.sample(|t| t.cos().exp())).unwrap();
            let sp: Vec<f64> = g.sample(|t| kite.speed(t));
            let sq: Vec<f64> = v.iter().map(|x| x * x).collect();
            crate::trig_tools::trapezoid(&sq, &sp, &g).unwrap().sqrt()
        };
        assert!((norm(512) - norm(1024)).abs() <= 1e-10);
    }

    #[test]
    fn single_layer_interior_examples() {
        let d = make_disk();
        let g = grid(128);
        let ones = vec![1.0; 128];
        assert_abs_diff_eq!(
            single_layer_interior(d.as_ref(), &g, &ones, Complex64::new(0.0, 0.0)).unwrap(),
            0.0,
            epsilon = 1e-14
        );
        let c = g.sample(f64::cos);
        let v = single_layer_interior(d.as_ref(), &g, &c, Complex64::new(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(v, -0.25, epsilon = 1e-12);
        assert!(matches!(
            single_layer_interior(d.as_ref(), &g, &c, Complex64::new(0.99, 0.0)),
            Err(Error::NearBoundary { .. })
        ));
        assert!(single_layer_interior(d.as_ref(), &g, &c, Complex64::new(2.0, 0.0)).is_err());
    }

    #[test]
    fn greens_identity_examples() {
        let d = make_disk();
        let g = grid(128);
        let norm = 1.0 / (2.0 * TAU).sqrt();
        let trace = g.sample(|t| norm * t.cos());
        let v = greens_identity_interior(d.as_ref(), &g, &trace, 1.0, Complex64::new(0.5, 0.0))
            .unwrap();
        assert_abs_diff_eq!(v, 0.5 * trace[0], epsilon = 1e-10);
        let s0 = vec![1.0 / TAU.sqrt(); 128];
        let v = greens_identity_interior(d.as_ref(), &g, &s0, 0.0, Complex64::new(0.2, -0.3))
            .unwrap();
        assert_abs_diff_eq!(v, s0[0], epsilon = 1e-12);
        let kite = make_kite();
        let g = grid(512);
        let v = greens_identity_interior(kite.as_ref(), &g, &vec![1.0; 512], 0.0, Complex64::new(-0.3, 0.2))
            .unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);
    }

    proptest! {
        #[test]
        fn single_layer_form_is_symmetric(
            a in proptest::collection::vec(-1.0f64..1.0, 32),
            b in proptest::collection::vec(-1.0f64..1.0, 32),
        ) {
            let kite = make_kite();
            let g = grid(32);
            let s = assemble_single_layer(kite.as_ref(), &g).unwrap();
            let sp = g.sample(|t| kite.speed(t));
            let sa = s.apply(&a).unwrap();
            let sb = s.apply(&b).unwrap();
            let ab: f64 = (0..32).map(|l| sa[l] * b[l] * sp[l]).sum();
            let ba: f64 = (0..32).map(|l| sb[l] * a[l] * sp[l]).sum();
            prop_assert!((ab - ba).abs() <= 1e-10);
        }
    }
}
