//! Node-indexed scalar fields and the discrete calculus used everywhere else.
//!
//! Gradients use centered first differences, Hessians centered second
//! differences with the four-point cross stencil for the mixed entry; both
//! are exact on polynomials of degree ≤ 2.

use std::io::{self, Write};

use crate::error::FieldError;
use crate::grid::{BallSpec, Grid, Point};

/// What a field holds; informational, carried through dumps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Solution,
    Source,
    Residual,
    Derived,
}

impl FieldKind {
    pub fn label(self) -> &'static str {
        match self {
            FieldKind::Solution => "solution",
            FieldKind::Source => "source",
            FieldKind::Residual => "residual",
            FieldKind::Derived => "derived",
        }
    }
}

/// Symmetric 2x2 matrix; `xy` and `yy` stay 0 on 1D grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymMatrix {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl SymMatrix {
    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.xx + self.yy);
        let det = self.xx * self.yy - self.xy * self.xy;
        let disc = (mean * mean - det).max(0.0).sqrt();
        (mean - disc, mean + disc)
    }

    /// Nearest (Frobenius) nonnegative-definite matrix: clip negative eigenvalues.
    pub fn clip_nonnegative(&self) -> SymMatrix {
        let (l1, l2) = self.eigenvalues();
        if l1 >= 0.0 {
            return *self;
        }
        // Eigenvector for l2; handle the diagonal case directly.
        let (c, s) = if self.xy.abs() < 1e-300 {
            if self.xx >= self.yy {
                (1.0, 0.0)
            } else {
                (0.0, 1.0)
            }
        } else {
            let vx = l2 - self.yy;
            let vy = self.xy;
            let n = (vx * vx + vy * vy).sqrt();
            (vx / n, vy / n)
        };
        let l2 = l2.max(0.0);
        SymMatrix {
            xx: l2 * c * c,
            xy: l2 * c * s,
            yy: l2 * s * s,
        }
    }

    pub fn frobenius_distance(&self, other: &SymMatrix) -> f64 {
        let dxx = self.xx - other.xx;
        let dxy = self.xy - other.xy;
        let dyy = self.yy - other.yy;
        (dxx * dxx + 2.0 * dxy * dxy + dyy * dyy).sqrt()
    }
}

/// Real values attached to every node of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    kind: FieldKind,
    values: Vec<f64>,
}

impl ScalarField {
    /// Evaluates `f` at every node. Fails if any value is NaN or infinite.
    pub fn sample<F>(grid: &Grid, kind: FieldKind, f: F) -> Result<ScalarField, FieldError>
    where
        F: Fn(Point) -> f64,
    {
        let mut values = Vec::with_capacity(grid.num_nodes());
        for i in grid.indices() {
            let p = grid.coord(i);
            let v = f(p);
            if !v.is_finite() {
                return Err(FieldError::NonFiniteSample {
                    index: i,
                    x: p[0],
                    y: p[1],
                });
            }
            values.push(v);
        }
        Ok(ScalarField {
            grid: grid.clone(),
            kind,
            values,
        })
    }

    pub fn constant(grid: &Grid, kind: FieldKind, c: f64) -> ScalarField {
        ScalarField {
            grid: grid.clone(),
            kind,
            values: vec![c; grid.num_nodes()],
        }
    }

    /// Wraps precomputed values; length must match the grid.
    pub fn from_values(grid: &Grid, kind: FieldKind, values: Vec<f64>) -> ScalarField {
        assert_eq!(values.len(), grid.num_nodes(), "value vector length");
        ScalarField {
            grid: grid.clone(),
            kind,
            values,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn with_kind(mut self, kind: FieldKind) -> ScalarField {
        self.kind = kind;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    #[inline]
    pub fn at(&self, index: usize) -> f64 {
        self.values[index]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sup-norm of the difference with `other` (same grid required).
    pub fn sup_distance(&self, other: &ScalarField) -> Result<f64, FieldError> {
        if self.grid != other.grid {
            return Err(FieldError::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Centered-difference gradient at a strictly interior node.
    pub fn gradient_at(&self, index: usize) -> Result<Point, FieldError> {
        if !self.grid.is_interior(index) {
            return Err(FieldError::BoundaryNode(index));
        }
        Ok(self.gradient_unchecked(index))
    }

    #[inline]
    pub(crate) fn gradient_unchecked(&self, index: usize) -> Point {
        let g = &self.grid;
        let two_h = 2.0 * g.spacing();
        let v = &self.values;
        let gx = (v[index + 1] - v[index - 1]) / two_h;
        let gy = if g.ndim() == 2 {
            let nx = g.nx();
            (v[index + nx] - v[index - nx]) / two_h
        } else {
            0.0
        };
        [gx, gy]
    }

    /// Centered-difference Hessian at a strictly interior node.
    ///
    /// The mixed entry uses the four-point cross stencil
    /// `(f(+,+) - f(+,-) - f(-,+) + f(-,-)) / (4 h^2)`.
    pub fn hessian_at(&self, index: usize) -> Result<SymMatrix, FieldError> {
        if !self.grid.is_interior(index) {
            return Err(FieldError::BoundaryNode(index));
        }
        Ok(self.hessian_unchecked(index))
    }

    #[inline]
    pub(crate) fn hessian_unchecked(&self, index: usize) -> SymMatrix {
        let g = &self.grid;
        let h2 = g.spacing() * g.spacing();
        let v = &self.values;
        let c = v[index];
        let xx = (v[index + 1] - 2.0 * c + v[index - 1]) / h2;
        if g.ndim() == 1 {
            return SymMatrix {
                xx,
                xy: 0.0,
                yy: 0.0,
            };
        }
        let nx = g.nx();
        let yy = (v[index + nx] - 2.0 * c + v[index - nx]) / h2;
        let xy = (v[index + nx + 1] - v[index + nx - 1] - v[index - nx + 1]
            + v[index - nx - 1])
            / (4.0 * h2);
        SymMatrix { xx, xy, yy }
    }

    /// Maximum of the field over grid nodes inside the closed ball.
    pub fn sup_on_ball(&self, ball: &BallSpec) -> Result<f64, FieldError> {
        let nodes = self.grid.nodes_in_ball(ball.center, ball.radius);
        if nodes.is_empty() {
            return Err(FieldError::EmptyBall {
                x: ball.center[0],
                y: ball.center[1],
                radius: ball.radius,
            });
        }
        Ok(nodes
            .into_iter()
            .map(|i| self.values[i])
            .fold(f64::NEG_INFINITY, f64::max))
    }

    /// Bilinear interpolation at an arbitrary point of the closed box.
    ///
    /// Points are clamped to the box, so querying within rounding of the
    /// boundary is safe.
    pub fn interpolate(&self, p: Point) -> f64 {
        let g = &self.grid;
        let h = g.spacing();
        let clamped = |k: usize, t: f64| -> (usize, f64) {
            let n = g.dims()[k];
            let s = ((t - g.lo()[k]) / h).clamp(0.0, (n - 1) as f64);
            let i = (s.floor() as usize).min(n - 2);
            (i, s - i as f64)
        };
        let (ix, fx) = clamped(0, p[0]);
        if g.ndim() == 1 {
            let a = self.values[ix];
            let b = self.values[ix + 1];
            return a + fx * (b - a);
        }
        let (iy, fy) = clamped(1, p[1]);
        let nx = g.nx();
        let i00 = iy * nx + ix;
        let v00 = self.values[i00];
        let v10 = self.values[i00 + 1];
        let v01 = self.values[i00 + nx];
        let v11 = self.values[i00 + nx + 1];
        v00 * (1.0 - fx) * (1.0 - fy)
            + v10 * fx * (1.0 - fy)
            + v01 * (1.0 - fx) * fy
            + v11 * fx * fy
    }

    /// Writes `x,y,value` rows (outer loop over the last axis), 17 significant
    /// digits on the value column. 1D grids drop the `y` column.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        if self.grid.ndim() == 1 {
            writeln!(w, "x,value")?;
            for i in self.grid.indices() {
                let p = self.grid.coord(i);
                writeln!(w, "{},{:.16e}", p[0], self.values[i])?;
            }
        } else {
            writeln!(w, "x,y,value")?;
            for iy in 0..self.grid.ny() {
                for ix in 0..self.grid.nx() {
                    let i = self.grid.index(ix, iy);
                    let p = self.grid.coord(i);
                    writeln!(w, "{},{},{:.16e}", p[0], p[1], self.values[i])?;
                }
            }
        }
        Ok(())
    }

    /// Plain-text PGM (P2) dump, min-max normalized to 0..255.
    ///
    /// Rows run from the top of the domain (largest y) downward so the image
    /// matches the usual orientation of the box.
    pub fn write_pgm<W: Write>(&self, w: &mut W) -> io::Result<()> {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        let lo = self.min();
        let hi = self.max();
        let span = if hi > lo { hi - lo } else { 1.0 };
        writeln!(w, "P2")?;
        writeln!(w, "{} {}", nx, ny)?;
        writeln!(w, "255")?;
        for iy in (0..ny).rev() {
            let mut row = String::with_capacity(nx * 4);
            for ix in 0..nx {
                let v = self.values[self.grid.index(ix, iy)];
                let level = ((v - lo) / span * 255.0).round() as i64;
                let level = level.clamp(0, 255);
                if ix > 0 {
                    row.push(' ');
                }
                row.push_str(&level.to_string());
            }
            writeln!(w, "{}", row)?;
        }
        Ok(())
    }
}

/// Pointwise `max(u,0)^(1/2) + max(v,0)^(1/3)`.
///
/// Values below `-clamp_tol` are treated as genuine negativity (the pair
/// fails the nonnegativity hypothesis) and reported as an error rather than
/// silently clamped.
pub fn intrinsic_norm(
    u: &ScalarField,
    v: &ScalarField,
    clamp_tol: f64,
) -> Result<ScalarField, FieldError> {
    if u.grid != v.grid {
        return Err(FieldError::GridMismatch);
    }
    for field in [u, v] {
        let min = field.min();
        if min < -clamp_tol {
            return Err(FieldError::NegativityViolation {
                min,
                tol: clamp_tol,
            });
        }
    }
    Ok(intrinsic_norm_clamped(u, v))
}

/// Total variant of [`intrinsic_norm`]: clamps all negative values at 0.
/// Used where negativity has already been screened or is reported separately.
pub fn intrinsic_norm_clamped(u: &ScalarField, v: &ScalarField) -> ScalarField {
    assert_eq!(u.grid, v.grid, "fields live on different grids");
    let values = u
        .values
        .iter()
        .zip(&v.values)
        .map(|(&a, &b)| a.max(0.0).sqrt() + b.max(0.0).cbrt())
        .collect();
    ScalarField {
        grid: u.grid.clone(),
        kind: FieldKind::Derived,
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn quarter_r2(p: Point) -> f64 {
        0.25 * (p[0] * p[0] + p[1] * p[1])
    }

    #[test]
    fn sample_linear_1d() {
        let g = Grid::new(&[-1.0], &[1.0], 1.0).unwrap();
        let f = ScalarField::sample(&g, FieldKind::Source, |p| p[0]).unwrap();
        assert_eq!(f.values(), &[-1.0, 0.0, 1.0]);
    }

    #[test]
    fn sample_rejects_non_finite() {
        let g = Grid::unit_square(0.5).unwrap();
        let err = ScalarField::sample(&g, FieldKind::Source, |p| 1.0 / p[0]).unwrap_err();
        assert!(matches!(err, FieldError::NonFiniteSample { .. }));
    }

    #[test]
    fn corner_value_of_quadratic() {
        let g = Grid::unit_square(0.5).unwrap();
        let f = ScalarField::sample(&g, FieldKind::Source, quarter_r2).unwrap();
        assert_abs_diff_eq!(f.at(0), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn gradient_exact_on_linear_and_quadratic() {
        let g = Grid::unit_square(0.25).unwrap();
        let lin = ScalarField::sample(&g, FieldKind::Source, |p| p[0]).unwrap();
        let at = g.index(3, 4);
        assert_eq!(lin.gradient_at(at).unwrap(), [1.0, 0.0]);

        let c = ScalarField::constant(&g, FieldKind::Source, 2.5);
        assert_eq!(c.gradient_at(at).unwrap(), [0.0, 0.0]);

        let q = ScalarField::sample(&g, FieldKind::Source, quarter_r2).unwrap();
        let at = g.index(6, 4); // (0.5, 0.0)
        let grad = q.gradient_at(at).unwrap();
        assert_abs_diff_eq!(grad[0], 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(grad[1], 0.0, epsilon = 1e-14);
    }

    #[test]
    fn gradient_rejects_boundary() {
        let g = Grid::unit_square(0.5).unwrap();
        let f = ScalarField::constant(&g, FieldKind::Source, 0.0);
        assert!(matches!(
            f.gradient_at(0),
            Err(FieldError::BoundaryNode(0))
        ));
    }

    #[test]
    fn hessian_exact_on_quadratics() {
        let g = Grid::unit_square(0.25).unwrap();
        let at = g.index(5, 3);
        let q = ScalarField::sample(&g, FieldKind::Source, quarter_r2).unwrap();
        let h = q.hessian_at(at).unwrap();
        assert_abs_diff_eq!(h.xx, 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(h.yy, 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(h.xy, 0.0, epsilon = 1e-13);

        let cross = ScalarField::sample(&g, FieldKind::Source, |p| 0.5 * p[0] * p[1]).unwrap();
        let h = cross.hessian_at(at).unwrap();
        assert_abs_diff_eq!(h.xy, 0.5, epsilon = 1e-13);

        let lin = ScalarField::sample(&g, FieldKind::Source, |p| 3.0 * p[0] - p[1]).unwrap();
        let h = lin.hessian_at(at).unwrap();
        assert_abs_diff_eq!(h.xx, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(h.xy, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(h.yy, 0.0, epsilon = 1e-13);
    }

    #[test]
    fn sup_on_ball_examples() {
        let g = Grid::unit_square(0.25).unwrap();
        let q = ScalarField::sample(&g, FieldKind::Source, quarter_r2).unwrap();
        let s = q
            .sup_on_ball(&BallSpec::new([0.0, 0.0], 0.5))
            .unwrap();
        assert_abs_diff_eq!(s, 0.0625, epsilon = 1e-15);

        let c = ScalarField::constant(&g, FieldKind::Source, 3.25);
        assert_eq!(c.sup_on_ball(&BallSpec::new([0.3, -0.2], 0.4)).unwrap(), 3.25);

        let g1 = Grid::new(&[-1.0], &[1.0], 0.25).unwrap();
        let lin = ScalarField::sample(&g1, FieldKind::Source, |p| p[0]).unwrap();
        assert_eq!(lin.sup_on_ball(&BallSpec::new([0.0, 0.0], 1.0)).unwrap(), 1.0);
    }

    #[test]
    fn sup_on_ball_empty() {
        let g = Grid::unit_square(0.5).unwrap();
        let f = ScalarField::constant(&g, FieldKind::Source, 0.0);
        let err = f.sup_on_ball(&BallSpec::new([5.0, 5.0], 0.1)).unwrap_err();
        assert!(matches!(err, FieldError::EmptyBall { .. }));
    }

    #[test]
    fn intrinsic_norm_values() {
        let g = Grid::unit_square(0.5).unwrap();
        let zero = ScalarField::constant(&g, FieldKind::Solution, 0.0);
        let n = intrinsic_norm(&zero, &zero, 1e-6).unwrap();
        assert!(n.values().iter().all(|&v| v == 0.0));

        let one = ScalarField::constant(&g, FieldKind::Solution, 1.0);
        let eight = ScalarField::constant(&g, FieldKind::Solution, 8.0);
        let n = intrinsic_norm(&one, &eight, 1e-6).unwrap();
        for &v in n.values() {
            assert_abs_diff_eq!(v, 3.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn intrinsic_norm_flags_negativity() {
        let g = Grid::unit_square(0.5).unwrap();
        let u = ScalarField::constant(&g, FieldKind::Solution, 1.0);
        let v = ScalarField::constant(&g, FieldKind::Solution, -0.1);
        let err = intrinsic_norm(&u, &v, 1e-6).unwrap_err();
        assert!(matches!(err, FieldError::NegativityViolation { .. }));
    }

    #[test]
    fn csv_layout_outer_loop_over_y() {
        let g = Grid::new(&[0.0, 0.0], &[1.0, 1.0], 0.5).unwrap();
        let f = ScalarField::sample(&g, FieldKind::Derived, |p| p[0] + 10.0 * p[1]).unwrap();
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "x,y,value");
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first[0], "0");
        assert_eq!(first[1], "0");
        // Second row advances x, not y.
        let second: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(second[0], "0.5");
        assert_eq!(second[1], "0");
    }

    #[test]
    fn interpolation_matches_bilinear() {
        let g = Grid::unit_square(0.5).unwrap();
        let f = ScalarField::sample(&g, FieldKind::Source, |p| 2.0 * p[0] - p[1] + 0.5).unwrap();
        // Bilinear interpolation reproduces affine functions exactly.
        assert_abs_diff_eq!(f.interpolate([0.3, -0.7]), 2.0 * 0.3 + 0.7 + 0.5, epsilon = 1e-14);
    }
}
