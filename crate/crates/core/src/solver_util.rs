//! Shared helpers for the Dirichlet solvers.

use crate::field::{FieldKind, ScalarField};
use crate::grid::Grid;

/// Transfinite (Coons) interpolation of boundary values into the interior.
///
/// Reads only boundary nodes of `trace`; used as the default initial guess so
/// the first sweeps start from something harmonic-like rather than zero.
pub(crate) fn boundary_interpolation(grid: &Grid, trace: &ScalarField) -> ScalarField {
    let v = trace.values();
    if grid.ndim() == 1 {
        let n = grid.nx();
        let a = v[0];
        let b = v[n - 1];
        let vals = (0..n)
            .map(|i| {
                let s = i as f64 / (n - 1) as f64;
                a + s * (b - a)
            })
            .collect();
        return ScalarField::from_values(grid, FieldKind::Solution, vals);
    }
    let (nx, ny) = (grid.nx(), grid.ny());
    let c00 = v[grid.index(0, 0)];
    let c10 = v[grid.index(nx - 1, 0)];
    let c01 = v[grid.index(0, ny - 1)];
    let c11 = v[grid.index(nx - 1, ny - 1)];
    let mut vals = vec![0.0; grid.num_nodes()];
    for iy in 0..ny {
        let t = iy as f64 / (ny - 1) as f64;
        let left = v[grid.index(0, iy)];
        let right = v[grid.index(nx - 1, iy)];
        for ix in 0..nx {
            let s = ix as f64 / (nx - 1) as f64;
            let bottom = v[grid.index(ix, 0)];
            let top = v[grid.index(ix, ny - 1)];
            let blend = (1.0 - s) * left + s * right + (1.0 - t) * bottom + t * top
                - ((1.0 - s) * (1.0 - t) * c00
                    + s * (1.0 - t) * c10
                    + (1.0 - s) * t * c01
                    + s * t * c11);
            vals[grid.index(ix, iy)] = blend;
        }
    }
    ScalarField::from_values(grid, FieldKind::Solution, vals)
}

/// Overwrites boundary nodes of `field` with the boundary values of `trace`.
pub(crate) fn apply_boundary(field: &mut ScalarField, trace: &ScalarField) {
    let grid = field.grid().clone();
    let tv = trace.values().to_vec();
    let fv = field.values_mut();
    for i in grid.boundary_indices() {
        fv[i] = tv[i];
    }
}

/// Near-optimal SOR relaxation factor for the 5-point Laplacian on `grid`.
pub fn sor_omega_for(grid: &Grid) -> f64 {
    let mut extent: f64 = 0.0;
    for k in 0..grid.ndim() {
        extent = extent.max(grid.hi()[k] - grid.lo()[k]);
    }
    let ratio = std::f64::consts::PI * grid.spacing() / extent;
    2.0 / (1.0 + ratio.sin())
}
