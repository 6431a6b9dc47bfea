//! Discrete Laplacian, a red-black SOR Poisson solver, and a projected-SOR
//! solver for the classical obstacle problem with zero obstacle.

use crate::error::OperatorError;
use crate::field::{FieldKind, ScalarField};
use crate::solver_util::{apply_boundary, boundary_interpolation};

/// Parameters for the SOR and projected-SOR sweeps.
#[derive(Debug, Clone, Copy)]
pub struct PsorParams {
    /// Relaxation factor, must lie in (0, 2).
    pub omega: f64,
    pub max_iters: usize,
    /// Sup-norm tolerance: equation residual for [`solve_poisson`],
    /// complementarity residual for [`solve_obstacle_psor`].
    pub residual_tol: f64,
}

impl Default for PsorParams {
    fn default() -> Self {
        PsorParams {
            omega: 1.5,
            max_iters: 50_000,
            residual_tol: 1e-8,
        }
    }
}

impl PsorParams {
    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = omega;
        self
    }

    fn validate(&self) -> Result<(), OperatorError> {
        if !(self.omega > 0.0 && self.omega < 2.0) {
            return Err(OperatorError::BadParams(format!(
                "omega must be in (0,2), got {}",
                self.omega
            )));
        }
        if !(self.residual_tol > 0.0) {
            return Err(OperatorError::BadParams("residual_tol must be positive".into()));
        }
        Ok(())
    }
}

/// Result of an iterative solve. Non-convergence is a diagnostic, not an
/// error: the field is returned either way along with the final residual.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub field: ScalarField,
    pub iterations: usize,
    pub residual_sup: f64,
    pub converged: bool,
}

/// Interior residual `Δ_h field - source` (5-point in 2D, 3-point in 1D);
/// zero on boundary nodes.
pub fn laplacian_residual(
    field: &ScalarField,
    source: &ScalarField,
) -> Result<ScalarField, OperatorError> {
    if field.grid() != source.grid() {
        return Err(OperatorError::GridMismatch);
    }
    let grid = field.grid().clone();
    let h2 = grid.spacing() * grid.spacing();
    let v = field.values();
    let mut out = vec![0.0; grid.num_nodes()];
    if grid.ndim() == 1 {
        for i in grid.interior_indices() {
            out[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2 - source.at(i);
        }
    } else {
        let nx = grid.nx();
        for i in grid.interior_indices() {
            let lap = (v[i + 1] + v[i - 1] + v[i + nx] + v[i - nx] - 4.0 * v[i]) / h2;
            out[i] = lap - source.at(i);
        }
    }
    Ok(ScalarField::from_values(&grid, FieldKind::Residual, out))
}

fn interior_residual_sup(v: &[f64], source: &ScalarField, nx: usize, ny: usize, h2: f64, one_d: bool) -> f64 {
    let mut sup: f64 = 0.0;
    if one_d {
        for i in 1..nx - 1 {
            let r = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2 - source.at(i);
            sup = sup.max(r.abs());
        }
        return sup;
    }
    for iy in 1..ny - 1 {
        for ix in 1..nx - 1 {
            let i = iy * nx + ix;
            let lap = (v[i + 1] + v[i - 1] + v[i + nx] + v[i - nx] - 4.0 * v[i]) / h2;
            sup = sup.max((lap - source.at(i)).abs());
        }
    }
    sup
}

/// Dirichlet Poisson solve `Δ_h v = source`, boundary matched exactly.
///
/// Red-black SOR: within one sweep every red node reads only black values and
/// vice versa, so the sweep order is deterministic.
pub fn solve_poisson(
    source: &ScalarField,
    boundary: &ScalarField,
    params: &PsorParams,
) -> Result<SolveOutcome, OperatorError> {
    if source.grid() != boundary.grid() {
        return Err(OperatorError::GridMismatch);
    }
    params.validate()?;
    let grid = source.grid().clone();
    let h2 = grid.spacing() * grid.spacing();
    let one_d = grid.ndim() == 1;
    let (nx, ny) = (grid.nx(), grid.ny());

    let mut field = boundary_interpolation(&grid, boundary);
    apply_boundary(&mut field, boundary);
    let v = field.values_mut();
    let omega = params.omega;

    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    while iterations < params.max_iters {
        for color in 0..2usize {
            if one_d {
                for i in 1..nx - 1 {
                    if i % 2 != color {
                        continue;
                    }
                    let gs = 0.5 * (v[i + 1] + v[i - 1] - h2 * source.at(i));
                    v[i] += omega * (gs - v[i]);
                }
            } else {
                for iy in 1..ny - 1 {
                    let row = iy * nx;
                    let start = 1 + (iy + 1 + color) % 2;
                    let mut ix = start;
                    while ix < nx - 1 {
                        let i = row + ix;
                        let gs = 0.25
                            * (v[i + 1] + v[i - 1] + v[i + nx] + v[i - nx] - h2 * source.at(i));
                        v[i] += omega * (gs - v[i]);
                        ix += 2;
                    }
                }
            }
        }
        iterations += 1;
        residual = interior_residual_sup(v, source, nx, ny, h2, one_d);
        if residual <= params.residual_tol {
            break;
        }
    }
    let converged = residual <= params.residual_tol;
    Ok(SolveOutcome {
        field,
        iterations,
        residual_sup: residual,
        converged,
    })
}

/// Classical zero-obstacle problem for `v`:
/// `v >= 0`, `Δ_h v <= g`, and `Δ_h v = g` wherever `v > 0`.
///
/// Projected SOR in natural lexicographic order: a Gauss-Seidel step followed
/// by projection `v <- max(v, 0)`. Stops when the complementarity residual
/// `min(v, g - Δ_h v)` is within tolerance of zero and `g - Δ_h v >= -tol`.
pub fn solve_obstacle_psor(
    source: &ScalarField,
    boundary: &ScalarField,
    params: &PsorParams,
) -> Result<SolveOutcome, OperatorError> {
    if source.grid() != boundary.grid() {
        return Err(OperatorError::GridMismatch);
    }
    params.validate()?;
    let grid = source.grid().clone();
    for i in grid.boundary_indices() {
        let value = boundary.at(i);
        if value < 0.0 {
            return Err(OperatorError::NegativeBoundary { index: i, value });
        }
    }
    let h2 = grid.spacing() * grid.spacing();
    let one_d = grid.ndim() == 1;
    let (nx, ny) = (grid.nx(), grid.ny());

    let mut field = boundary_interpolation(&grid, boundary);
    for val in field.values_mut().iter_mut() {
        *val = val.max(0.0);
    }
    apply_boundary(&mut field, boundary);
    let v = field.values_mut();
    let omega = params.omega;

    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    while iterations < params.max_iters {
        if one_d {
            for i in 1..nx - 1 {
                let gs = 0.5 * (v[i + 1] + v[i - 1] - h2 * source.at(i));
                v[i] = (v[i] + omega * (gs - v[i])).max(0.0);
            }
        } else {
            for iy in 1..ny - 1 {
                for ix in 1..nx - 1 {
                    let i = iy * nx + ix;
                    let gs =
                        0.25 * (v[i + 1] + v[i - 1] + v[i + nx] + v[i - nx] - h2 * source.at(i));
                    v[i] = (v[i] + omega * (gs - v[i])).max(0.0);
                }
            }
        }
        iterations += 1;
        residual = complementarity_residual_sup(v, source, nx, ny, h2, one_d);
        if residual <= params.residual_tol {
            break;
        }
    }
    let converged = residual <= params.residual_tol;
    Ok(SolveOutcome {
        field,
        iterations,
        residual_sup: residual,
        converged,
    })
}

/// Sup of `max((Δ_h v - g)_+, |min(v, g - Δ_h v)|)` over interior nodes.
fn complementarity_residual_sup(
    v: &[f64],
    source: &ScalarField,
    nx: usize,
    ny: usize,
    h2: f64,
    one_d: bool,
) -> f64 {
    let mut sup: f64 = 0.0;
    let mut visit = |i: usize, lap: f64| {
        let slack = source.at(i) - lap;
        sup = sup.max((-slack).max(0.0));
        sup = sup.max(v[i].min(slack).abs());
    };
    if one_d {
        for i in 1..nx - 1 {
            visit(i, (v[i + 1] - 2.0 * v[i] + v[i - 1]) / h2);
        }
    } else {
        for iy in 1..ny - 1 {
            for ix in 1..nx - 1 {
                let i = iy * nx + ix;
                visit(i, (v[i + 1] + v[i - 1] + v[i + nx] + v[i - nx] - 4.0 * v[i]) / h2);
            }
        }
    }
    sup
}
