//! Desk-scale finite-difference laboratory for the coupled
//! infinity-Laplacian / Laplacian obstacle system
//!
//! ```text
//! Δ∞ u <= f,  Δ v <= g   in the box,
//! Δ∞ u  = f   on {v > 0},
//! Δ v   = g   on {u > 0},
//! ```
//!
//! solved through the penalized system `Δ∞ u = f β_ε(v)`, `Δ v = g β_ε(u)`
//! with continuation in ε, plus the measurement tools used to check the
//! structure of the resulting free boundaries: coupling inclusions, growth
//! and non-degeneracy exponents, density, porosity, box-counting dimension,
//! and regular/singular blow-up classification. Closed-form solution pairs
//! with independently re-derived coefficients serve as oracles throughout.

pub mod analysis;
pub mod coupled;
pub mod error;
pub mod exact;
pub mod field;
pub mod free_boundary;
pub mod grid;
pub mod infinity;
pub mod laplace;
mod solver_util;

pub use error::{FieldError, GridError, OperatorError};
pub use field::{intrinsic_norm, intrinsic_norm_clamped, FieldKind, ScalarField, SymMatrix};
pub use grid::{BallSpec, Grid, Point};
pub use infinity::{infinity_residual, radial_coefficient, solve_infinity_poisson, InfinitySolveParams};
pub use laplace::{laplacian_residual, solve_obstacle_psor, solve_poisson, PsorParams, SolveOutcome};
pub use solver_util::sor_omega_for;
