//! Sections of the model Lefschetz fibration `pi(x) = sum x_i^2` with
//! boundary on the vanishing spheres, and their intersections with the
//! perturbed thimble.

mod sections;
mod solver;
mod thimble;

pub use sections::{
    base_point_sections, circle_point, ev1, pi_std, sample_sections, section_circles, section_value, tangent_dimension,
    Circle, SectionParam,
};
pub use solver::{
    closed_form_radius, exact_consistency, newton_orbits, section_solvers, sigma_min, solve_through_point,
    verify_jacobian, verify_regularity, ClosedFormSolver, ConstraintSystem, NewtonReport, NewtonSolver, SectionSolution,
    SectionSolver, SolverConfig,
};
pub use thimble::{
    degeneration_check, disjointness_gap, distance_to_q_std, thimble_defect, thimble_point, weight_dichotomy,
    DegenerationReport, Dichotomy, ThimbleEps,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("epsilon {0} is outside (0, 0.5]")]
    EpsOutOfRange(f64),
    #[error("Newton iteration found no admissible solution (seed {seed})")]
    NewtonDivergence { seed: u64 },
    #[error("dimension {0} is not even and at least 2")]
    OddDimension(usize),
    #[error("constraint Jacobian is singular: sigma_min = {sigma_min:e}")]
    SingularSolution { sigma_min: f64 },
    #[error("residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
    #[error("solvers disagree: `{a}` and `{b}` differ by {distance:e}")]
    Disagreement { a: String, b: String, distance: f64 },
    #[error("unknown solver: {0}")]
    UnknownSolver(String),
}

pub(crate) fn check_eps(eps: f64) -> Result<(), ModelError> {
    if eps > 0.0 && eps <= 0.5 {
        Ok(())
    } else {
        Err(ModelError::EpsOutOfRange(eps))
    }
}

pub(crate) fn check_dim(n: usize) -> Result<(), ModelError> {
    if n >= 2 && n % 2 == 0 {
        Ok(())
    } else {
        Err(ModelError::OddDimension(n))
    }
}
