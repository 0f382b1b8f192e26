//! Twisted and bulk deformations of structure tensors.

mod bulk;
mod exact;
mod fseries;
mod twist;

pub use bulk::{assemble_bulk, BulkEntry, BulkFamily};
pub use exact::{remove_exact_twist, solve_gauge, DiffEntry, ExactTwistRemoval, WeightedDifferential};
pub use fseries::{f_series, f_series_with, random_fseries_data, series_mul, FSeries, FSeriesData, Grading, InverseFormula};
pub use twist::{gauge_shift, twist, Curve, GaugePotential, WeightedTensor};

use crate::ainfty::AInftyError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeformError {
    #[error("base category fails the structure equations at arity {arity}, inputs {inputs:?}")]
    BaseNotAInfty { arity: usize, inputs: Vec<String> },
    #[error("weights are inconsistent in the equation at arity {arity}, inputs {inputs:?}: residual {residual:?}")]
    WeightInconsistency { arity: usize, inputs: Vec<String>, residual: Vec<(String, String)> },
    #[error("curve counts of entry {inputs:?} -> `{output}` sum to {found}, base coefficient is {expected}")]
    WeightMismatch { inputs: Vec<String>, output: String, expected: String, found: String },
    #[error("weights are not an exact discrepancy; certificate {certificate:?}")]
    NotExactDiscrepancy { certificate: Vec<(usize, String)> },
    #[error("degree ledger violated at arity {k}, q = {q}: {inputs:?} -> `{output}`")]
    DegreeLedgerViolation { k: usize, q: u32, inputs: Vec<String>, output: String },
    #[error("structure equation fails at q = {q}")]
    StructureEquationFailure { q: u32 },
    #[error("conjugation identity fails")]
    ConjugationFailure,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Category(#[from] AInftyError),
}
