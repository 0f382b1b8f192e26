//! End-to-end verification of the two quasi-isomorphism statements for the
//! pair `(L, tau_S^2 L)` in the `A_2` Milnor fibre.

mod criterion;
mod report;
mod theorem11;
mod theorem12;

pub use criterion::{criterion_bulk, criterion_twisted, CriterionVerdict, WeightedCount};
pub use report::{Check, VerificationReport, SCHEMA};
pub use theorem11::{run_theorem_1_1, twisted_floer, Theorem11Config};
pub use theorem12::{bulk_family, run_theorem_1_2, Theorem12Config, SUPPORTED_L};

use crate::ainfty::{cohomology, is_quasi_isomorphic, AInftyData, AInftyError, QuasiIsoConfig, QuasiIsoVerdict};
use crate::coeff::Ring;
use crate::deform::DeformError;
use crate::model::ModelError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("grading mismatch: |a| = {found}, expected {expected}")]
    GradingMismatch { expected: i64, found: i64 },
    #[error("ambient dimension l = {0} is not supported (use one of 4, 6, 8, 10, 12)")]
    UnsupportedL(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Deform(#[from] DeformError),
    #[error(transparent)]
    Category(#[from] AInftyError),
}

/// Quasi-isomorphism of the two objects `L0`, `L1` of `c`, by search in the
/// cohomology category.
pub fn ainfty_verdict<R: Ring>(c: &AInftyData<R>, cfg: &QuasiIsoConfig) -> Result<QuasiIsoVerdict<R>, PipelineError> {
    let coh = cohomology(c)?;
    let (x, y) = (c.object_index("L0")?, c.object_index("L1")?);
    Ok(is_quasi_isomorphic(&coh, x, y, cfg)?)
}

/// Human-readable form of a witness pair, as chains on generators.
pub fn describe_witness<R: Ring>(c: &AInftyData<R>, v: &QuasiIsoVerdict<R>) -> Result<String, PipelineError> {
    Ok(match v {
        QuasiIsoVerdict::Isomorphic { f, g, strategy } => {
            let coh = cohomology(c)?;
            let (x, y) = (c.object_index("L0")?, c.object_index("L1")?);
            let show = |ch: crate::ainfty::Chain<R>| {
                ch.iter().map(|(k, v)| format!("({v}) {}", c.generators()[*k].name)).collect::<Vec<_>>().join(" + ")
            };
            format!(
                "f = {}; g = {} [{strategy}]",
                show(coh.representative(x, y, f)),
                show(coh.representative(y, x, g))
            )
        }
        QuasiIsoVerdict::Refuted { note } => format!("refuted: {note}"),
        QuasiIsoVerdict::NotFound { candidates_tried } => format!("no witness after {candidates_tried} candidates"),
    })
}
