//! Error types shared across the crate.
//!
//! Every rejection carries the numeric evidence that triggered it (deviation,
//! purity, index pair, ...) so callers can emit structured reports.

use serde_json::{json, Value};
use thiserror::Error;

/// Secondary diagnosis attached to [`Error::IndeterminateSign`].
///
/// A measured quarter-turn shift that misses ±π/2 by less than 0.1 rad looks
/// like a noisy symmetry; a larger miss means the map is not acting on the
/// circle through any orthogonal transformation at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignDiagnosis {
    Noisy,
    Structural,
}

impl std::fmt::Display for SignDiagnosis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SignDiagnosis::Noisy => write!(f, "likely a noisy symmetry; re-probe or loosen the phase tolerance"),
            SignDiagnosis::Structural => write!(f, "structurally inconsistent with any orthogonal circle action"),
        }
    }
}

/// All index pairs/triples in error payloads are 1-based, matching report output.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("input vector has norm {norm}, expected 1 within tolerance")]
    NonUnitInput { norm: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not a pure projector: Tr(M^2) = {purity}")]
    ImpureInput { purity: f64 },

    #[error("matrix is not Hermitian (max |M - M^H| = {deviation})")]
    NotHermitian { deviation: f64 },

    #[error("matrix trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("component {index} has modulus {modulus}, too small to carry a phase")]
    VanishingComponent { index: usize, modulus: f64 },

    #[error("matrix is not unitary (max |U^H U - I| = {deviation})")]
    NotUnitary { deviation: f64 },

    #[error("invalid parameter: {reason}")]
    InvalidParameter { reason: String },

    #[error("images of basis rays are not orthonormal: |<{j};W|{k};W>| = {overlap}")]
    BasisImageNotOrthonormal { j: usize, k: usize, overlap: f64 },

    #[error("output left the probe circle on pair ({j},{k}): modulus deviation {deviation}")]
    NotOnCircle { j: usize, k: usize, deviation: f64 },

    #[error("phase shift {shift} on pair ({j},{k}) matches neither +pi/2 nor -pi/2: {diagnosis}")]
    IndeterminateSign {
        j: usize,
        k: usize,
        shift: f64,
        diagnosis: SignDiagnosis,
    },

    #[error("residual circle phase {residual} on pair ({j},{k}) after gauge fixing")]
    PhaseResidual { j: usize, k: usize, residual: f64 },

    #[error("circle orientation signs are inconsistent on triple ({j},{k},{l})")]
    InconsistentSigns { j: usize, k: usize, l: usize },

    #[error("lift verification failed: residual {residual} exceeds tolerance {tol}")]
    VerificationFailed { residual: f64, tol: f64 },

    #[error("sphere action is not orthogonal (deviation {deviation})")]
    NotOrthogonal { deviation: f64 },

    #[error("rotation matrix has determinant {det}, expected +1")]
    NotProperRotation { det: f64 },

    #[error("extension to dimension {dim} is inconsistent: deviation {deviation} on the dense probe")]
    PhaseInconsistent { dim: usize, deviation: f64 },

    #[error("invariance check failed: {detail}")]
    PropertyViolation { detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable name used in machine-readable error reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonUnitInput { .. } => "NonUnitInput",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ImpureInput { .. } => "ImpureInput",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::TraceNotOne { .. } => "TraceNotOne",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::VanishingComponent { .. } => "VanishingComponent",
            Error::NotUnitary { .. } => "NotUnitary",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::BasisImageNotOrthonormal { .. } => "BasisImageNotOrthonormal",
            Error::NotOnCircle { .. } => "NotOnCircle",
            Error::IndeterminateSign { .. } => "IndeterminateSign",
            Error::PhaseResidual { .. } => "PhaseResidual",
            Error::InconsistentSigns { .. } => "InconsistentSigns",
            Error::VerificationFailed { .. } => "VerificationFailed",
            Error::NotOrthogonal { .. } => "NotOrthogonal",
            Error::NotProperRotation { .. } => "NotProperRotation",
            Error::PhaseInconsistent { .. } => "PhaseInconsistent",
            Error::PropertyViolation { .. } => "PropertyViolation",
        }
    }

    /// Structured witness payload for error reports.
    pub fn witness(&self) -> Value {
        match self {
            Error::NonUnitInput { norm } => json!({ "norm": norm }),
            Error::DimensionMismatch { expected, got } => json!({ "expected": expected, "got": got }),
            Error::ImpureInput { purity } => json!({ "purity": purity }),
            Error::NotHermitian { deviation } => json!({ "deviation": deviation }),
            Error::TraceNotOne { trace } => json!({ "trace": trace }),
            Error::IndexOutOfRange { index, dim } => json!({ "index": index, "dim": dim }),
            Error::VanishingComponent { index, modulus } => json!({ "index": index, "modulus": modulus }),
            Error::NotUnitary { deviation } => json!({ "deviation": deviation }),
            Error::InvalidParameter { reason } => json!({ "reason": reason }),
            Error::BasisImageNotOrthonormal { j, k, overlap } => json!({ "pair": [j, k], "overlap": overlap }),
            Error::NotOnCircle { j, k, deviation } => json!({ "pair": [j, k], "deviation": deviation }),
            Error::IndeterminateSign { j, k, shift, .. } => json!({ "pair": [j, k], "shift": shift }),
            Error::PhaseResidual { j, k, residual } => json!({ "pair": [j, k], "residual": residual }),
            Error::InconsistentSigns { j, k, l } => json!({ "triple": [j, k, l] }),
            Error::VerificationFailed { residual, tol } => json!({ "residual": residual, "tol": tol }),
            Error::NotOrthogonal { deviation } => json!({ "deviation": deviation }),
            Error::NotProperRotation { det } => json!({ "det": det }),
            Error::PhaseInconsistent { dim, deviation } => json!({ "dim": dim, "deviation": deviation }),
            Error::PropertyViolation { detail } => json!({ "detail": detail }),
        }
    }
}
