//! Shared result types for both reconstruction methods and the final
//! verification pass they have in common.

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::canonical::CanonicalizationRecord;
use crate::config::LiftConfig;
use crate::error::{Error, Result};
use crate::haar::{haar_state, rng_from_seed};
use crate::inductive::InductiveTrace;
use crate::linalg::{frobenius_norm, max_abs, projector, UnitVector};
use crate::symmetry::RaySymmetryOracle;

/// Whether the reconstructed operator acts linearly or antilinearly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Unitary,
    Antiunitary,
}

impl OperatorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OperatorKind::Unitary => "unitary",
            OperatorKind::Antiunitary => "antiunitary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Canonical,
    Inductive,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Canonical => "canonical",
            Method::Inductive => "inductive",
        }
    }
}

/// Per-method diagnostics attached to a lift.
#[derive(Debug, Clone)]
pub enum LiftRecord {
    Canonical(CanonicalizationRecord),
    Inductive(InductiveTrace),
}

/// A reconstructed Hilbert-space operator realizing a ray-space symmetry.
///
/// `w` is unitary; the realized map is ψ ↦ Wψ for the unitary kind and
/// ψ ↦ W·conj(ψ) for the antiunitary kind. W is unique only up to a global
/// phase (with conjugation pinned to the standard basis).
#[derive(Debug, Clone)]
pub struct LiftResult {
    pub kind: OperatorKind,
    pub w: Array2<Complex64>,
    /// Max Frobenius deviation between oracle output and the lift's
    /// prediction over the seeded verification sample.
    pub residual: f64,
    pub method: Method,
    pub record: LiftRecord,
    /// Total number of oracle invocations the reconstruction issued.
    pub oracle_calls: usize,
}

/// Apply the lifted operator to a state vector.
pub fn apply_lift(kind: OperatorKind, w: &Array2<Complex64>, psi: &UnitVector) -> UnitVector {
    let source = match kind {
        OperatorKind::Unitary => psi.clone(),
        OperatorKind::Antiunitary => psi.conjugated(),
    };
    UnitVector::normalized(w.dot(source.amplitudes())).expect("unitary image of a unit vector")
}

/// Max Frobenius deviation ‖Ω(ρ(ψ)) − ρ(ωψ)‖_F over `n_verify` seeded
/// Haar-random states; errors with `VerificationFailed` above `cfg.tol`.
pub fn verification_residual(
    oracle: &RaySymmetryOracle,
    kind: OperatorKind,
    w: &Array2<Complex64>,
    cfg: &LiftConfig,
) -> Result<f64> {
    let mut rng = rng_from_seed(cfg.seed);
    let mut residual = 0.0f64;
    for _ in 0..cfg.n_verify {
        let psi = haar_state(oracle.dim(), &mut rng);
        let actual = oracle.apply(&projector(&psi))?;
        let predicted = projector(&apply_lift(kind, w, &psi));
        residual = residual.max(frobenius_norm(&(&actual - predicted.matrix())));
    }
    if residual > cfg.tol {
        return Err(Error::VerificationFailed {
            residual,
            tol: cfg.tol,
        });
    }
    Ok(residual)
}

/// Fit the global phase between two lifts and report how far W₁†W₂ is from
/// e^{iα}·I, with α read off the first diagonal entry.
pub fn global_phase_agreement(w1: &Array2<Complex64>, w2: &Array2<Complex64>) -> (f64, f64) {
    let d = crate::linalg::adjoint(w1).dot(w2);
    let alpha = d[[0, 0]].arg();
    let phase = Complex64::from_polar(1.0, alpha);
    let deviation = max_abs(&(&d - &crate::linalg::identity(d.nrows()).mapv(|z| z * phase)));
    (alpha, deviation)
}

/// Diagnostics view of a lift, serialized with complex entries as [re, im]
/// and 1-based pair keys like "1,2".
#[derive(Debug, Clone, Serialize)]
pub struct LiftReport {
    pub method: &'static str,
    pub kind: &'static str,
    #[serde(rename = "W")]
    pub w: Vec<Vec<[f64; 2]>>,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_table: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_table: Option<BTreeMap<String, i8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauge_phases: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_det: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension_phases: Option<Vec<f64>>,
    pub oracle_calls: usize,
}

impl LiftResult {
    pub fn report(&self) -> LiftReport {
        let mut report = LiftReport {
            method: self.method.as_str(),
            kind: self.kind.as_str(),
            w: crate::jsonfmt::matrix_rows(&self.w),
            residual: self.residual,
            phi_table: None,
            eps_table: None,
            gauge_phases: None,
            base_det: None,
            extension_phases: None,
            oracle_calls: self.oracle_calls,
        };
        match &self.record {
            LiftRecord::Canonical(rec) => {
                let mut phi = BTreeMap::new();
                let mut eps = BTreeMap::new();
                for (&(j, k), &value) in &rec.phi_table {
                    phi.insert(format!("{},{}", j + 1, k + 1), value);
                }
                for (&(j, k), &value) in &rec.eps_table {
                    eps.insert(format!("{},{}", j + 1, k + 1), value);
                }
                report.phi_table = Some(phi);
                report.eps_table = Some(eps);
                report.gauge_phases = Some(rec.gauge_phases.clone());
            }
            LiftRecord::Inductive(trace) => {
                report.base_det = Some(trace.base.det_sign);
                report.extension_phases = Some(trace.extension_phases.clone());
            }
        }
        report
    }
}
