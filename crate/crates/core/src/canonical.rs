//! Canonical-form reconstruction.
//!
//! The pipeline composes the black-box symmetry with unitaries it derives
//! from probe responses until the remaining action on ray space must be the
//! identity or complex conjugation, then reads the lift off the composed
//! corrections:
//!
//!   1. align the images of the basis rays back onto the basis,
//!   2. probe each two-level equator circle for its O(2) action (φ_jk, ε_jk),
//!   3. cancel the first-row phases φ_1k with a diagonal unitary,
//!   4. check that one all-real probe vector is fixed and that every circle
//!      phase has collapsed to zero,
//!   5. require one uniform orientation sign across all circles.
//!
//! A genuine symmetry survives every check; anything else is rejected with
//! the probe that exposed it. The probe budget is fixed: N alignment calls,
//! two calls per circle for each of the two extraction sweeps, one real-probe
//! call, and the verification sample.

use ndarray::Array2;
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use crate::config::{LiftConfig, Tolerances};
use crate::error::{Error, Result, SignDiagnosis};
use crate::haar::{real_state_first_nonzero, rng_from_seed};
use crate::lift::{
    verification_residual, LiftRecord, LiftResult, Method, OperatorKind,
};
use crate::linalg::{
    adjoint, circle_distance, latitude_state, normalize_angle, projector, relative_phase,
    transition_probability, LatitudeCoords, PureProjector, UnitVector, C_ZERO,
};
use crate::symmetry::{compose, conjugation_oracle, with_counter, RaySymmetryOracle};

/// Everything the canonicalization measured along the way.
#[derive(Debug, Clone)]
pub struct CanonicalizationRecord {
    /// Unitary mapping each basis-ray image back onto its basis vector.
    pub u_align: Array2<Complex64>,
    /// Circle phases φ_jk of the aligned map, keyed by zero-based (j, k).
    pub phi_table: BTreeMap<(usize, usize), f64>,
    /// Circle orientation signs ε_jk ∈ {+1, −1}.
    pub eps_table: BTreeMap<(usize, usize), i8>,
    /// Diagonal gauge phases φ_n (φ_1 = 0, φ_n = φ_1n).
    pub gauge_phases: Vec<f64>,
    /// Component phases of the image of the all-real probe vector.
    pub eta_phases: Vec<f64>,
    /// Max residual circle phase after gauge fixing.
    pub residual_phi: f64,
}

/// Compute the basis-ray images, assert they form an orthonormal set, and
/// return the aligning unitary together with the aligned oracle (which fixes
/// every basis ray).
pub fn align_basis(
    oracle: &RaySymmetryOracle,
    tols: &Tolerances,
) -> Result<(Array2<Complex64>, RaySymmetryOracle)> {
    let n = oracle.dim();
    let mut images: Vec<UnitVector> = Vec::with_capacity(n);
    for i in 0..n {
        let rho = projector(&UnitVector::basis(n, i)?);
        images.push(oracle.apply_ray(&rho, tols)?);
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let overlap = images[j].inner(&images[k]).norm();
            if overlap > tols.onb {
                return Err(Error::BasisImageNotOrthonormal {
                    j: j + 1,
                    k: k + 1,
                    overlap,
                });
            }
        }
    }
    // row n of the aligner is ⟨n;Ω|, so it sends each image back to |n⟩
    let mut u_align = Array2::from_elem((n, n), C_ZERO);
    for (row, image) in images.iter().enumerate() {
        for col in 0..n {
            u_align[[row, col]] = image.amplitudes()[col].conj();
        }
    }
    // orthonormality was checked above; skip the unitarity gate so marginal
    // ONB deviations do not get reclassified as NotUnitary
    let aligned = compose(&conjugation_oracle(u_align.clone(), *tols), oracle, tols)?;
    Ok((u_align, aligned))
}

/// Probe one latitude circle of an aligned oracle and extract its O(2)
/// action: the phase offset φ_jk and the orientation sign ε_jk.
///
/// Two probes at φ = 0 and φ = π/2 pin the group element: the offset is the
/// image phase of the first probe and the sign is read from whether the
/// quarter turn is preserved or reversed.
pub fn extract_circle_params_at(
    aligned: &RaySymmetryOracle,
    j: usize,
    k: usize,
    theta0: f64,
    tols: &Tolerances,
) -> Result<(f64, i8)> {
    let dim = aligned.dim();
    let expected_j = (theta0 / 2.0).cos();
    let expected_k = (theta0 / 2.0).sin();

    let mut output_phase = |phi: f64| -> Result<f64> {
        let probe = latitude_state(&LatitudeCoords::new(j, k, theta0, phi)?, dim)?;
        let out = aligned.apply_ray(&projector(&probe), tols)?;
        let amp = out.amplitudes();
        let deviation = (amp[j].norm() - expected_j)
            .abs()
            .max((amp[k].norm() - expected_k).abs());
        if deviation > tols.phase {
            return Err(Error::NotOnCircle {
                j: j + 1,
                k: k + 1,
                deviation,
            });
        }
        relative_phase(&out, j, k, tols.gauge_eps)
    };

    let phi_at_zero = output_phase(0.0)?;
    let phi_at_quarter = output_phase(FRAC_PI_2)?;

    let shift = normalize_angle(phi_at_quarter - phi_at_zero);
    let to_plus = circle_distance(shift, FRAC_PI_2);
    let to_minus = circle_distance(shift, -FRAC_PI_2);
    let eps = if to_plus <= tols.phase {
        1
    } else if to_minus <= tols.phase {
        -1
    } else {
        let diagnosis = if to_plus.min(to_minus) < 0.1 {
            SignDiagnosis::Noisy
        } else {
            SignDiagnosis::Structural
        };
        return Err(Error::IndeterminateSign {
            j: j + 1,
            k: k + 1,
            shift,
            diagnosis,
        });
    };
    Ok((normalize_angle(phi_at_zero), eps))
}

/// Circle extraction at the equator θ₀ = π/2, where both component moduli
/// are maximal and the phase readout is best conditioned.
pub fn extract_circle_params(
    aligned: &RaySymmetryOracle,
    j: usize,
    k: usize,
    tols: &Tolerances,
) -> Result<(f64, i8)> {
    extract_circle_params_at(aligned, j, k, FRAC_PI_2, tols)
}

/// Cancel the first-row circle phases with the diagonal unitary
/// diag(e^{−iφ_n}), φ_1 = 0, φ_n = φ_1n. Returns the gauge phases, the
/// diagonal unitary and the phase-fixed oracle; after this step a genuine
/// symmetry has every circle phase equal to zero.
pub fn fix_diagonal_phases(
    aligned: &RaySymmetryOracle,
    phi_first_row: &[f64],
    tols: &Tolerances,
) -> Result<(Vec<f64>, Array2<Complex64>, RaySymmetryOracle)> {
    let n = aligned.dim();
    if phi_first_row.len() != n - 1 {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            got: phi_first_row.len(),
        });
    }
    let mut gauge_phases = Vec::with_capacity(n);
    gauge_phases.push(0.0);
    gauge_phases.extend_from_slice(phi_first_row);
    let mut u_prime = Array2::from_elem((n, n), C_ZERO);
    for i in 0..n {
        u_prime[[i, i]] = Complex64::from_polar(1.0, -gauge_phases[i]);
    }
    let fixed = compose(&conjugation_oracle(u_prime.clone(), *tols), aligned, tols)?;
    Ok((gauge_phases, u_prime, fixed))
}

/// Outcome of the real-probe stage.
#[derive(Debug, Clone)]
pub struct RealProbeOutcome {
    pub eta_phases: Vec<f64>,
    pub residual_phi: f64,
    /// Circle signs from the confirmation sweep.
    pub eps_table: BTreeMap<(usize, usize), i8>,
}

/// Apply the phase-fixed oracle to the all-real probe (1,…,1)/√N and
/// confirm that every circle phase has collapsed to zero.
///
/// Reads the component phases η_n of the probe image, re-extracts every
/// circle, and rejects with the worst-offending pair if any residual phase
/// survives; finally requires that the probe ray itself is fixed.
pub fn verify_real_probe(
    fixed: &RaySymmetryOracle,
    tols: &Tolerances,
) -> Result<RealProbeOutcome> {
    let n = fixed.dim();
    let scale = 1.0 / (n as f64).sqrt();
    let probe = UnitVector::normalized(ndarray::Array1::from_elem(
        n,
        Complex64::new(scale, 0.0),
    ))?;
    let rho = projector(&probe);
    let image = fixed.apply_ray(&rho, tols)?;
    let eta_phases: Vec<f64> = image.amplitudes().iter().map(|z| z.arg()).collect();

    // one confirmation sweep over every circle
    let mut residual_phi = 0.0f64;
    let mut worst_pair = (0usize, 1usize);
    let mut eps_table = BTreeMap::new();
    for j in 0..n {
        for k in (j + 1)..n {
            let (phi, eps) = extract_circle_params(fixed, j, k, tols)?;
            eps_table.insert((j, k), eps);
            let residue = circle_distance(phi, 0.0);
            if residue > residual_phi {
                residual_phi = residue;
                worst_pair = (j, k);
            }
        }
    }
    if residual_phi > tols.phase {
        return Err(Error::PhaseResidual {
            j: worst_pair.0 + 1,
            k: worst_pair.1 + 1,
            residual: residual_phi,
        });
    }
    if let Some((idx, &eta)) = eta_phases
        .iter()
        .enumerate()
        .max_by(|a, b| circle_distance(*a.1, 0.0).total_cmp(&circle_distance(*b.1, 0.0)))
    {
        let dev = circle_distance(eta, 0.0);
        if dev > tols.phase {
            // η_n − η_1 is the surviving phase on the (1, n) circle
            return Err(Error::PhaseResidual {
                j: 1,
                k: idx + 1,
                residual: dev,
            });
        }
    }
    let fidelity = transition_probability(
        &PureProjector::try_from_matrix(fixed.apply(&rho)?, tols)?,
        &rho,
        tols,
    )?;
    if (1.0 - fidelity).abs() > tols.purity {
        return Err(Error::PropertyViolation {
            detail: format!(
                "all-real probe is not fixed: fidelity deviation {}",
                (1.0 - fidelity).abs()
            ),
        });
    }
    Ok(RealProbeOutcome {
        eta_phases,
        residual_phi,
        eps_table,
    })
}

/// Reduce the circle-sign table to the single global orientation.
///
/// Consistency forces the sign to be uniform; a mixed table is rejected with
/// a triple (j,k,l) on which the product of pair amplitudes could not stay
/// real and nonnegative.
pub fn uniform_sign(eps_table: &BTreeMap<(usize, usize), i8>) -> Result<i8> {
    let mut signs = eps_table.iter();
    let (&first_pair, &first) = signs.next().ok_or_else(|| Error::InvalidParameter {
        reason: "empty sign table".into(),
    })?;
    if let Some((&(j, k), _)) = eps_table.iter().find(|(_, &eps)| eps != first) {
        // locate a witness triple containing both orientations
        let (a, b) = first_pair;
        let mut triple = [a, b, j, k].to_vec();
        triple.sort_unstable();
        triple.dedup();
        let (x, y, z) = match triple.len() {
            3 => (triple[0], triple[1], triple[2]),
            _ => (a.min(j), k.min(b.max(j)), k.max(b)),
        };
        return Err(Error::InconsistentSigns {
            j: x + 1,
            k: y + 1,
            l: z + 1,
        });
    }
    Ok(first)
}

/// Run the full canonicalization pipeline and return the lift.
///
/// Issues exactly N + 4·C(N,2) + 1 + n_verify oracle calls: alignment, two
/// circle sweeps (extraction and confirmation), the real probe, and the
/// verification sample.
pub fn reconstruct_canonical(
    oracle: &RaySymmetryOracle,
    cfg: &LiftConfig,
) -> Result<LiftResult> {
    let n = oracle.dim();
    if n < 2 {
        return Err(Error::InvalidParameter {
            reason: format!("reconstruction needs dimension >= 2, got {n}"),
        });
    }
    let tols = &cfg.tolerances;
    let (counted, counter) = with_counter(oracle);

    let (u_align, aligned) = align_basis(&counted, tols)?;

    let mut phi_table = BTreeMap::new();
    let mut eps_table = BTreeMap::new();
    for j in 0..n {
        for k in (j + 1)..n {
            let (phi, eps) = extract_circle_params(&aligned, j, k, tols)?;
            phi_table.insert((j, k), phi);
            eps_table.insert((j, k), eps);
        }
    }

    let phi_first_row: Vec<f64> = (1..n).map(|k| phi_table[&(0, k)]).collect();
    let (gauge_phases, u_prime, fixed) = fix_diagonal_phases(&aligned, &phi_first_row, tols)?;

    let probe_outcome = verify_real_probe(&fixed, tols)?;
    let global_eps = uniform_sign(&eps_table)?;
    debug_assert_eq!(uniform_sign(&probe_outcome.eps_table)?, global_eps);

    let kind = if global_eps > 0 {
        OperatorKind::Unitary
    } else {
        OperatorKind::Antiunitary
    };
    let w = adjoint(&u_align).dot(&adjoint(&u_prime));
    let unitary_dev = crate::linalg::unitarity_deviation(&w);
    if unitary_dev > tols.unitary {
        return Err(Error::NotUnitary { deviation: unitary_dev });
    }

    let residual = verification_residual(&counted, kind, &w, cfg)?;

    Ok(LiftResult {
        kind,
        w,
        residual,
        method: Method::Canonical,
        record: LiftRecord::Canonical(CanonicalizationRecord {
            u_align,
            phi_table,
            eps_table,
            gauge_phases,
            eta_phases: probe_outcome.eta_phases,
            residual_phi: probe_outcome.residual_phi,
        }),
        oracle_calls: counter.load(std::sync::atomic::Ordering::Relaxed),
    })
}

/// Oracle-call budget of [`reconstruct_canonical`] for dimension `n`.
pub fn canonical_call_budget(n: usize, n_verify: usize) -> usize {
    let pairs = n * (n - 1) / 2;
    n + 2 * pairs * 2 + 1 + n_verify
}

/// Report of the extended invariance checks on an aligned oracle.
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    /// (θ₀, φ_jk, ε_jk) for each sampled latitude.
    pub per_theta: Vec<(f64, f64, i8)>,
    /// Largest circle-phase spread across the latitude samples.
    pub max_phi_spread: f64,
    /// Number of random all-real rays tested for invariance.
    pub real_vectors_checked: usize,
    /// Worst fidelity deviation of a real ray under the phase-fixed map.
    pub max_fix_deviation: f64,
}

pub const DEFAULT_THETA_SAMPLES: [f64; 5] = [
    std::f64::consts::PI / 6.0,
    std::f64::consts::PI / 3.0,
    FRAC_PI_2,
    2.0 * std::f64::consts::PI / 3.0,
    5.0 * std::f64::consts::PI / 6.0,
];

/// Check the two invariances an aligned symmetry must satisfy beyond the
/// pipeline's own probes: the circle action (φ_jk, ε_jk) is the same on
/// every latitude, and after phase fixing every all-real ray with a nonzero
/// leading component is left fixed.
pub fn verify_extended_invariants(
    aligned: &RaySymmetryOracle,
    j: usize,
    k: usize,
    theta_samples: &[f64],
    cfg: &LiftConfig,
) -> Result<InvarianceReport> {
    let tols = &cfg.tolerances;
    let n = aligned.dim();

    let mut per_theta = Vec::with_capacity(theta_samples.len());
    for &theta in theta_samples {
        let (phi, eps) = extract_circle_params_at(aligned, j, k, theta, tols)?;
        per_theta.push((theta, phi, eps));
    }
    let (_, phi_ref, eps_ref) = per_theta[0];
    let mut max_phi_spread = 0.0f64;
    for &(theta, phi, eps) in &per_theta {
        if eps != eps_ref {
            return Err(Error::PropertyViolation {
                detail: format!("circle sign flipped at theta0 = {theta}"),
            });
        }
        let spread = circle_distance(phi, phi_ref);
        max_phi_spread = max_phi_spread.max(spread);
        if spread > tols.phase {
            return Err(Error::PropertyViolation {
                detail: format!("circle phase drifted by {spread} at theta0 = {theta}"),
            });
        }
    }

    let mut phi_first_row = Vec::with_capacity(n - 1);
    for m in 1..n {
        let (phi, _) = extract_circle_params(aligned, 0, m, tols)?;
        phi_first_row.push(phi);
    }
    let (_, _, fixed) = fix_diagonal_phases(aligned, &phi_first_row, tols)?;

    let mut rng = rng_from_seed(cfg.seed);
    let checked = 20;
    let mut max_fix_deviation = 0.0f64;
    for idx in 0..checked {
        let real_ray = real_state_first_nonzero(n, &mut rng);
        let rho = projector(&real_ray);
        let out = PureProjector::try_from_matrix(fixed.apply(&rho)?, tols)?;
        let deviation = (1.0 - transition_probability(&out, &rho, tols)?).abs();
        max_fix_deviation = max_fix_deviation.max(deviation);
        if deviation > tols.purity {
            return Err(Error::PropertyViolation {
                detail: format!("real ray {idx} moved: fidelity deviation {deviation}"),
            });
        }
    }

    Ok(InvarianceReport {
        per_theta,
        max_phi_spread,
        real_vectors_checked: checked,
        max_fix_deviation,
    })
}
