//! Named tolerances and reconstruction configuration.
//!
//! Every invariant in the crate references one of these named values; no
//! comparison uses an ad-hoc magic number.

/// Numerical tolerances with their default values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// TOL_NORM: unit-norm deviation of state vectors and sphere points.
    pub norm: f64,
    /// TOL_HERM: Hermiticity and trace deviation of projectors.
    pub herm: f64,
    /// TOL_PURITY: deviation of Tr(M^2) from 1 and of rank-1 residuals.
    pub purity: f64,
    /// TOL_UNITARY: deviation of U^H U from the identity.
    pub unitary: f64,
    /// TOL_PHASE: circle-phase agreement used throughout reconstruction.
    pub phase: f64,
    /// TOL_ONB: orthonormality of basis-ray images.
    pub onb: f64,
    /// GAUGE_EPS: smallest modulus that may carry the gauge-fixing phase.
    ///
    /// A unit vector always has a component above this threshold as long as
    /// N * GAUGE_EPS^2 < 1, which holds for every dimension this crate
    /// supports; the gauge is therefore total on unit vectors.
    pub gauge_eps: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            norm: 1e-12,
            herm: 1e-10,
            purity: 1e-8,
            unitary: 1e-10,
            phase: 1e-8,
            onb: 1e-8,
            gauge_eps: 1e-7,
        }
    }
}

/// Configuration for a reconstruction run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftConfig {
    /// Acceptance threshold for the final verification residual.
    pub tol: f64,
    /// Number of seeded random rays used for final verification.
    pub n_verify: usize,
    /// PRNG seed; all sampling is ChaCha20-based and reproducible.
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for LiftConfig {
    fn default() -> Self {
        LiftConfig {
            tol: 1e-9,
            n_verify: 100,
            seed: 42,
            tolerances: Tolerances::default(),
        }
    }
}

impl LiftConfig {
    pub fn with_seed(seed: u64) -> Self {
        LiftConfig {
            seed,
            ..LiftConfig::default()
        }
    }
}
