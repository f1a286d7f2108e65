//! Complex vectors, rays, pure projectors and the two-level sphere.
//!
//! A ray is an equivalence class of unit vectors differing by a global phase.
//! Rays are represented by their rank-1 projectors |ψ⟩⟨ψ|; the inverse map
//! picks a canonical representative by making the first component of modulus
//! above `GAUGE_EPS` real and strictly positive.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::config::Tolerances;
use crate::error::{Error, Result};

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const C_I: Complex64 = Complex64::new(0.0, 1.0);

// ---------------------------------------------------------------------------
// small matrix helpers
// ---------------------------------------------------------------------------

/// Conjugate transpose.
pub fn adjoint(m: &Array2<Complex64>) -> Array2<Complex64> {
    m.t().mapv(|z| z.conj())
}

/// Largest entry modulus, the max norm used by all matrix tolerances.
pub fn max_abs(m: &Array2<Complex64>) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub fn frobenius_norm(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn identity(dim: usize) -> Array2<Complex64> {
    Array2::eye(dim)
}

/// max |U^H U - I|; zero for exactly unitary matrices.
pub fn unitarity_deviation(u: &Array2<Complex64>) -> f64 {
    let gram = adjoint(u).dot(u);
    max_abs(&(&gram - &identity(u.nrows())))
}

pub fn require_unitary(u: &Array2<Complex64>, tol: f64) -> Result<()> {
    if u.nrows() != u.ncols() {
        return Err(Error::DimensionMismatch {
            expected: u.nrows(),
            got: u.ncols(),
        });
    }
    let dev = unitarity_deviation(u);
    if dev > tol {
        return Err(Error::NotUnitary { deviation: dev });
    }
    Ok(())
}

/// Map an angle into [0, 2π).
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r == TAU {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle, in [0, π].
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

pub fn pauli_x() -> Array2<Complex64> {
    ndarray::array![[C_ZERO, C_ONE], [C_ONE, C_ZERO]]
}

pub fn pauli_y() -> Array2<Complex64> {
    ndarray::array![[C_ZERO, -C_I], [C_I, C_ZERO]]
}

pub fn pauli_z() -> Array2<Complex64> {
    ndarray::array![[C_ONE, C_ZERO], [C_ZERO, -C_ONE]]
}

// ---------------------------------------------------------------------------
// UnitVector
// ---------------------------------------------------------------------------

/// A unit-norm complex vector; one representative of a ray.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    data: Array1<Complex64>,
}

impl UnitVector {
    /// Validates Σ|c_n|² = 1 within `TOL_NORM`.
    pub fn new(data: Array1<Complex64>, tols: &Tolerances) -> Result<Self> {
        let norm = data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tols.norm {
            return Err(Error::NonUnitInput { norm });
        }
        Ok(UnitVector { data })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(data: Array1<Complex64>) -> Result<Self> {
        let norm = data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidParameter {
                reason: "cannot normalize the zero vector".into(),
            });
        }
        Ok(UnitVector {
            data: data.mapv(|z| z / norm),
        })
    }

    /// Computational basis state |n⟩ (zero-based index).
    pub fn basis(dim: usize, n: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::IndexOutOfRange { index: n + 1, dim });
        }
        let mut data = Array1::from_elem(dim, C_ZERO);
        data[n] = C_ONE;
        Ok(UnitVector { data })
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.data
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &UnitVector) -> Complex64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scaled_by_phase(&self, phase: f64) -> UnitVector {
        let factor = Complex64::from_polar(1.0, phase);
        UnitVector {
            data: self.data.mapv(|z| z * factor),
        }
    }

    pub fn conjugated(&self) -> UnitVector {
        UnitVector {
            data: self.data.mapv(|z| z.conj()),
        }
    }

    /// Canonical gauge: multiply by a global phase so that the first
    /// component with modulus above `gauge_eps` is real and strictly
    /// positive. Idempotent bit-for-bit: an already-fixed vector is
    /// returned unchanged.
    pub fn fix_gauge(&self, gauge_eps: f64) -> UnitVector {
        let anchor = self
            .data
            .iter()
            .position(|z| z.norm() > gauge_eps)
            // cannot happen for unit vectors while N * gauge_eps^2 < 1
            .expect("unit vector has no component above the gauge threshold");
        let c = self.data[anchor];
        if c.im == 0.0 && c.re > 0.0 {
            return self.clone();
        }
        let modulus = c.norm();
        let phase = c.conj() / modulus;
        let mut data = self.data.mapv(|z| z * phase);
        // the anchor is exactly |c| by construction; write it so the
        // shortcut above fires on repeated fixing
        data[anchor] = Complex64::new(modulus, 0.0);
        UnitVector { data }
    }
}

// ---------------------------------------------------------------------------
// PureProjector
// ---------------------------------------------------------------------------

/// N×N Hermitian, trace-1, rank-1 matrix: the projector |ψ⟩⟨ψ| of a ray.
#[derive(Debug, Clone, PartialEq)]
pub struct PureProjector {
    matrix: Array2<Complex64>,
}

impl PureProjector {
    /// Validates Hermiticity and trace within `TOL_HERM` and purity
    /// Tr(M²) = 1 within `TOL_PURITY`.
    pub fn try_from_matrix(matrix: Array2<Complex64>, tols: &Tolerances) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrix.ncols(),
            });
        }
        let mut herm_dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                herm_dev = herm_dev.max((matrix[[i, j]] - matrix[[j, i]].conj()).norm());
            }
        }
        if herm_dev > tols.herm {
            return Err(Error::NotHermitian { deviation: herm_dev });
        }
        let trace: Complex64 = (0..n).map(|i| matrix[[i, i]]).sum();
        if (trace.re - 1.0).abs() > tols.herm || trace.im.abs() > tols.herm {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        // Tr(M²) = Σ|m_ij|² for Hermitian M
        let purity: f64 = matrix.iter().map(|z| z.norm_sqr()).sum();
        if (purity - 1.0).abs() > tols.purity {
            return Err(Error::ImpureInput { purity });
        }
        Ok(PureProjector { matrix })
    }

    /// For constructions that preserve the invariants exactly (outer
    /// products, block embeddings, entrywise conjugation).
    pub(crate) fn from_matrix_unchecked(matrix: Array2<Complex64>) -> Self {
        PureProjector { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<Complex64> {
        self.matrix
    }

    /// Tr(M²); exactly 1 for a pure state.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Entrywise complex conjugate; invariants are preserved exactly.
    pub fn conjugated(&self) -> PureProjector {
        PureProjector {
            matrix: self.matrix.mapv(|z| z.conj()),
        }
    }

    /// Embed as the leading block of a larger space, padding with zeros.
    pub fn embedded(&self, dim: usize) -> Result<PureProjector> {
        let n = self.dim();
        if dim < n {
            return Err(Error::DimensionMismatch { expected: n, got: dim });
        }
        let mut out = Array2::from_elem((dim, dim), C_ZERO);
        out.slice_mut(ndarray::s![..n, ..n]).assign(&self.matrix);
        Ok(PureProjector { matrix: out })
    }
}

// ---------------------------------------------------------------------------
// ray-space operations
// ---------------------------------------------------------------------------

/// The projection |ψ⟩ ↦ |ψ⟩⟨ψ|; independent of the global phase of ψ.
pub fn projector(psi: &UnitVector) -> PureProjector {
    let n = psi.dim();
    let a = psi.amplitudes();
    let mut m = Array2::from_elem((n, n), C_ZERO);
    for i in 0..n {
        for j in 0..n {
            m[[i, j]] = a[i] * a[j].conj();
        }
    }
    PureProjector::from_matrix_unchecked(m)
}

/// Tr(ρ₁ρ₂) = |⟨ψ₁|ψ₂⟩|², the transition probability between two rays.
pub fn transition_probability(
    rho1: &PureProjector,
    rho2: &PureProjector,
    tols: &Tolerances,
) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho1.dim(),
            got: rho2.dim(),
        });
    }
    let tr = trace_product(rho1.matrix(), rho2.matrix());
    if tr.im.abs() > tols.herm {
        return Err(Error::NotHermitian { deviation: tr.im.abs() });
    }
    Ok(tr.re.clamp(0.0, 1.0))
}

/// Tr(A·B) without forming the product.
pub fn trace_product(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Complex64 {
    let n = a.nrows();
    let mut tr = C_ZERO;
    for i in 0..n {
        for j in 0..n {
            tr += a[[i, j]] * b[[j, i]];
        }
    }
    tr
}

/// Inverse of [`projector`] with the canonical gauge.
///
/// Factors the rank-1 input through its column of maximal norm (O(N²), no
/// eigensolve) and asserts the factorization residual; the error carries
/// the measured purity when the input is secretly mixed.
pub fn ray_from_projector(rho: &PureProjector, tols: &Tolerances) -> Result<UnitVector> {
    let m = rho.matrix();
    let n = rho.dim();
    let mut best = 0usize;
    let mut best_sq = -1.0f64;
    for j in 0..n {
        let col_sq: f64 = (0..n).map(|i| m[[i, j]].norm_sqr()).sum();
        if col_sq > best_sq {
            best_sq = col_sq;
            best = j;
        }
    }
    if best_sq <= 0.0 {
        return Err(Error::ImpureInput { purity: rho.purity() });
    }
    let norm = best_sq.sqrt();
    let psi = Array1::from_iter((0..n).map(|i| m[[i, best]] / norm));
    // residual ||ρ - ψψ^H||_max within TOL_PURITY
    let mut residual = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            residual = residual.max((m[[i, j]] - psi[i] * psi[j].conj()).norm());
        }
    }
    if residual > tols.purity {
        return Err(Error::ImpureInput { purity: rho.purity() });
    }
    Ok(UnitVector { data: psi }.fix_gauge(tols.gauge_eps))
}

/// Purity-gate an arbitrary matrix and extract its gauge-fixed ray.
pub fn ray_from_matrix(m: Array2<Complex64>, tols: &Tolerances) -> Result<UnitVector> {
    let rho = PureProjector::try_from_matrix(m, tols)?;
    ray_from_projector(&rho, tols)
}

// ---------------------------------------------------------------------------
// two-level circles and the sphere
// ---------------------------------------------------------------------------

/// Spherical coordinates on the (j,k) two-level circle family
/// (zero-based indices, j < k).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatitudeCoords {
    pub j: usize,
    pub k: usize,
    pub theta: f64,
    pub phi: f64,
}

impl LatitudeCoords {
    pub fn new(j: usize, k: usize, theta: f64, phi: f64) -> Result<Self> {
        if j >= k {
            return Err(Error::InvalidParameter {
                reason: format!("latitude indices must satisfy j < k, got ({j},{k})"),
            });
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidParameter {
                reason: format!("theta {theta} outside [0, pi]"),
            });
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::InvalidParameter {
                reason: format!("phi {phi} outside [0, 2pi)"),
            });
        }
        Ok(LatitudeCoords { j, k, theta, phi })
    }
}

/// cos(θ/2)|j⟩ + sin(θ/2) e^{iφ}|k⟩ embedded in dimension `dim`.
pub fn latitude_state(coords: &LatitudeCoords, dim: usize) -> Result<UnitVector> {
    if coords.k >= dim {
        return Err(Error::IndexOutOfRange {
            index: coords.k + 1,
            dim,
        });
    }
    let mut data = Array1::from_elem(dim, C_ZERO);
    data[coords.j] = Complex64::new((coords.theta / 2.0).cos(), 0.0);
    data[coords.k] = Complex64::from_polar((coords.theta / 2.0).sin(), coords.phi);
    Ok(UnitVector { data })
}

/// Equatorial probe state (|j⟩ + e^{iφ}|k⟩)/√2.
pub fn equator_state(j: usize, k: usize, phi: f64, dim: usize) -> Result<UnitVector> {
    latitude_state(&LatitudeCoords::new(j, k, FRAC_PI_2, phi)?, dim)
}

/// A point on the unit two-sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const PLUS_X: BlochVector = BlochVector { x: 1.0, y: 0.0, z: 0.0 };
    pub const PLUS_Y: BlochVector = BlochVector { x: 0.0, y: 1.0, z: 0.0 };
    pub const PLUS_Z: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 1.0 };

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

/// Sphere coordinates of a qubit ray: ρ = ½(I + n̂·σ), with the first basis
/// state at the north pole (+z) and the standard Pauli matrices.
pub fn bloch_vector(rho: &PureProjector) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: rho.dim(),
        });
    }
    let m = rho.matrix();
    Ok(BlochVector {
        x: 2.0 * m[[1, 0]].re,
        y: 2.0 * m[[1, 0]].im,
        z: m[[0, 0]].re - m[[1, 1]].re,
    })
}

/// Inverse of [`bloch_vector`]; requires a unit vector within `TOL_NORM`.
pub fn bloch_to_projector(n: &BlochVector, tols: &Tolerances) -> Result<PureProjector> {
    let norm = n.norm();
    if (norm - 1.0).abs() > tols.norm {
        return Err(Error::NonUnitInput { norm });
    }
    let m = ndarray::array![
        [
            Complex64::new((1.0 + n.z) / 2.0, 0.0),
            Complex64::new(n.x / 2.0, -n.y / 2.0)
        ],
        [
            Complex64::new(n.x / 2.0, n.y / 2.0),
            Complex64::new((1.0 - n.z) / 2.0, 0.0)
        ]
    ];
    Ok(PureProjector::from_matrix_unchecked(m))
}

/// arg(c_k) − arg(c_j) mod 2π; invariant under the global phase.
pub fn relative_phase(psi: &UnitVector, j: usize, k: usize, gauge_eps: f64) -> Result<f64> {
    let dim = psi.dim();
    if j >= dim {
        return Err(Error::IndexOutOfRange { index: j + 1, dim });
    }
    if k >= dim {
        return Err(Error::IndexOutOfRange { index: k + 1, dim });
    }
    let a = psi.amplitudes();
    for (label, idx) in [(j, j), (k, k)] {
        let modulus = a[idx].norm();
        if modulus <= gauge_eps {
            return Err(Error::VanishingComponent {
                index: label + 1,
                modulus,
            });
        }
    }
    Ok(normalize_angle(a[k].arg() - a[j].arg()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(dim: usize, rng: &mut impl rand::Rng) -> UnitVector {
        crate::haar::haar_state(dim, rng)
    }

    #[test]
    fn projector_of_basis_state() {
        let psi = UnitVector::basis(2, 0).unwrap();
        let rho = projector(&psi);
        assert_eq!(rho.matrix()[[0, 0]], C_ONE);
        assert_eq!(rho.matrix()[[1, 1]], C_ZERO);
        assert_eq!(rho.matrix()[[0, 1]], C_ZERO);
    }

    #[test]
    fn projector_of_symmetric_superposition() {
        let psi = equator_state(0, 1, 0.0, 2).unwrap();
        let rho = projector(&psi);
        for i in 0..2 {
            for j in 0..2 {
                assert!((rho.matrix()[[i, j]] - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn projector_ignores_global_phase() {
        let mut rng = crate::haar::rng_from_seed(7);
        let psi = random_state(3, &mut rng);
        let shifted = psi.scaled_by_phase(0.7);
        let d = &projector(&psi).into_matrix() - &projector(&shifted).into_matrix();
        assert!(max_abs(&d) < 1e-15);
    }

    #[test]
    fn transition_probability_extremes() {
        let e0 = projector(&UnitVector::basis(2, 0).unwrap());
        let e1 = projector(&UnitVector::basis(2, 1).unwrap());
        assert_eq!(transition_probability(&e0, &e0, &tols()).unwrap(), 1.0);
        assert_eq!(transition_probability(&e0, &e1, &tols()).unwrap(), 0.0);
    }

    /// Independent route for |⟨θ;φ₁|θ;φ₂⟩|² used to freeze expected values.
    fn circle_overlap_formula(theta: f64, phi1: f64, phi2: f64) -> f64 {
        let (c2, s2) = ((theta / 2.0).cos().powi(2), (theta / 2.0).sin().powi(2));
        2.0 * c2 * s2 * (phi1 - phi2).cos() + c2 * c2 + s2 * s2
    }

    #[test]
    fn transition_probability_on_equator() {
        let a = projector(&equator_state(0, 1, 0.0, 2).unwrap());
        let b = projector(&equator_state(0, 1, FRAC_PI_2, 2).unwrap());
        let p = transition_probability(&a, &b, &tols()).unwrap();
        // frozen via the overlap formula at theta0 = pi/2, phi1 - phi2 = pi/2
        assert!((circle_overlap_formula(FRAC_PI_2, 0.0, FRAC_PI_2) - 0.5).abs() < 1e-15);
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn circle_overlap_identity_random_angles() {
        let mut rng = crate::haar::rng_from_seed(11);
        use rand::Rng;
        for _ in 0..1000 {
            let theta = rng.gen_range(1e-3..PI - 1e-3);
            let phi1 = rng.gen_range(0.0..TAU);
            let phi2 = rng.gen_range(0.0..TAU);
            let s1 = latitude_state(&LatitudeCoords::new(0, 1, theta, phi1).unwrap(), 2).unwrap();
            let s2 = latitude_state(&LatitudeCoords::new(0, 1, theta, phi2).unwrap(), 2).unwrap();
            let direct = s1.inner(&s2).norm_sqr();
            assert!((direct - circle_overlap_formula(theta, phi1, phi2)).abs() < 1e-12);
        }
    }

    #[test]
    fn self_transition_is_one() {
        let mut rng = crate::haar::rng_from_seed(3);
        for _ in 0..1000 {
            let rho = projector(&random_state(4, &mut rng));
            let p = transition_probability(&rho, &rho, &tols()).unwrap();
            assert!((p - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ray_from_projector_basis_and_superposition() {
        let e0 = projector(&UnitVector::basis(2, 0).unwrap());
        let v = ray_from_projector(&e0, &tols()).unwrap();
        assert_eq!(v.amplitudes()[0], C_ONE);

        let plus = equator_state(0, 1, 0.0, 2).unwrap();
        let v = ray_from_projector(&projector(&plus), &tols()).unwrap();
        assert!((v.amplitudes()[0].re - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);
        assert!((v.amplitudes()[1].re - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ray_from_projector_gauge_fixes_phase() {
        // ½[[1, i], [−i, 1]] factors through (1, −i)/√2 with the first
        // entry pinned real positive
        let m = ndarray::array![[c(0.5, 0.0), c(0.0, 0.5)], [c(0.0, -0.5), c(0.5, 0.0)]];
        let v = ray_from_matrix(m, &tols()).unwrap();
        let s = 1.0 / 2.0f64.sqrt();
        assert!((v.amplitudes()[0] - c(s, 0.0)).norm() < 1e-12);
        assert!((v.amplitudes()[1] - c(0.0, -s)).norm() < 1e-12);
    }

    #[test]
    fn ray_from_projector_rejects_mixed_state() {
        let m = ndarray::array![[c(0.75, 0.0), C_ZERO], [C_ZERO, c(0.25, 0.0)]];
        match ray_from_matrix(m, &tols()) {
            Err(Error::ImpureInput { purity }) => assert!((purity - 0.625).abs() < 1e-15),
            other => panic!("expected ImpureInput, got {other:?}"),
        }
    }

    #[test]
    fn gauge_fix_is_bitwise_idempotent() {
        let mut rng = crate::haar::rng_from_seed(5);
        for _ in 0..100 {
            let v = random_state(5, &mut rng).fix_gauge(tols().gauge_eps);
            let again = v.fix_gauge(tols().gauge_eps);
            assert_eq!(v, again);
        }
    }

    #[test]
    fn gauge_round_trip_through_projector() {
        let mut rng = crate::haar::rng_from_seed(6);
        for _ in 0..200 {
            let rho = projector(&random_state(6, &mut rng));
            let v = ray_from_projector(&rho, &tols()).unwrap();
            let w = ray_from_projector(&projector(&v), &tols()).unwrap();
            for (a, b) in v.amplitudes().iter().zip(w.amplitudes()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn latitude_state_examples() {
        // north pole: phi is irrelevant for the ray
        let north = latitude_state(&LatitudeCoords::new(0, 1, 0.0, 1.3).unwrap(), 2).unwrap();
        let p = transition_probability(
            &projector(&north),
            &projector(&UnitVector::basis(2, 0).unwrap()),
            &tols(),
        )
        .unwrap();
        assert!((p - 1.0).abs() < 1e-15);

        let plus = equator_state(0, 1, 0.0, 2).unwrap();
        assert!((plus.amplitudes()[1].re - 1.0 / 2.0f64.sqrt()).abs() < 1e-15);

        let plus_i = equator_state(0, 1, FRAC_PI_2, 2).unwrap();
        assert!((plus_i.amplitudes()[1] - c(0.0, 1.0 / 2.0f64.sqrt())).norm() < 1e-15);
    }

    #[test]
    fn latitude_state_index_out_of_range() {
        let coords = LatitudeCoords::new(0, 3, 1.0, 0.0).unwrap();
        assert!(matches!(
            latitude_state(&coords, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn bloch_vector_cardinal_states() {
        let z = bloch_vector(&projector(&UnitVector::basis(2, 0).unwrap())).unwrap();
        assert!((z.z - 1.0).abs() < 1e-15 && z.x.abs() < 1e-15 && z.y.abs() < 1e-15);

        let x = bloch_vector(&projector(&equator_state(0, 1, 0.0, 2).unwrap())).unwrap();
        assert!((x.x - 1.0).abs() < 1e-15);

        let y = bloch_vector(&projector(&equator_state(0, 1, FRAC_PI_2, 2).unwrap())).unwrap();
        assert!((y.y - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bloch_overlap_matches_transition_probability() {
        let mut rng = crate::haar::rng_from_seed(8);
        for _ in 0..200 {
            let r1 = projector(&random_state(2, &mut rng));
            let r2 = projector(&random_state(2, &mut rng));
            let p = transition_probability(&r1, &r2, &tols()).unwrap();
            let n1 = bloch_vector(&r1).unwrap();
            let n2 = bloch_vector(&r2).unwrap();
            assert!((p - 0.5 * (1.0 + n1.dot(&n2))).abs() < 1e-10);
        }
    }

    #[test]
    fn bloch_round_trip() {
        let mut rng = crate::haar::rng_from_seed(9);
        for _ in 0..1000 {
            let rho = projector(&random_state(2, &mut rng));
            let back = bloch_to_projector(&bloch_vector(&rho).unwrap(), &tols()).unwrap();
            let d = &back.into_matrix() - &rho.into_matrix();
            assert!(max_abs(&d) < 1e-12);
        }
    }

    #[test]
    fn relative_phase_examples() {
        let plus = equator_state(0, 1, 0.0, 2).unwrap();
        assert_eq!(relative_phase(&plus, 0, 1, tols().gauge_eps).unwrap(), 0.0);

        let plus_i = equator_state(0, 1, FRAC_PI_2, 2).unwrap();
        assert!(
            (relative_phase(&plus_i, 0, 1, tols().gauge_eps).unwrap() - FRAC_PI_2).abs() < 1e-15
        );

        // global phase drops out
        let v = equator_state(0, 1, 1.1, 2).unwrap().scaled_by_phase(0.4);
        assert!((relative_phase(&v, 0, 1, tols().gauge_eps).unwrap() - 1.1).abs() < 1e-12);
    }

    #[test]
    fn relative_phase_rejects_vanishing_component() {
        let e0 = UnitVector::basis(2, 0).unwrap();
        assert!(matches!(
            relative_phase(&e0, 0, 1, tols().gauge_eps),
            Err(Error::VanishingComponent { index: 2, .. })
        ));
    }

    #[test]
    fn unit_vector_rejects_bad_norm() {
        let data = Array1::from_vec(vec![c(0.9, 0.0), c(0.1, 0.0)]);
        assert!(matches!(
            UnitVector::new(data, &tols()),
            Err(Error::NonUnitInput { .. })
        ));
    }

    #[test]
    fn projector_validation_rejects_non_hermitian() {
        let m = ndarray::array![[C_ONE, c(0.3, 0.0)], [C_ZERO, C_ZERO]];
        assert!(matches!(
            PureProjector::try_from_matrix(m, &tols()),
            Err(Error::NotHermitian { .. })
        ));
    }

    proptest! {
        #[test]
        fn prop_transition_probability_symmetric(seed in 0u64..1000) {
            let mut rng = crate::haar::rng_from_seed(seed);
            let r1 = projector(&random_state(3, &mut rng));
            let r2 = projector(&random_state(3, &mut rng));
            let p12 = transition_probability(&r1, &r2, &tols()).unwrap();
            let p21 = transition_probability(&r2, &r1, &tols()).unwrap();
            prop_assert!((p12 - p21).abs() < 1e-14);
        }

        #[test]
        fn prop_gauge_invariant_under_global_phase(seed in 0u64..1000, phase in 0.0..TAU) {
            let mut rng = crate::haar::rng_from_seed(seed);
            let v = random_state(4, &mut rng);
            let fixed_a = v.fix_gauge(tols().gauge_eps);
            let fixed_b = v.scaled_by_phase(phase).fix_gauge(tols().gauge_eps);
            for (a, b) in fixed_a.amplitudes().iter().zip(fixed_b.amplitudes()) {
                prop_assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
