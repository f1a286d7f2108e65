//! Reproducible Haar sampling.
//!
//! All randomness in this crate flows through ChaCha20 seeded from a u64, so
//! identical seeds give identical results on every platform.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::linalg::{UnitVector, C_ZERO};

pub fn rng_from_seed(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn standard_complex(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) / 2.0f64.sqrt()
}

/// Haar-random pure state: a normalized vector of independent standard
/// complex Gaussians.
pub fn haar_state(dim: usize, rng: &mut impl Rng) -> UnitVector {
    loop {
        let data = Array1::from_iter((0..dim).map(|_| standard_complex(rng)));
        if let Ok(v) = UnitVector::normalized(data) {
            return v;
        }
    }
}

/// Random state with real amplitudes and a first component bounded away
/// from zero.
pub fn real_state_first_nonzero(dim: usize, rng: &mut impl Rng) -> UnitVector {
    loop {
        let mut data = Array1::from_elem(dim, C_ZERO);
        for i in 0..dim {
            let r: f64 = rng.sample(StandardNormal);
            data[i] = Complex64::new(r, 0.0);
        }
        let head: f64 = rng.sample::<f64, _>(StandardNormal).abs() + 0.3;
        data[0] = Complex64::new(head, 0.0);
        if let Ok(v) = UnitVector::normalized(data) {
            return v;
        }
    }
}

/// Dense state with every modulus bounded below; used as a verification
/// probe where all components must carry a readable phase.
pub fn dense_state(dim: usize, rng: &mut impl Rng) -> UnitVector {
    let data = Array1::from_iter((0..dim).map(|_| {
        let modulus = 0.5 + rng.gen::<f64>();
        let phase = rng.gen::<f64>() * std::f64::consts::TAU;
        Complex64::from_polar(modulus, phase)
    }));
    UnitVector::normalized(data).expect("dense vector has positive norm")
}

/// Haar-random unitary: modified Gram-Schmidt orthonormalization of a
/// complex Gaussian matrix. The diagonal phases are fixed (positive real
/// column pivots), which makes the distribution exactly Haar and the
/// output deterministic in the seed.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> Array2<Complex64> {
    let mut cols: Vec<Array1<Complex64>> = (0..dim)
        .map(|_| Array1::from_iter((0..dim).map(|_| standard_complex(rng))))
        .collect();
    for j in 0..dim {
        // two projection sweeps keep orthogonality near machine precision
        for _ in 0..2 {
            for i in 0..j {
                let proj: Complex64 = cols[i]
                    .iter()
                    .zip(cols[j].iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let qi = cols[i].clone();
                cols[j].zip_mut_with(&qi, |b, a| *b -= proj * a);
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[j].mapv_inplace(|z| z / norm);
    }
    let mut u = Array2::from_elem((dim, dim), C_ZERO);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..dim {
            u[[i, j]] = col[i];
        }
    }
    u
}
