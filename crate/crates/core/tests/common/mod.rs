#![allow(dead_code)]

use qactivation::qcore::{BlochVector, ComplexMatrix, DensityMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_c64<R: Rng>(rng: &mut R) -> C64 {
    // Box-Muller; the pair gives real and imaginary parts
    let u1: f64 = rng.random_range(f64::EPSILON..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    let r = (-2.0 * u1.ln()).sqrt();
    let a = std::f64::consts::TAU * u2;
    C64::new(r * a.cos(), r * a.sin())
}

pub fn random_ket<R: Rng>(dim: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..dim).map(|_| gaussian_c64(rng)).collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / norm).collect()
}

pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let data = (0..dim * dim).map(|_| gaussian_c64(rng)).collect();
    ComplexMatrix::from_vec(dim, dim, data)
        .unwrap()
        .hermitian_part()
}

/// Ginibre-distributed full-rank state on `n` qubits.
pub fn random_density<R: Rng>(n_qubits: usize, rng: &mut R) -> DensityMatrix {
    let dim = 1 << n_qubits;
    let data = (0..dim * dim).map(|_| gaussian_c64(rng)).collect();
    let g = ComplexMatrix::from_vec(dim, dim, data).unwrap();
    let m = &g * &g.dagger();
    let tr = m.trace().re;
    DensityMatrix::qubits(m.scale_real(1.0 / tr).hermitian_part()).unwrap()
}

pub fn random_unitary_2<R: Rng>(rng: &mut R) -> ComplexMatrix {
    let k = random_ket(2, rng);
    let phase = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    ComplexMatrix::from_rows(&[
        vec![k[0] * phase, -k[1].conj() * phase],
        vec![k[1] * phase, k[0].conj() * phase],
    ])
    .unwrap()
}

pub fn random_bloch<R: Rng>(rng: &mut R) -> BlochVector {
    let z: f64 = rng.random_range(-1.0..1.0);
    let a: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).sqrt();
    BlochVector::normalized(r * a.cos(), r * a.sin(), z).unwrap()
}

/// Mixture of product states of two qubits.
pub fn random_separable<R: Rng>(terms: usize, rng: &mut R) -> DensityMatrix {
    let mut acc = ComplexMatrix::zeros(4, 4);
    let mut total = 0.0;
    for _ in 0..terms {
        let w: f64 = rng.random_range(0.0..1.0);
        let a = ComplexMatrix::projector(&random_ket(2, rng));
        let b = ComplexMatrix::projector(&random_ket(2, rng));
        acc = &acc + &a.kron(&b).scale_real(w);
        total += w;
    }
    DensityMatrix::qubits(acc.scale_real(1.0 / total).hermitian_part()).unwrap()
}

pub fn check_density(rho: &DensityMatrix) {
    let m = rho.matrix();
    assert!(m.is_finite());
    assert_eq!(rho.dims().iter().product::<usize>(), m.nrows());
    assert!(m.hermitian_deviation() <= 1e-10);
    assert!((m.trace().re - 1.0).abs() <= 1e-10);
    assert!(rho.eigenvalues().iter().all(|&e| e >= -1e-9));
}

pub fn q_grid(step: f64) -> Vec<f64> {
    let n = (1.0 / step).round() as usize;
    (0..=n).map(|i| i as f64 / n as f64).collect()
}
