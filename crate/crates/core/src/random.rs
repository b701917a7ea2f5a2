//! Seeded generators for random states, unitaries and channels.
//!
//! Used by the fuzz-style property checks and the `oracle-check` command.
//! All draws come from ChaCha8 so a seed reproduces the same objects on every
//! platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matcore::{c, herm_eig, re, unitary_from_hamiltonian, ComplexMatrix};
use crate::quantum::{DensityMatrix, KrausChannel};

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries uniform in the unit square of the complex plane, centred at 0.
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    ComplexMatrix::from_vec(rows, cols, data).expect("finite random entries")
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    random_matrix(rng, n, n).hermitize()
}

pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let h = random_hermitian(rng, n);
    unitary_from_hamiltonian(&h, 3.0).expect("hermitian by construction")
}

/// G·G†/tr(G·G†) for a random square G (full rank almost surely).
pub fn random_density(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n, n);
    let p = &g * &g.dagger();
    let t = p.trace().re;
    p.scale_re(1.0 / t).hermitize()
}

pub fn random_state(rng: &mut impl Rng, dims: &[usize]) -> DensityMatrix {
    let n = dims.iter().product();
    DensityMatrix::new(random_density(rng, n), dims.to_vec()).expect("valid random state")
}

/// Normalized random state vector.
pub fn random_pure(rng: &mut impl Rng, n: usize) -> Vec<num_complex::Complex64> {
    let v = random_matrix(rng, n, 1);
    let norm = v.frobenius_norm();
    v.as_slice().iter().map(|z| z / norm).collect()
}

/// Random CPTP map with `count` Kraus operators: K_k = G_k·S^{-1/2}, where
/// S = Σ G_k†G_k.
pub fn random_channel(rng: &mut impl Rng, dim: usize, count: usize) -> KrausChannel {
    let gs: Vec<ComplexMatrix> = (0..count).map(|_| random_matrix(rng, dim, dim)).collect();
    let s = gs.iter().fold(ComplexMatrix::zeros(dim, dim), |acc, g| &acc + &(&g.dagger() * g));
    let eig = herm_eig(&s).expect("hermitian by construction");
    let inv_sqrt = eig.map_spectrum(|l| re(1.0 / l.sqrt()));
    let kraus = gs.iter().map(|g| g * &inv_sqrt).collect();
    KrausChannel::new(kraus, "random").expect("complete by construction")
}

/// Random channel whose Kraus operators are all diagonal, so any two such
/// channels commute operator by operator.
pub fn random_diagonal_channel(rng: &mut impl Rng, dim: usize, count: usize) -> KrausChannel {
    // Per basis index, split unit weight across the operators.
    let mut kraus = vec![ComplexMatrix::zeros(dim, dim); count];
    for i in 0..dim {
        let w: Vec<f64> = (0..count).map(|_| rng.random_range(0.05..1.0)).collect();
        let total: f64 = w.iter().sum();
        for (k, wk) in w.iter().enumerate() {
            let phase = rng.random_range(0.0..std::f64::consts::TAU);
            kraus[k][(i, i)] = num_complex::Complex64::from_polar((wk / total).sqrt(), phase);
        }
    }
    KrausChannel::new(kraus, "random-diagonal").expect("complete by construction")
}
