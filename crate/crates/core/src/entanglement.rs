//! Two-qubit concurrence (Wootters).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::pauli::sigma_y;
use crate::matcore::{herm_eig, kron, partial_trace, psd_sqrt, singular_values, ComplexMatrix, PSD_CLAMP, PSD_REJECT};
use crate::quantum::{DensityMatrix, STATE_TOL};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcurrenceResult {
    pub value: f64,
    /// Eigenvalues of R, descending.
    pub lambdas: [f64; 4],
}

/// Which side of the two-qubit cut to reduce onto.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Party {
    A,
    B,
}

fn check_two_qubit(rho: &ComplexMatrix) -> Result<()> {
    if rho.rows() != 4 || rho.cols() != 4 {
        return Err(Error::Dimension(format!(
            "concurrence needs a 4x4 two-qubit state, got {}x{}",
            rho.rows(),
            rho.cols()
        )));
    }
    Ok(())
}

/// ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)
pub fn spin_flip(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    spin_flip_matrix(rho.matrix())
}

fn spin_flip_matrix(rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_two_qubit(rho)?;
    let yy = kron(&sigma_y(), &sigma_y())?;
    Ok(&(&yy * &rho.conj()) * &yy)
}

/// C = max(0, λ₁ − λ₂ − λ₃ − λ₄), λ's the eigenvalues of
/// R = √(√ρ ρ̃ √ρ).
///
/// Writing ρ = W·W† with W = V·√D from the spectral decomposition, the λ's
/// are the singular values of τ = Wᵀ(σ_y⊗σ_y)W. Taking them as singular
/// values keeps zero λ's at round-off level; square roots of eigenvalues of
/// R² would lift them to ~1e−8 for rank-deficient states.
pub fn concurrence_mixed(rho: &DensityMatrix) -> Result<ConcurrenceResult> {
    let m = rho.matrix();
    check_two_qubit(m)?;
    let eig = herm_eig(m)?;
    let mut w = eig.eigenvectors.clone();
    for (k, &p) in eig.eigenvalues.iter().enumerate() {
        if p < -PSD_REJECT {
            return Err(Error::NotPsd { min_eigenvalue: p });
        }
        let scale = p.max(0.0).sqrt();
        for i in 0..4 {
            w[(i, k)] *= scale;
        }
    }
    let yy = kron(&sigma_y(), &sigma_y())?;
    let tau = &(&transpose(&w) * &yy) * &w;
    let sv = singular_values(&tau)?;
    let lambdas = [sv[0], sv[1], sv[2], sv[3]];
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0);
    Ok(ConcurrenceResult { value, lambdas })
}

fn transpose(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger().conj()
}

/// Eigenvalues of R = √(√ρ ρ̃ √ρ) computed literally: square roots of the
/// spectrum of the Hermitian matrix √ρ ρ̃ √ρ. Eigenvalues of R² down to
/// −1e−10 are treated as zero.
pub fn r_matrix_lambdas(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let m = rho.matrix();
    check_two_qubit(m)?;
    let sqrt_rho = psd_sqrt(m)?;
    let inner = (&(&sqrt_rho * &spin_flip_matrix(m)?) * &sqrt_rho).hermitize();
    let eig = herm_eig(&inner)?;
    let mut lambdas = [0.0; 4];
    for (l, &mu) in lambdas.iter_mut().zip(&eig.eigenvalues) {
        if mu < -PSD_CLAMP {
            return Err(Error::NotPsd { min_eigenvalue: mu });
        }
        *l = mu.max(0.0).sqrt();
    }
    Ok(lambdas)
}

pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    concurrence_mixed(rho).map(|c| c.value)
}

/// √(2(1 − tr ρ_k²)) for a pure state, with ρ_k the reduced state of `cut`.
pub fn concurrence_pure(psi: &[Complex64], cut: Party) -> Result<f64> {
    if psi.len() != 4 {
        return Err(Error::Dimension(format!("expected 4 amplitudes, got {}", psi.len())));
    }
    let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > STATE_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let keep = match cut {
        Party::A => 0,
        Party::B => 1,
    };
    let reduced = partial_trace(&ComplexMatrix::projector(psi), &[2, 2], &[keep])?;
    let purity = (&reduced * &reduced).trace().re;
    Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{c, re, ZERO};
    use crate::random::{random_pure, random_state, random_unitary, rng};
    use num_complex::Complex64;

    fn singlet() -> Vec<Complex64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        vec![ZERO, re(-s), re(s), ZERO]
    }

    fn werner(p: f64) -> DensityMatrix {
        let m =
            &ComplexMatrix::projector(&singlet()).scale_re(p) + &ComplexMatrix::identity(4).scale_re((1.0 - p) / 4.0);
        DensityMatrix::new(m, vec![2, 2]).unwrap()
    }

    /// Coefficients of det(x·1 − A) by Faddeev–LeVerrier, highest first.
    fn char_poly(a: &ComplexMatrix) -> Vec<Complex64> {
        let n = a.rows();
        let mut coeffs = vec![re(1.0)];
        let mut m = ComplexMatrix::zeros(n, n);
        for k in 1..=n {
            let shifted = &m + &ComplexMatrix::identity(n).scale(*coeffs.last().unwrap());
            m = a * &shifted;
            coeffs.push(-m.trace() / k as f64);
        }
        coeffs
    }

    /// Durand–Kerner roots of a monic polynomial.
    fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
        let n = coeffs.len() - 1;
        let eval = |x: Complex64| coeffs.iter().fold(re(0.0), |acc, &k| acc * x + k);
        let mut roots: Vec<Complex64> = (0..n).map(|k| c(0.4, 0.9).powu(k as u32)).collect();
        for _ in 0..500 {
            for i in 0..n {
                let denom = (0..n).filter(|&j| j != i).fold(re(1.0), |acc, j| acc * (roots[i] - roots[j]));
                let step = eval(roots[i]) / denom;
                roots[i] -= step;
            }
        }
        roots
    }

    /// Wootters directly: square roots of the eigenvalues of ρ·ρ̃, found as
    /// roots of its characteristic polynomial.
    fn concurrence_oracle(rho: &ComplexMatrix) -> f64 {
        let prod = rho * &spin_flip_matrix(rho).unwrap();
        let mut l: Vec<f64> = poly_roots(&char_poly(&prod)).iter().map(|z| z.re.max(0.0).sqrt()).collect();
        l.sort_by(|a, b| b.total_cmp(a));
        (l[0] - l[1] - l[2] - l[3]).max(0.0)
    }

    #[test]
    fn spin_flip_examples() {
        let s = DensityMatrix::pure(&singlet(), vec![2, 2]).unwrap();
        assert!(spin_flip(&s).unwrap().max_abs_diff(s.matrix()) <= 1e-15);
        let zz = ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0]);
        let flipped = spin_flip_matrix(&zz).unwrap();
        assert_eq!(flipped, ComplexMatrix::from_real_diag(&[0.0, 0.0, 0.0, 1.0]));
        let mut r = rng(30);
        for _ in 0..10 {
            let rho = random_state(&mut r, &[2, 2]);
            let twice = spin_flip_matrix(&spin_flip(&rho).unwrap()).unwrap();
            assert!(twice.max_abs_diff(rho.matrix()) <= 1e-13);
        }
        assert!(spin_flip_matrix(&ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn bell_product_and_werner() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityMatrix::pure(&[re(s), ZERO, ZERO, re(s)], vec![2, 2]).unwrap();
        assert!((concurrence(&bell).unwrap() - 1.0).abs() <= 1e-12);
        let prod = DensityMatrix::pure(&[re(1.0), ZERO, ZERO, ZERO], vec![2, 2]).unwrap();
        assert!(concurrence(&prod).unwrap() <= 1e-12);

        // Werner is spin-flip invariant, so the λ's are ρ's own eigenvalues:
        // p + (1−p)/4 and (1−p)/4 (three times).
        let p: f64 = 0.5;
        let direct = (p + (1.0 - p) / 4.0) - 3.0 * (1.0 - p) / 4.0;
        assert!((direct - 0.25).abs() <= 1e-15);
        let got = concurrence_mixed(&werner(p)).unwrap();
        assert!((got.value - 0.25).abs() <= 1e-12);
        assert!(concurrence(&werner(0.3)).unwrap() <= 1e-12);
    }

    #[test]
    fn matches_characteristic_polynomial_oracle() {
        let mut r = rng(31);
        for _ in 0..50 {
            let rho = random_state(&mut r, &[2, 2]);
            let got = concurrence(&rho).unwrap();
            assert!((got - concurrence_oracle(rho.matrix())).abs() <= 1e-7);
        }
    }

    #[test]
    fn singular_value_route_matches_r_matrix_route() {
        let mut r = rng(36);
        for _ in 0..50 {
            let rho = random_state(&mut r, &[2, 2]);
            let a = concurrence_mixed(&rho).unwrap().lambdas;
            let b = r_matrix_lambdas(&rho).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-9);
            }
        }
        let r_werner = r_matrix_lambdas(&werner(0.5)).unwrap();
        assert!((r_werner[0] - r_werner[1] - r_werner[2] - r_werner[3] - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn pure_formula_agrees_with_mixed() {
        let mut r = rng(32);
        for _ in 0..100 {
            let psi = random_pure(&mut r, 4);
            let pure_a = concurrence_pure(&psi, Party::A).unwrap();
            let pure_b = concurrence_pure(&psi, Party::B).unwrap();
            let mixed = concurrence(&DensityMatrix::pure(&psi, vec![2, 2]).unwrap()).unwrap();
            assert!((pure_a - mixed).abs() <= 1e-9);
            assert!((pure_a - pure_b).abs() <= 1e-12);
        }
        assert!((concurrence_pure(&singlet(), Party::A).unwrap() - 1.0).abs() <= 1e-15);
        assert!(concurrence_pure(&[ZERO, re(1.0), ZERO, ZERO], Party::A).unwrap() <= 1e-15);
        assert!(concurrence_pure(&[re(1.0), re(1.0), ZERO, ZERO], Party::A).is_err());
    }

    #[test]
    fn local_unitary_invariance() {
        let mut r = rng(33);
        for _ in 0..30 {
            let rho = random_state(&mut r, &[2, 2]);
            let u = kron(&random_unitary(&mut r, 2), &random_unitary(&mut r, 2)).unwrap();
            let rotated = DensityMatrix::new(rho.matrix().conjugate_by(&u).hermitize(), vec![2, 2]).unwrap();
            let a = concurrence(&rho).unwrap();
            let b = concurrence(&rotated).unwrap();
            assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn convexity_spot_check() {
        let mut r = rng(34);
        for k in 0..30 {
            let psi1 = random_pure(&mut r, 4);
            let psi2 = random_pure(&mut r, 4);
            let r1 = DensityMatrix::pure(&psi1, vec![2, 2]).unwrap();
            let r2 = DensityMatrix::pure(&psi2, vec![2, 2]).unwrap();
            let p = (k as f64 + 0.5) / 30.0;
            let mix = &r1.matrix().scale_re(p) + &r2.matrix().scale_re(1.0 - p);
            let mix = DensityMatrix::new(mix, vec![2, 2]).unwrap();
            let lhs = concurrence(&mix).unwrap();
            let rhs = p * concurrence(&r1).unwrap() + (1.0 - p) * concurrence(&r2).unwrap();
            assert!(lhs <= rhs + 1e-9);
        }
    }

    #[test]
    fn lambdas_descend() {
        let mut r = rng(35);
        for _ in 0..30 {
            let res = concurrence_mixed(&random_state(&mut r, &[2, 2])).unwrap();
            assert!(res.lambdas.windows(2).all(|w| w[0] >= w[1] - 1e-12));
            assert!(res.lambdas.iter().all(|&l| l >= 0.0));
        }
    }
}
