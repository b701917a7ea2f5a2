use num_complex::Complex64;

use super::{re, ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Input must be Hermitian to this tolerance before symmetrization.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Negative eigenvalues down to this value are treated as round-off and
/// clamped to zero by PSD routines.
pub const PSD_CLAMP: f64 = 1e-10;
/// Anything more negative than this is rejected as not PSD.
pub const PSD_REJECT: f64 = 1e-8;

/// Spectral decomposition A = V·diag(λ)·V† of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order. The phase of every
/// eigenvector is fixed so that its first non-negligible component is real
/// and positive, which makes the decomposition reproducible bit for bit.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    /// V·diag(f(λ))·V†
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let weights: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for (k, w) in weights.iter().enumerate() {
                    acc += v[(i, k)] * w * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(re)
    }
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// The input is symmetrized as (A + A†)/2 first. Each rotation removes the
/// phase of the pivot a_pq and then applies a real Jacobi rotation, so the
/// combined plane rotation is J = D·R·D† with D = diag(1, e^{-iφ}).
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("eigendecomposition of non-square {}x{} matrix", a.rows(), a.cols())));
    }
    let herr = a.hermiticity_error();
    let scale = a.max_abs().max(1.0);
    if herr > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { deviation: herr });
    }

    let n = a.rows();
    let mut m = a.hermitize();
    let mut v = ComplexMatrix::identity(n);
    let max_sweeps = 100 * n;

    let fro = m.frobenius_norm();
    let mut converged = n == 1;
    for _ in 0..max_sweeps {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * fro || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NotConverged { sweeps: max_sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort so equal eigenvalues keep their Jacobi order.
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| m[(k, k)].re).collect();

    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let lead = (0..n).map(|i| v[(i, k)]).find(|z| z.norm() > 1e-10).unwrap_or(ZERO);
        let phase = if lead == ZERO { re(1.0) } else { lead.conj() / lead.norm() };
        for i in 0..n {
            vectors[(i, col)] = v[(i, k)] * phase;
        }
    }

    Ok(HermitianEigen { eigenvalues, eigenvectors: vectors })
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    // Pivot already negligible next to both diagonal entries.
    let g = 100.0 * mag;
    if app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
        m[(p, q)] = ZERO;
        m[(q, p)] = ZERO;
        return;
    }
    let theta = (aqq - app) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;
    let e = apq / mag;
    let jpq = e * sn;
    let jqp = -e.conj() * sn;

    let n = m.rows();
    // M ← M·J
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * cs + mkq * jqp;
        m[(k, q)] = mkp * jpq + mkq * cs;
    }
    // M ← J†·M
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = mpk * cs + mqk * jqp.conj();
        m[(q, k)] = mpk * jpq.conj() + mqk * cs;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = re(m[(p, p)].re);
    m[(q, q)] = re(m[(q, q)].re);
    // V ← V·J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cs + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * cs;
    }
}

/// Singular values of a square complex matrix, descending.
///
/// One-sided (Hestenes) Jacobi: columns are rotated pairwise until mutually
/// orthogonal, and the singular values are the final column norms. Small
/// singular values come out with absolute accuracy of order ε·‖A‖, unlike
/// square roots of the eigenvalues of A†A.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("singular values of non-square {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let max_sweeps = 100 * n;
    let mut converged = n == 1;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let mag = gamma.norm();
                if mag == 0.0 || mag <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * mag);
                let t = if zeta == 0.0 { 1.0 } else { zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt()) };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                let e = gamma / mag;
                let (lo, hi) = cols.split_at_mut(q);
                for (zp, zq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                    let (xp, xq) = (*zp, *zq);
                    *zp = xp * cs - xq * e.conj() * sn;
                    *zq = xp * e * sn + xq * cs;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NotConverged { sweeps: max_sweeps });
    }
    let mut sv: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

/// exp(−i·t·H) for Hermitian H.
pub fn unitary_from_hamiltonian(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if t == 0.0 {
        if !h.is_square() {
            return Err(Error::Dimension("hamiltonian must be square".into()));
        }
        return Ok(ComplexMatrix::identity(h.rows()));
    }
    let eig = herm_eig(h)?;
    Ok(eig.map_spectrum(|l| Complex64::from_polar(1.0, -t * l)))
}

/// Principal square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
    if min < -PSD_REJECT {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(eig.map_spectrum(|l| re(l.max(0.0).sqrt())).hermitize())
}

#[cfg(test)]
mod tests {
    use super::super::pauli::{sigma_x, sigma_z};
    use super::super::{kron, ComplexMatrix, I};
    use super::*;
    use crate::random::{random_hermitian, random_matrix, rng};
    use proptest::prelude::*;

    fn h_ab() -> ComplexMatrix {
        let i2 = ComplexMatrix::identity(2);
        &kron(&sigma_z(), &i2).unwrap() + &kron(&i2, &sigma_z()).unwrap()
    }

    fn check_invariants(a: &ComplexMatrix, eig: &HermitianEigen) {
        let n = a.rows();
        assert!(eig.reconstruct().max_abs_diff(&a.hermitize()) <= 1e-12);
        let gram = &eig.eigenvectors.dagger() * &eig.eigenvectors;
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-12);
        assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn pauli_z_spectrum() {
        let eig = herm_eig(&sigma_z()).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, -1.0]);
    }

    #[test]
    fn degenerate_identity() {
        let eig = herm_eig(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0; 4]);
        check_invariants(&ComplexMatrix::identity(4), &eig);
    }

    #[test]
    fn two_qubit_free_hamiltonian() {
        let eig = herm_eig(&h_ab()).unwrap();
        assert_eq!(eig.eigenvalues, vec![2.0, 0.0, 0.0, -2.0]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut a = sigma_x();
        a[(0, 1)] = re(2.0);
        assert!(matches!(herm_eig(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn phase_convention_is_first_component_positive() {
        let mut r = rng(1);
        let h = random_hermitian(&mut r, 6);
        let eig = herm_eig(&h).unwrap();
        for col in 0..6 {
            let lead = eig.eigenvectors.column(col).into_iter().find(|z| z.norm() > 1e-10).unwrap();
            assert!(lead.im.abs() <= 1e-15 && lead.re > 0.0);
        }
    }

    #[test]
    fn random_hermitian_matrices_up_to_sixteen() {
        let mut r = rng(2);
        for n in 1..=16 {
            let h = random_hermitian(&mut r, n);
            let eig = herm_eig(&h).unwrap();
            check_invariants(&h, &eig);
            let tr = h.trace().re;
            let sum: f64 = eig.eigenvalues.iter().sum();
            assert!((sum - tr).abs() <= 1e-11 * tr.abs().max(1.0));
        }
    }

    #[test]
    fn unitary_examples() {
        assert_eq!(unitary_from_hamiltonian(&sigma_z(), 0.0).unwrap(), ComplexMatrix::identity(2));
        let u = unitary_from_hamiltonian(&sigma_z(), std::f64::consts::FRAC_PI_2).unwrap();
        let expected = ComplexMatrix::from_diag(&[-I, I]);
        assert!(u.max_abs_diff(&expected) <= 1e-15);
    }

    #[test]
    fn unitary_of_random_hamiltonian() {
        let mut r = rng(4);
        for n in [2, 4, 8, 16] {
            let u = unitary_from_hamiltonian(&random_hermitian(&mut r, n), 0.37).unwrap();
            let uu = &u * &u.dagger();
            assert!(uu.max_abs_diff(&ComplexMatrix::identity(n)) <= 1e-11);
        }
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(psd_sqrt(&ComplexMatrix::identity(3)).unwrap(), ComplexMatrix::identity(3));
        let s = psd_sqrt(&ComplexMatrix::from_real_diag(&[4.0, 1.0])).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::from_real_diag(&[2.0, 1.0])) <= 1e-15);
        assert!(matches!(psd_sqrt(&ComplexMatrix::from_real_diag(&[1.0, -1e-6])), Err(Error::NotPsd { .. })));
        // round-off negatives are clamped
        let s = psd_sqrt(&ComplexMatrix::from_real_diag(&[1.0, -1e-12])).unwrap();
        assert_eq!(s[(1, 1)], ZERO);
    }

    #[test]
    fn singular_values_match_spectrum_of_gram() {
        let mut r = rng(6);
        for n in 1..=6 {
            let a = random_matrix(&mut r, n, n);
            let sv = singular_values(&a).unwrap();
            let eig = herm_eig(&(&a.dagger() * &a)).unwrap();
            for (s, l) in sv.iter().zip(&eig.eigenvalues) {
                assert!((s * s - l).abs() <= 1e-12);
            }
        }
        // rank one: the zero singular values stay at round-off level
        let v = random_matrix(&mut r, 4, 1);
        let rank_one = &v * &v.dagger();
        let sv = singular_values(&rank_one).unwrap();
        assert!(sv[1..].iter().all(|&s| s <= 1e-14));
    }

    proptest! {
        #[test]
        fn sqrt_squares_back(seed in any::<u64>(), n in 1usize..=8) {
            let mut r = rng(seed);
            let g = random_matrix(&mut r, n, n);
            let p = &g * &g.dagger();
            let s = psd_sqrt(&p).unwrap();
            prop_assert!((&s * &s).max_abs_diff(&p) <= 1e-10);
        }
    }
}
