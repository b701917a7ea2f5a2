//! Single-qubit operators and kets in the computational basis {|0⟩, |1⟩}.

use num_complex::Complex64;

use super::{c, re, ComplexMatrix, ONE, ZERO};

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]])
}

pub fn ket0() -> Vec<Complex64> {
    vec![ONE, ZERO]
}

pub fn ket1() -> Vec<Complex64> {
    vec![ZERO, ONE]
}

/// (|0⟩ + |1⟩)/√2
pub fn ket_plus() -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![re(s), re(s)]
}

/// (|0⟩ − |1⟩)/√2
pub fn ket_minus() -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![re(s), re(-s)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let (x, y, z) = (sigma_x(), sigma_y(), sigma_z());
        // XY = iZ
        let xy = &x * &y;
        assert!(xy.max_abs_diff(&z.scale(c(0.0, 1.0))) <= 1e-15);
        for p in [&x, &y, &z] {
            assert!((p * p).max_abs_diff(&ComplexMatrix::identity(2)) <= 1e-15);
            assert!(p.is_hermitian(0.0));
        }
    }
}
