//! Dense complex linear algebra for the small operators used throughout the
//! crate (at most 16×16 here).
//!
//! Everything is row-major `Complex64`. Arithmetic operators on references
//! (`&a * &b`, `&a + &b`, ...) panic on shape mismatch, the same way slice
//! indexing does; the fallible entry points (`kron`, `partial_trace`, the
//! eigen routines) return [`Error`].

mod eigen;
pub mod pauli;

pub use eigen::{
    herm_eig, psd_sqrt, singular_values, unitary_from_hamiltonian, HermitianEigen, HERMITIAN_TOL, PSD_CLAMP, PSD_REJECT,
};

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest dimension a Kronecker product may produce.
pub const MAX_DIM: usize = 1 << 20;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. Rejects empty shapes, a wrong
    /// entry count and non-finite entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty matrix shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries supplied for a {rows}x{cols} matrix", data.len())));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Real matrix from nested rows. Panics on ragged input; intended for
    /// literals.
    pub fn from_real_rows<const N: usize>(rows: &[[f64; N]]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| re(x))).collect();
        Self::from_vec(rows.len(), N, data).expect("literal matrix")
    }

    pub fn from_rows<const N: usize>(rows: &[[Complex64; N]]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_vec(rows.len(), N, data).expect("literal matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix shape");
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let d: Vec<_> = diag.iter().map(|&x| re(x)).collect();
        Self::from_diag(&d)
    }

    /// |ψ⟩⟨φ|
    pub fn outer(psi: &[Complex64], phi: &[Complex64]) -> Self {
        let mut m = Self::zeros(psi.len(), phi.len());
        for (i, a) in psi.iter().enumerate() {
            for (j, b) in phi.iter().enumerate() {
                m[(i, j)] = a * b.conj();
            }
        }
        m
    }

    pub fn projector(psi: &[Complex64]) -> Self {
        Self::outer(psi, psi)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Dimension of a square matrix.
    #[inline]
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn dagger(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(re(s))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    /// (A + A†)/2
    pub fn hermitize(&self) -> Self {
        assert!(self.is_square(), "hermitize needs a square matrix");
        let n = self.rows;
        let mut out = self.clone();
        for i in 0..n {
            out[(i, i)] = re(self[(i, i)].re);
            for j in (i + 1)..n {
                let v = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        out
    }

    /// A·B with a shape check.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// U·A·U†
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.dagger()
    }

    /// XY − YX
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn matrix_power(&self, n: u64) -> Self {
        assert!(self.is_square());
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Copy of the `size`×`size` block starting at (`r0`, `c0`).
    pub fn block(&self, r0: usize, c0: usize, size: usize) -> Self {
        let mut out = Self::zeros(size, size);
        for i in 0..size {
            for j in 0..size {
                out[(i, j)] = self[(r0 + i, c0 + j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; entry (i·rb+k, j·cb+l) is a[i,j]·b[k,l].
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let rows = a.rows.checked_mul(b.rows).filter(|&r| r <= MAX_DIM);
    let cols = a.cols.checked_mul(b.cols).filter(|&c| c <= MAX_DIM);
    let (Some(rows), Some(cols)) = (rows, cols) else {
        return Err(Error::Dimension(format!(
            "kron of {}x{} and {}x{} exceeds {MAX_DIM}",
            a.rows, a.cols, b.rows, b.cols
        )));
    };
    let mut out = ComplexMatrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// Kronecker product of a list of factors, left to right.
pub fn kron_all(factors: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
    let (first, rest) = factors.split_first().ok_or_else(|| Error::Dimension("kron of an empty factor list".into()))?;
    rest.iter().try_fold((*first).clone(), |acc, f| kron(&acc, f))
}

/// Places `op` on subsystem `target` of a register with subsystem dimensions
/// `dims`, identity elsewhere.
pub fn embed(op: &ComplexMatrix, dims: &[usize], target: usize) -> Result<ComplexMatrix> {
    if target >= dims.len() {
        return Err(Error::Dimension(format!("subsystem {target} out of range for dims {dims:?}")));
    }
    if !op.is_square() || op.rows != dims[target] {
        return Err(Error::Dimension(format!(
            "{}x{} operator does not act on subsystem {target} of dimension {}",
            op.rows, op.cols, dims[target]
        )));
    }
    let left: usize = dims[..target].iter().product();
    let right: usize = dims[target + 1..].iter().product();
    let mut out = op.clone();
    if left > 1 {
        out = kron(&ComplexMatrix::identity(left), &out)?;
    }
    if right > 1 {
        out = kron(&out, &ComplexMatrix::identity(right))?;
    }
    Ok(out)
}

/// Traces out every subsystem not listed in `keep`. The kept subsystems stay
/// in their original order.
pub fn partial_trace(rho: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if !rho.is_square() {
        return Err(Error::Dimension(format!("partial trace of non-square {}x{} matrix", rho.rows, rho.cols)));
    }
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::Dimension(format!("invalid subsystem dims {dims:?}")));
    }
    let total: usize = dims.iter().product();
    if total != rho.rows {
        return Err(Error::Dimension(format!(
            "dims {dims:?} multiply to {total}, matrix is {}x{}",
            rho.rows, rho.cols
        )));
    }
    let mut kept = vec![false; dims.len()];
    for &k in keep {
        if k >= dims.len() || kept[k] {
            return Err(Error::Dimension(format!("invalid keep set {keep:?} for dims {dims:?}")));
        }
        kept[k] = true;
    }

    let kept_dims: Vec<usize> = (0..dims.len()).filter(|&s| kept[s]).map(|s| dims[s]).collect();
    let traced_dims: Vec<usize> = (0..dims.len()).filter(|&s| !kept[s]).map(|s| dims[s]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let traced_total: usize = traced_dims.iter().product();

    // Row-major strides of each subsystem in the full index.
    let mut strides = vec![1usize; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }
    let kept_strides: Vec<usize> = (0..dims.len()).filter(|&s| kept[s]).map(|s| strides[s]).collect();
    let traced_strides: Vec<usize> = (0..dims.len()).filter(|&s| !kept[s]).map(|s| strides[s]).collect();

    let offsets = |sub_dims: &[usize], sub_strides: &[usize], count: usize| -> Vec<usize> {
        (0..count)
            .map(|mut idx| {
                let mut off = 0;
                for s in (0..sub_dims.len()).rev() {
                    off += (idx % sub_dims[s]) * sub_strides[s];
                    idx /= sub_dims[s];
                }
                off
            })
            .collect()
    };
    let kept_off = offsets(&kept_dims, &kept_strides, out_dim);
    let traced_off = offsets(&traced_dims, &traced_strides, traced_total);

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for (i, &ri) in kept_off.iter().enumerate() {
        for (j, &cj) in kept_off.iter().enumerate() {
            out[(i, j)] = traced_off.iter().map(|&t| rho[(ri + t, cj + t)]).sum();
        }
    }
    Ok(out)
}

/// ½‖A − B‖₁ for Hermitian A, B.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    let diff = a - b;
    let eig = herm_eig(&diff)?;
    Ok(0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::pauli::{sigma_x, sigma_y, sigma_z};
    use super::*;
    use crate::random::{random_density, random_matrix, rng};

    #[test]
    fn kron_identities() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), ComplexMatrix::identity(4));
        assert_eq!(kron(&sigma_z(), &i2).unwrap(), ComplexMatrix::from_real_diag(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn kron_sigma_y_pair() {
        let yy = kron(&sigma_y(), &sigma_y()).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0, 0.0],
        ]);
        assert_eq!(yy, expected);
    }

    #[test]
    fn kron_rejects_oversized_products() {
        let big = ComplexMatrix::identity(1 << 11);
        assert!(matches!(kron(&big, &big), Err(Error::Dimension(_))));
    }

    #[test]
    fn kron_associative_and_trace_multiplicative() {
        let mut r = rng(7);
        let a = random_matrix(&mut r, 2, 3);
        let b = random_matrix(&mut r, 3, 2);
        let cm = random_matrix(&mut r, 2, 2);
        let left = kron(&kron(&a, &b).unwrap(), &cm).unwrap();
        let right = kron(&a, &kron(&b, &cm).unwrap()).unwrap();
        assert!(left.max_abs_diff(&right) <= 1e-13);

        let a = random_matrix(&mut r, 3, 3);
        let b = random_matrix(&mut r, 4, 4);
        let t = kron(&a, &b).unwrap().trace();
        let expected = a.trace() * b.trace();
        assert!((t - expected).norm() <= 1e-12 * expected.norm().max(1.0));
    }

    #[test]
    fn partial_trace_product_and_bell() {
        let zero_zero = ComplexMatrix::projector(&[ONE, ZERO, ZERO, ZERO]);
        let reduced = partial_trace(&zero_zero, &[2, 2], &[0]).unwrap();
        assert_eq!(reduced, ComplexMatrix::from_real_diag(&[1.0, 0.0]));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = ComplexMatrix::projector(&[re(s), ZERO, ZERO, re(s)]);
        let reduced = partial_trace(&bell, &[2, 2], &[0]).unwrap();
        assert!(reduced.max_abs_diff(&ComplexMatrix::identity(2).scale_re(0.5)) <= 1e-15);
    }

    #[test]
    fn partial_trace_of_kron_scales_by_trace() {
        let mut r = rng(11);
        let a = random_matrix(&mut r, 3, 3);
        let b = random_matrix(&mut r, 2, 2);
        let pt = partial_trace(&kron(&a, &b).unwrap(), &[3, 2], &[0]).unwrap();
        assert!(pt.max_abs_diff(&a.scale(b.trace())) <= 1e-13);
    }

    /// Nested-loop contraction over the last factor of a 2×2×2 register.
    fn trace_last_qubit_oracle(rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(4, 4);
        for a in 0..2 {
            for b in 0..2 {
                for a2 in 0..2 {
                    for b2 in 0..2 {
                        let mut acc = ZERO;
                        for k in 0..2 {
                            acc += rho[(a * 4 + b * 2 + k, a2 * 4 + b2 * 2 + k)];
                        }
                        out[(a * 2 + b, a2 * 2 + b2)] = acc;
                    }
                }
            }
        }
        out
    }

    fn trace_middle_qubit_oracle(rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(4, 4);
        for a in 0..2 {
            for c in 0..2 {
                for a2 in 0..2 {
                    for c2 in 0..2 {
                        let mut acc = ZERO;
                        for k in 0..2 {
                            acc += rho[(a * 4 + k * 2 + c, a2 * 4 + k * 2 + c2)];
                        }
                        out[(a * 2 + c, a2 * 2 + c2)] = acc;
                    }
                }
            }
        }
        out
    }

    #[test]
    fn partial_trace_matches_nested_loop_oracle() {
        let mut r = rng(3);
        for _ in 0..10 {
            let rho = random_density(&mut r, 8);
            let got = partial_trace(&rho, &[2, 2, 2], &[0, 1]).unwrap();
            assert!(got.max_abs_diff(&trace_last_qubit_oracle(&rho)) <= 1e-13);
            let got = partial_trace(&rho, &[2, 2, 2], &[0, 2]).unwrap();
            assert!(got.max_abs_diff(&trace_middle_qubit_oracle(&rho)) <= 1e-13);
        }
    }

    #[test]
    fn partial_trace_dimension_errors() {
        let m = ComplexMatrix::identity(4);
        assert!(partial_trace(&m, &[2, 3], &[0]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[2]).is_err());
        assert!(partial_trace(&ComplexMatrix::zeros(2, 4), &[2], &[0]).is_err());
    }

    #[test]
    fn embed_places_operator() {
        let x = sigma_x();
        let e = embed(&x, &[2, 2, 2], 1).unwrap();
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(e, kron_all(&[&i2, &x, &i2]).unwrap());
        assert!(embed(&x, &[3, 2], 0).is_err());
    }

    #[test]
    fn from_vec_rejects_bad_input() {
        assert!(ComplexMatrix::from_vec(2, 2, vec![ZERO; 3]).is_err());
        assert!(ComplexMatrix::from_vec(0, 2, vec![]).is_err());
        assert!(matches!(ComplexMatrix::from_vec(1, 1, vec![re(f64::NAN)]), Err(Error::NonFinite)));
    }

    #[test]
    fn matrix_power_matches_repeated_product() {
        let mut r = rng(5);
        let a = random_matrix(&mut r, 3, 3).scale_re(0.5);
        let mut expected = ComplexMatrix::identity(3);
        for _ in 0..7 {
            expected = &expected * &a;
        }
        assert!(a.matrix_power(7).max_abs_diff(&expected) <= 1e-12);
    }
}
