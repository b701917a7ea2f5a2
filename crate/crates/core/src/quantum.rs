//! Density matrices, Kraus channels, projective observables, monitoring maps
//! and Gibbs states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::pauli::{ket0, ket1, ket_minus, ket_plus};
use crate::matcore::{embed, herm_eig, kron, partial_trace, re, ComplexMatrix, PSD_REJECT};

/// Tolerance for Hermiticity, unit trace and positivity of states.
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance for Σ K†K = 1.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Tolerance for projector orthogonality and completeness.
pub const PROJECTOR_TOL: f64 = 1e-12;

/// A validated quantum state with its tensor-factor layout.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&mat, &dims)?;
        let herr = mat.hermiticity_error();
        if herr > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herr:.3e})")));
        }
        let tr = mat.trace();
        if (tr - re(1.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = min_eigenvalue(&mat)?;
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { mat, dims })
    }

    /// Normalizes a positive operator by its trace.
    ///
    /// Post-selected blocks with small weight amplify round-off when divided
    /// by their trace; eigenvalues in [−1e−8, 0) are clamped and the state
    /// is rebuilt from its spectrum in that case.
    pub fn from_unnormalized(mat: &ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(mat, &dims)?;
        let weight = mat.trace().re;
        if weight <= 0.0 || !weight.is_finite() {
            return Err(Error::InvalidState(format!("cannot normalize operator of trace {weight}")));
        }
        let normalized = mat.scale_re(1.0 / weight).hermitize();
        let eig = herm_eig(&normalized)?;
        let min = eig.eigenvalues.last().copied().unwrap_or(0.0);
        if min >= -STATE_TOL {
            return Self::new(normalized, dims);
        }
        if min < -PSD_REJECT {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        let clamped = eig.map_spectrum(|l| re(l.max(0.0)));
        let t = clamped.trace().re;
        Self::new(clamped.scale_re(1.0 / t).hermitize(), dims)
    }

    pub fn pure(psi: &[Complex64], dims: Vec<usize>) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(ComplexMatrix::projector(psi), dims)
    }

    /// 1/d on a single subsystem of dimension d.
    pub fn maximally_mixed(d: usize) -> Self {
        Self { mat: ComplexMatrix::identity(d).scale_re(1.0 / d as f64), dims: vec![d] }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let mat = kron(&self.mat, &other.mat)?;
        let dims = self.dims.iter().chain(&other.dims).copied().collect();
        Ok(Self { mat, dims })
    }

    /// Reduced state on the subsystems in `keep`.
    pub fn reduce(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let mat = partial_trace(&self.mat, &self.dims, keep)?;
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        let dims = kept.iter().map(|&k| self.dims[k]).collect();
        Ok(Self { mat, dims })
    }

    /// Same matrix, relabelled tensor layout.
    pub fn with_dims(self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&self.mat, &dims)?;
        Ok(Self { mat: self.mat, dims })
    }
}

fn check_dims(mat: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    if !mat.is_square() {
        return Err(Error::Dimension(format!("{}x{} state is not square", mat.rows(), mat.cols())));
    }
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || total != mat.rows() {
        return Err(Error::Dimension(format!("dims {dims:?} do not match a {}x{} state", mat.rows(), mat.cols())));
    }
    Ok(())
}

fn min_eigenvalue(mat: &ComplexMatrix) -> Result<f64> {
    Ok(herm_eig(mat)?.eigenvalues.last().copied().unwrap_or(0.0))
}

/// A positive operator of trace ≤ 1, such as a post-selected block before
/// renormalization. `weight` is its trace.
#[derive(Clone, Debug, PartialEq)]
pub struct UnnormalizedOperator {
    pub mat: ComplexMatrix,
    pub weight: f64,
}

impl UnnormalizedOperator {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let herr = mat.hermiticity_error();
        if herr > STATE_TOL {
            return Err(Error::InvalidState(format!("operator not Hermitian ({herr:.3e})")));
        }
        let min = min_eigenvalue(&mat)?;
        if min < -STATE_TOL {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        let weight = mat.trace().re;
        Ok(Self { mat, weight })
    }
}

/// A CPTP map in Kraus form.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    kraus: Vec<ComplexMatrix>,
    label: String,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let first =
            kraus.first().ok_or_else(|| Error::Dimension(format!("channel {label:?} has no Kraus operators")))?;
        let d = first.rows();
        if kraus.iter().any(|k| !k.is_square() || k.rows() != d) {
            return Err(Error::Dimension(format!("Kraus operators of {label:?} are not all {d}x{d}")));
        }
        let sum = kraus.iter().fold(ComplexMatrix::zeros(d, d), |acc, k| &acc + &(&k.dagger() * k));
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if deviation > COMPLETENESS_TOL {
            return Err(Error::InvalidChannel { label, deviation });
        }
        Ok(Self { kraus, label })
    }

    pub fn identity(d: usize) -> Self {
        Self { kraus: vec![ComplexMatrix::identity(d)], label: "identity".into() }
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].rows()
    }

    /// Σ K·X·K† on a bare matrix.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.kraus.iter().fold(ComplexMatrix::zeros(x.rows(), x.cols()), |acc, k| &acc + &x.conjugate_by(k))
    }
}

pub fn apply_channel(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if ch.dim() != rho.dim() {
        return Err(Error::Dimension(format!(
            "channel {:?} acts on dimension {}, state has dimension {}",
            ch.label,
            ch.dim(),
            rho.dim()
        )));
    }
    DensityMatrix::new(ch.apply_matrix(rho.matrix()), rho.dims().to_vec())
}

/// A complete set of orthogonal projectors, i.e. the spectral projectors of
/// an observable.
#[derive(Clone, Debug)]
pub struct ProjectorSet {
    projectors: Vec<ComplexMatrix>,
    labels: Vec<String>,
}

impl ProjectorSet {
    pub fn new(projectors: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        if projectors.is_empty() || projectors.len() != labels.len() {
            return Err(Error::InvalidProjectors(format!(
                "{} projectors with {} labels",
                projectors.len(),
                labels.len()
            )));
        }
        let d = projectors[0].rows();
        if projectors.iter().any(|p| !p.is_square() || p.rows() != d) {
            return Err(Error::InvalidProjectors("projectors differ in dimension".into()));
        }
        for (a, pa) in projectors.iter().enumerate() {
            for (b, pb) in projectors.iter().enumerate() {
                let prod = pa * pb;
                let expected = if a == b { pa.clone() } else { ComplexMatrix::zeros(d, d) };
                let dev = prod.max_abs_diff(&expected);
                if dev > PROJECTOR_TOL {
                    return Err(Error::InvalidProjectors(format!("O_{a}·O_{b} deviates from δ·O by {dev:.3e}")));
                }
            }
        }
        let sum = projectors.iter().fold(ComplexMatrix::zeros(d, d), |acc, p| &acc + p);
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if dev > PROJECTOR_TOL {
            return Err(Error::InvalidProjectors(format!("Σ O deviates from 1 by {dev:.3e}")));
        }
        Ok(Self { projectors, labels })
    }

    /// Rank-one projectors onto the given orthonormal basis vectors.
    pub fn from_basis(basis: &[Vec<Complex64>], labels: &[&str]) -> Result<Self> {
        Self::new(
            basis.iter().map(|v| ComplexMatrix::projector(v)).collect(),
            labels.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].rows()
    }
}

/// Nonselective projective measurement of `obs` on one subsystem:
/// Σ_α (O_α ⊗ 1) ρ (O_α ⊗ 1).
pub fn dephase(rho: &DensityMatrix, obs: &ProjectorSet, subsystem: usize) -> Result<DensityMatrix> {
    let mut out = ComplexMatrix::zeros(rho.dim(), rho.dim());
    for p in obs.projectors() {
        let full = embed(p, rho.dims(), subsystem)?;
        out = &out + &rho.matrix().conjugate_by(&full);
    }
    DensityMatrix::new(out, rho.dims().to_vec())
}

/// Kraus form of the monitoring map (1 − ε)ρ + ε·Φ_O(ρ):
/// K₀ = √(1−ε)·1, K_j = √ε·(O_j ⊗ 1).
pub fn monitoring_channel(
    obs: &ProjectorSet,
    epsilon: f64,
    subsystem: usize,
    total_dims: &[usize],
) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::OutOfRange { name: "epsilon", value: epsilon, range: "[0, 1]" });
    }
    let total: usize = total_dims.iter().product();
    let mut kraus = vec![ComplexMatrix::identity(total).scale_re((1.0 - epsilon).sqrt())];
    for p in obs.projectors() {
        kraus.push(embed(p, total_dims, subsystem)?.scale_re(epsilon.sqrt()));
    }
    let label = format!("monitor[{}]({epsilon})", obs.labels().join(","));
    KrausChannel::new(kraus, label)
}

/// exp(−βH)/Z. `beta = f64::INFINITY` gives the uniform mixture over the
/// ground space.
pub fn gibbs_state(h: &ComplexMatrix, beta: f64) -> Result<DensityMatrix> {
    if beta.is_nan() || beta < 0.0 {
        return Err(Error::OutOfRange { name: "beta", value: beta, range: "[0, inf]" });
    }
    let eig = herm_eig(h)?;
    let e_min = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let scale = eig.eigenvalues.iter().map(|e| e.abs()).fold(1.0, f64::max);
    // Energies measured from the ground state so exp never overflows.
    let weight = |e: f64| {
        if beta.is_infinite() {
            if e - e_min <= 1e-12 * scale {
                1.0
            } else {
                0.0
            }
        } else {
            (-beta * (e - e_min)).exp()
        }
    };
    let z: f64 = eig.eigenvalues.iter().map(|&e| weight(e)).sum();
    let mat = eig.map_spectrum(|e| re(weight(e) / z));
    DensityMatrix::new(mat.hermitize(), vec![h.rows()])
}

/// Thermal polarization tanh(βω/2) of a qubit with H = −ωσ_x/2.
pub fn f_thermal(beta: f64, omega: f64) -> f64 {
    if beta.is_infinite() {
        1.0
    } else {
        (0.5 * beta * omega).tanh()
    }
}

/// The σ_z eigenbasis {|0⟩, |1⟩} and the σ_x eigenbasis {|+⟩, |−⟩}.
pub fn mub_qubit_bases() -> (ProjectorSet, ProjectorSet) {
    let z = ProjectorSet::from_basis(&[ket0(), ket1()], &["0", "1"]).expect("z basis");
    let x = ProjectorSet::from_basis(&[ket_plus(), ket_minus()], &["+", "-"]).expect("x basis");
    (z, x)
}

/// Largest deviation of |⟨a_i|b_j⟩|² from 1/d over two rank-one bases.
pub fn unbiasedness_error(a: &ProjectorSet, b: &ProjectorSet) -> f64 {
    let d = a.dim() as f64;
    let mut worst = 0.0f64;
    for pa in a.projectors() {
        for pb in b.projectors() {
            // tr(P_a P_b) = |⟨a|b⟩|² for rank-one projectors
            let overlap = (pa * pb).trace().re;
            worst = worst.max((overlap - 1.0 / d).abs());
        }
    }
    worst
}
