//! Two-map quantum switch with a qubit control.
//!
//! The control is the last tensor factor: joint states live on S ⊗ C. With
//! the control prepared in |+⟩ the output decomposes into blocks
//!
//! ```text
//! ρ_SC = Σ_{x,y∈{+,−}} A_xy ⊗ |x⟩⟨y|,   A_xy = ¼ Σ_ij [M_i,N_j]_x ρ_S [M_i,N_j]_y†
//! ```
//!
//! where `[X,Y]_± = XY ± YX`. The diagonal blocks split into the ordered
//! mixture `A_def` and the order-interference term `A_indef` as
//! `A_±± = ½A_def ± ½A_indef`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::pauli::{ket0, ket1, ket_minus, ket_plus};
use crate::matcore::{kron, ComplexMatrix};
use crate::quantum::{DensityMatrix, KrausChannel, UnnormalizedOperator};

/// Outcomes with probability at or below this leave the conditional state
/// undefined.
pub const UNDEFINED_PROBABILITY: f64 = 1e-12;

/// Control measurement outcome in the {|+⟩, |−⟩} basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const ALL: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn ket(self) -> Vec<Complex64> {
        match self {
            Outcome::Plus => ket_plus(),
            Outcome::Minus => ket_minus(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Plus => "plus",
            Outcome::Minus => "minus",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" | "+" => Ok(Outcome::Plus),
            "minus" | "-" => Ok(Outcome::Minus),
            other => Err(Error::Config(format!("unknown outcome {other:?} (expected plus|minus)"))),
        }
    }
}

/// Everything the switch produces for a |+⟩ control.
#[derive(Clone, Debug)]
pub struct SwitchOutput {
    pub joint: DensityMatrix,
    pub a_def: UnnormalizedOperator,
    /// Hermitian but in general indefinite.
    pub a_indef: ComplexMatrix,
    pub a_pp: UnnormalizedOperator,
    pub a_mm: UnnormalizedOperator,
    /// A_+− block; A_−+ is its adjoint.
    pub a_pm: ComplexMatrix,
}

impl SwitchOutput {
    pub fn a_mp(&self) -> ComplexMatrix {
        self.a_pm.dagger()
    }

    pub fn target_dims(&self) -> &[usize] {
        let dims = self.joint.dims();
        &dims[..dims.len() - 1]
    }

    pub fn target_dim(&self) -> usize {
        self.a_def.mat.rows()
    }

    pub fn block(&self, outcome: Outcome) -> &UnnormalizedOperator {
        match outcome {
            Outcome::Plus => &self.a_pp,
            Outcome::Minus => &self.a_mm,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PostSelection {
    pub outcome: Outcome,
    pub probability: f64,
    /// `None` when the outcome has (numerically) zero probability.
    pub conditional: Option<DensityMatrix>,
}

impl PostSelection {
    /// Renormalizes a sub-normalized target block.
    pub fn from_block(outcome: Outcome, block: &ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let probability = block.trace().re;
        let conditional = if probability > UNDEFINED_PROBABILITY {
            Some(DensityMatrix::from_unnormalized(block, dims)?)
        } else {
            None
        };
        Ok(Self { outcome, probability: probability.clamp(0.0, 1.0), conditional })
    }

    pub fn is_defined(&self) -> bool {
        self.conditional.is_some()
    }
}

/// W = (M·N) ⊗ |0⟩⟨0| + (N·M) ⊗ |1⟩⟨1|
pub fn controlled_kraus(m: &ComplexMatrix, n: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() || !n.is_square() || m.rows() != n.rows() {
        return Err(Error::Dimension(format!(
            "controlled Kraus needs equal square operators, got {}x{} and {}x{}",
            m.rows(),
            m.cols(),
            n.rows(),
            n.cols()
        )));
    }
    let p0 = ComplexMatrix::projector(&ket0());
    let p1 = ComplexMatrix::projector(&ket1());
    Ok(&kron(&(m * n), &p0)? + &kron(&(n * m), &p1)?)
}

/// Σ_ij W_ij (ρ_S ⊗ ρ_C) W_ij† for an arbitrary control state.
pub fn switch_joint(
    m_ch: &KrausChannel,
    n_ch: &KrausChannel,
    rho_s: &DensityMatrix,
    rho_c: &DensityMatrix,
) -> Result<DensityMatrix> {
    check_channels(m_ch, n_ch, rho_s)?;
    if rho_c.dim() != 2 {
        return Err(Error::Dimension(format!("control must be a qubit, got dimension {}", rho_c.dim())));
    }
    let input = rho_s.tensor(rho_c)?;
    let d = input.dim();
    let mut out = ComplexMatrix::zeros(d, d);
    for m in m_ch.kraus() {
        for n in n_ch.kraus() {
            let w = controlled_kraus(m, n)?;
            out = &out + &input.matrix().conjugate_by(&w);
        }
    }
    DensityMatrix::new(out.hermitize(), input.dims().to_vec())
}

fn check_channels(m_ch: &KrausChannel, n_ch: &KrausChannel, rho_s: &DensityMatrix) -> Result<()> {
    if m_ch.dim() != rho_s.dim() || n_ch.dim() != rho_s.dim() {
        return Err(Error::Dimension(format!(
            "channels act on dimensions {} and {}, target has dimension {}",
            m_ch.dim(),
            n_ch.dim(),
            rho_s.dim()
        )));
    }
    Ok(())
}

/// Runs the switch with the control prepared in |+⟩.
pub fn run_switch(m_ch: &KrausChannel, n_ch: &KrausChannel, rho_s: &DensityMatrix) -> Result<SwitchOutput> {
    check_channels(m_ch, n_ch, rho_s)?;
    let d = rho_s.dim();
    let rho = rho_s.matrix();

    let mut a_def = ComplexMatrix::zeros(d, d);
    let mut a_indef = ComplexMatrix::zeros(d, d);
    let mut blocks = [
        [ComplexMatrix::zeros(d, d), ComplexMatrix::zeros(d, d)],
        [ComplexMatrix::zeros(d, d), ComplexMatrix::zeros(d, d)],
    ];
    for m in m_ch.kraus() {
        for n in n_ch.kraus() {
            let mn = m * n;
            let nm = n * m;
            let mn_rho = &mn * rho;
            let nm_rho = &nm * rho;
            a_def = &a_def + &(&(&mn_rho * &mn.dagger()) + &(&nm_rho * &nm.dagger()));
            a_indef = &a_indef + &(&(&mn_rho * &nm.dagger()) + &(&nm_rho * &mn.dagger()));

            // [M,N]_+ and [M,N]_−
            let brackets = [&mn + &nm, &mn - &nm];
            for (x, bx) in brackets.iter().enumerate() {
                let left = bx * rho;
                for (y, by) in brackets.iter().enumerate() {
                    blocks[x][y] = &blocks[x][y] + &(&left * &by.dagger());
                }
            }
        }
    }
    let a_def = a_def.scale_re(0.5);
    let a_indef = a_indef.scale_re(0.5);
    let [[a_pp, a_pm], [_, a_mm]] = blocks.map(|row| row.map(|b| b.scale_re(0.25)));

    let plus = DensityMatrix::pure(&ket_plus(), vec![2])?;
    let joint = switch_joint(m_ch, n_ch, rho_s, &plus)?;

    Ok(SwitchOutput {
        joint,
        a_def: UnnormalizedOperator::new(a_def.hermitize())?,
        a_indef: a_indef.hermitize(),
        a_pp: UnnormalizedOperator::new(a_pp.hermitize())?,
        a_mm: UnnormalizedOperator::new(a_mm.hermitize())?,
        a_pm,
    })
}

/// p(±) = tr A_±± and ρ_{S,±} = A_±±/p(±).
pub fn postselect(out: &SwitchOutput, outcome: Outcome) -> Result<PostSelection> {
    PostSelection::from_block(outcome, &out.block(outcome).mat, out.target_dims().to_vec())
}

/// Σ_xy B_xy ⊗ |x⟩⟨y| over the {|+⟩, |−⟩} control basis.
pub fn assemble_blocks(
    pp: &ComplexMatrix,
    pm: &ComplexMatrix,
    mp: &ComplexMatrix,
    mm: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let (p, m) = (ket_plus(), ket_minus());
    let terms = [
        kron(pp, &ComplexMatrix::outer(&p, &p))?,
        kron(pm, &ComplexMatrix::outer(&p, &m))?,
        kron(mp, &ComplexMatrix::outer(&m, &p))?,
        kron(mm, &ComplexMatrix::outer(&m, &m))?,
    ];
    Ok(terms[1..].iter().fold(terms[0].clone(), |acc, t| &acc + t))
}

/// (1_S ⊗ ⟨x|) ρ_SC (1_S ⊗ |y⟩), control as the last qubit.
pub fn control_block(joint: &ComplexMatrix, x: Outcome, y: Outcome) -> Result<ComplexMatrix> {
    if !joint.is_square() || !joint.rows().is_multiple_of(2) {
        return Err(Error::Dimension(format!("{}x{} matrix has no trailing qubit factor", joint.rows(), joint.cols())));
    }
    let d = joint.rows() / 2;
    let (kx, ky) = (x.ket(), y.ket());
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    acc += kx[a].conj() * joint[(2 * i + a, 2 * j + b)] * ky[b];
                }
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}
