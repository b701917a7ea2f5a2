//! The switch control interacting with a stream of thermal ancilla qubits
//! between the switch and the control measurement.
//!
//! Each collision couples the control C to a fresh ancilla E prepared in
//! the Gibbs state of H_E = −ωσ_x/2, through the excitation-exchange
//! interaction V = (g/2)(σ_z⊗σ_z + σ_y⊗σ_y), for a time τ. The target keeps
//! evolving freely under H_S.
//!
//! Two independent routes are provided: [`Collider`] simulates every
//! collision on S⊗C⊗E and traces the ancilla out, while
//! [`analytic_after_n`] writes the n-collision state down directly. The
//! closed form is exact for this interaction, not a weak-coupling
//! approximation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::pauli::{ket_minus, ket_plus, sigma_x, sigma_y, sigma_z};
use crate::matcore::{kron, kron_all, partial_trace, unitary_from_hamiltonian, ComplexMatrix};
use crate::quantum::{f_thermal, gibbs_state, DensityMatrix};
use crate::switch::{assemble_blocks, control_block, Outcome, PostSelection, SwitchOutput};

/// Physical constants of the collision model.
#[derive(Clone, Debug)]
pub struct CollisionParams {
    pub g: f64,
    pub tau: f64,
    pub omega: f64,
    /// Inverse ancilla temperature; `f64::INFINITY` for the ground state.
    pub beta_e: f64,
    /// Free Hamiltonian of the target.
    pub h_s: ComplexMatrix,
}

impl CollisionParams {
    pub fn new(g: f64, tau: f64, omega: f64, beta_e: f64, h_s: ComplexMatrix) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::OutOfRange { name: "g", value: g, range: "finite" });
        }
        if !(tau.is_finite() && tau >= 0.0) {
            return Err(Error::OutOfRange { name: "tau", value: tau, range: "[0, inf)" });
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::OutOfRange { name: "omega", value: omega, range: "(0, inf)" });
        }
        if beta_e.is_nan() || beta_e < 0.0 {
            return Err(Error::OutOfRange { name: "beta", value: beta_e, range: "[0, inf]" });
        }
        if !h_s.is_hermitian(1e-10) {
            return Err(Error::NotHermitian { deviation: h_s.hermiticity_error() });
        }
        Ok(Self { g, tau, omega, beta_e, h_s })
    }

    pub fn g_tau(&self) -> f64 {
        self.g * self.tau
    }

    pub fn f_e(&self) -> f64 {
        f_thermal(self.beta_e, self.omega)
    }

    pub fn with_beta(&self, beta_e: f64) -> Self {
        Self { beta_e, ..self.clone() }
    }

    pub fn target_dim(&self) -> usize {
        self.h_s.rows()
    }
}

/// −ωσ_x/2, shared by the control and every ancilla.
pub fn qubit_hamiltonian(omega: f64) -> ComplexMatrix {
    sigma_x().scale_re(-0.5 * omega)
}

/// V = (g/2)(σ_z⊗σ_z + σ_y⊗σ_y) on C⊗E.
pub fn interaction_hamiltonian(g: f64) -> ComplexMatrix {
    let zz = kron(&sigma_z(), &sigma_z()).expect("2x2 factors");
    let yy = kron(&sigma_y(), &sigma_y()).expect("2x2 factors");
    (&zz + &yy).scale_re(0.5 * g)
}

/// The same interaction written as an exchange of excitations in the σ_x
/// eigenbasis: g(|+⟩⟨−| ⊗ |−⟩⟨+| + h.c.).
pub fn interaction_hamiltonian_exchange(g: f64) -> ComplexMatrix {
    let (p, m) = (ket_plus(), ket_minus());
    let flip = kron(&ComplexMatrix::outer(&p, &m), &ComplexMatrix::outer(&m, &p)).expect("2x2 factors");
    (&flip + &flip.dagger()).scale_re(g)
}

/// Brute-force collision step on S⊗C⊗E with the full unitary
/// exp(−iτ(H_S + H_C + H_E + V)) built once up front.
#[derive(Clone, Debug)]
pub struct Collider {
    unitary: ComplexMatrix,
    ancilla: DensityMatrix,
    target_dim: usize,
}

impl Collider {
    pub fn new(params: &CollisionParams) -> Result<Self> {
        let d_s = params.target_dim();
        let i_s = ComplexMatrix::identity(d_s);
        let i2 = ComplexMatrix::identity(2);
        let h_q = qubit_hamiltonian(params.omega);
        let h_tot = [
            kron_all(&[&params.h_s, &i2, &i2])?,
            kron_all(&[&i_s, &h_q, &i2])?,
            kron_all(&[&i_s, &i2, &h_q])?,
            kron(&i_s, &interaction_hamiltonian(params.g))?,
        ]
        .iter()
        .fold(ComplexMatrix::zeros(4 * d_s, 4 * d_s), |acc, h| &acc + h);
        let unitary = unitary_from_hamiltonian(&h_tot, params.tau)?;
        let ancilla = gibbs_state(&h_q, params.beta_e)?;
        Ok(Self { unitary, ancilla, target_dim: d_s })
    }

    pub fn ancilla(&self) -> &DensityMatrix {
        &self.ancilla
    }

    /// ρ_SC ↦ tr_E{U (ρ_SC ⊗ Θ_E) U†}
    pub fn collide(&self, rho_sc: &DensityMatrix) -> Result<DensityMatrix> {
        if rho_sc.dim() != 2 * self.target_dim || rho_sc.dims().last() != Some(&2) {
            return Err(Error::Dimension(format!(
                "collider expects an S⊗C state of dimension {}, got dims {:?}",
                2 * self.target_dim,
                rho_sc.dims()
            )));
        }
        let full = kron(rho_sc.matrix(), self.ancilla.matrix())?.conjugate_by(&self.unitary);
        let reduced = partial_trace(&full, &[2 * self.target_dim, 2], &[0])?;
        DensityMatrix::new(reduced.hermitize(), rho_sc.dims().to_vec())
    }

    /// States after 0, 1, ..., `n` collisions.
    pub fn trajectory(&self, start: &DensityMatrix, n: u32) -> Result<Vec<DensityMatrix>> {
        let mut states = Vec::with_capacity(n as usize + 1);
        states.push(start.clone());
        for k in 0..n as usize {
            let next = self.collide(&states[k])?;
            states.push(next);
        }
        Ok(states)
    }
}

/// One collision, building the unitary from scratch.
pub fn collide_once(rho_sc: &DensityMatrix, params: &CollisionParams) -> Result<DensityMatrix> {
    Collider::new(params)?.collide(rho_sc)
}

/// Scalar weights of the n-collision state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticCoeffs {
    pub n: u32,
    pub b_def_plus: f64,
    pub b_def_minus: f64,
    pub b_indef_plus: f64,
    pub b_indef_minus: f64,
    /// e^{inτω} cosⁿ(gτ)
    pub coherence_factor: Complex64,
}

impl AnalyticCoeffs {
    pub fn new(n: u32, f_e: f64, g_tau: f64, tau_omega: f64) -> Self {
        let cos = g_tau.cos();
        let cos_2n = (cos * cos).powi(n as i32);
        let decay = f_e * (1.0 - cos_2n);
        Self {
            n,
            b_def_plus: 1.0 + decay,
            b_def_minus: 1.0 - decay,
            b_indef_plus: cos_2n,
            b_indef_minus: -cos_2n,
            coherence_factor: Complex64::from_polar(cos.powi(n as i32), n as f64 * tau_omega),
        }
    }

    pub fn for_params(n: u32, params: &CollisionParams) -> Self {
        Self::new(n, params.f_e(), params.g_tau(), params.tau * params.omega)
    }

    pub fn b_def(&self, outcome: Outcome) -> f64 {
        match outcome {
            Outcome::Plus => self.b_def_plus,
            Outcome::Minus => self.b_def_minus,
        }
    }

    pub fn b_indef(&self, outcome: Outcome) -> f64 {
        match outcome {
            Outcome::Plus => self.b_indef_plus,
            Outcome::Minus => self.b_indef_minus,
        }
    }
}

/// Target blocks B_xy(n) of the n-collision state.
#[derive(Clone, Debug)]
pub struct OpenBlocks {
    pub pp: ComplexMatrix,
    pub mm: ComplexMatrix,
    pub pm: ComplexMatrix,
}

impl OpenBlocks {
    pub fn diagonal(&self, outcome: Outcome) -> &ComplexMatrix {
        match outcome {
            Outcome::Plus => &self.pp,
            Outcome::Minus => &self.mm,
        }
    }
}

/// B_±±(n) = ½b_def^±·U_Sⁿ A_def U_S†ⁿ + ½b_indef^±·U_Sⁿ A_indef U_S†ⁿ and
/// B_+−(n) = e^{inτω} cosⁿ(gτ)·U_Sⁿ A_+− U_S†ⁿ.
///
/// U_Sⁿ is evaluated as exp(−i·nτ·H_S) in one step, so the result depends
/// only on `n` and not on any earlier evaluation.
pub fn analytic_blocks(sw: &SwitchOutput, n: u32, params: &CollisionParams) -> Result<OpenBlocks> {
    if params.target_dim() != sw.target_dim() {
        return Err(Error::Dimension(format!(
            "H_S is {}x{}, switch target has dimension {}",
            params.h_s.rows(),
            params.h_s.cols(),
            sw.target_dim()
        )));
    }
    let k = AnalyticCoeffs::for_params(n, params);
    let u = unitary_from_hamiltonian(&params.h_s, n as f64 * params.tau)?;
    let def = sw.a_def.mat.conjugate_by(&u);
    let indef = sw.a_indef.conjugate_by(&u);
    let diag = |o: Outcome| &def.scale_re(0.5 * k.b_def(o)) + &indef.scale_re(0.5 * k.b_indef(o));
    Ok(OpenBlocks {
        pp: diag(Outcome::Plus),
        mm: diag(Outcome::Minus),
        pm: sw.a_pm.conjugate_by(&u).scale(k.coherence_factor),
    })
}

/// The S⊗C state after `n` collisions, assembled from [`analytic_blocks`].
pub fn analytic_after_n(sw: &SwitchOutput, n: u32, params: &CollisionParams) -> Result<DensityMatrix> {
    let b = analytic_blocks(sw, n, params)?;
    let joint = assemble_blocks(&b.pp, &b.pm, &b.pm.dagger(), &b.mm)?;
    DensityMatrix::new(joint.hermitize(), sw.joint.dims().to_vec())
}

/// Measures the control of an S⊗C state in {|+⟩, |−⟩}.
pub fn postselect_after_n(state_n: &DensityMatrix, outcome: Outcome) -> Result<PostSelection> {
    let dims = state_n.dims();
    if dims.last() != Some(&2) {
        return Err(Error::Dimension(format!("no trailing control qubit in dims {dims:?}")));
    }
    let block = control_block(state_n.matrix(), outcome, outcome)?;
    PostSelection::from_block(outcome, &block, dims[..dims.len() - 1].to_vec())
}

/// Limit of many collisions: U_Sⁿ A_def U_S†ⁿ ⊗ Θ_β. The target factor
/// keeps rotating under H_S, so it is given in the frame of `frame_n`
/// collisions.
pub fn asymptotic_state(sw: &SwitchOutput, params: &CollisionParams, frame_n: u32) -> Result<DensityMatrix> {
    let u = unitary_from_hamiltonian(&params.h_s, frame_n as f64 * params.tau)?;
    let target = DensityMatrix::new(sw.a_def.mat.conjugate_by(&u).hermitize(), sw.target_dims().to_vec())?;
    let thermal = gibbs_state(&qubit_hamiltonian(params.omega), params.beta_e)?;
    target.tensor(&thermal)
}
