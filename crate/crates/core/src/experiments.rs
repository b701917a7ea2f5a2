//! Bell pair under two mutually unbiased monitorings in a switch whose
//! control is exposed to a thermal collisional environment: sweeps of
//! post-selected concurrence over monitoring strength, collision count,
//! environment temperature and control outcome.

use std::fmt;
use std::str::FromStr;

use crate::entanglement::concurrence;
use crate::error::{Error, Result};
use crate::matcore::pauli::sigma_z;
use crate::matcore::{kron, re, trace_distance, unitary_from_hamiltonian, ComplexMatrix, ZERO};
use crate::opencontrol::{analytic_after_n, analytic_blocks, Collider, CollisionParams};
use crate::quantum::{monitoring_channel, mub_qubit_bases, DensityMatrix, ProjectorSet};
use crate::switch::{run_switch, Outcome, PostSelection, SwitchOutput};

/// Concurrence at or below this is treated as zero when locating thresholds.
pub const ZERO_CONCURRENCE: f64 = 1e-12;

/// (|00⟩ + |11⟩)/√2
pub fn bell_state() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::pure(&[re(s), ZERO, ZERO, re(s)], vec![2, 2]).expect("normalized")
}

/// ω_S(σ_z⊗1 + 1⊗σ_z)
pub fn h_ab(omega_s: f64) -> ComplexMatrix {
    let (z, id) = (sigma_z(), ComplexMatrix::identity(2));
    (&kron(&z, &id).expect("2x2") + &kron(&id, &z).expect("2x2")).scale_re(omega_s)
}

/// Switch of a σ_z monitoring and a σ_x monitoring, both of strength ε on
/// qubit A, acting on the Bell pair.
pub fn bell_mub_switch(epsilon: f64) -> Result<SwitchOutput> {
    let (z, x) = mub_qubit_bases();
    bell_mub_switch_with(epsilon, &z, &x)
}

/// As [`bell_mub_switch`] with arbitrary measured bases.
pub fn bell_mub_switch_with(epsilon: f64, first: &ProjectorSet, second: &ProjectorSet) -> Result<SwitchOutput> {
    let m = monitoring_channel(first, epsilon, 0, &[2, 2])?;
    let n = monitoring_channel(second, epsilon, 0, &[2, 2])?;
    run_switch(&m, &n, &bell_state())
}

/// Closed-form blocks of [`bell_mub_switch`] as functions of ε.
pub mod closed_form {
    use crate::matcore::ComplexMatrix;

    fn corners(e: f64, scale: f64, inner_diag: f64, inner_off: f64) -> ComplexMatrix {
        let d = 2.0 - e;
        let o = (e - 2.0) * (e - 1.0);
        ComplexMatrix::from_real_rows(&[
            [d, 0.0, 0.0, o],
            [0.0, inner_diag, inner_off, 0.0],
            [0.0, inner_off, inner_diag, 0.0],
            [o, 0.0, 0.0, d],
        ])
        .scale_re(scale)
    }

    pub fn a_pp(e: f64) -> ComplexMatrix {
        let inner = -0.5 * (e - 2.0) * e;
        corners(e, 0.25, inner, inner)
    }

    pub fn a_mm(e: f64) -> ComplexMatrix {
        let q = e * e;
        ComplexMatrix::from_real_rows(&[
            [0.0, 0.0, 0.0, 0.0],
            [0.0, q, -q, 0.0],
            [0.0, -q, q, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ])
        .scale_re(0.125)
    }

    /// A_++ + A_−−
    pub fn sum(e: f64) -> ComplexMatrix {
        corners(e, 0.25, e, e * (1.0 - e))
    }

    /// A_++ − A_−−
    pub fn difference(e: f64) -> ComplexMatrix {
        corners(e, 0.25, e * (1.0 - e), e)
    }
}

/// Largest entrywise deviation of a switch output from the closed forms.
pub fn closed_form_deviation(sw: &SwitchOutput, e: f64) -> f64 {
    let (pp, mm) = (&sw.a_pp.mat, &sw.a_mm.mat);
    [
        pp.max_abs_diff(&closed_form::a_pp(e)),
        mm.max_abs_diff(&closed_form::a_mm(e)),
        (pp + mm).max_abs_diff(&closed_form::sum(e)),
        (pp - mm).max_abs_diff(&closed_form::difference(e)),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Analytic,
    BruteForce,
    Both,
}

impl Engine {
    fn kinds(self) -> &'static [EngineKind] {
        match self {
            Engine::Analytic => &[EngineKind::Analytic],
            Engine::BruteForce => &[EngineKind::BruteForce],
            Engine::Both => &[EngineKind::Analytic, EngineKind::BruteForce],
        }
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Engine::Analytic),
            "bruteforce" => Ok(Engine::BruteForce),
            "both" => Ok(Engine::Both),
            other => Err(Error::Config(format!("unknown engine {other:?} (expected analytic|bruteforce|both)"))),
        }
    }
}

/// The engine that produced a particular record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineKind {
    Analytic,
    BruteForce,
}

impl EngineKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineKind::Analytic => "analytic",
            EngineKind::BruteForce => "bruteforce",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordKind {
    Post(Outcome),
    Definite,
}

impl RecordKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordKind::Post(o) => o.as_str(),
            RecordKind::Definite => "definite",
        }
    }
}

impl fmt::Display for RecordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RecordKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "definite" => Ok(RecordKind::Definite),
            other => other
                .parse()
                .map(RecordKind::Post)
                .map_err(|_| Error::Config(format!("unknown outcome {other:?} (expected plus|minus|definite)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonGrid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl EpsilonGrid {
    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.max } else { self.min + (self.max - self.min) * (i as f64 / last) })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub epsilon: EpsilonGrid,
    pub collision_counts: Vec<u32>,
    /// `f64::INFINITY` for a zero-temperature environment.
    pub betas: Vec<f64>,
    pub g_tau: f64,
    pub omega: f64,
    pub omega_s: f64,
    /// Collision duration. Only the product gτ enters the concurrence, so
    /// this merely fixes g = g_tau/tau and the free-evolution frame.
    pub tau: f64,
    pub postselections: Vec<Outcome>,
    pub include_definite_baseline: bool,
    pub engine: Engine,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            epsilon: EpsilonGrid { min: 0.0, max: 1.0, steps: 201 },
            collision_counts: vec![0, 1, 2, 3, 5, 10, 20, 50],
            betas: vec![0.1, 5.0],
            g_tau: 0.2,
            omega: 1.0,
            omega_s: 1.0,
            tau: 0.2,
            postselections: vec![Outcome::Plus, Outcome::Minus],
            include_definite_baseline: true,
            engine: Engine::Analytic,
        }
    }
}

fn bad(field: &str, msg: impl fmt::Display) -> Error {
    Error::Config(format!("{field}: {msg}"))
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let EpsilonGrid { min, max, steps } = self.epsilon;
        if !(0.0..=1.0).contains(&min) {
            return Err(bad("epsilon.min", format!("{min} is outside [0, 1]")));
        }
        if !(0.0..=1.0).contains(&max) {
            return Err(bad("epsilon.max", format!("{max} is outside [0, 1]")));
        }
        if min > max {
            return Err(bad("epsilon.max", format!("{max} is below epsilon.min = {min}")));
        }
        if steps < 2 {
            return Err(bad("epsilon.steps", format!("{steps} is below the minimum of 2")));
        }
        if self.collision_counts.is_empty() {
            return Err(bad("collision_counts", "must not be empty"));
        }
        if self.betas.is_empty() {
            return Err(bad("betas", "must not be empty"));
        }
        if let Some(b) = self.betas.iter().find(|b| b.is_nan() || **b < 0.0) {
            return Err(bad("betas", format!("{b} is not in [0, inf]")));
        }
        if !(self.g_tau.is_finite() && self.g_tau > 0.0 && self.g_tau < std::f64::consts::FRAC_PI_2) {
            return Err(bad("g_tau", format!("{} is outside (0, pi/2)", self.g_tau)));
        }
        for (name, v) in [("omega", self.omega), ("tau", self.tau)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(bad(name, format!("{v} must be positive and finite")));
            }
        }
        if !self.omega_s.is_finite() {
            return Err(bad("omega_s", format!("{} must be finite", self.omega_s)));
        }
        if self.postselections.is_empty() && !self.include_definite_baseline {
            return Err(bad("postselections", "empty, and the definite baseline is disabled"));
        }
        Ok(())
    }

    pub fn params(&self, beta: f64) -> Result<CollisionParams> {
        CollisionParams::new(self.g_tau / self.tau, self.tau, self.omega, beta, h_ab(self.omega_s))
    }

    pub fn record_count(&self) -> usize {
        let per = self.postselections.len() * self.engine.kinds().len() + usize::from(self.include_definite_baseline);
        self.epsilon.steps * self.collision_counts.len() * self.betas.len() * per
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub epsilon: f64,
    pub n: u32,
    pub beta: f64,
    pub kind: RecordKind,
    pub p_post: f64,
    /// `None` when the post-selected branch has vanishing probability.
    pub concurrence: Option<f64>,
    pub engine: EngineKind,
}

fn record_from(
    sel: &PostSelection,
    epsilon: f64,
    n: u32,
    beta: f64,
    kind: RecordKind,
    engine: EngineKind,
) -> Result<SweepRecord> {
    let concurrence = sel.conditional.as_ref().map(concurrence).transpose()?;
    Ok(SweepRecord { epsilon, n, beta, kind, p_post: sel.probability, concurrence, engine })
}

fn definite_from(sw: &SwitchOutput, epsilon: f64, n: u32, params: &CollisionParams) -> Result<SweepRecord> {
    let u = unitary_from_hamiltonian(&params.h_s, n as f64 * params.tau)?;
    let state = DensityMatrix::from_unnormalized(&sw.a_def.mat.conjugate_by(&u), sw.target_dims().to_vec())?;
    Ok(SweepRecord {
        epsilon,
        n,
        beta: params.beta_e,
        kind: RecordKind::Definite,
        p_post: 1.0,
        concurrence: Some(concurrence(&state)?),
        engine: EngineKind::Analytic,
    })
}

/// Both monitorings in a fixed order (equivalently, the switch with the
/// control discarded), carried through n steps of free evolution.
pub fn definite_baseline(epsilon: f64, n: u32, params: &CollisionParams) -> Result<SweepRecord> {
    definite_from(&bell_mub_switch(epsilon)?, epsilon, n, params)
}

fn analytic_selection(sw: &SwitchOutput, n: u32, params: &CollisionParams, outcome: Outcome) -> Result<PostSelection> {
    let blocks = analytic_blocks(sw, n, params)?;
    PostSelection::from_block(outcome, blocks.diagonal(outcome), sw.target_dims().to_vec())
}

fn brute_selection(state: &DensityMatrix, outcome: Outcome) -> Result<PostSelection> {
    crate::opencontrol::postselect_after_n(state, outcome)
}

/// Post-selected concurrence of the Bell pair after `n` collisions.
pub fn open_control_record(
    epsilon: f64,
    n: u32,
    outcome: Outcome,
    params: &CollisionParams,
    engine: EngineKind,
) -> Result<SweepRecord> {
    let sw = bell_mub_switch(epsilon)?;
    let sel = match engine {
        EngineKind::Analytic => analytic_selection(&sw, n, params, outcome)?,
        EngineKind::BruteForce => {
            let traj = Collider::new(params)?.trajectory(&sw.joint, n)?;
            brute_selection(&traj[n as usize], outcome)?
        }
    };
    record_from(&sel, epsilon, n, params.beta_e, RecordKind::Post(outcome), engine)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise the
    /// same as `Sequential`.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub records: Vec<SweepRecord>,
    /// Largest |ΔC| between paired analytic and brute-force rows, present
    /// only for `Engine::Both`.
    pub max_engine_delta: Option<f64>,
}

fn sweep_epsilon(cfg: &ScenarioConfig, params: &[CollisionParams], epsilon: f64) -> Result<Vec<SweepRecord>> {
    let sw = bell_mub_switch(epsilon)?;
    let kinds = cfg.engine.kinds();
    let max_n = cfg.collision_counts.iter().copied().max().unwrap_or(0);
    let trajectories = if kinds.contains(&EngineKind::BruteForce) {
        params.iter().map(|p| Collider::new(p)?.trajectory(&sw.joint, max_n)).collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let mut out = Vec::new();
    for &n in &cfg.collision_counts {
        for (bi, p) in params.iter().enumerate() {
            for &outcome in &cfg.postselections {
                for &engine in kinds {
                    let sel = match engine {
                        EngineKind::Analytic => analytic_selection(&sw, n, p, outcome)?,
                        EngineKind::BruteForce => brute_selection(&trajectories[bi][n as usize], outcome)?,
                    };
                    out.push(record_from(&sel, epsilon, n, p.beta_e, RecordKind::Post(outcome), engine)?);
                }
            }
            if cfg.include_definite_baseline {
                out.push(definite_from(&sw, epsilon, n, p)?);
            }
        }
    }
    Ok(out)
}

fn engine_delta(records: &[SweepRecord]) -> f64 {
    records
        .windows(2)
        .filter(|w| w[0].engine == EngineKind::Analytic && w[1].engine == EngineKind::BruteForce)
        .map(|w| match (w[0].concurrence, w[1].concurrence) {
            (Some(a), Some(b)) => (a - b).abs(),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

/// Evaluates the full grid. Records are ordered by ε, then n, then β, then
/// outcome (definite last), then engine, whatever the execution mode.
pub fn run_sweep_with(cfg: &ScenarioConfig, exec: Execution) -> Result<SweepOutput> {
    cfg.validate()?;
    let params = cfg.betas.iter().map(|&b| cfg.params(b)).collect::<Result<Vec<_>>>()?;
    let grid = cfg.epsilon.points();
    let chunks: Vec<Result<Vec<SweepRecord>>> = match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            grid.par_iter().map(|&e| sweep_epsilon(cfg, &params, e)).collect()
        }
        _ => grid.iter().map(|&e| sweep_epsilon(cfg, &params, e)).collect(),
    };
    let mut records = Vec::with_capacity(cfg.record_count());
    for chunk in chunks {
        records.extend(chunk?);
    }
    let max_engine_delta = (cfg.engine == Engine::Both).then(|| engine_delta(&records));
    Ok(SweepOutput { records, max_engine_delta })
}

pub fn run_sweep(cfg: &ScenarioConfig) -> Result<SweepOutput> {
    run_sweep_with(cfg, Execution::default())
}

/// ε* located on a grid and refined by bisection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Threshold {
    pub last_positive: f64,
    pub first_zero: f64,
    pub refined: f64,
}

/// First grid point where `c` drops to zero, bracketed by its predecessor
/// and refined to `tol`. `None` if `c` never vanishes on the grid or is
/// already zero at its first point.
pub fn sudden_death_threshold(
    grid: &[f64],
    tol: f64,
    mut c: impl FnMut(f64) -> Result<f64>,
) -> Result<Option<Threshold>> {
    let mut prev: Option<f64> = None;
    for &e in grid {
        if c(e)? <= ZERO_CONCURRENCE {
            let Some(last_positive) = prev else { return Ok(None) };
            let (mut lo, mut hi) = (last_positive, e);
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if c(mid)? <= ZERO_CONCURRENCE {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(Some(Threshold { last_positive, first_zero: e, refined: 0.5 * (lo + hi) }));
        }
        prev = Some(e);
    }
    Ok(None)
}

/// Largest trace distance between the brute-force and analytic S⊗C states
/// over n = 0..=max_n.
pub fn oracle_distance(sw: &SwitchOutput, params: &CollisionParams, max_n: u32) -> Result<f64> {
    let traj = Collider::new(params)?.trajectory(&sw.joint, max_n)?;
    let mut worst: f64 = 0.0;
    for (n, state) in traj.iter().enumerate() {
        let a = analytic_after_n(sw, n as u32, params)?;
        worst = worst.max(trace_distance(a.matrix(), state.matrix())?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(engine: Engine) -> ScenarioConfig {
        ScenarioConfig {
            epsilon: EpsilonGrid { min: 0.0, max: 1.0, steps: 11 },
            collision_counts: vec![0, 1, 5, 10],
            betas: vec![0.0, 1.0, f64::INFINITY],
            engine,
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn closed_forms_match_switch() {
        for e in [0.0, 0.25, 0.3, 0.5, 0.77, 1.0] {
            let sw = bell_mub_switch(e).unwrap();
            assert!(closed_form_deviation(&sw, e) <= 1e-12, "eps {e}");
        }
    }

    #[test]
    fn closed_form_endpoints() {
        let sw = bell_mub_switch(0.0).unwrap();
        assert!(sw.a_pp.mat.max_abs_diff(bell_state().matrix()) <= 1e-15);
        assert!(sw.a_mm.mat.max_abs() <= 1e-15);
        let a = closed_form::a_pp(1.0);
        assert_eq!(a[(0, 0)], re(0.25));
        assert_eq!(a[(0, 3)].norm(), 0.0);
    }

    #[test]
    fn biased_basis_breaks_closed_form() {
        let (t, s) = (0.3f64.cos(), 0.3f64.sin());
        let tilted = ProjectorSet::from_basis(&[vec![re(t), re(s)], vec![re(-s), re(t)]], &["a", "b"]).unwrap();
        let (z, _) = mub_qubit_bases();
        let sw = bell_mub_switch_with(0.5, &z, &tilted).unwrap();
        assert!(closed_form_deviation(&sw, 0.5) > 1e-3);
    }

    #[test]
    fn grid_points() {
        let g = EpsilonGrid { min: 0.0, max: 1.0, steps: 201 };
        let p = g.points();
        assert_eq!(p.len(), 201);
        assert_eq!((p[0], p[200]), (0.0, 1.0));
        assert_eq!(p[100], 0.5);
        assert!(p.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn config_validation() {
        assert!(ScenarioConfig::default().validate().is_ok());
        let mut cfg = ScenarioConfig::default();
        cfg.epsilon.min = 0.5;
        cfg.epsilon.max = 0.2;
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("epsilon.max"), "{err}");
        let mut cfg = ScenarioConfig::default();
        cfg.epsilon.steps = 1;
        assert!(cfg.validate().is_err());
        let cfg = ScenarioConfig { betas: vec![-1.0], ..ScenarioConfig::default() };
        assert!(cfg.validate().unwrap_err().to_string().contains("betas"));
    }

    #[test]
    fn cardinality_and_order() {
        let cfg = ScenarioConfig {
            epsilon: EpsilonGrid { min: 0.0, max: 1.0, steps: 2 },
            collision_counts: vec![0],
            betas: vec![0.0],
            include_definite_baseline: false,
            ..ScenarioConfig::default()
        };
        assert_eq!(run_sweep(&cfg).unwrap().records.len(), 2 * 2);
        let cfg = small(Engine::Both);
        let out = run_sweep(&cfg).unwrap();
        assert_eq!(out.records.len(), cfg.record_count());
        assert!(out.records.windows(2).all(|w| w[1].epsilon >= w[0].epsilon));
    }

    #[test]
    fn engines_agree() {
        let out = run_sweep(&small(Engine::Both)).unwrap();
        let delta = out.max_engine_delta.unwrap();
        assert!(delta <= 1e-8, "{delta}");
    }

    #[test]
    fn sequential_equals_parallel() {
        let cfg = small(Engine::Both);
        let a = run_sweep_with(&cfg, Execution::Sequential).unwrap();
        let b = run_sweep_with(&cfg, Execution::Parallel).unwrap();
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn probabilities_close() {
        let out = run_sweep(&small(Engine::Analytic)).unwrap();
        let posts: Vec<_> = out.records.iter().filter(|r| r.kind != RecordKind::Definite).collect();
        for pair in posts.chunks(2) {
            assert_eq!(pair[0].kind, RecordKind::Post(Outcome::Plus));
            assert!((pair[0].p_post + pair[1].p_post - 1.0).abs() <= 1e-11);
        }
    }

    #[test]
    fn frame_invariance() {
        let cfg = small(Engine::Analytic);
        let still = ScenarioConfig { omega_s: 0.0, ..cfg.clone() };
        let a = run_sweep(&cfg).unwrap().records;
        let b = run_sweep(&still).unwrap().records;
        for (x, y) in a.iter().zip(&b) {
            match (x.concurrence, y.concurrence) {
                (Some(p), Some(q)) => assert!((p - q).abs() <= 1e-9),
                (p, q) => assert_eq!(p.is_some(), q.is_some()),
            }
        }
    }

    #[test]
    fn minus_branch_is_singlet_before_collisions() {
        let p = ScenarioConfig::default().params(1.0).unwrap();
        for e in [0.05, 0.3, 0.5, 1.0] {
            let r = open_control_record(e, 0, Outcome::Minus, &p, EngineKind::Analytic).unwrap();
            assert!((r.concurrence.unwrap() - 1.0).abs() <= 1e-9);
            assert!((r.p_post - e * e / 4.0).abs() <= 1e-12);
        }
        let r = open_control_record(0.0, 0, Outcome::Minus, &p, EngineKind::Analytic).unwrap();
        assert_eq!(r.concurrence, None);
    }

    #[test]
    fn definite_baseline_endpoints() {
        let p = ScenarioConfig::default().params(1.0).unwrap();
        let c0 = definite_baseline(0.0, 3, &p).unwrap().concurrence.unwrap();
        let c1 = definite_baseline(1.0, 3, &p).unwrap().concurrence.unwrap();
        assert!((c0 - 1.0).abs() <= 1e-12);
        assert!(c1 <= 1e-12);
        for n in [0, 1, 7, 50] {
            let cn = definite_baseline(0.4, n, &p).unwrap().concurrence.unwrap();
            let c0 = definite_baseline(0.4, 0, &p).unwrap().concurrence.unwrap();
            assert!((cn - c0).abs() <= 1e-10);
        }
    }

    #[test]
    fn definite_threshold_is_bracketed() {
        let p = ScenarioConfig::default().params(1.0).unwrap();
        let grid = ScenarioConfig::default().epsilon.points();
        let t = sudden_death_threshold(&grid, 1e-6, |e| Ok(definite_baseline(e, 0, &p)?.concurrence.unwrap()))
            .unwrap()
            .unwrap();
        assert!(t.last_positive < t.refined && t.refined <= t.first_zero);
        assert!(t.first_zero - t.last_positive <= 0.005 + 1e-12);
        // X state: C = ½max(0, (2−ε)(1−ε) − ε, ...), zero once ε² − 4ε + 2 ≤ 0
        assert!((t.refined - (2.0 - 2f64.sqrt())).abs() <= 1e-6);
    }

    #[test]
    fn threshold_none_cases() {
        let grid = [0.0, 0.5, 1.0];
        assert_eq!(sudden_death_threshold(&grid, 1e-6, |_| Ok(0.5)).unwrap(), None);
        assert_eq!(sudden_death_threshold(&grid, 1e-6, |_| Ok(0.0)).unwrap(), None);
    }

    #[test]
    fn oracle_on_bell_pair() {
        let sw = bell_mub_switch(0.6).unwrap();
        for beta in [0.0, 5.0, f64::INFINITY] {
            let p = ScenarioConfig::default().params(beta).unwrap();
            assert!(oracle_distance(&sw, &p, 10).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn parse_labels() {
        assert_eq!("definite".parse::<RecordKind>().unwrap(), RecordKind::Definite);
        assert_eq!("minus".parse::<RecordKind>().unwrap(), RecordKind::Post(Outcome::Minus));
        assert!("sideways".parse::<RecordKind>().is_err());
        assert_eq!("both".parse::<Engine>().unwrap(), Engine::Both);
        assert!("fast".parse::<Engine>().is_err());
    }
}
