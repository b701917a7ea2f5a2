//! Reference checks against known closed-form values of the Bell-pair
//! switch and the collisional control.

use qswitch::experiments::{bell_mub_switch_with, closed_form_deviation, oracle_distance, ScenarioConfig};
use qswitch::matcore::{re, trace_distance, ZERO};
use qswitch::quantum::{mub_qubit_bases, DensityMatrix, ProjectorSet};
use qswitch::switch::{postselect, Outcome, PostSelection};

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

/// (|10⟩ − |01⟩)/√2
pub fn singlet() -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::pure(&[ZERO, re(-s), re(s), ZERO], vec![2, 2]).expect("normalized")
}

fn fail_on_error(name: String, tol: f64, value: qswitch::Result<f64>) -> Check {
    Check { name, value: value.unwrap_or(f64::INFINITY), tolerance: tol }
}

/// Runs every check with the two monitored bases given explicitly.
pub fn run_checks_with(first: &ProjectorSet, second: &ProjectorSet) -> Vec<Check> {
    let mut checks = Vec::new();
    for e in [0.0, 0.25, 0.5, 1.0] {
        let v = bell_mub_switch_with(e, first, second).map(|sw| closed_form_deviation(&sw, e));
        checks.push(fail_on_error(format!("switch blocks vs closed form, eps = {e}"), 1e-12, v));
    }
    for e in [0.25, 0.5, 1.0] {
        for (o, expected) in [(Outcome::Plus, 1.0 - e * e / 4.0), (Outcome::Minus, e * e / 4.0)] {
            let v = bell_mub_switch_with(e, first, second)
                .and_then(|sw| postselect(&sw, o))
                .map(|p| (p.probability - expected).abs());
            checks.push(fail_on_error(format!("p({o}) = {expected}, eps = {e}"), 1e-12, v));
        }
    }
    for e in [0.1, 0.5, 1.0] {
        let distance = |p: PostSelection| match p.conditional {
            Some(c) => trace_distance(c.matrix(), singlet().matrix()),
            None => Ok(f64::INFINITY),
        };
        let v =
            bell_mub_switch_with(e, first, second).and_then(|sw| postselect(&sw, Outcome::Minus)).and_then(distance);
        checks.push(fail_on_error(format!("minus branch is the singlet, eps = {e}"), 1e-12, v));
    }
    let base = ScenarioConfig::default();
    for beta in [0.0, 1.0, f64::INFINITY] {
        let v = base
            .params(beta)
            .and_then(|p| bell_mub_switch_with(0.5, first, second).and_then(|sw| oracle_distance(&sw, &p, 10)));
        checks.push(fail_on_error(format!("collisions vs closed form, g_tau = 0.2, n <= 10, beta = {beta}"), 1e-9, v));
    }
    checks
}

pub fn run_checks() -> Vec<Check> {
    let (z, x) = mub_qubit_bases();
    run_checks_with(&z, &x)
}

pub fn render_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut s = String::new();
    for c in checks {
        s.push_str(&format!(
            "{} {:<width$}  {:.3e} (tol {:.0e})\n",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            c.value,
            c.tolerance
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    s.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_pass() {
        let checks = run_checks();
        assert!(checks.iter().all(Check::passed), "{}", render_table(&checks));
        assert!(checks.iter().any(|c| c.name.contains("p(minus) = 0.0625")));
    }

    #[test]
    fn biased_basis_fails_matrix_gate() {
        let (z, _) = mub_qubit_bases();
        let (t, s) = (0.4f64.cos(), 0.4f64.sin());
        let tilted = ProjectorSet::from_basis(&[vec![re(t), re(s)], vec![re(-s), re(t)]], &["a", "b"]).unwrap();
        let checks = run_checks_with(&z, &tilted);
        let gate: Vec<_> =
            checks.iter().filter(|c| c.name.starts_with("switch blocks") && !c.name.ends_with("= 0")).collect();
        assert!(gate.iter().all(|c| !c.passed()));
        assert!(render_table(&checks).contains("FAIL"));
    }
}
