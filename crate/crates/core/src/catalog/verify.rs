use std::time::Instant;

use crate::connection::{torsion, Curvature, Tensor, Variance};
use crate::error::{Error, Result};
use crate::exterior::{ext_d, Form};
use crate::geometry::{build_em_form, maxwell_residual, Metric};
use crate::symbolic::{diff, is_zero, simplify, Chart, Expr, SamplingPolicy, ZeroTest};
use crate::transform::{
    flow_check_with, hamilton_field, poincare_cartan, poisson_bracket, reversed_force_field,
    HamiltonianSystem, PhaseSpace,
};

use super::report::VerificationReport;

fn exprs_verdict(exprs: &[Expr], policy: &SamplingPolicy) -> ZeroTest {
    ZeroTest::all(exprs.iter().map(|e| is_zero(e, policy)))
}

fn list(exprs: &[Expr]) -> String {
    let parts: Vec<String> = exprs.iter().map(Expr::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Maxwell's equations for fields `E`, `B` and source 1-form `J`, plus the
/// energy balance `∂_t ½(E² + B²) + div(E × B) + E·j = 0` with `j^i = g^{iμ} J_μ`.
pub fn verify_maxwell(
    e: &[Expr; 3],
    b: &[Expr; 3],
    j: &Form,
    g: &Metric,
    policy: &SamplingPolicy,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let chart = g.chart();
    let f = build_em_form(e, b, chart)?;
    let (homogeneous, sourced) = maxwell_residual(&f, j, g)?;
    let mut report = VerificationReport::new("maxwell");
    report.check("dF", &homogeneous, homogeneous.zero_test(policy));
    report.check("d*F - *J", &sourced, sourced.zero_test(policy));

    let names = chart.names();
    let (t, x) = (&names[0], [&names[1], &names[2], &names[3]]);
    let energy = Expr::rational(1, 2) * Expr::sum(e.iter().chain(b).map(|c| c.clone().pow(2)).collect());
    let poynting = [
        e[1].clone() * b[2].clone() - e[2].clone() * b[1].clone(),
        e[2].clone() * b[0].clone() - e[0].clone() * b[2].clone(),
        e[0].clone() * b[1].clone() - e[1].clone() * b[0].clone(),
    ];
    let ginv = g.inverse();
    let current: Vec<Expr> = (1..4)
        .map(|i| Expr::sum((0..4).map(|mu| ginv[i][mu].clone() * j.component(&[mu])).collect()))
        .collect();
    let mut terms = vec![diff(&energy, t)];
    for i in 0..3 {
        terms.push(diff(&poynting[i], x[i]));
        terms.push(e[i].clone() * current[i].clone());
    }
    let balance = simplify(&Expr::sum(terms));
    report.check("energy flux", &balance, is_zero(&balance, policy));
    report.value("F", &f);
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Degree-1 correspondence: the Hamiltonian flow annihilates `dθ` for the
/// Poincaré–Cartan form `θ`, with `d(dθ) = 0` and `{H, H} = 0` as sanity
/// checks.
pub fn verify_hamiltonian(sys: &HamiltonianSystem, policy: &SamplingPolicy) -> Result<VerificationReport> {
    hamiltonian_report(sys, policy, false)
}

/// Falsification control: the same checks with the force term of the flow
/// sign-flipped.
pub fn verify_hamiltonian_corrupted(sys: &HamiltonianSystem, policy: &SamplingPolicy) -> Result<VerificationReport> {
    hamiltonian_report(sys, policy, true)
}

fn hamiltonian_report(sys: &HamiltonianSystem, policy: &SamplingPolicy, corrupt: bool) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::new(if corrupt { "hamiltonian (corrupted flow)" } else { "hamiltonian" });
    let theta = poincare_cartan(sys)?;
    let d_theta = ext_d(&theta);
    let field = if corrupt {
        reversed_force_field(sys)?
    } else {
        hamilton_field(sys)?
    };
    let flow = flow_check_with(sys, field, policy)?;
    report.check("i_X d(theta)", &flow.residual, flow.verdict);
    let dd = ext_d(&d_theta);
    report.check("d(d(theta))", &dd, dd.zero_test(policy));
    let h = sys.hamiltonian();
    let hh = poisson_bracket(h, h, sys.space());
    report.check("{H,H}", &hh, is_zero(&hh, policy));
    report.value("theta", &theta);
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Source term `κ T_{μν}` for the Einstein check.
#[derive(Clone, Debug)]
pub struct EinsteinSource {
    pub stress: Tensor,
    pub coupling: Expr,
}

/// Einstein tensor, contracted Bianchi residual and torsion-freeness of the
/// Levi-Civita connection; with a source, also `G_{μν} − κ T_{μν}`.
pub fn verify_einstein(g: &Metric, source: Option<&EinsteinSource>, policy: &SamplingPolicy) -> Result<VerificationReport> {
    let start = Instant::now();
    let n = g.dim();
    let mut report = VerificationReport::new("einstein");
    let curvature = Curvature::of(g);
    let t = torsion(&curvature.christoffel);
    report.check("torsion(christoffel)", &t, t.zero_test(policy));
    let bianchi = curvature.bianchi_residual(g);
    report.check("bianchi", list(&bianchi), exprs_verdict(&bianchi, policy));
    if let Some(src) = source {
        if src.stress.chart() != g.chart() || src.stress.rank() != 2 {
            return Err(Error::Invalid(format!(
                "stress tensor must be rank 2 on chart {}",
                g.chart()
            )));
        }
        let residual = Tensor::from_fn(g.chart(), src.stress.variance(), |i| {
            curvature.einstein.get(i).clone() - src.coupling.clone() * src.stress.get(i).clone()
        });
        report.check("G - kappa T", &residual, residual.zero_test(policy));
    }
    for i in 0..n {
        for k in i..n {
            let gik = curvature.einstein.get(&[i, k]);
            if !gik.is_zero_literal() {
                report.value(&format!("G[{i},{k}]"), gik);
            }
        }
    }
    report.value("R", &curvature.scalar);
    if n == 2 {
        report
            .notes
            .push("in two dimensions R_mn = g_mn R / 2, so G vanishes identically".into());
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

fn spacetime() -> Chart {
    Chart::new(&["t", "x", "y", "z"]).expect("static chart")
}

/// Bundled reference and control scenarios for each verifiable degree.
pub fn reference_report(verifier: &str, control: bool, policy: &SamplingPolicy) -> Result<VerificationReport> {
    match verifier {
        "maxwell" => {
            let c = spacetime();
            let g = Metric::minkowski(&c);
            let zero = Form::zero(&c, 1);
            if control {
                let e = [Expr::sym("x"), Expr::zero(), Expr::zero()];
                verify_maxwell(&e, &[Expr::zero(), Expr::zero(), Expr::zero()], &zero, &g, policy)
            } else {
                let wave = Expr::apply("f", Expr::sym("z") - Expr::sym("t"));
                let e = [wave.clone(), Expr::zero(), Expr::zero()];
                let b = [Expr::zero(), wave, Expr::zero()];
                verify_maxwell(&e, &b, &zero, &g, policy)
            }
        }
        "hamiltonian" => {
            let space = PhaseSpace::with_time("t", &["q"], &["p"])?;
            let (q, p) = (Expr::sym("q"), Expr::sym("p"));
            let sys = HamiltonianSystem::new(space, (p.pow(2) + q.pow(2)) / Expr::int(2));
            if control {
                verify_hamiltonian_corrupted(&sys, policy)
            } else {
                verify_hamiltonian(&sys, policy)
            }
        }
        "einstein" => {
            let c = spacetime();
            let g = Metric::minkowski(&c);
            let stress = if control {
                // dust at rest with unit density: not a vacuum
                Tensor::from_fn(&c, &[Variance::Lower; 2], |i| {
                    if i == [0, 0] {
                        Expr::one()
                    } else {
                        Expr::zero()
                    }
                })
            } else {
                Tensor::zero(&c, &[Variance::Lower; 2])
            };
            let source = EinsteinSource {
                stress,
                coupling: Expr::sym("kappa"),
            };
            verify_einstein(&g, Some(&source), policy)
        }
        other => Err(Error::Invalid(format!("unknown verifier `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Verdict;

    fn policy() -> SamplingPolicy {
        SamplingPolicy::default()
    }

    #[test]
    fn references_pass_and_controls_fail() {
        for id in ["maxwell", "hamiltonian", "einstein"] {
            assert_eq!(reference_report(id, false, &policy()).unwrap().verdict(), Verdict::Pass, "{id}");
            assert_eq!(reference_report(id, true, &policy()).unwrap().verdict(), Verdict::Fail, "{id} control");
        }
    }

    #[test]
    fn gauss_control_fails_only_the_dual_equation() {
        let r = reference_report("maxwell", true, &policy()).unwrap();
        assert_eq!(r.check_named("dF").unwrap().verdict, Verdict::Pass);
        let dual = r.check_named("d*F - *J").unwrap();
        assert_eq!(dual.verdict, Verdict::Fail);
        assert_eq!(dual.residual, "(1) dx∧dy∧dz");
    }

    #[test]
    fn sourced_field_balances_energy() {
        // E = (-t, 0, 0), B = 0 needs j = (1, 0, 0), i.e. J = dx
        let c = spacetime();
        let g = Metric::minkowski(&c);
        let e = [-Expr::sym("t"), Expr::zero(), Expr::zero()];
        let zero = [Expr::zero(), Expr::zero(), Expr::zero()];
        let j = Form::basis(&c, &[1]).unwrap();
        let r = verify_maxwell(&e, &zero, &j, &g, &policy()).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass, "{r}");
        let r = verify_maxwell(&e, &zero, &Form::zero(&c, 1), &g, &policy()).unwrap();
        assert_eq!(r.check_named("energy flux").unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn vacuum_is_trivially_consistent() {
        let c = spacetime();
        let zero = [Expr::zero(), Expr::zero(), Expr::zero()];
        let r = verify_maxwell(&zero, &zero, &Form::zero(&c, 1), &Metric::minkowski(&c), &policy()).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass);
        assert_eq!(r.checks.len(), 3);
    }

    #[test]
    fn frw_einstein_values() {
        let c = spacetime();
        let a2 = Expr::apply("a", Expr::sym("t")).pow(2);
        let g = Metric::diagonal(&c, vec![Expr::int(-1), a2.clone(), a2.clone(), a2], -1).unwrap();
        let r = verify_einstein(&g, None, &policy()).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass);
        let gtt = r.values.iter().find(|(k, _)| k == "G[0,0]").unwrap();
        assert_eq!(gtt.1, "3*a'(t)^2/a(t)^2");
    }

    #[test]
    fn sphere_note() {
        let c = Chart::new(&["th", "ph"]).unwrap();
        let g = Metric::diagonal(&c, vec![Expr::one(), Expr::sym("th").sin().pow(2)], 1).unwrap();
        let r = verify_einstein(&g, None, &policy()).unwrap();
        assert_eq!(r.verdict(), Verdict::Pass);
        assert_eq!(r.notes.len(), 1);
        assert!(r.values.iter().all(|(k, _)| k == "R"));
    }
}
