use crate::error::{Error, Result};
use crate::exterior::{ext_d, interior_product, Form, VectorField};
use crate::symbolic::{diff, simplify, Expr, SamplingPolicy, ZeroTest};

use super::legendre::{HamiltonianSystem, PhaseSpace};

/// `{f, g} = Σᵢ (∂f/∂qᵢ ∂g/∂pᵢ − ∂f/∂pᵢ ∂g/∂qᵢ)`.
pub fn poisson_bracket(f: &Expr, g: &Expr, space: &PhaseSpace) -> Expr {
    let terms = space
        .positions()
        .iter()
        .zip(space.momenta())
        .flat_map(|(q, p)| [diff(f, q) * diff(g, p), -(diff(f, p) * diff(g, q))])
        .collect();
    simplify(&Expr::sum(terms))
}

fn require_time(sys: &HamiltonianSystem) -> Result<()> {
    if sys.space().time().is_none() {
        return Err(Error::Chart(format!(
            "chart {} has no time coordinate; expected (t, q.., p..)",
            sys.chart()
        )));
    }
    Ok(())
}

/// Poincaré–Cartan form `θ = Σᵢ pᵢ dqᵢ − H dt` on `(t, q, p)`.
pub fn poincare_cartan(sys: &HamiltonianSystem) -> Result<Form> {
    require_time(sys)?;
    let chart = sys.chart();
    let k = sys.space().degrees_of_freedom();
    let mut coeffs = vec![Expr::zero(); chart.dim()];
    coeffs[0] = -sys.hamiltonian().clone();
    for i in 0..k {
        coeffs[1 + i] = Expr::sym(&sys.space().momenta()[i]);
    }
    Form::one_form(chart, coeffs)
}

/// Flow field `X = ∂_t + Σ (∂H/∂pᵢ) ∂_{qᵢ} − (∂H/∂qᵢ) ∂_{pᵢ}`.
pub fn hamilton_field(sys: &HamiltonianSystem) -> Result<VectorField> {
    field(sys, 1)
}

/// The flow with the force term sign-flipped, `ṗ = +∂H/∂q`; a control that
/// must fail the flow check whenever `∂H/∂q ≠ 0`.
pub fn reversed_force_field(sys: &HamiltonianSystem) -> Result<VectorField> {
    field(sys, -1)
}

fn field(sys: &HamiltonianSystem, force_sign: i64) -> Result<VectorField> {
    require_time(sys)?;
    let space = sys.space();
    let h = sys.hamiltonian();
    let mut comps = vec![Expr::one()];
    comps.extend(space.momenta().iter().map(|p| diff(h, p)));
    comps.extend(
        space
            .positions()
            .iter()
            .map(|q| simplify(&(Expr::int(-force_sign) * diff(h, q)))),
    );
    VectorField::new(sys.chart(), comps)
}

/// Outcome of testing that a flow lies in the kernel of `dθ`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowCheck {
    pub field: VectorField,
    /// `ι_X dθ`.
    pub residual: Form,
    pub verdict: ZeroTest,
}

/// `ι_X dθ = 0` for the Hamiltonian flow `X`.
pub fn hamilton_flow_check(sys: &HamiltonianSystem, policy: &SamplingPolicy) -> Result<FlowCheck> {
    flow_check_with(sys, hamilton_field(sys)?, policy)
}

/// `ι_X dθ` for an arbitrary field `X` on the extended phase space.
pub fn flow_check_with(sys: &HamiltonianSystem, field: VectorField, policy: &SamplingPolicy) -> Result<FlowCheck> {
    let d_theta = ext_d(&poincare_cartan(sys)?);
    let residual = interior_product(&field, &d_theta)?;
    let verdict = residual.zero_test(policy);
    Ok(FlowCheck {
        field,
        residual,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> PhaseSpace {
        PhaseSpace::new(&["q"], &["p"]).unwrap()
    }

    fn oscillator() -> HamiltonianSystem {
        let (q, p) = (Expr::sym("q"), Expr::sym("p"));
        HamiltonianSystem::new(space(), (p.pow(2) + q.pow(2)) / Expr::int(2))
            .timed("t")
            .unwrap()
    }

    #[test]
    fn canonical_brackets() {
        let s = space();
        let (q, p) = (Expr::sym("q"), Expr::sym("p"));
        assert_eq!(poisson_bracket(&q, &p, &s), Expr::one());
        let h = oscillator().hamiltonian().clone();
        assert_eq!(poisson_bracket(&h, &h, &s), Expr::zero());
        assert_eq!(poisson_bracket(&q.clone().pow(2), &p, &s), simplify(&(Expr::int(2) * q)));
    }

    #[test]
    fn poincare_cartan_forms() {
        let zero = HamiltonianSystem::new(space(), Expr::zero()).timed("t").unwrap();
        let theta = poincare_cartan(&zero).unwrap();
        assert_eq!(theta.components().len(), 1);
        assert_eq!(theta.component(&[1]), Expr::sym("p"));
        let theta = poincare_cartan(&oscillator()).unwrap();
        assert_eq!(theta.component(&[0]), simplify(&-oscillator().hamiltonian().clone()));
        assert!(poincare_cartan(&HamiltonianSystem::new(space(), Expr::zero())).is_err());
    }

    #[test]
    fn flows() {
        let policy = SamplingPolicy::default();
        let sys = oscillator();
        assert_eq!(hamilton_flow_check(&sys, &policy).unwrap().verdict, ZeroTest::Zero);
        let free = HamiltonianSystem::new(space(), Expr::sym("p").pow(2) / (Expr::int(2) * Expr::sym("m")))
            .timed("t")
            .unwrap();
        assert_eq!(hamilton_flow_check(&free, &policy).unwrap().verdict, ZeroTest::Zero);
        let bad = flow_check_with(&sys, reversed_force_field(&sys).unwrap(), &policy).unwrap();
        assert_eq!(bad.verdict, ZeroTest::NonZero);
    }
}
