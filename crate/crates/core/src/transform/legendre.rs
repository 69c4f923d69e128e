use crate::error::{Error, Result};
use crate::symbolic::matrix::{self, Matrix};
use crate::symbolic::{diff, is_zero, simplify, Chart, Expr, SamplingPolicy, ZeroTest};

use super::degeneracy::{Degeneracy, DegeneracyReport};

/// Canonical coordinates `(t?, q₁..q_k, p₁..p_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpace {
    time: Option<String>,
    positions: Vec<String>,
    momenta: Vec<String>,
    chart: Chart,
}

impl PhaseSpace {
    pub fn new<S: AsRef<str>>(positions: &[S], momenta: &[S]) -> Result<PhaseSpace> {
        PhaseSpace::build(None, positions, momenta)
    }

    pub fn with_time<S: AsRef<str>>(time: &str, positions: &[S], momenta: &[S]) -> Result<PhaseSpace> {
        PhaseSpace::build(Some(time), positions, momenta)
    }

    fn build<S: AsRef<str>>(time: Option<&str>, positions: &[S], momenta: &[S]) -> Result<PhaseSpace> {
        if positions.len() != momenta.len() || positions.is_empty() {
            return Err(Error::Chart(format!(
                "phase space needs matching nonempty positions and momenta, got {} and {}",
                positions.len(),
                momenta.len()
            )));
        }
        let positions: Vec<String> = positions.iter().map(|s| s.as_ref().to_string()).collect();
        let momenta: Vec<String> = momenta.iter().map(|s| s.as_ref().to_string()).collect();
        let names: Vec<&str> = time
            .into_iter()
            .chain(positions.iter().map(String::as_str))
            .chain(momenta.iter().map(String::as_str))
            .collect();
        let chart = Chart::new(&names)?;
        Ok(PhaseSpace {
            time: time.map(str::to_string),
            positions,
            momenta,
            chart,
        })
    }

    /// Same coordinates with a leading time coordinate.
    pub fn timed(&self, time: &str) -> Result<PhaseSpace> {
        PhaseSpace::with_time(time, &self.positions, &self.momenta)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn time(&self) -> Option<&str> {
        self.time.as_deref()
    }

    pub fn positions(&self) -> &[String] {
        &self.positions
    }

    pub fn momenta(&self) -> &[String] {
        &self.momenta
    }

    pub fn degrees_of_freedom(&self) -> usize {
        self.positions.len()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSystem {
    space: PhaseSpace,
    hamiltonian: Expr,
}

impl HamiltonianSystem {
    pub fn new(space: PhaseSpace, hamiltonian: Expr) -> HamiltonianSystem {
        HamiltonianSystem {
            space,
            hamiltonian: simplify(&hamiltonian),
        }
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn chart(&self) -> &Chart {
        self.space.chart()
    }

    pub fn hamiltonian(&self) -> &Expr {
        &self.hamiltonian
    }

    pub fn timed(&self, time: &str) -> Result<HamiltonianSystem> {
        Ok(HamiltonianSystem {
            space: self.space.timed(time)?,
            hamiltonian: self.hamiltonian.clone(),
        })
    }
}

/// `L = ½ vᵀ M(q) v + b(q)ᵀ v − V(q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticLagrangian {
    positions: Vec<String>,
    velocities: Vec<String>,
    momenta: Vec<String>,
    mass: Matrix,
    linear: Vec<Expr>,
    potential: Expr,
}

fn default_momentum(velocity: &str, position: &str) -> String {
    match velocity.strip_prefix('v') {
        Some(rest) => format!("p{rest}"),
        None => format!("p_{position}"),
    }
}

impl QuadraticLagrangian {
    /// Purely kinetic Lagrangian `½ vᵀ M v`. Momenta default to the velocity
    /// names with a leading `v` replaced by `p`.
    pub fn new<S: AsRef<str>>(positions: &[S], velocities: &[S], mass: Matrix) -> Result<Self> {
        let k = positions.len();
        if velocities.len() != k || k == 0 {
            return Err(Error::Chart(format!(
                "{} positions but {} velocities",
                k,
                velocities.len()
            )));
        }
        let positions: Vec<String> = positions.iter().map(|s| s.as_ref().to_string()).collect();
        let velocities: Vec<String> = velocities.iter().map(|s| s.as_ref().to_string()).collect();
        let momenta = velocities
            .iter()
            .zip(&positions)
            .map(|(v, q)| default_momentum(v, q))
            .collect();
        if mass.len() != k || mass.iter().any(|row| row.len() != k) {
            return Err(Error::Invalid(format!("mass matrix must be {k}x{k}")));
        }
        let mass: Matrix = mass.iter().map(|row| row.iter().map(simplify).collect()).collect();
        for i in 0..k {
            for j in i + 1..k {
                if mass[i][j] != mass[j][i] {
                    return Err(Error::Invalid(format!("mass matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        let l = QuadraticLagrangian {
            positions,
            velocities,
            momenta,
            mass,
            linear: vec![Expr::zero(); k],
            potential: Expr::zero(),
        };
        for row in &l.mass {
            for e in row {
                l.check_velocity_free(e, "mass matrix")?;
            }
        }
        Chart::new(&l.all_names())?;
        Ok(l)
    }

    pub fn with_linear(mut self, linear: Vec<Expr>) -> Result<Self> {
        if linear.len() != self.positions.len() {
            return Err(Error::Invalid(format!(
                "linear term needs {} entries, got {}",
                self.positions.len(),
                linear.len()
            )));
        }
        for e in &linear {
            self.check_velocity_free(e, "linear term")?;
        }
        self.linear = linear.iter().map(simplify).collect();
        Ok(self)
    }

    pub fn with_potential(mut self, potential: Expr) -> Result<Self> {
        self.check_velocity_free(&potential, "potential")?;
        self.potential = simplify(&potential);
        Ok(self)
    }

    pub fn with_momenta<S: AsRef<str>>(mut self, momenta: &[S]) -> Result<Self> {
        if momenta.len() != self.positions.len() {
            return Err(Error::Chart(format!("{} momenta for {} positions", momenta.len(), self.positions.len())));
        }
        self.momenta = momenta.iter().map(|s| s.as_ref().to_string()).collect();
        Chart::new(&self.all_names())?;
        Ok(self)
    }

    fn all_names(&self) -> Vec<&str> {
        self.positions
            .iter()
            .chain(&self.velocities)
            .chain(&self.momenta)
            .map(String::as_str)
            .collect()
    }

    fn check_velocity_free(&self, e: &Expr, what: &str) -> Result<()> {
        for v in &self.velocities {
            if e.contains_symbol(v) {
                return Err(Error::Invalid(format!("{what} {e} depends on velocity `{v}`")));
            }
        }
        Ok(())
    }

    pub fn positions(&self) -> &[String] {
        &self.positions
    }

    pub fn velocities(&self) -> &[String] {
        &self.velocities
    }

    pub fn momenta(&self) -> &[String] {
        &self.momenta
    }

    pub fn mass(&self) -> &Matrix {
        &self.mass
    }

    pub fn linear(&self) -> &[Expr] {
        &self.linear
    }

    pub fn potential(&self) -> &Expr {
        &self.potential
    }

    /// Chart of positions then velocities.
    pub fn chart(&self) -> Chart {
        let names: Vec<&str> = self.positions.iter().chain(&self.velocities).map(String::as_str).collect();
        Chart::new(&names).expect("validated names")
    }

    /// The Lagrangian as an expression in positions and velocities.
    pub fn lagrangian(&self) -> Expr {
        let v: Vec<Expr> = self.velocities.iter().map(|s| Expr::sym(s)).collect();
        simplify(&self.evaluate(&v))
    }

    fn evaluate(&self, v: &[Expr]) -> Expr {
        let k = v.len();
        let mut terms = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if !self.mass[i][j].is_zero_literal() {
                    terms.push(Expr::rational(1, 2) * self.mass[i][j].clone() * v[i].clone() * v[j].clone());
                }
            }
            terms.push(self.linear[i].clone() * v[i].clone());
        }
        terms.push(-self.potential.clone());
        Expr::sum(terms)
    }

    /// Componentwise difference from another Lagrangian with the same
    /// variables; `None` if the variables differ.
    pub fn difference(&self, other: &QuadraticLagrangian) -> Option<Vec<Expr>> {
        if self.positions != other.positions || self.velocities != other.velocities {
            return None;
        }
        let mut out = Vec::new();
        for (ra, rb) in self.mass.iter().zip(&other.mass) {
            for (a, b) in ra.iter().zip(rb) {
                out.push(simplify(&(a - b)));
            }
        }
        for (a, b) in self.linear.iter().zip(&other.linear) {
            out.push(simplify(&(a - b)));
        }
        out.push(simplify(&(&self.potential - &other.potential)));
        Some(out)
    }
}

/// Legendre transform `H = p·v − L` with `v = M⁻¹(p − b)`, i.e.
/// `H = ½(p − b)ᵀ M⁻¹ (p − b) + V`. Fails with `DegenerateLagrangian` when
/// `det M` vanishes identically.
pub fn legendre(l: &QuadraticLagrangian, policy: &SamplingPolicy) -> Result<(HamiltonianSystem, DegeneracyReport)> {
    let space = PhaseSpace::new(l.positions(), l.momenta())?;
    let det = matrix::determinant(l.mass());
    let report = DegeneracyReport::classify(det, &space.chart().clone(), policy);
    if report.classification == Degeneracy::DegenerateEverywhere {
        return Err(Error::DegenerateLagrangian(format!(
            "det M = {} vanishes identically; p = ∂L/∂v cannot be solved for v",
            report.determinant
        )));
    }
    let inverse = matrix::inverse(l.mass()).ok_or_else(|| {
        Error::DegenerateLagrangian(format!("mass matrix {:?} has no symbolic inverse", l.mass()))
    })?;
    let k = l.positions().len();
    let shifted: Vec<Expr> = (0..k)
        .map(|i| Expr::sym(&l.momenta()[i]) - l.linear()[i].clone())
        .collect();
    let v: Vec<Expr> = (0..k)
        .map(|i| simplify(&Expr::sum((0..k).map(|j| inverse[i][j].clone() * shifted[j].clone()).collect())))
        .collect();
    let pv = Expr::sum((0..k).map(|i| Expr::sym(&l.momenta()[i]) * v[i].clone()).collect());
    let h = simplify(&(pv - l.evaluate(&v)));
    Ok((HamiltonianSystem::new(space, h), report))
}

/// Recover `L` from `H = ½(p − b)ᵀ W (p − b) + V` with `W` nonsingular and
/// momentum-free; anything else is a `PatternMismatch`. Velocities are named
/// after the momenta with a leading `p` replaced by `v`.
pub fn inverse_legendre(sys: &HamiltonianSystem, policy: &SamplingPolicy) -> Result<QuadraticLagrangian> {
    let space = sys.space();
    let k = space.degrees_of_freedom();
    let h = sys.hamiltonian();
    let momenta = space.momenta();
    let mismatch = |why: String| Error::PatternMismatch(format!("H = {h} is not quadratic in the momenta: {why}"));
    let w: Matrix = (0..k)
        .map(|i| (0..k).map(|j| diff(&diff(h, &momenta[i]), &momenta[j])).collect())
        .collect();
    for row in &w {
        for e in row {
            if let Some(p) = momenta.iter().find(|p| e.contains_symbol(p)) {
                return Err(mismatch(format!("second derivative {e} depends on `{p}`")));
            }
        }
    }
    let mass = matrix::inverse(&w).ok_or_else(|| mismatch("momentum Hessian is singular".into()))?;
    let at_rest = |e: &Expr| simplify(&e.substitute(&|s| momenta.iter().any(|p| p == s).then(Expr::zero)));
    // ∂H/∂p at p = 0 equals −W b.
    let grad0: Vec<Expr> = momenta.iter().map(|p| at_rest(&diff(h, p))).collect();
    let b: Vec<Expr> = (0..k)
        .map(|i| simplify(&-Expr::sum((0..k).map(|j| mass[i][j].clone() * grad0[j].clone()).collect())))
        .collect();
    let mut quad = Vec::new();
    for i in 0..k {
        for j in 0..k {
            quad.push(Expr::rational(1, 2) * b[i].clone() * w[i][j].clone() * b[j].clone());
        }
    }
    let potential = simplify(&(at_rest(h) - Expr::sum(quad)));
    let velocities: Vec<String> = momenta
        .iter()
        .map(|p| match p.strip_prefix('p') {
            Some(rest) => format!("v{rest}"),
            None => format!("v_{p}"),
        })
        .collect();
    let l = QuadraticLagrangian::new(space.positions(), &velocities, mass)?
        .with_momenta(momenta)?
        .with_linear(b)?
        .with_potential(potential)?;
    let (back, _) = legendre(&l, policy)?;
    if is_zero(&(back.hamiltonian() - h), policy) != ZeroTest::Zero {
        return Err(mismatch("reconstructed Hamiltonian differs".into()));
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy() -> SamplingPolicy {
        SamplingPolicy::default()
    }

    #[test]
    fn free_particle() {
        let l = QuadraticLagrangian::new(&["q"], &["v"], vec![vec![Expr::one()]]).unwrap();
        let (h, rep) = legendre(&l, &policy()).unwrap();
        assert_eq!(h.hamiltonian(), &simplify(&(Expr::sym("p").pow(2) / Expr::int(2))));
        assert_eq!(rep.classification, Degeneracy::Nondegenerate);
    }

    #[test]
    fn particle_in_potential() {
        let m = Expr::sym("m");
        let vq = Expr::apply("V", Expr::sym("q"));
        let l = QuadraticLagrangian::new(&["q"], &["v"], vec![vec![m.clone()]])
            .unwrap()
            .with_potential(vq.clone())
            .unwrap();
        let (h, _) = legendre(&l, &policy()).unwrap();
        let expected = Expr::sym("p").pow(2) / (Expr::int(2) * m) + vq;
        assert_eq!(h.hamiltonian(), &simplify(&expected));
        let back = inverse_legendre(&h, &policy()).unwrap();
        assert!(back.difference(&l).unwrap().iter().all(Expr::is_zero_literal));
    }

    #[test]
    fn linear_lagrangian_is_degenerate() {
        let l = QuadraticLagrangian::new(&["q"], &["v"], vec![vec![Expr::zero()]])
            .unwrap()
            .with_linear(vec![Expr::one()])
            .unwrap();
        assert!(matches!(legendre(&l, &policy()), Err(Error::DegenerateLagrangian(_))));
    }

    #[test]
    fn magnetic_term_round_trip() {
        let q = Expr::sym("q");
        let l = QuadraticLagrangian::new(&["q", "r"], &["v1", "v2"], vec![
            vec![Expr::int(2), Expr::one()],
            vec![Expr::one(), Expr::int(3)],
        ])
        .unwrap()
        .with_linear(vec![q.clone(), Expr::sym("r").pow(2)])
        .unwrap()
        .with_potential(q.clone().cos())
        .unwrap();
        assert_eq!(l.momenta(), &["p1".to_string(), "p2".to_string()]);
        let (h, _) = legendre(&l, &policy()).unwrap();
        let back = inverse_legendre(&h, &policy()).unwrap();
        assert!(back.difference(&l).unwrap().iter().all(Expr::is_zero_literal));
    }

    #[test]
    fn quartic_is_not_quadratic() {
        let space = PhaseSpace::new(&["q"], &["p"]).unwrap();
        let h = HamiltonianSystem::new(space, Expr::sym("p").pow(4));
        assert!(matches!(inverse_legendre(&h, &policy()), Err(Error::PatternMismatch(_))));
    }

    #[test]
    fn kinetic_inverse() {
        let space = PhaseSpace::new(&["q"], &["p"]).unwrap();
        let h = HamiltonianSystem::new(space, Expr::sym("p").pow(2) / Expr::int(2));
        let l = inverse_legendre(&h, &policy()).unwrap();
        assert_eq!(l.lagrangian(), simplify(&(Expr::sym("v").pow(2) / Expr::int(2))));
    }

    #[test]
    fn rejects_velocity_dependent_potential() {
        let l = QuadraticLagrangian::new(&["q"], &["v"], vec![vec![Expr::one()]]).unwrap();
        assert!(l.with_potential(Expr::sym("v")).is_err());
    }
}
