use std::fmt;
use std::time::Duration;

use serde::Serialize;

use crate::symbolic::ZeroTest;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl From<ZeroTest> for Verdict {
    fn from(z: ZeroTest) -> Verdict {
        match z {
            ZeroTest::Zero => Verdict::Pass,
            ZeroTest::NonZero => Verdict::Fail,
            ZeroTest::Unknown => Verdict::Unknown,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "Pass",
            Verdict::Fail => "Fail",
            Verdict::Unknown => "Unknown",
        })
    }
}

/// One residual that is expected to vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: String,
    pub verdict: Verdict,
}

/// Sign and index conventions every verdict is relative to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conventions {
    pub signature: &'static str,
    pub hodge: &'static str,
    pub codifferential: &'static str,
    pub electromagnetic: &'static str,
    pub connection: &'static str,
    pub curvature: &'static str,
}

impl Conventions {
    pub fn engine() -> Conventions {
        Conventions {
            signature: "Minkowski diag(-1,1,1,1) on (t,x,y,z); det_sign s declared and validated",
            hodge: "(*a)_J = sqrt|det g| a^I eps_IJ over increasing I; **a = s(-1)^(p(n-p)) a",
            codifferential: "delta a = s(-1)^(n(p+1)+1) *d*a; delta of a 0-form is 0",
            electromagnetic: "F = (E1 dx + E2 dy + E3 dz)^dt + B1 dy^dz + B2 dz^dx + B3 dx^dy; dF = 0, d*F = *J with J = J_mu dx^mu",
            connection: "Gamma[s][a][b] = Gamma^s_ab; A_{b;a} = d_a A_b - Gamma^s_ab A_s; T^s_ab = Gamma^s_ab - Gamma^s_ba",
            curvature: "R^r_smn = d_m Gamma^r_ns - d_n Gamma^r_ms + Gamma^r_ml Gamma^l_ns - Gamma^r_nl Gamma^l_ms; R_mn = R^r_mrn",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub scenario: String,
    pub checks: Vec<Check>,
    /// Computed quantities reported alongside the checks, e.g. `G[0,0]`.
    pub values: Vec<(String, String)>,
    pub notes: Vec<String>,
    pub conventions: Conventions,
    /// Wall-clock time; left out of serialized output so reports stay
    /// reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn new(scenario: &str) -> VerificationReport {
        VerificationReport {
            scenario: scenario.to_string(),
            checks: Vec::new(),
            values: Vec::new(),
            notes: Vec::new(),
            conventions: Conventions::engine(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn check(&mut self, name: &str, residual: impl fmt::Display, verdict: impl Into<Verdict>) {
        self.checks.push(Check {
            name: name.to_string(),
            residual: residual.to_string(),
            verdict: verdict.into(),
        });
    }

    pub fn value(&mut self, name: &str, value: impl fmt::Display) {
        self.values.push((name.to_string(), value.to_string()));
    }

    /// `Fail` if any check fails, else `Unknown` if any is undecided, else `Pass`.
    pub fn verdict(&self) -> Verdict {
        let verdicts = self.checks.iter().map(|c| c.verdict);
        if verdicts.clone().any(|v| v == Verdict::Fail) {
            Verdict::Fail
        } else if verdicts.clone().any(|v| v == Verdict::Unknown) {
            Verdict::Unknown
        } else {
            Verdict::Pass
        }
    }

    pub fn check_named(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.scenario, self.verdict())?;
        for c in &self.checks {
            writeln!(f, "  {} {}: {}", c.verdict, c.name, c.residual)?;
        }
        for (k, v) in &self.values {
            writeln!(f, "  {k} = {v}")?;
        }
        for n in &self.notes {
            writeln!(f, "  note: {n}")?;
        }
        Ok(())
    }
}
