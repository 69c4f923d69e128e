use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verifiability {
    Metadata,
    Verifiable,
}

/// Degree of a closed form, the field equations it encodes, and the
/// interaction it is associated with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceEntry {
    pub degree: u8,
    pub family: &'static str,
    pub interaction: &'static str,
    pub verifiability: Verifiability,
    pub verifier: Option<&'static str>,
    pub note: &'static str,
}

pub fn correspondence_table() -> Vec<CorrespondenceEntry> {
    vec![
        CorrespondenceEntry {
            degree: 0,
            family: "quantum-mechanical wave function",
            interaction: "strong",
            verifiability: Verifiability::Metadata,
            verifier: None,
            note: "zero-degree forms as operator eigenfunctions; the bra- and ket- vectors of Dirac notation play this role. No computable content is attached.",
        },
        CorrespondenceEntry {
            degree: 1,
            family: "Hamiltonian mechanics",
            interaction: "weak",
            verifiability: Verifiability::Verifiable,
            verifier: Some("hamiltonian"),
            note: "Poincare-Cartan form p dq - H dt; Hamilton's flow lies in the kernel of its differential.",
        },
        CorrespondenceEntry {
            degree: 2,
            family: "Maxwell equations",
            interaction: "electromagnetic",
            verifiability: Verifiability::Verifiable,
            verifier: Some("maxwell"),
            note: "field 2-form F with dF = 0 and its dual with d*F = *J.",
        },
        CorrespondenceEntry {
            degree: 3,
            family: "Einstein equations",
            interaction: "gravitational",
            verifiability: Verifiability::Verifiable,
            verifier: Some("einstein"),
            note: "Einstein tensor with divergence-free contracted Bianchi identity.",
        },
    ]
}

impl fmt::Display for CorrespondenceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k={}  {:<34} {:<16} {:<10} {}",
            self.degree,
            self.family,
            self.interaction,
            format!("{:?}", self.verifiability),
            self.verifier.unwrap_or("-")
        )
    }
}
