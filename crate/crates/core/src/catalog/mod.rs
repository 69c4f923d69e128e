//! The degree/field-equation correspondence as executable verifiers.

mod report;
mod table;
mod verify;

pub use report::{Check, Conventions, Verdict, VerificationReport};
pub use table::{correspondence_table, CorrespondenceEntry, Verifiability};
pub use verify::{
    reference_report, verify_einstein, verify_hamiltonian, verify_hamiltonian_corrupted,
    verify_maxwell, EinsteinSource,
};
