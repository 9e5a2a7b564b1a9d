//! Dilatation and entropy estimation for braids, and the closed-form braid
//! families used to cross-check them.

mod entropy;
mod families;
mod pa;

pub use entropy::{entropy_estimate, EntropyEstimate};
pub use families::{
    family_eigenvector, family_polynomial, family_word, tau_characteristic_polynomial,
    verify_family, Family, FamilyReport,
};
pub use pa::{analyze_pa, Diagnostics, PaOptions, PaReport, PaStatus, RestartDiagnostics};
