//! Degree-2 group cohomology with module coefficients: the extension cocycle
//! of `1 -> M_D -> Aut(H) -> Sp(M_D) -> 1`, coboundary and lifting decisions,
//! Sylow nonvanishing, and the negligibility report.

mod cocycle;
mod negligible;
mod table;

pub use cocycle::{
    default_lifts, extension_cocycle, extension_cocycle_with_lifts, is_coboundary, lifting_decision,
    odd_coboundary_witness, perturbed_lifts, CoboundaryVerdict, Cocycle2, LiftingDecision, MAX_UNKNOWNS,
};
pub use negligible::{
    negligibility_report, nonzero_via_sylow, NegligibilityReport, Nonvanishing, OrbitRow, MAX_REPORT_G, MAX_SYLOW_G,
    VERDICT_NOT_NEGLIGIBLE,
};
pub use table::{FiniteGroupTable, MAX_GROUP_TABLE};
