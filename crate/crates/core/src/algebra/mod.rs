//! Lie algebras of Block type and their relatives: basis keys, exact
//! brackets, the Laurent realization, and window-level verification sweeps.

mod checks;
pub(crate) mod constants;
mod element;
mod laurent;
mod variant;

pub use checks::{
    associated_graded_check, generation_closure, realization_check, verify_algebra_axioms, vir_consistency,
    AlgebraWindow, AxiomReport, AxiomViolation, ClosureMode, ClosureReport, PairCheck, VirConsistency,
};
pub use constants::StructureConstants;
pub use element::{bracket_with, AlgebraElement, Element, ElementJson, TermJson};
pub use laurent::{laurent_bracket, LaurentOp};
pub use variant::{AlgebraVariant, BasisKey};

/// `C_B ↦ VIR_CENTRAL_RESCALE · C_Vir` makes `L_{α,0} ↦ L_α` a
/// homomorphism; [`vir_consistency`] rederives it.
pub fn vir_central_rescale() -> crate::Rational {
    crate::scalar::rat(1, 2)
}
