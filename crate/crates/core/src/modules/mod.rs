//! Graded modules presented on finite windows of weight spaces.

mod adjoint;
mod axioms;
mod classify;
mod closure;
mod extension;
mod intermediate;
mod intertwiner;
mod spanning;
mod tensor;
mod window;

pub use adjoint::{adjoint_basis, adjoint_window};
pub use axioms::{check_module_axioms, ModuleAxiomReport, ModuleViolation};
pub use classify::{classify_window, Classification};
pub use closure::{irreducible_verdict, submodule_closure, ClosureTable, IrreducibilityVerdict};
pub use extension::{extension_space, ExtensionSpace, LevelSolution};
pub use intermediate::{act_intermediate, build_window, extend_trivially, Family, IntermediateSpec};
pub use intertwiner::{find_intertwiner, IntertwinerMap};
pub use spanning::{spanning_check_m, SpanningReport, M_RANGE};
pub use tensor::tensor;
pub use window::{ActionJson, KeyJson, ModuleJson, WindowedModule};
