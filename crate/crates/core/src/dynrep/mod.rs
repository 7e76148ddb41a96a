//! Evaluation representations of the L-operator and half currents as atom lists,
//! their tensor products, and the Hopf-structure checks.

mod amplitude;
pub mod checks;
mod images;
mod operator;
mod tensor;

pub use amplitude::PAmplitude;
pub use images::{
    antipode_op, entry_op, half_current_op, phi_l, rho_kl, EntryKind, HalfCurrentKind,
};
pub use operator::{operator_residual, Atom, EvalModuleSpec, Module, SlotOperator};
pub use tensor::{apply, coproduct3_op, coproduct_op, fuse, TensorOperator, TensorState};
