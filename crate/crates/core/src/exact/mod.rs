//! Exact arithmetic: rationals, phases on the circle, polar complex values
//! and integer lattice algebra.

pub mod lattice;
pub mod phase;
pub mod polar;
pub mod rat;

pub use lattice::{
    clear_denominators, integer_kernel, lattice_index, smith_normal_form, span_lattice,
    span_lattice_rat, subtorus_contains, IntMatrix, Smith,
};
pub use phase::{Lift, Phase, PhaseVec, PHASE_EPS};
pub use polar::{Modulus, PolarC};
pub use rat::{dot_int_rat, Rat};
