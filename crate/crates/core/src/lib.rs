//! Compile small quantum circuits into idealized NMR pulse sequences,
//! simulate them on density matrices in the product-operator basis, and
//! verify each compiled sequence against its gate matrix up to global phase.
//!
//! Conventions used throughout:
//!
//! - every propagator is `exp(-iθG)`;
//! - qubit 0 is the most significant bit of a basis-state index;
//! - angles are radians in the library and degrees in the text formats.

pub mod error;
pub mod fmt;
pub mod gates;
pub mod operator;
pub mod product;
pub mod pulse;
pub mod sim;
pub mod verify;

pub use error::{Error, Result};
pub use gates::{
    compile_circuit, gate_matrix, lower_gate, parse_circuit, Circuit, CompileOptions, Gate, GateKind,
    HadamardStyle, ZRealization,
};
pub use operator::{coupling_unitary, equal_up_to_global_phase, fidelity, rotation_unitary, Matrix, Unitary};
pub use product::{
    basis_terms, coherence_orders, decompose, decompose_diagonal_phase, recompose, Decomposition,
    ProductOperatorTerm,
};
pub use pulse::{expand_composite_z, sequence_unitary, PulseEvent, PulseSequence};
pub use sim::{
    apply_sequence, magnetization, pseudo_pure_temporal, pure_state, thermal_state, DeviationMatrix,
};
pub use verify::{approximate_toffoli_pattern, verify_compilation, VerificationReport};
