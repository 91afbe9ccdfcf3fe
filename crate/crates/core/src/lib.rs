//! Continuous-variable simulation of coherent-state cloning and telecloning
//! in a cavity coupled to the motion of trapped ions.
//!
//! The [`gaussian`] backend carries every protocol; [`fock`] is an
//! independent truncated-Fock simulator used to cross-check it on small
//! instances.

pub mod cloning;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod interactions;
pub mod report;
pub mod telecloning;

pub use cloning::{closed_form_fidelity, closed_form_q, run_clone, CloneReport};
pub use error::{Error, Result};
pub use fock::{compare_backends, FockState};
pub use gaussian::{GaussianState, Quadrature, SymplecticTransform};
pub use interactions::{
    beam_splitter_hamiltonian, evolve, squeezing_hamiltonian, ProtocolParams, QuadraticHamiltonian,
};
pub use num_complex::Complex64;
pub use telecloning::{resource_state, teleclone, TeleclonePlan, TelecloneReport};
