//! Simulation of ancilla-assisted n-time correlation measurements on a
//! two-level system.
//!
//! * [`qcore`]: 2×2/4×4 complex algebra, Pauli operators, states, propagators;
//! * [`protocol`]: the ancilla circuit and correlation extraction;
//! * [`oracle`]: direct Heisenberg-picture reference evaluation;
//! * [`response`]: Kubo response function, susceptibility, second-order term;
//! * [`nmr`]: two-spin NMR pulse compilation and simulation.
//!
//! Every numeric type is generic over [`Real`] (`f32` or `f64`); the `*64`
//! and `*32` aliases below fix the scalar.

pub mod error;
pub mod nmr;
pub mod oracle;
pub mod protocol;
pub mod qcore;
pub mod response;
mod scalar;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type Complex64 = C<f64>;
pub type Complex32 = C<f32>;

pub type Operator64 = qcore::Operator<f64>;
pub type Operator32 = qcore::Operator<f32>;
pub type StateVector64 = qcore::StateVector<f64>;
pub type StateVector32 = qcore::StateVector<f32>;
pub type DensityMatrix64 = qcore::DensityMatrix<f64>;
pub type DensityMatrix32 = qcore::DensityMatrix<f32>;
pub type SystemState64 = qcore::SystemState<f64>;
pub type ConstHamiltonian64 = qcore::ConstHamiltonian<f64>;
pub type ConstHamiltonian32 = qcore::ConstHamiltonian<f32>;
pub type TimeDepHamiltonian64 = qcore::TimeDepHamiltonian<f64>;
pub type Dynamics64 = qcore::Dynamics<f64>;
pub type Dynamics32 = qcore::Dynamics<f32>;
pub type CorrelationSpec64 = protocol::CorrelationSpec<f64>;
pub type CorrelationSpec32 = protocol::CorrelationSpec<f32>;
pub type ProtocolResult64 = protocol::ProtocolResult<f64>;
pub type ResponseParams64 = response::ResponseParams<f64>;
pub type MoleculeParams64 = nmr::MoleculeParams<f64>;
pub type PulseSequence64 = nmr::PulseSequence<f64>;
