//! Dense 2×2 / 4×4 complex linear algebra, Pauli operators, states and
//! propagators.
//!
//! Conventions used throughout the crate:
//! * ħ = 1, generator coefficients in rad/s, times in seconds;
//! * `R_n(θ) = exp(−iθ σ·n / 2)`;
//! * two-qubit operators act on `ancilla ⊗ system`, basis order
//!   |00⟩, |01⟩, |10⟩, |11⟩.

use std::fmt;
use std::str::FromStr;

mod hamiltonian;
mod operator;
mod propagator;
mod state;

pub use hamiltonian::{
    ConstHamiltonian, Dynamics, Envelope, TimeDepHamiltonian, TwoSpinHamiltonian, DEFAULT_STEPS,
};
pub use operator::{max_diff_up_to_phase, pauli, Operator};
pub use propagator::{
    on_ancilla, on_system, propagator_const, propagator_timedep, propagator_two_spin, rotation,
};
pub use state::{apply, expect, DensityMatrix, StateVector, SystemState};

/// Pauli axis label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn as_char(self) -> char {
        match self {
            PauliAxis::X => 'x',
            PauliAxis::Y => 'y',
            PauliAxis::Z => 'z',
        }
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for PauliAxis {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "x" => Ok(PauliAxis::X),
            "y" => Ok(PauliAxis::Y),
            "z" => Ok(PauliAxis::Z),
            other => Err(crate::Error::InvalidParameter(format!(
                "unknown Pauli axis '{other}'"
            ))),
        }
    }
}
