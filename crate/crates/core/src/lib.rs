//! Entanglement distribution between trapped ions held in optomechanical
//! cavities: effective four-level dynamics, projective and Bell-state
//! measurements, and a full truncated-Hamiltonian cross-check.

pub mod bellprep;
pub mod dynamics;
pub mod effham;
pub mod error;
pub mod fock;
pub mod integrator;
pub mod linalg;
pub mod measurement;
pub mod oracle;
pub mod params;
pub mod register;
pub mod runner;

pub use error::{Error, Result};
pub use measurement::{BellChoice, ProtocolRecord};
pub use params::ModelParams;
pub use register::{AmplitudeFamilies, PairState};
