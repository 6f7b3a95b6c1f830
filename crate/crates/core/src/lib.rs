//! Low-order spectral moments of embedded GUE(2)-SU(r) ensembles: exact
//! Young-diagram combinatorics, the analytic moment engine, closed-form
//! family results, and a Fock-space Monte Carlo oracle.

pub mod closed_forms;
pub mod error;
pub mod fock_sim;
pub mod moments;
pub mod racah_tables;
pub mod scan;
pub mod verify;
pub mod young;

pub use error::{Error, Result};
pub use moments::{EnsembleSpec, Engine, MomentReport};
pub use young::{Channel, IrrepState, Partition, Statistics};
