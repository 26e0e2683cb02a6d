//! Qudit statevector simulation and the HHL linear-system algorithm in
//! arbitrary qudit dimension, with a linearized coupled-cluster driver and a
//! qubit-versus-qutrit resource model.
//!
//! The crate is organised bottom-up:
//!
//! - [`state`]: dense statevectors, gate application, projection.
//! - [`gates`]: `X`, `Z`, `H`, `P_l`, planar rotations, two-qudit gates and
//!   `e^{iAt}`.
//! - [`circuit`]: instruction lists with gate tallies.
//! - [`qft`]: base-`d` QFT and phase estimation.
//! - [`hhl`]: the full solver; [`swap_test`]: overlap readout.
//! - [`chem`]: correlation energies from CI Hamiltonians.
//! - [`resources`]: closed-form qudit and gate counts.

pub mod chem;
pub mod circuit;
pub mod error;
pub mod gates;
pub mod hhl;
mod kernel;
pub mod linalg;
pub mod qft;
pub mod resources;
pub mod state;
pub mod textio;
pub mod toy;

pub use error::{Error, Result};
pub use gates::GateSpec;
pub use hhl::{choose_defaults, hhl_solve, hhl_solve_real, HhlConfig, HhlSolution};
pub use state::{BasisIndex, ControlMode, Statevector};
