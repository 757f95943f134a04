//! Program cost versus accuracy for universal programming of `d`-dimensional
//! unitary gates.
//!
//! The crate builds the measure-and-operate protocol (a lattice of Young
//! diagrams with product sine weights), evaluates its entanglement fidelity
//! through the score matrix, compares the achieved error and probe dimension
//! with the guaranteed bounds, and cross-checks everything against brute-force
//! oracles.
//!
//! ```
//! use progcost::reporting::protocol_report;
//!
//! let r = protocol_report(8, 2).unwrap();
//! assert!(r.pass_flags.all());
//! assert!((r.epsilon_qstar - 0.10984).abs() < 1e-5);
//! ```

pub mod bounds;
pub mod error;
pub mod exec;
pub mod optimize;
pub mod oracle;
pub mod phase;
pub mod protocol;
pub mod reporting;
pub mod scoring;
pub mod verify;
pub mod young;

pub use error::{Error, Result};
pub use protocol::{viable_set, DiagramSet, WeightVector};
pub use young::YoungDiagram;
