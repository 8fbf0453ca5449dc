//! Mechanism integrated information for classical transition probability
//! matrices and for qubit systems under unitary dynamics.
//!
//! Basis states are indexed big-endian: unit 0 is the most significant
//! digit. Information is measured in bits.

pub mod classical;
pub mod error;
pub mod exec;
pub mod partitions;
pub mod quantum;
pub mod report;
pub mod search;
pub mod tensor;

pub use error::{Error, Result};
pub use exec::ExecMode;
pub use partitions::{DisintegratingPartition, Part, SetPartition, UnitSet};
pub use search::{Direction, Distinction, Mip, Options, PurviewTie};
pub use tensor::{CMatrix, CVector, DensityMatrix, Tolerance, UnitaryOperator};
