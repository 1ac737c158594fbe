pub mod acceptance;
pub mod cyclotomic;
pub mod distribution;
pub mod error;
pub mod expr;
pub mod field;
pub mod io;
pub mod microlocal;
pub mod oracle;
pub mod phase;
pub mod random;
pub mod residue;
pub mod scalar;
pub mod schwartz;

pub use error::{Error, Result};
pub use field::{FieldElement, LocalField};
pub use residue::{ResidueElement, ResidueField};
pub use scalar::MotivicScalar;
