pub mod arith;
pub mod bounds;
pub mod cli;
pub mod doublecount;
pub mod embed;
pub mod error;
pub mod extremal;
pub mod family;
pub mod hypermatrix;
pub mod poset;
pub mod verify;

pub use error::{Error, Result};
pub use family::SetFamily;
pub use hypermatrix::HyperMatrix;
pub use poset::Poset;
