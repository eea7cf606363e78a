pub mod catalog;
pub mod chow;
pub mod cli;
pub mod correlation;
pub mod error;
pub mod hodge;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod matroid;
pub mod mixed;

pub use error::{Error, Result};
