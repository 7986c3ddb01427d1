pub mod cli;
pub mod error;
pub mod field;
pub mod free;
pub mod grassmann;
pub mod parallel;
pub mod rewrite;
pub mod tensor;
mod text;
pub mod verifier;
pub mod witness;

pub use error::{Error, Result};
