//! Optimal rearrangement-invariant target spaces for Sobolev embeddings on
//! `R^n`, with numerical checks of the one-dimensional inequalities behind
//! them.

pub mod cli;
pub mod dsl;
pub mod error;
pub mod extf64;
pub mod funcrep;
pub mod norms;
pub mod optimal;
pub mod quad;
pub mod tail;
pub mod verify;
pub mod young;

pub use error::{Error, Result};
pub use funcrep::GridFn;
pub use tail::TailSpec;
