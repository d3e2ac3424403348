//! Gödel logics with the absoluteness operator `D`.

pub mod chain;
pub mod cli;
pub mod elimination;
pub mod error;
pub mod first_order;
pub mod formula;
pub mod gen;
pub mod par;
pub mod selftest;
pub mod semantics;

pub use error::{Error, Result};
