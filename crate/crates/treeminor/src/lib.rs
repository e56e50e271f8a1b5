//! Laboratory for the topological-minor order on finite trees and finitely
//! presented locally finite trees.

pub mod acceptance;
pub mod dot;
pub mod dsl;
pub mod embed;
pub mod error;
pub mod family;
pub mod finite;
pub mod generate;
mod greedy;
mod matching;
pub mod ordinal;
pub mod seq;
pub mod spined;
pub mod verdict;

pub use error::{Error, Result};
pub use verdict::Verdict;
