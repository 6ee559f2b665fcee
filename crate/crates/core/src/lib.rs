pub mod cli;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod format;
pub mod gadgets;
pub mod graph;
pub mod kroute;
pub mod lp;
pub mod random;
pub mod rational;
pub mod report;
pub mod simplex;
pub mod special;
pub mod transform;

pub use error::{Error, Result};
