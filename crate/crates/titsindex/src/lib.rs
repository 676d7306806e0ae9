//! Tits indices of semisimple groups: root-system toolkit, Dynkin diagrams with a
//! *-action, enumeration of admissible indices, the Brauer-class constraint engine,
//! cohomological-dimension lookups and the `tits` command line.

pub mod brauer;
pub mod candim;
pub mod cli;
pub mod diagram;
pub mod error;
pub mod indexer;
pub mod rootkit;

pub use error::{Result, TitsError};
