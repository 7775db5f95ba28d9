//! File formats, figure tables and the `qldp` command line on top of
//! [`qldp_core`].

pub mod cli;
pub mod error;
pub mod experiments;
pub mod format;
pub mod spec;
pub mod table;

pub use error::CliError;
