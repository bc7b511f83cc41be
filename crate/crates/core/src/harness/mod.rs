//! Configuration, command dispatch and persistence.

pub mod checks;
pub mod cli;
pub mod config;
pub mod io;

pub use checks::{hardy_suite, static_check, verify_suite, HardySuite, StaticReport};
pub use cli::{run_command, Command, ExitStatus};
pub use config::RunConfig;
