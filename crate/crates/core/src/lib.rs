//! Dependency-aware requirement selection.
//!
//! * [`preference`]: explicit value dependencies from user preference data.
//! * [`vdg`]: value dependency graphs, implicit dependencies and influences.
//! * [`select`]: penalties, overall value and the selection models.
//! * [`simgen`]: random instances and the comparative simulation harness.
//! * [`io`]: CSV file formats shared by the command line tool.

pub mod error;
pub mod io;
pub mod num;
pub mod preference;
pub mod select;
pub mod simgen;
pub mod vdg;

pub use error::{Error, Result};
