//! Edge-list files, generator specs, seeded experiment runs with CSV output,
//! cost sweeps and the acceptance suite for [`arbor_core`].
//!
//! The `arbor` binary is a thin clap front end over these modules.

pub mod acceptance;
pub mod experiment;
pub mod io;
pub mod source;
pub mod sweep;
