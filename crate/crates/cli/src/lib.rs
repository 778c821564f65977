// SPDX-License-Identifier: Apache-2.0

//! Reproducible sweep experiments over bipartite channel families.
//!
//! Every command turns a channel specification, one or two parameter grids and
//! a [`RunConfig`] into a [`SweepTable`]. Tables carry the seed, sample count,
//! channel descriptor and tool version, which is enough to regenerate them
//! byte for byte.

pub mod commands;
pub mod config;
pub mod error;
pub mod family;
pub mod table;
pub mod validate;

pub use config::{Format, Grid, RunConfig};
pub use error::{CliError, CliResult};
pub use family::{ChannelSpec, Family, FamilyOptions};
pub use table::SweepTable;

/// Seed used when neither `--seed` nor `BIQ_SEED` is given.
pub const DEFAULT_SEED: u64 = 1;
