//! Subcommand implementations. Each returns the `results` member of the report
//! and an exit code (0 unless a check inside the command failed).

pub mod analyze;
pub mod classify;
pub mod cone;
pub mod geom;
pub mod model;
pub mod net;
pub mod stdsp;
pub mod tables;
pub mod wedge;

pub type Outcome = anyhow::Result<(serde_json::Value, u8)>;
