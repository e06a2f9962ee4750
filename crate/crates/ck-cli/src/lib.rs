//! Library side of the command-line interface: configuration, figure-series
//! construction, CSV/metadata emission, oracle checks and parameter sweeps.

pub mod config;
pub mod csvout;
pub mod figures;
pub mod oracle_check;
pub mod sweep;
