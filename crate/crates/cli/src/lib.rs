//! Library surface of the `uhvforge` CLI: command implementations, file
//! schemas and the run-report/exit-code contract. The binary in `main.rs` is
//! a thin argument-parsing shell over these modules.

pub mod analyze;
pub mod error;
pub mod fit;
pub mod generate;
pub mod report;
pub mod schema;
pub mod simulate;
pub mod util;
