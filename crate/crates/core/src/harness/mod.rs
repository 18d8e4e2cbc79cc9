//! Configuration, document builders and verification suites behind the
//! command-line tool.

pub mod config;
pub mod docs;
pub mod report;
pub mod suites;

pub use config::{Format, RunConfig};
pub use docs::{billey_terms, localize, pipe_dreams, poly, Document};
pub use report::{CheckRecord, ReportDocument, Status};
pub use suites::{verify, Suite};
