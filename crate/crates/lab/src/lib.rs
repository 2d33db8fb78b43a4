//! JSON scenarios, reports and instance corpora for the `finsler` checkers.

pub mod error;
pub mod experiments;
pub mod json;
pub mod report;
pub mod run;
pub mod scenario;

pub use error::{LabError, LabResult};
