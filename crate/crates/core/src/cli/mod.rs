//! Expression parsing, suite execution and reporting behind the `qcalc`
//! binary.

mod parse;
mod report;

pub use parse::parse_expr;
pub use report::{run_suite, SuiteId, SuiteOptions, SuiteReport, SCHEMA_VERSION};
