//! JSON documents, reports and the command-line front end for
//! [`quasilin_core`].

pub mod cli;
pub mod docs;
pub mod oracle;
pub mod report;

pub use cli::run;
pub use docs::{ConservedDoc, DocError, GeneratorDoc, ProblemDoc, SolutionDoc};
pub use report::{Report, VerdictDoc};
