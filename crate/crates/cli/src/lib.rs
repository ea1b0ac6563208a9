//! JSON front end for the coaxial decision procedures.
//!
//! A job names a command, carries its payload, and yields a [`Report`]
//! whose verdict maps to the process exit code.

pub mod job;
pub mod report;
mod run;

pub use job::{parse_job, parse_payload, Command, InputError, JobSpec, Options};
pub use report::{AuditEntry, Decision, Report};
pub use run::{parse_angles, run};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_INPUT_ERROR: i32 = 64;
