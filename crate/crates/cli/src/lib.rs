//! Table regeneration, theorem queries and verification reports for the
//! `galimage` command.

pub mod query;
pub mod render;
pub mod tables;
pub mod verify;

use galimage::Error;

/// Process exit status for a failed command.
pub mod exit {
    pub const VERIFY_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const BUDGET: u8 = 3;
}

/// Budget overruns get their own status; every other library error is bad input.
pub fn exit_code(err: &Error) -> u8 {
    if err.is_budget() {
        exit::BUDGET
    } else {
        exit::USAGE
    }
}
