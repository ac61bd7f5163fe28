//! The `charvar` session language: parser, command runner and fixture
//! runner.

pub mod exec;
pub mod fixtures;
pub mod session;

pub use exec::{render, run_session, run_text, timeout_from_env, Options, OutputOrder, SessionOutput, Status};
pub use fixtures::{run_fixtures, FixtureReport, Outcome};
pub use session::{parse_session, parse_session_with, Command, ParseError, RingDefaults, Session};
