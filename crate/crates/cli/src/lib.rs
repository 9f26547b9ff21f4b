//! Library surface of the CLI: scenario schema, report structures and the
//! self-test suite, shared between the binary and its integration tests.

pub mod report;
pub mod scenario;
pub mod selftest;
