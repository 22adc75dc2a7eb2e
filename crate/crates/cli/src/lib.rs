//! Instance-file handling shared by the command-line binary and its
//! integration tests.

pub mod format;
