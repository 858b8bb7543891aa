//! Library surface of the CLI crate: the exact text formats, shared with the
//! integration and acceptance tests.

pub mod formats;
