//! Session store, HTTP API and command line for the natural-deduction
//! workbench. Sessions are event logs: state is always recomputed by
//! replaying a session's commands against its exercise.

pub mod api;
pub mod cli;
pub mod error;
pub mod session;
pub mod store;

pub use error::ServiceError;
pub use store::Store;
