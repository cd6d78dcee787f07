mod anderson;
pub mod coupling;
pub mod diagnostics;
pub mod energetics;
pub mod error;
pub mod fields;
pub mod oracle;
pub mod runner;
pub mod stepper;

pub use error::{Error, Result};
