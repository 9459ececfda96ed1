//! File formats, evaluation reports, figures and the `somno` command line
//! on top of `somno-core`.

mod bytes;
pub mod checkpoint;
pub mod cli;
pub mod csvio;
pub mod edd;
pub mod error;
pub mod parallel;
pub mod report;
pub mod svg;

pub use error::{DecodeError, Error, Result};
