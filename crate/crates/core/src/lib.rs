pub mod cc;
pub mod cluster;
pub mod error;
pub mod exact;
pub mod grass;
pub mod report;
pub mod rep;
pub mod torus;

pub use error::{Error, Result};
