//! Bounds on the parameters of locally recoverable codes.

pub mod asym;
pub mod classical;
pub mod cli;
pub mod error;
pub mod finite;
pub mod krawtchouk;
pub mod lpbound;
pub mod model;
pub mod oracle;
pub mod ratlp;

pub use error::{Error, Result};
