pub mod epsnet;
pub mod error;
pub mod measures;
pub mod protocol;
pub mod qcore;
pub mod tomo;
pub mod witnesses;

pub use error::{Error, Result};
