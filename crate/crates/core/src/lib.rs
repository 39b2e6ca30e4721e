pub mod algebra;
pub mod error;
pub mod kernels;
pub mod ops;
pub mod poly;
pub mod processes;
pub mod quad;
pub mod report;
pub mod repr;
pub mod scalar;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
