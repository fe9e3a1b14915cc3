pub mod convex;
pub mod error;
pub mod generators;
pub mod hermitian;
pub mod quantization;
pub mod weights;
pub mod linalg;

pub use error::{Error, Result};
