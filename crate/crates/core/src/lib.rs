pub mod cli;
pub mod closedform;
pub mod decompose;
pub mod error;
pub mod harmonic;
pub mod physics;
pub mod rotation;
pub mod tensor;

pub use error::{Error, Result};
pub use rotation::Rotation;
pub use tensor::DenseTensor;
