pub mod analysis;
pub mod arrangement;
pub mod combinatorics;
pub mod error;
pub mod freeness;
pub mod realization;
pub mod twins;
pub mod exactmath;

pub use error::{Error, Result};
