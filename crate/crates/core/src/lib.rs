pub mod agreement;
pub mod cli;
pub mod analytics;
pub mod corpus;
pub mod error;
pub mod feedback;
mod json;
pub mod scorer;
pub mod segmenter;
pub mod service;

pub use error::{Error, Result};
