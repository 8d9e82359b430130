pub mod cli;
pub mod description;
pub mod error;
pub mod graded;
pub mod linalg;
pub mod oracle;
pub mod quot;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
