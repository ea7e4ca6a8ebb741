pub mod cancel;
pub mod charring;
pub mod cli;
pub mod error;
pub mod modforms;
pub mod numeval;
pub mod qseries;
pub mod scalars;
pub mod suites;
pub mod theta;
pub mod transgress;

pub use error::{Error, Result};
