pub mod algebra;
pub mod boson;
pub mod config;
pub mod conventions;
pub mod error;
pub mod family;
pub mod fermion;
pub mod hybrid;
pub mod lct;
pub mod report;
pub mod suite;
pub mod sweep;

pub use error::{Error, Result};
