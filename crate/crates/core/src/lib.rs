pub mod cli;
pub mod complete;
pub mod dickson;
pub mod error;
pub mod extint;
pub mod gring;
pub mod group;
pub mod linalg;
pub mod modres;
pub mod regseq;
pub mod ring_extract;

pub use error::{Error, Result};
