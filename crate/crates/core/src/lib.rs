pub mod bounds;
pub mod claims;
pub mod edm;
pub mod error;
pub mod exact;
pub mod nested;
pub mod nmf;
pub mod protocol;
pub mod polygeom;

pub use error::{Error, Result};
