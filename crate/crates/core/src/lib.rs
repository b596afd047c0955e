pub mod cli;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod io;
pub mod mixed;
pub mod moment;
mod par;
pub mod params;
pub mod quadrature;
pub mod special;
pub mod star;
pub mod verify;

pub use error::{Error, Result};
