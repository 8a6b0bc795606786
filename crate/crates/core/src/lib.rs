pub mod certificate;
pub mod checks;
pub mod convex;
pub mod effect;
pub mod error;
pub mod fourier;
pub mod group;
pub mod group_algebra;
pub mod irreps;
pub mod linalg;
pub mod monoid;
pub mod rep;
pub mod state;
pub mod tensor_case;
pub mod verify;

pub use error::{Error, Result};
