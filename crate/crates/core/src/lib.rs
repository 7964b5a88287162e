//! Numerical laboratory for properly convex projective domains built from
//! cubic differentials and from deformed triangle reflection groups.

pub mod cubic;
pub mod developing;
pub mod error;
pub mod experiments;
pub mod flat_surface;
pub mod gh;
pub mod io;
pub mod polygon;
pub mod reflection;
pub mod spline;
pub mod wang;

pub use cubic::CubicDifferential;
pub use error::{Error, Result};
