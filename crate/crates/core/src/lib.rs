pub mod binary;
pub mod blowup;
pub mod census4;
pub mod error;
pub mod formats;
pub mod gf;
pub mod graphs;
pub mod hyperplane;
pub mod level;
pub mod orbits;
pub mod pointset;
pub mod quadric;
pub mod reference;
pub mod report;
pub mod segre;
pub mod veldkamp;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
