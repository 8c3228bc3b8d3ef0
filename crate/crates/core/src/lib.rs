//! Odd Khovanov homology, an integral lift of the geometric mod-2 complex and
//! its h-filtration spectral sequence.

pub mod classify;
pub mod complex;
pub mod edgesign;
pub mod error;
pub mod exterior;
pub mod homology;
pub mod interface;
pub mod oracles;
pub mod planar;

pub use error::{Error, Result};
