//! Link diagrams, oriented arc configurations and the resolution cube.

mod config;
mod cube;
mod pd;

pub use config::{configuration_from_slots, Circle, End, OrientedConfiguration, Side, Slot};
pub use cube::{EdgePath, Entry, FaceAddress};
pub use pd::{parse_pd, zero_resolution, LinkDiagram, OrientationPolicy};
