pub mod error;
pub mod estimators;
pub mod exact;
pub mod exploration;
pub mod graph;
pub mod isoperimetry;
pub mod percolation;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{Family, GraphWindow, Neighbor, OrientedEdge, VertexSet};
