//! Exact computations with quandle colorings of knot diagrams, quandle and
//! relative group homology, and truncated-simplex representatives of the
//! fundamental class of a hyperbolic knot complement.

pub mod error;
pub mod field;
pub mod group;
pub mod grouphom;
pub mod invariants;
pub mod chains;
pub mod coloring;
pub mod diagram;
pub mod quandle;

pub use error::{Error, Result};
