//! Constructions and certificates around the restricted size Ramsey number
//! of a long cycle versus an odd cycle.
//!
//! The crate is organised by concern:
//!
//! * [`graph`] – bit-row adjacency graphs, cycle search, spectral discrepancy
//!   certificates, graph6 and edge-list I/O.
//! * [`fit`] – sampling, degree repair and certification of `n`-fit graphs.
//! * [`coloring`] – red/blue edge colorings, the two extremal constructions and
//!   monochromatic cycle avoidance checks.
//! * [`witness`] – constructive monochromatic cycles (bipartite-pair paths,
//!   blue spectra from a hub, red pancyclicity by rotation-extension).
//! * [`regularity`] – densities, ε-regular pairs, reduced graphs and the
//!   matching property `M_t`.
//! * [`arrow`] – exact arrowing search, CNF export and reference formulas.
//!
//! All randomness flows from explicit 64-bit seeds through [`rng`].

pub mod arrow;
pub mod coloring;
mod error;
pub mod fit;
pub mod graph;
pub mod regularity;
pub mod rng;
pub mod witness;

pub use error::{Error, Result};
pub use graph::{CycleWitness, Graph, GraphBuilder, VertexSet};
