//! Decide whether an HV-restricted graph admits a good orthogonal drawing
//! (planar, strict, orientation-preserving) and construct one when it
//! exists.
//!
//! Two pipelines are provided: a fixed-embedding decision for plane graphs
//! built on corner classification and a unit-capacity max flow, and a
//! condition-based characterization with a constructive flag drawing for
//! biconnected outerplanar graphs. Brute-force oracles and an exact
//! geometric validator certify every answer at desk scale.

pub mod angles;
pub mod flow;
pub mod graph;
pub mod layout;
pub mod oracle;
pub mod outerplanar;
pub mod validate;

pub use graph::{LabeledGraph, Orientation, RotationSystem};
pub use layout::{Drawing, Point};
