//! Visibility maps of 1.5D terrains.
//!
//! A terrain is an x-monotone polygonal chain; viewpoints sit on its
//! vertices. The crate computes which parts of the terrain are visible
//! ([`viewshed::compute_vis`]), by which viewpoints
//! ([`viewshed::compute_colvis`]), and which visible viewpoint is closest
//! ([`vorvis::compute_vorvis`]) under the Euclidean, along-terrain and link
//! metrics.

pub mod error;
pub mod geometry;
pub mod oracle_bench;
pub mod viewshed;
pub mod vorvis;

pub use error::{Error, Result};
