//! Spiral point sets `z_n = √n · e^{2πiξ_n}`.
//!
//! The crate generates the points, measures circular gaps of the phases inside
//! annulus windows, certifies the Delone property on sampled windows, and
//! computes the plane geometry (packing and covering radius, sector densities)
//! and fine-scale statistics of the phase sequence.

pub mod cli;
pub mod error;
pub mod numeric;
pub mod parse;
pub mod gaps;
pub mod geometry;
pub mod phase;
pub mod render;
pub mod report;
pub mod spiral;
pub mod stats;

pub use error::{Error, Result};
