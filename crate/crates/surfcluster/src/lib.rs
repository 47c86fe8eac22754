//! Cluster-ensemble structures on triangulated marked surfaces, computed exactly.

pub mod cluster;
pub mod curve;
pub mod duality;
pub mod ensemble;
pub mod error;
pub mod gluing;
pub mod json;
pub mod lamination;
pub mod matrix;
pub mod poly;
pub mod surface;
pub mod verify;
pub mod wilson;

pub use error::{Error, Result};
