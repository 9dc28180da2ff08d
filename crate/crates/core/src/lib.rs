//! Thresholds, certification and constructions for k-star decompositions
//! of random d-regular graphs.

pub mod analytic;
pub mod certify;
pub mod cli;
pub mod decomp;
pub mod graph;
