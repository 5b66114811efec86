//! Distinguishing partitions of complete multipartite graphs via asymmetric
//! labeled hypergraphs.
//!
//! The crate provides: an exact automorphism engine over vertex-labeled
//! hypergraphs; the bijections between regular partitions and their incidence
//! hypergraphs; parameter arithmetic, weights, values, defects, and the exact
//! value bounds; asymmetric and enriched tree counting; the extremal ring,
//! packing, chain, cycle, and near-regular constructions; and brute-force
//! oracles that certify everything at small scale.

pub mod construct;
pub mod error;
pub mod hypercore;
pub mod oracle;
pub mod partition;
pub mod trees;

pub use error::{Error, Result};
