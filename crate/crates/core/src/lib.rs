//! Cluster expansion of the hard-core model on products of regular
//! bipartite graphs, with exact brute-force oracles for small instances.

pub mod cli;
pub mod cluster;
pub mod compressed;
pub mod error;
pub mod numeric;
pub mod oracle;
pub mod polyring;
pub mod window;

pub use error::{Error, Result};
