//! Exact max-plus linear algebra, the Hilbert metric on tropical projective
//! space, and lattice buildings over a field with rational valuations.

pub mod building;
pub mod cli;
pub mod error;
pub mod hahn;
pub mod metric;
pub mod oracle;
pub mod props;
pub mod random;
pub mod rational;
pub mod residuation;
pub mod spectra;
pub mod trop;

pub use error::{Error, Result};
pub use rational::Q;
