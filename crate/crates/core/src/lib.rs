//! Exact invariants of Eschenburg 6-orbifolds: local groups, the singular
//! graph, positive-curvature certificates and orbifold cohomology.

pub mod bigjson;
pub mod cli;
pub mod cohomology;
pub mod curvature;
pub mod error;
pub mod families;
pub mod intlinalg;
pub mod params;
pub mod singular;

pub use error::{Error, Result};
pub use intlinalg::{AbelianGroup, IntMatrix};
pub use params::{EdgeId, EquivalenceOp, IsotropyGroup, Parity, TorusParams, VertexId};
