//! Finite soft topological spaces: soft-set algebra, soft topologies,
//! connectedness, separation, pu-mappings and products, plus a randomized
//! harness that checks the theory's claims on small instances.

pub mod context;
pub mod document;
pub mod error;
pub mod harness;
pub mod mapping;
pub mod product;
pub mod soft_set;
pub mod topology;

/// Largest universe a bit-row can hold.
pub const MAX_POINTS: usize = 64;

pub use context::{Context, PointSet};
pub use error::{Error, Result};
pub use document::{MappingDocument, SpaceDocument};
pub use mapping::SoftMapping;
pub use product::{product_topology, ComplementIdentity, ProductContext};
pub use soft_set::{family_intersect, family_union, Membership, SoftSet};
pub use topology::{
    ComponentPartition, ConnectivityTable, Limits, Separation, SoftSpace, SubspaceView, Violation,
};
