//! Finite partial groups and localities: construction, partial normal
//! subgroups, products, quotients, and exhaustive verification of their
//! structural properties.

pub mod amalgam;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod group;
pub mod locality;
pub mod model;
pub mod normal;
pub mod par;
pub mod partial;
pub mod perm;
pub mod quotient;
pub mod report;
pub mod set;

pub use amalgam::{build_amalgam, Amalgam, AmalgamSpec};
pub use error::{Error, Result};
pub use group::{generate_group, FiniteGroup, Subgroup};
pub use locality::{check_locality, delta_close, locality_from_group, DeltaFamily, Locality};
pub use partial::{classify_subset, subset_product, PartialGroup, SubsetHandle, SubsetKind};
pub use perm::Perm;
pub use report::{Check, CheckReport, Status};
pub use set::{Elem, ElemSet};
