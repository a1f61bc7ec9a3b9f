pub mod action;
pub mod analytics;
pub mod atlas;
pub mod canon;
pub mod design;
pub mod elements;
pub mod error;
pub mod group;
pub mod m11;
pub mod perm;
pub mod search;
pub mod srg;

pub use action::{coset_action, GroupAction, Suborbits};
pub use atlas::{enumerate_subgroup_classes, AtlasBudget, SubgroupClass};
pub use error::{Error, Result};
pub use group::{Orbit, PermGroup};
pub use perm::Permutation;
