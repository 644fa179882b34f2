pub mod bits;
pub mod blocks;
pub mod canonical;
pub mod error;
pub mod family;
pub mod search;
pub mod separability;
pub mod shifting;
pub mod verify;

pub use error::{Error, Result};
pub use family::{are_isomorphic, embeds_into, k_subsets, EdgeMask, ElementSet, GroundSet, SetFamily, random_intersecting};
