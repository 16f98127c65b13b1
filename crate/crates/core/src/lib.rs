//! Sets of permutations with symbol locality.
//!
//! A permutation is stored in one-line form, one symbol per storage node. A
//! set of permutations has locality `d` when any lost symbol of any member can
//! be rebuilt from `d` other symbols of the same member. This crate builds such
//! sets, certifies their locality by exhaustive checking, evaluates the known
//! size bounds, and simulates repair and lookup with access accounting.

pub mod blocks;
pub mod caps;
pub mod construction;
pub mod error;
pub mod extend;
pub mod gf;
pub mod locality;
pub mod multiperm;
pub mod perm;
pub mod repair;
pub mod set;
pub mod sim;
pub mod windowed;

pub use caps::Caps;
pub use construction::{Construction, Scheme};
pub use error::{Error, Result};
pub use locality::{
    bounds, coset_census, determines, max_set_search, verify_locality, verify_locality_words,
    BoundReport, CosetCensus, LocalityVerdict, RepairMap, RepairRule, SearchOutcome,
};
pub use perm::{enumerate_sn, Permutation};
pub use repair::{ErasedView, LocalRepair, Probe, Repaired};
pub use set::{ConstructionId, PermSet};
pub use sim::NodeArray;
