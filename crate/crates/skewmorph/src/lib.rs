//! Skew-morphisms, skew-product groups and regular Cayley maps on nonabelian
//! (characteristically) simple groups.
//!
//! The crate is organized around a small permutation kernel:
//!
//! - [`perm`] — permutations, cycle forms, parsing and printing
//! - [`group`] — permutation groups with deterministic stabilizer chains
//! - [`atlas`] — constructors for the named groups (alternating, symmetric,
//!   cyclic, PSL/PGL(2,p), M22, M23, direct powers, regular representations)
//!   and the mod-p arithmetic behind the PSL constructions
//! - [`skew`] — skew-morphisms, skew-product groups, classification into
//!   balanced / simple / mixed, factorizations, tiny-group enumeration
//! - [`maps`] — regular Cayley maps as triples `(X, sigma, iota)`, map
//!   invariants, isomorphism, censuses and direct products
//! - [`constructions`] — the explicit map families on PSL(2,p), alternating
//!   groups and their direct powers
//!
//! Everything is deterministic: stabilizer chains use a fixed base rule,
//! searches take explicit seeds, and census output is sorted canonically.

pub mod atlas;
pub mod constructions;
pub mod group;
pub mod maps;
pub mod perm;
pub mod rng;
pub mod skew;

pub use group::{GroupError, PermGroup};
pub use perm::{CycleForm, PermError, Permutation};
pub use rng::DEFAULT_SEED;
