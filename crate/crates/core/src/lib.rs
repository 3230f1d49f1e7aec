//! Explicit infinite permutations of the naturals with closed-form forward
//! and inverse evaluation, finite-prefix verifiers for their pairwise
//! properties (divergence, repeated collisions, complete difference), and
//! exact permutation-capacity computation for small `n`.
//!
//! The crate is organized around four surfaces:
//!
//! * [`streams`] — the [`Construction`](streams::Construction) type and its
//!   evaluation, inversion, prefix and validation operations;
//! * [`graphs`] — adjacency predicates on the naturals and on finite vertex
//!   sets;
//! * [`verify`] — difference sequences, divergence certificates, collision
//!   scans and complete-difference checks over finite prefixes;
//! * [`capacity`] — the difference graph on permutations of `[n]` and an
//!   exact branch-and-bound clique search for ω(G_n).
//!
//! [`suite`] bundles the library's invariants into a runnable pass/fail
//! report. All operations are pure; nothing in the crate holds mutable
//! state.

pub mod capacity;
pub mod graphs;
mod nt;
pub mod streams;
pub mod suite;
pub mod verify;

pub use graphs::GraphSpec;
pub use streams::{Construction, HorizonCap};
