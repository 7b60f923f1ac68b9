//! Numerical toolkit for Bloch mappings on the unit disc that factor through
//! a Hilbert space.
//!
//! The library computes certified brackets for the Bloch seminorm and for
//! Bloch-molecule norms, decides the Bloch domination preorder three
//! independent ways with machine-checkable witnesses, brackets the
//! Hilbert-factorization norm from below (Kwapien-type pairs, unitary
//! criterion) and above (discrete Pietsch certificates with explicit
//! factorization witnesses), and verifies the cross-norm duality pairing on
//! vector-valued molecules. Everything is deterministic given explicit seeds.

pub mod bloch;
pub(crate) mod cserde;
pub mod domination;
pub mod duality;
pub mod error;
pub mod factor;
pub mod molecules;
pub mod numkit;
pub mod suite;

pub use error::{Error, Result};
