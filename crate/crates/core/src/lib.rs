//! An almost Dedekind domain of prescribed SP-rank, built from an
//! ordinal-indexed graph of monomials.
//!
//! The crate covers ordinals below `w^w`, the vertices `X[b; t]` and their
//! edges, the monoid of monomials with exact gcds, maximal ideals and
//! valuations, the critical-ideal chain, and brute-force oracles used to
//! cross-check all of it.

pub mod cli;
pub mod construction;
pub mod error;
pub mod graph;
pub mod ideals;
pub mod index_seq;
pub mod monoid;
pub mod oracle;
pub mod ordinal;
pub mod parse;
pub mod scheme;
pub mod sprank;

pub use construction::Construction;
pub use error::{Error, Result};
pub use graph::{find_path, Path, Vertex};
pub use ideals::{FgMonomialIdeal, MaxIdealKey};
pub use index_seq::{Alpha, IndexSeq};
pub use monoid::{monomial_gcd, GcdResult, Monomial};
pub use oracle::IndexBox;
pub use ordinal::Ordinal;
pub use scheme::WeightScheme;
pub use sprank::{CritDecision, NValue, StageSet};
