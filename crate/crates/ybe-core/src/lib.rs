//! Exact symbolic machinery for Belavin-Drinfeld triples on sl(n) and the
//! quantum R-matrices they induce.
//!
//! Everything is computed over arbitrary-precision rationals; every identity
//! (quantum Yang-Baxter, Hecke, classical Yang-Baxter, non-unitarity,
//! semiclassical limit) is checked by exact cancellation, never by tolerance.
//!
//! Pipeline: enumerate triples ([`bdtriples`]) -> solve the Cartan-part
//! constraint system ([`admissible`]) -> assemble classical r and quantum R
//! ([`ggsbuild`]) -> verify ([`verifier`]). [`paperdata`] carries the bundled
//! sl(5) reference tables and the 25x25 golden matrix used as ground truth.

pub mod exactring;
pub mod tensorops;
pub mod rootdata;
pub mod bdtriples;
pub mod admissible;
pub mod ggsbuild;
pub mod verifier;
pub mod paperdata;

pub use exactring::{Rat, Scalar};
pub use tensorops::SparseMatrix;
