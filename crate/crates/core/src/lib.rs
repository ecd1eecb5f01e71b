//! Exact arithmetic on a computable fragment of the hyperreal line.
//!
//! Sequences are written in a small expression language (`expr`), turned
//! into canonical residue-class-piecewise rational functions (`hyper::Germ`)
//! and then compared, classified and pushed through three independent limit
//! engines (`limits`). Index sets live in the Boolean algebra of eventually
//! periodic subsets of N (`natset`), which is where the Fréchet filter and
//! the ultrafilter fragments (`filters`) make their decisions.

pub mod cli;
pub mod error;
pub mod expr;
pub mod filters;
pub mod hyper;
pub mod limits;
pub mod models;
pub mod natset;
pub mod poly;
pub mod rational;
pub mod starsets;

pub use error::{Error, ErrorKind, Result};
pub use expr::{parse, SeqExpr, SourceSpan};
pub use filters::{FilterBasis, Measure01, UltraFragment};
pub use hyper::{Classification, FrechetOrder, Germ};
pub use limits::{CounterExample, LimitVerdict, Outcome, ProofTrace};
pub use natset::NatSet;
pub use poly::{Poly, RatFn};
pub use rational::Rational;
pub use starsets::{HyperNat, RealSetDesc, SetPiece};
