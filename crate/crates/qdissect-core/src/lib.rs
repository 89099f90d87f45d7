//! Exact arithmetic for eta-quotient-like infinite products, Ramanujan theta
//! functions, and quadratic-lattice vanishing certificates.
//!
//! The crate is organized as a small tower:
//!
//! * [`series`]: truncated Laurent series over arbitrary-precision integers,
//!   with exact truncation-window bookkeeping, Pochhammer/product expansion,
//!   and residue-class dissection;
//! * [`theta`]: two-variable theta specifications `f(a, b)`, their series and
//!   product forms, and the three splitting identities used to dissect them;
//! * [`lattice`]: binary-quadratic lattice sums, residue-class decomposition,
//!   canonical forms under unimodular changes of variable, and cancellation
//!   reports;
//! * [`verify`]: claims about vanishing arithmetic progressions, a brute-force
//!   verifier, a certifying prover, the built-in claim catalog, and a scanner
//!   for discovering new vanishing progressions.
//!
//! Everything is `no_std + alloc`: the only global requirement is a heap.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod lattice;
pub mod propcheck;
pub mod series;
pub mod theta;
pub mod verify;

pub use error::{Error, Result};
