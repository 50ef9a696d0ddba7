//! Counting and enumerating finite O-sequences by multiplicity.
//!
//! A finite O-sequence `(a_0, ..., a_s)` is the Hilbert function of an
//! Artinian standard graded quotient of a polynomial ring. This crate counts
//! them for a given multiplicity `d = a_0 + ... + a_s` in two independent
//! ways:
//!
//! * [`enumerator`] builds every sequence with a three-bucket sliding window
//!   (append a `2`, or bump the last value when Macaulay's bound allows it);
//! * [`linusson`] evaluates a memoized recurrence over the decomposition of
//!   lex-segment sous-escaliers.
//!
//! [`lexseg`] provides the monomial machinery and a brute-force oracle, and
//! [`analysis`] turns the known inequalities on `O_d` into exact checks.

pub mod analysis;
pub mod enumerator;
mod error;
pub mod lexseg;
pub mod linusson;
pub mod macaulay;
pub mod oeis;

pub use error::{Error, Result};

/// Exact count of sequences or ideals.
pub type Count = u64;
