//! Exact verification of q-supercongruences and their p-adic specializations.
//!
//! Everything here is exact: integers and rationals are arbitrary precision,
//! polynomials live in `Q[q]`, and a congruence is decided by divisibility.
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arith;
pub mod catalog;
pub mod congruence;
pub mod expr;
pub mod padic;
pub mod poly;
pub mod qseries;

pub use arith::{BigRat, PadicInt, Valuation};
pub use poly::{cyclotomic, q_integer, QPoly, QRat};

/// Which of a statement's two truncation points a sum is cut at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MChoice {
    /// The natural truncation, e.g. `(n-1)/2`.
    First,
    /// `n - 1`.
    Second,
}

impl MChoice {
    pub const BOTH: [MChoice; 2] = [MChoice::First, MChoice::Second];

    pub fn name(self) -> &'static str {
        match self {
            MChoice::First => "first",
            MChoice::Second => "second",
        }
    }

    pub fn parse(s: &str) -> Option<MChoice> {
        match s {
            "first" => Some(MChoice::First),
            "second" => Some(MChoice::Second),
            _ => None,
        }
    }
}
