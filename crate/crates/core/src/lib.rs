//! Exact counts of N-free elements, elements of prescribed multiplicative
//! order and irreducible polynomials with prescribed trace over finite
//! fields, together with the brute-force counters that check them.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod numtheory;
pub mod ffield;
pub mod cyclotomic;
pub mod gauss;
pub mod oracle;
pub mod formulas;
