//! Exact elements of Z[ζ_p] in the power basis 1, ζ, …, ζ^{p-2}.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CyclotomicError {
    #[error("operands live in Z[ζ_{0}] and Z[ζ_{1}]")]
    PMismatch(u64, u64),
    #[error("{u} is not a unit modulo {p}")]
    NotUnit { u: u64, p: u64 },
}

type Result<T> = core::result::Result<T, CyclotomicError>;

/// A cyclotomic integer Σ coords[i]·ζ_p^i with exactly p − 1 coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    p: u64,
    coords: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p: u64) -> Self {
        CycInt { p, coords: vec![BigInt::zero(); (p - 1) as usize] }
    }

    pub fn from_integer(p: u64, n: impl Into<BigInt>) -> Self {
        let mut x = Self::zero(p);
        x.coords[0] = n.into();
        x
    }

    /// ζ_p^t, reducing ζ^{p-1} = −(1 + ζ + … + ζ^{p-2}).
    pub fn from_root_power(p: u64, t: u64) -> Self {
        let mut hist = vec![0i64; p as usize];
        hist[(t % p) as usize] = 1;
        Self::from_histogram(p, &hist)
    }

    /// Σ_t hist[t]·ζ^t for a histogram of length p.
    pub fn from_histogram(p: u64, hist: &[i64]) -> Self {
        assert_eq!(hist.len() as u64, p, "histogram length must equal p");
        let top = hist[(p - 1) as usize];
        let coords = hist[..(p - 1) as usize].iter().map(|&h| BigInt::from(h - top)).collect();
        CycInt { p, coords }
    }

    fn from_redundant(p: u64, mut full: Vec<BigInt>) -> Self {
        let top = full.pop().expect("length p");
        for c in &mut full {
            *c -= &top;
        }
        CycInt { p, coords: full }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    fn same_p(&self, other: &CycInt) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(CyclotomicError::PMismatch(self.p, other.p))
        }
    }

    pub fn add(&self, other: &CycInt) -> Result<CycInt> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &CycInt) -> Result<()> {
        self.same_p(other)?;
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += b;
        }
        Ok(())
    }

    pub fn sub(&self, other: &CycInt) -> Result<CycInt> {
        self.same_p(other)?;
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        Ok(CycInt { p: self.p, coords })
    }

    pub fn scale(&self, k: &BigInt) -> CycInt {
        CycInt { p: self.p, coords: self.coords.iter().map(|a| a * k).collect() }
    }

    pub fn neg(&self) -> CycInt {
        CycInt { p: self.p, coords: self.coords.iter().map(|a| -a).collect() }
    }

    /// The product ζ^t · x. Multiplication by a root of unity permutes the
    /// redundant length-p representation, so no general product is needed.
    pub fn mul_root_power(&self, t: u64) -> CycInt {
        let p = self.p as usize;
        let t = (t % self.p) as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, c) in self.coords.iter().enumerate() {
            full[(i + t) % p] = c.clone();
        }
        Self::from_redundant(self.p, full)
    }

    /// Image under the Galois automorphism ζ ↦ ζ^u; u = p − 1 is complex
    /// conjugation.
    pub fn conj_apply(&self, u: u64) -> Result<CycInt> {
        if u % self.p == 0 {
            return Err(CyclotomicError::NotUnit { u, p: self.p });
        }
        let p = self.p as usize;
        let u = (u % self.p) as usize;
        let mut full = vec![BigInt::zero(); p];
        for (i, c) in self.coords.iter().enumerate() {
            full[(i * u) % p] = c.clone();
        }
        Ok(Self::from_redundant(self.p, full))
    }

    /// The rational integer value, if the element lies in Z.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.coords[1..].iter().all(Zero::is_zero).then(|| self.coords[0].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_integer().is_some_and(|n| n.is_one())
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_integer() {
            return write!(f, "{n}");
        }
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}
