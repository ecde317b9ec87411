//! Dense univariate polynomials over a finite field, just enough for
//! irreducibility testing.

use alloc::vec;
use alloc::vec::Vec;

/// Field operations needed by the polynomial routines.
pub trait FieldOps {
    type Elem: Clone + PartialEq + core::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Number of elements of the field.
    fn size(&self) -> u64;
}

/// The prime field Z/p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    pub p: u64,
}

impl FieldOps for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        crate::numtheory::mul_mod_u64(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> u64 {
        crate::numtheory::pow_mod_u64(*a, self.p - 2, self.p)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn size(&self) -> u64 {
        self.p
    }
}

/// Coefficients, lowest degree first, with no trailing zeros.
pub type Poly<E> = Vec<E>;

fn trim<F: FieldOps>(field: &F, mut a: Poly<F::Elem>) -> Poly<F::Elem> {
    while a.last().is_some_and(|c| field.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn degree<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

/// Remainder of `a` modulo the nonzero `f`.
pub fn rem<F: FieldOps>(field: &F, a: &[F::Elem], f: &[F::Elem]) -> Poly<F::Elem> {
    let mut r = trim(field, a.to_vec());
    let df = f.len() - 1;
    let lead_inv = field.inv(&f[df]);
    while r.len() > df {
        let top = r.len() - 1;
        let coef = field.mul(&r[top], &lead_inv);
        let shift = top - df;
        for (i, fi) in f.iter().enumerate() {
            let t = field.mul(&coef, fi);
            r[shift + i] = field.sub(&r[shift + i], &t);
        }
        r = trim(field, r);
    }
    r
}

pub fn mul_mod<F: FieldOps>(
    field: &F,
    a: &[F::Elem],
    b: &[F::Elem],
    f: &[F::Elem],
) -> Poly<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if field.is_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = field.mul(ai, bj);
            out[i + j] = field.add(&out[i + j], &t);
        }
    }
    rem(field, &out, f)
}

pub fn pow_mod<F: FieldOps>(field: &F, a: &[F::Elem], mut e: u64, f: &[F::Elem]) -> Poly<F::Elem> {
    let mut base = rem(field, a, f);
    let mut acc = rem(field, &[field.one()], f);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(field, &acc, &base, f);
        }
        base = mul_mod(field, &base, &base, f);
        e >>= 1;
    }
    acc
}

pub fn sub<F: FieldOps>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let n = a.len().max(b.len());
    let zero = field.zero();
    let out = (0..n)
        .map(|i| field.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(field, out)
}

pub fn gcd<F: FieldOps>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Poly<F::Elem> {
    let mut a = trim(field, a.to_vec());
    let mut b = trim(field, b.to_vec());
    while !b.is_empty() {
        let r = rem(field, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `f` of degree `n` is irreducible iff `x^(r^n) ≡ x (mod f)`
/// and `gcd(x^(r^(n/l)) - x, f) = 1` for every prime `l | n`, where `r` is
/// the size of the coefficient field.
pub fn is_irreducible<F: FieldOps>(field: &F, f: &[F::Elem]) -> bool {
    let f = trim(field, f.to_vec());
    let n = match degree(&f) {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let x = vec![field.zero(), field.one()];
    let r = field.size();
    // frob[i] = x^(r^i) mod f
    let mut frob = Vec::with_capacity(n + 1);
    frob.push(rem(field, &x, &f));
    for i in 1..=n {
        let next = pow_mod(field, &frob[i - 1], r, &f);
        frob.push(next);
    }
    if sub(field, &frob[n], &x).iter().any(|c| !field.is_zero(c)) {
        return false;
    }
    let mut m = n;
    let mut l = 2;
    while m > 1 {
        if m % l == 0 {
            while m % l == 0 {
                m /= l;
            }
            let h = sub(field, &frob[n / l], &x);
            if degree(&gcd(field, &h, &f)) != Some(0) {
                return false;
            }
        }
        l += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binary_irreducibles() {
        let f2 = PrimeField { p: 2 };
        // x^2+x+1, x^3+x+1, x^3+x^2+1, x^4+x+1 irreducible; x^4+x^2+1 = (x^2+x+1)^2
        assert!(is_irreducible(&f2, &[1, 1, 1]));
        assert!(is_irreducible(&f2, &[1, 1, 0, 1]));
        assert!(is_irreducible(&f2, &[1, 0, 1, 1]));
        assert!(is_irreducible(&f2, &[1, 1, 0, 0, 1]));
        assert!(!is_irreducible(&f2, &[1, 0, 1, 0, 1]));
        assert!(!is_irreducible(&f2, &[0, 1, 1]));
    }

    #[test]
    fn irreducible_counts_match_necklace_formula() {
        // number of monic irreducibles of degree n over F_p: (1/n) sum mu(d) p^(n/d)
        for (p, n, expected) in [(2u64, 4usize, 3usize), (2, 6, 9), (3, 3, 8), (3, 4, 18), (5, 2, 10)] {
            let field = PrimeField { p };
            let total = p.pow(n as u32);
            let count = (0..total)
                .filter(|&t| {
                    let mut f: Vec<u64> = (0..n).map(|i| (t / p.pow(i as u32)) % p).collect();
                    f.push(1);
                    is_irreducible(&field, &f)
                })
                .count();
            assert_eq!(count, expected, "p = {p}, n = {n}");
        }
    }
}
