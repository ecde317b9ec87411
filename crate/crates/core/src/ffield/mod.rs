//! Arithmetic in F_{q^m} with q = p^s, realized as F_p[x]/(f) for a monic
//! irreducible f of degree s·m, together with traces, orders, N-freeness and
//! the power sweep used by the brute-force counters.

pub mod poly;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;
use core::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::numtheory::{factorize, is_prime_u64, Factored, NumberTheoryError};
use poly::{FieldOps, PrimeField};

/// Largest characteristic supported by the word-sized arithmetic.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

/// Subfields up to this size get an element-to-label table.
pub const SUBFIELD_TABLE_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime below 2^31")]
    BadCharacteristic(u64),
    #[error("extension degrees must be positive")]
    ZeroDegree,
    #[error("field of order {p}^({s}*{m}) does not fit in 64 bits")]
    TooLarge { p: u64, s: u32, m: u32 },
    #[error("element does not belong to this field context")]
    CtxMismatch,
    #[error("the zero element has no multiplicative order")]
    ZeroElement,
    #[error("{n} does not divide the group order {order}")]
    NNotDivisor { n: u64, order: u64 },
    #[error("element is not in the subfield F_q")]
    NotInSubfield,
    #[error("label index {0} is out of range")]
    InvalidLabel(u64),
    #[error("cannot parse trace label {0:?}")]
    BadLabel(String),
    #[error("subfield of size {0} is too large for a label table")]
    SubfieldTooLarge(u64),
    #[error("{k} is not coprime to the group order {n}")]
    NotCoprime { k: u64, n: u64 },
    #[error(transparent)]
    NumberTheory(#[from] NumberTheoryError),
}

type Result<T> = core::result::Result<T, FieldError>;

/// An element of F_{p^{sm}}: coordinates in the basis 1, x, …, x^{sm-1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    coeffs: Vec<u64>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Name of an element of F_q: zero, or `α^{Q·i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TraceLabel {
    Zero,
    Pow(u64),
}

impl TraceLabel {
    /// Dense index: `0` for zero, `i + 1` for `pow:i`.
    pub fn index(self) -> u64 {
        match self {
            TraceLabel::Zero => 0,
            TraceLabel::Pow(i) => i + 1,
        }
    }

    pub fn from_index(idx: u64) -> Self {
        match idx {
            0 => TraceLabel::Zero,
            i => TraceLabel::Pow(i - 1),
        }
    }
}

impl fmt::Display for TraceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceLabel::Zero => write!(f, "0"),
            TraceLabel::Pow(i) => write!(f, "pow:{i}"),
        }
    }
}

impl FromStr for TraceLabel {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(TraceLabel::Zero);
        }
        s.strip_prefix("pow:")
            .and_then(|i| i.parse().ok())
            .map(TraceLabel::Pow)
            .ok_or_else(|| FieldError::BadLabel(s.into()))
    }
}

/// Label lookup for F_q.
#[derive(Debug, Clone)]
struct SubfieldTable {
    /// Coordinates of the modulus basis that determine an element of F_q.
    pivots: Vec<usize>,
    /// `label_of[key]` where key packs the pivot coordinates base p.
    label_of: Vec<u32>,
    /// `prime_trace[idx]` = Tr_{F_q/F_p} of the element with label index idx.
    prime_trace: Vec<u64>,
}

/// An immutable model of F_{q^m} over F_q over F_p with a fixed primitive
/// element α.
#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u64,
    s: u32,
    m: u32,
    degree: usize,
    /// Low coefficients of the monic modulus (the leading 1 is implicit).
    modulus: Vec<u64>,
    seed: u64,
    q: u64,
    order: u64,
    big_q: u64,
    group_order: Factored,
    alpha: FieldElem,
    /// Column c holds α·x^c; empty when α = x.
    alpha_matrix: Vec<Vec<u64>>,
    abs_form: Vec<u64>,
    rel_form: Vec<FieldElem>,
    subfield: Option<SubfieldTable>,
}

struct Raw<'a> {
    p: u64,
    modulus: &'a [u64],
}

impl Raw<'_> {
    fn degree(&self) -> usize {
        self.modulus.len()
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.degree();
        let p = self.p;
        let mut prod = vec![0u64; 2 * d];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj % p) % p;
            }
        }
        // x^d = -modulus
        for k in (d..2 * d).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &fi) in self.modulus.iter().enumerate() {
                let t = c * fi % p;
                prod[k - d + i] = (prod[k - d + i] + p - t) % p;
            }
        }
        prod.truncate(d);
        prod
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn one(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.degree()];
        v[0] = 1 % self.p;
        v
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    /// Σ_{i<k} a^{r^i}.
    fn trace_sum(&self, a: &[u64], r: u64, k: u32) -> Vec<u64> {
        let mut term = a.to_vec();
        let mut acc = vec![0u64; self.degree()];
        for _ in 0..k {
            acc = self.add(&acc, &term);
            term = self.pow(&term, r);
        }
        acc
    }
}

fn digits(mut t: u64, p: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = t % p;
            t /= p;
            d
        })
        .collect()
}

impl FieldCtx {
    /// Builds F_{p^{sm}}: the first irreducible modulus in lexicographic
    /// order of its low coefficients starting at `seed`, then the first
    /// primitive element among x, x+1, ….
    pub fn new(p: u64, s: u32, m: u32, seed: Option<u64>) -> Result<Self> {
        if p >= MAX_CHARACTERISTIC || !is_prime_u64(p) {
            return Err(FieldError::BadCharacteristic(p));
        }
        if s == 0 || m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let too_large = FieldError::TooLarge { p, s, m };
        let degree = s.checked_mul(m).ok_or(too_large.clone())?;
        let q = p.checked_pow(s).ok_or(too_large.clone())?;
        let size = q.checked_pow(m).ok_or(too_large)?;
        let order = size - 1;
        let big_q = order / (q - 1);
        let group_order = factorize(&BigUint::from(order), &[])?;
        let degree = degree as usize;

        let seed = seed.unwrap_or(0);
        let prime_field = PrimeField { p };
        let candidates = size; // p^degree low-coefficient vectors
        let start = seed % candidates;
        let modulus = (start..candidates)
            .chain(0..start)
            .map(|t| digits(t, p, degree))
            .find(|low| {
                let mut f = low.clone();
                f.push(1);
                poly::is_irreducible(&prime_field, &f)
            })
            .expect("irreducible polynomials of every degree exist");

        let raw = Raw { p, modulus: &modulus };
        let primes: Vec<u64> =
            group_order.primes().map(|l| l.to_u64().expect("divides a u64")).collect();
        let first = if degree == 1 { 1 } else { p };
        let alpha = (first..size)
            .map(|t| digits(t, p, degree))
            .find(|cand| primes.iter().all(|&l| raw.pow(cand, order / l) != raw.one()))
            .expect("the multiplicative group is cyclic");

        let mut ctx = FieldCtx {
            p,
            s,
            m,
            degree,
            modulus,
            seed,
            q,
            order,
            big_q,
            group_order,
            alpha: FieldElem { coeffs: alpha },
            alpha_matrix: Vec::new(),
            abs_form: Vec::new(),
            rel_form: Vec::new(),
            subfield: None,
        };
        ctx.precompute();
        Ok(ctx)
    }

    /// The same field with primitive element α^k in place of α.
    pub fn with_alpha_power(&self, k: u64) -> Result<Self> {
        if k.gcd(&self.order) != 1 {
            return Err(FieldError::NotCoprime { k, n: self.order });
        }
        let mut ctx = self.clone();
        ctx.alpha = self.pow(&self.alpha, k)?;
        ctx.precompute();
        Ok(ctx)
    }

    fn raw(&self) -> Raw<'_> {
        Raw { p: self.p, modulus: &self.modulus }
    }

    fn precompute(&mut self) {
        let d = self.degree;
        let basis: Vec<Vec<u64>> = (0..d)
            .map(|i| {
                let mut v = vec![0u64; d];
                v[i] = 1;
                v
            })
            .collect();
        let raw = self.raw();
        let alpha_is_x = d > 1 && basis[1] == self.alpha.coeffs;
        let alpha_matrix = if alpha_is_x {
            Vec::new()
        } else {
            basis.iter().map(|b| raw.mul(&self.alpha.coeffs, b)).collect()
        };
        let abs_form: Vec<u64> = basis
            .iter()
            .map(|b| {
                let t = raw.trace_sum(b, self.p, self.s * self.m);
                debug_assert!(t[1..].iter().all(|&c| c == 0));
                t[0]
            })
            .collect();
        let rel_form: Vec<FieldElem> = basis
            .iter()
            .map(|b| FieldElem { coeffs: raw.trace_sum(b, self.q, self.m) })
            .collect();
        self.alpha_matrix = alpha_matrix;
        self.abs_form = abs_form;
        self.rel_form = rel_form;
        self.subfield = (self.q <= SUBFIELD_TABLE_LIMIT).then(|| self.build_subfield_table());
    }

    fn build_subfield_table(&self) -> SubfieldTable {
        let (p, d, s) = (self.p, self.degree, self.s as usize);
        let raw = self.raw();
        let g = raw.pow(&self.alpha.coeffs, self.big_q);
        // Row-reduce the F_p-basis 1, g, …, g^{s-1} of F_q to find pivots.
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(s);
        let mut cur = raw.one();
        for _ in 0..s {
            rows.push(cur.clone());
            cur = raw.mul(&cur, &g);
        }
        let field = PrimeField { p };
        let mut pivots = Vec::with_capacity(s);
        let mut r = 0;
        for col in 0..d {
            if r == s {
                break;
            }
            let Some(k) = (r..s).find(|&k| rows[k][col] != 0) else {
                continue;
            };
            rows.swap(r, k);
            let inv = field.inv(&rows[r][col]);
            for k in 0..s {
                if k != r && rows[k][col] != 0 {
                    let f = rows[k][col] * inv % p;
                    for c in 0..d {
                        let t = f * rows[r][c] % p;
                        rows[k][c] = (rows[k][c] + p - t) % p;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        debug_assert_eq!(pivots.len(), s);

        let q = self.q as usize;
        let mut label_of = vec![u32::MAX; q];
        let mut prime_trace = vec![0u64; q];
        label_of[0] = 0;
        let mut cur = raw.one();
        for i in 0..(self.q - 1) {
            let key = self.pivot_key_of(&pivots, &cur);
            debug_assert_eq!(label_of[key], u32::MAX);
            label_of[key] = (i + 1) as u32;
            let t = raw.trace_sum(&cur, p, self.s);
            prime_trace[(i + 1) as usize] = t[0];
            cur = raw.mul(&cur, &g);
        }
        SubfieldTable { pivots, label_of, prime_trace }
    }

    fn pivot_key_of(&self, pivots: &[usize], coeffs: &[u64]) -> usize {
        pivots.iter().rev().fold(0u64, |acc, &c| acc * self.p + coeffs[c]) as usize
    }

    // -- accessors -------------------------------------------------------

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    /// q = p^s.
    pub fn q(&self) -> u64 {
        self.q
    }
    /// s·m, the degree of the modulus.
    pub fn degree(&self) -> usize {
        self.degree
    }
    /// q^m − 1.
    pub fn order(&self) -> u64 {
        self.order
    }
    /// Q = (q^m − 1)/(q − 1).
    pub fn norm_index(&self) -> u64 {
        self.big_q
    }
    pub fn group_order(&self) -> &Factored {
        &self.group_order
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }
    /// The monic modulus, lowest coefficient first, leading 1 included.
    pub fn modulus(&self) -> Vec<u64> {
        let mut f = self.modulus.clone();
        f.push(1);
        f
    }
    pub fn alpha(&self) -> &FieldElem {
        &self.alpha
    }

    // -- elements --------------------------------------------------------

    pub fn zero(&self) -> FieldElem {
        FieldElem { coeffs: vec![0; self.degree] }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem { coeffs: self.raw().one() }
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<FieldElem> {
        let e = FieldElem { coeffs };
        self.check(&e)?;
        Ok(e)
    }

    /// The element whose coordinates are the base-p digits of `t`.
    pub fn element_from_index(&self, t: u64) -> Result<FieldElem> {
        if t > self.order {
            return Err(FieldError::CtxMismatch);
        }
        Ok(FieldElem { coeffs: digits(t, self.p, self.degree) })
    }

    pub fn element_index(&self, x: &FieldElem) -> Result<u64> {
        self.check(x)?;
        Ok(x.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c))
    }

    fn check(&self, x: &FieldElem) -> Result<()> {
        if x.coeffs.len() == self.degree && x.coeffs.iter().all(|&c| c < self.p) {
            Ok(())
        } else {
            Err(FieldError::CtxMismatch)
        }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElem { coeffs: self.raw().add(&a.coeffs, &b.coeffs) })
    }

    pub fn neg(&self, a: &FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        let coeffs = a.coeffs.iter().map(|&c| (self.p - c) % self.p).collect();
        Ok(FieldElem { coeffs })
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        let nb = self.neg(b)?;
        self.add(a, &nb)
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElem { coeffs: self.raw().mul(&a.coeffs, &b.coeffs) })
    }

    pub fn pow(&self, a: &FieldElem, e: u64) -> Result<FieldElem> {
        self.check(a)?;
        Ok(FieldElem { coeffs: self.raw().pow(&a.coeffs, e) })
    }

    pub fn pow_big(&self, a: &FieldElem, e: &BigUint) -> Result<FieldElem> {
        self.check(a)?;
        if e.is_zero() {
            return Ok(self.one());
        }
        if a.is_zero() {
            return Ok(self.zero());
        }
        let r = (e % self.order).to_u64().expect("reduced below the group order");
        self.pow(a, r)
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        self.pow(a, self.order - 1)
    }

    /// α^j.
    pub fn alpha_power(&self, j: u64) -> FieldElem {
        FieldElem { coeffs: self.raw().pow(&self.alpha.coeffs, j % self.order) }
    }

    // -- traces ----------------------------------------------------------

    /// Tr_{F_{q^m}/F_p}(x), computed as Σ_{i<sm} x^{p^i}.
    pub fn abs_trace(&self, x: &FieldElem) -> Result<u64> {
        self.check(x)?;
        let t = self.raw().trace_sum(&x.coeffs, self.p, self.s * self.m);
        assert!(t[1..].iter().all(|&c| c == 0), "absolute trace left the prime field");
        Ok(t[0])
    }

    /// Tr_{F_{q^m}/F_q}(x), computed as Σ_{i<m} x^{q^i}.
    pub fn rel_trace(&self, x: &FieldElem) -> Result<FieldElem> {
        self.check(x)?;
        let t = FieldElem { coeffs: self.raw().trace_sum(&x.coeffs, self.q, self.m) };
        assert!(self.in_subfield(&t), "relative trace left F_q");
        Ok(t)
    }

    /// Absolute trace through the precomputed linear form.
    pub fn abs_trace_linear(&self, coeffs: &[u64]) -> u64 {
        let p = self.p;
        coeffs.iter().zip(&self.abs_form).fold(0, |acc, (&c, &f)| (acc + c * f) % p)
    }

    /// Relative trace through the precomputed linear form.
    pub fn rel_trace_linear(&self, coeffs: &[u64]) -> FieldElem {
        let p = self.p;
        let mut out = vec![0u64; self.degree];
        for (&c, form) in coeffs.iter().zip(&self.rel_form) {
            if c == 0 {
                continue;
            }
            for (o, &f) in out.iter_mut().zip(&form.coeffs) {
                *o = (*o + c * f) % p;
            }
        }
        FieldElem { coeffs: out }
    }

    /// Label index (see [`TraceLabel::index`]) of the relative trace of the
    /// element with the given coordinates. Needs the subfield table.
    pub fn rel_trace_label_index(&self, coeffs: &[u64]) -> Result<u32> {
        let table = self.subfield_table()?;
        let p = self.p;
        let key = table.pivots.iter().rev().fold(0u64, |acc, &col| {
            let y = coeffs
                .iter()
                .zip(&self.rel_form)
                .fold(0, |a, (&c, f)| (a + c * f.coeffs[col]) % p);
            acc * p + y
        });
        Ok(table.label_of[key as usize])
    }

    pub fn in_subfield(&self, c: &FieldElem) -> bool {
        self.check(c).is_ok() && self.raw().pow(&c.coeffs, self.q) == c.coeffs
    }

    fn subfield_table(&self) -> Result<&SubfieldTable> {
        self.subfield.as_ref().ok_or(FieldError::SubfieldTooLarge(self.q))
    }

    /// Labels an element of F_q as `0` or `pow:i` with c = α^{Q·i}.
    pub fn subfield_label(&self, c: &FieldElem) -> Result<TraceLabel> {
        self.check(c)?;
        if !self.in_subfield(c) {
            return Err(FieldError::NotInSubfield);
        }
        let table = self.subfield_table()?;
        let key = self.pivot_key_of(&table.pivots, &c.coeffs);
        Ok(TraceLabel::from_index(table.label_of[key] as u64))
    }

    /// The element of F_q named by a label.
    pub fn label_element(&self, label: TraceLabel) -> Result<FieldElem> {
        match label {
            TraceLabel::Zero => Ok(self.zero()),
            TraceLabel::Pow(i) if i < self.q - 1 => Ok(self.alpha_power(self.big_q * i)),
            TraceLabel::Pow(i) => Err(FieldError::InvalidLabel(i)),
        }
    }

    /// Tr_{F_q/F_p} of the labelled element of F_q.
    pub fn subfield_prime_trace(&self, label: TraceLabel) -> Result<u64> {
        let idx = label.index();
        if idx >= self.q {
            return Err(FieldError::InvalidLabel(idx));
        }
        if let Some(table) = &self.subfield {
            return Ok(table.prime_trace[idx as usize]);
        }
        let c = self.label_element(label)?;
        Ok(self.raw().trace_sum(&c.coeffs, self.p, self.s)[0])
    }

    // -- orders ----------------------------------------------------------

    /// Multiplicative order by dividing q^m − 1 down prime by prime.
    pub fn element_order(&self, x: &FieldElem) -> Result<u64> {
        self.check(x)?;
        if x.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let raw = self.raw();
        let one = raw.one();
        let mut ord = self.order;
        for (l, e) in self.group_order.factors() {
            let l = l.to_u64().expect("divides a u64");
            for _ in 0..*e {
                if raw.pow(&x.coeffs, ord / l) == one {
                    ord /= l;
                } else {
                    break;
                }
            }
        }
        Ok(ord)
    }

    fn check_divisor(&self, n: u64) -> Result<()> {
        if n == 0 || self.order % n != 0 {
            return Err(FieldError::NNotDivisor { n, order: self.order });
        }
        Ok(())
    }

    /// Whether x = α^k with gcd(k, N) = 1, tested as x^((q^m−1)/ℓ) ≠ 1 for
    /// every prime ℓ | N.
    pub fn is_nfree(&self, x: &FieldElem, n: u64) -> Result<bool> {
        self.check(x)?;
        if x.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        self.check_divisor(n)?;
        let raw = self.raw();
        let one = raw.one();
        Ok(self
            .group_order
            .primes()
            .map(|l| l.to_u64().expect("divides a u64"))
            .filter(|l| n % l == 0)
            .all(|l| raw.pow(&x.coeffs, self.order / l) != one))
    }

    /// N-freeness of α^k from the exponent.
    pub fn is_nfree_log(&self, k: u64, n: u64) -> Result<bool> {
        self.check_divisor(n)?;
        Ok(k.gcd(&n) == 1)
    }

    // -- sweeps ----------------------------------------------------------

    fn mul_alpha_into(&self, cur: &[u64], out: &mut [u64]) {
        let p = self.p;
        let d = self.degree;
        if self.alpha_matrix.is_empty() {
            let top = cur[d - 1];
            out[0] = 0;
            out[1..d].copy_from_slice(&cur[..d - 1]);
            if top != 0 {
                for (o, &f) in out.iter_mut().zip(&self.modulus) {
                    *o = (*o + p - top * f % p) % p;
                }
            }
        } else {
            out.iter_mut().for_each(|o| *o = 0);
            for (col, &c) in self.alpha_matrix.iter().zip(cur) {
                if c == 0 {
                    continue;
                }
                for (o, &a) in out.iter_mut().zip(col) {
                    *o = (*o + c * a) % p;
                }
            }
        }
    }

    /// Calls `f(j, coords of α^j)` for every j in `range` (taken mod q^m − 1
    /// in the arithmetic), keeping a running power so each step is one
    /// multiplication by α.
    pub fn for_each_power(&self, range: Range<u64>, mut f: impl FnMut(u64, &[u64])) {
        if range.is_empty() {
            return;
        }
        let mut cur = self.alpha_power(range.start).coeffs;
        let mut next = vec![0u64; self.degree];
        for j in range {
            f(j, &cur);
            self.mul_alpha_into(&cur, &mut next);
            core::mem::swap(&mut cur, &mut next);
        }
    }

    /// Discrete logarithms of every nonzero element, indexed by
    /// [`FieldCtx::element_index`]. Intended for small fields only.
    pub fn log_table(&self) -> BTreeMap<u64, u64> {
        let mut logs = BTreeMap::new();
        let p = self.p;
        self.for_each_power(0..self.order, |j, c| {
            logs.insert(c.iter().rev().fold(0, |acc, &x| acc * p + x), j);
        });
        logs
    }
}

impl FieldOps for FieldCtx {
    type Elem = FieldElem;

    fn zero(&self) -> FieldElem {
        FieldCtx::zero(self)
    }
    fn one(&self) -> FieldElem {
        FieldCtx::one(self)
    }
    fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem { coeffs: self.raw().add(&a.coeffs, &b.coeffs) }
    }
    fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldCtx::sub(self, a, b).expect("element of this field")
    }
    fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem { coeffs: self.raw().mul(&a.coeffs, &b.coeffs) }
    }
    fn inv(&self, a: &FieldElem) -> FieldElem {
        FieldCtx::inv(self, a).expect("nonzero element of this field")
    }
    fn is_zero(&self, a: &FieldElem) -> bool {
        a.is_zero()
    }
    fn size(&self) -> u64 {
        self.order + 1
    }
}

/// Builds the field context for F_{(p^s)^m}; see [`FieldCtx::new`].
pub fn build_field_ctx(p: u64, s: u32, m: u32, seed: Option<u64>) -> Result<FieldCtx> {
    FieldCtx::new(p, s, m, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn ctx(p: u64, s: u32, m: u32) -> FieldCtx {
        build_field_ctx(p, s, m, None).unwrap()
    }

    #[test]
    fn construction_examples() {
        let f81 = ctx(3, 1, 4);
        assert_eq!(f81.order(), 80);
        assert_eq!(f81.group_order().to_string(), "2^4 * 5^1");
        assert_eq!(f81.norm_index(), 40);
        assert_eq!(ctx(2, 2, 3).norm_index(), 21);
        assert_eq!(ctx(7, 1, 4).norm_index(), 400);
        assert_eq!(ctx(7, 1, 4).norm_index(), (7 + 1) * (49 + 1));
    }

    #[test]
    fn modulus_is_irreducible_and_alpha_primitive() {
        for (p, s, m) in [(2, 1, 1), (2, 3, 2), (3, 2, 2), (5, 1, 3), (13, 1, 2), (2, 1, 10)] {
            let f = ctx(p, s, m);
            assert!(poly::is_irreducible(&PrimeField { p }, &f.modulus()));
            assert_eq!(f.element_order(f.alpha()).unwrap(), f.order());
            assert_eq!(f.norm_index() * (f.q() - 1), f.order());
        }
    }

    #[test]
    fn seed_changes_modulus_but_not_field_size() {
        let a = build_field_ctx(3, 1, 4, Some(0)).unwrap();
        let b = build_field_ctx(3, 1, 4, Some(40)).unwrap();
        assert_ne!(a.modulus(), b.modulus());
        assert_eq!(a.order(), b.order());
    }

    #[test]
    fn arithmetic_identities() {
        let f = ctx(2, 2, 3);
        let x = f.element_from_index(2).unwrap();
        assert_eq!(f.mul(&x, &f.one()).unwrap(), x);
        let a = f.alpha();
        assert_eq!(f.pow(a, f.order()).unwrap(), f.one());
        assert_eq!(f.pow(a, f.order() + 1).unwrap(), *a);
        let big = BigUint::from(f.order()).pow(3) + 1u32;
        assert_eq!(f.pow_big(a, &big).unwrap(), *a);
        let y = f.alpha_power(17);
        assert_eq!(f.mul(&y, &f.inv(&y).unwrap()).unwrap(), f.one());
        assert_eq!(f.sub(&y, &y).unwrap(), f.zero());
    }

    #[test]
    fn ctx_mismatch_is_reported() {
        let f = ctx(3, 1, 4);
        let g = ctx(2, 1, 4);
        let foreign = g.element_from_index(0).unwrap();
        let bad = f.element(vec![5, 0, 0, 0]);
        assert_eq!(bad, Err(FieldError::CtxMismatch));
        assert_eq!(ctx(5, 1, 2).mul(f.alpha(), &f.one()), Err(FieldError::CtxMismatch));
        assert!(f.add(&foreign, &f.one()).is_ok()); // same shape, valid coordinates
    }

    #[test]
    fn trace_examples() {
        let f = ctx(3, 1, 4);
        assert_eq!(f.abs_trace(&f.zero()).unwrap(), 0);
        assert_eq!(f.abs_trace(&f.one()).unwrap(), 4 % 3);
        let f9 = ctx(3, 1, 2);
        let a2 = f9.alpha_power(2);
        assert_eq!(f9.mul(&a2, &a2).unwrap(), f9.neg(&f9.one()).unwrap());
        assert_eq!(f9.abs_trace(&a2).unwrap(), 0);
        let f64 = ctx(2, 2, 3);
        assert_eq!(f64.rel_trace(&f64.zero()).unwrap(), f64.zero());
        for i in 0..3 {
            let c = f64.alpha_power(21 * i);
            let three_c = f64.add(&f64.add(&c, &c).unwrap(), &c).unwrap();
            assert_eq!(f64.rel_trace(&c).unwrap(), three_c);
        }
    }

    #[test]
    fn trace_transitivity_in_f81_over_f9() {
        let f = ctx(3, 2, 2);
        for t in 0..81 {
            let x = f.element_from_index(t).unwrap();
            let y = f.rel_trace(&x).unwrap();
            let via_subfield = f.raw().trace_sum(&y.coeffs, 3, 2)[0];
            assert_eq!(f.abs_trace(&x).unwrap(), via_subfield);
            assert_eq!(f.abs_trace_linear(x.coeffs()), via_subfield);
            assert_eq!(f.rel_trace_linear(x.coeffs()), y);
        }
    }

    #[test]
    fn order_examples() {
        let f = ctx(5, 1, 3);
        assert_eq!(f.element_order(&f.one()).unwrap(), 1);
        assert_eq!(f.element_order(f.alpha()).unwrap(), 124);
        let aq = f.alpha_power(f.norm_index());
        assert_eq!(f.element_order(&aq).unwrap(), f.q() - 1);
        assert_eq!(f.element_order(&f.zero()), Err(FieldError::ZeroElement));
    }

    #[test]
    fn nfree_examples() {
        let f9 = ctx(3, 1, 2);
        assert!(f9.is_nfree(&f9.alpha_power(5), 1).unwrap());
        assert!(f9.is_nfree(f9.alpha(), 8).unwrap());
        assert!(!f9.is_nfree(&f9.alpha_power(2), 4).unwrap());
        assert_eq!(
            f9.is_nfree(f9.alpha(), 3),
            Err(FieldError::NNotDivisor { n: 3, order: 8 })
        );
    }

    #[test]
    fn subfield_labels() {
        let f = ctx(2, 2, 3);
        assert_eq!(f.subfield_label(&f.zero()).unwrap(), TraceLabel::Zero);
        assert_eq!(f.subfield_label(&f.one()).unwrap(), TraceLabel::Pow(0));
        let aq = f.alpha_power(f.norm_index());
        assert_eq!(f.subfield_label(&aq).unwrap(), TraceLabel::Pow(1));
        assert_eq!(f.subfield_label(f.alpha()), Err(FieldError::NotInSubfield));
        for idx in 0..f.q() {
            let l = TraceLabel::from_index(idx);
            let c = f.label_element(l).unwrap();
            assert_eq!(f.subfield_label(&c).unwrap(), l);
            assert_eq!(f.rel_trace_label_index(c.coeffs()).unwrap() as u64, {
                // rel_trace(c) = m·c = 3c = c in characteristic 2
                idx
            });
        }
        assert_eq!(f.label_element(TraceLabel::Pow(3)), Err(FieldError::InvalidLabel(3)));
    }

    #[test]
    fn label_text_round_trip() {
        for l in [TraceLabel::Zero, TraceLabel::Pow(0), TraceLabel::Pow(17)] {
            assert_eq!(l.to_string().parse::<TraceLabel>().unwrap(), l);
        }
        assert!("pow:".parse::<TraceLabel>().is_err());
        assert!("1".parse::<TraceLabel>().is_err());
    }

    #[test]
    fn powers_are_distinct_and_fibers_are_even() {
        for (p, s, m) in [(2, 1, 6), (3, 1, 4), (2, 2, 3), (5, 1, 4), (3, 2, 2), (7, 1, 3)] {
            let f = ctx(p, s, m);
            let mut seen = BTreeSet::new();
            let mut fibers = vec![0u64; f.q() as usize];
            f.for_each_power(0..f.order(), |_, c| {
                seen.insert(c.to_vec());
                fibers[f.rel_trace_label_index(c).unwrap() as usize] += 1;
            });
            assert_eq!(seen.len() as u64, f.order());
            let fiber = f.q().pow(m - 1);
            assert_eq!(fibers[0], fiber - 1, "nonzero trace-zero elements");
            assert!(fibers[1..].iter().all(|&n| n == fiber));
        }
    }

    #[test]
    fn nfree_power_test_agrees_with_gcd() {
        for (p, s, m) in [(3, 1, 4), (2, 2, 3), (7, 1, 2)] {
            let f = ctx(p, s, m);
            let divisors = f.group_order().divisors();
            for j in 0..f.order() {
                let x = f.alpha_power(j);
                for d in &divisors {
                    let d = d.to_u64().unwrap();
                    assert_eq!(f.is_nfree(&x, d).unwrap(), f.is_nfree_log(j, d).unwrap());
                }
            }
        }
    }

    #[test]
    fn sweep_matches_direct_powers_from_offset() {
        let f = ctx(3, 1, 5);
        f.for_each_power(100..130, |j, c| assert_eq!(c, f.alpha_power(j).coeffs()));
        let g = f.with_alpha_power(7).unwrap();
        g.for_each_power(5..20, |j, c| assert_eq!(c, g.alpha_power(j).coeffs()));
        assert_eq!(g.alpha_power(1), f.alpha_power(7));
        assert!(f.with_alpha_power(2).is_err());
    }

    #[test]
    fn large_prime_field_context() {
        let f = ctx(2_147_483_647, 1, 2);
        assert_eq!(f.norm_index(), 2_147_483_648);
        assert_eq!(f.element_order(f.alpha()).unwrap(), f.order());
        assert!(f.subfield_label(&f.one()).is_err());
    }
}
