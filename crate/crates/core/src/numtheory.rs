//! Arbitrary-precision integer number theory: primality, factorization,
//! arithmetic functions and the structural classifiers used by the counting
//! formulas.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Default number of Pollard rho iterations spent on one factorization.
pub const DEFAULT_RHO_BUDGET: u64 = 1 << 25;

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Deterministic Miller-Rabin witnesses for every n < 3.3 * 10^24.
const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

const MR_RANDOM_ROUNDS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumberTheoryError {
    #[error("factorization hint {0} is not prime")]
    HintNotPrime(BigUint),
    #[error("factorization hint {hint} does not divide {n}")]
    HintNotDivisor { hint: BigUint, n: BigUint },
    #[error("factorization budget exhausted on composite cofactor {0}")]
    FactorizationTimeout(BigUint),
    #[error("{b} is not coprime to the modulus {k}")]
    NotCoprime { b: BigUint, k: BigUint },
    #[error("{p} divides {n}")]
    PDividesN { p: BigUint, n: BigUint },
    #[error("{d} does not divide {n}")]
    NotDivisor { d: BigUint, n: BigUint },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

type Result<T> = core::result::Result<T, NumberTheoryError>;

// ---------------------------------------------------------------------------
// Primality
// ---------------------------------------------------------------------------

#[inline]
pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_round(n: &BigUint, n_minus_one: &BigUint, d: &BigUint, s: u64, a: &BigUint) -> bool {
    let mut x = a.modpow(d, n);
    if x.is_one() || &x == n_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % n;
        if &x == n_minus_one {
            return true;
        }
    }
    false
}

/// Miller-Rabin primality test. Exact below 2^64; above, the fixed witness
/// set is followed by 64 rounds with pseudo-random bases drawn from a fixed
/// seed, so the answer is reproducible.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;
    for &a in &MR_BASES {
        if !miller_rabin_round(n, &n_minus_one, &d, s, &BigUint::from(a)) {
            return false;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f1e1d);
    let two = BigUint::from(2u32);
    for _ in 0..MR_RANDOM_ROUNDS {
        let a = rng.gen_biguint_range(&two, &n_minus_one);
        if !miller_rabin_round(n, &n_minus_one, &d, s, &a) {
            return false;
        }
    }
    true
}

/// Whether `p` is a Mersenne prime `2^l - 1` with `l` prime.
pub fn is_mersenne_prime(p: &BigUint) -> bool {
    let succ = p + 1u32;
    if succ.count_ones() != 1 {
        return false;
    }
    let l = succ.trailing_zeros().unwrap_or(0);
    is_prime_u64(l) && is_prime(p)
}

// ---------------------------------------------------------------------------
// Pollard rho, Brent variant
// ---------------------------------------------------------------------------

fn abs_diff_u64(a: u64, b: u64) -> u64 {
    if a > b {
        a - b
    } else {
        b - a
    }
}

/// One Brent cycle search for a nontrivial factor of the odd composite `n`.
/// `Ok(None)` means this constant failed and another should be tried.
fn brent_u64(n: u64, c: u64, budget: &mut u64) -> core::result::Result<Option<u64>, ()> {
    const BATCH: u64 = 128;
    let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
    let (mut y, mut x, mut ys) = (2u64, 2u64, 2u64);
    let mut r = 1u64;
    let mut acc = 1u64;
    let mut g = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let steps = BATCH.min(r - k);
            if *budget < steps {
                return Err(());
            }
            *budget -= steps;
            for _ in 0..steps {
                y = f(y);
                acc = mul_mod_u64(acc, abs_diff_u64(x, y), n);
            }
            g = acc.gcd(&n);
            k += BATCH;
        }
        r *= 2;
    }
    if g == n {
        loop {
            if *budget == 0 {
                return Err(());
            }
            *budget -= 1;
            ys = f(ys);
            g = abs_diff_u64(x, ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    Ok(if g == n { None } else { Some(g) })
}

fn brent_big(n: &BigUint, c: u64, budget: &mut u64) -> core::result::Result<Option<BigUint>, ()> {
    const BATCH: u64 = 128;
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = BigUint::from(2u32);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut r = 1u64;
    let mut acc = BigUint::one();
    let mut g = BigUint::one();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let steps = BATCH.min(r - k);
            if *budget < steps {
                return Err(());
            }
            *budget -= steps;
            for _ in 0..steps {
                y = f(&y);
                acc = (&acc * diff(&x, &y)) % n;
            }
            g = acc.gcd(n);
            k += BATCH;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            if *budget == 0 {
                return Err(());
            }
            *budget -= 1;
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    Ok(if &g == n { None } else { Some(g) })
}

/// Finds a nontrivial factor of the composite `n`.
fn split_composite(n: &BigUint, budget: &mut u64) -> Result<BigUint> {
    if n.is_even() {
        return Ok(BigUint::from(2u32));
    }
    let timeout = || NumberTheoryError::FactorizationTimeout(n.clone());
    for c in 1u64.. {
        if let Some(small) = n.to_u64() {
            match brent_u64(small, c, budget) {
                Ok(Some(f)) => return Ok(BigUint::from(f)),
                Ok(None) => continue,
                Err(()) => return Err(timeout()),
            }
        }
        match brent_big(n, c, budget) {
            Ok(Some(f)) => return Ok(f),
            Ok(None) => continue,
            Err(()) => return Err(timeout()),
        }
    }
    unreachable!()
}

// ---------------------------------------------------------------------------
// Factored integers
// ---------------------------------------------------------------------------

/// A positive integer together with its complete prime factorization,
/// primes strictly increasing and exponents at least one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factored {
    n: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl Factored {
    pub fn one() -> Self {
        Factored { n: BigUint::one(), factors: Vec::new() }
    }

    /// Builds a factorization from (prime, exponent) pairs, checking each
    /// prime. Pairs may come in any order; repeated primes are merged.
    pub fn from_factors(pairs: impl IntoIterator<Item = (BigUint, u32)>) -> Result<Self> {
        let mut map: BTreeMap<BigUint, u32> = BTreeMap::new();
        for (p, e) in pairs {
            if e == 0 {
                continue;
            }
            if !is_prime(&p) {
                return Err(NumberTheoryError::HintNotPrime(p));
            }
            *map.entry(p).or_insert(0) += e;
        }
        Ok(Self::from_map(map))
    }

    fn from_map(map: BTreeMap<BigUint, u32>) -> Self {
        let mut n = BigUint::one();
        for (p, e) in &map {
            n *= p.pow(*e);
        }
        Factored { n, factors: map.into_iter().collect() }
    }

    pub fn from_u64(n: u64) -> Result<Self> {
        factorize(&BigUint::from(n), &[])
    }

    pub fn value(&self) -> &BigUint {
        &self.n
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Number of distinct prime divisors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn valuation(&self, p: &BigUint) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |&(_, e)| e)
    }

    pub fn mobius(&self) -> i8 {
        if !self.is_squarefree() {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn euler_phi(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(e - 1) * (p - 1u32))
    }

    /// Product of the distinct prime divisors; `Rad(1) = 1`.
    pub fn radical(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, _)| acc * p)
    }

    pub fn radical_factored(&self) -> Factored {
        Factored {
            n: self.radical(),
            factors: self.factors.iter().map(|(p, _)| (p.clone(), 1)).collect(),
        }
    }

    /// All positive divisors in ascending order.
    pub fn divisors(&self) -> Vec<BigUint> {
        let mut out = vec![BigUint::one()];
        for (p, e) in &self.factors {
            let current = out.len();
            let mut pk = BigUint::one();
            for _ in 0..*e {
                pk *= p;
                for i in 0..current {
                    let d = &out[i] * &pk;
                    out.push(d);
                }
            }
        }
        out.sort();
        out
    }

    /// Squarefree divisors with their Möbius values, ascending by divisor.
    /// These are the only terms that survive in Möbius-weighted sums.
    pub fn squarefree_divisors(&self) -> Vec<(BigUint, i8)> {
        let mut out = vec![(BigUint::one(), 1i8)];
        for (p, _) in &self.factors {
            let current = out.len();
            for i in 0..current {
                let (d, mu) = (&out[i].0 * p, -out[i].1);
                out.push((d, mu));
            }
        }
        out.sort();
        out
    }

    /// Factorization of a divisor `d` of `n`, read off from the primes of `n`.
    pub fn factor_divisor(&self, d: &BigUint) -> Result<Factored> {
        if d.is_zero() || !(&self.n % d).is_zero() {
            return Err(NumberTheoryError::NotDivisor { d: d.clone(), n: self.n.clone() });
        }
        let mut rest = d.clone();
        let mut factors = Vec::new();
        for (p, _) in &self.factors {
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                factors.push((p.clone(), e));
            }
        }
        debug_assert!(rest.is_one());
        Ok(Factored { n: d.clone(), factors })
    }

    /// Largest divisor of `n` coprime to `m`.
    pub fn coprime_part(&self, m: &BigUint) -> Factored {
        let factors: Vec<_> =
            self.factors.iter().filter(|(p, _)| !(m % p).is_zero()).cloned().collect();
        let n = factors.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        Factored { n, factors }
    }

    /// Largest divisor of `n` whose prime divisors all divide `m`.
    pub fn supported_part(&self, m: &BigUint) -> Factored {
        let factors: Vec<_> =
            self.factors.iter().filter(|(p, _)| (m % p).is_zero()).cloned().collect();
        let n = factors.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        Factored { n, factors }
    }

    /// Factorization of the product of two factored integers.
    pub fn mul(&self, other: &Factored) -> Factored {
        let mut map: BTreeMap<BigUint, u32> = self.factors.iter().cloned().collect();
        for (p, e) in &other.factors {
            *map.entry(p.clone()).or_insert(0) += e;
        }
        Self::from_map(map)
    }
}

impl fmt::Display for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{p}^{e}")?;
        }
        Ok(())
    }
}

/// Complete factorization with the default rho budget.
pub fn factorize(n: &BigUint, hints: &[BigUint]) -> Result<Factored> {
    factorize_with_budget(n, hints, DEFAULT_RHO_BUDGET)
}

/// Complete factorization: verified hints first, trial division to 10^6,
/// then Pollard rho (Brent) with `budget` total iterations. Exhausting the
/// budget is an error; partial factorizations are never returned.
pub fn factorize_with_budget(n: &BigUint, hints: &[BigUint], budget: u64) -> Result<Factored> {
    if n.is_zero() {
        return Err(NumberTheoryError::InvalidArgument("cannot factor zero"));
    }
    let mut map: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = n.clone();
    for hint in hints {
        if !is_prime(hint) {
            return Err(NumberTheoryError::HintNotPrime(hint.clone()));
        }
        if !(n % hint).is_zero() {
            return Err(NumberTheoryError::HintNotDivisor { hint: hint.clone(), n: n.clone() });
        }
        while (&rest % hint).is_zero() {
            rest /= hint;
            *map.entry(hint.clone()).or_insert(0) += 1;
        }
    }
    trial_divide(&mut rest, &mut map);
    let mut budget = budget;
    let mut stack = Vec::new();
    if !rest.is_one() {
        stack.push(rest);
    }
    while let Some(c) = stack.pop() {
        if is_prime(&c) {
            *map.entry(c).or_insert(0) += 1;
            continue;
        }
        let f = split_composite(&c, &mut budget)?;
        let g = &c / &f;
        stack.push(f);
        stack.push(g);
    }
    Ok(Factored::from_map(map))
}

fn trial_divide(rest: &mut BigUint, map: &mut BTreeMap<BigUint, u32>) {
    let mut record = |p: u64, rest: &mut BigUint| {
        let mut e = 0;
        while (&*rest % p).is_zero() {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            *map.entry(BigUint::from(p)).or_insert(0) += e;
        }
    };
    record(2, rest);
    record(3, rest);
    let mut d = 5u64;
    let mut step = 2u64;
    while d <= TRIAL_DIVISION_LIMIT {
        if let Some(small) = rest.to_u64() {
            if d.saturating_mul(d) > small {
                break;
            }
        }
        record(d, rest);
        d += step;
        step = 6 - step;
    }
}

// ---------------------------------------------------------------------------
// Orders and classifiers
// ---------------------------------------------------------------------------

/// Multiplicative order of `b` modulo `k`, by dividing `phi(k)` down over
/// the prime factors of `phi(k)`.
pub fn ord_mod(b: &BigUint, k: &Factored) -> Result<BigUint> {
    let modulus = k.value();
    if modulus < &BigUint::from(2u32) {
        return Err(NumberTheoryError::InvalidArgument("modulus must be at least 2"));
    }
    if !b.gcd(modulus).is_one() {
        return Err(NumberTheoryError::NotCoprime { b: b.clone(), k: modulus.clone() });
    }
    let mut phi_factors = Factored::one();
    for (p, e) in k.factors() {
        let pm1 = factorize(&(p - 1u32), &[])?;
        phi_factors = phi_factors.mul(&pm1);
        if *e > 1 {
            phi_factors = phi_factors.mul(&Factored::from_factors([(p.clone(), e - 1)])?);
        }
    }
    let mut t = phi_factors.value().clone();
    let b = b % modulus;
    for (p, _) in phi_factors.factors() {
        while (&t % p).is_zero() && b.modpow(&(&t / p), modulus).is_one() {
            t /= p;
        }
    }
    Ok(t)
}

/// Least `j >= 1` with `p^j ≡ -1` modulo every odd prime divisor of `n`, or
/// `None` when no such `j` exists.
pub fn semiprimitive_j(p: &BigUint, n: &Factored) -> Result<Option<BigUint>> {
    if n.value() < &BigUint::from(2u32) {
        return Err(NumberTheoryError::InvalidArgument("n must be at least 2"));
    }
    if (n.value() % p).is_zero() {
        return Err(NumberTheoryError::PDividesN { p: p.clone(), n: n.value().clone() });
    }
    let mut j = BigUint::one();
    let mut odd_primes = Vec::new();
    for (l, _) in n.factors() {
        if l.is_even() {
            continue;
        }
        let order = ord_mod(p, &Factored::from_factors([(l.clone(), 1)])?)?;
        if order.is_odd() {
            return Ok(None);
        }
        j = j.lcm(&(order >> 1u32));
        odd_primes.push(l);
    }
    for l in odd_primes {
        if p.modpow(&j, l) != l - 1u32 {
            return Ok(None);
        }
    }
    Ok(Some(j))
}

/// Outcome of asking whether `p^j ≡ -1 (mod Rad((q^m-1)/(q-1)))` is solvable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadicalSemiPrimitivity {
    /// `m = 2`: `Q = q + 1` and `j = s` works.
    QuadraticExtension { j: u64 },
    /// `q = p` a Mersenne prime and `m = 4`: every `j = 2k` with `k` odd works.
    MersenneQuartic { j: u64 },
    NotSemiPrimitive,
}

impl RadicalSemiPrimitivity {
    pub fn witness(&self) -> Option<u64> {
        match *self {
            Self::QuadraticExtension { j } | Self::MersenneQuartic { j } => Some(j),
            Self::NotSemiPrimitive => None,
        }
    }
}

pub fn mersenne_quartic_criterion(p: u64, s: u32, m: u32) -> Result<RadicalSemiPrimitivity> {
    if m < 2 {
        return Err(NumberTheoryError::InvalidArgument("extension degree must exceed 1"));
    }
    if !is_prime_u64(p) || s == 0 {
        return Err(NumberTheoryError::InvalidArgument("q must be a prime power"));
    }
    Ok(if m == 2 {
        RadicalSemiPrimitivity::QuadraticExtension { j: s as u64 }
    } else if s == 1 && m == 4 && is_mersenne_prime(&BigUint::from(p)) {
        RadicalSemiPrimitivity::MersenneQuartic { j: 2 }
    } else {
        RadicalSemiPrimitivity::NotSemiPrimitive
    })
}

/// Whether `Rad(b^m - 1) = Rad((b^m - 1)/(b - 1))`, decided by checking that
/// every prime factor of `b - 1` divides `m`.
pub fn radical_equality(b: &BigUint, m: u64) -> Result<bool> {
    if b <= &BigUint::one() || m <= 1 {
        return Err(NumberTheoryError::InvalidArgument("b and m must exceed 1"));
    }
    let bm1 = factorize(&(b - 1u32), &[])?;
    let m = BigUint::from(m);
    let all_divide = bm1.primes().all(|l| (&m % l).is_zero());
    Ok(all_divide)
}
