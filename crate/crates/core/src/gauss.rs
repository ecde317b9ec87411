//! Gaussian periods η_k^{(d)} = Σ_{x ∈ α^k⟨α^d⟩} ζ_p^{Tr(x)}, the Möbius sums
//! Δ_k and Γ_k built from them, the trace-twisted sums entering the counting
//! formulas, and the classical closed forms for η_0.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::cyclotomic::CycInt;
use crate::ffield::{FieldCtx, FieldError, TraceLabel};
use crate::numtheory::{ord_mod, semiprimitive_j, Factored, NumberTheoryError};

/// Largest multiplicative group a [`GaussEngine`] will tabulate by default.
pub const DEFAULT_GAUSS_BUDGET: u64 = 10_000_000;

/// Iteration cap for the search 4p^{sm/3} = c² + 27d².
const CUBIC_SCAN_LIMIT: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GaussError {
    #[error("{d} does not divide {n}")]
    NotDivisor { d: u64, n: u64 },
    #[error("group of order {size} exceeds the enumeration budget {budget}")]
    BudgetExceeded { size: u64, budget: u64 },
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(&'static str),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    NumberTheory(#[from] NumberTheoryError),
}

type Result<T> = core::result::Result<T, GaussError>;

/// All periods of one type: `values[k]` = η_k^{(d)} for 0 ≤ k < d.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodTable {
    pub d: u64,
    pub values: Vec<CycInt>,
}

impl PeriodTable {
    pub fn row_sum(&self) -> CycInt {
        let p = self.values[0].p();
        self.values.iter().fold(CycInt::zero(p), |mut acc, v| {
            acc.add_assign(v).expect("one ring");
            acc
        })
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().all(|v| v.as_integer().is_some())
    }
}

/// Which of the two sums the twisted sum runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Delta,
    Gamma,
}

/// Period evaluation over one field, backed by a table of absolute traces
/// of α^j for every j. Computed periods are cached.
#[derive(Debug)]
pub struct GaussEngine<'a> {
    ctx: &'a FieldCtx,
    traces: Vec<u32>,
    cache: BTreeMap<(u64, u64), CycInt>,
}

impl<'a> GaussEngine<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Result<Self> {
        Self::with_budget(ctx, DEFAULT_GAUSS_BUDGET)
    }

    pub fn with_budget(ctx: &'a FieldCtx, budget: u64) -> Result<Self> {
        let n = ctx.order();
        if n > budget {
            return Err(GaussError::BudgetExceeded { size: n, budget });
        }
        let mut traces = Vec::with_capacity(n as usize);
        ctx.for_each_power(0..n, |_, c| traces.push(ctx.abs_trace_linear(c) as u32));
        Ok(GaussEngine { ctx, traces, cache: BTreeMap::new() })
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    /// Tr_{F_{q^m}/F_p}(α^j) for 0 ≤ j < q^m − 1.
    pub fn abs_traces(&self) -> &[u32] {
        &self.traces
    }

    fn p(&self) -> u64 {
        self.ctx.p()
    }

    fn check_divisor(&self, d: u64) -> Result<()> {
        let n = self.ctx.order();
        if d == 0 || n % d != 0 {
            return Err(GaussError::NotDivisor { d, n });
        }
        Ok(())
    }

    /// Squarefree divisors of `d` with their Möbius values.
    fn mobius_divisors(&self, d: u64) -> Result<Vec<(u64, i8)>> {
        self.check_divisor(d)?;
        let f = self.ctx.group_order().factor_divisor(&BigUint::from(d))?;
        Ok(f.squarefree_divisors()
            .into_iter()
            .map(|(e, mu)| (e.to_u64().expect("divides a u64"), mu))
            .collect())
    }

    /// Every period of type d from a single pass over the powers of α.
    pub fn periods(&self, d: u64) -> Result<PeriodTable> {
        self.check_divisor(d)?;
        let p = self.p() as usize;
        let mut hist = vec![0i64; d as usize * p];
        let mut k = 0usize;
        for &t in &self.traces {
            hist[k * p + t as usize] += 1;
            k += 1;
            if k == d as usize {
                k = 0;
            }
        }
        let values = hist.chunks(p).map(|h| CycInt::from_histogram(p as u64, h)).collect();
        Ok(PeriodTable { d, values })
    }

    /// η_k^{(d)}; k is taken modulo d.
    pub fn period(&mut self, d: u64, k: u64) -> Result<CycInt> {
        self.check_divisor(d)?;
        let k = k % d;
        if let Some(v) = self.cache.get(&(d, k)) {
            return Ok(v.clone());
        }
        let p = self.p();
        let mut hist = vec![0i64; p as usize];
        for &t in self.traces[k as usize..].iter().step_by(d as usize) {
            hist[t as usize] += 1;
        }
        let v = CycInt::from_histogram(p, &hist);
        self.cache.insert((d, k), v.clone());
        Ok(v)
    }

    /// Δ_k(N) = Σ_{d | N} μ(d) η_k^{(d)}.
    pub fn delta(&mut self, n: u64, k: u64) -> Result<CycInt> {
        let mut acc = CycInt::zero(self.p());
        for (d, mu) in self.mobius_divisors(n)? {
            let eta = self.period(d, k)?;
            acc = if mu > 0 { acc.add(&eta) } else { acc.sub(&eta) }.expect("one ring");
        }
        Ok(acc)
    }

    /// Δ_k(N) evaluated as Σ ζ^{Tr(α^i)} over 1 ≤ i ≤ q^m − 1 with
    /// gcd(N, i − k) = 1, without going through periods.
    pub fn delta_by_coprimality(&self, n: u64, k: u64) -> Result<CycInt> {
        self.check_divisor(n)?;
        let order = self.ctx.order();
        let p = self.p();
        let mut hist = vec![0i64; p as usize];
        for i in 1..=order {
            let diff = (i % n + n - k % n) % n;
            if diff.gcd(&n) == 1 {
                hist[self.traces[(i % order) as usize] as usize] += 1;
            }
        }
        Ok(CycInt::from_histogram(p, &hist))
    }

    /// Γ_k(N) = Σ_{d | N} μ(d) η_k^{((q^m−1)/N · d)}.
    pub fn gamma(&mut self, n: u64, k: u64) -> Result<CycInt> {
        let co = self.ctx.order() / n;
        let mut acc = CycInt::zero(self.p());
        for (d, mu) in self.mobius_divisors(n)? {
            let eta = self.period(co * d, k)?;
            acc = if mu > 0 { acc.add(&eta) } else { acc.sub(&eta) }.expect("one ring");
        }
        Ok(acc)
    }

    fn twisted(&mut self, family: Family, n: u64, c: TraceLabel, k: u64) -> Result<CycInt> {
        self.check_divisor(n)?;
        let ctx = self.ctx;
        let (q, big_q, order, p) = (ctx.q(), ctx.norm_index(), ctx.order(), ctx.p());
        // validate the label up front
        ctx.label_element(c)?;
        let mut acc = CycInt::zero(p);
        for i in 0..q - 1 {
            let t = match c {
                TraceLabel::Zero => 0,
                TraceLabel::Pow(l) => ctx.subfield_prime_trace(TraceLabel::Pow((i + l) % (q - 1)))?,
            };
            let idx = (big_q * i + k % order) % order;
            let term = match family {
                Family::Delta => self.delta(n, idx)?,
                Family::Gamma => self.gamma(n, idx)?,
            };
            acc.add_assign(&term.mul_root_power(p - t)).expect("one ring");
        }
        Ok(acc)
    }

    /// f_k(N, c) = Σ_{i=0}^{q−2} conj χ_q(α^{Qi} c) Δ_{Qi+k}(N).
    pub fn f_twisted(&mut self, n: u64, c: TraceLabel, k: u64) -> Result<CycInt> {
        self.twisted(Family::Delta, n, c, k)
    }

    /// Σ_{i=0}^{q−2} conj χ_q(α^{Qi} c) Γ_{Qi+k}(N).
    pub fn gamma_twisted(&mut self, n: u64, c: TraceLabel, k: u64) -> Result<CycInt> {
        self.twisted(Family::Gamma, n, c, k)
    }
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

/// The classical evaluations of η_0 this crate knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PeriodFormula {
    /// d = 1.
    Trivial,
    /// d = 2, sm even.
    Quadratic,
    /// d = 3, p ≡ 1 (mod 3), 3 | sm.
    Cubic,
    /// p^j ≡ −1 (mod d) for some j.
    SemiPrimitive,
    /// d = Q.
    NormIndex,
}

fn p_pow(p: u64, e: u64) -> BigInt {
    Pow::pow(BigInt::from(p), e)
}

fn exact_div(num: BigInt, den: &BigInt) -> Result<BigInt> {
    let (quo, rem) = num.div_rem(den);
    if rem.is_zero() {
        Ok(quo)
    } else {
        Err(GaussError::HypothesisNotMet("closed form is not an integer"))
    }
}

fn sign(odd: bool) -> BigInt {
    if odd {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

/// η_0^{(2)} for sm even; the power q^{m/2} is read as p^{sm/2}.
pub fn eta0_quadratic(p: u64, s: u32, m: u32) -> Result<BigInt> {
    let sm = s as u64 * m as u64;
    if p == 2 || sm % 2 == 1 {
        return Err(GaussError::HypothesisNotMet("quadratic period needs p odd and sm even"));
    }
    let r = p_pow(p, sm / 2);
    // (−1)^{sm−1} = −1; for p ≡ 3 (mod 4) the extra (√−1)^{sm} is (−1)^{sm/2}
    let twist = if p % 4 == 1 { BigInt::one() } else { sign((sm / 2) % 2 == 1) };
    exact_div(-BigInt::one() - twist * r, &BigInt::from(2))
}

/// The c with c ≡ 1 (mod 3), p ∤ c and 4p^{sm/3} = c² + 27d².
pub fn cubic_c(p: u64, sm: u64) -> Result<BigInt> {
    if p % 3 != 1 || sm % 3 != 0 {
        return Err(GaussError::HypothesisNotMet("cubic period needs p ≡ 1 mod 3 and 3 | sm"));
    }
    let four_r: BigInt = p_pow(p, sm / 3) * 4u32;
    let bound = four_r.sqrt();
    if bound > BigInt::from(CUBIC_SCAN_LIMIT) {
        return Err(GaussError::BudgetExceeded {
            size: bound.to_u64().unwrap_or(u64::MAX),
            budget: CUBIC_SCAN_LIMIT,
        });
    }
    let bound = bound.to_i64().expect("below the scan limit");
    let p_big = BigInt::from(p);
    // c runs over …, −5, −2, 1, 4, 7, …
    let start = -bound - (-bound).rem_euclid(3) + 1;
    let mut c = start;
    while c <= bound {
        let cb = BigInt::from(c);
        let rest: BigInt = &four_r - &cb * &cb;
        if !rest.is_negative() && !(&cb % &p_big).is_zero() {
            let (d2, r27) = rest.div_rem(&BigInt::from(27));
            if r27.is_zero() && d2.sqrt().pow(2u32) == d2 {
                return Ok(cb);
            }
        }
        c += 3;
    }
    Err(GaussError::HypothesisNotMet("no representation 4p^(sm/3) = c^2 + 27d^2 found"))
}

/// η_0^{(3)} = (−1 + c·p^{sm/3})/3.
pub fn eta0_cubic(p: u64, s: u32, m: u32) -> Result<BigInt> {
    let sm = s as u64 * m as u64;
    let c = cubic_c(p, sm)?;
    exact_div(c * p_pow(p, sm / 3) - 1, &BigInt::from(3))
}

/// Least j with p^j ≡ −1 (mod d), if any.
pub fn least_semiprimitive_j(p: u64, d: &Factored) -> Result<Option<u64>> {
    let dv = d.value();
    if dv <= &BigUint::from(2u32) || (dv % p).is_zero() {
        return Ok(None);
    }
    let ord = ord_mod(&BigUint::from(p), d)?;
    if ord.is_odd() {
        return Ok(None);
    }
    let j = &ord >> 1u32;
    let is_minus_one = BigUint::from(p).modpow(&j, dv) == dv - 1u32;
    Ok(is_minus_one.then(|| j.to_u64().expect("order below 2^64")))
}

/// η_0^{(d)} in the semi-primitive case, d > 2 and p^j ≡ −1 (mod d) with
/// j least and 2j | sm.
pub fn eta0_semiprimitive(p: u64, s: u32, m: u32, d: &Factored) -> Result<BigInt> {
    let sm = s as u64 * m as u64;
    let j = least_semiprimitive_j(p, d)?
        .ok_or(GaussError::HypothesisNotMet("−1 is not a power of p modulo d"))?;
    if sm % (2 * j) != 0 {
        return Err(GaussError::HypothesisNotMet("2j does not divide sm"));
    }
    let gamma = sm / (2 * j);
    let root = p_pow(p, sm / 2);
    let dv = BigInt::from(d.value().clone());
    let pj1 = p_pow(p, j) + 1;
    let case_a = gamma % 2 == 1 && p % 2 == 1 && exact_div(pj1, &dv)?.is_odd();
    if case_a {
        exact_div(-(root + 1u32), &dv)
    } else {
        exact_div(sign(gamma % 2 == 0) * (&dv - 1) * root - 1, &dv)
    }
}

/// η_0^{(Q)}: −1 when p ∤ m, q − 1 otherwise.
pub fn eta0_norm_index(p: u64, s: u32, m: u32) -> BigInt {
    if m as u64 % p != 0 {
        -BigInt::one()
    } else {
        p_pow(p, s as u64) - 1
    }
}

/// η_0^{(d)} by the named formula, after checking its hypotheses.
pub fn period_closed_form(
    p: u64,
    s: u32,
    m: u32,
    d: &Factored,
    formula: PeriodFormula,
) -> Result<BigInt> {
    let dv = d.value();
    match formula {
        PeriodFormula::Trivial if dv.is_one() => Ok(-BigInt::one()),
        PeriodFormula::Quadratic if dv == &BigUint::from(2u32) => eta0_quadratic(p, s, m),
        PeriodFormula::Cubic if dv == &BigUint::from(3u32) => eta0_cubic(p, s, m),
        PeriodFormula::SemiPrimitive => eta0_semiprimitive(p, s, m, d),
        PeriodFormula::NormIndex => {
            let q: BigUint = BigUint::from(p).pow(s);
            if &((q.clone().pow(m) - 1u32) / (q - 1u32)) == dv {
                Ok(eta0_norm_index(p, s, m))
            } else {
                Err(GaussError::HypothesisNotMet("d is not (q^m-1)/(q-1)"))
            }
        }
        _ => Err(GaussError::HypothesisNotMet("formula does not apply to this d")),
    }
}

/// Which branch of the semi-primitive evaluation of Δ_0 applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiCase {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiDelta {
    pub value: BigInt,
    pub case: SemiCase,
    pub j: u64,
    pub gamma: u64,
}

/// Δ_0(n) when sm is even, m > 1, n > 1 is not a power of 2, n | q^m − 1 and
/// some j has p^j ≡ −1 modulo every odd prime divisor of n.
pub fn delta0_semiprimitive(p: u64, s: u32, m: u32, n: &Factored) -> Result<SemiDelta> {
    let sm = s as u64 * m as u64;
    let nv = n.value();
    if sm % 2 == 1 || m < 2 {
        return Err(GaussError::HypothesisNotMet("needs sm even and m > 1"));
    }
    if nv <= &BigUint::one() || n.primes().all(|l| l == &BigUint::from(2u32)) {
        return Err(GaussError::HypothesisNotMet("n must exceed 1 and not be a power of 2"));
    }
    let full = BigUint::from(p).pow(sm as u32) - 1u32;
    if !(full % nv).is_zero() {
        return Err(GaussError::HypothesisNotMet("n does not divide q^m - 1"));
    }
    let j = semiprimitive_j(&BigUint::from(p), n)?
        .ok_or(GaussError::HypothesisNotMet("no j with p^j ≡ −1 modulo the odd primes of n"))?
        .to_u64()
        .expect("j below 2^64");
    if sm % (2 * j) != 0 {
        return Err(GaussError::HypothesisNotMet("2j does not divide sm"));
    }
    let gamma = sm / (2 * j);
    let r = p_pow(p, sm / 2);
    let nb = BigInt::from(nv.clone());
    let phi = BigInt::from(n.euler_phi());
    let n_even = nv.is_even();
    let two_n = &nb * 2;
    let case_a = gamma % 2 == 1
        && p % 2 == 1
        && n_even
        && exact_div(p_pow(p, j) + 1, &BigInt::from(2))?.is_odd();
    let (value, case) = if case_a {
        let eta2 = eta0_quadratic(p, s, m)?;
        // 2n·Δ = −2n·η₂ − (1 + R)(n + 2φ(n))
        let lhs: BigInt = &two_n * eta2;
        let rhs: BigInt = (&r + 1u32) * (&nb + &phi * 2u32);
        let num = -lhs - rhs;
        (exact_div(num, &two_n)?, SemiCase::A)
    } else {
        // 2n·Δ = ε₂·n·((−1)^{γ+1}R − 1 − 2η₂) + 2((−1)^γ R − 1)φ(n)
        let mut num = (sign(gamma % 2 == 1) * &r - 1) * &phi * 2;
        if n_even {
            let eta2 = eta0_quadratic(p, s, m)?;
            num += &nb * (sign(gamma % 2 == 0) * &r - 1 - eta2 * 2);
        }
        (exact_div(num, &two_n)?, SemiCase::B)
    };
    Ok(SemiDelta { value, case, j, gamma })
}
