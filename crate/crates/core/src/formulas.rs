//! Closed-form counts. Each function returns a [`CountReport`] naming the
//! branch that produced it; every division is exact or the call fails with
//! [`FormulaError::NonIntegerResult`].

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::ffield::{FieldCtx, TraceLabel};
use crate::gauss::{self, GaussEngine, GaussError};
use crate::numtheory::{factorize, is_mersenne_prime, is_prime, is_prime_u64, Factored, NumberTheoryError};
use crate::oracle::{CountReport, Method, Quantity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BranchTag {
    ZeroTraceGeneral,
    Coprime,
    QPrime,
    Gcd2,
    Gcd3,
    SemiPrimitive,
    Uniform,
    MersenneQuartic,
    PrimitiveZero,
    RelationP,
    Carlitz,
    Order2Q,
    GeneralF,
}

const BRANCH_NAMES: [(BranchTag, &str); 13] = [
    (BranchTag::ZeroTraceGeneral, "zero-trace-general"),
    (BranchTag::Coprime, "coprime"),
    (BranchTag::QPrime, "q-prime"),
    (BranchTag::Gcd2, "gcd-2"),
    (BranchTag::Gcd3, "gcd-3"),
    (BranchTag::SemiPrimitive, "semi-primitive"),
    (BranchTag::Uniform, "uniform"),
    (BranchTag::MersenneQuartic, "mersenne-quartic"),
    (BranchTag::PrimitiveZero, "primitive-zero"),
    (BranchTag::RelationP, "relation-P"),
    (BranchTag::Carlitz, "carlitz"),
    (BranchTag::Order2Q, "order-2Q"),
    (BranchTag::GeneralF, "general-f"),
];

impl BranchTag {
    pub fn name(self) -> &'static str {
        BRANCH_NAMES.iter().find(|(b, _)| *b == self).map(|(_, n)| *n).expect("every tag is named")
    }
}

impl fmt::Display for BranchTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BranchTag {
    type Err = alloc::string::String;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        BRANCH_NAMES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(b, _)| *b)
            .ok_or_else(|| alloc::format!("unknown branch {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("{n} does not divide q^m - 1 = {order}")]
    NotDivisor { n: BigUint, order: BigUint },
    #[error("non-integer or negative intermediate in {0}")]
    NonIntegerResult(&'static str),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(&'static str),
    #[error("{0} is not a Mersenne prime")]
    NotMersenne(BigUint),
    #[error("subfield identity failed: {0}")]
    IdentityFailed(&'static str),
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error(transparent)]
    NumberTheory(#[from] NumberTheoryError),
}

type Result<T> = core::result::Result<T, FormulaError>;

fn exact(num: BigInt, den: &BigInt, what: &'static str) -> Result<BigInt> {
    let (quo, rem) = num.div_rem(den);
    if rem.is_zero() {
        Ok(quo)
    } else {
        Err(FormulaError::NonIntegerResult(what))
    }
}

fn count(value: BigInt, what: &'static str) -> Result<BigUint> {
    value.to_biguint().ok_or(FormulaError::NonIntegerResult(what))
}

fn int(x: &BigUint) -> BigInt {
    BigInt::from_biguint(Sign::Plus, x.clone())
}

/// The numbers attached to F_{q^m} over F_q without building the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldShape {
    p: u64,
    s: u32,
    m: u32,
    q: BigUint,
    order: BigUint,
    big_q: BigUint,
    order_factored: Factored,
}

impl FieldShape {
    /// Factors q^m − 1 as (q − 1)·Q, each piece separately, using any hints
    /// that divide it.
    pub fn new(p: u64, s: u32, m: u32, hints: &[BigUint]) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(FormulaError::HypothesisNotMet("p must be prime"));
        }
        if s == 0 || m == 0 {
            return Err(FormulaError::HypothesisNotMet("s and m must be positive"));
        }
        let q = BigUint::from(p).pow(s);
        let order: BigUint = q.pow(m) - 1u32;
        let qm1: BigUint = &q - 1u32;
        let big_q = &order / &qm1;
        let order_factored = factor_pieces(&[qm1, big_q.clone()], hints)?;
        Ok(FieldShape { p, s, m, q, order, big_q, order_factored })
    }

    pub fn from_ctx(ctx: &FieldCtx) -> Self {
        FieldShape {
            p: ctx.p(),
            s: ctx.s(),
            m: ctx.m(),
            q: BigUint::from(ctx.q()),
            order: BigUint::from(ctx.order()),
            big_q: BigUint::from(ctx.norm_index()),
            order_factored: ctx.group_order().clone(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn q(&self) -> &BigUint {
        &self.q
    }
    /// q^m − 1.
    pub fn order(&self) -> &BigUint {
        &self.order
    }
    /// Q = (q^m − 1)/(q − 1).
    pub fn norm_index(&self) -> &BigUint {
        &self.big_q
    }
    pub fn order_factored(&self) -> &Factored {
        &self.order_factored
    }

    pub fn factor_divisor(&self, n: &BigUint) -> Result<Factored> {
        self.order_factored.factor_divisor(n).map_err(|_| FormulaError::NotDivisor {
            n: n.clone(),
            order: self.order.clone(),
        })
    }

    /// K_Q: the largest divisor of N coprime to Q.
    pub fn k_q(&self, n: &Factored) -> Factored {
        n.coprime_part(&self.big_q)
    }

    /// D: the smallest divisor of q − 1 with (q − 1)/D coprime to Q.
    pub fn d(&self) -> Factored {
        let qm1 = self.factor_divisor(&(&self.q - 1u32)).expect("q - 1 divides q^m - 1");
        qm1.supported_part(&self.big_q)
    }

    /// L_Q = D·Q, the largest divisor of q^m − 1 with the radical of Q.
    pub fn l_q(&self) -> BigUint {
        self.d().value() * &self.big_q
    }

    fn report(&self, n: &BigUint, c: TraceLabel, quantity: Quantity, tag: BranchTag, value: BigUint) -> CountReport {
        CountReport {
            p: self.p,
            s: self.s,
            m: self.m,
            n: n.clone(),
            c,
            quantity,
            method: Method::Formula(tag),
            value,
        }
    }
}

/// Factorization of the product of `pieces`, feeding each piece only the
/// hints that divide it.
fn factor_pieces(pieces: &[BigUint], hints: &[BigUint]) -> Result<Factored> {
    let mut acc = Factored::one();
    for piece in pieces {
        let mine: Vec<BigUint> = hints
            .iter()
            .filter(|h| !h.is_zero() && (piece % *h).is_zero())
            .cloned()
            .collect();
        acc = acc.mul(&factorize(piece, &mine)?);
    }
    Ok(acc)
}

fn as_u64(n: &BigUint) -> Result<u64> {
    n.to_u64().ok_or(FormulaError::HypothesisNotMet("value exceeds 64 bits"))
}

// ---------------------------------------------------------------------------
// General twisted-sum formulas
// ---------------------------------------------------------------------------

/// Z(c) = (1/q)((q^m − 1)/N · φ(N) + f_0(N, c)).
pub fn z_general(engine: &mut GaussEngine, n: u64, c: TraceLabel) -> Result<CountReport> {
    let ctx = engine.ctx();
    let shape = FieldShape::from_ctx(ctx);
    let nb = BigUint::from(n);
    let nf = shape.factor_divisor(&nb)?;
    let f0 = engine.f_twisted(n, c, 0)?;
    let f0 = f0.as_integer().ok_or(FormulaError::NonIntegerResult("twisted sum f_0"))?;
    let main = int(&(&shape.order / &nb * nf.euler_phi()));
    let value = exact(main + f0, &int(&shape.q), "Z general")?;
    Ok(shape.report(&nb, c, Quantity::Z, BranchTag::GeneralF, count(value, "Z general")?))
}

/// P(c) = (1/q)(φ(N) + Σ_i conj χ_q(α^{Qi}c) Γ_{Qi}(N)).
pub fn p_general(engine: &mut GaussEngine, n: u64, c: TraceLabel) -> Result<CountReport> {
    let ctx = engine.ctx();
    let shape = FieldShape::from_ctx(ctx);
    let nb = BigUint::from(n);
    let nf = shape.factor_divisor(&nb)?;
    let g = engine.gamma_twisted(n, c, 0)?;
    let g = g.as_integer().ok_or(FormulaError::NonIntegerResult("twisted gamma sum"))?;
    let value = exact(int(&nf.euler_phi()) + g, &int(&shape.q), "P general")?;
    Ok(shape.report(&nb, c, Quantity::P, BranchTag::GeneralF, count(value, "P general")?))
}

// ---------------------------------------------------------------------------
// Zero trace
// ---------------------------------------------------------------------------

/// (q − 1)φ(K_Q)/(q K_Q) · (Q/g · φ(g) + Δ_0(g)) with g = gcd(Q, N).
fn zero_trace_value(shape: &FieldShape, nf: &Factored, delta0_g: &BigInt) -> Result<BigInt> {
    let g = nf.value().gcd(&shape.big_q);
    let gf = shape.factor_divisor(&g)?;
    let k = shape.k_q(nf);
    let inner = int(&(&shape.big_q / &g * gf.euler_phi())) + delta0_g;
    let num = int(&(&shape.q - 1u32)) * int(&k.euler_phi()) * inner;
    exact(num, &int(&(&shape.q * k.value())), "zero-trace theorem")
}

/// Δ_0(g) for g | Q, by the first closed form whose hypotheses hold, else
/// from the period engine.
pub fn delta0(
    shape: &FieldShape,
    g: &Factored,
    engine: Option<&mut GaussEngine>,
) -> Result<(BigInt, BranchTag)> {
    let (p, s, m) = (shape.p, shape.s, shape.m);
    let gv = g.value();
    let minus_one = -BigInt::one();
    if gv.is_one() {
        return Ok((minus_one, BranchTag::Coprime));
    }
    if gv == &shape.big_q && is_prime(gv) {
        return Ok((minus_one - gauss::eta0_norm_index(p, s, m), BranchTag::QPrime));
    }
    let only = |l: u32| g.primes().all(|x| x == &BigUint::from(l));
    if only(2) {
        if let Ok(eta) = gauss::eta0_quadratic(p, s, m) {
            return Ok((minus_one - eta, BranchTag::Gcd2));
        }
    }
    if only(3) && p % 3 == 1 {
        if let Ok(eta) = gauss::eta0_cubic(p, s, m) {
            return Ok((minus_one - eta, BranchTag::Gcd3));
        }
    }
    if let Ok(semi) = gauss::delta0_semiprimitive(p, s, m, g) {
        return Ok((semi.value, BranchTag::SemiPrimitive));
    }
    match engine {
        Some(engine) => {
            let d = engine.delta(as_u64(gv)?, 0)?;
            let d = d.as_integer().ok_or(FormulaError::NonIntegerResult("Δ_0(g)"))?;
            Ok((d, BranchTag::ZeroTraceGeneral))
        }
        None => Err(FormulaError::HypothesisNotMet(
            "no closed form for Δ_0 applies and no field enumeration is available",
        )),
    }
}

/// Z(0) by the zero-trace theorem with Δ_0(gcd(Q, N)) from the periods.
pub fn z_zero(engine: &mut GaussEngine, n: u64) -> Result<CountReport> {
    let shape = FieldShape::from_ctx(engine.ctx());
    let nb = BigUint::from(n);
    let nf = shape.factor_divisor(&nb)?;
    let g = nb.gcd(&shape.big_q);
    let d = engine.delta(as_u64(&g)?, 0)?;
    let d = d.as_integer().ok_or(FormulaError::NonIntegerResult("Δ_0(g)"))?;
    let value = zero_trace_value(&shape, &nf, &d)?;
    Ok(shape.report(&nb, TraceLabel::Zero, Quantity::Z, BranchTag::ZeroTraceGeneral, count(value, "Z(0)")?))
}

/// Z(0) through the first special case that applies, in the order coprime,
/// Q prime, gcd a power of 2, gcd a power of 3, semi-primitive; otherwise
/// the general theorem (which needs `engine`).
pub fn z_zero_special(
    shape: &FieldShape,
    n: &BigUint,
    engine: Option<&mut GaussEngine>,
) -> Result<CountReport> {
    let (value, tag) = zero_special_value(shape, n, engine)?;
    Ok(shape.report(n, TraceLabel::Zero, Quantity::Z, tag, count(value, "Z(0)")?))
}

fn zero_special_value(
    shape: &FieldShape,
    n: &BigUint,
    engine: Option<&mut GaussEngine>,
) -> Result<(BigInt, BranchTag)> {
    let (p, s, m) = (shape.p, shape.s, shape.m);
    let sm = s as u64 * m as u64;
    let nf = shape.factor_divisor(n)?;
    let g = n.gcd(&shape.big_q);
    let gf = shape.factor_divisor(&g)?;
    let q = int(&shape.q);
    let big_q = int(&shape.big_q);
    let k = shape.k_q(&nf);
    let (kv, kphi) = (int(k.value()), int(&k.euler_phi()));
    let scale = |inner: BigInt, den_extra: u32| -> Result<BigInt> {
        let num = (&q - 1u32) * &kphi * inner;
        exact(num, &(&q * &kv * den_extra), "special zero-trace branch")
    };

    // coprime: φ(N)/N · (q^{m−1} − 1)
    if g.is_one() {
        let qm1: BigInt = q.pow(m - 1) - 1u32;
        let v = exact(int(&nf.euler_phi()) * qm1, &int(n), "coprime branch")?;
        return Ok((v, BranchTag::Coprime));
    }

    // Q prime and Q | N
    if g == shape.big_q && is_prime(&g) {
        let delta = if m as u64 % p != 0 { BigInt::zero() } else { -q.clone() };
        if n == &shape.order {
            // φ(q^m − 1)/q, less φ(q − 1) when p | m
            let mut v = exact(int(&nf.euler_phi()), &q, "Q-prime branch")?;
            if !delta.is_zero() {
                let qm1 = shape.factor_divisor(&(&shape.q - 1u32))?;
                v -= int(&qm1.euler_phi());
            }
            return Ok((v, BranchTag::QPrime));
        }
        return Ok((zero_trace_value(shape, &nf, &delta)?, BranchTag::QPrime));
    }

    // gcd a power of 2: 2qK/((q−1)φ(K)) · Z = Q − 1 + ε·q^{m/2}
    if gf.primes().all(|l| l == &BigUint::from(2u32)) && p % 2 == 1 && sm % 2 == 0 {
        let r: BigInt = BigInt::from(p).pow((sm / 2) as u32);
        let eps = if p % 4 == 1 || (sm / 2) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let v = scale(&big_q - 1u32 + eps * r, 2)?;
        return Ok((v, BranchTag::Gcd2));
    }

    // gcd a power of 3, p ≡ 1 (mod 3): Z = (q−1)φ(K)/(qK) · (2Q − 2 − c·p^{sm/3})/3
    if gf.primes().all(|l| l == &BigUint::from(3u32)) && p % 3 == 1 {
        if let Ok(c) = gauss::cubic_c(p, sm) {
            let r: BigInt = BigInt::from(p).pow((sm / 3) as u32);
            let v = scale(&big_q * 2u32 - 2u32 - c * r, 3)?;
            return Ok((v, BranchTag::Gcd3));
        }
    }

    if let Ok(semi) = gauss::delta0_semiprimitive(p, s, m, &gf) {
        return Ok((zero_trace_value(shape, &nf, &semi.value)?, BranchTag::SemiPrimitive));
    }

    let engine = engine.ok_or(FormulaError::HypothesisNotMet(
        "no special branch applies and no field enumeration is available",
    ))?;
    let d = engine.delta(as_u64(&g)?, 0)?;
    let d = d.as_integer().ok_or(FormulaError::NonIntegerResult("Δ_0(g)"))?;
    Ok((zero_trace_value(shape, &nf, &d)?, BranchTag::ZeroTraceGeneral))
}

/// Primitive elements with trace 0: D·φ((q − 1)/D)·(φ(Q) + Δ_0(Q))/q.
pub fn z_primitive_zero(shape: &FieldShape, engine: Option<&mut GaussEngine>) -> Result<CountReport> {
    let d = shape.d();
    let qm1 = shape.factor_divisor(&(&shape.q - 1u32))?;
    let rest = qm1.coprime_part(&shape.big_q);
    let qf = shape.factor_divisor(&shape.big_q)?;
    let (delta, _) = delta0(shape, &qf, engine)?;
    let num = int(d.value()) * int(&rest.euler_phi()) * (int(&qf.euler_phi()) + delta);
    let value = exact(num, &int(&shape.q), "primitive zero trace")?;
    Ok(shape.report(&shape.order, TraceLabel::Zero, Quantity::Z, BranchTag::PrimitiveZero, count(value, "Z(0)")?))
}

fn check_mersenne(p: &BigUint) -> Result<()> {
    if is_mersenne_prime(p) {
        Ok(())
    } else {
        Err(FormulaError::NotMersenne(p.clone()))
    }
}

/// Primitive elements of F_{p^4} with absolute trace 0 for a Mersenne prime
/// p: (φ(p⁴ − 1) − φ((p⁴ − 1)/(p + 1)))/p.
pub fn z_mersenne_quartic(p: &BigUint, hints: &[BigUint]) -> Result<CountReport> {
    check_mersenne(p)?;
    let pm1: BigUint = p - 1u32;
    let pp1: BigUint = p + 1u32;
    let p2p1: BigUint = p * p + 1u32;
    let without = factor_pieces(&[pm1, p2p1], hints)?;
    let full = without.mul(&factor_pieces(&[pp1], hints)?);
    let diff = int(&full.euler_phi()) - int(&without.euler_phi());
    let value = exact(diff, &int(p), "Mersenne quartic")?;
    Ok(CountReport {
        p: p.to_u64().unwrap_or(0),
        s: 1,
        m: 4,
        n: full.value().clone(),
        c: TraceLabel::Zero,
        quantity: Quantity::Z,
        method: Method::Formula(BranchTag::MersenneQuartic),
        value: count(value, "Mersenne quartic")?,
    })
}

/// Elements of order 2(p + 1)(p² + 1) in F_{p^4} with trace 0, p Mersenne:
/// 2φ(p² + 1).
pub fn order_2q_mersenne(p: &BigUint, hints: &[BigUint]) -> Result<CountReport> {
    check_mersenne(p)?;
    let p2p1: BigUint = p * p + 1u32;
    let phi = factor_pieces(&[p2p1.clone()], hints)?.euler_phi();
    let pp1: BigUint = p + 1u32;
    Ok(CountReport {
        p: p.to_u64().unwrap_or(0),
        s: 1,
        m: 4,
        n: pp1 * p2p1 * 2u32,
        c: TraceLabel::Zero,
        quantity: Quantity::P,
        method: Method::Formula(BranchTag::Order2Q),
        value: phi * 2u32,
    })
}

// ---------------------------------------------------------------------------
// Nonzero traces
// ---------------------------------------------------------------------------

fn radical_divides_q(shape: &FieldShape, nf: &Factored) -> bool {
    nf.primes().all(|l| (&shape.big_q % l).is_zero())
}

/// Z(c ≠ 0) = ((q^m − 1)/N · φ(N) − Z(0))/(q − 1) when every prime of N
/// divides Q. When the semi-primitive evaluation of Δ_0(N) applies it is
/// checked against the same count.
pub fn z_nonzero_uniform(
    shape: &FieldShape,
    n: &BigUint,
    c: TraceLabel,
    engine: Option<&mut GaussEngine>,
) -> Result<CountReport> {
    if c == TraceLabel::Zero {
        return Err(FormulaError::HypothesisNotMet("c must be nonzero"));
    }
    if BigUint::from(c.index()) >= shape.q {
        return Err(FormulaError::HypothesisNotMet("label outside F_q"));
    }
    let nf = shape.factor_divisor(n)?;
    if !radical_divides_q(shape, &nf) {
        return Err(FormulaError::HypothesisNotMet("some prime of N does not divide Q"));
    }
    let (z0, _) = zero_special_value(shape, n, engine)?;
    let total = int(&(&shape.order / n * nf.euler_phi()));
    let value = exact(total - z0, &int(&(&shape.q - 1u32)), "uniform nonzero trace")?;
    if let Ok(semi) = z_nonzero_semidelta_value(shape, &nf) {
        if semi != value {
            return Err(FormulaError::IdentityFailed("semi-primitive nonzero-trace count"));
        }
    }
    Ok(shape.report(n, c, Quantity::Z, BranchTag::Uniform, count(value, "Z(c≠0)")?))
}

/// Z(c ≠ 0) = ((q − 1)Q·φ(N)/N − Δ_0(N))/q with Δ_0(N) from the
/// semi-primitive evaluation, for N with every prime dividing Q.
pub fn z_nonzero_semidelta(shape: &FieldShape, n: &BigUint, c: TraceLabel) -> Result<CountReport> {
    if c == TraceLabel::Zero {
        return Err(FormulaError::HypothesisNotMet("c must be nonzero"));
    }
    let nf = shape.factor_divisor(n)?;
    let value = z_nonzero_semidelta_value(shape, &nf)?;
    Ok(shape.report(n, c, Quantity::Z, BranchTag::SemiPrimitive, count(value, "Z(c≠0)")?))
}

fn z_nonzero_semidelta_value(shape: &FieldShape, nf: &Factored) -> Result<BigInt> {
    if !radical_divides_q(shape, nf) {
        return Err(FormulaError::HypothesisNotMet("some prime of N does not divide Q"));
    }
    let semi = gauss::delta0_semiprimitive(shape.p, shape.s, shape.m, nf)?;
    let main = int(&(&shape.q - 1u32)) * int(&shape.big_q) * int(&nf.euler_phi());
    let main = exact(main, &int(nf.value()), "semi-primitive nonzero trace")?;
    exact(main - semi.value, &int(&shape.q), "semi-primitive nonzero trace")
}

/// Δ_0(N) recovered from counts over F_q and over a proper subfield F_t of
/// F_q (the same big field seen as an extension of F_t). Both identities
///   Δ_0(N) = Z_t(0) − Z_t(c ≠ 0)  and  Δ_0(N) = (q Z_q(0) − t Z_t(0))/(q − t)
/// are checked.
pub fn delta0_subfield(
    q: &BigUint,
    t: &BigUint,
    z_q_zero: &BigUint,
    z_t_zero: &BigUint,
    z_t_nonzero: &BigUint,
) -> Result<BigInt> {
    if t >= q {
        return Err(FormulaError::HypothesisNotMet("t must be a proper subfield order"));
    }
    let first = int(z_t_zero) - int(z_t_nonzero);
    let second = exact(
        int(q) * int(z_q_zero) - int(t) * int(z_t_zero),
        &(int(q) - int(t)),
        "subfield identity",
    )?;
    if first != second {
        return Err(FormulaError::IdentityFailed("the two subfield expressions differ"));
    }
    Ok(first)
}

// ---------------------------------------------------------------------------
// Prescribed order
// ---------------------------------------------------------------------------

/// P(0) = N/(q^m − 1) · Z(0) for L_Q | N.
pub fn p_from_relation(
    shape: &FieldShape,
    n: &BigUint,
    engine: Option<&mut GaussEngine>,
) -> Result<CountReport> {
    shape.factor_divisor(n)?;
    if !(n % shape.l_q()).is_zero() {
        return Err(FormulaError::HypothesisNotMet("D·Q does not divide N"));
    }
    let (z0, _) = zero_special_value(shape, n, engine)?;
    let value = exact(int(n) * z0, &int(&shape.order), "order relation")?;
    Ok(shape.report(n, TraceLabel::Zero, Quantity::P, BranchTag::RelationP, count(value, "P(0)")?))
}

/// Whether some element of order N has trace 0, for L_Q | N and m > 1.
pub fn exists_order_trace_zero(shape: &FieldShape, n: &BigUint) -> Result<bool> {
    shape.factor_divisor(n)?;
    if shape.m < 2 {
        return Err(FormulaError::HypothesisNotMet("m must exceed 1"));
    }
    if !(n % shape.l_q()).is_zero() {
        return Err(FormulaError::HypothesisNotMet("D·Q does not divide N"));
    }
    Ok(shape.m != 2 && !(shape.q == BigUint::from(4u32) && shape.m == 3))
}

// ---------------------------------------------------------------------------
// Irreducible polynomials
// ---------------------------------------------------------------------------

/// I_{q,m}(c): monic irreducibles of degree m over F_q = F_{p^s} with trace c.
/// Only whether c is zero matters.
pub fn carlitz(p: u64, s: u32, m: u32, c: TraceLabel) -> Result<CountReport> {
    if !is_prime_u64(p) || s == 0 || m == 0 {
        return Err(FormulaError::HypothesisNotMet("need a prime p and positive s, m"));
    }
    let q = BigInt::from(p).pow(s);
    let mf = Factored::from_u64(m as u64)?;
    let mut all = BigInt::zero();
    let mut nonzero = BigInt::zero();
    for (d, mu) in mf.squarefree_divisors() {
        let d = d.to_u32().expect("divides m");
        let term = q.pow(m / d) * BigInt::from(mu);
        if d as u64 % p != 0 {
            nonzero += &term;
        }
        all += term;
    }
    let mb = BigInt::from(m);
    let all = exact(all, &mb, "irreducible count")?;
    let nonzero = exact(nonzero, &(&q * &mb), "irreducible count, c ≠ 0")?;
    let value = match c {
        TraceLabel::Zero => all - (&q - 1u32) * nonzero,
        TraceLabel::Pow(_) => nonzero,
    };
    Ok(CountReport {
        p,
        s,
        m,
        n: BigUint::one(),
        c,
        quantity: Quantity::I,
        method: Method::Formula(BranchTag::Carlitz),
        value: count(value, "irreducible count")?,
    })
}
