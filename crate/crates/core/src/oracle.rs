//! Brute-force counters. Every count here comes from walking the powers of α
//! (or all monic polynomials) and testing each object directly.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::ffield::poly;
use crate::ffield::{FieldCtx, FieldElem, FieldError, TraceLabel};
use crate::formulas::BranchTag;

/// Cap on group elements for one pass of a multi-count sweep.
pub const DEFAULT_SWEEP_BUDGET: u64 = 2_000_000;

/// Cap on enumerated objects for a single count.
pub const DEFAULT_SINGLE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{n} does not divide the group order {order}")]
    NotDivisor { n: u64, order: u64 },
    #[error("enumeration of {size} objects exceeds the budget {budget}")]
    BudgetExceeded { size: u64, budget: u64 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

type Result<T> = core::result::Result<T, OracleError>;

/// What was counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    /// N-free elements with prescribed trace.
    Z,
    /// Elements of order N with prescribed trace.
    P,
    /// Elements of order N in a subset.
    M,
    /// Hamming weight of a trace codeword.
    WH,
    /// Monic irreducible polynomials with prescribed trace.
    I,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Z => "Z",
            Quantity::P => "P",
            Quantity::M => "M",
            Quantity::WH => "WH",
            Quantity::I => "I",
        })
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "Z" => Ok(Quantity::Z),
            "P" => Ok(Quantity::P),
            "M" => Ok(Quantity::M),
            "WH" => Ok(Quantity::WH),
            "I" => Ok(Quantity::I),
            other => Err(alloc::format!("unknown quantity {other:?}")),
        }
    }
}

/// How a count was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Oracle,
    Formula(BranchTag),
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Formula(_) => "formula",
        }
    }

    pub fn branch(&self) -> Option<BranchTag> {
        match self {
            Method::Oracle => None,
            Method::Formula(b) => Some(*b),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Oracle => f.write_str("oracle"),
            Method::Formula(b) => write!(f, "formula:{b}"),
        }
    }
}

/// One count together with the parameters it answers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub p: u64,
    pub s: u32,
    pub m: u32,
    pub n: BigUint,
    pub c: TraceLabel,
    pub quantity: Quantity,
    pub method: Method,
    pub value: BigUint,
}

impl CountReport {
    pub fn oracle(ctx: &FieldCtx, n: u64, c: TraceLabel, quantity: Quantity, value: u64) -> Self {
        CountReport {
            p: ctx.p(),
            s: ctx.s(),
            m: ctx.m(),
            n: BigUint::from(n),
            c,
            quantity,
            method: Method::Oracle,
            value: BigUint::from(value),
        }
    }
}

fn check_divisor(ctx: &FieldCtx, n: u64) -> Result<()> {
    if n == 0 || ctx.order() % n != 0 {
        return Err(OracleError::NotDivisor { n, order: ctx.order() });
    }
    Ok(())
}

fn check_budget(size: u64, budget: u64) -> Result<()> {
    if size > budget {
        return Err(OracleError::BudgetExceeded { size, budget });
    }
    Ok(())
}

fn check_label(ctx: &FieldCtx, c: TraceLabel) -> Result<u32> {
    ctx.label_element(c)?;
    Ok(c.index() as u32)
}

/// Z_{q,m,N}(c): α^j with gcd(j, N) = 1 and Tr(α^j) = c.
pub fn count_z_oracle(ctx: &FieldCtx, n: u64, c: TraceLabel, budget: u64) -> Result<CountReport> {
    check_divisor(ctx, n)?;
    check_budget(ctx.order(), budget)?;
    let want = check_label(ctx, c)?;
    let mut count = 0u64;
    let mut err = None;
    ctx.for_each_power(0..ctx.order(), |j, coeffs| {
        if j.gcd(&n) == 1 {
            match ctx.rel_trace_label_index(coeffs) {
                Ok(l) if l == want => count += 1,
                Ok(_) => {}
                Err(e) => err = Some(e),
            }
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(CountReport::oracle(ctx, n, c, Quantity::Z, count))
}

/// P_{q,m,N}(c): elements of order N with Tr = c. The order of α^j is
/// (q^m − 1)/gcd(j, q^m − 1).
pub fn count_p_oracle(ctx: &FieldCtx, n: u64, c: TraceLabel, budget: u64) -> Result<CountReport> {
    check_divisor(ctx, n)?;
    check_budget(ctx.order(), budget)?;
    let want = check_label(ctx, c)?;
    let order = ctx.order();
    let mut count = 0u64;
    let mut err = None;
    ctx.for_each_power(0..order, |j, coeffs| {
        if order / j.gcd(&order) == n {
            match ctx.rel_trace_label_index(coeffs) {
                Ok(l) if l == want => count += 1,
                Ok(_) => {}
                Err(e) => err = Some(e),
            }
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(CountReport::oracle(ctx, n, c, Quantity::P, count))
}

/// M_{q,m,N}(A) for the subset A given by a predicate.
pub fn count_m_subset(
    ctx: &FieldCtx,
    n: u64,
    budget: u64,
    mut pred: impl FnMut(&FieldElem) -> bool,
) -> Result<u64> {
    check_divisor(ctx, n)?;
    check_budget(ctx.order(), budget)?;
    let order = ctx.order();
    let mut count = 0u64;
    ctx.for_each_power(0..order, |j, coeffs| {
        if order / j.gcd(&order) == n {
            let x = ctx.element(coeffs.to_vec()).expect("sweep element");
            if pred(&x) {
                count += 1;
            }
        }
    });
    Ok(count)
}

/// W_H(N, β): nonzero relative traces among β·α^{iN}, 0 ≤ i < (q^m − 1)/N.
pub fn hamming_weight(ctx: &FieldCtx, n: u64, beta: &FieldElem, budget: u64) -> Result<u64> {
    check_divisor(ctx, n)?;
    let len = ctx.order() / n;
    check_budget(len, budget)?;
    let step = ctx.alpha_power(n);
    let mut cur = beta.clone();
    let mut weight = 0u64;
    for _ in 0..len {
        if !ctx.rel_trace_linear(cur.coeffs()).is_zero() {
            weight += 1;
        }
        cur = ctx.mul(&cur, &step)?;
    }
    Ok(weight)
}

/// I_{q,m}(c) by testing every monic polynomial of degree m over F_q, where
/// `q_ctx` models F_q itself. The trace of x^m + a_{m−1}x^{m−1} + … is
/// −a_{m−1}.
pub fn count_irreducible_trace_oracle(
    q_ctx: &FieldCtx,
    m: u32,
    c: &FieldElem,
    budget: u64,
) -> Result<u64> {
    let q = q_ctx.order() + 1;
    let total = q.checked_pow(m).ok_or(OracleError::BudgetExceeded { size: u64::MAX, budget })?;
    check_budget(total.saturating_mul(q), budget)?;
    let neg_c = q_ctx.neg(c)?;
    let m = m as usize;
    let mut count = 0u64;
    for t in 0..total {
        // low coefficients a_0 … a_{m−1} are the base-q digits of t
        let mut rest = t;
        let mut f: Vec<FieldElem> = Vec::with_capacity(m + 1);
        for _ in 0..m {
            f.push(q_ctx.element_from_index(rest % q)?);
            rest /= q;
        }
        if f[m - 1] != neg_c {
            continue;
        }
        f.push(q_ctx.one());
        if poly::is_irreducible(q_ctx, &f) {
            count += 1;
        }
    }
    Ok(count)
}

/// Elements of F_{q^m} of degree exactly m over F_q with relative trace c.
pub fn count_full_degree_trace(ctx: &FieldCtx, c: TraceLabel, budget: u64) -> Result<u64> {
    check_budget(ctx.order(), budget)?;
    let want = check_label(ctx, c)?;
    let (q, m, order) = (ctx.q(), ctx.m() as u64, ctx.order());
    // α^j lies in F_{q^d} iff (q^m − 1)/(q^d − 1) divides j
    let strides: Vec<u64> = (1..m)
        .filter(|d| m % d == 0)
        .map(|d| order / (q.pow(d as u32) - 1))
        .collect();
    let mut count = 0u64;
    let mut err = None;
    ctx.for_each_power(0..order, |j, coeffs| {
        if strides.iter().any(|s| j % s == 0) {
            return;
        }
        match ctx.rel_trace_label_index(coeffs) {
            Ok(l) if l == want => count += 1,
            Ok(_) => {}
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    Ok(count)
}

/// Σ_{d | gcd(N, k)} μ(d), the value of the N-free characteristic function
/// at α^k.
pub fn nfree_characteristic(ctx: &FieldCtx, n: u64, k: u64) -> Result<i64> {
    check_divisor(ctx, n)?;
    let g = k.gcd(&n);
    let f = ctx
        .group_order()
        .factor_divisor(&BigUint::from(g))
        .map_err(FieldError::from)?;
    Ok(f.squarefree_divisors().iter().map(|(_, mu)| *mu as i64).sum())
}

/// Whether the characteristic function of N-freeness is 1 at α^k.
pub fn nfree_characteristic_check(ctx: &FieldCtx, n: u64, k: u64) -> Result<bool> {
    Ok(nfree_characteristic(ctx, n, k)? == 1)
}

/// One sweep over F_{q^m}^* recording, for each g = gcd(j, q^m − 1), how
/// many α^j fall in each trace fiber. Every Z and P count of the field is
/// then a sum of these histograms.
#[derive(Debug, Clone)]
pub struct OracleTable {
    order: u64,
    q: u64,
    /// g ↦ fiber counts indexed by label index.
    classes: BTreeMap<u64, Vec<u64>>,
}

impl OracleTable {
    pub fn new(ctx: &FieldCtx, budget: u64) -> Result<Self> {
        check_budget(ctx.order(), budget)?;
        let order = ctx.order();
        let q = ctx.q();
        let divisors: Vec<u64> = ctx
            .group_order()
            .divisors()
            .iter()
            .map(|d| d.to_u64().expect("divides a u64"))
            .collect();
        let slot: BTreeMap<u64, usize> = divisors.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        let mut flat = vec![0u64; divisors.len() * q as usize];
        let mut err = None;
        ctx.for_each_power(0..order, |j, coeffs| match ctx.rel_trace_label_index(coeffs) {
            Ok(l) => flat[slot[&j.gcd(&order)] * q as usize + l as usize] += 1,
            Err(e) => err = Some(e),
        });
        if let Some(e) = err {
            return Err(e.into());
        }
        let classes = divisors
            .iter()
            .zip(flat.chunks(q as usize))
            .map(|(&d, counts)| (d, counts.to_vec()))
            .collect();
        Ok(OracleTable { order, q, classes })
    }

    fn check(&self, n: u64, c: TraceLabel) -> Result<usize> {
        if n == 0 || self.order % n != 0 {
            return Err(OracleError::NotDivisor { n, order: self.order });
        }
        if c.index() >= self.q {
            return Err(FieldError::InvalidLabel(c.index()).into());
        }
        Ok(c.index() as usize)
    }

    /// Z_{q,m,N}(c).
    pub fn z(&self, n: u64, c: TraceLabel) -> Result<u64> {
        let idx = self.check(n, c)?;
        Ok(self
            .classes
            .iter()
            .filter(|(g, _)| g.gcd(&n) == 1)
            .map(|(_, counts)| counts[idx])
            .sum())
    }

    /// P_{q,m,N}(c).
    pub fn p(&self, n: u64, c: TraceLabel) -> Result<u64> {
        let idx = self.check(n, c)?;
        Ok(self.classes[&(self.order / n)][idx])
    }

    pub fn labels(&self) -> impl Iterator<Item = TraceLabel> {
        (0..self.q).map(TraceLabel::from_index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::build_field_ctx;

    const B: u64 = DEFAULT_SINGLE_BUDGET;

    fn ctx(p: u64, s: u32, m: u32) -> FieldCtx {
        build_field_ctx(p, s, m, None).unwrap()
    }

    fn z(ctx: &FieldCtx, n: u64, c: TraceLabel) -> u64 {
        count_z_oracle(ctx, n, c, B).unwrap().value.to_u64().unwrap()
    }

    fn p(ctx: &FieldCtx, n: u64, c: TraceLabel) -> u64 {
        count_p_oracle(ctx, n, c, B).unwrap().value.to_u64().unwrap()
    }

    #[test]
    fn z_examples() {
        let f81 = ctx(3, 1, 4);
        assert_eq!(z(&f81, 80, TraceLabel::Zero), 8);
        assert_eq!(z(&f81, 80, TraceLabel::Pow(0)), 12);
        assert_eq!(z(&f81, 80, TraceLabel::Pow(1)), 12);
        assert_eq!(z(&f81, 1, TraceLabel::Zero), 26);
        for q in [3u64, 5, 7] {
            let f = ctx(q, 1, 2);
            assert_eq!(z(&f, q * q - 1, TraceLabel::Zero), 0);
        }
        assert!(count_z_oracle(&f81, 7, TraceLabel::Zero, B).is_err());
    }

    #[test]
    fn p_examples() {
        let f9 = ctx(3, 1, 2);
        assert_eq!(p(&f9, 4, TraceLabel::Zero), 2);
        assert_eq!(p(&ctx(3, 1, 4), 80, TraceLabel::Zero), 8);
        for f in [ctx(3, 1, 4), ctx(2, 2, 3), ctx(5, 1, 2)] {
            let one = f.rel_trace(&f.one()).unwrap();
            let label = f.subfield_label(&one).unwrap();
            for l in (0..f.q()).map(TraceLabel::from_index) {
                assert_eq!(p(&f, 1, l), u64::from(l == label));
            }
        }
    }

    #[test]
    fn oracle_order_agrees_with_element_order() {
        let f = ctx(3, 1, 4);
        for n in [1u64, 2, 5, 8, 16, 40, 80] {
            let direct = count_m_subset(&f, n, B, |x| f.element_order(x).unwrap() == n).unwrap();
            assert_eq!(direct, count_m_subset(&f, n, B, |_| true).unwrap());
        }
    }

    #[test]
    fn m_subset_examples() {
        let f = ctx(3, 1, 4);
        assert_eq!(count_m_subset(&f, 80, B, |_| true).unwrap(), 32);
        assert_eq!(count_m_subset(&f, 80, B, |_| false).unwrap(), 0);
        let f9 = ctx(3, 1, 2);
        let in_fq = |x: &FieldElem| f9.in_subfield(x);
        assert_eq!(count_m_subset(&f9, 2, B, in_fq).unwrap(), 1);
    }

    #[test]
    fn hamming_weight_examples() {
        let f = ctx(2, 2, 3);
        let beta = f.alpha_power(5);
        let expected = u64::from(!f.rel_trace(&beta).unwrap().is_zero());
        assert_eq!(hamming_weight(&f, f.order(), &beta, B).unwrap(), expected);
        assert_eq!(hamming_weight(&f, 1, &f.one(), B).unwrap(), 64 - 16);
        assert_eq!(hamming_weight(&f, 3, &f.zero(), B).unwrap(), 0);
    }

    #[test]
    fn irreducible_examples() {
        let f2 = ctx(2, 1, 1);
        let (zero, one) = (f2.zero(), f2.one());
        assert_eq!(count_irreducible_trace_oracle(&f2, 3, &one, B).unwrap(), 1);
        assert_eq!(count_irreducible_trace_oracle(&f2, 4, &one, B).unwrap(), 2);
        assert_eq!(count_irreducible_trace_oracle(&f2, 3, &zero, B).unwrap(), 1);
        let both = count_irreducible_trace_oracle(&f2, 1, &zero, B).unwrap()
            + count_irreducible_trace_oracle(&f2, 1, &one, B).unwrap();
        assert_eq!(both, 2);
    }

    #[test]
    fn polynomial_and_element_traces_agree() {
        for (p, s, m) in [(2, 1, 3), (2, 1, 4), (3, 1, 3), (2, 2, 2), (5, 1, 2), (2, 1, 6)] {
            let big = ctx(p, s, m);
            let small = ctx(p, s, 1);
            let mut poly_side = Vec::new();
            let mut elem_side = Vec::new();
            for idx in 0..big.q() {
                let label = TraceLabel::from_index(idx);
                let c_small = small.label_element(label).unwrap();
                let polys = m as u64 * count_irreducible_trace_oracle(&small, m, &c_small, B).unwrap();
                let elems = count_full_degree_trace(&big, label, B).unwrap();
                if s == 1 {
                    // F_p elements are canonical, so match them value by value
                    let exact = count_full_degree_trace(&big, label_for_value(&big, idx), B).unwrap();
                    assert_eq!(polys, exact, "q = {}, m = {m}, c = {label}", big.q());
                }
                if idx == 0 {
                    assert_eq!(polys, elems);
                } else {
                    poly_side.push(polys);
                    elem_side.push(elems);
                }
            }
            // the two models of F_q differ by an automorphism on nonzero labels
            poly_side.sort_unstable();
            elem_side.sort_unstable();
            assert_eq!(poly_side, elem_side, "q = {}, m = {m}", big.q());
        }
    }

    /// For s = 1 the label in `big` of the F_p element whose index in the
    /// one-dimensional model is `idx`.
    fn label_for_value(big: &FieldCtx, idx: u64) -> TraceLabel {
        let small = build_field_ctx(big.p(), 1, 1, None).unwrap();
        let value = small.label_element(TraceLabel::from_index(idx)).unwrap().coeffs()[0];
        let mut coeffs = vec![0; big.degree()];
        coeffs[0] = value;
        big.subfield_label(&big.element(coeffs).unwrap()).unwrap()
    }

    #[test]
    fn characteristic_function_agrees_with_nfree() {
        let f = ctx(3, 1, 4);
        for k in 0..80 {
            let x = f.alpha_power(k);
            for n in [1u64, 2, 4, 5, 10, 40, 80] {
                assert_eq!(nfree_characteristic_check(&f, n, k).unwrap(), f.is_nfree(&x, n).unwrap());
            }
            assert!(nfree_characteristic_check(&f, 80, 1).unwrap());
            assert!(!nfree_characteristic_check(&f, 40, 2).unwrap());
        }
    }

    #[test]
    fn table_matches_single_counts() {
        for f in [ctx(3, 1, 4), ctx(2, 2, 3), ctx(5, 1, 3)] {
            let t = OracleTable::new(&f, DEFAULT_SWEEP_BUDGET).unwrap();
            for d in f.group_order().divisors() {
                let d = d.to_u64().unwrap();
                let mut total_z = 0;
                let mut total_p = 0;
                for c in t.labels() {
                    assert_eq!(t.z(d, c).unwrap(), z(&f, d, c));
                    assert_eq!(t.p(d, c).unwrap(), p(&f, d, c));
                    total_z += t.z(d, c).unwrap();
                    total_p += t.p(d, c).unwrap();
                }
                let phi = crate::numtheory::Factored::from_u64(d).unwrap().euler_phi();
                let phi = phi.to_u64().unwrap();
                assert_eq!(total_z, f.order() / d * phi);
                assert_eq!(total_p, phi);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f = ctx(3, 1, 4);
        assert_eq!(
            count_z_oracle(&f, 80, TraceLabel::Zero, 10).unwrap_err(),
            OracleError::BudgetExceeded { size: 80, budget: 10 }
        );
    }
}
