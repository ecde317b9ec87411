//! Formula-versus-enumeration sweeps and the identity suites behind them.

use std::collections::BTreeMap;

use freetrace_core::cyclotomic::CycInt;
use freetrace_core::ffield::{build_field_ctx, FieldCtx, TraceLabel};
use freetrace_core::formulas::{self, FieldShape};
use freetrace_core::gauss::{self, GaussEngine, PeriodFormula};
use freetrace_core::numtheory::{factorize, mersenne_quartic_criterion, radical_equality, Factored};
use freetrace_core::oracle::{self, OracleTable, DEFAULT_SWEEP_BUDGET};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::prime_power;

pub const DEFAULT_QS: [u64; 9] = [2, 3, 4, 5, 7, 8, 9, 11, 13];

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Fields F_{q^m} with q^m ≤ cap are swept.
    pub cap: u64,
    pub qs: Vec<u64>,
    /// Irreducible counts are enumerated for q^{m+1} ≤ carlitz_cap.
    pub carlitz_cap: u64,
    /// Period identities are checked for q^m ≤ period_cap.
    pub period_cap: u64,
    pub classifiers: bool,
    pub budget: u64,
    /// Corrupts one formula value so the harness can be seen to fail.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            cap: 10_000,
            qs: DEFAULT_QS.to_vec(),
            carlitz_cap: 30_000,
            period_cap: 10_000,
            classifiers: true,
            budget: DEFAULT_SWEEP_BUDGET,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub check: String,
    pub witness: String,
}

/// Passed-check counters, branch usage and failures, in a fixed order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub passed: BTreeMap<String, u64>,
    pub branches: BTreeMap<String, u64>,
    pub failures: Vec<Failure>,
    pub fields: u64,
}

impl Tally {
    fn check(&mut self, name: &str, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            *self.passed.entry(name.to_string()).or_default() += 1;
        } else {
            self.failures.push(Failure { check: name.to_string(), witness: witness() });
        }
    }

    fn fail(&mut self, name: &str, witness: String) {
        self.failures.push(Failure { check: name.to_string(), witness });
    }

    fn merge(&mut self, other: Tally) {
        for (k, v) in other.passed {
            *self.passed.entry(k).or_default() += v;
        }
        for (k, v) in other.branches {
            *self.branches.entry(k).or_default() += v;
        }
        self.failures.extend(other.failures);
        self.fields += other.fields;
    }

    pub fn total_passed(&self) -> u64 {
        self.passed.values().sum()
    }

    pub fn passed(&self, name: &str) -> u64 {
        self.passed.get(name).copied().unwrap_or(0)
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// (p, s, m) for every q in `qs` and m ≥ 2 with q^m ≤ cap, ordered by (q, m).
pub fn field_domain(qs: &[u64], cap: u64) -> Vec<(u64, u32, u32)> {
    let mut qs: Vec<u64> = qs.to_vec();
    qs.sort_unstable();
    qs.dedup();
    let mut out = Vec::new();
    for q in qs {
        let Some((p, s)) = prime_power(q) else { continue };
        let mut m = 2u32;
        while q.checked_pow(m).is_some_and(|size| size <= cap) {
            out.push((p, s, m));
            m += 1;
        }
    }
    out
}

fn int(n: u64) -> BigInt {
    BigInt::from(n)
}

fn as_int(x: &CycInt) -> Option<BigInt> {
    x.as_integer()
}

fn radical_divides(nf: &Factored, m: u64) -> bool {
    nf.primes().all(|l| m % l.to_u64().expect("u64 divisor") == 0)
}

/// Every formula against the oracle table of one field.
pub fn check_field(p: u64, s: u32, m: u32, cfg: &VerifyConfig, fault: bool) -> Tally {
    let mut t = Tally { fields: 1, ..Tally::default() };
    let q = p.pow(s);
    let at = |rest: String| format!("q={q} m={m} {rest}");
    let ctx = match build_field_ctx(p, s, m, None) {
        Ok(ctx) => ctx,
        Err(e) => {
            t.fail("field", at(e.to_string()));
            return t;
        }
    };
    let table = match OracleTable::new(&ctx, cfg.budget) {
        Ok(table) => table,
        Err(e) => {
            t.fail("oracle", at(e.to_string()));
            return t;
        }
    };
    let mut engine = match GaussEngine::with_budget(&ctx, cfg.budget) {
        Ok(engine) => engine,
        Err(e) => {
            t.fail("periods", at(e.to_string()));
            return t;
        }
    };
    let shape = FieldShape::from_ctx(&ctx);
    let order = ctx.order();
    let big_q = ctx.norm_index();
    let l_q = shape.l_q().to_u64().expect("divides the order");
    let labels: Vec<TraceLabel> = table.labels().collect();
    let divisors: Vec<u64> = ctx.group_order().divisors().iter().map(|d| d.to_u64().unwrap()).collect();

    for &n in &divisors {
        let nb = BigUint::from(n);
        let nf = ctx.group_order().factor_divisor(&nb).expect("divisor");
        let phi = nf.euler_phi().to_u64().unwrap();

        // enumeration totals
        let z_total: u64 = labels.iter().map(|&c| table.z(n, c).unwrap()).sum();
        let p_total: u64 = labels.iter().map(|&c| table.p(n, c).unwrap()).sum();
        t.check("oracle-totals", z_total == order / n * phi && p_total == phi, || {
            at(format!("N={n} sumZ={z_total} sumP={p_total}"))
        });

        for &c in &labels {
            let z_oracle = table.z(n, c).unwrap();
            match formulas::z_general(&mut engine, n, c) {
                Ok(r) => {
                    let mut v = r.value.to_u64().unwrap();
                    if fault && n == order && c == TraceLabel::Zero {
                        v += 1;
                    }
                    t.check("z-general", v == z_oracle, || {
                        at(format!("N={n} c={c} formula={v} oracle={z_oracle}"))
                    });
                }
                Err(e) => t.fail("z-general", at(format!("N={n} c={c} error={e}"))),
            }
            let p_oracle = table.p(n, c).unwrap();
            match formulas::p_general(&mut engine, n, c) {
                Ok(r) => t.check("p-general", r.value == BigUint::from(p_oracle), || {
                    at(format!("N={n} c={c} formula={} oracle={p_oracle}", r.value))
                }),
                Err(e) => t.fail("p-general", at(format!("N={n} c={c} error={e}"))),
            }
        }

        let z0 = table.z(n, TraceLabel::Zero).unwrap();
        let p0 = table.p(n, TraceLabel::Zero).unwrap();
        match formulas::z_zero(&mut engine, n) {
            Ok(r) => t.check("z-zero", r.value == BigUint::from(z0), || {
                at(format!("N={n} formula={} oracle={z0}", r.value))
            }),
            Err(e) => t.fail("z-zero", at(format!("N={n} error={e}"))),
        }
        match formulas::z_zero_special(&shape, &nb, Some(&mut engine)) {
            Ok(r) => {
                let tag = r.method.branch().expect("formula").to_string();
                *t.branches.entry(tag.clone()).or_default() += 1;
                t.check("z-zero-special", r.value == BigUint::from(z0), || {
                    at(format!("N={n} branch={tag} formula={} oracle={z0}", r.value))
                });
            }
            Err(e) => t.fail("z-zero-special", at(format!("N={n} error={e}"))),
        }

        if radical_divides(&nf, big_q) {
            let nonzero: Vec<u64> = labels[1..].iter().map(|&c| table.z(n, c).unwrap()).collect();
            let equal = nonzero.windows(2).all(|w| w[0] == w[1]);
            match formulas::z_nonzero_uniform(&shape, &nb, TraceLabel::Pow(0), Some(&mut engine)) {
                Ok(r) => t.check("uniform", equal && r.value == BigUint::from(nonzero[0]), || {
                    at(format!("N={n} formula={} oracle={nonzero:?}", r.value))
                }),
                Err(e) => t.fail("uniform", at(format!("N={n} error={e}"))),
            }
        }

        if n % l_q == 0 {
            let lhs = order as u128 * p0 as u128;
            let rhs = n as u128 * z0 as u128;
            t.check("relation", lhs == rhs, || at(format!("N={n} P(0)={p0} Z(0)={z0}")));
            match formulas::p_from_relation(&shape, &nb, Some(&mut engine)) {
                Ok(r) => t.check("relation-formula", r.value == BigUint::from(p0), || {
                    at(format!("N={n} formula={} oracle={p0}", r.value))
                }),
                Err(e) => t.fail("relation-formula", at(format!("N={n} error={e}"))),
            }
            match formulas::exists_order_trace_zero(&shape, &nb) {
                Ok(exists) => t.check("existence", exists == (p0 > 0), || {
                    at(format!("N={n} predicted={exists} oracle P(0)={p0}"))
                }),
                Err(e) => t.fail("existence", at(format!("N={n} error={e}"))),
            }
        }
    }

    if ctx.order() + 1 <= cfg.period_cap {
        check_periods(&ctx, &shape, &mut engine, &divisors, &mut t);
        check_order_identities(&ctx, &table, &divisors, cfg, &mut t);
    }
    t
}

fn check_periods(ctx: &FieldCtx, shape: &FieldShape, engine: &mut GaussEngine, divisors: &[u64], t: &mut Tally) {
    let (p, s, m, q) = (ctx.p(), ctx.s(), ctx.m(), ctx.q());
    let (order, big_q) = (ctx.order(), ctx.norm_index());
    let at = |rest: String| format!("q={q} m={m} {rest}");
    let minus_one = CycInt::from_integer(p, -1);
    for &d in divisors {
        let table = engine.periods(d).expect("divisor");
        t.check("period-row-sum", table.row_sum() == minus_one, || at(format!("d={d}")));
        if big_q % d == 0 {
            t.check("period-integral", table.is_integral(), || at(format!("d={d}")));
        }
    }
    for &n in divisors {
        let nf = ctx.group_order().factor_divisor(&BigUint::from(n)).unwrap();
        let rad = nf.radical().to_u64().unwrap();
        let phi = nf.euler_phi().to_u64().unwrap();
        let g = n.gcd(&big_q);
        let kf = shape.k_q(&nf);
        let (kv, kphi) = (kf.value().to_u64().unwrap(), kf.euler_phi().to_u64().unwrap());
        let d0 = engine.delta(n, 0).unwrap();

        for k in [0, 1] {
            let dk = engine.delta(n, k).unwrap();
            t.check("delta-radical", dk == engine.delta(rad, k).unwrap(), || at(format!("N={n} k={k}")));
            let direct = engine.delta_by_coprimality(n, k).unwrap();
            t.check("delta-coprime-form", dk == direct, || at(format!("N={n} k={k}")));

            // N·Σ_i η_{Qi+k}^{(N)} = (q−1)·g·η_k^{(g)}
            let mut lhs = CycInt::zero(p);
            for i in 0..q - 1 {
                lhs.add_assign(&engine.period(n, big_q * i + k).unwrap()).unwrap();
            }
            let rhs = engine.period(g, k).unwrap().scale(&int((q - 1) * g));
            t.check("ding-yang", lhs.scale(&int(n)) == rhs, || at(format!("N={n} k={k}")));

            // K·f_k(N, 0) = (q−1)·φ(K)·Δ_k(g)
            let f = engine.f_twisted(n, TraceLabel::Zero, k).unwrap();
            let rhs = engine.delta(g, k).unwrap().scale(&int((q - 1) * kphi));
            t.check("delta-twisted-sum", f.scale(&int(kv)) == rhs, || at(format!("N={n} k={k}")));
        }

        let shifts_agree = (0..order / n).all(|k| engine.delta(n, n * k).unwrap() == d0);
        t.check("delta-shift", shifts_agree, || at(format!("N={n}")));
        let mut sum = CycInt::zero(p);
        for i in 0..n {
            sum.add_assign(&engine.delta(n, i).unwrap()).unwrap();
        }
        t.check("delta-sum-phi", sum == CycInt::from_integer(p, -(phi as i64)), || at(format!("N={n}")));

        let eta0 = engine.period(n, 0).unwrap();
        for formula in [
            PeriodFormula::Trivial,
            PeriodFormula::Quadratic,
            PeriodFormula::Cubic,
            PeriodFormula::SemiPrimitive,
            PeriodFormula::NormIndex,
        ] {
            if let Ok(v) = gauss::period_closed_form(p, s, m, &nf, formula) {
                t.check("closed-form-period", as_int(&eta0) == Some(v.clone()), || {
                    at(format!("d={n} formula={formula:?} closed={v} periods={eta0}"))
                });
            }
        }
        if let Ok(semi) = gauss::delta0_semiprimitive(p, s, m, &nf) {
            t.check("semi-delta", as_int(&d0) == Some(semi.value.clone()), || {
                at(format!("N={n} closed={} periods={d0}", semi.value))
            });
        }
    }
}

fn check_order_identities(ctx: &FieldCtx, table: &OracleTable, divisors: &[u64], cfg: &VerifyConfig, t: &mut Tally) {
    let (q, m, order) = (ctx.q(), ctx.m(), ctx.order());
    let at = |rest: String| format!("q={q} m={m} {rest}");
    let weights: BTreeMap<u64, u64> = divisors
        .iter()
        .map(|&d| (d, oracle::hamming_weight(ctx, d, &ctx.one(), cfg.budget).unwrap()))
        .collect();
    for &n in divisors {
        let nf = ctx.group_order().factor_divisor(&BigUint::from(n)).unwrap();
        let mu_divs: Vec<(u64, i64)> =
            nf.squarefree_divisors().iter().map(|(d, mu)| (d.to_u64().unwrap(), *mu as i64)).collect();
        for c in table.labels() {
            // Z(c) = Σ_{d|N} μ(d) Σ_{b | (q^m−1)/d} P_b(c)
            let mut acc = 0i64;
            for &(d, mu) in &mu_divs {
                let inner: u64 =
                    divisors.iter().filter(|&&b| (order / d) % b == 0).map(|&b| table.p(b, c).unwrap()).sum();
                acc += mu * inner as i64;
            }
            let z = table.z(n, c).unwrap() as i64;
            t.check("order-identity", acc == z, || at(format!("N={n} c={c} sum={acc} Z={z}")));
        }
        // Z(0) = (q^m−1)/N·φ(N) − Σ_{d|N} μ(d) W_H(d, 1)
        let phi = nf.euler_phi().to_u64().unwrap() as i64;
        let wsum: i64 = mu_divs.iter().map(|&(d, mu)| mu * weights[&d] as i64).sum();
        let z0 = table.z(n, TraceLabel::Zero).unwrap() as i64;
        t.check("weight-identity", (order / n) as i64 * phi - wsum == z0, || at(format!("N={n}")));
    }
    // the same counts under another primitive element
    let k = (2..order).find(|k| k.gcd(&order) == 1);
    if let Some(k) = k {
        let other = ctx.with_alpha_power(k).ok().and_then(|c2| OracleTable::new(&c2, cfg.budget).ok());
        let same = match other {
            Some(other) => divisors.iter().all(|&n| {
                let mut a: Vec<(u64, u64)> = table.labels().map(|c| (table.z(n, c).unwrap(), table.p(n, c).unwrap())).collect();
                let mut b: Vec<(u64, u64)> = other.labels().map(|c| (other.z(n, c).unwrap(), other.p(n, c).unwrap())).collect();
                // labels are tied to α, so only the zero fiber is canonical
                let zero_same = a[0] == b[0];
                a.sort_unstable();
                b.sort_unstable();
                zero_same && a == b
            }),
            None => false,
        };
        t.check("alpha-invariance", same, || at(format!("alpha^{k}")));
    }
}

/// Irreducible counts by enumeration against the closed form, for one
/// F_q and degree m.
pub fn check_carlitz(p: u64, s: u32, m: u32, cfg: &VerifyConfig) -> Tally {
    let mut t = Tally::default();
    let q = p.pow(s);
    let at = |rest: String| format!("q={q} m={m} {rest}");
    let q_ctx = match build_field_ctx(p, s, 1, None) {
        Ok(ctx) => ctx,
        Err(e) => {
            t.fail("carlitz", at(e.to_string()));
            return t;
        }
    };
    let mut nonzero = Vec::new();
    for idx in 0..q {
        let c = TraceLabel::from_index(idx);
        let elem = q_ctx.label_element(c).unwrap();
        let counted = match oracle::count_irreducible_trace_oracle(&q_ctx, m, &elem, cfg.budget) {
            Ok(v) => v,
            Err(e) => {
                t.fail("carlitz", at(format!("c={c} error={e}")));
                continue;
            }
        };
        let closed = formulas::carlitz(p, s, m, c).map(|r| r.value);
        t.check("carlitz", closed.as_ref().ok() == Some(&BigUint::from(counted)), || {
            at(format!("c={c} formula={closed:?} oracle={counted}"))
        });
        if idx > 0 {
            nonzero.push(counted);
        }
    }
    t.check("carlitz-uniform", nonzero.windows(2).all(|w| w[0] == w[1]), || at(format!("{nonzero:?}")));
    t
}

/// (p, s, m) for Carlitz checks: m ≥ 1 with q^{m+1} ≤ cap.
pub fn carlitz_domain(qs: &[u64], cap: u64) -> Vec<(u64, u32, u32)> {
    let mut qs: Vec<u64> = qs.to_vec();
    qs.sort_unstable();
    qs.dedup();
    let mut out = Vec::new();
    for q in qs {
        let Some((p, s)) = prime_power(q) else { continue };
        let mut m = 1u32;
        while q.checked_pow(m + 1).is_some_and(|size| size <= cap) {
            out.push((p, s, m));
            m += 1;
        }
    }
    out
}

fn rad(n: &BigUint) -> BigUint {
    factorize(n, &[]).expect("small").radical()
}

/// The semi-primitivity and radical-equality classifiers against direct
/// search: all p^s ≤ 64 with 2 ≤ m ≤ 8, and all b ≤ 9 with 2 ≤ m ≤ 8.
pub fn check_classifiers() -> Tally {
    let mut t = Tally::default();
    for q in 2..=64u64 {
        let Some((p, s)) = prime_power(q) else { continue };
        for m in 2..=8u32 {
            let qb = BigUint::from(q);
            let big_q: BigUint = (qb.pow(m) - 1u32) / (&qb - 1u32);
            let r = rad(&big_q);
            let minus_one = (&r - 1u32) % &r;
            let pb = BigUint::from(p);
            // the order of p modulo Rad(Q) divides sm, so j ≤ sm suffices
            let brute = (1..=(s * m) as u64)
                .find(|&j| pb.modpow(&BigUint::from(j), &r) == minus_one);
            match mersenne_quartic_criterion(p, s, m) {
                Ok(kind) => {
                    let witness_ok = kind
                        .witness()
                        .is_none_or(|j| pb.modpow(&BigUint::from(j), &r) == minus_one);
                    t.check("mersenne-criterion", brute.is_some() == kind.witness().is_some() && witness_ok, || {
                        format!("q={q} m={m} brute={brute:?} criterion={kind:?}")
                    });
                }
                Err(e) => t.fail("mersenne-criterion", format!("q={q} m={m} error={e}")),
            }
        }
    }
    for b in 2..=9u64 {
        for m in 2..=8u32 {
            let bb = BigUint::from(b);
            let full: BigUint = bb.pow(m) - 1u32;
            let big_q = &full / (&bb - 1u32);
            let direct = rad(&full) == rad(&big_q);
            let claimed = radical_equality(&bb, m as u64);
            t.check("radical-equality", claimed.as_ref().ok() == Some(&direct), || {
                format!("b={b} m={m} direct={direct} claimed={claimed:?}")
            });
        }
    }
    t
}

#[derive(Debug, Clone, Copy)]
enum Unit {
    Field(u64, u32, u32, bool),
    Carlitz(u64, u32, u32),
    Classifiers,
}

/// Runs every suite, in parallel over fields, and merges the results in a
/// fixed order.
pub fn run_verify(cfg: &VerifyConfig) -> Tally {
    let mut units: Vec<Unit> = field_domain(&cfg.qs, cfg.cap)
        .into_iter()
        .enumerate()
        .map(|(i, (p, s, m))| Unit::Field(p, s, m, cfg.inject_fault && i == 0))
        .collect();
    units.extend(carlitz_domain(&cfg.qs, cfg.carlitz_cap).into_iter().map(|(p, s, m)| Unit::Carlitz(p, s, m)));
    if cfg.classifiers {
        units.push(Unit::Classifiers);
    }
    let parts: Vec<Tally> = units
        .par_iter()
        .map(|unit| match *unit {
            Unit::Field(p, s, m, fault) => check_field(p, s, m, cfg, fault),
            Unit::Carlitz(p, s, m) => check_carlitz(p, s, m, cfg),
            Unit::Classifiers => check_classifiers(),
        })
        .collect();
    let mut total = Tally::default();
    for part in parts {
        total.merge(part);
    }
    total
}

/// One output line of `verify`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub kind: String,
    pub name: String,
    pub count: u64,
    pub witness: String,
}

pub fn summary_rows(t: &Tally) -> Vec<VerifyRow> {
    let mut rows: Vec<VerifyRow> = t
        .passed
        .iter()
        .map(|(name, &count)| VerifyRow { kind: "passed".into(), name: name.clone(), count, witness: String::new() })
        .collect();
    rows.extend(t.branches.iter().map(|(name, &count)| VerifyRow {
        kind: "branch".into(),
        name: name.clone(),
        count,
        witness: String::new(),
    }));
    rows.push(VerifyRow { kind: "total".into(), name: "fields".into(), count: t.fields, witness: String::new() });
    rows.push(VerifyRow { kind: "total".into(), name: "passed".into(), count: t.total_passed(), witness: String::new() });
    rows.extend(t.failures.iter().map(|f| VerifyRow {
        kind: "failure".into(),
        name: f.check.clone(),
        count: 1,
        witness: f.witness.clone(),
    }));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_shape() {
        let d = field_domain(&[2, 4, 6], 64);
        assert_eq!(d, [(2, 1, 2), (2, 1, 3), (2, 1, 4), (2, 1, 5), (2, 1, 6), (2, 2, 2), (2, 2, 3)]);
        assert_eq!(carlitz_domain(&[3], 81), [(3, 1, 1), (3, 1, 2), (3, 1, 3)]);
    }

    #[test]
    fn small_field_passes() {
        let cfg = VerifyConfig::default();
        let t = check_field(3, 1, 4, &cfg, false);
        assert!(t.ok(), "{:?}", t.failures);
        assert!(t.passed("z-general") >= 10 * 3);
        assert!(t.passed("ding-yang") > 0);
    }

    #[test]
    fn fault_is_reported() {
        let t = check_field(2, 1, 3, &VerifyConfig::default(), true);
        assert_eq!(t.failures.len(), 1);
        assert!(t.failures[0].witness.starts_with("q=2 m=3 N=7 c=0"), "{:?}", t.failures);
    }

    #[test]
    fn classifiers_agree() {
        let t = check_classifiers();
        assert!(t.ok(), "{:?}", t.failures);
    }
}
