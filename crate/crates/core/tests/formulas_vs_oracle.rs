use freetrace_core::ffield::{build_field_ctx, TraceLabel};
use freetrace_core::formulas::{self, FieldShape};
use freetrace_core::gauss::GaussEngine;
use freetrace_core::oracle::{OracleTable, DEFAULT_SWEEP_BUDGET};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use proptest::prelude::*;

const FIELDS: [(u64, u32, u32); 14] = [
    (2, 1, 2),
    (2, 1, 4),
    (2, 1, 6),
    (2, 2, 3),
    (2, 3, 2),
    (3, 1, 2),
    (3, 1, 3),
    (3, 1, 4),
    (3, 2, 2),
    (5, 1, 2),
    (5, 1, 3),
    (7, 1, 2),
    (7, 1, 3),
    (13, 1, 2),
];

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

#[test]
fn every_count_matches_enumeration_on_small_fields() {
    for (p, s, m) in FIELDS {
        let ctx = build_field_ctx(p, s, m, None).unwrap();
        let table = OracleTable::new(&ctx, DEFAULT_SWEEP_BUDGET).unwrap();
        let mut engine = GaussEngine::new(&ctx).unwrap();
        let shape = FieldShape::from_ctx(&ctx);
        for n in divisors(ctx.order()) {
            for c in table.labels() {
                let z = formulas::z_general(&mut engine, n, c).unwrap().value;
                let pv = formulas::p_general(&mut engine, n, c).unwrap().value;
                assert_eq!(z, BigUint::from(table.z(n, c).unwrap()), "Z q={} m={m} N={n} c={c}", ctx.q());
                assert_eq!(pv, BigUint::from(table.p(n, c).unwrap()), "P q={} m={m} N={n} c={c}", ctx.q());
            }
            let special = formulas::z_zero_special(&shape, &BigUint::from(n), Some(&mut engine)).unwrap();
            assert_eq!(special.value, BigUint::from(table.z(n, TraceLabel::Zero).unwrap()));
        }
    }
}

#[test]
fn primitive_zero_trace_matches_enumeration() {
    for (p, s, m) in FIELDS {
        let ctx = build_field_ctx(p, s, m, None).unwrap();
        let table = OracleTable::new(&ctx, DEFAULT_SWEEP_BUDGET).unwrap();
        let mut engine = GaussEngine::new(&ctx).unwrap();
        let shape = FieldShape::from_ctx(&ctx);
        let r = formulas::z_primitive_zero(&shape, Some(&mut engine)).unwrap();
        assert_eq!(r.value.to_u64().unwrap(), table.z(ctx.order(), TraceLabel::Zero).unwrap(), "q={} m={m}", ctx.q());
    }
}

#[test]
fn carlitz_totals_split_over_traces() {
    // I_{q,m} = I(0) + (q − 1) I(c ≠ 0)
    for (p, s) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (3, 2), (7, 1)] {
        let q = p.pow(s);
        for m in 1..=6u32 {
            let zero = formulas::carlitz(p, s, m, TraceLabel::Zero).unwrap().value;
            let one = formulas::carlitz(p, s, m, TraceLabel::Pow(0)).unwrap().value;
            let total = zero + one * (q - 1);
            let mut necklace = 0i64;
            for d in 1..=m {
                if m % d == 0 {
                    let mu = freetrace_core::numtheory::Factored::from_u64(d as u64).unwrap().mobius();
                    necklace += mu as i64 * (q as i64).pow(m / d);
                }
            }
            assert_eq!(total, BigUint::from((necklace / m as i64) as u64), "q={q} m={m}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn z_counts_sum_to_the_n_free_total(idx in 0usize..FIELDS.len(), pick in 0usize..64) {
        let (p, s, m) = FIELDS[idx];
        let ctx = build_field_ctx(p, s, m, None).unwrap();
        let ds = divisors(ctx.order());
        let n = ds[pick % ds.len()];
        let mut engine = GaussEngine::new(&ctx).unwrap();
        let mut total = BigUint::from(0u32);
        for i in 0..ctx.q() {
            total += formulas::z_general(&mut engine, n, TraceLabel::from_index(i)).unwrap().value;
        }
        let phi = ctx.group_order().factor_divisor(&BigUint::from(n)).unwrap().euler_phi();
        prop_assert_eq!(total, BigUint::from(ctx.order() / n) * phi);
    }

    #[test]
    fn uniform_counts_ignore_the_nonzero_label(idx in 0usize..FIELDS.len(), pick in 0usize..64, c in 0u64..12) {
        let (p, s, m) = FIELDS[idx];
        let shape = FieldShape::new(p, s, m, &[]).unwrap();
        let q = p.pow(s);
        let big_q = shape.norm_index().to_u64().unwrap();
        let ds: Vec<u64> = divisors(shape.order().to_u64().unwrap())
            .into_iter()
            .filter(|n| (1..=*n).filter(|l| n % l == 0 && *l > 1 && (2..*l).all(|k| l % k != 0)).all(|l| big_q % l == 0))
            .collect();
        let n = BigUint::from(ds[pick % ds.len()]);
        let a = formulas::z_nonzero_uniform(&shape, &n, TraceLabel::Pow(0), None);
        let b = formulas::z_nonzero_uniform(&shape, &n, TraceLabel::Pow(c % (q - 1)), None);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.value, b.value),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
        }
    }
}
