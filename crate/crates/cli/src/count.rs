//! Single counts by formula, by enumeration, or both.

use std::str::FromStr;

use clap::ValueEnum;
use freetrace_core::ffield::{build_field_ctx, FieldCtx, TraceLabel};
use freetrace_core::formulas::{self, FieldShape, FormulaError};
use freetrace_core::gauss::GaussEngine;
use freetrace_core::numtheory::{is_mersenne_prime, is_prime_u64};
use freetrace_core::oracle::{self, CountReport, Quantity};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::report::Report;
use crate::CliError;

/// `N` on the command line: a decimal divisor or `max` for q^m − 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NSpec {
    Max,
    Value(BigUint),
}

impl FromStr for NSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "max" {
            return Ok(NSpec::Max);
        }
        s.parse().map(NSpec::Value).map_err(|_| format!("N must be a decimal integer or 'max', got {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Formula,
    Oracle,
    Both,
}

#[derive(Debug, Clone)]
pub struct CountConfig {
    pub p: u64,
    pub s: u32,
    pub m: u32,
    pub n: NSpec,
    pub c: String,
    pub quantity: Quantity,
    pub method: MethodChoice,
    pub budget: u64,
    pub hints: Vec<BigUint>,
}

#[derive(Debug, Clone)]
pub struct CountOutcome {
    pub reports: Vec<Report>,
    /// Present when both methods ran.
    pub matched: Option<bool>,
}

/// Reads a trace label: `0`, `pow:i`, or for s = 1 a bare integer t standing
/// for t·1 (which needs the field model to name).
pub fn parse_label(text: &str, p: u64, s: u32, ctx: Option<&FieldCtx>) -> Result<TraceLabel, CliError> {
    let text = text.trim();
    let label = if let Ok(label) = text.parse::<TraceLabel>() {
        label
    } else if let Ok(t) = text.parse::<u64>() {
        if s != 1 {
            return Err(CliError::Usage("bare integer labels need s = 1; use pow:i".into()));
        }
        if t % p == 0 {
            TraceLabel::Zero
        } else {
            let ctx = ctx.ok_or_else(|| {
                CliError::Usage("bare integer labels need an enumerable field; use pow:i".into())
            })?;
            let mut coeffs = vec![0; ctx.degree()];
            coeffs[0] = t % p;
            ctx.subfield_label(&ctx.element(coeffs)?)?
        }
    } else {
        return Err(CliError::Usage(format!("bad label {text:?}; expected 0, pow:i or an integer")));
    };
    let q = BigUint::from(p).pow(s);
    if BigUint::from(label.index()) >= q {
        return Err(CliError::Usage(format!("label {label} is outside F_{q}")));
    }
    Ok(label)
}

fn too_big(order: &BigUint, budget: u64) -> CliError {
    CliError::Budget(format!("enumerating {order} elements exceeds the budget {budget}"))
}

/// A field model, if its group order fits the budget.
fn maybe_ctx(p: u64, s: u32, m: u32, order: &BigUint, budget: u64) -> Result<Option<FieldCtx>, CliError> {
    match order.to_u64() {
        Some(o) if o <= budget => Ok(Some(build_field_ctx(p, s, m, None)?)),
        _ => Ok(None),
    }
}

fn no_closed_form(e: FormulaError, order: &BigUint, budget: u64) -> CliError {
    match e {
        FormulaError::HypothesisNotMet(_) => too_big(order, budget),
        other => other.into(),
    }
}

fn formula_count(
    cfg: &CountConfig,
    shape: &FieldShape,
    n: &BigUint,
    c: TraceLabel,
    ctx: Option<&FieldCtx>,
) -> Result<CountReport, CliError> {
    let order = shape.order();
    let mut engine = match ctx {
        Some(ctx) => Some(GaussEngine::with_budget(ctx, cfg.budget)?),
        None => None,
    };
    let n64 = || n.to_u64().expect("divides an enumerable order");
    let p_big = BigUint::from(cfg.p);
    let mersenne_quartic = cfg.s == 1 && cfg.m == 4 && is_mersenne_prime(&p_big);
    let rad_divides_q = shape.factor_divisor(n)?.primes().all(|l| (shape.norm_index() % l).is_zero());
    let report = match (cfg.quantity, c) {
        (Quantity::Z, TraceLabel::Zero) => match formulas::z_zero_special(shape, n, engine.as_mut()) {
            Err(FormulaError::HypothesisNotMet(_)) if mersenne_quartic && n == order => {
                formulas::z_mersenne_quartic(&p_big, &cfg.hints)?
            }
            r => r.map_err(|e| no_closed_form(e, order, cfg.budget))?,
        },
        (Quantity::Z, c) if rad_divides_q => formulas::z_nonzero_uniform(shape, n, c, engine.as_mut())
            .map_err(|e| no_closed_form(e, order, cfg.budget))?,
        (Quantity::Z, c) => {
            let engine = engine.as_mut().ok_or_else(|| too_big(order, cfg.budget))?;
            formulas::z_general(engine, n64(), c)?
        }
        (Quantity::P, TraceLabel::Zero) if (n % shape.l_q()).is_zero() => {
            match formulas::p_from_relation(shape, n, engine.as_mut()) {
                Err(FormulaError::HypothesisNotMet(_)) if mersenne_quartic && n == &(shape.norm_index() * 2u32) => {
                    formulas::order_2q_mersenne(&p_big, &cfg.hints)?
                }
                r => r.map_err(|e| no_closed_form(e, order, cfg.budget))?,
            }
        }
        (Quantity::P, c) => {
            let engine = engine.as_mut().ok_or_else(|| too_big(order, cfg.budget))?;
            formulas::p_general(engine, n64(), c)?
        }
        (Quantity::I, c) => formulas::carlitz(cfg.p, cfg.s, cfg.m, c)?,
        (Quantity::WH | Quantity::M, _) => {
            return Err(CliError::Usage(format!("{} has no closed form here; use --method oracle", cfg.quantity)))
        }
    };
    Ok(report)
}

fn oracle_count(
    cfg: &CountConfig,
    order: &BigUint,
    n: &BigUint,
    c: TraceLabel,
    ctx: Option<&FieldCtx>,
) -> Result<CountReport, CliError> {
    if cfg.quantity == Quantity::I {
        let q_ctx = ctx.expect("built for I");
        let elem = q_ctx.label_element(c)?;
        let value = oracle::count_irreducible_trace_oracle(q_ctx, cfg.m, &elem, cfg.budget)?;
        return Ok(CountReport {
            p: cfg.p,
            s: cfg.s,
            m: cfg.m,
            n: BigUint::from(1u32),
            c,
            quantity: Quantity::I,
            method: oracle::Method::Oracle,
            value: BigUint::from(value),
        });
    }
    let ctx = ctx.ok_or_else(|| too_big(order, cfg.budget))?;
    let n = n.to_u64().expect("divides an enumerable order");
    Ok(match cfg.quantity {
        Quantity::Z => oracle::count_z_oracle(ctx, n, c, cfg.budget)?,
        Quantity::P => oracle::count_p_oracle(ctx, n, c, cfg.budget)?,
        Quantity::WH => {
            let value = oracle::hamming_weight(ctx, n, &ctx.one(), cfg.budget)?;
            CountReport::oracle(ctx, n, TraceLabel::Zero, Quantity::WH, value)
        }
        _ => return Err(CliError::Usage(format!("{} is not counted by this command", cfg.quantity))),
    })
}

pub fn cmd_count(cfg: &CountConfig) -> Result<CountOutcome, CliError> {
    if !is_prime_u64(cfg.p) || cfg.s == 0 || cfg.m == 0 {
        return Err(CliError::Usage("p must be prime and s, m positive".into()));
    }
    if cfg.quantity == Quantity::M {
        return Err(CliError::Usage("M counts need a subset predicate and are not exposed here".into()));
    }
    let (shape, n, ctx) = if cfg.quantity == Quantity::I {
        let q = BigUint::from(cfg.p).pow(cfg.s);
        let q_ctx = maybe_ctx(cfg.p, cfg.s, 1, &(&q - 1u32), cfg.budget)?;
        if q_ctx.is_none() && cfg.method != MethodChoice::Formula {
            return Err(too_big(&q, cfg.budget));
        }
        (None, BigUint::from(1u32), q_ctx)
    } else {
        let shape = FieldShape::new(cfg.p, cfg.s, cfg.m, &cfg.hints)?;
        let n = match &cfg.n {
            NSpec::Max => shape.order().clone(),
            NSpec::Value(v) => v.clone(),
        };
        if n.is_zero() || !shape.order().is_multiple_of(&n) {
            return Err(CliError::Usage(format!("N = {n} does not divide q^m - 1 = {}", shape.order())));
        }
        let ctx = maybe_ctx(cfg.p, cfg.s, cfg.m, shape.order(), cfg.budget)?;
        (Some(shape), n, ctx)
    };
    let c = parse_label(&cfg.c, cfg.p, cfg.s, ctx.as_ref())?;
    let order = shape.as_ref().map(|s| s.order().clone()).unwrap_or_default();

    let formula = |shape: &Option<FieldShape>| -> Result<CountReport, CliError> {
        match shape {
            Some(shape) => formula_count(cfg, shape, &n, c, ctx.as_ref()),
            None => Ok(formulas::carlitz(cfg.p, cfg.s, cfg.m, c)?),
        }
    };
    let mut reports = Vec::new();
    let matched = match cfg.method {
        MethodChoice::Formula => {
            reports.push(formula(&shape)?);
            None
        }
        MethodChoice::Oracle => {
            reports.push(oracle_count(cfg, &order, &n, c, ctx.as_ref())?);
            None
        }
        MethodChoice::Both => {
            let f = formula(&shape)?;
            let o = oracle_count(cfg, &order, &n, c, ctx.as_ref())?;
            let same = f.value == o.value;
            reports.push(f);
            reports.push(o);
            Some(same)
        }
    };
    let reports = reports
        .iter()
        .map(|r| Report { matched, ..Report::from(r) })
        .collect();
    Ok(CountOutcome { reports, matched })
}
