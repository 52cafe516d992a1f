//! Random formulas and traces for property tests.

use proptest::prelude::*;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use crate::formula::{CmpOp, Expr, Formula, Interval, Predicate};
use crate::trace::{Day, Trace, TraceSet};

pub const CHANNELS: [&str; 2] = ["x", "y"];

fn arb_cmp() -> impl Strategy<Value = CmpOp> {
    prop_oneof![
        Just(CmpOp::Lt),
        Just(CmpOp::Le),
        Just(CmpOp::Gt),
        Just(CmpOp::Ge),
        Just(CmpOp::Eq),
        Just(CmpOp::Ne),
    ]
}

fn arb_const() -> impl Strategy<Value = f64> {
    prop_oneof![
        (-3i32..=3).prop_map(f64::from),
        (-30i32..=30).prop_map(|v| f64::from(v) / 10.0),
    ]
}

fn arb_channel() -> impl Strategy<Value = String> {
    prop::sample::select(CHANNELS.to_vec()).prop_map(str::to_owned)
}

/// Small arithmetic terms over [`CHANNELS`].
pub fn arb_term() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        3 => arb_channel().prop_map(Expr::Var),
        1 => arb_const().prop_map(Expr::Const),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Abs(Box::new(e))),
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
        ]
    })
}

pub fn arb_predicate() -> impl Strategy<Value = Predicate> {
    (arb_term(), arb_cmp(), arb_const(), prop::bool::ANY, 0u8..4).prop_map(
        |(lhs, op, rhs, var_rhs, tol)| {
            let rhs = if var_rhs {
                Expr::var("y")
            } else {
                Expr::Const(rhs)
            };
            let p = Predicate::new(lhs, op, rhs);
            match tol {
                0 => p.with_tolerance(0.5).unwrap(),
                _ => p,
            }
        },
    )
}

/// Intervals with bounds in `[0, 5]` or unbounded above.
pub fn arb_interval() -> impl Strategy<Value = Interval> {
    (0u8..=10, 1u8..=10, prop::bool::weighted(0.25)).prop_map(|(lo, width, unbounded)| {
        let lo = f64::from(lo) / 2.0;
        if unbounded {
            Interval::from(lo).unwrap()
        } else {
            let hi = (lo + f64::from(width) / 2.0).min(5.0);
            Interval::new(lo, hi).unwrap_or_else(|_| Interval::new(lo, lo + 0.5).unwrap())
        }
    })
}

/// Formulas of nesting depth at most `depth` (leaves count as depth 1).
pub fn arb_formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::True),
        1 => Just(Formula::False),
        6 => arb_predicate().prop_map(Formula::Atom),
    ];
    leaf.prop_recursive(depth.saturating_sub(1), 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
            (arb_interval(), inner.clone(), inner.clone()).prop_map(|(i, a, b)| a.until(i, b)),
            (arb_interval(), inner.clone()).prop_map(|(i, a)| Formula::eventually(i, a)),
            (arb_interval(), inner).prop_map(|(i, a)| Formula::globally(i, a)),
        ]
    })
}

/// Two channels `x` and `y` over a shared, possibly gappy grid of at most
/// `max_len` samples; `y` sometimes lacks the last sample so the evaluation
/// domain can be shorter than the `x` grid.
pub fn arb_traceset(max_len: usize) -> impl Strategy<Value = TraceSet> {
    (1..=max_len)
        .prop_flat_map(|len| {
            (
                prop::collection::vec(1u64..=2, len),
                prop::collection::vec(arb_const(), len),
                prop::collection::vec(arb_const(), len),
                prop::bool::weighted(0.2),
            )
        })
        .prop_map(|(gaps, xs, ys, trim)| {
            let mut times: Vec<Day> = Vec::with_capacity(gaps.len());
            let mut t = 0;
            for gap in &gaps {
                times.push(t);
                t += gap;
            }
            let x = Trace::new("x", times.clone(), xs).unwrap();
            let keep = if trim && times.len() > 1 {
                times.len() - 1
            } else {
                times.len()
            };
            let y = Trace::new("y", times[..keep].to_vec(), ys[..keep].to_vec()).unwrap();
            TraceSet::new([x, y]).unwrap()
        })
}

/// Draws `count` values from `strategy` with a deterministic RNG.
pub fn sample<S: Strategy>(strategy: &S, seed: u64, count: usize) -> Vec<S::Value> {
    let mut seed_bytes = [0u8; 32];
    seed_bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let mut runner = TestRunner::new_with_rng(
        Config::default(),
        TestRng::from_seed(RngAlgorithm::ChaCha, &seed_bytes),
    );
    (0..count)
        .map(|_| {
            strategy
                .new_tree(&mut runner)
                .expect("strategy rejected too many values")
                .current()
        })
        .collect()
}
