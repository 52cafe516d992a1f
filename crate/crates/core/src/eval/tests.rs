use proptest::prelude::*;

use super::*;
use crate::formula::{desugar, CmpOp, Expr, Formula, Interval};
use crate::testgen::{arb_formula, arb_traceset};
use crate::trace::Trace;

fn single(name: &str, values: &[f64]) -> TraceSet {
    TraceSet::new([Trace::daily(name, values.to_vec()).unwrap()]).unwrap()
}

fn x(op: CmpOp, c: f64) -> Formula {
    Formula::atom(Expr::var("x"), op, c)
}

fn iv(lo: f64, hi: f64) -> Interval {
    Interval::new(lo, hi).unwrap()
}

fn assert_agree(f: &Formula, traces: &TraceSet) {
    let fast = eval_fast(f, traces).unwrap();
    for (&t, &value) in fast.times.iter().zip(&fast.per_time) {
        assert_eq!(
            eval_naive(f, traces, t).unwrap(),
            value,
            "t = {t}, f = {f:?}"
        );
    }
}

#[test]
fn expression_examples() {
    let traces = single("x", &[-3.0, 12.0]);
    let abs = Expr::var("x").abs();
    assert_eq!(eval_expr(&abs, &traces, 0).unwrap(), 3.0);
    let shifted = Expr::var("x").minus(Expr::Const(10.0));
    assert_eq!(eval_expr(&shifted, &traces, 1).unwrap(), 2.0);
    let zero = Expr::Mul(Box::new(Expr::Const(0.0)), Box::new(Expr::var("x")));
    assert_eq!(eval_expr(&zero, &traces, 0).unwrap(), 0.0);
    assert_eq!(eval_expr(&zero, &traces, 1).unwrap(), 0.0);
}

#[test]
fn expression_errors() {
    let traces = single("x", &[1.0]);
    assert_eq!(
        eval_expr(&Expr::var("z"), &traces, 0),
        Err(EvalError::UnknownChannel("z".into()))
    );
    assert_eq!(
        eval_expr(&Expr::var("x"), &traces, 5),
        Err(EvalError::NotASampleTime(5))
    );
    let f = x(CmpOp::Lt, 0.0);
    assert_eq!(
        eval_naive(&f, &traces, 5),
        Err(EvalError::NotASampleTime(5))
    );
    let g = Formula::atom(Expr::var("z"), CmpOp::Lt, 0.0);
    assert_eq!(
        eval_fast(&g, &traces),
        Err(EvalError::UnknownChannel("z".into()))
    );
}

#[test]
fn globally_true_always_holds() {
    let traces = single("x", &[4.0, -2.0, 9.0]);
    let f = Formula::globally(Interval::unbounded(), Formula::True);
    for t in 0..3 {
        assert!(eval_naive(&f, &traces, t).unwrap());
    }
    assert_eq!(eval_fast(&f, &traces).unwrap().per_time, vec![true; 3]);
}

#[test]
fn until_with_inclusive_witness() {
    let traces = single("x", &[5.0, 3.0, 1.0]);
    let holds = x(CmpOp::Gt, 0.0).until(iv(0.0, 2.0), x(CmpOp::Lt, 2.0));
    assert!(eval_naive(&holds, &traces, 0).unwrap());
    assert!(eval_fast(&holds, &traces).unwrap().satisfied);

    // x(2) = 1 breaks x > 2 at the witness itself.
    let fails = x(CmpOp::Gt, 2.0).until(iv(0.0, 2.0), x(CmpOp::Lt, 2.0));
    assert!(!eval_naive(&fails, &traces, 0).unwrap());
    assert!(!eval_fast(&fails, &traces).unwrap().satisfied);

    // The half-open reading accepts it.
    assert!(eval_naive_with::<Strict>(&fails, &traces, 0).unwrap());
    assert!(eval_fast_with::<Strict>(&fails, &traces).unwrap().satisfied);
}

#[test]
fn eventually_never_satisfied_on_constant_signal() {
    let traces = single("x", &[5.0; 8]);
    let f = Formula::eventually(iv(0.0, 3.0), x(CmpOp::Lt, 0.0));
    assert_eq!(eval_fast(&f, &traces).unwrap().per_time, vec![false; 8]);
    assert_agree(&f, &traces);
}

#[test]
fn empty_window_convention_at_last_sample() {
    let traces = single("x", &[1.0, 2.0, 3.0, 4.0]);
    let p = x(CmpOp::Lt, 100.0);
    let g = Formula::globally(iv(1.0, 3.0), p.clone().not());
    let f = Formula::eventually(iv(1.0, 3.0), p);
    assert!(eval_naive(&g, &traces, 3).unwrap());
    assert!(!eval_naive(&f, &traces, 3).unwrap());
    let fast_g = eval_fast(&g, &traces).unwrap();
    let fast_f = eval_fast(&f, &traces).unwrap();
    assert_eq!(fast_g.at(3), Some(true));
    assert_eq!(fast_f.at(3), Some(false));
}

#[test]
fn fractional_bounds_select_whole_days() {
    let traces = single("x", &[0.0, 0.0, 1.0, 0.0, 0.0]);
    // Only day t+2 lies in t + [1.5, 2.5].
    let f = Formula::eventually(iv(1.5, 2.5), x(CmpOp::Gt, 0.5));
    assert_eq!(
        eval_fast(&f, &traces).unwrap().per_time,
        vec![true, false, false, false, false]
    );
    assert_agree(&f, &traces);
}

#[test]
fn gappy_grid_windows_use_real_time() {
    let x = Trace::new("x", vec![0, 3, 4, 9], vec![0.0, 1.0, 0.0, 1.0]).unwrap();
    let traces = TraceSet::new([x]).unwrap();
    let f = Formula::eventually(iv(0.0, 3.0), Formula::atom(Expr::var("x"), CmpOp::Gt, 0.5));
    assert_eq!(
        eval_fast(&f, &traces).unwrap().per_time,
        vec![true, true, false, true]
    );
    assert_agree(&f, &traces);
}

#[test]
fn domain_follows_referenced_channels() {
    let x = Trace::daily("x", vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    let dx = Trace::daily("d1(x)", vec![1.0, 1.0, 1.0]).unwrap();
    let traces = TraceSet::new([x, dx]).unwrap();
    let on_x = Formula::globally(Interval::unbounded(), x_pos());
    let on_dx = Formula::globally(
        Interval::unbounded(),
        Formula::atom(Expr::var("d1(x)"), CmpOp::Gt, 0.0),
    );
    assert_eq!(eval_fast(&on_x, &traces).unwrap().times, vec![0, 1, 2, 3]);
    assert_eq!(eval_fast(&on_dx, &traces).unwrap().times, vec![0, 1, 2]);
    assert_eq!(
        eval_naive(&on_dx, &traces, 3),
        Err(EvalError::NotASampleTime(3))
    );
}

fn x_pos() -> Formula {
    x(CmpOp::Gt, 0.0)
}

fn naive_column(f: &Formula, traces: &TraceSet) -> Vec<bool> {
    let times = domain(f, traces).unwrap();
    times
        .iter()
        .map(|&t| eval_naive(f, traces, t).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn fast_matches_naive(f in arb_formula(4), traces in arb_traceset(20)) {
        let fast = eval_fast(&f, &traces).unwrap();
        prop_assert_eq!(&fast.per_time, &naive_column(&f, &traces));
        prop_assert_eq!(fast.satisfied, fast.per_time[0]);
    }

    #[test]
    fn strict_fast_matches_strict_naive(f in arb_formula(4), traces in arb_traceset(20)) {
        let fast = eval_fast_with::<Strict>(&f, &traces).unwrap();
        let times = domain(&f, &traces).unwrap();
        for (i, &t) in times.iter().enumerate() {
            prop_assert_eq!(fast.per_time[i], eval_naive_with::<Strict>(&f, &traces, t).unwrap());
        }
    }

    #[test]
    fn desugaring_preserves_meaning(f in arb_formula(4), traces in arb_traceset(20)) {
        let core = desugar(&f);
        prop_assert!(crate::formula::is_core_fragment(&core));
        prop_assert_eq!(naive_column(&f, &traces), naive_column(&core, &traces));
    }

    #[test]
    fn globally_is_dual_to_eventually(
        f in arb_formula(3),
        i in crate::testgen::arb_interval(),
        traces in arb_traceset(20),
    ) {
        let g = Formula::globally(i, f.clone());
        let dual = Formula::eventually(i, f.not()).not();
        prop_assert_eq!(
            eval_fast(&g, &traces).unwrap().per_time,
            eval_fast(&dual, &traces).unwrap().per_time
        );
        prop_assert_eq!(naive_column(&g, &traces), naive_column(&dual, &traces));
    }

    #[test]
    fn shrinking_globally_window_keeps_satisfaction(
        f in arb_formula(3),
        w in 1u8..=6,
        narrower in 1u8..=6,
        traces in arb_traceset(20),
    ) {
        let w = f64::from(w);
        let narrower = f64::from(narrower).min(w);
        let wide = eval_fast(&Formula::globally(iv(0.0, w), f.clone()), &traces).unwrap();
        let narrow = eval_fast(&Formula::globally(iv(0.0, narrower), f), &traces).unwrap();
        for (a, b) in wide.per_time.iter().zip(&narrow.per_time) {
            prop_assert!(!a || *b);
        }
    }
}
