//! Bottom-up evaluation over whole signals.
//!
//! Every subformula is turned into a boolean column indexed by the sample
//! times of the domain. For a window `t + [a, b]` the candidate index range
//! `[lo(i), hi(i))` has both ends non-decreasing in `i`, so the bounds for all
//! `i` come from one two-pointer pass.
//!
//! * `F_I` / `G_I` take a sliding max / min of the operand column over those
//!   ranges with [`SlidingExtremum`].
//! * `p U_I q` at `i` holds iff `q` holds somewhere in `[lo(i), hi'(i))`,
//!   where `hi'(i)` additionally stops at the first index `r(i) >= i` at which
//!   `p` fails (`r(i)` itself is excluded in the inclusive mode and admitted
//!   in the strict one). `r(i)` is non-decreasing and computed by one backward
//!   scan, so the same sliding max applies.
//!
//! Each operator therefore costs `O(n)` for `n` samples and a formula with
//! `m` nodes costs `O(m * n)`.

use super::window::SlidingExtremum;
use super::{domain, EvalError, Inclusive, UntilMode, Verdict};
use crate::formula::{Expr, Formula, Interval};
use crate::trace::{Day, TraceSet};

use std::collections::HashMap;

pub fn eval_fast(f: &Formula, traces: &TraceSet) -> Result<Verdict, EvalError> {
    eval_fast_with::<Inclusive>(f, traces)
}

pub fn eval_fast_with<M: UntilMode>(f: &Formula, traces: &TraceSet) -> Result<Verdict, EvalError> {
    let times = domain(f, traces)?;
    let mut columns = HashMap::new();
    for name in f.channels() {
        let trace = traces
            .get(name)
            .ok_or_else(|| EvalError::UnknownChannel(name.to_owned()))?;
        columns.insert(name, align(trace.times(), trace.values(), &times));
    }
    let frame = Frame {
        times: &times,
        columns,
    };
    let per_time = frame.sat::<M>(f);
    Ok(Verdict::new(times, per_time))
}

/// Values of a channel at the domain times (a subset of the channel's times).
fn align(channel_times: &[Day], values: &[f64], domain: &[Day]) -> Vec<f64> {
    let mut out = Vec::with_capacity(domain.len());
    let mut j = 0;
    for &t in domain {
        while channel_times[j] < t {
            j += 1;
        }
        debug_assert_eq!(channel_times[j], t);
        out.push(values[j]);
    }
    out
}

struct Frame<'a> {
    times: &'a [Day],
    columns: HashMap<&'a str, Vec<f64>>,
}

impl Frame<'_> {
    fn len(&self) -> usize {
        self.times.len()
    }

    fn sat<M: UntilMode>(&self, f: &Formula) -> Vec<bool> {
        let n = self.len();
        match f {
            Formula::True => vec![true; n],
            Formula::False => vec![false; n],
            Formula::Atom(p) => {
                let lhs = self.expr(&p.lhs);
                let rhs = self.expr(&p.rhs);
                lhs.iter().zip(&rhs).map(|(&l, &r)| p.holds(l, r)).collect()
            }
            Formula::Not(g) => {
                let mut out = self.sat::<M>(g);
                out.iter_mut().for_each(|b| *b = !*b);
                out
            }
            Formula::And(a, b) => zip_with(self.sat::<M>(a), &self.sat::<M>(b), |x, y| x && y),
            Formula::Or(a, b) => zip_with(self.sat::<M>(a), &self.sat::<M>(b), |x, y| x || y),
            Formula::Implies(a, b) => zip_with(self.sat::<M>(a), &self.sat::<M>(b), |x, y| !x || y),
            Formula::Eventually(interval, g) => {
                let body = self.sat::<M>(g);
                let mut any = SlidingExtremum::new(&body, |a: &bool, b: &bool| *a & !*b);
                self.window_bounds(interval)
                    .map(|(lo, hi)| any.query(lo, hi).unwrap_or(false))
                    .collect()
            }
            Formula::Globally(interval, g) => {
                let body = self.sat::<M>(g);
                let mut all = SlidingExtremum::new(&body, |a: &bool, b: &bool| !*a & *b);
                self.window_bounds(interval)
                    .map(|(lo, hi)| all.query(lo, hi).unwrap_or(true))
                    .collect()
            }
            Formula::Until(interval, left, right) => {
                let left = self.sat::<M>(left);
                let right = self.sat::<M>(right);
                let first_failure = first_failure_from(&left);
                let mut any = SlidingExtremum::new(&right, |a: &bool, b: &bool| *a & !*b);
                self.window_bounds(interval)
                    .enumerate()
                    .map(|(i, (lo, hi))| {
                        let stop = if M::LEFT_HOLDS_AT_WITNESS {
                            first_failure[i]
                        } else {
                            first_failure[i] + 1
                        };
                        any.query(lo, hi.min(stop)).unwrap_or(false)
                    })
                    .collect()
            }
        }
    }

    fn expr(&self, e: &Expr) -> Vec<f64> {
        let n = self.len();
        match e {
            Expr::Const(c) => vec![*c; n],
            Expr::Var(name) => self.columns[name.as_str()].clone(),
            Expr::Neg(a) => self.expr(a).into_iter().map(|v| -v).collect(),
            Expr::Abs(a) => self.expr(a).into_iter().map(f64::abs).collect(),
            Expr::Add(a, b) => zip_with(self.expr(a), &self.expr(b), |x, y| x + y),
            Expr::Sub(a, b) => zip_with(self.expr(a), &self.expr(b), |x, y| x - y),
            Expr::Mul(a, b) => zip_with(self.expr(a), &self.expr(b), |x, y| x * y),
        }
    }

    /// `[lo, hi)` index range of samples in `times[i] + interval`, per `i`.
    fn window_bounds<'s>(
        &'s self,
        interval: &'s Interval,
    ) -> impl Iterator<Item = (usize, usize)> + 's {
        let times = self.times;
        let (mut lo, mut hi) = (0usize, 0usize);
        (0..times.len()).map(move |i| {
            let t = times[i];
            let start = t as f64 + interval.lo();
            while lo < times.len() && (times[lo] as f64) < start {
                lo += 1;
            }
            hi = hi.max(lo);
            while hi < times.len() && interval.contains_shifted(t, times[hi]) {
                hi += 1;
            }
            (lo, hi)
        })
    }
}

/// For each `i`, the first index `k >= i` with `!column[k]`, or `len`.
fn first_failure_from(column: &[bool]) -> Vec<usize> {
    let n = column.len();
    let mut out = vec![n; n + 1];
    for i in (0..n).rev() {
        out[i] = if column[i] { out[i + 1] } else { i };
    }
    out.truncate(n);
    out
}

fn zip_with<T: Copy>(mut a: Vec<T>, b: &[T], op: impl Fn(T, T) -> T) -> Vec<T> {
    for (x, &y) in a.iter_mut().zip(b) {
        *x = op(*x, y);
    }
    a
}
