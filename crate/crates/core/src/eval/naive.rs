use std::collections::HashMap;

use super::{domain, eval_expr, EvalError, Inclusive, UntilMode};
use crate::formula::Formula;
use crate::trace::{Day, TraceSet};

/// Satisfaction of `f` at sample time `t`, by direct recursion over the
/// quantifiers of each operator.
pub fn eval_naive(f: &Formula, traces: &TraceSet, t: Day) -> Result<bool, EvalError> {
    eval_naive_with::<Inclusive>(f, traces, t)
}

pub fn eval_naive_with<M: UntilMode>(
    f: &Formula,
    traces: &TraceSet,
    t: Day,
) -> Result<bool, EvalError> {
    let times = domain(f, traces)?;
    if times.binary_search(&t).is_err() {
        return Err(EvalError::NotASampleTime(t));
    }
    let mut naive = Naive::<M> {
        traces,
        times: &times,
        memo: HashMap::new(),
        mode: std::marker::PhantomData,
    };
    naive.sat(f, t)
}

struct Naive<'a, M> {
    traces: &'a TraceSet,
    times: &'a [Day],
    // Keyed by node address; the tree is borrowed for the whole evaluation.
    memo: HashMap<(*const Formula, Day), bool>,
    mode: std::marker::PhantomData<M>,
}

impl<M: UntilMode> Naive<'_, M> {
    fn sat(&mut self, f: &Formula, t: Day) -> Result<bool, EvalError> {
        let key = (f as *const Formula, t);
        if let Some(&known) = self.memo.get(&key) {
            return Ok(known);
        }
        let value = self.sat_uncached(f, t)?;
        self.memo.insert(key, value);
        Ok(value)
    }

    fn sat_uncached(&mut self, f: &Formula, t: Day) -> Result<bool, EvalError> {
        Ok(match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(p) => {
                let lhs = eval_expr(&p.lhs, self.traces, t)?;
                let rhs = eval_expr(&p.rhs, self.traces, t)?;
                p.holds(lhs, rhs)
            }
            Formula::Not(g) => !self.sat(g, t)?,
            Formula::And(a, b) => self.sat(a, t)? && self.sat(b, t)?,
            Formula::Or(a, b) => self.sat(a, t)? || self.sat(b, t)?,
            Formula::Implies(a, b) => !self.sat(a, t)? || self.sat(b, t)?,
            Formula::Eventually(interval, g) => {
                for s in self.window(|s| interval.contains_shifted(t, s)) {
                    if self.sat(g, s)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Globally(interval, g) => {
                for s in self.window(|s| interval.contains_shifted(t, s)) {
                    if !self.sat(g, s)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Until(interval, left, right) => {
                for witness in self.window(|s| interval.contains_shifted(t, s)) {
                    if !self.sat(right, witness)? {
                        continue;
                    }
                    let mut held = true;
                    let span = self.window(|s| {
                        s >= t && (s < witness || (M::LEFT_HOLDS_AT_WITNESS && s == witness))
                    });
                    for s in span {
                        if !self.sat(left, s)? {
                            held = false;
                            break;
                        }
                    }
                    if held {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    fn window(&self, keep: impl Fn(Day) -> bool) -> Vec<Day> {
        self.times.iter().copied().filter(|&s| keep(s)).collect()
    }
}
