//! Boolean satisfaction of formulas over finite traces.
//!
//! Two evaluators implement the same semantics:
//!
//! * [`eval_naive`] transcribes the recursive definition directly and is used
//!   as the reference in tests.
//! * [`eval_fast`] computes the satisfaction of every subformula at every
//!   sample time bottom-up, in time linear in the number of samples.
//!
//! Quantifiers range over the sample times of the evaluation domain (the
//! times shared by every channel the formula mentions) that fall in the
//! shifted interval `t + I`. An existential over no sample times is false and
//! a universal over none is true, so at the last sample `F[a,b] p` is false
//! and `G[a,b] p` is true whenever `a > 0`.
//!
//! `p U_I q` at `t` needs a witness `t'` in `t + I` where `q` holds, with `p`
//! holding at every sample in `[t, t']` *including* `t'`. The [`Strict`]
//! mode switches to the half-open `[t, t')` reading for comparison; it is
//! selected at compile time through the `UntilMode` type parameter of
//! [`eval_naive_with`] / [`eval_fast_with`].

mod fast;
mod naive;
mod window;

use thiserror::Error;

use crate::formula::{Expr, Formula};
use crate::trace::{Day, TraceSet};

pub use fast::{eval_fast, eval_fast_with};
pub use naive::{eval_naive, eval_naive_with};
pub use window::SlidingExtremum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unknown channel `{0}`")]
    UnknownChannel(String),
    #[error("day {0} is not a sample time of the evaluation domain")]
    NotASampleTime(Day),
    #[error("the referenced channels share no sample times")]
    EmptyDomain,
}

/// Endpoint convention for `U`.
pub trait UntilMode {
    /// Whether the left operand must also hold at the witness time.
    const LEFT_HOLDS_AT_WITNESS: bool;
}

/// `[t, t']`: the left operand holds at the witness too. This is the default.
#[derive(Debug, Clone, Copy, Default)]
pub struct Inclusive;

/// `[t, t')`: the left operand only needs to hold before the witness.
#[derive(Debug, Clone, Copy, Default)]
pub struct Strict;

impl UntilMode for Inclusive {
    const LEFT_HOLDS_AT_WITNESS: bool = true;
}

impl UntilMode for Strict {
    const LEFT_HOLDS_AT_WITNESS: bool = false;
}

/// Satisfaction of a formula at every sample time of its domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    /// Satisfaction at the first sample time.
    pub satisfied: bool,
    pub times: Vec<Day>,
    pub per_time: Vec<bool>,
}

impl Verdict {
    pub(crate) fn new(times: Vec<Day>, per_time: Vec<bool>) -> Self {
        debug_assert_eq!(times.len(), per_time.len());
        Self {
            satisfied: per_time.first().copied().unwrap_or(false),
            times,
            per_time,
        }
    }

    pub fn at(&self, t: Day) -> Option<bool> {
        self.times
            .binary_search(&t)
            .ok()
            .map(|index| self.per_time[index])
    }
}

/// Sample times over which `f` is evaluated on `traces`.
pub fn domain(f: &Formula, traces: &TraceSet) -> Result<Vec<Day>, EvalError> {
    let channels = f.channels();
    for name in &channels {
        if traces.get(name).is_none() {
            return Err(EvalError::UnknownChannel((*name).to_owned()));
        }
    }
    let times = traces.domain(channels);
    if times.is_empty() {
        return Err(EvalError::EmptyDomain);
    }
    Ok(times)
}

/// Evaluates `e` with the channel values sampled at `t`.
pub fn eval_expr(e: &Expr, traces: &TraceSet, t: Day) -> Result<f64, EvalError> {
    e.eval_with(&mut |name: &str| {
        let trace = traces
            .get(name)
            .ok_or_else(|| EvalError::UnknownChannel(name.to_owned()))?;
        trace.value_at(t).ok_or(EvalError::NotASampleTime(t))
    })
}

#[cfg(test)]
mod tests;
