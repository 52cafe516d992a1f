//! Grounding over a fixed horizon.
//!
//! A formula evaluated at day 0 of a trace with days `0..T` is unrolled into
//! a propositional formula over per-day atoms: `F_I p` at day `i` becomes the
//! disjunction of `p` at the days of `i + I`, `G_I p` the conjunction, and
//! `p U_I q` the disjunction over witnesses `j` of `q@j & p@i & ... & p@j`.
//!
//! Operator counting rule: boolean connectives count, atoms are free, an
//! n-ary junction counts n - 1. In the propositional target a bounded window
//! is padded to its full width with neutral constants (`false` in
//! disjunctions, `true` in conjunctions) so that every instance has the same
//! shape, and when the formula's top operator is temporal the junction
//! joining its per-day instances is not counted. Under this rule the
//! grounded `F((d1(x) > d) & F[0,w](d1(x) < d))` counts `T(1 + w)`. The
//! dataframe-query target renders the unpadded formula and counts every
//! `&`, `|`, `~` and comparison.

use std::fmt::Write;

use super::AnalyticsError;
use crate::eval::{eval_expr, EvalError};
use crate::formula::{CmpOp, Expr, Formula, Interval, Predicate, DEFAULT_EQ_TOLERANCE};
use crate::props::{DERIVATIVE, POSITION};
use crate::trace::{Day, TraceSet};

/// Upper bound on grounded formula size.
pub const MAX_GROUND_NODES: usize = 2_000_000;

/// A propositional formula over `(predicate, day)` atoms.
#[derive(Debug, Clone, PartialEq)]
pub enum Prop {
    Const(bool),
    Atom { predicate: Predicate, day: Day },
    Not(Box<Prop>),
    And(Vec<Prop>),
    Or(Vec<Prop>),
    Implies(Box<Prop>, Box<Prop>),
}

impl Prop {
    fn and(mut items: Vec<Prop>) -> Prop {
        match items.len() {
            0 => Prop::Const(true),
            1 => items.pop().expect("one item"),
            _ => Prop::And(items),
        }
    }

    fn or(mut items: Vec<Prop>) -> Prop {
        match items.len() {
            0 => Prop::Const(false),
            1 => items.pop().expect("one item"),
            _ => Prop::Or(items),
        }
    }

    /// Connectives under the counting rule (n-ary junctions count n - 1).
    pub fn connectives(&self) -> usize {
        match self {
            Prop::Const(_) | Prop::Atom { .. } => 0,
            Prop::Not(p) => 1 + p.connectives(),
            Prop::Implies(a, b) => 1 + a.connectives() + b.connectives(),
            Prop::And(items) | Prop::Or(items) => {
                items.len() - 1 + items.iter().map(Prop::connectives).sum::<usize>()
            }
        }
    }

    pub fn atoms(&self) -> usize {
        match self {
            Prop::Const(_) => 0,
            Prop::Atom { .. } => 1,
            Prop::Not(p) => p.atoms(),
            Prop::Implies(a, b) => a.atoms() + b.atoms(),
            Prop::And(items) | Prop::Or(items) => items.iter().map(Prop::atoms).sum(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionTarget {
    Propositional,
    DataframeQuery,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    pub target: ExpansionTarget,
    pub horizon: usize,
    pub text: String,
    /// Count under the rule in the module docs.
    pub operator_count: usize,
    /// Every connective of the rendered formula (plus comparisons for the
    /// query target).
    pub total_count: usize,
    /// Connectives and temporal operators of the formula itself.
    pub stl_operator_count: usize,
}

struct Grounder {
    horizon: usize,
    pad: bool,
    budget: usize,
}

impl Grounder {
    fn spend(&mut self, nodes: usize) -> Result<(), AnalyticsError> {
        if nodes > self.budget {
            return Err(AnalyticsError::NotExpandable {
                horizon: self.horizon,
                limit: MAX_GROUND_NODES,
            });
        }
        self.budget -= nodes;
        Ok(())
    }

    /// Days of `i + interval` inside the horizon, and how many neutral
    /// constants pad the window to full width.
    fn window(&self, i: usize, interval: &Interval) -> (std::ops::Range<usize>, usize) {
        let last = (self.horizon - 1) as f64;
        let lo = (i as f64 + interval.lo()).ceil();
        let full_hi = if interval.is_bounded() {
            (i as f64 + interval.hi()).floor()
        } else {
            last
        };
        let hi = full_hi.min(last);
        let width = |hi: f64| {
            if hi >= lo {
                (hi - lo + 1.0) as usize
            } else {
                0
            }
        };
        let present = width(hi);
        let padding = if self.pad && interval.is_bounded() {
            width(full_hi) - present
        } else {
            0
        };
        let start = lo as usize;
        (start..start + present, padding)
    }

    /// Per-day instances of a temporal operator at day `i` and whether they
    /// are joined disjunctively. `None` for non-temporal formulas.
    fn instances(
        &mut self,
        f: &Formula,
        i: usize,
    ) -> Result<Option<(bool, Vec<Prop>)>, AnalyticsError> {
        Ok(Some(match f {
            Formula::Eventually(interval, body) => {
                let (days, padding) = self.window(i, interval);
                let mut items = Vec::new();
                for j in days {
                    items.push(self.ground(body, j)?);
                }
                self.spend(padding)?;
                items.extend(std::iter::repeat_n(Prop::Const(false), padding));
                (true, items)
            }
            Formula::Globally(interval, body) => {
                let (days, padding) = self.window(i, interval);
                let mut items = Vec::new();
                for j in days {
                    items.push(self.ground(body, j)?);
                }
                self.spend(padding)?;
                items.extend(std::iter::repeat_n(Prop::Const(true), padding));
                (false, items)
            }
            Formula::Until(interval, left, right) => {
                let (days, padding) = self.window(i, interval);
                let mut items = Vec::new();
                for j in days {
                    let mut conj = vec![self.ground(right, j)?];
                    for k in i..=j {
                        conj.push(self.ground(left, k)?);
                    }
                    self.spend(1)?;
                    items.push(Prop::and(conj));
                }
                self.spend(padding)?;
                items.extend(std::iter::repeat_n(Prop::Const(false), padding));
                (true, items)
            }
            _ => return Ok(None),
        }))
    }

    fn ground(&mut self, f: &Formula, i: usize) -> Result<Prop, AnalyticsError> {
        self.spend(1)?;
        Ok(match f {
            Formula::True => Prop::Const(true),
            Formula::False => Prop::Const(false),
            Formula::Atom(p) => Prop::Atom {
                predicate: p.clone(),
                day: i as Day,
            },
            Formula::Not(g) => Prop::Not(Box::new(self.ground(g, i)?)),
            Formula::And(a, b) => Prop::and(vec![self.ground(a, i)?, self.ground(b, i)?]),
            Formula::Or(a, b) => Prop::or(vec![self.ground(a, i)?, self.ground(b, i)?]),
            Formula::Implies(a, b) => {
                Prop::Implies(Box::new(self.ground(a, i)?), Box::new(self.ground(b, i)?))
            }
            Formula::Eventually(..) | Formula::Globally(..) | Formula::Until(..) => {
                let (disjunctive, items) = self.instances(f, i)?.expect("temporal");
                if disjunctive {
                    Prop::or(items)
                } else {
                    Prop::and(items)
                }
            }
        })
    }
}

/// The formula at day 0 over days `0..horizon`, padded as in the
/// propositional report.
pub fn ground(f: &Formula, horizon: usize) -> Result<Prop, AnalyticsError> {
    ground_with(f, horizon, true).map(|(prop, _)| prop)
}

/// Returns the grounded formula and its count under the counting rule.
fn ground_with(f: &Formula, horizon: usize, pad: bool) -> Result<(Prop, usize), AnalyticsError> {
    if horizon == 0 {
        return Err(AnalyticsError::EmptyHorizon);
    }
    let mut g = Grounder {
        horizon,
        pad,
        budget: MAX_GROUND_NODES,
    };
    match g.instances(f, 0)? {
        Some((disjunctive, items)) => {
            let count = items.iter().map(Prop::connectives).sum();
            let prop = if disjunctive {
                Prop::or(items)
            } else {
                Prop::and(items)
            };
            Ok((prop, count))
        }
        None => {
            let prop = g.ground(f, 0)?;
            let count = prop.connectives();
            Ok((prop, count))
        }
    }
}

/// Evaluates a grounded formula against the channels of a trace set.
pub fn eval_ground(prop: &Prop, traces: &TraceSet) -> Result<bool, EvalError> {
    Ok(match prop {
        Prop::Const(b) => *b,
        Prop::Atom { predicate, day } => {
            let lhs = eval_expr(&predicate.lhs, traces, *day)?;
            let rhs = eval_expr(&predicate.rhs, traces, *day)?;
            predicate.holds(lhs, rhs)
        }
        Prop::Not(p) => !eval_ground(p, traces)?,
        Prop::And(items) => {
            for item in items {
                if !eval_ground(item, traces)? {
                    return Ok(false);
                }
            }
            true
        }
        Prop::Or(items) => {
            for item in items {
                if eval_ground(item, traces)? {
                    return Ok(true);
                }
            }
            false
        }
        Prop::Implies(a, b) => !eval_ground(a, traces)? || eval_ground(b, traces)?,
    })
}

pub fn expand_propositional(
    f: &Formula,
    horizon: usize,
) -> Result<ExpansionReport, AnalyticsError> {
    let (prop, operator_count) = ground_with(f, horizon, true)?;
    let mut text = String::new();
    write_prop(
        &mut text,
        &prop,
        &|name, day| format!("{name}@{day}"),
        false,
    );
    Ok(ExpansionReport {
        target: ExpansionTarget::Propositional,
        horizon,
        text,
        operator_count,
        total_count: prop.connectives(),
        stl_operator_count: f.operator_count(),
    })
}

/// Renders the grounded formula as a dataframe row filter over columns
/// `pos_0..pos_{T-1}`. Text only; nothing is executed.
///
/// A formula over a single channel reads that channel from `df.pos_i`.
/// Otherwise `x` is `df.pos_i`, `d1(x)` is `(df.pos_{i+1} - df.pos_i)` and
/// any other channel `c` is `df.c_i`.
pub fn expand_query(f: &Formula, horizon: usize) -> Result<ExpansionReport, AnalyticsError> {
    let (prop, _) = ground_with(f, horizon, false)?;
    let single = f.channels().len() == 1;
    let column = move |name: &str, day: Day| {
        if single || name == POSITION {
            format!("df.pos_{day}")
        } else if name == DERIVATIVE {
            format!("(df.pos_{} - df.pos_{day})", day + 1)
        } else {
            let clean: String = name
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
                .collect();
            format!("df.{clean}_{day}")
        }
    };
    let mut body = String::new();
    write_prop(&mut body, &prop, &column, true);
    let count = query_count(&prop);
    Ok(ExpansionReport {
        target: ExpansionTarget::DataframeQuery,
        horizon,
        text: format!("df[{body}]"),
        operator_count: count,
        total_count: count,
        stl_operator_count: f.operator_count(),
    })
}

/// `&`, `|`, `~` and comparisons of the query rendering.
fn query_count(prop: &Prop) -> usize {
    match prop {
        Prop::Const(_) => 0,
        Prop::Atom { .. } => 1,
        Prop::Not(p) => 1 + query_count(p),
        // rendered as (~a | b)
        Prop::Implies(a, b) => 2 + query_count(a) + query_count(b),
        Prop::And(items) | Prop::Or(items) => {
            items.len() - 1 + items.iter().map(query_count).sum::<usize>()
        }
    }
}

type Columns<'a> = &'a dyn Fn(&str, Day) -> String;

fn write_prop(out: &mut String, prop: &Prop, column: Columns<'_>, query: bool) {
    match prop {
        Prop::Const(b) => out.push_str(match (query, b) {
            (true, true) => "True",
            (true, false) => "False",
            (false, true) => "true",
            (false, false) => "false",
        }),
        Prop::Atom { predicate, day } => write_atom(out, predicate, *day, column, query),
        Prop::Not(p) => {
            out.push_str(if query { "~" } else { "!" });
            group(out, p, column, query);
        }
        Prop::Implies(a, b) => {
            if query {
                out.push('~');
                group(out, a, column, query);
                out.push_str(" | ");
            } else {
                group(out, a, column, query);
                out.push_str(" -> ");
            }
            group(out, b, column, query);
        }
        Prop::And(items) | Prop::Or(items) => {
            let sep = if matches!(prop, Prop::And(_)) {
                " & "
            } else {
                " | "
            };
            for (n, item) in items.iter().enumerate() {
                if n > 0 {
                    out.push_str(sep);
                }
                group(out, item, column, query);
            }
        }
    }
}

fn group(out: &mut String, prop: &Prop, column: Columns<'_>, query: bool) {
    if matches!(prop, Prop::Atom { .. } | Prop::Const(_)) {
        write_prop(out, prop, column, query);
    } else {
        out.push('(');
        write_prop(out, prop, column, query);
        out.push(')');
    }
}

fn write_atom(out: &mut String, p: &Predicate, day: Day, column: Columns<'_>, query: bool) {
    let lhs = render_expr(&p.lhs, day, column);
    let rhs = render_expr(&p.rhs, day, column);
    let tol = p.eq_tolerance();
    let _ = match (query, p.op) {
        (true, CmpOp::Eq | CmpOp::Ne) => {
            let op = if p.op == CmpOp::Eq { "<=" } else { ">" };
            write!(out, "(abs({lhs} - {rhs}) {op} {tol})")
        }
        (false, CmpOp::Eq | CmpOp::Ne) if tol != DEFAULT_EQ_TOLERANCE => {
            write!(out, "({lhs} {} {rhs} ~ {tol})", p.op.symbol())
        }
        _ => write!(out, "({lhs} {} {rhs})", p.op.symbol()),
    };
}

fn render_expr(e: &Expr, day: Day, column: Columns<'_>) -> String {
    match e {
        Expr::Const(c) => c.to_string(),
        Expr::Var(name) => column(name, day),
        Expr::Neg(a) => format!("-({})", render_expr(a, day, column)),
        Expr::Abs(a) => format!("abs({})", render_expr(a, day, column)),
        Expr::Add(a, b) => format!(
            "({} + {})",
            render_expr(a, day, column),
            render_expr(b, day, column)
        ),
        Expr::Sub(a, b) => format!(
            "({} - {})",
            render_expr(a, day, column),
            render_expr(b, day, column)
        ),
        Expr::Mul(a, b) => format!(
            "({} * {})",
            render_expr(a, day, column),
            render_expr(b, day, column)
        ),
    }
}
