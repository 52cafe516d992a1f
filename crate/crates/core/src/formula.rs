//! Formula syntax: arithmetic terms over channels, predicates, intervals and
//! the temporal formula tree.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Tolerance used by `==` / `!=` predicates unless overridden.
pub const DEFAULT_EQ_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormulaError {
    #[error("interval bounds must not be NaN")]
    NanBound,
    #[error("interval lower bound {0} must be finite and non-negative")]
    BadLowerBound(f64),
    #[error("interval [{lo}, {hi}] is singular or empty (need lo < hi)")]
    Singular { lo: f64, hi: f64 },
    #[error("equality tolerance {0} must be finite and non-negative")]
    BadTolerance(f64),
}

/// Arithmetic term evaluated against channel values at one sample time.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Abs(Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Self {
        Expr::Var(name.into())
    }

    pub fn abs(self) -> Self {
        Expr::Abs(Box::new(self))
    }

    pub fn minus(self, rhs: Expr) -> Self {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn collect_channels<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(name) => {
                out.insert(name);
            }
            Expr::Neg(e) | Expr::Abs(e) => e.collect_channels(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_channels(out);
                b.collect_channels(out);
            }
        }
    }

    /// Applies the arithmetic to already-resolved channel values.
    pub(crate) fn eval_with<E>(
        &self,
        lookup: &mut impl FnMut(&str) -> Result<f64, E>,
    ) -> Result<f64, E> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(name) => lookup(name)?,
            Expr::Neg(e) => -e.eval_with(lookup)?,
            Expr::Add(a, b) => a.eval_with(lookup)? + b.eval_with(lookup)?,
            Expr::Sub(a, b) => a.eval_with(lookup)? - b.eval_with(lookup)?,
            Expr::Mul(a, b) => a.eval_with(lookup)? * b.eval_with(lookup)?,
            Expr::Abs(e) => e.eval_with(lookup)?.abs(),
        })
    }
}

impl From<f64> for Expr {
    fn from(value: f64) -> Self {
        Expr::Const(value)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
        }
    }
}

/// `lhs op rhs`. Only `<` and `<=` are primitive; the other operators are
/// evaluated through their negated/absolute-difference forms so that a
/// predicate and its desugaring agree bit for bit, NaN included.
///
/// The tolerance only affects `==` and `!=`, and is ignored by equality
/// comparisons of other predicates.
#[derive(Debug, Clone)]
pub struct Predicate {
    pub lhs: Expr,
    pub op: CmpOp,
    pub rhs: Expr,
    eq_tolerance: f64,
}

impl PartialEq for Predicate {
    fn eq(&self, other: &Self) -> bool {
        self.lhs == other.lhs
            && self.op == other.op
            && self.rhs == other.rhs
            && (!matches!(self.op, CmpOp::Eq | CmpOp::Ne)
                || self.eq_tolerance == other.eq_tolerance)
    }
}

impl Predicate {
    pub fn new(lhs: impl Into<Expr>, op: CmpOp, rhs: impl Into<Expr>) -> Self {
        Self {
            lhs: lhs.into(),
            op,
            rhs: rhs.into(),
            eq_tolerance: DEFAULT_EQ_TOLERANCE,
        }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self, FormulaError> {
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(FormulaError::BadTolerance(tolerance));
        }
        self.eq_tolerance = tolerance;
        Ok(self)
    }

    pub fn eq_tolerance(&self) -> f64 {
        self.eq_tolerance
    }

    /// Decides the comparison for evaluated operands. The negated forms make
    /// `>` and `>=` true on NaN, exactly as their desugared `!(<=)`, `!(<)`.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn holds(&self, lhs: f64, rhs: f64) -> bool {
        match self.op {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => !(lhs <= rhs),
            CmpOp::Ge => !(lhs < rhs),
            CmpOp::Eq => (lhs - rhs).abs() <= self.eq_tolerance,
            CmpOp::Ne => !((lhs - rhs).abs() <= self.eq_tolerance),
        }
    }
}

/// Closed interval `[lo, hi]` with `0 <= lo < hi <= +inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self, FormulaError> {
        if lo.is_nan() || hi.is_nan() {
            return Err(FormulaError::NanBound);
        }
        if !(lo.is_finite() && lo >= 0.0) {
            return Err(FormulaError::BadLowerBound(lo));
        }
        if lo >= hi {
            return Err(FormulaError::Singular { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// `[0, +inf]`, the interval of an undecorated operator.
    pub const fn unbounded() -> Self {
        Self {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    /// `[lo, +inf]`.
    pub fn from(lo: f64) -> Result<Self, FormulaError> {
        Self::new(lo, f64::INFINITY)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite()
    }

    pub fn is_unbounded_from_zero(&self) -> bool {
        self.lo == 0.0 && !self.is_bounded()
    }

    /// Whether sample time `candidate` lies in the shifted interval `t + I`.
    pub fn contains_shifted(&self, t: u64, candidate: u64) -> bool {
        let base = t as f64;
        let c = candidate as f64;
        c >= base + self.lo && c <= base + self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bounded() {
            write!(f, "[{},{}]", self.lo, self.hi)
        } else {
            write!(f, "[{},inf]", self.lo)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    True,
    False,
    Atom(Predicate),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Until(Interval, Box<Formula>, Box<Formula>),
    Eventually(Interval, Box<Formula>),
    Globally(Interval, Box<Formula>),
}

impl Formula {
    pub fn atom(lhs: impl Into<Expr>, op: CmpOp, rhs: impl Into<Expr>) -> Self {
        Formula::Atom(Predicate::new(lhs, op, rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    pub fn until(self, interval: Interval, rhs: Formula) -> Self {
        Formula::Until(interval, Box::new(self), Box::new(rhs))
    }

    pub fn eventually(interval: Interval, body: Formula) -> Self {
        Formula::Eventually(interval, Box::new(body))
    }

    pub fn globally(interval: Interval, body: Formula) -> Self {
        Formula::Globally(interval, Box::new(body))
    }

    /// Channels referenced anywhere in the formula.
    pub fn channels(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_channels(&mut out);
        out
    }

    fn collect_channels<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(p) => {
                p.lhs.collect_channels(out);
                p.rhs.collect_channels(out);
            }
            Formula::Not(f) | Formula::Eventually(_, f) | Formula::Globally(_, f) => {
                f.collect_channels(out)
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(_, a, b) => {
                a.collect_channels(out);
                b.collect_channels(out);
            }
        }
    }

    /// Boolean connectives plus temporal operators; atoms are free.
    pub fn operator_count(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::Eventually(_, f) | Formula::Globally(_, f) => {
                1 + f.operator_count()
            }
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(_, a, b) => 1 + a.operator_count() + b.operator_count(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::Eventually(_, f) | Formula::Globally(_, f) => 1 + f.depth(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Until(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// Rewrites `f` into the core fragment: `true`, atoms with `<`/`<=`, `!`,
/// `&` and `U`.
///
/// `false` becomes `!true`, `>`/`>=` negate `<=`/`<`, `==` becomes
/// `abs(lhs - rhs) <= tol`, `|` and `->` go through De Morgan, and the
/// temporal abbreviations expand as `F_I p = true U_I p`,
/// `G_I p = !(true U_I !p)`.
pub fn desugar(f: &Formula) -> Formula {
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::True.not(),
        Formula::Atom(p) => desugar_atom(p),
        Formula::Not(g) => desugar(g).not(),
        Formula::And(a, b) => desugar(a).and(desugar(b)),
        Formula::Or(a, b) => desugar(a).not().and(desugar(b).not()).not(),
        Formula::Implies(a, b) => {
            // !a | b  ==  !(!!a & !b)
            desugar(a).not().not().and(desugar(b).not()).not()
        }
        Formula::Until(i, a, b) => desugar(a).until(*i, desugar(b)),
        Formula::Eventually(i, g) => Formula::True.until(*i, desugar(g)),
        Formula::Globally(i, g) => Formula::True.until(*i, desugar(g).not()).not(),
    }
}

fn desugar_atom(p: &Predicate) -> Formula {
    let core =
        |lhs: &Expr, op, rhs: &Expr| Formula::Atom(Predicate::new(lhs.clone(), op, rhs.clone()));
    match p.op {
        CmpOp::Lt | CmpOp::Le => core(&p.lhs, p.op, &p.rhs),
        CmpOp::Gt => core(&p.lhs, CmpOp::Le, &p.rhs).not(),
        CmpOp::Ge => core(&p.lhs, CmpOp::Lt, &p.rhs).not(),
        CmpOp::Eq | CmpOp::Ne => {
            let distance = p.lhs.clone().minus(p.rhs.clone()).abs();
            let within = Formula::Atom(Predicate::new(
                distance,
                CmpOp::Le,
                Expr::Const(p.eq_tolerance),
            ));
            if p.op == CmpOp::Eq {
                within
            } else {
                within.not()
            }
        }
    }
}

/// Whether `f` only uses the constructs `desugar` emits.
pub fn is_core_fragment(f: &Formula) -> bool {
    match f {
        Formula::True => true,
        Formula::Atom(p) => matches!(p.op, CmpOp::Lt | CmpOp::Le),
        Formula::Not(g) => is_core_fragment(g),
        Formula::And(a, b) | Formula::Until(_, a, b) => is_core_fragment(a) && is_core_fragment(b),
        _ => false,
    }
}
