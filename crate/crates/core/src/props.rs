//! The ranking-property library.
//!
//! Position formulas use the channel `x`; derivative formulas use `d1(x)`,
//! the day-to-day difference `x(t+1) - x(t)`. A lower position value is a
//! better rank, so a negative derivative means the product gains positions.
//!
//! | name | formula |
//! |---|---|
//! | `flat_start` | `G[0,w](abs(d1(x)) < epsilon)` |
//! | `cold_start` | `G[0,w](d1(x) <= 0) & F[0,w](d1(x) < 0)` |
//! | `warm_start` | `G[0,w](d1(x) >= 0) & F[0,w](d1(x) > 0)` |
//! | `steady_state` | `F[0,w] G(abs(d1(x)) < epsilon)` |
//! | `reach` | `G((x < s) -> F(x == r))` |
//! | `ditch` | `F((d1(x) > d) & F[0,w](d1(x) < d))` |
//! | `spike` | `F((d1(x) < d) & F[0,w](d1(x) > d))` |
//! | `no_init_miss` | `!G[0,w](x == -1)` |
//! | `no_long_miss` | `G((x == -1) -> F[0,w]!(x == -1))` |
//!
//! Windows must be non-singular, so `w` has to be positive.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::formula::{CmpOp, Expr, Formula, Interval, Predicate};
use crate::parser::print_formula;

/// Position channel.
pub const POSITION: &str = "x";
/// First-difference channel of [`POSITION`].
pub const DERIVATIVE: &str = "d1(x)";
/// Position value marking a day without data.
pub const MISSING: f64 = -1.0;
/// Tolerance of the `x == r` comparison in `reach`, unless overridden.
pub const DEFAULT_REACH_TOLERANCE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PropertyError {
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("{property}: missing parameter `{field}`")]
    Missing {
        property: PropertyKind,
        field: &'static str,
    },
    #[error("{property}: parameter `{field}` = {value} {reason}")]
    Invalid {
        property: PropertyKind,
        field: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("unknown parameter `{0}` (expected w, epsilon, d, s, r or tolerance)")]
    UnknownParameter(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PropertyKind {
    FlatStart,
    ColdStart,
    WarmStart,
    SteadyState,
    Reach,
    Ditch,
    Spike,
    NoInitMiss,
    NoLongMiss,
}

impl PropertyKind {
    pub const ALL: [PropertyKind; 9] = [
        PropertyKind::FlatStart,
        PropertyKind::ColdStart,
        PropertyKind::WarmStart,
        PropertyKind::SteadyState,
        PropertyKind::Reach,
        PropertyKind::Ditch,
        PropertyKind::Spike,
        PropertyKind::NoInitMiss,
        PropertyKind::NoLongMiss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PropertyKind::FlatStart => "flat_start",
            PropertyKind::ColdStart => "cold_start",
            PropertyKind::WarmStart => "warm_start",
            PropertyKind::SteadyState => "steady_state",
            PropertyKind::Reach => "reach",
            PropertyKind::Ditch => "ditch",
            PropertyKind::Spike => "spike",
            PropertyKind::NoInitMiss => "no_init_miss",
            PropertyKind::NoLongMiss => "no_long_miss",
        }
    }

    /// Parameters the formula reads.
    pub fn fields(self) -> &'static [&'static str] {
        match self {
            PropertyKind::FlatStart | PropertyKind::SteadyState => &["w", "epsilon"],
            PropertyKind::ColdStart
            | PropertyKind::WarmStart
            | PropertyKind::NoInitMiss
            | PropertyKind::NoLongMiss => &["w"],
            PropertyKind::Reach => &["s", "r", "tolerance"],
            PropertyKind::Ditch | PropertyKind::Spike => &["d", "w"],
        }
    }

    /// Whether `w` counts whole days for this property.
    fn integer_window(self) -> bool {
        matches!(
            self,
            PropertyKind::FlatStart
                | PropertyKind::ColdStart
                | PropertyKind::WarmStart
                | PropertyKind::NoInitMiss
                | PropertyKind::NoLongMiss
        )
    }
}

impl fmt::Display for PropertyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PropertyKind {
    type Err = PropertyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PropertyKind::ALL
            .into_iter()
            .find(|kind| kind.name() == s)
            .ok_or_else(|| PropertyError::UnknownProperty(s.to_owned()))
    }
}

/// Property parameters. Only the fields a property reads need to be set.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PropertyParams {
    pub w: Option<f64>,
    pub epsilon: Option<f64>,
    pub d: Option<f64>,
    pub s: Option<f64>,
    pub r: Option<f64>,
    /// Equality tolerance of `reach`; [`DEFAULT_REACH_TOLERANCE`] if unset.
    pub tolerance: Option<f64>,
}

impl PropertyParams {
    pub fn w(mut self, w: f64) -> Self {
        self.w = Some(w);
        self
    }

    pub fn epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    pub fn d(mut self, d: f64) -> Self {
        self.d = Some(d);
        self
    }

    pub fn s(mut self, s: f64) -> Self {
        self.s = Some(s);
        self
    }

    pub fn r(mut self, r: f64) -> Self {
        self.r = Some(r);
        self
    }

    pub fn tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = Some(tolerance);
        self
    }

    /// Sets a field by name (`w`, `epsilon`/`eps`, `d`, `s`, `r`, `tolerance`/`tol`).
    pub fn set(&mut self, field: &str, value: f64) -> Result<(), PropertyError> {
        let slot = match field {
            "w" => &mut self.w,
            "epsilon" | "eps" => &mut self.epsilon,
            "d" => &mut self.d,
            "s" => &mut self.s,
            "r" => &mut self.r,
            "tolerance" | "tol" => &mut self.tolerance,
            other => return Err(PropertyError::UnknownParameter(other.to_owned())),
        };
        *slot = Some(value);
        Ok(())
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(self, other: &PropertyParams) -> Self {
        Self {
            w: other.w.or(self.w),
            epsilon: other.epsilon.or(self.epsilon),
            d: other.d.or(self.d),
            s: other.s.or(self.s),
            r: other.r.or(self.r),
            tolerance: other.tolerance.or(self.tolerance),
        }
    }

    /// Library defaults for `kind`.
    pub fn defaults(kind: PropertyKind) -> Self {
        let p = Self::default();
        match kind {
            PropertyKind::FlatStart | PropertyKind::SteadyState => p.w(3.0).epsilon(1.0),
            PropertyKind::ColdStart
            | PropertyKind::WarmStart
            | PropertyKind::NoInitMiss
            | PropertyKind::NoLongMiss => p.w(3.0),
            PropertyKind::Reach => p.s(10.0).r(1.0),
            PropertyKind::Ditch | PropertyKind::Spike => p.d(10.0).w(2.0),
        }
    }
}

/// A formula with a display name, as consumed by the analytics.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedFormula {
    pub name: String,
    pub formula: Formula,
}

impl NamedFormula {
    pub fn new(name: impl Into<String>, formula: Formula) -> Self {
        Self {
            name: name.into(),
            formula,
        }
    }
}

/// A library property with its parameters and built formula.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertySpec {
    pub kind: PropertyKind,
    pub params: PropertyParams,
    pub formula: Formula,
}

impl PropertySpec {
    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Canonical text of the formula, accepted by the parser.
    pub fn describe(&self) -> String {
        print_formula(&self.formula)
    }

    pub fn named(&self) -> NamedFormula {
        NamedFormula::new(self.name(), self.formula.clone())
    }
}

impl From<PropertySpec> for NamedFormula {
    fn from(spec: PropertySpec) -> Self {
        NamedFormula::new(spec.kind.name(), spec.formula)
    }
}

pub fn build(kind: PropertyKind, params: PropertyParams) -> Result<PropertySpec, PropertyError> {
    let b = Builder { kind, params };
    let formula = match kind {
        PropertyKind::FlatStart => {
            let (w, eps) = (b.window()?, b.epsilon()?);
            Formula::globally(w, Formula::atom(dx().abs(), CmpOp::Lt, eps))
        }
        PropertyKind::ColdStart => {
            let w = b.window()?;
            Formula::globally(w, Formula::atom(dx(), CmpOp::Le, 0.0))
                .and(Formula::eventually(w, Formula::atom(dx(), CmpOp::Lt, 0.0)))
        }
        PropertyKind::WarmStart => {
            let w = b.window()?;
            Formula::globally(w, Formula::atom(dx(), CmpOp::Ge, 0.0))
                .and(Formula::eventually(w, Formula::atom(dx(), CmpOp::Gt, 0.0)))
        }
        PropertyKind::SteadyState => {
            let (w, eps) = (b.window()?, b.epsilon()?);
            Formula::eventually(
                w,
                Formula::globally(
                    Interval::unbounded(),
                    Formula::atom(dx().abs(), CmpOp::Lt, eps),
                ),
            )
        }
        PropertyKind::Reach => {
            let s = b.finite("s", params.s)?;
            let r = b.finite("r", params.r)?;
            let tol = match params.tolerance {
                None => DEFAULT_REACH_TOLERANCE,
                Some(t) if t.is_finite() && t >= 0.0 => t,
                Some(t) => return Err(b.invalid("tolerance", t, "must be finite and >= 0")),
            };
            let reached = Predicate::new(x(), CmpOp::Eq, r)
                .with_tolerance(tol)
                .expect("tolerance validated above");
            Formula::globally(
                Interval::unbounded(),
                Formula::atom(x(), CmpOp::Lt, s).implies(Formula::eventually(
                    Interval::unbounded(),
                    Formula::Atom(reached),
                )),
            )
        }
        PropertyKind::Ditch | PropertyKind::Spike => {
            let d = b.finite("d", params.d)?;
            if d <= 0.0 {
                return Err(b.invalid("d", d, "must be > 0"));
            }
            let w = b.window()?;
            let (first, then) = if kind == PropertyKind::Ditch {
                (CmpOp::Gt, CmpOp::Lt)
            } else {
                (CmpOp::Lt, CmpOp::Gt)
            };
            Formula::eventually(
                Interval::unbounded(),
                Formula::atom(dx(), first, d)
                    .and(Formula::eventually(w, Formula::atom(dx(), then, d))),
            )
        }
        PropertyKind::NoInitMiss => {
            let w = b.window()?;
            Formula::globally(w, miss()).not()
        }
        PropertyKind::NoLongMiss => {
            let w = b.window()?;
            Formula::globally(
                Interval::unbounded(),
                miss().implies(Formula::eventually(w, miss().not())),
            )
        }
    };
    Ok(PropertySpec {
        kind,
        params,
        formula,
    })
}

/// Builds `kind` with its library defaults overridden by `overrides`.
pub fn build_with_defaults(
    kind: PropertyKind,
    overrides: &PropertyParams,
) -> Result<PropertySpec, PropertyError> {
    build(kind, PropertyParams::defaults(kind).overlay(overrides))
}

/// The nine properties with their default parameters, in library order.
pub fn default_library() -> Vec<PropertySpec> {
    PropertyKind::ALL
        .into_iter()
        .map(|kind| build(kind, PropertyParams::defaults(kind)).expect("defaults are valid"))
        .collect()
}

/// `x == -1`.
pub fn miss() -> Formula {
    Formula::atom(x(), CmpOp::Eq, MISSING)
}

fn x() -> Expr {
    Expr::var(POSITION)
}

fn dx() -> Expr {
    Expr::var(DERIVATIVE)
}

struct Builder {
    kind: PropertyKind,
    params: PropertyParams,
}

impl Builder {
    fn invalid(&self, field: &'static str, value: f64, reason: &'static str) -> PropertyError {
        PropertyError::Invalid {
            property: self.kind,
            field,
            value,
            reason,
        }
    }

    fn finite(&self, field: &'static str, value: Option<f64>) -> Result<f64, PropertyError> {
        let value = value.ok_or(PropertyError::Missing {
            property: self.kind,
            field,
        })?;
        if !value.is_finite() {
            return Err(self.invalid(field, value, "must be finite"));
        }
        Ok(value)
    }

    fn window(&self) -> Result<Interval, PropertyError> {
        let w = self.finite("w", self.params.w)?;
        if w <= 0.0 {
            return Err(self.invalid("w", w, "must be > 0 (a [0,0] window is singular)"));
        }
        if self.kind.integer_window() && w.fract() != 0.0 {
            return Err(self.invalid("w", w, "must be a whole number of days"));
        }
        Ok(Interval::new(0.0, w).expect("0 < w < inf"))
    }

    fn epsilon(&self) -> Result<f64, PropertyError> {
        let eps = self.finite("epsilon", self.params.epsilon)?;
        if eps < 0.0 {
            return Err(self.invalid("epsilon", eps, "must be >= 0"));
        }
        Ok(eps)
    }
}
