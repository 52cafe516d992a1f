//! Signal temporal logic monitoring for ranking signals.
//!
//! Daily ranking positions of a product are treated as a signal and
//! classified against temporal formulas such as "the position only improves
//! during the first three days" or "every stretch of missing data ends within
//! three days".
//!
//! * [`trace`]: sampled channels and channel sets.
//! * [`formula`]: the formula tree, intervals and desugaring.
//! * [`eval`]: a reference evaluator and a linear-time evaluator.
//! * [`parser`]: the textual formula language.
//! * [`props`]: the library of ranking-signal properties.
//! * [`ingest`]: dataset loading, derivative channels and synthetic data.
//! * [`analytics`]: satisfaction rates, metric averages, grounded expansions
//!   and a k-means baseline.

pub mod analytics;
pub mod eval;
pub mod formula;
pub mod ingest;
pub mod parser;
pub mod props;
pub mod trace;

#[cfg(any(test, feature = "testgen"))]
pub mod testgen;

pub use eval::{eval_fast, eval_naive, EvalError, Verdict};
pub use formula::{desugar, CmpOp, Expr, Formula, Interval, Predicate};
pub use parser::{parse_formula, print_formula, ParseError};
pub use props::{build, default_library, NamedFormula, PropertyKind, PropertyParams, PropertySpec};
pub use trace::{Day, Trace, TraceSet};
