use std::fmt::Write;

use crate::formula::{CmpOp, Expr, Formula, Interval, DEFAULT_EQ_TOLERANCE};

/// Renders `f` in the textual language. Operands of connectives are always
/// parenthesised, so `parse_formula(&print_formula(f)) == Ok(f)` for any
/// formula whose channel names are identifiers or `name(arg)`.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e);
    out
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Atom(p) => {
            write_expr(out, &p.lhs);
            let _ = write!(out, " {} ", p.op.symbol());
            write_expr(out, &p.rhs);
            if matches!(p.op, CmpOp::Eq | CmpOp::Ne) && p.eq_tolerance() != DEFAULT_EQ_TOLERANCE {
                let _ = write!(out, " ~ {}", p.eq_tolerance());
            }
        }
        Formula::Not(g) => {
            out.push('!');
            group(out, g);
        }
        Formula::And(a, b) => binary(out, a, " & ", b),
        Formula::Or(a, b) => binary(out, a, " | ", b),
        Formula::Implies(a, b) => binary(out, a, " -> ", b),
        Formula::Until(interval, a, b) => {
            group(out, a);
            out.push_str(" U");
            write_interval(out, interval);
            out.push(' ');
            group(out, b);
        }
        Formula::Eventually(interval, g) => {
            out.push('F');
            write_interval(out, interval);
            group(out, g);
        }
        Formula::Globally(interval, g) => {
            out.push('G');
            write_interval(out, interval);
            group(out, g);
        }
    }
}

fn group(out: &mut String, f: &Formula) {
    out.push('(');
    write_formula(out, f);
    out.push(')');
}

fn binary(out: &mut String, a: &Formula, op: &str, b: &Formula) {
    group(out, a);
    out.push_str(op);
    group(out, b);
}

fn write_interval(out: &mut String, interval: &Interval) {
    if !interval.is_unbounded_from_zero() {
        let _ = write!(out, "{interval}");
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match e {
        Expr::Const(c) => {
            let _ = write!(out, "{c}");
        }
        Expr::Var(name) => out.push_str(name),
        Expr::Neg(a) => {
            out.push_str("-(");
            write_expr(out, a);
            out.push(')');
        }
        Expr::Abs(a) => {
            out.push_str("abs(");
            write_expr(out, a);
            out.push(')');
        }
        Expr::Add(a, b) => arith(out, a, " + ", b),
        Expr::Sub(a, b) => arith(out, a, " - ", b),
        Expr::Mul(a, b) => arith(out, a, " * ", b),
    }
}

fn arith(out: &mut String, a: &Expr, op: &str, b: &Expr) {
    out.push('(');
    write_expr(out, a);
    out.push_str(op);
    write_expr(out, b);
    out.push(')');
}
