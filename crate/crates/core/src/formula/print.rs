//! Canonical rendering.
//!
//! One fixed serialization per formula: the whole formula is wrapped in a
//! single `$...$` pair, binary connectives always carry parentheses, scalar
//! comparisons (both sides index-valued) are parenthesized when they appear
//! as an operand of a connective or quantifier, and square/triple atoms are
//! never parenthesized. Offset terms render as `(i+1)` / `(i-1)`.

use super::{Formula, Term};

pub(super) fn render(f: &Formula) -> String {
    let mut out = String::from("$");
    fmt_formula(f, false, &mut out);
    out.push('$');
    out
}

fn is_scalar(t: &Term) -> bool {
    matches!(t, Term::Var(_) | Term::Num(_) | Term::Offset { .. })
}

fn fmt_formula(f: &Formula, operand: bool, out: &mut String) {
    match f {
        Formula::Cmp { lhs, rel, rhs } => {
            let parens = operand && is_scalar(lhs) && is_scalar(rhs);
            if parens {
                out.push('(');
            }
            fmt_term(lhs, out);
            out.push(' ');
            out.push_str(rel.text());
            out.push(' ');
            fmt_term(rhs, out);
            if parens {
                out.push(')');
            }
        }
        Formula::Not(inner) => {
            out.push_str("\\neg ");
            fmt_formula(inner, true, out);
        }
        Formula::And(l, r) => fmt_binary(l, "\\wedge", r, out),
        Formula::Or(l, r) => fmt_binary(l, "\\vee", r, out),
        Formula::Imp(l, r) => fmt_binary(l, "\\to", r, out),
        Formula::Forall(v, body) => {
            out.push_str("\\forall ");
            out.push_str(v);
            out.push(' ');
            fmt_formula(body, true, out);
        }
        Formula::Exists(v, body) => {
            out.push_str("\\exists ");
            out.push_str(v);
            out.push(' ');
            fmt_formula(body, true, out);
        }
    }
}

fn fmt_binary(l: &Formula, op: &str, r: &Formula, out: &mut String) {
    out.push('(');
    fmt_formula(l, true, out);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    fmt_formula(r, true, out);
    out.push(')');
}

fn fmt_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(name) => out.push_str(name),
        Term::Num(n) => out.push_str(&n.to_string()),
        Term::Offset { base, delta } => {
            out.push('(');
            fmt_term(base, out);
            out.push(if *delta >= 0 { '+' } else { '-' });
            out.push('1');
            out.push(')');
        }
        Term::Square { row, col } => {
            out.push_str("t_{");
            fmt_term(row, out);
            out.push(',');
            fmt_term(col, out);
            out.push('}');
        }
        Term::Triple { sym, state, flag } => {
            out.push('(');
            fmt_term(sym, out);
            out.push(',');
            out.push_str(state);
            out.push(',');
            out.push_str(if *flag == 0 { "0" } else { "1" });
            out.push(')');
        }
        Term::Proj(inner) => {
            out.push_str("\\pi_M(");
            fmt_term(inner, out);
            out.push(')');
        }
        Term::Sym(s) => out.push(s.glyph()),
    }
}
