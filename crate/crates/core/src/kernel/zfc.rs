//! The decidable ground-fact fragment.
//!
//! A formula passes when it is quantifier-free, every term evaluates to a
//! closed value (a natural number, a tape symbol, or a square content
//! triple), and the boolean combination of comparisons computes to true.
//! Projections of closed triples evaluate to their symbol, so facts like
//! `\pi_M((0,q,1)) = 0` are in the fragment.

use crate::formula::{Formula, Rel, TapeSymbol, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum GroundVal {
    Nat(u64),
    Sym(TapeSymbol),
    Triple(TapeSymbol, String, u8),
}

pub(crate) fn eval_term(t: &Term) -> Option<GroundVal> {
    let val = match t {
        Term::Num(n) => GroundVal::Nat(*n),
        Term::Sym(s) => GroundVal::Sym(*s),
        Term::Offset { base, delta } => match eval_term(base)? {
            GroundVal::Nat(n) if *delta == 1 => GroundVal::Nat(n + 1),
            GroundVal::Nat(n) if *delta == -1 && n > 0 => GroundVal::Nat(n - 1),
            _ => return None,
        },
        Term::Triple { sym, state, flag } => {
            let s = match eval_term(sym)? {
                GroundVal::Nat(0) => TapeSymbol::Zero,
                GroundVal::Nat(1) => TapeSymbol::One,
                GroundVal::Sym(s) => s,
                _ => return None,
            };
            GroundVal::Triple(s, state.clone(), *flag)
        }
        Term::Proj(inner) => match eval_term(inner)? {
            GroundVal::Triple(s, _, _) => GroundVal::Sym(s),
            _ => return None,
        },
        Term::Var(_) | Term::Square { .. } => return None,
    };
    // Bit symbols and the numerals 0/1 denote the same objects.
    Some(match val {
        GroundVal::Sym(TapeSymbol::Zero) => GroundVal::Nat(0),
        GroundVal::Sym(TapeSymbol::One) => GroundVal::Nat(1),
        other => other,
    })
}

fn compare(lhs: &GroundVal, rel: Rel, rhs: &GroundVal) -> Option<bool> {
    match (lhs, rhs) {
        (GroundVal::Nat(a), GroundVal::Nat(b)) => Some(match rel {
            Rel::Eq => a == b,
            Rel::Ne => a != b,
            Rel::Lt => a < b,
            Rel::Le => a <= b,
            Rel::Gt => a > b,
            Rel::Ge => a >= b,
        }),
        _ => match rel {
            Rel::Eq => Some(lhs == rhs),
            Rel::Ne => Some(lhs != rhs),
            _ => None,
        },
    }
}

/// Evaluates a closed quantifier-free formula; `None` when outside the
/// fragment.
pub(crate) fn eval_ground(f: &Formula) -> Option<bool> {
    match f {
        Formula::Cmp { lhs, rel, rhs } => compare(&eval_term(lhs)?, *rel, &eval_term(rhs)?),
        Formula::Not(inner) => Some(!eval_ground(inner)?),
        Formula::And(l, r) => Some(eval_ground(l)? && eval_ground(r)?),
        Formula::Or(l, r) => Some(eval_ground(l)? || eval_ground(r)?),
        Formula::Imp(l, r) => Some(!eval_ground(l)? || eval_ground(r)?),
        Formula::Forall(..) | Formula::Exists(..) => None,
    }
}

/// True ground facts of the fragment.
pub fn check_zfc(f: &Formula) -> bool {
    eval_ground(f) == Some(true)
}
