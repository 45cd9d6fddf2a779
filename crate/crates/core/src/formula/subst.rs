//! Substitution and variable bookkeeping.
//!
//! Substitution evaluates ground offsets as it goes: replacing `j` by `99`
//! in `t_{(j+1),k}` yields `t_{100,k}`. Instantiated formulas therefore
//! carry plain numerals, which is the arithmetic the proof sections rely on.

use super::{Formula, Term};
use std::collections::{BTreeSet, HashMap};

/// Collapses `Num(n)+1` / `Num(n)-1` into a numeral. `0-1` is left alone.
pub fn normalize_term(t: Term) -> Term {
    match t {
        Term::Offset { base, delta } => {
            let base = normalize_term(*base);
            match base {
                Term::Num(n) if delta == 1 => Term::Num(n + 1),
                Term::Num(n) if delta == -1 && n > 0 => Term::Num(n - 1),
                other => Term::Offset { base: Box::new(other), delta },
            }
        }
        Term::Square { row, col } => Term::Square {
            row: Box::new(normalize_term(*row)),
            col: Box::new(normalize_term(*col)),
        },
        Term::Triple { sym, state, flag } => {
            Term::Triple { sym: Box::new(normalize_term(*sym)), state, flag }
        }
        Term::Proj(inner) => Term::Proj(Box::new(normalize_term(*inner))),
        other => other,
    }
}

fn subst_term(t: &Term, map: &HashMap<String, Term>) -> Term {
    let replaced = match t {
        Term::Var(name) => match map.get(name) {
            Some(repl) => repl.clone(),
            None => t.clone(),
        },
        Term::Num(_) | Term::Sym(_) => t.clone(),
        Term::Offset { base, delta } => {
            Term::Offset { base: Box::new(subst_term(base, map)), delta: *delta }
        }
        Term::Square { row, col } => Term::Square {
            row: Box::new(subst_term(row, map)),
            col: Box::new(subst_term(col, map)),
        },
        Term::Triple { sym, state, flag } => Term::Triple {
            sym: Box::new(subst_term(sym, map)),
            state: state.clone(),
            flag: *flag,
        },
        Term::Proj(inner) => Term::Proj(Box::new(subst_term(inner, map))),
    };
    normalize_term(replaced)
}

fn term_vars(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(name) => {
            out.insert(name.clone());
        }
        Term::Num(_) | Term::Sym(_) => {}
        Term::Offset { base, .. } => term_vars(base, out),
        Term::Square { row, col } => {
            term_vars(row, out);
            term_vars(col, out);
        }
        Term::Triple { sym, .. } => term_vars(sym, out),
        Term::Proj(inner) => term_vars(inner, out),
    }
}

fn collect_free(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match f {
        Formula::Cmp { lhs, rhs, .. } => {
            let mut vars = BTreeSet::new();
            term_vars(lhs, &mut vars);
            term_vars(rhs, &mut vars);
            for v in vars {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        }
        Formula::Not(inner) => collect_free(inner, bound, out),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
            collect_free(l, bound, out);
            collect_free(r, bound, out);
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            bound.push(v.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
    }
}

/// Free variables of a formula, sorted.
pub fn free_vars(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_free(f, &mut Vec::new(), &mut out);
    out
}

pub fn is_closed(f: &Formula) -> bool {
    free_vars(f).is_empty()
}

/// Simultaneous substitution of terms for free variables, with offset
/// normalization. Returns `None` if a substituted term would be captured by
/// a quantifier (never happens for closed replacement terms).
pub fn substitute_many(f: &Formula, map: &HashMap<String, Term>) -> Option<Formula> {
    if map.is_empty() {
        return Some(f.clone());
    }
    let mut term_var_cache: HashMap<String, BTreeSet<String>> = HashMap::new();
    for (v, t) in map {
        let mut vars = BTreeSet::new();
        term_vars(t, &mut vars);
        term_var_cache.insert(v.clone(), vars);
    }
    subst_formula(f, map, &term_var_cache, &mut Vec::new())
}

/// Substitution of one term for one free variable.
pub fn substitute(f: &Formula, var: &str, term: &Term) -> Option<Formula> {
    let mut map = HashMap::new();
    map.insert(var.to_string(), term.clone());
    substitute_many(f, &map)
}

fn subst_formula(
    f: &Formula,
    map: &HashMap<String, Term>,
    term_var_cache: &HashMap<String, BTreeSet<String>>,
    shadowed: &mut Vec<String>,
) -> Option<Formula> {
    Some(match f {
        Formula::Cmp { lhs, rel, rhs } => {
            let mut live = map.clone();
            for v in shadowed.iter() {
                live.remove(v);
            }
            Formula::Cmp { lhs: subst_term(lhs, &live), rel: *rel, rhs: subst_term(rhs, &live) }
        }
        Formula::Not(inner) => Formula::not(subst_formula(inner, map, term_var_cache, shadowed)?),
        Formula::And(l, r) => Formula::and(
            subst_formula(l, map, term_var_cache, shadowed)?,
            subst_formula(r, map, term_var_cache, shadowed)?,
        ),
        Formula::Or(l, r) => Formula::or(
            subst_formula(l, map, term_var_cache, shadowed)?,
            subst_formula(r, map, term_var_cache, shadowed)?,
        ),
        Formula::Imp(l, r) => Formula::imp(
            subst_formula(l, map, term_var_cache, shadowed)?,
            subst_formula(r, map, term_var_cache, shadowed)?,
        ),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            // Capture check: a replacement term for some still-live variable
            // must not mention the quantified variable.
            for (mv, vars) in term_var_cache {
                if mv != v && !shadowed.contains(mv) && vars.contains(v) {
                    let mut probe = BTreeSet::new();
                    collect_free(body, &mut vec![v.clone()], &mut probe);
                    if probe.contains(mv) {
                        return None;
                    }
                }
            }
            shadowed.push(v.clone());
            let new_body = subst_formula(body, map, term_var_cache, shadowed)?;
            shadowed.pop();
            match f {
                Formula::Forall(..) => Formula::Forall(v.clone(), Box::new(new_body)),
                _ => Formula::Exists(v.clone(), Box::new(new_body)),
            }
        }
    })
}
