//! Recognition of logical axioms.
//!
//! The seven base groups are admitted in both kernel modes:
//! 1. propositional tautologies over the maximal non-propositional
//!    subformulas,
//! 2. `\forall x a -> a[t/x]`,
//! 3. `\forall x (a -> b) -> (\forall x a -> \forall x b)`,
//! 4. `a -> \forall x a` with `x` not free in `a`,
//! 5. `t = t`,
//! 6. `(u = v) -> (a -> b)` for atomic `a`, `b` with `b` obtained from `a`
//!    by replacing one occurrence of `u` by `v`,
//! 7. `a[t/x] -> \exists x a`.
//!
//! Groups 5 and 6 are read with arbitrary terms in place of `u`, `v`;
//! without that reading no finite axiom set here could move between a
//! projection term and its value. Paper mode adds three derived schemas:
//! iterated instantiation through a quantifier prefix, extraction of one
//! conjunct under a quantified implication, and resolution of a projection
//! against a known square content.

use super::zfc;
use crate::formula::{substitute, substitute_many, sym_term, Formula, Rel, Term};
use crate::KernelMode;
use std::collections::HashMap;

const MAX_TAUT_ATOMS: usize = 20;

/// Outcome of the recognizer, used for error reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaOutcome {
    Matched,
    NoMatch,
    /// The tautology check was skipped: more than `MAX_TAUT_ATOMS` distinct
    /// atoms in the propositional skeleton.
    SkeletonTooLarge,
}

/// True iff the formula is a logical axiom of the given mode.
pub fn check_lambda(f: &Formula, mode: KernelMode) -> bool {
    lambda_outcome(f, mode) == LambdaOutcome::Matched
}

pub fn lambda_outcome(f: &Formula, mode: KernelMode) -> LambdaOutcome {
    let taut = tautology(f);
    if taut == Some(true) {
        return LambdaOutcome::Matched;
    }
    let base = instantiation(f, false)
        || distribution(f)
        || vacuous_generalization(f)
        || reflexivity(f)
        || replacement(f)
        || existential_intro(f);
    let extended = mode == KernelMode::Paper
        && (instantiation(f, true) || conjunct_extraction(f) || projection_resolution(f));
    if base || extended {
        LambdaOutcome::Matched
    } else if taut.is_none() {
        LambdaOutcome::SkeletonTooLarge
    } else {
        LambdaOutcome::NoMatch
    }
}

/// Group 1. `None` means the skeleton was too large to decide.
fn tautology(f: &Formula) -> Option<bool> {
    let mut atoms: Vec<&Formula> = Vec::new();
    if !collect_atoms(f, &mut atoms) {
        return None;
    }
    let n = atoms.len();
    for assignment in 0u32..(1 << n) {
        if !eval_skeleton(f, &atoms, assignment) {
            return Some(false);
        }
    }
    Some(true)
}

fn is_atom(f: &Formula) -> bool {
    matches!(f, Formula::Cmp { .. } | Formula::Forall(..) | Formula::Exists(..))
}

fn collect_atoms<'a>(f: &'a Formula, atoms: &mut Vec<&'a Formula>) -> bool {
    if is_atom(f) {
        if !atoms.contains(&f) {
            if atoms.len() >= MAX_TAUT_ATOMS {
                return false;
            }
            atoms.push(f);
        }
        return true;
    }
    match f {
        Formula::Not(inner) => collect_atoms(inner, atoms),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Imp(l, r) => {
            collect_atoms(l, atoms) && collect_atoms(r, atoms)
        }
        _ => unreachable!(),
    }
}

fn eval_skeleton(f: &Formula, atoms: &[&Formula], assignment: u32) -> bool {
    if is_atom(f) {
        let idx = atoms.iter().position(|a| *a == f).unwrap();
        return assignment & (1 << idx) != 0;
    }
    match f {
        Formula::Not(inner) => !eval_skeleton(inner, atoms, assignment),
        Formula::And(l, r) => {
            eval_skeleton(l, atoms, assignment) && eval_skeleton(r, atoms, assignment)
        }
        Formula::Or(l, r) => {
            eval_skeleton(l, atoms, assignment) || eval_skeleton(r, atoms, assignment)
        }
        Formula::Imp(l, r) => {
            !eval_skeleton(l, atoms, assignment) || eval_skeleton(r, atoms, assignment)
        }
        _ => unreachable!(),
    }
}

/// Candidate witnesses for `pattern[t/var] = target`, found by walking the
/// two formulas in parallel. The caller confirms each candidate by an
/// actual substitution, so discovery may overapproximate.
fn candidate_terms(pattern: &Formula, target: &Formula, var: &str) -> Vec<Term> {
    let mut out = Vec::new();
    walk_formula(pattern, target, var, false, &mut out);
    out.dedup();
    out
}

fn walk_formula(pat: &Formula, tgt: &Formula, var: &str, shadowed: bool, out: &mut Vec<Term>) {
    match (pat, tgt) {
        (Formula::Cmp { lhs: pl, rhs: pr, .. }, Formula::Cmp { lhs: tl, rhs: tr, .. }) => {
            walk_term(pl, tl, var, shadowed, out);
            walk_term(pr, tr, var, shadowed, out);
        }
        (Formula::Not(p), Formula::Not(t)) => walk_formula(p, t, var, shadowed, out),
        (Formula::And(pl, pr), Formula::And(tl, tr))
        | (Formula::Or(pl, pr), Formula::Or(tl, tr))
        | (Formula::Imp(pl, pr), Formula::Imp(tl, tr)) => {
            walk_formula(pl, tl, var, shadowed, out);
            walk_formula(pr, tr, var, shadowed, out);
        }
        (Formula::Forall(pv, pb), Formula::Forall(_, tb))
        | (Formula::Exists(pv, pb), Formula::Exists(_, tb)) => {
            walk_formula(pb, tb, var, shadowed || pv == var, out);
        }
        _ => {}
    }
}

fn walk_term(pat: &Term, tgt: &Term, var: &str, shadowed: bool, out: &mut Vec<Term>) {
    if shadowed {
        return;
    }
    match (pat, tgt) {
        (Term::Var(name), t) if name == var => {
            if !out.contains(t) {
                out.push(t.clone());
            }
        }
        // An offset of the substituted variable may have been normalized
        // into a plain numeral on the target side.
        (Term::Offset { base, delta }, Term::Num(m)) => {
            if **base == Term::Var(var.to_string()) {
                let n = if *delta == 1 { m.checked_sub(1) } else { m.checked_add(1) };
                if let Some(n) = n {
                    let t = Term::Num(n);
                    if !out.contains(&t) {
                        out.push(t);
                    }
                }
            }
        }
        (Term::Offset { base: pb, .. }, Term::Offset { base: tb, .. }) => {
            walk_term(pb, tb, var, shadowed, out)
        }
        (Term::Square { row: pr, col: pc }, Term::Square { row: tr, col: tc }) => {
            walk_term(pr, tr, var, shadowed, out);
            walk_term(pc, tc, var, shadowed, out);
        }
        (Term::Triple { sym: ps, .. }, Term::Triple { sym: ts, .. }) => {
            walk_term(ps, ts, var, shadowed, out)
        }
        (Term::Proj(p), Term::Proj(t)) => walk_term(p, t, var, shadowed, out),
        _ => {}
    }
}

/// Groups 2 and, in paper mode, 2': `\forall x1 .. \forall xn a -> a[..]`.
fn instantiation(f: &Formula, iterated: bool) -> bool {
    let Formula::Imp(lhs, rhs) = f else {
        return false;
    };
    let mut vars: Vec<&str> = Vec::new();
    let mut body: &Formula = lhs;
    while let Formula::Forall(v, inner) = body {
        vars.push(v);
        body = inner;
        let depth_ok = if iterated { true } else { vars.len() == 1 };
        if depth_ok && try_instance(body, &vars, rhs) {
            return true;
        }
        if !iterated {
            break;
        }
    }
    false
}

/// Checks whether `target = body[t1/v1, .., tn/vn]` for some terms.
fn try_instance(body: &Formula, vars: &[&str], target: &Formula) -> bool {
    let mut candidates: Vec<Vec<Term>> = Vec::with_capacity(vars.len());
    for v in vars {
        let mut c = candidate_terms(body, target, v);
        if c.is_empty() {
            // The variable may not occur; any closed instance is fine.
            c.push(Term::Num(0));
        }
        if c.len() > 8 {
            c.truncate(8);
        }
        candidates.push(c);
    }
    let mut picks = vec![0usize; vars.len()];
    loop {
        let mut map = HashMap::new();
        for (i, v) in vars.iter().enumerate() {
            map.insert(v.to_string(), candidates[i][picks[i]].clone());
        }
        if let Some(instance) = substitute_many(body, &map) {
            if &instance == target {
                return true;
            }
        }
        // Advance the odometer over candidate combinations.
        let mut pos = 0;
        loop {
            if pos == picks.len() {
                return false;
            }
            picks[pos] += 1;
            if picks[pos] < candidates[pos].len() {
                break;
            }
            picks[pos] = 0;
            pos += 1;
        }
    }
}

/// Group 3.
fn distribution(f: &Formula) -> bool {
    let Formula::Imp(lhs, rhs) = f else {
        return false;
    };
    let Formula::Forall(x, ab) = &**lhs else {
        return false;
    };
    let Formula::Imp(a, b) = &**ab else {
        return false;
    };
    let Formula::Imp(fa, fb) = &**rhs else {
        return false;
    };
    let (Formula::Forall(x1, a1), Formula::Forall(x2, b1)) = (&**fa, &**fb) else {
        return false;
    };
    x == x1 && x == x2 && a == a1 && b == b1
}

/// Group 4.
fn vacuous_generalization(f: &Formula) -> bool {
    let Formula::Imp(lhs, rhs) = f else {
        return false;
    };
    let Formula::Forall(x, body) = &**rhs else {
        return false;
    };
    **body == **lhs && !crate::formula::free_vars(lhs).contains(x)
}

/// Group 5.
fn reflexivity(f: &Formula) -> bool {
    matches!(f, Formula::Cmp { lhs, rel: Rel::Eq, rhs } if lhs == rhs)
}

/// Replaces occurrence number `target_idx` (0-based, left to right) of `u`
/// in `t` by `v`; `seen` counts occurrences already passed.
fn replace_nth(t: &Term, u: &Term, v: &Term, target_idx: usize, seen: &mut usize) -> Term {
    if t == u {
        let idx = *seen;
        *seen += 1;
        if idx == target_idx {
            return v.clone();
        }
    }
    match t {
        Term::Offset { base, delta } => Term::Offset {
            base: Box::new(replace_nth(base, u, v, target_idx, seen)),
            delta: *delta,
        },
        Term::Square { row, col } => Term::Square {
            row: Box::new(replace_nth(row, u, v, target_idx, seen)),
            col: Box::new(replace_nth(col, u, v, target_idx, seen)),
        },
        Term::Triple { sym, state, flag } => Term::Triple {
            sym: Box::new(replace_nth(sym, u, v, target_idx, seen)),
            state: state.clone(),
            flag: *flag,
        },
        Term::Proj(inner) => Term::Proj(Box::new(replace_nth(inner, u, v, target_idx, seen))),
        other => other.clone(),
    }
}

fn count_occurrences(t: &Term, u: &Term) -> usize {
    let mut n = if t == u { 1 } else { 0 };
    match t {
        Term::Offset { base, .. } => n += count_occurrences(base, u),
        Term::Square { row, col } => n += count_occurrences(row, u) + count_occurrences(col, u),
        Term::Triple { sym, .. } => n += count_occurrences(sym, u),
        Term::Proj(inner) => n += count_occurrences(inner, u),
        _ => {}
    }
    n
}

/// All atomic formulas obtained from `a` by replacing exactly one
/// occurrence of `u` by `v`.
fn single_replacements(a: &Formula, u: &Term, v: &Term) -> Vec<Formula> {
    let Formula::Cmp { lhs, rel, rhs } = a else {
        return Vec::new();
    };
    let total = count_occurrences(lhs, u) + count_occurrences(rhs, u);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut seen = 0usize;
        let new_lhs = replace_nth(lhs, u, v, idx, &mut seen);
        let new_rhs = replace_nth(rhs, u, v, idx, &mut seen);
        out.push(Formula::Cmp { lhs: new_lhs, rel: *rel, rhs: new_rhs });
    }
    out
}

/// Group 6.
fn replacement(f: &Formula) -> bool {
    let Formula::Imp(eq, ab) = f else {
        return false;
    };
    let Formula::Cmp { lhs: u, rel: Rel::Eq, rhs: v } = &**eq else {
        return false;
    };
    let Formula::Imp(a, b) = &**ab else {
        return false;
    };
    if !matches!(&**a, Formula::Cmp { .. }) || !matches!(&**b, Formula::Cmp { .. }) {
        return false;
    }
    single_replacements(a, u, v).contains(b)
}

/// Group 7.
fn existential_intro(f: &Formula) -> bool {
    let Formula::Imp(lhs, rhs) = f else {
        return false;
    };
    let Formula::Exists(x, body) = &**rhs else {
        return false;
    };
    let mut cands = candidate_terms(body, lhs, x);
    cands.push(Term::Num(0));
    cands
        .into_iter()
        .any(|t| substitute(body, x, &t).as_ref() == Some(lhs))
}

fn flatten_conj(f: &Formula) -> Vec<&Formula> {
    match f {
        Formula::And(l, r) => {
            let mut out = flatten_conj(l);
            out.extend(flatten_conj(r));
            out
        }
        other => vec![other],
    }
}

/// Paper schema 1': `\forall xs (a -> b1 /\ .. /\ bm) -> \forall xs (a -> bi)`.
fn conjunct_extraction(f: &Formula) -> bool {
    let Formula::Imp(lhs, rhs) = f else {
        return false;
    };
    let mut l: &Formula = lhs;
    let mut r: &Formula = rhs;
    loop {
        match (l, r) {
            (Formula::Forall(lv, lb), Formula::Forall(rv, rb)) if lv == rv => {
                l = lb;
                r = rb;
            }
            _ => break,
        }
    }
    let (Formula::Imp(la, lc), Formula::Imp(ra, rc)) = (l, r) else {
        return false;
    };
    if la != ra {
        return false;
    }
    let conjuncts = flatten_conj(lc);
    conjuncts.len() >= 2 && conjuncts.contains(&&**rc)
}

/// Paper schema 6': from a known square content, rewrite a projection of
/// that square to its symbol: `(sq = w) -> (a -> b)` where `w` is a closed
/// triple and `b` is `a` with one `\pi_M(sq)` occurrence replaced by the
/// symbol of `w`.
fn projection_resolution(f: &Formula) -> bool {
    let Formula::Imp(eq, ab) = f else {
        return false;
    };
    let Formula::Cmp { lhs: sq, rel: Rel::Eq, rhs: w } = &**eq else {
        return false;
    };
    if !matches!(sq, Term::Square { .. }) {
        return false;
    }
    let Some(zfc::GroundVal::Triple(sym, _, _)) = zfc::eval_term(w) else {
        return false;
    };
    let Formula::Imp(a, b) = &**ab else {
        return false;
    };
    if !matches!(&**a, Formula::Cmp { .. }) || !matches!(&**b, Formula::Cmp { .. }) {
        return false;
    }
    let proj = Term::Proj(Box::new(sq.clone()));
    single_replacements(a, &proj, &sym_term(sym)).contains(b)
}
