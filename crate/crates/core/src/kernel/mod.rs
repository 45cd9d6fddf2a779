//! The trusted proof checker.
//!
//! A proof is a formula sequence in which every line is justified as a
//! theory member, a logical axiom, a ground fact, modus ponens from two
//! earlier lines, or generalization of an earlier line. Verification infers
//! justifications in the fixed priority order In, Lambda, Zfc, Mp, Gen,
//! searching Mp/Gen indices in ascending order, so the proof type of a
//! verified proof is a function of the theory and the sequence.

mod lambda;
mod zfc;

pub use lambda::{check_lambda, lambda_outcome, LambdaOutcome};
pub use zfc::check_zfc;

use crate::encoding::{al_member_fast, al_member_seq, MembershipCost, TableauTheory};
use crate::formula::{Formula, FormulaSequence};
use crate::KernelMode;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

/// A theory a proof can be checked against: a tableau theory with its
/// arithmetic fast path, or an explicit finite formula sequence scanned
/// literally.
#[derive(Debug, Clone, Copy)]
pub enum TheoryRef<'a> {
    Tableau(&'a TableauTheory),
    Explicit(&'a FormulaSequence),
}

impl<'a> TheoryRef<'a> {
    /// Membership with the cost model used by checker replays: position
    /// arithmetic for tableau theories, a literal scan otherwise.
    pub fn member(&self, phi: &Formula) -> (bool, MembershipCost) {
        match self {
            TheoryRef::Tableau(t) => al_member_fast(phi, t),
            TheoryRef::Explicit(seq) => al_member_seq(phi, seq),
        }
    }

    pub fn iter_formulas(&self) -> Box<dyn Iterator<Item = &Formula> + '_> {
        match self {
            TheoryRef::Tableau(t) => Box::new(t.iter()),
            TheoryRef::Explicit(seq) => Box::new(seq.iter()),
        }
    }
}

/// Per-line justification. `Mp(j, k)` cites the implication line `j` and
/// the antecedent line `k`; `Gen(j, x)` universally closes line `j` in `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckerStep {
    In,
    Lambda,
    Zfc,
    Mp(usize, usize),
    Gen(usize, String),
}

impl fmt::Display for CheckerStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckerStep::In => write!(f, "IN"),
            CheckerStep::Lambda => write!(f, "LAMBDA"),
            CheckerStep::Zfc => write!(f, "ZFC"),
            CheckerStep::Mp(j, k) => write!(f, "MP {j} {k}"),
            CheckerStep::Gen(j, x) => write!(f, "GEN {j} {x}"),
        }
    }
}

/// The checker sequence of a verified proof, one step per line. Empty
/// exactly when verification failed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProofType(pub Vec<CheckerStep>);

impl ProofType {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn steps(&self) -> &[CheckerStep] {
        &self.0
    }
}

/// Component-wise equality of checker sequences, including Mp/Gen indices.
pub fn same_type(a: &ProofType, b: &ProofType) -> bool {
    a == b
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyFailure {
    #[error("line {line}: no justification applies{hint}")]
    Unjustified { line: usize, hint: String },
    #[error("line {line}: stored justification {step} does not check")]
    BadStoredStep { line: usize, step: String },
    #[error("last formula does not match the goal")]
    GoalMismatch,
    #[error("proof is empty")]
    EmptyProof,
}

impl VerifyFailure {
    pub fn line(&self) -> usize {
        match self {
            VerifyFailure::Unjustified { line, .. } | VerifyFailure::BadStoredStep { line, .. } => {
                *line
            }
            _ => 0,
        }
    }
}

struct LineIndex<'a> {
    /// First line holding each formula.
    first: HashMap<&'a Formula, usize>,
    /// Implication lines keyed by consequent, ascending.
    by_consequent: HashMap<&'a Formula, Vec<usize>>,
}

impl<'a> LineIndex<'a> {
    fn new() -> Self {
        LineIndex { first: HashMap::new(), by_consequent: HashMap::new() }
    }

    fn insert(&mut self, i: usize, phi: &'a Formula) {
        self.first.entry(phi).or_insert(i);
        if let Formula::Imp(_, consequent) = phi {
            self.by_consequent.entry(consequent).or_default().push(i);
        }
    }

    /// Least `(j, k)` with `pi(j) = pi(k) -> phi`.
    fn find_mp(&self, pi: &FormulaSequence, phi: &Formula) -> Option<(usize, usize)> {
        for &j in self.by_consequent.get(phi)? {
            let Formula::Imp(antecedent, _) = &pi[j] else { unreachable!() };
            if let Some(&k) = self.first.get(&**antecedent) {
                return Some((j, k));
            }
        }
        None
    }

    fn find_gen(&self, phi: &Formula) -> Option<(usize, String)> {
        let Formula::Forall(x, body) = phi else {
            return None;
        };
        self.first.get(&**body).map(|&j| (j, x.clone()))
    }
}

/// Verifies a proof against a theory, inferring one justification per line
/// in the fixed priority order, and optionally checking the goal. Returns
/// the proof type on success and the first unjustifiable line on failure.
pub fn verify(
    theory: TheoryRef,
    pi: &FormulaSequence,
    goal: Option<&Formula>,
    mode: KernelMode,
) -> Result<ProofType, VerifyFailure> {
    if pi.is_empty() {
        return Err(VerifyFailure::EmptyProof);
    }
    let mut steps = Vec::with_capacity(pi.len());
    let mut index = LineIndex::new();
    for (i, phi) in pi.iter().enumerate() {
        let step = if theory.member(phi).0 {
            CheckerStep::In
        } else {
            match lambda_outcome(phi, mode) {
                LambdaOutcome::Matched => CheckerStep::Lambda,
                outcome => {
                    if check_zfc(phi) {
                        CheckerStep::Zfc
                    } else if let Some((j, k)) = index.find_mp(pi, phi) {
                        CheckerStep::Mp(j, k)
                    } else if let Some((j, x)) = index.find_gen(phi) {
                        CheckerStep::Gen(j, x)
                    } else {
                        let hint = if outcome == LambdaOutcome::SkeletonTooLarge {
                            " (tautology skeleton too large)".to_string()
                        } else {
                            String::new()
                        };
                        return Err(VerifyFailure::Unjustified { line: i, hint });
                    }
                }
            }
        };
        steps.push(step);
        index.insert(i, phi);
    }
    if let Some(goal) = goal {
        if pi.get(pi.len() - 1) != Some(goal) {
            return Err(VerifyFailure::GoalMismatch);
        }
    }
    Ok(ProofType(steps))
}

/// The proof type as a total function: the inferred checker sequence, or
/// the empty sequence when the proof does not verify.
pub fn prooftype(theory: TheoryRef, pi: &FormulaSequence, mode: KernelMode) -> ProofType {
    verify(theory, pi, None, mode).unwrap_or_default()
}

/// Re-checks stored justifications line by line without re-inference.
pub fn recheck(
    theory: TheoryRef,
    pi: &FormulaSequence,
    ptype: &ProofType,
    goal: Option<&Formula>,
    mode: KernelMode,
) -> Result<(), VerifyFailure> {
    if pi.is_empty() {
        return Err(VerifyFailure::EmptyProof);
    }
    if pi.len() != ptype.len() {
        return Err(VerifyFailure::BadStoredStep {
            line: ptype.len().min(pi.len()),
            step: "missing".to_string(),
        });
    }
    for (i, (phi, step)) in pi.iter().zip(ptype.steps()).enumerate() {
        let ok = match step {
            CheckerStep::In => theory.member(phi).0,
            CheckerStep::Lambda => check_lambda(phi, mode),
            CheckerStep::Zfc => check_zfc(phi),
            CheckerStep::Mp(j, k) => {
                *j < i && *k < i && pi[*j] == Formula::imp(pi[*k].clone(), phi.clone())
            }
            CheckerStep::Gen(j, x) => *j < i && *phi == Formula::forall(x, pi[*j].clone()),
        };
        if !ok {
            return Err(VerifyFailure::BadStoredStep { line: i, step: step.to_string() });
        }
    }
    if let Some(goal) = goal {
        if pi.get(pi.len() - 1) != Some(goal) {
            return Err(VerifyFailure::GoalMismatch);
        }
    }
    Ok(())
}

/// A verified proof packaged with its checker sequence, replayable against
/// other theories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjointChecker {
    proof: FormulaSequence,
    ptype: ProofType,
}

impl AdjointChecker {
    /// Verifies `pi` against its originating theory and packages the
    /// resulting checker sequence.
    pub fn from_proof(
        theory: TheoryRef,
        pi: FormulaSequence,
        mode: KernelMode,
    ) -> Result<AdjointChecker, VerifyFailure> {
        let ptype = verify(theory, &pi, None, mode)?;
        Ok(AdjointChecker { proof: pi, ptype })
    }

    pub fn from_parts(proof: FormulaSequence, ptype: ProofType) -> AdjointChecker {
        AdjointChecker { proof, ptype }
    }

    pub fn proof(&self) -> &FormulaSequence {
        &self.proof
    }

    pub fn ptype(&self) -> &ProofType {
        &self.ptype
    }

    /// Formulas of the In lines, in line order.
    pub fn in_formulas(&self) -> impl Iterator<Item = &Formula> {
        self.proof
            .iter()
            .zip(self.ptype.steps())
            .filter(|(_, s)| matches!(s, CheckerStep::In))
            .map(|(f, _)| f)
    }
}

/// Outcome of replaying a checker against a theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Replay {
    pub accepted: bool,
    /// Formula-equality tests spent on membership probes.
    pub comparisons: MembershipCost,
}

/// Replays a checker. Lambda/Zfc/Mp/Gen steps depend only on the stored
/// proof, which was verified at construction, so only the In steps consult
/// the theory. Every In step is probed (no short-circuit), making the
/// comparison count a function of the checker and the machine alone.
pub fn adjoint_check(ck: &AdjointChecker, theory: TheoryRef) -> Replay {
    let mut accepted = true;
    let mut comparisons = 0;
    for phi in ck.in_formulas() {
        let (member, cost) = theory.member(phi);
        comparisons += cost;
        if !member {
            accepted = false;
        }
    }
    Replay { accepted, comparisons }
}

/// The replay comparison count of this checker against any theory of the
/// machine. Probe costs are input-independent, so the bound is exact.
pub fn replay_cost_bound(ck: &AdjointChecker, machine: &crate::machine::TuringMachine) -> usize {
    let def = crate::encoding::build_def_m(machine);
    let probe = TableauTheory::with_def(machine, &def, &[]);
    ck.in_formulas().map(|phi| al_member_fast(phi, &probe).1).sum()
}

/// The input formulas a proof consumed, and their conjunction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyInfo {
    /// Members of the proof that lie in the input part, in theory order,
    /// deduplicated.
    pub keyset: Vec<Formula>,
    /// Conjunction of the keyset in theory order; `0 = 0` when empty.
    pub keyinfo: Formula,
}

/// Computes the key information of a proof over its originating theory.
pub fn key_info(pi: &FormulaSequence, theory: &TableauTheory) -> KeyInfo {
    let lines: std::collections::HashSet<&Formula> = pi.iter().collect();
    let keyset: Vec<Formula> =
        theory.input_part().iter().filter(|f| lines.contains(f)).cloned().collect();
    let keyinfo = if keyset.is_empty() {
        Formula::eq(crate::formula::Term::num(0), crate::formula::Term::num(0))
    } else {
        Formula::conj(keyset.clone())
    };
    KeyInfo { keyset, keyinfo }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::TableauTheory;
    use crate::fixtures;
    use crate::formula::{parse_formula, Term};
    use crate::machine::parse_bits;

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    fn explicit(formulas: &[&str]) -> FormulaSequence {
        FormulaSequence::from(formulas.iter().map(|t| f(t)).collect::<Vec<_>>())
    }

    #[test]
    fn three_line_hand_proof() {
        let alpha = "$t_{0,0} = (>,q0,1)$";
        let beta = "$t_{9,9} = (_,p,0)$";
        let imp = format!("$({} \\to {})$", &alpha[1..alpha.len() - 1], &beta[1..beta.len() - 1]);
        let theory = explicit(&[alpha, &imp]);
        let pi = explicit(&[alpha, &imp, beta]);
        let ptype =
            verify(TheoryRef::Explicit(&theory), &pi, Some(&f(beta)), KernelMode::Paper).unwrap();
        assert_eq!(ptype.steps(), &[CheckerStep::In, CheckerStep::In, CheckerStep::Mp(1, 0)]);
    }

    #[test]
    fn unjustified_line_is_reported_first() {
        let theory = explicit(&["$t_{0,0} = (>,q0,1)$"]);
        let pi = explicit(&["$t_{4,4} = (_,p,0)$"]);
        let failure = verify(TheoryRef::Explicit(&theory), &pi, None, KernelMode::Paper);
        assert_eq!(failure.unwrap_err().line(), 0);
    }

    #[test]
    fn goal_mismatch_is_reported() {
        let theory = explicit(&["$t_{0,0} = (>,q0,1)$"]);
        let pi = explicit(&["$t_{0,0} = (>,q0,1)$"]);
        let failure = verify(
            TheoryRef::Explicit(&theory),
            &pi,
            Some(&f("$t_{1,1} = (_,p,0)$")),
            KernelMode::Paper,
        );
        assert!(matches!(failure, Err(VerifyFailure::GoalMismatch)));
    }

    #[test]
    fn prooftype_is_empty_on_failure() {
        let theory = explicit(&["$t_{0,0} = (>,q0,1)$"]);
        let pi = explicit(&["$t_{4,4} = (_,p,0)$"]);
        assert!(prooftype(TheoryRef::Explicit(&theory), &pi, KernelMode::Paper).is_empty());
    }

    #[test]
    fn recheck_accepts_inferred_types_and_rejects_corruption() {
        let theory =
            explicit(&["$t_{0,0} = (>,q0,1)$", "$(t_{0,0} = (>,q0,1) \\to t_{1,1} = (_,p,0))$"]);
        let pi = explicit(&[
            "$t_{0,0} = (>,q0,1)$",
            "$(t_{0,0} = (>,q0,1) \\to t_{1,1} = (_,p,0))$",
            "$t_{1,1} = (_,p,0)$",
        ]);
        let t = verify(TheoryRef::Explicit(&theory), &pi, None, KernelMode::Paper).unwrap();
        recheck(TheoryRef::Explicit(&theory), &pi, &t, None, KernelMode::Paper).unwrap();
        let mut bad = t.clone();
        bad.0[2] = CheckerStep::Mp(0, 1);
        let e = recheck(TheoryRef::Explicit(&theory), &pi, &bad, None, KernelMode::Paper);
        assert_eq!(e.unwrap_err().line(), 2);
    }

    #[test]
    fn generalization_steps_verify() {
        let theory = explicit(&["$\\forall i t_{i,0} = (>,q0,1)$"]);
        let pi = explicit(&[
            "$t_{3,3} = t_{3,3}$",
            "$\\forall m t_{3,3} = t_{3,3}$",
        ]);
        let t = verify(TheoryRef::Explicit(&theory), &pi, None, KernelMode::Paper).unwrap();
        assert_eq!(
            t.steps(),
            &[CheckerStep::Lambda, CheckerStep::Gen(0, "m".to_string())]
        );
    }

    #[test]
    fn adjoint_replay_probes_membership_in_new_theories() {
        let m = fixtures::m_firstbit();
        let bit = f("$t_{0,1} = (1,q0,0)$");
        let t1 = TableauTheory::new(&m, &parse_bits("1").unwrap());
        let t0 = TableauTheory::new(&m, &parse_bits("0").unwrap());
        let pi = FormulaSequence::from(vec![bit]);
        let ck =
            AdjointChecker::from_proof(TheoryRef::Tableau(&t1), pi, KernelMode::Paper).unwrap();
        assert!(adjoint_check(&ck, TheoryRef::Tableau(&t1)).accepted);
        assert!(!adjoint_check(&ck, TheoryRef::Tableau(&t0)).accepted);
        let t1long = TableauTheory::new(&m, &parse_bits("1011").unwrap());
        assert!(adjoint_check(&ck, TheoryRef::Tableau(&t1long)).accepted);
    }

    #[test]
    fn key_info_collects_input_members_in_theory_order() {
        let m = fixtures::m_const1();
        let theory = TableauTheory::new(&m, &[]);
        let pi = FormulaSequence::from(vec![
            theory.input_part()[2].clone(),
            theory.input_part()[0].clone(),
            theory.def_part()[0].clone(),
        ]);
        let ki = key_info(&pi, &theory);
        assert_eq!(
            ki.keyset,
            vec![theory.input_part()[0].clone(), theory.input_part()[2].clone()]
        );
        let pi_def_only = FormulaSequence::from(vec![theory.def_part()[0].clone()]);
        let ki = key_info(&pi_def_only, &theory);
        assert!(ki.keyset.is_empty());
        assert_eq!(ki.keyinfo, Formula::eq(Term::num(0), Term::num(0)));
    }
}
