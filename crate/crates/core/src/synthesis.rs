//! Proof construction from computation tables.
//!
//! Each table cell gets a proof section deriving its concrete content.
//! Row-0 cells covered by the input part are one In line; deeper row-0
//! blank cells use the five-line blank-tail template; transition cells
//! instantiate the applicable rule at the head of the preceding row and,
//! where the rule frames the cell through a projection, resolve that
//! projection against the previously proved content of the square below.
//! Paper mode does the instantiation and extraction in single derived-axiom
//! steps; strict mode spells them out with the base axiom groups only.

use crate::encoding::{blank_tail_header, TableauTheory};
use crate::formula::{
    substitute_many, sym_term, Formula, FormulaSequence, Rel, TapeSymbol, Term,
};
use crate::kernel::{verify, TheoryRef, VerifyFailure};
use crate::machine::{
    build_table, bits_to_string, ComputationTable, Move, RunFailure, TuringMachine,
};
use crate::KernelMode;
use std::collections::{BinaryHeap, HashMap};
use thiserror::Error;

/// The goal of a normal proof: some row holds output `v` on cell 1 in the
/// halt state.
pub fn goal_formula(m: &TuringMachine, v: bool) -> Formula {
    let halt = m.state_name(m.halt());
    let sym = if v { TapeSymbol::One } else { TapeSymbol::Zero };
    Formula::exists(
        "i",
        Formula::eq(
            Term::square(Term::var("i"), Term::num(1)),
            Term::sym_triple(sym, halt, 1),
        ),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionKind {
    /// Row 0, column covered by the input part: the formula itself.
    AxiomCell,
    /// Row 0 past the input: derived from the blank-tail header.
    BlankTailCell,
    /// Rows below 0: derived from the preceding row through a rule.
    TransitionCell,
}

/// The proof fragment deriving one cell's content.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofSection {
    pub cell: (usize, usize),
    pub target: Formula,
    pub lines: FormulaSequence,
    pub kind: SectionKind,
}

fn cell_value(m: &TuringMachine, table: &ComputationTable, row: usize, col: usize) -> Term {
    let sq = table.square(row, col);
    Term::triple(sym_term(sq.sym), m.state_name(sq.state), sq.flag as u8)
}

fn cell_formula(m: &TuringMachine, table: &ComputationTable, row: usize, col: usize) -> Formula {
    Formula::eq(
        Term::square(Term::num(row as u64), Term::num(col as u64)),
        cell_value(m, table, row, col),
    )
}

fn inst_map(i_val: u64, j_val: u64) -> HashMap<String, Term> {
    let mut map = HashMap::new();
    map.insert("i".to_string(), Term::Num(i_val));
    map.insert("j".to_string(), Term::Num(j_val));
    map
}

fn instantiate(f: &Formula, map: &HashMap<String, Term>) -> Formula {
    substitute_many(f, map).expect("closed numerals never capture")
}

/// Destructures a rule formula into its quantifier body parts: the premise
/// and the flattened consequent conjuncts.
fn rule_parts(gamma: &Formula) -> (&Formula, Vec<&Formula>) {
    let Formula::Forall(_, body) = gamma else { panic!("rule shape") };
    let Formula::Forall(_, body) = &**body else { panic!("rule shape") };
    let Formula::Imp(premise, consequent) = &**body else { panic!("rule shape") };
    fn flatten(f: &Formula) -> Vec<&Formula> {
        match f {
            Formula::And(l, r) => {
                let mut out = flatten(l);
                out.extend(flatten(r));
                out
            }
            other => vec![other],
        }
    }
    (premise, flatten(consequent))
}

/// Which conjunct of the applicable rule settles column `col`.
enum CellRole {
    Written,
    Arrive,
    Frame,
}

struct RuleContext {
    gamma: Formula,
    /// Head position in the preceding row.
    head: usize,
    /// Where the head lands.
    new_head: usize,
    move_kind: Move,
    premise_inst: Formula,
}

fn rule_context(m: &TuringMachine, table: &ComputationTable, row: usize) -> RuleContext {
    let prev = row - 1;
    let head = table.head_of(prev);
    let sq = table.square(prev, head);
    let (p, b, mv) = m.rule(sq.state, sq.sym).expect("total transition map");
    let gamma = crate::encoding::transition_formula(m, sq.state, sq.sym, p, b, mv);
    let new_head = match mv {
        Move::L => head - 1,
        Move::S => head,
        Move::R => head + 1,
    };
    let premise_inst = cell_formula(m, table, prev, head);
    RuleContext { gamma, head, new_head, move_kind: mv, premise_inst }
}

impl RuleContext {
    fn role(&self, col: usize) -> CellRole {
        if col == self.head {
            CellRole::Written
        } else if self.move_kind != Move::S && col == self.new_head {
            CellRole::Arrive
        } else {
            CellRole::Frame
        }
    }

    /// Index of the conjunct serving a role, in the flattened rule body.
    fn conjunct_index(&self, role: &CellRole) -> usize {
        match (role, self.move_kind) {
            (CellRole::Written, _) => 0,
            (CellRole::Arrive, _) => 1,
            (CellRole::Frame, Move::S) => 1,
            (CellRole::Frame, _) => 2,
        }
    }
}

/// The projection-resolution tail: from `prev = (t_{r,c} = w)` turn
/// `raw = t_{row,col} = (\pi_M(t_{r,c}),p,fl)` into the concrete cell
/// formula. Paper mode uses the fused resolution axiom; strict mode walks
/// through reflexivity, two replacements, and a ground projection.
fn push_resolution(
    lines: &mut Vec<Formula>,
    prev_cell: &Formula,
    raw: &Formula,
    concrete: &Formula,
    mode: KernelMode,
) {
    match mode {
        KernelMode::Paper => {
            let bridge = Formula::imp(
                prev_cell.clone(),
                Formula::imp(raw.clone(), concrete.clone()),
            );
            lines.push(bridge);
            lines.push(Formula::imp(raw.clone(), concrete.clone()));
            lines.push(concrete.clone());
        }
        KernelMode::Strict => {
            let Formula::Cmp { lhs: _, rel: Rel::Eq, rhs: w } = prev_cell else {
                panic!("cell formula shape")
            };
            let Formula::Cmp { lhs: sq, .. } = prev_cell else { unreachable!() };
            let u = Term::Proj(Box::new(sq.clone()));
            let proj_w = Term::Proj(Box::new(w.clone()));
            let Term::Triple { sym, .. } = w else { panic!("cell value shape") };
            let x = (**sym).clone();
            let refl = Formula::eq(u.clone(), u.clone());
            let u_eq_projw = Formula::eq(u.clone(), proj_w.clone());
            let projw_eq_x = Formula::eq(proj_w.clone(), x.clone());
            let u_eq_x = Formula::eq(u.clone(), x.clone());
            lines.push(refl.clone());
            lines.push(Formula::imp(
                prev_cell.clone(),
                Formula::imp(refl.clone(), u_eq_projw.clone()),
            ));
            lines.push(Formula::imp(refl, u_eq_projw.clone()));
            lines.push(u_eq_projw.clone());
            lines.push(projw_eq_x.clone());
            lines.push(Formula::imp(
                projw_eq_x,
                Formula::imp(u_eq_projw.clone(), u_eq_x.clone()),
            ));
            lines.push(Formula::imp(u_eq_projw.clone(), u_eq_x.clone()));
            lines.push(u_eq_x.clone());
            lines.push(Formula::imp(u_eq_x, Formula::imp(raw.clone(), concrete.clone())));
            lines.push(Formula::imp(raw.clone(), concrete.clone()));
            lines.push(concrete.clone());
        }
    }
}

fn transition_section(
    m: &TuringMachine,
    table: &ComputationTable,
    row: usize,
    col: usize,
    mode: KernelMode,
) -> ProofSection {
    let ctx = rule_context(m, table, row);
    let role = ctx.role(col);
    let conjunct = ctx.conjunct_index(&role);
    let (premise, conjuncts) = rule_parts(&ctx.gamma);
    let chosen = conjuncts[conjunct].clone();
    let premise = premise.clone();
    let map = inst_map(row as u64 - 1, ctx.head as u64);
    let premise_inst = instantiate(&premise, &map);
    debug_assert_eq!(premise_inst, ctx.premise_inst);
    let chosen_inst = instantiate(&chosen, &map);
    let target = cell_formula(m, table, row, col);

    let mut lines: Vec<Formula> = Vec::new();
    match mode {
        KernelMode::Paper => {
            let extracted = Formula::forall(
                "i",
                Formula::forall("j", Formula::imp(premise.clone(), chosen.clone())),
            );
            lines.push(ctx.gamma.clone());
            lines.push(Formula::imp(ctx.gamma.clone(), extracted.clone()));
            lines.push(extracted.clone());
            let inst_imp = Formula::imp(premise_inst.clone(), chosen_inst.clone());
            lines.push(Formula::imp(extracted, inst_imp.clone()));
            lines.push(inst_imp);
            lines.push(chosen_inst.clone());
        }
        KernelMode::Strict => {
            let map_i: HashMap<String, Term> =
                [("i".to_string(), Term::Num(row as u64 - 1))].into_iter().collect();
            let Formula::Forall(_, gamma_body) = &ctx.gamma else { unreachable!() };
            let step1 = instantiate(gamma_body, &map_i);
            let Formula::Forall(_, step1_body) = &step1 else { unreachable!() };
            let map_j: HashMap<String, Term> =
                [("j".to_string(), Term::Num(ctx.head as u64))].into_iter().collect();
            let step2 = instantiate(step1_body, &map_j);
            lines.push(ctx.gamma.clone());
            lines.push(Formula::imp(ctx.gamma.clone(), step1.clone()));
            lines.push(step1.clone());
            lines.push(Formula::imp(step1, step2.clone()));
            lines.push(step2.clone());
            let inst_imp = Formula::imp(premise_inst.clone(), chosen_inst.clone());
            lines.push(Formula::imp(step2, inst_imp.clone()));
            lines.push(inst_imp);
            lines.push(chosen_inst.clone());
        }
    }

    match role {
        CellRole::Written => {
            debug_assert_eq!(*lines.last().unwrap(), target);
        }
        CellRole::Arrive => {
            let raw = lines.last().unwrap().clone();
            let prev_cell = cell_formula(m, table, row - 1, col);
            push_resolution(&mut lines, &prev_cell, &raw, &target, mode);
        }
        CellRole::Frame => {
            // The conjunct is universal over the framed column: instantiate
            // it at `col`, discharge the ground side condition, then resolve
            // the projection.
            let quantified = lines.last().unwrap().clone();
            let Formula::Forall(k, body) = &quantified else { panic!("frame conjunct shape") };
            let map_k: HashMap<String, Term> =
                [(k.clone(), Term::Num(col as u64))].into_iter().collect();
            let at_col = instantiate(body, &map_k);
            lines.push(Formula::imp(quantified.clone(), at_col.clone()));
            lines.push(at_col.clone());
            let Formula::Imp(side, raw) = &at_col else { panic!("frame instance shape") };
            lines.push((**side).clone());
            lines.push((**raw).clone());
            let prev_cell = cell_formula(m, table, row - 1, col);
            let raw = (**raw).clone();
            push_resolution(&mut lines, &prev_cell, &raw, &target, mode);
        }
    }

    ProofSection {
        cell: (row, col),
        target,
        lines: FormulaSequence::from(lines),
        kind: SectionKind::TransitionCell,
    }
}

fn blank_tail_section(
    m: &TuringMachine,
    table: &ComputationTable,
    input_len: usize,
    col: usize,
) -> ProofSection {
    let target = cell_formula(m, table, 0, col);
    let bound = input_len as u64 + 1;
    let side = Formula::cmp(Term::num(col as u64), Rel::Gt, Term::num(bound));
    let header = blank_tail_header(input_len);
    let Formula::Forall(j, body) = &header else { unreachable!() };
    let map: HashMap<String, Term> =
        [(j.clone(), Term::Num(col as u64))].into_iter().collect();
    let at_col = instantiate(body, &map);
    let lines = vec![
        side.clone(),
        header.clone(),
        Formula::imp(header, at_col.clone()),
        at_col,
        target.clone(),
    ];
    ProofSection {
        cell: (0, col),
        target,
        lines: FormulaSequence::from(lines),
        kind: SectionKind::BlankTailCell,
    }
}

/// Builds the proof section for one table cell.
pub fn build_sec(
    table: &ComputationTable,
    theory: &TableauTheory,
    row: usize,
    col: usize,
    mode: KernelMode,
) -> ProofSection {
    let m = theory.machine();
    if row == 0 {
        let input_len = theory.input().len();
        if col <= input_len + 1 {
            let target = cell_formula(m, table, 0, col);
            ProofSection {
                cell: (0, col),
                target: target.clone(),
                lines: FormulaSequence::from(vec![target]),
                kind: SectionKind::AxiomCell,
            }
        } else {
            blank_tail_section(m, table, theory.input().len(), col)
        }
    } else {
        transition_section(m, table, row, col, mode)
    }
}

/// The assembled proof of a run's output: one section per cell in row-major
/// order, then the closing implication into the existential goal.
#[derive(Debug, Clone)]
pub struct SpecialProof {
    pub sections: Vec<ProofSection>,
    pub closing: (Formula, Formula),
    pub proof: FormulaSequence,
    pub goal: Formula,
    pub value: bool,
    /// Steps of the underlying run (the table is `(steps+2)` squared).
    pub steps: usize,
}

impl SpecialProof {
    /// Global line range of a section.
    pub fn section_range(&self, idx: usize) -> std::ops::Range<usize> {
        let start: usize = self.sections[..idx].iter().map(|s| s.lines.len()).sum();
        start..start + self.sections[idx].lines.len()
    }

    pub fn section_at(&self, cell: (usize, usize)) -> Option<(usize, &ProofSection)> {
        self.sections.iter().enumerate().find(|(_, s)| s.cell == cell)
    }

    pub fn ascii_len(&self) -> usize {
        self.proof.ascii_len()
    }
}

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error(transparent)]
    Run(#[from] RunFailure),
    #[error("synthesized proof failed verification: {0}")]
    Verify(#[from] VerifyFailure),
}

/// Builds the special proof of `M(s) = v` from the computation table.
pub fn build_special_proof(
    m: &TuringMachine,
    input: &[bool],
    cap: usize,
    mode: KernelMode,
) -> Result<SpecialProof, SynthesisError> {
    let table = build_table(m, input, cap)?;
    let theory = TableauTheory::new(m, input);
    let size = table.size();
    let mut sections = Vec::with_capacity(size * size);
    for row in 0..size {
        for col in 0..size {
            sections.push(build_sec(&table, &theory, row, col, mode));
        }
    }
    // First row whose cell 1 is the output square.
    let halt = m.halt();
    let out_sym = if table.value { TapeSymbol::One } else { TapeSymbol::Zero };
    let d = (0..size)
        .find(|&r| {
            let sq = table.square(r, 1);
            sq.flag && sq.state == halt && sq.sym == out_sym
        })
        .expect("halting runs reach the output square");
    let d_cell = cell_formula(m, &table, d, 1);
    let goal = goal_formula(m, table.value);
    let closing_imp = Formula::imp(d_cell, goal.clone());
    let mut all_lines: Vec<Formula> = Vec::new();
    for s in &sections {
        all_lines.extend(s.lines.iter().cloned());
    }
    all_lines.push(closing_imp.clone());
    all_lines.push(goal.clone());
    let proof = FormulaSequence::from(all_lines);
    Ok(SpecialProof {
        sections,
        closing: (closing_imp, goal.clone()),
        proof,
        goal,
        value: table.value,
        steps: table.steps,
    })
}

/// ASCII length of the constructive proof: the computable upper bound on
/// the shortest-proof length.
pub fn fs_upper(
    m: &TuringMachine,
    input: &[bool],
    cap: usize,
    mode: KernelMode,
) -> Result<usize, SynthesisError> {
    Ok(build_special_proof(m, input, cap, mode)?.ascii_len())
}

/// Per-machine constants bounding every section length by `K*f + C` where
/// `f` is the run's step count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthConstants {
    pub k: usize,
    pub c: usize,
}

/// Derives the section-length constants from the template shapes.
///
/// Every section line is either a rule formula, a formula built from at
/// most two rule-sized parts plus instantiated atoms, or a short ground
/// side condition. Numerals never exceed `f + 1`, whose decimal length is
/// at most `f + 1`, and no template substitutes a numeral into more than 40
/// variable positions, so each line is under `2*D + 2*N + 44*(f+1) + 200`
/// characters, with `D` the longest rule text and `N` the longest state
/// name. Sections have at most 13 lines in paper mode and 22 in strict
/// mode. The constants are generous by design; the tests check them
/// empirically across full sweeps.
pub fn fit_length_constants(m: &TuringMachine, mode: KernelMode) -> LengthConstants {
    let def = crate::encoding::build_def_m(m);
    let d = def.iter().map(Formula::ascii_len).max().unwrap_or(0);
    let n = m.state_names().iter().map(String::len).max().unwrap_or(0);
    let lines = match mode {
        KernelMode::Paper => 13,
        KernelMode::Strict => 22,
    };
    let per_line_slope = 44;
    let per_line_const = 2 * d + 2 * n + per_line_slope + 200;
    LengthConstants { k: lines * per_line_slope, c: lines * per_line_const }
}

/// Result of the bounded shortest-proof search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FsResult {
    Found { len: usize, sequences_tried: usize },
    Exhausted { sequences_tried: usize },
}

/// Searches for the shortest verifying proof of `goal` over sequences of
/// pool formulas, in sequence order (total length, then dictionary order of
/// the joined text), trying at most `budget` sequences with joined length
/// strictly under `max_len`.
pub fn fs_exact_instance(
    theory: TheoryRef,
    goal: &Formula,
    pool: &[Formula],
    max_len: usize,
    budget: usize,
    mode: KernelMode,
) -> FsResult {
    use std::cmp::Reverse;
    let texts: Vec<(usize, String)> = pool
        .iter()
        .map(|f| {
            let c = f.canonical();
            (c.ascii_len(), c.text().to_string())
        })
        .collect();
    let mut frontier: BinaryHeap<Reverse<(usize, String, Vec<usize>)>> = BinaryHeap::new();
    for (i, (len, text)) in texts.iter().enumerate() {
        if *len < max_len {
            frontier.push(Reverse((*len, text.clone(), vec![i])));
        }
    }
    let mut tried = 0;
    while let Some(Reverse((len, text, indices))) = frontier.pop() {
        if tried >= budget {
            return FsResult::Exhausted { sequences_tried: tried };
        }
        tried += 1;
        let seq = FormulaSequence::from(
            indices.iter().map(|&i| pool[i].clone()).collect::<Vec<_>>(),
        );
        if verify(theory, &seq, Some(goal), mode).is_ok() {
            return FsResult::Found { len, sequences_tried: tried };
        }
        for (i, (flen, ftext)) in texts.iter().enumerate() {
            let new_len = len + flen;
            if new_len < max_len {
                let mut new_indices = indices.clone();
                new_indices.push(i);
                frontier.push(Reverse((new_len, format!("{text}{ftext}"), new_indices)));
            }
        }
    }
    FsResult::Exhausted { sequences_tried: tried }
}

/// Bounded shortest-proof search for a machine run; the pool defaults to
/// the distinct lines of the constructive proof.
pub fn fs_exact(
    m: &TuringMachine,
    input: &[bool],
    pool: Option<&[Formula]>,
    max_len: usize,
    budget: usize,
    cap: usize,
    mode: KernelMode,
) -> Result<FsResult, SynthesisError> {
    let special = build_special_proof(m, input, cap, mode)?;
    let auto_pool: Vec<Formula>;
    let pool = match pool {
        Some(p) => p,
        None => {
            let mut distinct = Vec::new();
            for line in special.proof.iter() {
                if !distinct.contains(line) {
                    distinct.push(line.clone());
                }
            }
            auto_pool = distinct;
            &auto_pool
        }
    };
    let theory = TableauTheory::new(m, input);
    Ok(fs_exact_instance(TheoryRef::Tableau(&theory), &special.goal, pool, max_len, budget, mode))
}

/// How the per-input proof length is measured for the length profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApfMode {
    Upper,
    Exact { max_len: usize, budget: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApfOutcome {
    Value(usize),
    /// The bounded search gave out on this input.
    Exhausted { input: String, sequences_tried: usize },
}

/// Maximum proof-length measure over all inputs of length `n`.
pub fn apf(
    m: &TuringMachine,
    n: u32,
    apf_mode: ApfMode,
    cap: usize,
    mode: KernelMode,
) -> Result<ApfOutcome, SynthesisError> {
    let mut worst = 0;
    for input in crate::machine::inputs_of_length(n) {
        let value = match apf_mode {
            ApfMode::Upper => fs_upper(m, &input, cap, mode)?,
            ApfMode::Exact { max_len, budget } => {
                match fs_exact(m, &input, None, max_len, budget, cap, mode)? {
                    FsResult::Found { len, .. } => len,
                    FsResult::Exhausted { sequences_tried } => {
                        return Ok(ApfOutcome::Exhausted {
                            input: bits_to_string(&input),
                            sequences_tried,
                        })
                    }
                }
            }
        };
        worst = worst.max(value);
    }
    Ok(ApfOutcome::Value(worst))
}
