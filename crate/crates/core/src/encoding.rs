//! Tableau theories.
//!
//! A run of machine `M` on input `s` is axiomatized by the formula sequence
//! `T<M,s>`: first the machine-only part (left-end and unique-head
//! formulas, one quantified transition formula per `(state, symbol)` pair,
//! and the blank-tail existence formula), then the input part (the bounded
//! blank-tail header, the head-at-cell-0 formula, one formula per input
//! bit, and the explicit first-blank formula). Membership of a formula is
//! decided by a literal in-order scan, or by a position-arithmetic fast
//! path whose comparison count does not depend on the input length.

use crate::formula::{Formula, FormulaSequence, Rel, TapeSymbol, Term};
use crate::machine::{bits_to_string, BitString, Move, TuringMachine, SYMBOLS};

/// Number of formula-equality tests a membership query performed.
pub type MembershipCost = usize;

fn sq(row: Term, col: Term) -> Term {
    Term::square(row, col)
}

fn head_start_formula() -> Formula {
    Formula::eq(
        sq(Term::num(0), Term::num(0)),
        Term::sym_triple(TapeSymbol::LeftEnd, "q0", 1),
    )
}

/// `\forall i \pi_M(t_{i,0}) = >`: the left end stays marked.
fn left_end_formula() -> Formula {
    Formula::forall(
        "i",
        Formula::eq(
            Term::proj(sq(Term::var("i"), Term::num(0))),
            Term::Sym(TapeSymbol::LeftEnd),
        ),
    )
}

/// Exactly one square per row carries the read flag.
fn unique_head_formula(m: &TuringMachine) -> Formula {
    let flagged = |row: Term, col: Term, flag: u8| {
        let mut cases = Vec::new();
        for a in SYMBOLS {
            for q in m.state_names() {
                cases.push(Formula::eq(
                    sq(row.clone(), col.clone()),
                    Term::sym_triple(a, q, flag),
                ));
            }
        }
        Formula::disj(cases)
    };
    Formula::forall(
        "i",
        Formula::exists(
            "k",
            Formula::and(
                flagged(Term::var("i"), Term::var("k"), 1),
                Formula::forall(
                    "j",
                    Formula::imp(
                        Formula::ne(Term::var("j"), Term::var("k")),
                        flagged(Term::var("i"), Term::var("j"), 0),
                    ),
                ),
            ),
        ),
    )
}

/// The quantified transition formula for one `(state, symbol)` rule.
pub fn transition_formula(
    m: &TuringMachine,
    q: usize,
    a: TapeSymbol,
    p: usize,
    b: TapeSymbol,
    mv: Move,
) -> Formula {
    let (i, j, k) = (Term::var("i"), Term::var("j"), Term::var("k"));
    let qn = m.state_name(q);
    let pn = m.state_name(p);
    let next = |col: Term| sq(Term::offset(i.clone(), 1), col);
    let frame_cell = |col: Term| {
        Formula::eq(
            next(col.clone()),
            Term::triple(Term::proj(sq(i.clone(), col)), pn, 0),
        )
    };
    let premise = Formula::eq(sq(i.clone(), j.clone()), Term::sym_triple(a, qn, 1));
    let body = match mv {
        Move::L => {
            let written = Formula::eq(next(j.clone()), Term::sym_triple(b, pn, 0));
            let arrive = Formula::eq(
                next(Term::offset(j.clone(), -1)),
                Term::triple(Term::proj(sq(i.clone(), Term::offset(j.clone(), -1))), pn, 1),
            );
            let frame = Formula::forall(
                "k",
                Formula::imp(
                    Formula::and(
                        Formula::ne(k.clone(), j.clone()),
                        Formula::ne(k.clone(), Term::offset(j.clone(), -1)),
                    ),
                    frame_cell(k.clone()),
                ),
            );
            Formula::conj(vec![written, arrive, frame])
        }
        Move::S => {
            let written = Formula::eq(next(j.clone()), Term::sym_triple(b, pn, 1));
            let frame = Formula::forall(
                "k",
                Formula::imp(Formula::ne(k.clone(), j.clone()), frame_cell(k.clone())),
            );
            Formula::conj(vec![written, frame])
        }
        Move::R => {
            let written = Formula::eq(next(j.clone()), Term::sym_triple(b, pn, 0));
            let arrive = Formula::eq(
                next(Term::offset(j.clone(), 1)),
                Term::triple(Term::proj(sq(i.clone(), Term::offset(j.clone(), 1))), pn, 1),
            );
            let frame = Formula::forall(
                "k",
                Formula::imp(
                    Formula::and(
                        Formula::ne(k.clone(), j.clone()),
                        Formula::ne(k.clone(), Term::offset(j.clone(), 1)),
                    ),
                    frame_cell(k.clone()),
                ),
            );
            Formula::conj(vec![written, arrive, frame])
        }
    };
    Formula::forall("i", Formula::forall("j", Formula::imp(premise, body)))
}

/// The blank-tail existence formula: some `m` splits row 0 into a non-blank
/// prefix and an all-blank tail.
fn blank_split_formula() -> Formula {
    let blank0 = |col: Term| {
        Formula::eq(sq(Term::num(0), col), Term::sym_triple(TapeSymbol::Blank, "q0", 0))
    };
    Formula::exists(
        "m",
        Formula::and(
            Formula::forall(
                "j",
                Formula::imp(
                    Formula::cmp(Term::var("j"), Rel::Lt, Term::var("m")),
                    Formula::not(blank0(Term::var("j"))),
                ),
            ),
            Formula::forall(
                "j",
                Formula::imp(
                    Formula::cmp(Term::var("j"), Rel::Ge, Term::var("m")),
                    blank0(Term::var("j")),
                ),
            ),
        ),
    )
}

/// The machine-only part of the theory; fixed once the machine is fixed.
pub fn build_def_m(m: &TuringMachine) -> FormulaSequence {
    let mut out = vec![left_end_formula(), unique_head_formula(m)];
    for ((q, a), (p, b, mv)) in m.rules() {
        out.push(transition_formula(m, q, a, p, b, mv));
    }
    out.push(blank_split_formula());
    FormulaSequence::from(out)
}

/// The bounded blank-tail header of `input_s`.
pub fn blank_tail_header(input_len: usize) -> Formula {
    Formula::forall(
        "j",
        Formula::imp(
            Formula::cmp(Term::var("j"), Rel::Gt, Term::num(input_len as u64 + 1)),
            Formula::eq(
                sq(Term::num(0), Term::var("j")),
                Term::sym_triple(TapeSymbol::Blank, "q0", 0),
            ),
        ),
    )
}

/// Row-0 cell formula for column `col` holding `sym`.
pub fn input_cell_formula(col: u64, sym: TapeSymbol) -> Formula {
    let flag = if col == 0 { 1 } else { 0 };
    Formula::eq(sq(Term::num(0), Term::num(col)), Term::sym_triple(sym, "q0", flag))
}

/// The input part: header, head cell, one formula per bit, and the explicit
/// first-blank cell. Exactly `|s| + 3` formulas.
pub fn build_input(s: &[bool]) -> FormulaSequence {
    let mut out = vec![blank_tail_header(s.len()), head_start_formula()];
    for (idx, &bit) in s.iter().enumerate() {
        let sym = if bit { TapeSymbol::One } else { TapeSymbol::Zero };
        out.push(input_cell_formula(idx as u64 + 1, sym));
    }
    out.push(input_cell_formula(s.len() as u64 + 1, TapeSymbol::Blank));
    FormulaSequence::from(out)
}

/// The ordered theory `T<M,s>` with its def/input split.
#[derive(Debug, Clone)]
pub struct TableauTheory {
    machine: TuringMachine,
    input: BitString,
    def_part: FormulaSequence,
    input_part: FormulaSequence,
}

impl TableauTheory {
    pub fn new(machine: &TuringMachine, input: &[bool]) -> TableauTheory {
        TableauTheory {
            machine: machine.clone(),
            input: input.to_vec(),
            def_part: build_def_m(machine),
            input_part: build_input(input),
        }
    }

    /// Builds the input part against a precomputed def part, avoiding the
    /// def reconstruction when sweeping many inputs of one machine.
    pub fn with_def(machine: &TuringMachine, def_part: &FormulaSequence, input: &[bool]) -> TableauTheory {
        TableauTheory {
            machine: machine.clone(),
            input: input.to_vec(),
            def_part: def_part.clone(),
            input_part: build_input(input),
        }
    }

    pub fn machine(&self) -> &TuringMachine {
        &self.machine
    }

    pub fn input(&self) -> &[bool] {
        &self.input
    }

    pub fn input_str(&self) -> String {
        bits_to_string(&self.input)
    }

    pub fn def_part(&self) -> &FormulaSequence {
        &self.def_part
    }

    pub fn input_part(&self) -> &FormulaSequence {
        &self.input_part
    }

    /// Index of the last def formula; the theory has `k + |s| + 4` members.
    pub fn k(&self) -> usize {
        self.def_part.len() - 1
    }

    pub fn len(&self) -> usize {
        self.def_part.len() + self.input_part.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> Option<&Formula> {
        if i < self.def_part.len() {
            self.def_part.get(i)
        } else {
            self.input_part.get(i - self.def_part.len())
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &Formula> {
        self.def_part.iter().chain(self.input_part.iter())
    }

    /// The full sequence, def part then input part.
    pub fn combined(&self) -> FormulaSequence {
        FormulaSequence::from(self.iter().cloned().collect::<Vec<_>>())
    }

    pub fn contains(&self, phi: &Formula) -> bool {
        al_member_fast(phi, self).0
    }
}

/// Literal membership scan in theory order, stopping at the first match.
pub fn al_member(phi: &Formula, theory: &TableauTheory) -> (bool, MembershipCost) {
    let mut comparisons = 0;
    for candidate in theory.iter() {
        comparisons += 1;
        if candidate == phi {
            return (true, comparisons);
        }
    }
    (false, comparisons)
}

/// Literal scan over an explicit formula sequence.
pub fn al_member_seq(phi: &Formula, theory: &FormulaSequence) -> (bool, MembershipCost) {
    let mut comparisons = 0;
    for candidate in theory.iter() {
        comparisons += 1;
        if candidate == phi {
            return (true, comparisons);
        }
    }
    (false, comparisons)
}

/// Destructures `t_{0,b} = (sym, q0, flag)` with a ground column numeral
/// and a literal symbol.
fn as_row0_cell(phi: &Formula) -> Option<(u64, TapeSymbol, u8)> {
    let Formula::Cmp { lhs, rel: Rel::Eq, rhs } = phi else {
        return None;
    };
    let Term::Square { row, col } = lhs else {
        return None;
    };
    if **row != Term::Num(0) {
        return None;
    }
    let Term::Num(b) = **col else {
        return None;
    };
    let Term::Triple { sym, state, flag } = rhs else {
        return None;
    };
    if state != "q0" {
        return None;
    }
    let s = match **sym {
        Term::Num(0) => TapeSymbol::Zero,
        Term::Num(1) => TapeSymbol::One,
        Term::Sym(s) => s,
        _ => return None,
    };
    Some((b, s, *flag))
}

/// Position-arithmetic membership.
///
/// Row-0 cell formulas are decided directly from the input bits at unit
/// cost. Every other formula is compared against the def part (early exit;
/// the hit position is a function of the formula alone) and then against
/// both input headers unconditionally, so the comparison count for a fixed
/// query formula is the same for every input of the machine.
pub fn al_member_fast(phi: &Formula, theory: &TableauTheory) -> (bool, MembershipCost) {
    if let Some((b, s, flag)) = as_row0_cell(phi) {
        let l = theory.input.len() as u64;
        let member = if b == 0 {
            s == TapeSymbol::LeftEnd && flag == 1
        } else if flag != 0 {
            false
        } else if b <= l {
            let bit = theory.input[(b - 1) as usize];
            s == if bit { TapeSymbol::One } else { TapeSymbol::Zero }
        } else {
            b == l + 1 && s == TapeSymbol::Blank
        };
        return (member, 1);
    }
    let mut comparisons = 0;
    for candidate in theory.def_part.iter() {
        comparisons += 1;
        if candidate == phi {
            return (true, comparisons);
        }
    }
    // Both headers are always tested so that misses cost the same as hits.
    let mut member = false;
    for header in &[&theory.input_part[0], &theory.input_part[1]] {
        comparisons += 1;
        if *header == phi {
            member = true;
        }
    }
    (member, comparisons)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::formula::parse_formula;
    use crate::machine::{inputs_up_to, parse_bits};
    use proptest::prelude::*;

    #[test]
    fn def_part_layout() {
        let m = fixtures::m_const1();
        let def = build_def_m(&m);
        // left-end + unique-head + one rule per (state, symbol) + blank split
        assert_eq!(def.len(), 2 + 3 * 4 + 1);
        let last = &def[def.len() - 1];
        assert!(matches!(last, Formula::Exists(..)), "last def formula is the blank split");
    }

    #[test]
    fn r_rule_matches_frozen_shape() {
        let m = fixtures::m_const1();
        let f = transition_formula(&m, m.state_id("q0").unwrap(), TapeSymbol::LeftEnd, m.state_id("q1").unwrap(), TapeSymbol::LeftEnd, Move::R);
        let expected = "$\\forall i \\forall j (t_{i,j} = (>,q0,1) \\to ((t_{(i+1),j} = (>,q1,0) \\wedge t_{(i+1),(j+1)} = (\\pi_M(t_{i,(j+1)}),q1,1)) \\wedge \\forall k (((k != j) \\wedge (k != (j+1))) \\to t_{(i+1),k} = (\\pi_M(t_{i,k}),q1,0))))$";
        assert_eq!(f.canonical().text(), expected);
        assert_eq!(parse_formula(expected).unwrap(), f);
    }

    #[test]
    fn def_parts_differ_in_one_rule_when_machines_do() {
        let m1 = fixtures::m_const1();
        let mut b = crate::machine::MachineBuilder::new().start("q0").halt("halt");
        use crate::formula::TapeSymbol::*;
        b = b
            .rule("q0", LeftEnd, "q1", LeftEnd, Move::R)
            .rule("q0", Zero, "q1", Zero, Move::R)
            .rule("q0", One, "q1", One, Move::R)
            .rule("q0", Blank, "q1", Blank, Move::R)
            .rule("q1", Zero, "halt", Zero, Move::S) // differs from const1 here
            .rule("q1", One, "halt", One, Move::S)
            .rule("q1", Blank, "halt", One, Move::S)
            .rule("q1", LeftEnd, "halt", LeftEnd, Move::R);
        let m2 = b.halt_rules().build().unwrap();
        let d1 = build_def_m(&m1);
        let d2 = build_def_m(&m2);
        assert_eq!(d1.len(), d2.len());
        let differing = d1.iter().zip(d2.iter()).filter(|(a, b)| a != b).count();
        assert_eq!(differing, 1);
    }

    #[test]
    fn input_part_counts() {
        assert_eq!(build_input(&[]).len(), 3);
        let s01 = parse_bits("01").unwrap();
        let part = build_input(&s01);
        assert_eq!(part.len(), 5);
        assert_eq!(
            part[3].canonical().text(),
            "$t_{0,2} = (1,q0,0)$"
        );
        assert_eq!(
            part[part.len() - 1].canonical().text(),
            "$t_{0,3} = (_,q0,0)$"
        );
        for (a, b) in [(4usize, 2usize), (7, 0), (5, 5)] {
            let la = build_input(&vec![false; a]).len() as i64;
            let lb = build_input(&vec![true; b]).len() as i64;
            assert_eq!(la - lb, a as i64 - b as i64);
        }
    }

    #[test]
    fn theory_prefix_is_input_independent() {
        let m = fixtures::m_firstbit();
        let t1 = TableauTheory::new(&m, &parse_bits("0").unwrap());
        let t2 = TableauTheory::new(&m, &parse_bits("1101").unwrap());
        let k = t1.k();
        assert_eq!(t2.k(), k);
        for i in 0..=k {
            assert_eq!(t1.get(i), t2.get(i), "def formula {i}");
        }
        assert_eq!(t1.len(), k + 1 + 4);
        assert_eq!(t2.len(), k + 4 + 4);
    }

    #[test]
    fn literal_scan_positions() {
        let m = fixtures::m_const1();
        let t = TableauTheory::new(&m, &parse_bits("1").unwrap());
        let k = t.k();
        let first = t.get(0).unwrap().clone();
        assert_eq!(al_member(&first, &t), (true, 1));
        let bit = parse_formula("$t_{0,1} = (1,q0,0)$").unwrap();
        assert_eq!(al_member(&bit, &t), (true, k + 4));
        let absent = parse_formula("$t_{5,5} = (0,q0,0)$").unwrap();
        assert_eq!(al_member(&absent, &t), (false, t.len()));
    }

    #[test]
    fn input_cells_cost_position_plus_one() {
        let m = fixtures::m_firstbit();
        let s = parse_bits("10").unwrap();
        let t = TableauTheory::new(&m, &s);
        let k = t.k();
        for b in 0..=(s.len() as u64 + 1) {
            let sym = match b {
                0 => TapeSymbol::LeftEnd,
                1 => TapeSymbol::One,
                2 => TapeSymbol::Zero,
                _ => TapeSymbol::Blank,
            };
            let phi = input_cell_formula(b, sym);
            let expected_cost = if b == 0 { k + 3 } else { k + 3 + b as usize };
            assert_eq!(al_member(&phi, &t), (true, expected_cost), "column {b}");
        }
    }

    #[test]
    fn fast_path_cost_is_input_independent() {
        let m = fixtures::m_const1();
        let probes = [
            build_def_m(&m)[3].clone(),
            blank_tail_header(0),
            input_cell_formula(1, TapeSymbol::Blank),
            input_cell_formula(2, TapeSymbol::One),
            parse_formula("$t_{5,5} = (0,q0,0)$").unwrap(),
        ];
        let baseline: Vec<usize> = {
            let t = TableauTheory::new(&m, &[]);
            probes.iter().map(|p| al_member_fast(p, &t).1).collect()
        };
        for input in inputs_up_to(6) {
            let t = TableauTheory::new(&m, &input);
            for (probe, expect) in probes.iter().zip(&baseline) {
                assert_eq!(al_member_fast(probe, &t).1, *expect);
            }
        }
    }

    proptest! {
        // Fast path and literal scan agree on membership for arbitrary
        // probes drawn from theory formulas, perturbed cells, and random
        // formulas.
        #[test]
        fn fast_path_agrees_with_literal_scan(
            seed in 0usize..4,
            input in proptest::collection::vec(any::<bool>(), 0..6),
            col in 0u64..10,
            sym_pick in 0usize..4,
            flag in 0u8..2,
            phi in crate::formula::tests::arb_closed_formula(),
        ) {
            let machines = [fixtures::m_const1(), fixtures::m_firstbit(), fixtures::m_allzero(), fixtures::m_scanner()];
            let m = &machines[seed];
            let t = TableauTheory::new(m, &input);
            let sym = crate::machine::SYMBOLS[sym_pick];
            let probes = [
                phi,
                input_cell_formula(col, sym),
                Formula::eq(
                    Term::square(Term::num(0), Term::num(col)),
                    Term::sym_triple(sym, "q0", flag),
                ),
                t.get(col as usize % t.len()).unwrap().clone(),
            ];
            for probe in probes {
                prop_assert_eq!(al_member(&probe, &t).0, al_member_fast(&probe, &t).0);
            }
        }
    }
}
