//! Deterministic single-tape Turing machines and their computation tables.
//!
//! Tape cells are indexed from 0; cell 0 permanently holds the left-end
//! marker and the input occupies cells `1..=n`. A run produces an output `v`
//! when the machine first sits in the halt state on cell 1 reading `v`.

use crate::formula::TapeSymbol;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Head moves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Move {
    L,
    S,
    R,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::L => "L",
            Move::S => "S",
            Move::R => "R",
        })
    }
}

pub type StateId = usize;

/// A machine: states, start and halt states, and a total transition map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    names: Vec<String>,
    start: StateId,
    halt: StateId,
    delta: BTreeMap<(StateId, TapeSymbol), (StateId, TapeSymbol, Move)>,
}

pub const SYMBOLS: [TapeSymbol; 4] =
    [TapeSymbol::Zero, TapeSymbol::One, TapeSymbol::Blank, TapeSymbol::LeftEnd];

impl TuringMachine {
    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.names[id]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn halt(&self) -> StateId {
        self.halt
    }

    pub fn rule(&self, state: StateId, sym: TapeSymbol) -> Option<(StateId, TapeSymbol, Move)> {
        self.delta.get(&(state, sym)).copied()
    }

    /// Rules in the fixed emission order: by state id, then symbol order
    /// `0, 1, _, >`.
    pub fn rules(&self) -> impl Iterator<Item = ((StateId, TapeSymbol), (StateId, TapeSymbol, Move))> + '_ {
        (0..self.names.len()).flat_map(move |q| {
            SYMBOLS.into_iter().filter_map(move |a| {
                self.delta.get(&(q, a)).map(|r| ((q, a), *r))
            })
        })
    }
}

/// Builder used by fixtures and the machine-file reader.
pub struct MachineBuilder {
    names: Vec<String>,
    start: Option<String>,
    halt: Option<String>,
    rules: Vec<(String, TapeSymbol, String, TapeSymbol, Move)>,
}

#[derive(Debug, Error)]
pub enum MachineError {
    #[error("machine file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("machine is missing a {0} declaration")]
    MissingHeader(&'static str),
    #[error("invalid machine: {0}")]
    Invalid(String),
}

impl Default for MachineBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl MachineBuilder {
    pub fn new() -> MachineBuilder {
        MachineBuilder { names: Vec::new(), start: None, halt: None, rules: Vec::new() }
    }

    pub fn start(mut self, name: &str) -> Self {
        self.start = Some(name.to_string());
        self
    }

    pub fn halt(mut self, name: &str) -> Self {
        self.halt = Some(name.to_string());
        self
    }

    pub fn rule(mut self, q: &str, a: TapeSymbol, p: &str, b: TapeSymbol, mv: Move) -> Self {
        self.rules.push((q.to_string(), a, p.to_string(), b, mv));
        self
    }

    /// Adds the fixed-point rules for the halt state: stay on every symbol,
    /// step right off the left-end marker.
    pub fn halt_rules(mut self) -> Self {
        let halt = self.halt.clone().expect("halt state must be declared first");
        for a in [TapeSymbol::Zero, TapeSymbol::One, TapeSymbol::Blank] {
            self.rules.push((halt.clone(), a, halt.clone(), a, Move::S));
        }
        self.rules.push((halt.clone(), TapeSymbol::LeftEnd, halt, TapeSymbol::LeftEnd, Move::R));
        self
    }

    pub fn build(self) -> Result<TuringMachine, MachineError> {
        let start_name = self.start.ok_or(MachineError::MissingHeader("start"))?;
        let halt_name = self.halt.ok_or(MachineError::MissingHeader("halt"))?;
        let mut names = Vec::new();
        let intern = |n: &str, names: &mut Vec<String>| -> StateId {
            match names.iter().position(|x| x == n) {
                Some(i) => i,
                None => {
                    names.push(n.to_string());
                    names.len() - 1
                }
            }
        };
        let start = intern(&start_name, &mut names);
        let mut delta = BTreeMap::new();
        for (q, a, p, b, mv) in &self.rules {
            let qi = intern(q, &mut names);
            let pi = intern(p, &mut names);
            if delta.insert((qi, *a), (pi, *b, *mv)).is_some() {
                return Err(MachineError::Invalid(format!("duplicate rule for ({q}, {a})")));
            }
        }
        let halt = intern(&halt_name, &mut names);
        Ok(TuringMachine { names, start, halt, delta })
    }
}

/// Reads the textual machine format: `start:`/`halt:` headers then one rule
/// per line, `<state> <sym> -> <state> <sym> <L|S|R>`.
pub fn parse_machine(text: &str) -> Result<TuringMachine, MachineError> {
    let mut b = MachineBuilder::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = idx + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix("start:") {
            b = b.start(name.trim());
            continue;
        }
        if let Some(name) = line.strip_prefix("halt:") {
            b = b.halt(name.trim());
            continue;
        }
        let parse_err = |message: String| MachineError::Parse { line: lineno, message };
        let (lhs, rhs) = line
            .split_once("->")
            .ok_or_else(|| parse_err("expected `<state> <sym> -> <state> <sym> <move>`".into()))?;
        let l: Vec<&str> = lhs.split_whitespace().collect();
        let r: Vec<&str> = rhs.split_whitespace().collect();
        if l.len() != 2 || r.len() != 3 {
            return Err(parse_err("expected `<state> <sym> -> <state> <sym> <move>`".into()));
        }
        let sym = |s: &str| -> Result<TapeSymbol, MachineError> {
            let mut chars = s.chars();
            match (chars.next().and_then(TapeSymbol::from_glyph), chars.next()) {
                (Some(sym), None) => Ok(sym),
                _ => Err(parse_err(format!("bad tape symbol {s:?}"))),
            }
        };
        let mv = match r[2] {
            "L" => Move::L,
            "S" => Move::S,
            "R" => Move::R,
            other => return Err(parse_err(format!("bad move {other:?}"))),
        };
        b = b.rule(l[0], sym(l[1])?, r[0], sym(r[1])?, mv);
    }
    b.build()
}

/// Renders a machine in the textual format.
pub fn render_machine(m: &TuringMachine) -> String {
    let mut out = String::new();
    out.push_str(&format!("start: {}\n", m.state_name(m.start)));
    out.push_str(&format!("halt: {}\n", m.state_name(m.halt)));
    for ((q, a), (p, b, mv)) in m.rules() {
        out.push_str(&format!(
            "{} {} -> {} {} {}\n",
            m.state_name(q),
            a,
            m.state_name(p),
            b,
            mv
        ));
    }
    out
}

/// One violated well-formedness clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `delta` has no entry for this pair.
    MissingRule { state: String, sym: TapeSymbol },
    /// A left-end read must rewrite the marker and move right.
    LeftEndNotPreserved { state: String },
    /// A non-left-end read must not write the marker.
    WritesLeftEnd { state: String, sym: TapeSymbol },
    /// The halt state must stay put on every non-marker symbol.
    HaltNotFixedPoint { sym: TapeSymbol },
    /// No state other than halt may have the halt fixed-point behavior.
    DuplicateHaltBehavior { state: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingRule { state, sym } => {
                write!(f, "missing rule for ({state}, {sym})")
            }
            Violation::LeftEndNotPreserved { state } => {
                write!(f, "rule ({state}, >) must write > and move R")
            }
            Violation::WritesLeftEnd { state, sym } => {
                write!(f, "rule ({state}, {sym}) writes the left-end marker")
            }
            Violation::HaltNotFixedPoint { sym } => {
                write!(f, "halt rule on {sym} must stay and rewrite the same symbol")
            }
            Violation::DuplicateHaltBehavior { state } => {
                write!(f, "state {state} duplicates the halt fixed-point behavior")
            }
        }
    }
}

/// Result of checking every machine invariant; valid iff no violations.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the machine clause by clause and lists every violation.
pub fn validate_machine(m: &TuringMachine) -> ValidationReport {
    let mut violations = Vec::new();
    let n = m.state_names().len();
    for q in 0..n {
        for a in SYMBOLS {
            match m.rule(q, a) {
                None => violations.push(Violation::MissingRule {
                    state: m.state_name(q).to_string(),
                    sym: a,
                }),
                Some((_, b, mv)) => {
                    if a == TapeSymbol::LeftEnd {
                        if b != TapeSymbol::LeftEnd || mv != Move::R {
                            violations.push(Violation::LeftEndNotPreserved {
                                state: m.state_name(q).to_string(),
                            });
                        }
                    } else if b == TapeSymbol::LeftEnd {
                        violations.push(Violation::WritesLeftEnd {
                            state: m.state_name(q).to_string(),
                            sym: a,
                        });
                    }
                }
            }
        }
    }
    // The halt state stays in place and rewrites the read symbol everywhere
    // except the left end, where the marker clause forces a right step.
    let is_parked = |q: StateId| -> bool {
        SYMBOLS.iter().all(|&a| match m.rule(q, a) {
            Some((p, b, mv)) if p == q && b == a => {
                if a == TapeSymbol::LeftEnd {
                    mv == Move::R
                } else {
                    mv == Move::S
                }
            }
            _ => false,
        })
    };
    for a in [TapeSymbol::Zero, TapeSymbol::One, TapeSymbol::Blank] {
        match m.rule(m.halt, a) {
            Some((p, b, mv)) if p == m.halt && b == a && mv == Move::S => {}
            Some(_) => violations.push(Violation::HaltNotFixedPoint { sym: a }),
            None => {}
        }
    }
    for q in 0..n {
        if q != m.halt && is_parked(q) {
            violations.push(Violation::DuplicateHaltBehavior { state: m.state_name(q).to_string() });
        }
    }
    ValidationReport { violations }
}

/// Input bit strings.
pub type BitString = Vec<bool>;

pub fn parse_bits(s: &str) -> Result<BitString, MachineError> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(MachineError::Invalid(format!("bad input bit {other:?}"))),
        })
        .collect()
}

pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn bit_symbol(b: bool) -> TapeSymbol {
    if b {
        TapeSymbol::One
    } else {
        TapeSymbol::Zero
    }
}

/// A machine configuration: tape contents, head position, state, step count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    tape: Vec<TapeSymbol>,
    pub head: usize,
    pub state: StateId,
    pub step: usize,
}

impl Configuration {
    pub fn initial(input: &[bool]) -> Configuration {
        let mut tape = vec![TapeSymbol::LeftEnd];
        tape.extend(input.iter().map(|&b| bit_symbol(b)));
        Configuration { tape, head: 0, state: 0, step: 0 }
    }

    pub fn symbol_at(&self, col: usize) -> TapeSymbol {
        if col == 0 {
            TapeSymbol::LeftEnd
        } else {
            self.tape.get(col).copied().unwrap_or(TapeSymbol::Blank)
        }
    }

    fn write(&mut self, col: usize, sym: TapeSymbol) {
        if col >= self.tape.len() {
            self.tape.resize(col + 1, TapeSymbol::Blank);
        }
        self.tape[col] = sym;
    }
}

/// Run verdicts. Exceeding the step cap is an outcome, not a failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Halted { value: bool },
    StepCapExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub verdict: Verdict,
    pub steps: usize,
    /// Highest column the head reached before the verdict.
    pub max_head: usize,
}

impl RunResult {
    pub fn output(&self) -> Option<bool> {
        match self.verdict {
            Verdict::Halted { value } => Some(value),
            Verdict::StepCapExceeded => None,
        }
    }
}

fn step(m: &TuringMachine, cfg: &mut Configuration) {
    let sym = cfg.symbol_at(cfg.head);
    let (p, b, mv) = m
        .rule(cfg.state, sym)
        .expect("transition map is total for validated machines");
    cfg.write(cfg.head, b);
    cfg.state = p;
    match mv {
        Move::L => cfg.head -= 1,
        Move::S => {}
        Move::R => cfg.head += 1,
    }
    cfg.step += 1;
}

fn is_output_config(m: &TuringMachine, cfg: &Configuration) -> bool {
    cfg.state == m.halt()
        && cfg.head == 1
        && matches!(cfg.symbol_at(1), TapeSymbol::Zero | TapeSymbol::One)
}

/// Runs the machine on `input` for at most `cap` steps.
///
/// The verdict is `Halted(v)` at the first configuration whose state is the
/// halt state with the head reading bit `v` on cell 1; `steps` counts the
/// transition applications taken to reach it.
pub fn run(m: &TuringMachine, input: &[bool], cap: usize) -> RunResult {
    let mut cfg = Configuration::initial(input);
    let mut max_head = 0;
    loop {
        if is_output_config(m, &cfg) {
            let value = cfg.symbol_at(1) == TapeSymbol::One;
            return RunResult { verdict: Verdict::Halted { value }, steps: cfg.step, max_head };
        }
        if cfg.step >= cap {
            return RunResult { verdict: Verdict::StepCapExceeded, steps: cfg.step, max_head };
        }
        step(m, &mut cfg);
        max_head = max_head.max(cfg.head);
    }
}

/// One square of a computation table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TapeSquare {
    pub sym: TapeSymbol,
    pub state: StateId,
    pub flag: bool,
}

/// The `(f+2) x (f+2)` window of a halting run: row `i` is the
/// configuration after `i` steps, column `j` is tape cell `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationTable {
    pub rows: Vec<Vec<TapeSquare>>,
    /// Steps to the output configuration.
    pub steps: usize,
    /// Output value at the output row.
    pub value: bool,
}

impl ComputationTable {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn square(&self, row: usize, col: usize) -> TapeSquare {
        self.rows[row][col]
    }

    /// Head column in a row.
    pub fn head_of(&self, row: usize) -> usize {
        self.rows[row]
            .iter()
            .position(|sq| sq.flag)
            .expect("every table row has exactly one read square")
    }
}

#[derive(Debug, Error)]
pub enum RunFailure {
    #[error("step cap {cap} exceeded on input {input:?}")]
    CapExceeded { input: String, cap: usize },
}

/// Builds the computation table of a halting run.
pub fn build_table(
    m: &TuringMachine,
    input: &[bool],
    cap: usize,
) -> Result<ComputationTable, RunFailure> {
    let res = run(m, input, cap);
    let (steps, value) = match res.verdict {
        Verdict::Halted { value } => (res.steps, value),
        Verdict::StepCapExceeded => {
            return Err(RunFailure::CapExceeded { input: bits_to_string(input), cap })
        }
    };
    let size = steps + 2;
    let mut cfg = Configuration::initial(input);
    let mut rows = Vec::with_capacity(size);
    for _ in 0..size {
        let row: Vec<TapeSquare> = (0..size)
            .map(|col| TapeSquare {
                sym: cfg.symbol_at(col),
                state: cfg.state,
                flag: col == cfg.head,
            })
            .collect();
        rows.push(row);
        step(m, &mut cfg);
    }
    Ok(ComputationTable { rows, steps, value })
}

/// Maximum number of steps over all inputs of length `n`.
pub fn time_profile(m: &TuringMachine, n: u32, cap: usize) -> Result<usize, RunFailure> {
    let mut worst = 0;
    for input in inputs_of_length(n) {
        let res = run(m, &input, cap);
        match res.verdict {
            Verdict::Halted { .. } => worst = worst.max(res.steps),
            Verdict::StepCapExceeded => {
                return Err(RunFailure::CapExceeded { input: bits_to_string(&input), cap })
            }
        }
    }
    Ok(worst)
}

/// All bit strings of one length, in dictionary order.
pub fn inputs_of_length(n: u32) -> impl Iterator<Item = BitString> {
    let count: u64 = 1 << n;
    (0..count).map(move |x| (0..n).map(|i| (x >> (n - 1 - i)) & 1 == 1).collect())
}

/// All bit strings of length at most `max_len`, in string order.
pub fn inputs_up_to(max_len: u32) -> impl Iterator<Item = BitString> {
    (0..=max_len).flat_map(inputs_of_length)
}

/// Outcome of the prefix-stability check at radius `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefixStability {
    /// On every input of length `k` the head stays at or below column `k`,
    /// so bits past position `k` can never influence the run.
    Certificate { k: u32 },
    /// Witness input of length `k` whose head reaches column `k+1`.
    Refutation { witness: String },
}

/// Checks whether the machine ever reads past column `k` on length-`k`
/// inputs, scanning witnesses in string order.
pub fn prefix_stability(
    m: &TuringMachine,
    k: u32,
    cap: usize,
) -> Result<PrefixStability, RunFailure> {
    for input in inputs_of_length(k) {
        let res = run(m, &input, cap);
        if res.verdict == Verdict::StepCapExceeded {
            return Err(RunFailure::CapExceeded { input: bits_to_string(&input), cap });
        }
        if res.max_head > k as usize {
            return Ok(PrefixStability::Refutation { witness: bits_to_string(&input) });
        }
    }
    Ok(PrefixStability::Certificate { k })
}

/// Keeps the first `k` bits of `input` and zeroes the rest.
pub fn truncate_to_prefix(input: &[bool], k: u32) -> BitString {
    input.iter().enumerate().map(|(i, &b)| i < k as usize && b).collect()
}

/// Result of sweeping all inputs up to a length bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SweepOutcome {
    AllOnes,
    /// First input in string order on which the machine does not output 1.
    Counterexample { input: String },
}

/// Tests `M(s) = 1` on every input of length at most `k`, in string order.
pub fn exhaustive_all_ones(
    m: &TuringMachine,
    k: u32,
    cap: usize,
) -> Result<SweepOutcome, RunFailure> {
    for input in inputs_up_to(k) {
        let res = run(m, &input, cap);
        match res.verdict {
            Verdict::Halted { value: true } => {}
            Verdict::Halted { value: false } => {
                return Ok(SweepOutcome::Counterexample { input: bits_to_string(&input) })
            }
            Verdict::StepCapExceeded => {
                return Err(RunFailure::CapExceeded { input: bits_to_string(&input), cap })
            }
        }
    }
    Ok(SweepOutcome::AllOnes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn const1_is_valid() {
        let report = validate_machine(&fixtures::m_const1());
        assert!(report.is_valid(), "{:?}", report.violations);
    }

    #[test]
    fn all_fixtures_are_valid() {
        for m in [fixtures::m_const1(), fixtures::m_firstbit(), fixtures::m_allzero(), fixtures::m_scanner()] {
            let report = validate_machine(&m);
            assert!(report.is_valid(), "{:?}", report.violations);
        }
    }

    #[test]
    fn writing_left_end_mid_tape_is_flagged() {
        let m = MachineBuilder::new()
            .start("q0")
            .halt("h")
            .rule("q0", TapeSymbol::LeftEnd, "q0", TapeSymbol::LeftEnd, Move::R)
            .rule("q0", TapeSymbol::Zero, "h", TapeSymbol::LeftEnd, Move::S)
            .rule("q0", TapeSymbol::One, "h", TapeSymbol::One, Move::S)
            .rule("q0", TapeSymbol::Blank, "h", TapeSymbol::One, Move::S)
            .halt_rules()
            .build()
            .unwrap();
        let report = validate_machine(&m);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::WritesLeftEnd { .. })));
    }

    #[test]
    fn duplicate_halt_behavior_is_flagged() {
        let mut b = MachineBuilder::new().start("q0").halt("h");
        // q0 mimics the halt fixed point exactly.
        for a in [TapeSymbol::Zero, TapeSymbol::One, TapeSymbol::Blank] {
            b = b.rule("q0", a, "q0", a, Move::S);
        }
        b = b.rule("q0", TapeSymbol::LeftEnd, "q0", TapeSymbol::LeftEnd, Move::R);
        let m = b.halt_rules().build().unwrap();
        let report = validate_machine(&m);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DuplicateHaltBehavior { .. })));
    }

    #[test]
    fn const1_runs_in_two_steps_ignoring_input() {
        let m = fixtures::m_const1();
        for s in ["", "0110"] {
            let res = run(&m, &parse_bits(s).unwrap(), 100);
            assert_eq!(res.verdict, Verdict::Halted { value: true }, "input {s}");
            assert_eq!(res.steps, 2, "input {s}");
        }
    }

    #[test]
    fn firstbit_returns_first_bit() {
        let m = fixtures::m_firstbit();
        for n in 1..=6u32 {
            for input in inputs_of_length(n) {
                let res = run(&m, &input, 100);
                assert_eq!(res.output(), Some(input[0]), "input {}", bits_to_string(&input));
                assert_eq!(res.steps, 2);
            }
        }
        assert_eq!(run(&m, &[], 100).output(), Some(true));
    }

    #[test]
    fn allzero_detects_ones() {
        let m = fixtures::m_allzero();
        for n in 0..=6u32 {
            for input in inputs_of_length(n) {
                let expect = input.iter().all(|&b| !b);
                let res = run(&m, &input, 1000);
                assert_eq!(res.output(), Some(expect), "input {}", bits_to_string(&input));
            }
        }
    }

    #[test]
    fn const1_table_window_and_first_row() {
        let m = fixtures::m_const1();
        let t = build_table(&m, &[], 100).unwrap();
        assert_eq!(t.size(), 4);
        let q0 = m.state_id("q0").unwrap();
        assert_eq!(
            t.square(0, 0),
            TapeSquare { sym: TapeSymbol::LeftEnd, state: q0, flag: true }
        );
        assert_eq!(
            t.square(0, 1),
            TapeSquare { sym: TapeSymbol::Blank, state: q0, flag: false }
        );
        let halt = m.halt();
        assert_eq!(
            t.square(2, 1),
            TapeSquare { sym: TapeSymbol::One, state: halt, flag: true }
        );
    }

    #[test]
    fn tables_have_one_read_square_per_row_and_marked_left_end() {
        let m = fixtures::m_allzero();
        for input in inputs_up_to(4) {
            let t = build_table(&m, &input, 1000).unwrap();
            for (i, row) in t.rows.iter().enumerate() {
                assert_eq!(row.iter().filter(|sq| sq.flag).count(), 1, "row {i}");
                assert_eq!(row[0].sym, TapeSymbol::LeftEnd, "row {i}");
            }
        }
    }

    #[test]
    fn table_rows_replay_through_delta() {
        let m = fixtures::m_allzero();
        for input in inputs_up_to(4) {
            let t = build_table(&m, &input, 1000).unwrap();
            for i in 0..t.size() - 1 {
                let h = t.head_of(i);
                let q = t.rows[i][h].state;
                let (p, b, mv) = m.rule(q, t.rows[i][h].sym).unwrap();
                let new_head = match mv {
                    Move::L => h - 1,
                    Move::S => h,
                    Move::R => h + 1,
                };
                for col in 0..t.size() {
                    let expected_sym = if col == h { b } else { t.rows[i][col].sym };
                    assert_eq!(t.rows[i + 1][col].sym, expected_sym);
                    assert_eq!(t.rows[i + 1][col].state, p);
                    assert_eq!(t.rows[i + 1][col].flag, col == new_head);
                }
            }
        }
    }

    #[test]
    fn table_last_row_output_matches_verdict() {
        let m = fixtures::m_firstbit();
        for input in inputs_up_to(5) {
            let t = build_table(&m, &input, 100).unwrap();
            let out_row = &t.rows[t.steps];
            let halt = m.halt();
            let expect = if t.value { TapeSymbol::One } else { TapeSymbol::Zero };
            assert_eq!(out_row[1], TapeSquare { sym: expect, state: halt, flag: true });
        }
    }

    #[test]
    fn time_profile_matches_explicit_maximum() {
        let m = fixtures::m_const1();
        assert_eq!(time_profile(&m, 5, 100).unwrap(), 2);
        assert_eq!(time_profile(&m, 0, 100).unwrap(), 2);
        let az = fixtures::m_allzero();
        for n in 0..=5u32 {
            let profile = time_profile(&az, n, 1000).unwrap();
            let explicit = inputs_of_length(n)
                .map(|s| run(&az, &s, 1000).steps)
                .max()
                .unwrap();
            assert_eq!(profile, explicit);
        }
    }

    #[test]
    fn prefix_stability_certificates_and_refutation() {
        assert_eq!(
            prefix_stability(&fixtures::m_const1(), 2, 100).unwrap(),
            PrefixStability::Certificate { k: 2 }
        );
        assert_eq!(
            prefix_stability(&fixtures::m_firstbit(), 2, 100).unwrap(),
            PrefixStability::Certificate { k: 2 }
        );
        assert_eq!(
            prefix_stability(&fixtures::m_scanner(), 3, 1000).unwrap(),
            PrefixStability::Refutation { witness: "000".to_string() }
        );
    }

    #[test]
    fn certificate_implies_suffix_independence() {
        // Desk-scale soundness of the certificate: beyond the certified
        // prefix, zeroing the tail never changes the run.
        for (m, k) in [(fixtures::m_const1(), 2u32), (fixtures::m_firstbit(), 2u32)] {
            assert!(matches!(
                prefix_stability(&m, k, 100).unwrap(),
                PrefixStability::Certificate { .. }
            ));
            for len in k..=k + 4 {
                for input in inputs_of_length(len) {
                    let trunc = truncate_to_prefix(&input, k);
                    assert_eq!(run(&m, &input, 100), run(&m, &trunc, 100));
                }
            }
        }
    }

    #[test]
    fn exhaustive_sweeps() {
        assert_eq!(
            exhaustive_all_ones(&fixtures::m_const1(), 4, 100).unwrap(),
            SweepOutcome::AllOnes
        );
        assert_eq!(
            exhaustive_all_ones(&fixtures::m_firstbit(), 3, 100).unwrap(),
            SweepOutcome::Counterexample { input: "0".to_string() }
        );
        assert_eq!(
            exhaustive_all_ones(&fixtures::m_const1(), 0, 100).unwrap(),
            SweepOutcome::AllOnes
        );
    }

    #[test]
    fn machine_file_roundtrip() {
        let m = fixtures::m_firstbit();
        let text = render_machine(&m);
        let back = parse_machine(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn determinism_of_run_and_table() {
        let m = fixtures::m_allzero();
        let input = parse_bits("0101").unwrap();
        assert_eq!(run(&m, &input, 1000), run(&m, &input, 1000));
        assert_eq!(build_table(&m, &input, 1000).unwrap(), build_table(&m, &input, 1000).unwrap());
    }
}
