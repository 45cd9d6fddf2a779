//! Small machines used by the test suite, the acceptance criteria, and the
//! CLI examples.

use crate::formula::TapeSymbol::{Blank, LeftEnd, One, Zero};
use crate::machine::{MachineBuilder, Move, TuringMachine};

/// Steps right once, writes 1, halts. Outputs 1 on every input in 2 steps.
pub fn m_const1() -> TuringMachine {
    MachineBuilder::new()
        .start("q0")
        .halt("halt")
        .rule("q0", LeftEnd, "q1", LeftEnd, Move::R)
        .rule("q0", Zero, "q1", Zero, Move::R)
        .rule("q0", One, "q1", One, Move::R)
        .rule("q0", Blank, "q1", Blank, Move::R)
        .rule("q1", Zero, "halt", One, Move::S)
        .rule("q1", One, "halt", One, Move::S)
        .rule("q1", Blank, "halt", One, Move::S)
        .rule("q1", LeftEnd, "halt", LeftEnd, Move::R)
        .halt_rules()
        .build()
        .expect("fixture machine")
}

/// Outputs the first input bit; outputs 1 on the empty input.
pub fn m_firstbit() -> TuringMachine {
    MachineBuilder::new()
        .start("q0")
        .halt("halt")
        .rule("q0", LeftEnd, "q1", LeftEnd, Move::R)
        .rule("q0", Zero, "q1", Zero, Move::R)
        .rule("q0", One, "q1", One, Move::R)
        .rule("q0", Blank, "q1", Blank, Move::R)
        .rule("q1", Zero, "halt", Zero, Move::S)
        .rule("q1", One, "halt", One, Move::S)
        .rule("q1", Blank, "halt", One, Move::S)
        .rule("q1", LeftEnd, "halt", LeftEnd, Move::R)
        .halt_rules()
        .build()
        .expect("fixture machine")
}

/// Scans the input; outputs 1 iff it contains no 1. Returns to cell 1 to
/// write the answer.
pub fn m_allzero() -> TuringMachine {
    let mut b = MachineBuilder::new().start("q0").halt("halt");
    b = b
        .rule("q0", LeftEnd, "scan0", LeftEnd, Move::R)
        .rule("q0", Zero, "scan0", Zero, Move::R)
        .rule("q0", One, "scan0", One, Move::R)
        .rule("q0", Blank, "scan0", Blank, Move::R);
    // scan0: no 1 seen yet; scan1: a 1 was seen.
    b = b
        .rule("scan0", Zero, "scan0", Zero, Move::R)
        .rule("scan0", One, "scan1", One, Move::R)
        .rule("scan0", Blank, "back1", Blank, Move::L)
        .rule("scan0", LeftEnd, "scan0", LeftEnd, Move::R)
        .rule("scan1", Zero, "scan1", Zero, Move::R)
        .rule("scan1", One, "scan1", One, Move::R)
        .rule("scan1", Blank, "back0", Blank, Move::L)
        .rule("scan1", LeftEnd, "scan1", LeftEnd, Move::R);
    // backV: walk home carrying answer V, then write it on cell 1.
    for (back, write) in [("back1", "write1"), ("back0", "write0")] {
        b = b
            .rule(back, Zero, back, Zero, Move::L)
            .rule(back, One, back, One, Move::L)
            .rule(back, Blank, back, Blank, Move::L)
            .rule(back, LeftEnd, write, LeftEnd, Move::R);
    }
    b = b
        .rule("write1", Zero, "halt", One, Move::S)
        .rule("write1", One, "halt", One, Move::S)
        .rule("write1", Blank, "halt", One, Move::S)
        .rule("write1", LeftEnd, "halt", LeftEnd, Move::R)
        .rule("write0", Zero, "halt", Zero, Move::S)
        .rule("write0", One, "halt", Zero, Move::S)
        .rule("write0", Blank, "halt", Zero, Move::S)
        .rule("write0", LeftEnd, "halt", LeftEnd, Move::R);
    b.halt_rules().build().expect("fixture machine")
}

/// Walks to the first blank, returns home, writes 1. Always outputs 1 but
/// reads the whole input, so it is never prefix-stable.
pub fn m_scanner() -> TuringMachine {
    let mut b = MachineBuilder::new().start("q0").halt("halt");
    b = b
        .rule("q0", LeftEnd, "walk", LeftEnd, Move::R)
        .rule("q0", Zero, "walk", Zero, Move::R)
        .rule("q0", One, "walk", One, Move::R)
        .rule("q0", Blank, "walk", Blank, Move::R)
        .rule("walk", Zero, "walk", Zero, Move::R)
        .rule("walk", One, "walk", One, Move::R)
        .rule("walk", Blank, "back", Blank, Move::L)
        .rule("walk", LeftEnd, "walk", LeftEnd, Move::R)
        .rule("back", Zero, "back", Zero, Move::L)
        .rule("back", One, "back", One, Move::L)
        .rule("back", Blank, "back", Blank, Move::L)
        .rule("back", LeftEnd, "write", LeftEnd, Move::R)
        .rule("write", Zero, "halt", One, Move::S)
        .rule("write", One, "halt", One, Move::S)
        .rule("write", Blank, "halt", One, Move::S)
        .rule("write", LeftEnd, "halt", LeftEnd, Move::R);
    b.halt_rules().build().expect("fixture machine")
}
