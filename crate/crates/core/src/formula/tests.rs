use super::*;
use proptest::prelude::*;
use std::cmp::Ordering;

fn sq(row: u64, col: u64) -> Term {
    Term::square(Term::num(row), Term::num(col))
}

#[test]
fn token_lengths_are_counted_on_raw_text() {
    assert_eq!(ascii_len("t"), 1);
    assert_eq!(bin_len("t"), 7);
    assert_eq!(ascii_len("$t$"), 3);
    assert_eq!(bin_len("$t$"), 21);
    assert_eq!(ascii_len("$t_{298}$"), 9);
    assert_eq!(bin_len("$t_{298}$"), 63);
}

#[test]
fn parses_head_square_atom() {
    let f = parse_formula("$t_{0,0} = (>,q0,1)$").unwrap();
    let expected =
        Formula::eq(sq(0, 0), Term::sym_triple(TapeSymbol::LeftEnd, "q0", 1));
    assert_eq!(f, expected);
    assert_eq!(f.canonical().text(), "$t_{0,0} = (>,q0,1)$");
}

#[test]
fn parses_quantified_implication() {
    let f = parse_formula("$\\forall j ((j > 3) \\to t_{0,j} = (_,q0,0))$").unwrap();
    let expected = Formula::forall(
        "j",
        Formula::imp(
            Formula::cmp(Term::var("j"), Rel::Gt, Term::num(3)),
            Formula::eq(
                Term::square(Term::num(0), Term::var("j")),
                Term::sym_triple(TapeSymbol::Blank, "q0", 0),
            ),
        ),
    );
    assert_eq!(f, expected);
    assert_eq!(f.canonical().text(), "$\\forall j ((j > 3) \\to t_{0,j} = (_,q0,0))$");
}

#[test]
fn unclosed_subscript_reports_offset() {
    let e = parse_formula("$t_{0$").unwrap_err();
    assert_eq!(e.offset, 4);
}

#[test]
fn unbound_variable_is_rejected() {
    let e = parse_formula("$t_{0,j} = (_,q0,0)$").unwrap_err();
    assert!(e.message.contains("unbound"), "{e}");
}

#[test]
fn rejects_leading_zero_numerals() {
    assert!(parse_formula("$t_{00,1} = (_,q0,0)$").is_err());
}

#[test]
fn parses_projection_and_offsets() {
    let text = "$\\forall i \\forall j (t_{i,j} = (0,q0,1) \\to t_{(i+1),j} = (\\pi_M(t_{i,j}),q1,0))$";
    let f = parse_formula(text).unwrap();
    assert_eq!(f.canonical().text(), text);
}

#[test]
fn string_cmp_is_length_then_dictionary() {
    assert_eq!(string_cmp("b", "aa"), Ordering::Less);
    assert_eq!(string_cmp("ab", "ba"), Ordering::Less);
    assert_eq!(string_cmp("x", "x"), Ordering::Equal);
}

#[test]
fn seq_len_and_cmp_basics() {
    let phi = Formula::eq(sq(0, 0), Term::sym_triple(TapeSymbol::LeftEnd, "q0", 1));
    let empty = FormulaSequence::new();
    let one = FormulaSequence::from(vec![phi.clone()]);
    let two = FormulaSequence::from(vec![phi.clone(), phi.clone()]);
    assert_eq!(seq_ascii_len(&empty), 0);
    assert_eq!(seq_ascii_len(&one), phi.ascii_len());
    assert_eq!(seq_ascii_len(&two), 2 * phi.ascii_len());
    assert_eq!(seq_cmp(&empty, &one), Ordering::Less);
    assert_eq!(seq_cmp(&two, &two), Ordering::Equal);
}

#[test]
fn seq_concat_is_associative_with_identity() {
    let a = FormulaSequence::from(vec![Formula::eq(Term::num(0), Term::num(0))]);
    let b = FormulaSequence::from(vec![Formula::eq(Term::num(1), Term::num(1))]);
    let c = FormulaSequence::from(vec![Formula::eq(Term::num(2), Term::num(2))]);
    let left = seq_concat([seq_concat([a.clone(), b.clone()]), c.clone()]);
    let right = seq_concat([a.clone(), seq_concat([b.clone(), c.clone()])]);
    assert_eq!(left, right);
    assert_eq!(seq_concat([FormulaSequence::new(), a.clone()]), a);
    assert_eq!(left.len(), 3);
}

#[test]
fn substitution_normalizes_ground_offsets() {
    let body = Formula::eq(
        Term::square(Term::offset(Term::var("i"), 1), Term::var("j")),
        Term::sym_triple(TapeSymbol::One, "p", 0),
    );
    let inst = substitute(&body, "i", &Term::num(99)).unwrap();
    let inst = substitute(&inst, "j", &Term::num(100)).unwrap();
    assert_eq!(inst.canonical().text(), "$t_{100,100} = (1,p,0)$");
}

fn arb_var() -> impl Strategy<Value = String> {
    prop_oneof![Just("i".to_string()), Just("j".to_string()), Just("k".to_string()), Just("m".to_string())]
}

fn arb_state() -> impl Strategy<Value = String> {
    prop_oneof![Just("q0".to_string()), Just("q1".to_string()), Just("halt".to_string())]
}

fn arb_sym() -> impl Strategy<Value = TapeSymbol> {
    prop_oneof![
        Just(TapeSymbol::Zero),
        Just(TapeSymbol::One),
        Just(TapeSymbol::Blank),
        Just(TapeSymbol::LeftEnd)
    ]
}

/// Closed-term strategy: scalar terms draw from `bound`, or numerals.
fn arb_scalar(bound: Vec<String>) -> BoxedStrategy<Term> {
    let nums = (0u64..300).prop_map(Term::Num);
    if bound.is_empty() {
        prop_oneof![
            nums.clone(),
            (nums, prop_oneof![Just(1i8), Just(-1i8)])
                .prop_map(|(b, d)| Term::offset(b, d))
        ]
        .boxed()
    } else {
        let vars = proptest::sample::select(bound).prop_map(Term::Var);
        prop_oneof![
            (0u64..300).prop_map(Term::Num),
            vars.clone(),
            (vars, prop_oneof![Just(1i8), Just(-1i8)]).prop_map(|(b, d)| Term::offset(b, d))
        ]
        .boxed()
    }
}

fn arb_term(bound: Vec<String>) -> BoxedStrategy<Term> {
    let scalar = arb_scalar(bound.clone());
    let square = (arb_scalar(bound.clone()), arb_scalar(bound.clone()))
        .prop_map(|(r, c)| Term::square(r, c));
    let proj = square.clone().prop_map(Term::proj);
    let triple = (
        prop_oneof![arb_sym().prop_map(sym_term), proj.clone()],
        arb_state(),
        0u8..2,
    )
        .prop_map(|(s, st, fl)| Term::triple(s, &st, fl));
    prop_oneof![scalar, square, proj, triple, arb_sym().prop_map(sym_term)].boxed()
}

fn arb_rel() -> impl Strategy<Value = Rel> {
    prop_oneof![Just(Rel::Eq), Just(Rel::Ne), Just(Rel::Lt), Just(Rel::Le), Just(Rel::Gt), Just(Rel::Ge)]
}

fn arb_formula_inner(depth: u32, bound: Vec<String>) -> BoxedStrategy<Formula> {
    let atom = (arb_term(bound.clone()), arb_rel(), arb_term(bound.clone()))
        .prop_map(|(l, r, t)| Formula::Cmp { lhs: l, rel: r, rhs: t });
    if depth == 0 {
        return atom.boxed();
    }
    let sub = move |b: Vec<String>| arb_formula_inner(depth - 1, b);
    let b1 = bound.clone();
    let b2 = bound.clone();
    let b3 = bound.clone();
    prop_oneof![
        atom,
        sub(bound.clone()).prop_map(Formula::not),
        (sub(b1.clone()), sub(b1)).prop_map(|(l, r)| Formula::and(l, r)),
        (sub(b2.clone()), sub(b2)).prop_map(|(l, r)| Formula::or(l, r)),
        (sub(b3.clone()), sub(b3)).prop_map(|(l, r)| Formula::imp(l, r)),
        (arb_var(), Just(bound.clone())).prop_flat_map(move |(v, mut b)| {
            if !b.contains(&v) {
                b.push(v.clone());
            }
            arb_formula_inner(depth - 1, b).prop_map(move |body| Formula::forall(&v, body))
        }),
        (arb_var(), Just(bound)).prop_flat_map(move |(v, mut b)| {
            if !b.contains(&v) {
                b.push(v.clone());
            }
            arb_formula_inner(depth - 1, b).prop_map(move |body| Formula::exists(&v, body))
        }),
    ]
    .boxed()
}

pub(crate) fn arb_closed_formula() -> BoxedStrategy<Formula> {
    arb_formula_inner(3, Vec::new())
}

proptest! {
    #[test]
    fn roundtrip_parse_serialize(f in arb_closed_formula()) {
        let text = f.canonical();
        let back = parse_formula(text.text()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn bin_len_is_seven_times_ascii(f in arb_closed_formula()) {
        let c = f.canonical();
        prop_assert_eq!(c.bin_len(), 7 * c.ascii_len());
    }

    #[test]
    fn seq_len_is_additive(a in proptest::collection::vec(arb_closed_formula(), 0..4),
                           b in proptest::collection::vec(arb_closed_formula(), 0..4)) {
        let sa = FormulaSequence::from(a);
        let sb = FormulaSequence::from(b);
        let joined = seq_concat([sa.clone(), sb.clone()]);
        prop_assert_eq!(seq_ascii_len(&joined), seq_ascii_len(&sa) + seq_ascii_len(&sb));
    }

    #[test]
    fn seq_cmp_matches_string_cmp_on_joined_texts(
        a in proptest::collection::vec(arb_closed_formula(), 0..4),
        b in proptest::collection::vec(arb_closed_formula(), 0..4)) {
        let sa = FormulaSequence::from(a);
        let sb = FormulaSequence::from(b);
        prop_assert_eq!(seq_cmp(&sa, &sb), string_cmp(&sa.joined_text(), &sb.joined_text()));
    }

    #[test]
    fn seq_cmp_is_antisymmetric_and_total(
        a in proptest::collection::vec(arb_closed_formula(), 0..3),
        b in proptest::collection::vec(arb_closed_formula(), 0..3)) {
        let sa = FormulaSequence::from(a);
        let sb = FormulaSequence::from(b);
        let ab = seq_cmp(&sa, &sb);
        let ba = seq_cmp(&sb, &sa);
        prop_assert_eq!(ab, ba.reverse());
    }
}
