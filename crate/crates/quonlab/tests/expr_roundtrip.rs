use proptest::prelude::*;
use quon_core::ModeIndex;
use quonlab::expr::{parse_identity, Atom, Factor, Identity, Poly, ScalarLiteral, Sign, Term};

fn mode() -> impl Strategy<Value = ModeIndex> {
    (-3i32..=3).prop_map(ModeIndex::from_twice)
}

fn atom() -> impl Strategy<Value = Atom> {
    prop_oneof![
        mode().prop_map(Atom::Creation),
        mode().prop_map(Atom::Annihilation),
        (mode(), mode()).prop_map(|(a, b)| Atom::Transition(a, b)),
        Just(Atom::J0),
        Just(Atom::Jp),
        Just(Atom::Jm),
    ]
}

fn scalar() -> impl Strategy<Value = ScalarLiteral> {
    prop_oneof![
        Just("2"),
        Just("1/3"),
        Just("0.25"),
        Just("1e-3"),
        Just("10"),
        Just("7/2")
    ]
    .prop_map(|t| ScalarLiteral {
        text: t.to_string(),
        value: t.parse().unwrap(),
    })
}

fn poly() -> impl Strategy<Value = Poly> {
    let leaf = prop_oneof![
        3 => atom().prop_map(Factor::Atom),
        1 => scalar().prop_map(Factor::Scalar),
        1 => Just(Factor::Q),
    ];
    let factor = leaf.prop_recursive(3, 24, 3, |inner| {
        let p = poly_of(inner.clone());
        prop_oneof![
            (p.clone(), p.clone()).prop_map(|(a, b)| Factor::Comm(Box::new(a), Box::new(b))),
            (p.clone(), p.clone()).prop_map(|(a, b)| Factor::QMut(Box::new(a), Box::new(b))),
            p.prop_map(|a| Factor::Group(Box::new(a))),
        ]
    });
    poly_of(factor)
}

fn poly_of(factor: impl Strategy<Value = Factor> + Clone) -> impl Strategy<Value = Poly> + Clone {
    let sign = prop_oneof![Just(Sign::Plus), Just(Sign::Minus)];
    let term = prop::collection::vec(factor, 1..4).prop_map(|factors| Term { factors });
    prop::collection::vec((sign, term), 1..4).prop_map(|terms| Poly { terms })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn print_then_parse_is_identity(lhs in poly(), rhs in poly()) {
        let id = Identity { lhs, rhs };
        let text = id.to_string();
        let back = parse_identity(&text).map_err(|e| TestCaseError::fail(format!("{}: {}", text, e)))?;
        prop_assert_eq!(&back, &id);
        prop_assert_eq!(back.to_string(), text);
    }
}

#[test]
fn whitespace_and_newlines_are_insignificant() {
    let a = parse_identity("comm[ Jp ,\n  Jm ]==2 * J0").unwrap();
    let b = parse_identity("comm[Jp, Jm] == 2*J0").unwrap();
    assert_eq!(a, b);
}

#[test]
fn syntax_errors_carry_positions() {
    let e = parse_identity("comm[Jp, Jm]\n == 2 * * J0").unwrap_err();
    assert_eq!((e.at.line, e.at.column), (2, 9));
    let e = parse_identity("bd(1) == x").unwrap_err();
    assert_eq!((e.at.line, e.at.column), (1, 10));
    assert!(parse_identity("bd(1)").is_err());
    assert!(parse_identity("b(1/3) == 0").is_err());
    assert!(parse_identity("comm[b(0) == 0").is_err());
}
