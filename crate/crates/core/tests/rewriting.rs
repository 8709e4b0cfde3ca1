use proptest::prelude::*;
use quon_core::scalar::ratio;
use quon_core::{
    Deformation, FockSpace, Generator, JLevel, ModeIndex, Monomial, OperatorPolynomial,
    QuonAlgebra, Rational,
};

fn alg(q: Rational) -> QuonAlgebra<Rational> {
    QuonAlgebra::new(Deformation::new(q).unwrap())
}

fn generator() -> impl Strategy<Value = Generator> {
    (any::<bool>(), 0..2i32).prop_map(|(c, m)| {
        let m = ModeIndex::integer(m);
        if c {
            Generator::creation(m)
        } else {
            Generator::annihilation(m)
        }
    })
}

fn deformation() -> impl Strategy<Value = Rational> {
    (-6i64..=6).prop_map(|n| ratio(n, 6))
}

fn polynomial() -> impl Strategy<Value = (Vec<Generator>, i64)> {
    (prop::collection::vec(generator(), 0..5), -3i64..=3)
}

proptest! {
    #[test]
    fn rewriting_is_confluent(
        word in prop::collection::vec(generator(), 0..=8),
        choices in prop::collection::vec(0usize..8, 64),
        q in deformation(),
    ) {
        let a = alg(q);
        let m = Monomial::unit(word);
        let leftmost = a.normal_order(&m);
        let mut it = choices.into_iter().cycle();
        let random = a.normal_order_by(&m, |inv| it.next().unwrap() % inv.len());
        let rightmost = a.normal_order_by(&m, |inv| inv.len() - 1);
        prop_assert_eq!(&leftmost, &random);
        prop_assert_eq!(&leftmost, &rightmost);
    }

    #[test]
    fn push_formula_matches_rewriting(word in prop::collection::vec(generator(), 0..=8), q in deformation()) {
        let a = alg(q);
        prop_assert_eq!(a.product(&word), a.normal_order(&Monomial::unit(word.clone())));
    }

    #[test]
    fn adjoint_reverses_products(x in polynomial(), y in polynomial(), q in deformation()) {
        let a = alg(q);
        let px = a.product(&x.0).scale(&ratio(x.1, 1));
        let py = a.product(&y.0).scale(&ratio(y.1, 1));
        prop_assert_eq!(a.multiply(&px, &py).adjoint(), a.multiply(&py.adjoint(), &px.adjoint()));
    }

    #[test]
    fn multiplication_is_associative(x in polynomial(), y in polynomial(), z in polynomial(), q in deformation()) {
        let a = alg(q);
        let (px, py, pz) = (a.product(&x.0), a.product(&y.0), a.product(&z.0));
        prop_assert_eq!(a.multiply(&a.multiply(&px, &py), &pz), a.multiply(&px, &a.multiply(&py, &pz)));
    }
}

/// Normal ordering must agree with composing the Fock-space matrices of the
/// individual generators, on every sector where the product stays in range.
#[test]
fn normal_form_matches_matrix_products() {
    let level = JLevel::new(2);
    for q in [ratio(1, 2), ratio(-2, 5), ratio(0, 1)] {
        let space = FockSpace::new(level, 4, Deformation::new(q.clone()).unwrap());
        let a = alg(q);
        let words: [&[(bool, i32)]; 5] = [
            &[(false, 1), (true, 1)],
            &[(false, 0), (false, 1), (true, 1), (true, 0)],
            &[(false, -1), (true, 0), (false, 0), (true, -1)],
            &[(true, 1), (false, 1), (false, 1), (true, 1), (true, 0)],
            &[(false, 0), (false, 0), (true, 0), (true, 0), (true, 1)],
        ];
        for w in words {
            let gens: Vec<Generator> = w
                .iter()
                .map(|&(c, m)| {
                    if c {
                        Generator::creation(ModeIndex::integer(m))
                    } else {
                        Generator::annihilation(ModeIndex::integer(m))
                    }
                })
                .collect();
            let mut composed = space.identity_operator();
            for g in gens.iter().rev() {
                let op = if g.is_creation() {
                    space.creation_operator(g.mode)
                } else {
                    space.annihilation_operator(g.mode)
                };
                composed = op.unwrap().compose(&composed).unwrap();
            }
            let product = a.product(&gens);
            if product.is_zero() {
                assert!(composed.blocks().all(|(_, b)| b.is_zero()), "word {:?}", w);
                continue;
            }
            let normal = space.block_operator(&product).unwrap();
            let mut compared = 0;
            for (n, block) in composed.blocks() {
                if let Some(other) = normal.block(n) {
                    assert_eq!(block, other, "word {:?} sector {}", w, n);
                    compared += 1;
                }
            }
            assert!(compared > 0);
        }
    }
}

#[test]
fn text_format_golden() {
    let golden = include_str!("golden/text_format.txt");
    let a = alg(ratio(1, 2));
    let b = |m| OperatorPolynomial::annihilation(ModeIndex::integer(m));
    let bd = |m| OperatorPolynomial::creation(ModeIndex::integer(m));
    let cases = [
        a.multiply(&b(0), &bd(0)),
        a.multiply(&b(0), &bd(1)),
        a.q_mutator(&b(1), &bd(1)),
        a.multiply(&a.multiply(&b(0), &b(1)), &bd(0)),
        a.multiply(&a.multiply(&b(0), &b(0)), &a.multiply(&bd(0), &bd(0))),
        OperatorPolynomial::zero(),
    ];
    let rendered: Vec<String> = cases.iter().map(ToString::to_string).collect();
    let expected: Vec<&str> = golden.lines().collect();
    assert_eq!(rendered, expected);
}
