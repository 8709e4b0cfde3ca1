use quon_core::check::Tolerance;
use quon_core::{Deformation, FockSpace, JLevel, Rational, Scalar, Surd};
use quonlab::eval::{Context, EvalError};
use quonlab::parse_identity_for;

const HOLDS: &[&str] = &[
    "qmut[b(1), bd(1)] == 1",
    "qmut[b(1), bd(0)] == 0",
    "qmut[b(1), bd(-1)] == 0",
    "comm[Jp, Jm] == 2*J0",
    "comm[J0, Jp] == Jp",
    "comm[J0, Jm] == -Jm",
    "comm[J0, bd(1)] == 1*bd(1)",
    "comm[J0, bd(-1)] == -bd(-1)",
    "comm[Jp, bd(1)] == 0",
    "comm[Jm, bd(-1)] == 0",
    "comm[N(1,0), bd(0)] == bd(1)",
    "comm[N(1,0), bd(1)] == 0",
    "comm[N(1,0), b(1)] == -b(0)",
    "comm[N(1,0), N(0,1)] == N(1,1) - N(0,0)",
    "comm[N(1,0), N(0,-1)] == N(1,-1)",
    "N(0,0) + N(1,1) + N(-1,-1) == N(0,0) + N(1,1) + N(-1,-1)",
    "b(0)*bd(0)*bd(0) == (1 + q)*bd(0) + q*q*bd(0)*bd(0)*b(0)",
];

fn exact_space(q: (i64, i64)) -> FockSpace<Surd> {
    let q = Rational::new(q.0.into(), q.1.into());
    FockSpace::new(
        JLevel::new(2),
        3,
        Deformation::new(Surd::from_rational(&q)).unwrap(),
    )
}

fn float_space(q: f64) -> FockSpace<f64> {
    FockSpace::new(JLevel::new(2), 3, Deformation::new(q).unwrap())
}

#[test]
fn documented_identities_hold_exactly() {
    for q in [(1, 2), (-3, 4), (0, 1)] {
        let ctx = Context::new(exact_space(q)).unwrap();
        for text in HOLDS.iter() {
            let id = parse_identity_for(text, JLevel::new(2)).unwrap();
            let c = ctx.check(&id, Tolerance::Exact).unwrap();
            assert!(
                c.passed,
                "q={:?}: {} residual {}",
                q,
                text,
                c.max_residual()
            );
        }
    }
}

#[test]
fn documented_identities_hold_in_floating_point() {
    for q in [-0.9, -0.5, 0.0, 0.5, 0.9] {
        let ctx = Context::new(float_space(q)).unwrap();
        for text in HOLDS.iter() {
            let id = parse_identity_for(text, JLevel::new(2)).unwrap();
            let c = ctx.check(&id, Tolerance::Relative(1e-10)).unwrap();
            assert!(c.passed, "q={}: {} residual {}", q, text, c.max_residual());
        }
    }
}

#[test]
fn false_identities_fail_with_nonzero_residual() {
    let ctx = Context::new(exact_space((1, 2))).unwrap();
    for text in [
        "comm[b(1), bd(1)] == 1",
        "comm[Jp, Jm] == J0",
        "comm[N(1,0), bd(0)] == bd(0)",
        "qmut[b(0), bd(0)] == 2",
    ] {
        let id = parse_identity_for(text, JLevel::new(2)).unwrap();
        let c = ctx.check(&id, Tolerance::Exact).unwrap();
        assert!(!c.passed, "{}", text);
        assert!(c.max_residual() > 0.0, "{}", text);
    }
}

#[test]
fn pure_scalar_identities() {
    let ctx = Context::new(exact_space((1, 2))).unwrap();
    let check = |t: &str| {
        ctx.check(
            &parse_identity_for(t, JLevel::new(2)).unwrap(),
            Tolerance::Exact,
        )
        .unwrap()
        .passed
    };
    assert!(check("q*q == 1/4"));
    assert!(check("0.5 == q"));
    assert!(!check("q == 1/3"));
}

#[test]
fn mismatched_particle_changes_are_rejected() {
    let ctx = Context::new(exact_space((1, 2))).unwrap();
    let id = parse_identity_for("bd(1) == b(1)", JLevel::new(2)).unwrap();
    assert!(matches!(
        ctx.check(&id, Tolerance::Exact),
        Err(EvalError::ShiftMismatch(1, -1))
    ));
    let id = parse_identity_for("bd(1) + b(1) == 0", JLevel::new(2)).unwrap();
    assert!(matches!(
        ctx.check(&id, Tolerance::Exact),
        Err(EvalError::ShiftMismatch(..))
    ));
}

#[test]
fn operators_escaping_the_truncation_are_reported() {
    let ctx = Context::new(exact_space((1, 2))).unwrap();
    let id = parse_identity_for("bd(1)*bd(1)*bd(1)*bd(1) == 0", JLevel::new(2)).unwrap();
    assert!(matches!(
        ctx.check(&id, Tolerance::Exact),
        Err(EvalError::Truncation(3))
    ));
}

#[test]
fn exact_and_float_agree_on_generated_scalars() {
    let e = Context::new(exact_space((1, 2))).unwrap();
    let f = Context::new(float_space(0.5)).unwrap();
    let id = parse_identity_for("qmut[b(0), bd(0)]*q == 0.5", JLevel::new(2)).unwrap();
    assert!(e.check(&id, Tolerance::Exact).unwrap().passed);
    assert!(f.check(&id, Tolerance::Relative(1e-10)).unwrap().passed);
}
