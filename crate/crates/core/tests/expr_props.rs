use curvkit_core::expr::{parse, BinaryOp, Node, UnaryOp};
use curvkit_core::Expression;
use proptest::prelude::*;

const COORDS: [&str; 2] = ["x", "y"];

fn leaf() -> impl Strategy<Value = Expression> {
    prop_oneof![
        (-12i32..=12).prop_map(|k| Expression::constant(k as f64 / 4.0)),
        (0usize..2).prop_map(|i| Expression::var(i, COORDS[i])),
    ]
}

fn unary_op() -> impl Strategy<Value = UnaryOp> {
    prop_oneof![
        Just(UnaryOp::Neg),
        Just(UnaryOp::Sin),
        Just(UnaryOp::Cos),
        Just(UnaryOp::Tan),
        Just(UnaryOp::Exp),
        Just(UnaryOp::Log),
        Just(UnaryOp::Sqrt),
    ]
}

fn binary_op() -> impl Strategy<Value = BinaryOp> {
    prop_oneof![
        Just(BinaryOp::Add),
        Just(BinaryOp::Sub),
        Just(BinaryOp::Mul),
        Just(BinaryOp::Div),
        Just(BinaryOp::Pow),
    ]
}

/// Random trees of depth at most 6.
fn tree() -> impl Strategy<Value = Expression> {
    leaf().prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            (unary_op(), inner.clone()).prop_map(|(op, a)| Expression::unary(op, a)),
            (binary_op(), inner.clone(), inner).prop_map(|(op, a, b)| Expression::binary(op, a, b)),
        ]
    })
}

fn eval(e: &Expression, p: &[f64]) -> Option<f64> {
    e.evaluate(p).ok().filter(|v| v.is_finite() && v.abs() < 1e6)
}

/// Two-point central difference with `h = 1e-6 (1 + |p_v|)`.
fn central(e: &Expression, p: &[f64], index: usize) -> Option<f64> {
    let h = 1e-6 * (1.0 + p[index].abs());
    let at = |t: f64| {
        let mut q = p.to_vec();
        q[index] += t;
        eval(e, &q)
    };
    Some((at(h)? - at(-h)?) / (2.0 * h))
}

/// Five-point central difference.
fn stencil(e: &Expression, p: &[f64], index: usize, h: f64) -> Option<f64> {
    let at = |t: f64| {
        let mut q = p.to_vec();
        q[index] += t;
        eval(e, &q)
    };
    Some((-at(2.0 * h)? + 8.0 * at(h)? - 8.0 * at(-h)? + at(-2.0 * h)?) / (12.0 * h))
}

/// Points where the symbolic derivative is defined: `sqrt` and power
/// bases away from zero, and `f^g` with `g` depending on the coordinate
/// (differentiated through `log f`) only for positive `f`. A closed zero
/// base is exempt since `0^g` is locally constant.
fn smooth_at(e: &Expression, p: &[f64], index: usize) -> bool {
    let nonzero = |a: &Expression| a.evaluate(p).is_ok_and(|v| v != 0.0);
    match e.node() {
        Node::Const(_) | Node::Var { .. } => true,
        Node::Unary(UnaryOp::Sqrt, a) => nonzero(a) && smooth_at(a, p, index),
        Node::Unary(_, a) => smooth_at(a, p, index),
        Node::Binary(op, a, b) => {
            let base_ok = match op {
                BinaryOp::Pow if a.evaluate(&[]) == Ok(0.0) => true,
                BinaryOp::Pow if b.depends_on(index) => a.evaluate(p).is_ok_and(|v| v > 0.0),
                BinaryOp::Pow => nonzero(a),
                _ => true,
            };
            base_ok && smooth_at(a, p, index) && smooth_at(b, p, index)
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 256,
        max_global_rejects: 200_000,
        ..ProptestConfig::default()
    })]

    // The finite-difference oracle is only trusted where two wide
    // five-point stencils agree; other draws are discarded, not compared.
    #[test]
    fn derivative_matches_finite_difference(
        e in tree(),
        x in 0.2f64..1.5,
        y in 0.2f64..1.5,
        index in 0usize..2,
    ) {
        let p = [x, y];
        let fd_coarse = stencil(&e, &p, index, 2e-3);
        let fd_fine = stencil(&e, &p, index, 1e-3);
        prop_assume!(smooth_at(&e, &p, index));
        prop_assume!(fd_coarse.is_some() && fd_fine.is_some());
        let (coarse, fine) = (fd_coarse.unwrap(), fd_fine.unwrap());
        prop_assume!((coarse - fine).abs() <= 1e-9 * (1.0 + fine.abs()));
        let fd = central(&e, &p, index);
        prop_assume!(fd.is_some());
        let fd = fd.unwrap();
        let symbolic = e.differentiate(index).evaluate(&p);
        prop_assert!(symbolic.is_ok(), "{e}: {symbolic:?}");
        let symbolic = symbolic.unwrap();
        prop_assert!(
            (symbolic - fd).abs() <= 1e-6 * (1.0 + fd.abs()),
            "d/d{} {e} at {p:?}: symbolic {symbolic}, fd {fd}",
            COORDS[index]
        );
    }

    #[test]
    fn print_parse_round_trip(e in tree(), x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let once = parse(&e.to_string(), &COORDS).unwrap();
        let twice = parse(&once.to_string(), &COORDS).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(once.to_string(), twice.to_string());
        let p = [x, y];
        match (e.evaluate(&p), once.evaluate(&p)) {
            (Ok(a), Ok(b)) => prop_assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()), "{e}: {a} vs {b}"),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{e}: {a:?} vs {b:?}"),
        }
    }

    #[test]
    fn evaluation_is_deterministic(e in tree(), x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let p = [x, y];
        let first = e.evaluate(&p).map(f64::to_bits);
        prop_assert_eq!(first, e.evaluate(&p).map(f64::to_bits));
    }
}
