use core::fmt;

use super::{BinaryOp, Expression, Node, UnaryOp};

// Binding strength of each node kind; a child printed below its required
// level gets parentheses.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const NEGATION: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn level(e: &Expression) -> u8 {
    match e.node() {
        Node::Const(c) if *c < 0.0 || c.is_sign_negative() => NEGATION,
        Node::Const(_) | Node::Var { .. } => ATOM,
        Node::Unary(UnaryOp::Neg, _) => NEGATION,
        Node::Unary(..) => ATOM,
        Node::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => SUM,
        Node::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => PRODUCT,
        Node::Binary(BinaryOp::Pow, ..) => POWER,
    }
}

/// Canonical printer: parsing its output yields the same tree as the one
/// printed, for every tree produced by the parser.
pub(super) fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expression, min: u8) -> fmt::Result {
    if level(e) < min {
        f.write_str("(")?;
        write_expr(f, e, 0)?;
        return f.write_str(")");
    }
    match e.node() {
        Node::Const(c) if c.is_sign_negative() => write!(f, "-{}", -c),
        Node::Const(c) => write!(f, "{c}"),
        Node::Var { name, .. } => f.write_str(name),
        Node::Unary(UnaryOp::Neg, a) => {
            f.write_str("-")?;
            write_expr(f, a, NEGATION)
        }
        Node::Unary(op, a) => {
            f.write_str(op.function_name().unwrap_or("?"))?;
            f.write_str("(")?;
            write_expr(f, a, 0)?;
            f.write_str(")")
        }
        Node::Binary(op, a, b) => {
            let (sym, lhs_min, rhs_min) = match op {
                BinaryOp::Add => (" + ", SUM, PRODUCT),
                BinaryOp::Sub => (" - ", SUM, PRODUCT),
                BinaryOp::Mul => ("*", PRODUCT, NEGATION),
                BinaryOp::Div => ("/", PRODUCT, NEGATION),
                BinaryOp::Pow => ("^", ATOM, NEGATION),
            };
            write_expr(f, a, lhs_min)?;
            f.write_str(sym)?;
            write_expr(f, b, rhs_min)
        }
    }
}

#[cfg(test)]
mod tests {
    use alloc::string::ToString;

    use crate::expr::parse;

    #[test]
    fn minimal_parentheses() {
        let c = &["x", "y", "z"];
        for (text, printed) in [
            ("x + (y + z)", "x + (y + z)"),
            ("(x + y) + z", "x + y + z"),
            ("(x*y)^2", "(x*y)^2"),
            ("x^(y^z)", "x^y^z"),
            ("(x^y)^z", "(x^y)^z"),
            ("-(x + y)", "-(x + y)"),
            ("(-x)^2", "(-x)^2"),
            ("x*(-y)", "x*-y"),
            ("sin(x)^2", "sin(x)^2"),
        ] {
            assert_eq!(parse(text, c).unwrap().to_string(), printed, "{text}");
        }
    }
}
