//! Symbolic scalar expressions over chart coordinates.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'pi' | coord | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | tan | exp | log | sqrt
//! coord   := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! `^` binds tightest and is right-associative (`x^y^z = x^(y^z)`); unary
//! minus sits between `^` and `*`, so `-x^2 = -(x^2)`.

mod diff;
mod parse;
mod print;

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use core::fmt;

pub use parse::{parse, validate_coordinate};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("invalid coordinate name `{0}`")]
    InvalidCoordinate(String),

    #[error("domain error in `{node}`: {reason}")]
    Domain { node: String, reason: &'static str },

    #[error("point has {found} coordinates but the expression uses index {index}")]
    PointTooShort { index: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
}

impl UnaryOp {
    pub(crate) fn function_name(self) -> Option<&'static str> {
        Some(match self {
            UnaryOp::Neg => return None,
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Tan => "tan",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Sqrt => "sqrt",
        })
    }

    pub(crate) fn from_function_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "tan" => UnaryOp::Tan,
            "exp" => UnaryOp::Exp,
            "log" => UnaryOp::Log,
            "sqrt" => UnaryOp::Sqrt,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var { index: usize, name: Arc<str> },
    Unary(UnaryOp, Expression),
    Binary(BinaryOp, Expression, Expression),
}

/// Immutable, cheaply clonable expression tree. Subtrees are shared.
#[derive(Clone, PartialEq)]
pub struct Expression(Arc<Node>);

impl fmt::Debug for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expression({self})")
    }
}

impl Expression {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn constant(value: f64) -> Self {
        Expression(Arc::new(Node::Const(value)))
    }

    pub fn var(index: usize, name: &str) -> Self {
        Expression(Arc::new(Node::Var {
            index,
            name: Arc::from(name),
        }))
    }

    pub fn unary(op: UnaryOp, arg: Expression) -> Self {
        Expression(Arc::new(Node::Unary(op, arg)))
    }

    pub fn binary(op: BinaryOp, lhs: Expression, rhs: Expression) -> Self {
        Expression(Arc::new(Node::Binary(op, lhs, rhs)))
    }

    pub fn as_const(&self) -> Option<f64> {
        match *self.0 {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub(crate) fn is_const(&self, value: f64) -> bool {
        self.as_const() == Some(value)
    }

    /// True if the expression mentions coordinate `index`.
    pub fn depends_on(&self, index: usize) -> bool {
        match self.node() {
            Node::Const(_) => false,
            Node::Var { index: i, .. } => *i == index,
            Node::Unary(_, a) => a.depends_on(index),
            Node::Binary(_, a, b) => a.depends_on(index) || b.depends_on(index),
        }
    }

    /// Number of nodes, counting shared subtrees once per occurrence.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Const(_) | Node::Var { .. } => 1,
            Node::Unary(_, a) => 1 + a.size(),
            Node::Binary(_, a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Evaluate at `point`, where `point[i]` is the value of coordinate `i`.
    pub fn evaluate(&self, point: &[f64]) -> Result<f64, ExprError> {
        match self.node() {
            Node::Const(c) => Ok(*c),
            Node::Var { index, .. } => point.get(*index).copied().ok_or(ExprError::PointTooShort {
                index: *index,
                found: point.len(),
            }),
            Node::Unary(op, a) => {
                let x = a.evaluate(point)?;
                match op {
                    UnaryOp::Neg => Ok(-x),
                    UnaryOp::Sin => Ok(libm::sin(x)),
                    UnaryOp::Cos => Ok(libm::cos(x)),
                    UnaryOp::Tan => Ok(libm::tan(x)),
                    UnaryOp::Exp => Ok(libm::exp(x)),
                    UnaryOp::Log if x <= 0.0 => Err(self.domain("logarithm of a non-positive value")),
                    UnaryOp::Log => Ok(libm::log(x)),
                    UnaryOp::Sqrt if x < 0.0 => Err(self.domain("square root of a negative value")),
                    UnaryOp::Sqrt => Ok(libm::sqrt(x)),
                }
            }
            Node::Binary(op, a, b) => {
                let x = a.evaluate(point)?;
                let y = b.evaluate(point)?;
                match op {
                    BinaryOp::Add => Ok(x + y),
                    BinaryOp::Sub => Ok(x - y),
                    BinaryOp::Mul => Ok(x * y),
                    BinaryOp::Div if y == 0.0 => Err(self.domain("division by zero")),
                    BinaryOp::Div => Ok(x / y),
                    BinaryOp::Pow => {
                        if x == 0.0 && y < 0.0 {
                            Err(self.domain("zero raised to a negative power"))
                        } else if x < 0.0 && libm::trunc(y) != y {
                            Err(self.domain("negative base with non-integer exponent"))
                        } else {
                            Ok(libm::pow(x, y))
                        }
                    }
                }
            }
        }
    }

    fn domain(&self, reason: &'static str) -> ExprError {
        ExprError::Domain {
            node: self.to_string(),
            reason,
        }
    }

    // Constant-folding constructors used by differentiation.

    pub(crate) fn add(a: Expression, b: Expression) -> Expression {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expression::constant(x + y),
            (Some(x), _) if x == 0.0 => b,
            (_, Some(y)) if y == 0.0 => a,
            _ => Expression::binary(BinaryOp::Add, a, b),
        }
    }

    pub(crate) fn sub(a: Expression, b: Expression) -> Expression {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expression::constant(x - y),
            (Some(x), _) if x == 0.0 => Expression::neg(b),
            (_, Some(y)) if y == 0.0 => a,
            _ => Expression::binary(BinaryOp::Sub, a, b),
        }
    }

    pub(crate) fn mul(a: Expression, b: Expression) -> Expression {
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) => Expression::constant(x * y),
            (Some(x), _) | (_, Some(x)) if x == 0.0 => Expression::constant(0.0),
            (Some(x), _) if x == 1.0 => b,
            (_, Some(y)) if y == 1.0 => a,
            _ => Expression::binary(BinaryOp::Mul, a, b),
        }
    }

    pub(crate) fn div(a: Expression, b: Expression) -> Expression {
        match (a.as_const(), b.as_const()) {
            (Some(x), _) if x == 0.0 => Expression::constant(0.0),
            (_, Some(y)) if y == 1.0 => a,
            _ => Expression::binary(BinaryOp::Div, a, b),
        }
    }

    pub(crate) fn pow(a: Expression, b: Expression) -> Expression {
        match b.as_const() {
            Some(y) if y == 1.0 => a,
            Some(y) if y == 0.0 => Expression::constant(1.0),
            _ => Expression::binary(BinaryOp::Pow, a, b),
        }
    }

    pub(crate) fn neg(a: Expression) -> Expression {
        match a.node() {
            Node::Const(c) => Expression::constant(-c),
            Node::Unary(UnaryOp::Neg, inner) => inner.clone(),
            _ => Expression::unary(UnaryOp::Neg, a),
        }
    }

    pub(crate) fn apply(op: UnaryOp, a: Expression) -> Expression {
        Expression::unary(op, a)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::write_expr(f, self, 0)
    }
}
