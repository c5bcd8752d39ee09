use super::{BinaryOp, Expression, Node, UnaryOp};

impl Expression {
    /// Exact partial derivative with respect to coordinate `index`.
    ///
    /// Zero and one constants are folded as the tree is built; no other
    /// simplification happens.
    pub fn differentiate(&self, index: usize) -> Expression {
        let zero = || Expression::constant(0.0);
        match self.node() {
            Node::Const(_) => zero(),
            Node::Var { index: i, .. } => Expression::constant(if *i == index { 1.0 } else { 0.0 }),
            Node::Unary(op, a) => {
                let da = a.differentiate(index);
                if da.is_const(0.0) {
                    return zero();
                }
                let outer = match op {
                    UnaryOp::Neg => return Expression::neg(da),
                    UnaryOp::Sin => Expression::apply(UnaryOp::Cos, a.clone()),
                    UnaryOp::Cos => Expression::neg(Expression::apply(UnaryOp::Sin, a.clone())),
                    UnaryOp::Tan => {
                        let cos = Expression::apply(UnaryOp::Cos, a.clone());
                        return Expression::div(da, Expression::pow(cos, Expression::constant(2.0)));
                    }
                    UnaryOp::Exp => self.clone(),
                    UnaryOp::Log => return Expression::div(da, a.clone()),
                    UnaryOp::Sqrt => {
                        let twice = Expression::mul(Expression::constant(2.0), self.clone());
                        return Expression::div(da, twice);
                    }
                };
                Expression::mul(outer, da)
            }
            Node::Binary(op, a, b) => {
                let da = a.differentiate(index);
                let db = b.differentiate(index);
                match op {
                    BinaryOp::Add => Expression::add(da, db),
                    BinaryOp::Sub => Expression::sub(da, db),
                    BinaryOp::Mul => Expression::add(
                        Expression::mul(da, b.clone()),
                        Expression::mul(a.clone(), db),
                    ),
                    BinaryOp::Div => {
                        if db.is_const(0.0) {
                            return Expression::div(da, b.clone());
                        }
                        let numerator = Expression::sub(
                            Expression::mul(da, b.clone()),
                            Expression::mul(a.clone(), db),
                        );
                        Expression::div(numerator, Expression::pow(b.clone(), Expression::constant(2.0)))
                    }
                    BinaryOp::Pow => {
                        if !b.depends_on(index) {
                            // d(f^c) = c f^(c-1) f'
                            if da.is_const(0.0) {
                                return zero();
                            }
                            let reduced = Expression::sub(b.clone(), Expression::constant(1.0));
                            let scaled = Expression::mul(b.clone(), Expression::pow(a.clone(), reduced));
                            return Expression::mul(scaled, da);
                        }
                        if da.is_const(0.0) {
                            // 0^g is locally constant wherever it is defined
                            if a.evaluate(&[]) == Ok(0.0) {
                                return zero();
                            }
                            let log_term = Expression::mul(db, Expression::apply(UnaryOp::Log, a.clone()));
                            return Expression::mul(self.clone(), log_term);
                        }
                        // d(f^g) = f^g (g' log f + g f'/f)
                        let log_term = Expression::mul(db, Expression::apply(UnaryOp::Log, a.clone()));
                        let ratio_term = Expression::div(Expression::mul(b.clone(), da), a.clone());
                        Expression::mul(self.clone(), Expression::add(log_term, ratio_term))
                    }
                }
            }
        }
    }
}
