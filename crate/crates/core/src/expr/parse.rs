use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{BinaryOp, ExprError, Expression, UnaryOp};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

fn is_ident_continue(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

fn is_reserved(name: &str) -> bool {
    name == "pi" || UnaryOp::from_function_name(name).is_some()
}

fn syntax(offset: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        offset,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Token::Plus, start)),
            b'-' => out.push((Token::Minus, start)),
            b'*' => out.push((Token::Star, start)),
            b'/' => out.push((Token::Slash, start)),
            b'^' => out.push((Token::Caret, start)),
            b'(' => out.push((Token::LParen, start)),
            b')' => out.push((Token::RParen, start)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let literal = &text[start..i];
                let value: f64 = literal
                    .parse()
                    .map_err(|_| syntax(start, format!("malformed number `{literal}`")))?;
                out.push((Token::Number(value), start));
                continue;
            }
            _ if is_ident_start(b) => {
                while i < bytes.len() && is_ident_continue(bytes[i]) {
                    i += 1;
                }
                out.push((Token::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        }
        i += 1;
    }
    out.push((Token::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    coords: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].0
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].1
    }

    fn bump(&mut self) -> (Token, usize) {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<(), ExprError> {
        if *self.peek() == token {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expression, ExprError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Plus => BinaryOp::Add,
                Token::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expression::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expression, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Star => BinaryOp::Mul,
                Token::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expression::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expression, ExprError> {
        if *self.peek() == Token::Minus {
            self.bump();
            let inner = self.unary()?;
            return Ok(Expression::unary(UnaryOp::Neg, inner));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, ExprError> {
        let base = self.primary()?;
        if *self.peek() == Token::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Expression::binary(BinaryOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expression, ExprError> {
        let (token, offset) = self.bump();
        match token {
            Token::Number(v) => Ok(Expression::constant(v)),
            Token::LParen => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::Ident(name) => {
                if let Some(op) = UnaryOp::from_function_name(&name) {
                    self.expect(Token::LParen, "`(` after function name")?;
                    let arg = self.expr()?;
                    self.expect(Token::RParen, "`)`")?;
                    return Ok(Expression::unary(op, arg));
                }
                if name == "pi" {
                    return Ok(Expression::constant(core::f64::consts::PI));
                }
                match self.coords.iter().position(|c| *c == name) {
                    Some(index) => Ok(Expression::var(index, &name)),
                    None => Err(ExprError::UnknownIdentifier { name, offset }),
                }
            }
            Token::End => Err(syntax(offset, "unexpected end of input")),
            _ => Err(syntax(offset, "expected an operand")),
        }
    }
}

/// Check that `name` can be used as a coordinate.
pub fn validate_coordinate(name: &str) -> Result<(), ExprError> {
    let bytes = name.as_bytes();
    let well_formed = !bytes.is_empty()
        && is_ident_start(bytes[0])
        && bytes[1..].iter().all(|&b| is_ident_continue(b));
    if well_formed && !is_reserved(name) {
        Ok(())
    } else {
        Err(ExprError::InvalidCoordinate(name.to_string()))
    }
}

/// Parse `text` into an expression whose variables index into `coords`.
pub fn parse(text: &str, coords: &[&str]) -> Result<Expression, ExprError> {
    for (i, c) in coords.iter().enumerate() {
        validate_coordinate(c)?;
        if coords[..i].contains(c) {
            return Err(ExprError::InvalidCoordinate(c.to_string()));
        }
    }
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        coords,
    };
    let e = parser.expr()?;
    if *parser.peek() != Token::End {
        return Err(syntax(parser.offset(), "unexpected trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_coordinates() {
        assert!(parse("1", &["sin"]).is_err());
        assert!(parse("1", &["pi"]).is_err());
        assert!(parse("1", &["2x"]).is_err());
        assert!(parse("1", &["x", "x"]).is_err());
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let offset = |t: &str| match parse(t, &["x"]) {
            Err(ExprError::Syntax { offset, .. }) => offset,
            other => panic!("{t}: unexpected {other:?}"),
        };
        assert_eq!(offset("(x"), 2);
        assert_eq!(offset("x)"), 1);
        assert_eq!(offset("sin x"), 4);
        assert_eq!(offset("x $ 1"), 2);
        assert_eq!(offset(""), 0);
    }

    #[test]
    fn number_forms() {
        for (text, v) in [("1.5", 1.5), ("2e3", 2000.0), ("2.5E-1", 0.25), (".5", 0.5)] {
            assert_eq!(parse(text, &[]).unwrap().as_const(), Some(v), "{text}");
        }
    }
}
