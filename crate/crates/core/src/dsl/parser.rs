//! Recursive-descent parser.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | variable | constant | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right associative and binds tighter than unary minus, so `-x1^2`
//! is `-(x1^2)` and `2^3^2` is `2^(3^2)`.

use super::ast::{BinOp, Expr, NamedConst, Var};
use super::lexer::{Token, TokenKind};
use super::DslError;
use crate::jet::ElemFn;

const MAX_DEPTH: usize = 200;

pub fn parse(tokens: &[Token], src_len: usize) -> Result<Expr, DslError> {
    let mut p = Parser {
        tokens,
        pos: 0,
        depth: 0,
        end: src_len,
    };
    if tokens.is_empty() {
        return Err(DslError::parse(0, "empty expression"));
    }
    let e = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(DslError::parse(
            t.offset,
            format!("unexpected trailing token {:?}", t.text),
        ));
    }
    Ok(e)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    depth: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.offset)
    }

    fn eat_op(&mut self, op: char) -> bool {
        if self.peek().is_some_and(|t| t.is_op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> Result<(), DslError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(DslError::parse(self.here(), "expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat_op('+') {
                BinOp::Add
            } else if self.eat_op('-') {
                BinOp::Sub
            } else {
                break;
            };
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat_op('*') {
                BinOp::Mul
            } else if self.eat_op('/') {
                BinOp::Div
            } else {
                break;
            };
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        self.enter()?;
        let e = if self.eat_op('-') {
            Expr::Neg(Box::new(self.unary()?))
        } else {
            self.power()?
        };
        self.depth -= 1;
        Ok(e)
    }

    fn power(&mut self) -> Result<Expr, DslError> {
        let base = self.primary()?;
        if self.eat_op('^') {
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, DslError> {
        let at = self.here();
        let Some(tok) = self.next() else {
            return Err(DslError::parse(at, "unexpected end of expression"));
        };
        match tok.kind {
            TokenKind::Number => {
                let v: f64 = tok
                    .text
                    .parse()
                    .map_err(|_| DslError::parse(tok.offset, format!("bad number {:?}", tok.text)))?;
                if !v.is_finite() {
                    return Err(DslError::parse(tok.offset, format!("number {} overflows", tok.text)));
                }
                Ok(Expr::Const(v))
            }
            TokenKind::Ident => self.identifier(tok),
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect_rparen(tok.offset)?;
                Ok(inner)
            }
            TokenKind::RParen => Err(DslError::parse(tok.offset, "unbalanced ')'")),
            TokenKind::Comma | TokenKind::Op => Err(DslError::parse(tok.offset, format!("unexpected {:?}", tok.text))),
        }
    }

    fn identifier(&mut self, tok: &Token) -> Result<Expr, DslError> {
        let name = tok.text.as_str();
        if let Some(v) = Var::from_name(name) {
            return Ok(Expr::Var(v));
        }
        match name {
            "pi" => return Ok(Expr::Named(NamedConst::Pi)),
            "e" => return Ok(Expr::Named(NamedConst::E)),
            _ => {}
        }
        let Some(func) = ElemFn::from_name(name) else {
            return Err(DslError::parse(tok.offset, format!("unknown identifier {name:?}")));
        };
        match self.next() {
            Some(t) if t.kind == TokenKind::LParen => {}
            _ => {
                return Err(DslError::parse(
                    tok.offset,
                    format!("function {name} must be called with parentheses"),
                ))
            }
        }
        let open = self.tokens[self.pos - 1].offset;
        let mut args = vec![self.expr()?];
        while self.peek().is_some_and(|t| t.kind == TokenKind::Comma) {
            self.pos += 1;
            args.push(self.expr()?);
        }
        self.expect_rparen(open)?;
        if args.len() != 1 {
            return Err(DslError::parse(
                tok.offset,
                format!("{name} takes 1 argument, got {}", args.len()),
            ));
        }
        Ok(Expr::call(func, args.pop().expect("one argument")))
    }

    fn expect_rparen(&mut self, open: usize) -> Result<(), DslError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::RParen => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(DslError::parse(
                t.offset,
                format!("expected ')' to close '(' at {open}"),
            )),
            None => Err(DslError::parse(self.end, format!("unclosed '(' at {open}"))),
        }
    }
}
