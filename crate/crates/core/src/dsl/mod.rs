//! Expression language for scalar functions of `(t, x1, x2, x3)`.
//!
//! Used for medium profiles, field components and sources. Expressions are
//! parsed once into an immutable [`Expr`] and evaluated over jets.

mod ast;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

pub use ast::{add, div, mul, neg, pow, sub, BinOp, Expr, NamedConst, Var};
pub use lexer::{tokenize, Token, TokenKind};

use crate::jet::{Jet4, JetError, Point4, VecFieldSample};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DslErrorKind {
    Lex,
    Parse,
}

/// Lexing or parsing failure at a byte offset of the source.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} error at offset {offset}: {message}", match .kind { DslErrorKind::Lex => "lex", DslErrorKind::Parse => "parse" })]
pub struct DslError {
    pub kind: DslErrorKind,
    pub offset: usize,
    pub message: String,
}

impl DslError {
    fn lex(offset: usize, message: String) -> Self {
        DslError {
            kind: DslErrorKind::Lex,
            offset,
            message,
        }
    }

    fn parse(offset: usize, message: impl Into<String>) -> Self {
        DslError {
            kind: DslErrorKind::Parse,
            offset,
            message: message.into(),
        }
    }

    pub fn offset(&self) -> usize {
        self.offset
    }
}

/// Parses a token sequence produced by [`tokenize`] on a source of `src_len` bytes.
pub fn parse_tokens(tokens: &[Token], src_len: usize) -> Result<Expr, DslError> {
    parser::parse(tokens, src_len)
}

pub fn parse(src: &str) -> Result<Expr, DslError> {
    let tokens = tokenize(src)?;
    parse_tokens(&tokens, src.len())
}

/// A named scalar or vector field given by expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    pub name: String,
    pub components: FieldComponents,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldComponents {
    Scalar(Expr),
    Vector([Expr; 3]),
}

/// A component expression that failed to parse.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("field {field}[{component}]: {source}")]
pub struct FieldParseError {
    pub field: String,
    pub component: usize,
    pub source: DslError,
}

impl FieldSpec {
    pub fn scalar(name: &str, src: &str) -> Result<Self, FieldParseError> {
        let e = parse(src).map_err(|source| FieldParseError {
            field: name.to_string(),
            component: 0,
            source,
        })?;
        Ok(FieldSpec {
            name: name.to_string(),
            components: FieldComponents::Scalar(e),
        })
    }

    pub fn vector<S: AsRef<str>>(name: &str, srcs: &[S; 3]) -> Result<Self, FieldParseError> {
        let mut out = Vec::with_capacity(3);
        for (k, s) in srcs.iter().enumerate() {
            out.push(parse(s.as_ref()).map_err(|source| FieldParseError {
                field: name.to_string(),
                component: k + 1,
                source,
            })?);
        }
        let [a, b, c]: [Expr; 3] = out.try_into().expect("three components");
        Ok(FieldSpec {
            name: name.to_string(),
            components: FieldComponents::Vector([a, b, c]),
        })
    }

    pub fn from_exprs(name: &str, exprs: [Expr; 3]) -> Self {
        FieldSpec {
            name: name.to_string(),
            components: FieldComponents::Vector(exprs),
        }
    }

    pub fn exprs(&self) -> &[Expr] {
        match &self.components {
            FieldComponents::Scalar(e) => std::slice::from_ref(e),
            FieldComponents::Vector(v) => v,
        }
    }

    /// Vector sample; a scalar field fills the first component only.
    pub fn eval_vector(&self, p: Point4) -> Result<VecFieldSample, JetError> {
        match &self.components {
            FieldComponents::Vector([a, b, c]) => Ok(VecFieldSample([a.eval_jet(p)?, b.eval_jet(p)?, c.eval_jet(p)?])),
            FieldComponents::Scalar(e) => Ok(VecFieldSample([e.eval_jet(p)?, Jet4::default(), Jet4::default()])),
        }
    }

    pub fn eval_scalar(&self, p: Point4) -> Result<Jet4, JetError> {
        self.exprs()[0].eval_jet(p)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.components {
            FieldComponents::Scalar(e) => write!(f, "{} = {e}", self.name),
            FieldComponents::Vector([a, b, c]) => write!(f, "{} = [{a}, {b}, {c}]", self.name),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(src: &str, p: Point4) -> f64 {
        parse(src).unwrap().eval(p).unwrap()
    }

    #[test]
    fn precedence_rules() {
        let p = Point4::new(0.0, 3.0, 0.0, 0.0);
        assert_eq!(value("2^3^2", p), 512.0);
        assert_eq!(value("-x1^2", p), -9.0);
        assert_eq!(value("2^-1", p), 0.5);
        assert_eq!(value("1 - 2 - 3", p), -4.0);
        assert_eq!(value("8 / 2 / 2", p), 2.0);
        assert_eq!(value("1 + 2 * 3 ^ 2", p), 19.0);
        assert_eq!(value("-(1 + 2) * 2", p), -6.0);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let e = parse("sin(x1, x2)").unwrap_err();
        assert_eq!(e.kind, DslErrorKind::Parse);
        assert!(e.message.contains("1 argument"), "{e}");

        assert_eq!(parse("(x1 + 2").unwrap_err().offset, 7);
        assert_eq!(parse("x1 + 2)").unwrap_err().offset, 6);
        assert_eq!(parse("x1 x2").unwrap_err().offset, 3);
        assert_eq!(parse("y + 1").unwrap_err().offset, 0);
        assert_eq!(parse("2 * foo(x1)").unwrap_err().offset, 4);
        assert!(parse("sin x1").is_err());
        assert!(parse("").is_err());
        assert!(parse("1 +").is_err());
        assert!(parse("1e400").is_err());
    }

    #[test]
    fn jet_evaluation_examples() {
        let j = parse("1 + 2*x1")
            .unwrap()
            .eval_jet(Point4::new(0.0, 3.0, 0.0, 0.0))
            .unwrap();
        assert_eq!(j, Jet4::new(7.0, [0.0, 2.0, 0.0, 0.0]));
        let j = parse("exp(2*x3)").unwrap().eval_jet(Point4::default()).unwrap();
        assert_eq!(j, Jet4::new(1.0, [0.0, 0.0, 0.0, 2.0]));
        let err = parse("sqrt(x1)").unwrap().eval_jet(Point4::new(0.0, -1.0, 0.0, 0.0));
        assert!(matches!(err, Err(JetError::Domain { func: "sqrt", .. })));
    }

    #[test]
    fn constants_and_display_round_trip() {
        for src in [
            "pi * x1",
            "-x1^2",
            "e^(-t)",
            "sin(x1 - t) / (2 + cos(x2))",
            "1.5e-7 * x3",
        ] {
            let a = parse(src).unwrap();
            let b = parse(&a.to_string()).unwrap();
            assert_eq!(a, b, "{src} -> {a}");
        }
    }

    #[test]
    fn symbolic_derivative_matches_jet() {
        let p = Point4::new(0.3, 0.2, -0.4, 0.7);
        for src in [
            "x1 * sin(x2 - t) + exp(0.5 * x3)",
            "x1 / (2 + x2 ^ 2)",
            "sqrt(1 + x1 ^ 2) * log(2 + x3)",
            "tanh(x1 * x2) ^ 3 - cos(t * x3)",
            "(1 + x1 ^ 2) ^ (0.5 + x2)",
        ] {
            let e = parse(src).unwrap();
            let j = e.eval_jet(p).unwrap();
            for v in Var::ALL {
                let d = e.derivative(v).eval(p).unwrap();
                assert!(
                    (d - j.d[v.slot()]).abs() < 1e-13,
                    "{src} d/d{}: {d} vs {}",
                    v.name(),
                    j.d[v.slot()]
                );
            }
        }
    }

    #[test]
    fn field_spec_errors_name_the_component() {
        let err = FieldSpec::vector("E", &["x1", "x2 +", "0"]).unwrap_err();
        assert_eq!(err.component, 2);
        assert!(err.to_string().starts_with("field E[2]"));
    }
}
