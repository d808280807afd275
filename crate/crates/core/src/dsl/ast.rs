use std::f64::consts;
use std::fmt;

use crate::jet::{ElemFn, Jet4, JetError, Point4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T,
    X1,
    X2,
    X3,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::T, Var::X1, Var::X2, Var::X3];

    /// Jet slot (0 = t).
    pub fn slot(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::T => "t",
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::X3 => "x3",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }

    pub fn spatial(k: usize) -> Var {
        Var::ALL[k]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConst {
    Pi,
    E,
}

impl NamedConst {
    pub fn value(self) -> f64 {
        match self {
            NamedConst::Pi => consts::PI,
            NamedConst::E => consts::E,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedConst::Pi => "pi",
            NamedConst::E => "e",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

/// Immutable expression tree over `(t, x1, x2, x3)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Named(NamedConst),
    Var(Var),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(ElemFn, Box<Expr>),
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    pub fn binary(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn call(f: ElemFn, a: Expr) -> Expr {
        Expr::Call(f, Box::new(a))
    }

    pub fn mentions(&self, v: Var) -> bool {
        match self {
            Expr::Const(_) | Expr::Named(_) => false,
            Expr::Var(w) => *w == v,
            Expr::Neg(a) | Expr::Call(_, a) => a.mentions(v),
            Expr::Binary(_, a, b) => a.mentions(v) || b.mentions(v),
        }
    }

    fn is_constant(&self) -> bool {
        !Var::ALL.iter().any(|v| self.mentions(*v))
    }

    pub fn depth(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Named(_) | Expr::Var(_) => 1,
            Expr::Neg(a) | Expr::Call(_, a) => 1 + a.depth(),
            Expr::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Plain value at `p`.
    pub fn eval(&self, p: Point4) -> Result<f64, JetError> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Named(n) => n.value(),
            Expr::Var(v) => p.coords()[v.slot()],
            Expr::Neg(a) => -a.eval(p)?,
            Expr::Call(f, a) => f.eval(a.eval(p)?)?,
            Expr::Binary(op, a, b) => {
                let (x, y) = (a.eval(p)?, b.eval(p)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => {
                        if y == 0.0 {
                            return Err(JetError::DivisionByZero);
                        }
                        x / y
                    }
                    BinOp::Pow => {
                        if x < 0.0 && y.fract() != 0.0 || x == 0.0 && y < 0.0 {
                            return Err(JetError::Domain { func: "pow", arg: x });
                        }
                        x.powf(y)
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(JetError::NonFinite("expression"))
        }
    }

    /// Value and the four first partials at `p`.
    pub fn eval_jet(&self, p: Point4) -> Result<Jet4, JetError> {
        let out = match self {
            Expr::Const(c) => Jet4::constant(*c),
            Expr::Named(n) => Jet4::constant(n.value()),
            Expr::Var(v) => Jet4::variable(p.coords()[v.slot()], v.slot()),
            Expr::Neg(a) => -a.eval_jet(p)?,
            Expr::Call(f, a) => a.eval_jet(p)?.apply(*f)?,
            Expr::Binary(op, a, b) => {
                let (x, y) = (a.eval_jet(p)?, b.eval_jet(p)?);
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x.checked_div(&y)?,
                    BinOp::Pow => x.pow(&y)?,
                }
            }
        };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(JetError::NonFinite("expression"))
        }
    }

    /// Symbolic partial derivative with light simplification.
    pub fn derivative(&self, v: Var) -> Expr {
        use BinOp::*;
        match self {
            Expr::Const(_) | Expr::Named(_) => Expr::Const(0.0),
            Expr::Var(w) => Expr::Const(if *w == v { 1.0 } else { 0.0 }),
            Expr::Neg(a) => neg(a.derivative(v)),
            Expr::Binary(op, a, b) => {
                let (da, db) = (a.derivative(v), b.derivative(v));
                let (a, b) = (a.as_ref().clone(), b.as_ref().clone());
                match op {
                    Add => add(da, db),
                    Sub => sub(da, db),
                    Mul => add(mul(da, b.clone()), mul(a, db)),
                    Div => sub(div(da, b.clone()), div(mul(a, db), mul(b.clone(), b))),
                    Pow if b.is_constant() => mul(mul(b.clone(), pow(a, sub(b, Expr::Const(1.0)))), da),
                    Pow => mul(
                        pow(a.clone(), b.clone()),
                        add(mul(db, Expr::call(ElemFn::Log, a.clone())), div(mul(b, da), a)),
                    ),
                }
            }
            Expr::Call(f, a) => {
                let da = a.derivative(v);
                let a = a.as_ref().clone();
                let outer = match f {
                    ElemFn::Sin => Expr::call(ElemFn::Cos, a),
                    ElemFn::Cos => neg(Expr::call(ElemFn::Sin, a)),
                    ElemFn::Exp => Expr::call(ElemFn::Exp, a),
                    ElemFn::Log => return div(da, a),
                    ElemFn::Sqrt => return div(da, mul(Expr::Const(2.0), Expr::call(ElemFn::Sqrt, a))),
                    ElemFn::Tanh => {
                        let th = Expr::call(ElemFn::Tanh, a);
                        sub(Expr::Const(1.0), mul(th.clone(), th))
                    }
                };
                mul(outer, da)
            }
        }
    }
}

fn as_const(e: &Expr) -> Option<f64> {
    match e {
        Expr::Const(c) => Some(*c),
        _ => None,
    }
}

pub fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

pub fn add(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x + y),
        (Some(0.0), _) => b,
        (_, Some(0.0)) => a,
        _ => Expr::binary(BinOp::Add, a, b),
    }
}

pub fn sub(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x - y),
        (Some(0.0), _) => neg(b),
        (_, Some(0.0)) => a,
        _ => Expr::binary(BinOp::Sub, a, b),
    }
}

pub fn mul(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        (Some(0.0), _) | (_, Some(0.0)) => Expr::Const(0.0),
        (Some(1.0), _) => b,
        (_, Some(1.0)) => a,
        _ => Expr::binary(BinOp::Mul, a, b),
    }
}

pub fn div(a: Expr, b: Expr) -> Expr {
    match (as_const(&a), as_const(&b)) {
        (Some(0.0), _) => Expr::Const(0.0),
        (_, Some(1.0)) => a,
        _ => Expr::binary(BinOp::Div, a, b),
    }
}

pub fn pow(a: Expr, b: Expr) -> Expr {
    match as_const(&b) {
        Some(0.0) => Expr::Const(1.0),
        Some(1.0) => a,
        _ => Expr::binary(BinOp::Pow, a, b),
    }
}

/// Fully parenthesised form; reparses to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => {
                write!(f, "(-{:?})", -c)
            }
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Named(n) => f.write_str(n.name()),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
