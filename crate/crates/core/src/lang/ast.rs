//! Syntax tree of the sequence language and its canonical printer.
//!
//! Node equality ignores spans, so `parse(print(ast)) == ast` is the
//! round-trip property.

use std::fmt;

use num_bigint::BigInt;

use crate::rational::Rational;

/// A source location: 1-based line and column plus a byte range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Span {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
    pub len: usize,
}

impl Span {
    /// Smallest span covering both.
    pub fn to(self, other: Span) -> Span {
        let end = (other.offset + other.len).max(self.offset + self.len);
        Span { len: end - self.offset, ..self }
    }
}

macro_rules! spanned {
    ($name:ident, $kind:ident) => {
        #[derive(Debug, Clone)]
        pub struct $name {
            pub kind: $kind,
            pub span: Span,
        }

        impl PartialEq for $name {
            fn eq(&self, other: &Self) -> bool {
                self.kind == other.kind
            }
        }

        impl Eq for $name {}

        impl $name {
            pub fn new(kind: $kind, span: Span) -> Self {
                $name { kind, span }
            }
        }
    };
}

spanned!(Expr, ExprKind);
spanned!(SetExpr, SetKind);
spanned!(Stmt, StmtKind);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }

    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    /// The index variable `n`.
    Var,
    Int(BigInt),
    Name(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// Branches in source order; lowering checks that every residue appears once.
    Piecewise { modulus: u64, branches: Vec<(u64, Expr)> },
    Patch { points: Vec<(u64, Rational)>, base: Box<Expr> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Ge => ">=",
            CmpOp::Gt => ">",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetBinOp {
    And,
    Or,
    Minus,
}

impl SetBinOp {
    fn symbol(self) -> &'static str {
        match self {
            SetBinOp::And => "&",
            SetBinOp::Or => "|",
            SetBinOp::Minus => "\\",
        }
    }

    fn prec(self) -> u8 {
        match self {
            SetBinOp::Or => 1,
            SetBinOp::And | SetBinOp::Minus => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetKind {
    Finite(Vec<u64>),
    Cofinite(Vec<u64>),
    Residue(u64, Vec<u64>),
    Tail(u64),
    Omega,
    Empty,
    Cmp(Expr, CmpOp, Expr),
    Name(String),
    Not(Box<SetExpr>),
    Bin(SetBinOp, Box<SetExpr>, Box<SetExpr>),
}

/// Pair colorings accepted by `ramsey`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringExpr {
    /// color 0 iff `(i + j) mod m` is listed
    Sum(u64, Vec<u64>),
    /// color 0 iff `j − i` is listed
    Distance(Vec<u64>),
    /// color 0 iff `x_i < x_j`
    Order(Expr),
}

/// Small partitions accepted by `select`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionExpr {
    Block(u64),
    /// level sets of a sequence
    Level(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Seed(u64),
    Horizon(u64),
    LetSeq(String, Expr),
    LetSet(String, SetExpr),
    Classify(Expr),
    St(Expr),
    Monotone(Expr),
    Compare(Expr, Expr),
    Decide(SetExpr),
    Ramsey(ColoringExpr),
    Select(PartitionExpr),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub stmts: Vec<Stmt>,
}

fn list(f: &mut fmt::Formatter<'_>, xs: &[u64]) -> fmt::Result {
    write!(f, "{{")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "}}")
}

impl Expr {
    fn prec(&self) -> u8 {
        match &self.kind {
            ExprKind::Bin(op, ..) => op.prec(),
            ExprKind::Neg(_) => 3,
            ExprKind::Pow(..) => 4,
            _ => 5,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match &self.kind {
            ExprKind::Var => write!(f, "n"),
            ExprKind::Int(k) => write!(f, "{k}"),
            ExprKind::Name(s) => write!(f, "{s}"),
            ExprKind::Neg(e) => {
                write!(f, "-")?;
                e.fmt_at(f, 3)
            }
            ExprKind::Bin(op, a, b) => {
                a.fmt_at(f, op.prec())?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_at(f, op.prec() + 1)
            }
            ExprKind::Pow(e, k) => {
                e.fmt_at(f, 5)?;
                write!(f, "^{k}")
            }
            ExprKind::Piecewise { modulus, branches } => {
                write!(f, "piecewise(mod {modulus}")?;
                for (r, e) in branches {
                    write!(f, "; {r}: {e}")?;
                }
                write!(f, ")")
            }
            ExprKind::Patch { points, base } => {
                write!(f, "patch(")?;
                for (i, (k, q)) in points.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{k}: {q}")?;
                }
                write!(f, "; {base})")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl SetExpr {
    fn prec(&self) -> u8 {
        match &self.kind {
            SetKind::Bin(op, ..) => op.prec(),
            SetKind::Not(_) => 3,
            _ => 4,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.fmt_at(f, 0)?;
            return write!(f, ")");
        }
        match &self.kind {
            SetKind::Finite(xs) => {
                write!(f, "finite")?;
                list(f, xs)
            }
            SetKind::Cofinite(xs) => {
                write!(f, "cofinite")?;
                list(f, xs)
            }
            SetKind::Residue(m, rs) => {
                write!(f, "residue({m}; ")?;
                list(f, rs)?;
                write!(f, ")")
            }
            SetKind::Tail(k) => write!(f, "tail({k})"),
            SetKind::Omega => write!(f, "omega"),
            SetKind::Empty => write!(f, "empty"),
            SetKind::Cmp(a, op, b) => write!(f, "cmp({a} {} {b})", op.symbol()),
            SetKind::Name(s) => write!(f, "{s}"),
            SetKind::Not(s) => {
                write!(f, "!")?;
                s.fmt_at(f, 3)
            }
            SetKind::Bin(op, a, b) => {
                a.fmt_at(f, op.prec())?;
                write!(f, " {} ", op.symbol())?;
                b.fmt_at(f, op.prec() + 1)
            }
        }
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

impl fmt::Display for ColoringExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColoringExpr::Sum(m, zs) => {
                write!(f, "sum({m}; ")?;
                list(f, zs)?;
                write!(f, ")")
            }
            ColoringExpr::Distance(ds) => {
                write!(f, "distance(")?;
                list(f, ds)?;
                write!(f, ")")
            }
            ColoringExpr::Order(e) => write!(f, "order({e})"),
        }
    }
}

impl fmt::Display for PartitionExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionExpr::Block(k) => write!(f, "block({k})"),
            PartitionExpr::Level(e) => write!(f, "level({e})"),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StmtKind::Seed(s) => write!(f, "seed {s}"),
            StmtKind::Horizon(h) => write!(f, "horizon {h}"),
            StmtKind::LetSeq(name, e) => write!(f, "{name} = {e}"),
            StmtKind::LetSet(name, s) => write!(f, "{name} = {s}"),
            StmtKind::Classify(e) => write!(f, "classify {e}"),
            StmtKind::St(e) => write!(f, "st {e}"),
            StmtKind::Monotone(e) => write!(f, "monotone {e}"),
            StmtKind::Compare(a, b) => write!(f, "compare {a}, {b}"),
            StmtKind::Decide(s) => write!(f, "decide {s}"),
            StmtKind::Ramsey(c) => write!(f, "ramsey {c}"),
            StmtKind::Select(p) => write!(f, "select {p}"),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
