//! Recursive-descent parser. Statements end at a newline or a top-level `;`.
//!
//! ```text
//! stmt    := "seed" INT | "horizon" INT | NAME "=" (set | expr)
//!          | ("classify" | "st" | "monotone") expr | "compare" expr "," expr
//!          | "decide" set | "ramsey" coloring | "select" partition
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := atom ("^" INT)?
//! atom    := "n" | INT | NAME | "(" expr ")"
//!          | "piecewise" "(" "mod" INT (";" INT ":" expr)+ ")"
//!          | "patch" "(" INT ":" rational ("," INT ":" rational)* ";" expr ")"
//! set     := inter ("|" inter)*
//! inter   := unit (("&" | "\") unit)*
//! unit    := "!" unit | "(" set ")" | NAME | "omega" | "empty" | "tail" "(" INT ")"
//!          | "finite" ints | "cofinite" ints | "residue" "(" INT ";" ints ")"
//!          | "cmp" "(" expr rel expr ")"
//! ```

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::ast::*;
use super::diag::{Code, Diagnostic};
use super::lexer::{lex, Tok, Token};
use crate::rational::Rational;

const KEYWORDS: &[&str] = &[
    "seed", "horizon", "classify", "st", "monotone", "compare", "decide", "ramsey", "select", "n", "piecewise",
    "patch", "mod", "finite", "cofinite", "residue", "tail", "omega", "empty", "cmp", "sum", "distance", "order",
    "block", "level",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Seq,
    Set,
}

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    names: HashMap<String, Kind>,
    seen_query: bool,
    seen_seed: bool,
    seen_horizon: bool,
}

/// Parses a whole program, reporting every statement that fails.
pub fn parse(src: &str) -> Result<Program, Vec<Diagnostic>> {
    let toks = lex(src).map_err(|d| vec![d])?;
    let mut p = Parser { toks, pos: 0, names: HashMap::new(), seen_query: false, seen_seed: false, seen_horizon: false };
    let mut stmts = Vec::new();
    let mut errors = Vec::new();
    loop {
        while matches!(p.peek(), Tok::Newline | Tok::Semi) {
            p.pos += 1;
        }
        if p.peek() == &Tok::Eof {
            break;
        }
        match p.stmt() {
            Ok(s) => stmts.push(s),
            Err(d) => {
                errors.push(d);
                while !matches!(p.peek(), Tok::Newline | Tok::Eof) {
                    p.pos += 1;
                }
            }
        }
    }
    if errors.is_empty() {
        Ok(Program { stmts })
    } else {
        Err(errors)
    }
}

/// Parses a single sequence expression such as `(n + 1)/(n + 2)`.
pub fn parse_expr(src: &str) -> Result<Expr, Diagnostic> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, names: HashMap::new(), seen_query: false, seen_seed: false, seen_horizon: false };
    while p.peek() == &Tok::Newline {
        p.pos += 1;
    }
    let e = p.expr()?;
    while p.peek() == &Tok::Newline {
        p.pos += 1;
    }
    if p.peek() != &Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(e)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> Diagnostic {
        Diagnostic::error(Code::Syntax, self.span(), format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, t: Tok) -> PResult<Span> {
        if self.peek() == &t {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> PResult<Span> {
        if self.is_kw(kw) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn int(&mut self) -> PResult<(BigInt, Span)> {
        match self.peek().clone() {
            Tok::Int(k) => Ok((k, self.bump().span)),
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn u64(&mut self) -> PResult<u64> {
        let (k, span) = self.int()?;
        k.to_u64().ok_or_else(|| Diagnostic::error(Code::Syntax, span, format!("{k} is out of range")))
    }

    fn positive(&mut self) -> PResult<u64> {
        let span = self.span();
        let k = self.u64()?;
        if k == 0 {
            return Err(Diagnostic::error(Code::Syntax, span, "expected a positive integer"));
        }
        Ok(k)
    }

    /// `{a, b, ...}`
    fn int_list(&mut self) -> PResult<Vec<u64>> {
        self.expect(Tok::LBrace)?;
        let mut xs = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                xs.push(self.u64()?);
                if self.eat(&Tok::RBrace) {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
        }
        Ok(xs)
    }

    /// `[-]p[/q]`
    fn rational(&mut self) -> PResult<Rational> {
        let start = self.span();
        let neg = self.eat(&Tok::Minus);
        let (p, _) = self.int()?;
        let q = if self.eat(&Tok::Slash) { self.int()?.0 } else { BigInt::from(1) };
        let p = if neg { -p } else { p };
        Rational::new(p, q).map_err(|e| Diagnostic::error(Code::Syntax, start.to(self.prev_span()), e.to_string()))
    }

    fn end_of_stmt(&self) -> PResult<()> {
        match self.peek() {
            Tok::Newline | Tok::Semi | Tok::Eof => Ok(()),
            _ => Err(self.unexpected("end of statement")),
        }
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let start = self.span();
        let kind = match self.peek().clone() {
            Tok::Ident(s) if s == "seed" || s == "horizon" => {
                self.bump();
                let value = self.u64()?;
                let seen = if s == "seed" { &mut self.seen_seed } else { &mut self.seen_horizon };
                if *seen {
                    return Err(Diagnostic::error(Code::Directive, start, format!("`{s}` given twice")));
                }
                *seen = true;
                if self.seen_query {
                    return Err(Diagnostic::error(Code::Directive, start, format!("`{s}` must come before any query")));
                }
                if s == "seed" {
                    StmtKind::Seed(value)
                } else {
                    StmtKind::Horizon(value)
                }
            }
            Tok::Ident(name) if self.peek_at(1) == &Tok::Assign => {
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(Diagnostic::error(Code::Syntax, start, format!("`{name}` is a reserved word")));
                }
                if self.names.contains_key(&name) {
                    return Err(Diagnostic::error(Code::Rebound, start, format!("`{name}` is already bound")));
                }
                self.pos += 2;
                let kind = match self.set_or_expr()? {
                    Ok(e) => {
                        self.names.insert(name.clone(), Kind::Seq);
                        StmtKind::LetSeq(name, e)
                    }
                    Err(s) => {
                        self.names.insert(name.clone(), Kind::Set);
                        StmtKind::LetSet(name, s)
                    }
                };
                kind
            }
            Tok::Ident(q) => {
                let kind = match q.as_str() {
                    "classify" | "st" | "monotone" => {
                        self.bump();
                        let e = self.expr()?;
                        match q.as_str() {
                            "classify" => StmtKind::Classify(e),
                            "st" => StmtKind::St(e),
                            _ => StmtKind::Monotone(e),
                        }
                    }
                    "compare" => {
                        self.bump();
                        let a = self.expr()?;
                        self.expect(Tok::Comma)?;
                        StmtKind::Compare(a, self.expr()?)
                    }
                    "decide" => {
                        self.bump();
                        StmtKind::Decide(self.set()?)
                    }
                    "ramsey" => {
                        self.bump();
                        StmtKind::Ramsey(self.coloring()?)
                    }
                    "select" => {
                        self.bump();
                        StmtKind::Select(self.partition()?)
                    }
                    _ => return Err(self.unexpected("a statement")),
                };
                self.seen_query = true;
                kind
            }
            _ => return Err(self.unexpected("a statement")),
        };
        self.end_of_stmt()?;
        Ok(Stmt::new(kind, start.to(self.prev_span())))
    }

    fn coloring(&mut self) -> PResult<ColoringExpr> {
        if self.is_kw("sum") {
            self.bump();
            self.expect(Tok::LParen)?;
            let m = self.positive()?;
            self.expect(Tok::Semi)?;
            let zs = self.int_list()?;
            self.expect(Tok::RParen)?;
            Ok(ColoringExpr::Sum(m, zs))
        } else if self.is_kw("distance") {
            self.bump();
            self.expect(Tok::LParen)?;
            let ds = self.int_list()?;
            self.expect(Tok::RParen)?;
            Ok(ColoringExpr::Distance(ds))
        } else if self.is_kw("order") {
            self.bump();
            self.expect(Tok::LParen)?;
            let e = self.expr()?;
            self.expect(Tok::RParen)?;
            Ok(ColoringExpr::Order(e))
        } else {
            Err(self.unexpected("`sum`, `distance` or `order`"))
        }
    }

    fn partition(&mut self) -> PResult<PartitionExpr> {
        if self.is_kw("block") {
            self.bump();
            self.expect(Tok::LParen)?;
            let k = self.positive()?;
            self.expect(Tok::RParen)?;
            Ok(PartitionExpr::Block(k))
        } else if self.is_kw("level") {
            self.bump();
            self.expect(Tok::LParen)?;
            let e = self.expr()?;
            self.expect(Tok::RParen)?;
            Ok(PartitionExpr::Level(e))
        } else {
            Err(self.unexpected("`block` or `level`"))
        }
    }

    /// A binding's right-hand side: a set if it parses as one, else a sequence.
    fn set_or_expr(&mut self) -> PResult<Result<Expr, SetExpr>> {
        if !self.starts_set() {
            return self.expr().map(Ok);
        }
        // `(` and names can open either kind: a set wins only if it spans the statement
        let save = self.pos;
        let set_err = match self.set() {
            Ok(s) if matches!(self.peek(), Tok::Newline | Tok::Semi | Tok::Eof) => return Ok(Err(s)),
            Ok(_) => None,
            Err(d) => Some(d),
        };
        self.pos = save;
        match self.expr() {
            Ok(e) => Ok(Ok(e)),
            Err(d) => Err(set_err.unwrap_or(d)),
        }
    }

    fn starts_set(&self) -> bool {
        match self.peek() {
            Tok::Bang | Tok::LParen => true,
            Tok::Ident(s) => {
                matches!(s.as_str(), "finite" | "cofinite" | "residue" | "tail" | "omega" | "empty" | "cmp")
                    || self.names.get(s) == Some(&Kind::Set)
            }
            _ => false,
        }
    }

    fn name_ref(&mut self, want: Kind) -> PResult<String> {
        let t = self.bump();
        let Tok::Ident(name) = t.tok else { unreachable!() };
        match self.names.get(&name) {
            None => Err(Diagnostic::error(Code::Unbound, t.span, format!("`{name}` is not bound"))),
            Some(&k) if k != want => {
                let what = if k == Kind::Set { "an index set" } else { "a sequence" };
                Err(Diagnostic::error(Code::Kind, t.span, format!("`{name}` is {what}")))
            }
            Some(_) => Ok(name),
        }
    }

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr::new(ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            let span = lhs.span.to(rhs.span);
            lhs = Expr::new(ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.peek() == &Tok::Minus {
            let start = self.bump().span;
            let e = self.unary()?;
            let span = start.to(e.span);
            return Ok(Expr::new(ExprKind::Neg(Box::new(e)), span));
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let (k, span) = self.int()?;
            let k = k
                .to_u32()
                .filter(|&k| k <= 64)
                .ok_or_else(|| Diagnostic::error(Code::Syntax, span, "exponent must be at most 64"))?;
            let span = base.span.to(span);
            return Ok(Expr::new(ExprKind::Pow(Box::new(base), k), span));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Int(k) => {
                self.bump();
                Ok(Expr::new(ExprKind::Int(k), start))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::new(e.kind, start.to(self.prev_span())))
            }
            Tok::Ident(s) if s == "n" => {
                self.bump();
                Ok(Expr::new(ExprKind::Var, start))
            }
            Tok::Ident(s) if s == "piecewise" => {
                self.bump();
                self.expect(Tok::LParen)?;
                self.expect_kw("mod")?;
                let modulus = self.positive()?;
                let mut branches = Vec::new();
                while self.eat(&Tok::Semi) {
                    let r = self.u64()?;
                    self.expect(Tok::Colon)?;
                    branches.push((r, self.expr()?));
                }
                self.expect(Tok::RParen)?;
                Ok(Expr::new(ExprKind::Piecewise { modulus, branches }, start.to(self.prev_span())))
            }
            Tok::Ident(s) if s == "patch" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let mut points = Vec::new();
                loop {
                    let i = self.u64()?;
                    self.expect(Tok::Colon)?;
                    points.push((i, self.rational()?));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::Semi)?;
                let base = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(Expr::new(ExprKind::Patch { points, base: Box::new(base) }, start.to(self.prev_span())))
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let name = self.name_ref(Kind::Seq)?;
                Ok(Expr::new(ExprKind::Name(name), start))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn set(&mut self) -> PResult<SetExpr> {
        let mut lhs = self.inter()?;
        while self.eat(&Tok::Bar) {
            let rhs = self.inter()?;
            let span = lhs.span.to(rhs.span);
            lhs = SetExpr::new(SetKind::Bin(SetBinOp::Or, Box::new(lhs), Box::new(rhs)), span);
        }
        Ok(lhs)
    }

    fn inter(&mut self) -> PResult<SetExpr> {
        let mut lhs = self.unit()?;
        loop {
            let op = match self.peek() {
                Tok::Amp => SetBinOp::And,
                Tok::Backslash => SetBinOp::Minus,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unit()?;
            let span = lhs.span.to(rhs.span);
            lhs = SetExpr::new(SetKind::Bin(op, Box::new(lhs), Box::new(rhs)), span);
        }
    }

    fn unit(&mut self) -> PResult<SetExpr> {
        let start = self.span();
        let kind = match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                let s = self.unit()?;
                let span = start.to(s.span);
                return Ok(SetExpr::new(SetKind::Not(Box::new(s)), span));
            }
            Tok::LParen => {
                self.bump();
                let s = self.set()?;
                self.expect(Tok::RParen)?;
                return Ok(SetExpr::new(s.kind, start.to(self.prev_span())));
            }
            Tok::Ident(s) => match s.as_str() {
                "omega" => {
                    self.bump();
                    SetKind::Omega
                }
                "empty" => {
                    self.bump();
                    SetKind::Empty
                }
                "finite" => {
                    self.bump();
                    SetKind::Finite(self.int_list()?)
                }
                "cofinite" => {
                    self.bump();
                    SetKind::Cofinite(self.int_list()?)
                }
                "tail" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let k = self.u64()?;
                    self.expect(Tok::RParen)?;
                    SetKind::Tail(k)
                }
                "residue" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let m = self.positive()?;
                    self.expect(Tok::Semi)?;
                    let rs = self.int_list()?;
                    self.expect(Tok::RParen)?;
                    SetKind::Residue(m, rs)
                }
                "cmp" => {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let a = self.expr()?;
                    let op = match self.peek() {
                        Tok::Lt => CmpOp::Lt,
                        Tok::Le => CmpOp::Le,
                        Tok::Assign => CmpOp::Eq,
                        Tok::Ne => CmpOp::Ne,
                        Tok::Ge => CmpOp::Ge,
                        Tok::Gt => CmpOp::Gt,
                        _ => return Err(self.unexpected("a comparison")),
                    };
                    self.bump();
                    let b = self.expr()?;
                    self.expect(Tok::RParen)?;
                    SetKind::Cmp(a, op, b)
                }
                _ if !KEYWORDS.contains(&s.as_str()) => SetKind::Name(self.name_ref(Kind::Set)?),
                _ => return Err(self.unexpected("an index set")),
            },
            _ => return Err(self.unexpected("an index set")),
        };
        Ok(SetExpr::new(kind, start.to(self.prev_span())))
    }
}
