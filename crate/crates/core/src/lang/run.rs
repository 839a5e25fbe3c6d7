//! Lowering of the syntax tree to sequences and index sets, and the batch
//! runner that executes a program against one session.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::ast::*;
use super::diag::{Code, Diagnostic};
use super::parser::parse;
use crate::epset::EpSet;
use crate::error::Error;
use crate::hyper::{self, Finiteness, Hyperrational};
use crate::index::IndexSet;
use crate::oracle::present::{BlockPartition, DistanceColoring, LevelPartition, SumColoring};
use crate::oracle::{OracleSession, DEFAULT_HORIZON};
use crate::rational::{ArithOp, Rational};
use crate::seq::{Compiled, Rel, SeqExpr};

/// Band indices reported for a finite witness.
const MODULUS_BANDS: usize = 20;

#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Overrides a `seed` directive.
    pub seed: Option<u64>,
    /// Overrides a `horizon` directive.
    pub horizon: Option<u64>,
    /// Length of reported index prefixes.
    pub prefix: usize,
    /// `st` answers within `10^-digits`.
    pub digits: u32,
    /// Journal text to replay.
    pub replay: Option<String>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: None, horizon: None, prefix: 10, digits: 6, replay: None }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub report: String,
    pub journal: String,
    pub diagnostics: Vec<Diagnostic>,
}

impl RunOutput {
    pub fn failed(&self) -> bool {
        self.diagnostics.iter().any(Diagnostic::is_error)
    }

    pub fn undecided(&self) -> bool {
        self.diagnostics.iter().any(|d| d.code == Code::Undecided)
    }
}

/// Name bindings during lowering.
#[derive(Default)]
pub struct Env {
    seqs: HashMap<String, SeqExpr>,
    sets: HashMap<String, EpSet>,
    pub warnings: Vec<Diagnostic>,
}

fn eval_err(span: Span) -> impl Fn(Error) -> Diagnostic {
    move |e| Diagnostic::from_error(&e, span)
}

impl Env {
    pub fn lower_expr(&mut self, e: &Expr) -> std::result::Result<SeqExpr, Diagnostic> {
        let err = eval_err(e.span);
        Ok(match &e.kind {
            ExprKind::Var => SeqExpr::var(),
            ExprKind::Int(k) => SeqExpr::constant(Rational::from(k.clone())),
            ExprKind::Name(name) => self
                .seqs
                .get(name)
                .cloned()
                .ok_or_else(|| Diagnostic::error(Code::Unbound, e.span, format!("`{name}` is not bound")))?,
            ExprKind::Neg(a) => SeqExpr::neg(self.lower_expr(a)?),
            ExprKind::Pow(a, k) => SeqExpr::pow(self.lower_expr(a)?, *k),
            ExprKind::Bin(op, a, b) => {
                let (x, y) = (self.lower_expr(a)?, self.lower_expr(b)?);
                match op {
                    BinOp::Add => SeqExpr::add(x, y),
                    BinOp::Sub => SeqExpr::sub(x, y),
                    BinOp::Mul => SeqExpr::mul(x, y),
                    BinOp::Div => {
                        self.note_zeros(&y, b.span)?;
                        SeqExpr::div(x, y).map_err(|e| match e {
                            Error::DivisionByZero => {
                                Diagnostic::error(Code::Eval, b.span, "division by the zero sequence")
                            }
                            other => Diagnostic::from_error(&other, b.span),
                        })?
                    }
                }
            }
            ExprKind::Piecewise { modulus, branches } => {
                let mut slots: Vec<Option<SeqExpr>> = vec![None; *modulus as usize];
                for (r, b) in branches {
                    let slot = slots.get_mut(*r as usize).ok_or_else(|| {
                        Diagnostic::error(Code::Eval, b.span, format!("residue {r} is not below {modulus}"))
                    })?;
                    if slot.is_some() {
                        return Err(Diagnostic::error(Code::Eval, b.span, format!("residue {r} given twice")));
                    }
                    *slot = Some(self.lower_expr(b)?);
                }
                let mut out = Vec::with_capacity(slots.len());
                for (r, s) in slots.into_iter().enumerate() {
                    out.push(s.ok_or_else(|| {
                        Diagnostic::error(Code::Eval, e.span, format!("no branch for residue {r}"))
                    })?);
                }
                SeqExpr::piecewise(*modulus, out).map_err(err)?
            }
            ExprKind::Patch { points, base } => {
                let mut sorted = points.clone();
                sorted.sort_by_key(|p| p.0);
                if let Some(w) = sorted.windows(2).find(|w| w[0].0 == w[1].0) {
                    return Err(Diagnostic::error(Code::Eval, e.span, format!("index {} patched twice", w[0].0)));
                }
                SeqExpr::patch(sorted, self.lower_expr(base)?).map_err(err)?
            }
        })
    }

    // Warns about divisor zeros, which the division replaces by 1.
    fn note_zeros(&mut self, divisor: &SeqExpr, span: Span) -> std::result::Result<(), Diagnostic> {
        let zeros = Compiled::new(divisor).and_then(|c| c.sign_set(Rel::Equal)).map_err(eval_err(span))?;
        if zeros.is_empty() || zeros.modulus() == 1 && zeros.pattern_contains(0) {
            return Ok(());
        }
        let message = if zeros.is_finite() {
            let list: Vec<String> = zeros.iter().take(8).map(|n| n.to_string()).collect();
            let more = if zeros.iter().nth(8).is_some() { ", ..." } else { "" };
            format!("divisor vanishes at n = {}{more}; those terms divide by 1", list.join(", "))
        } else {
            format!("divisor vanishes on {zeros}; those terms divide by 1")
        };
        self.warnings.push(Diagnostic::warning(Code::PatchedDenominator, span, message));
        Ok(())
    }

    pub fn lower_set(&mut self, s: &SetExpr) -> std::result::Result<EpSet, Diagnostic> {
        let err = eval_err(s.span);
        Ok(match &s.kind {
            SetKind::Finite(xs) => EpSet::finite(xs),
            SetKind::Cofinite(xs) => EpSet::cofinite(xs),
            SetKind::Residue(m, rs) => EpSet::residue(*m, rs).map_err(err)?,
            SetKind::Tail(k) => EpSet::tail(*k),
            SetKind::Omega => EpSet::omega(),
            SetKind::Empty => EpSet::empty(),
            SetKind::Name(name) => self
                .sets
                .get(name)
                .cloned()
                .ok_or_else(|| Diagnostic::error(Code::Unbound, s.span, format!("`{name}` is not bound")))?,
            SetKind::Not(a) => self.lower_set(a)?.complement(),
            SetKind::Bin(op, a, b) => {
                let (x, y) = (self.lower_set(a)?, self.lower_set(b)?);
                match op {
                    SetBinOp::And => x.intersect(&y),
                    SetBinOp::Or => x.union(&y),
                    SetBinOp::Minus => x.minus(&y),
                }
                .map_err(err)?
            }
            SetKind::Cmp(a, op, b) => {
                let (x, y) = (self.lower_expr(a)?, self.lower_expr(b)?);
                let diff = Compiled::new(&x)
                    .and_then(|x| Compiled::new(&y).and_then(|y| Compiled::combine(&x, &y, ArithOp::Sub)))
                    .map_err(eval_err(s.span))?;
                let (rel, negate) = match op {
                    CmpOp::Lt => (Rel::Less, false),
                    CmpOp::Eq => (Rel::Equal, false),
                    CmpOp::Gt => (Rel::Greater, false),
                    CmpOp::Ge => (Rel::Less, true),
                    CmpOp::Ne => (Rel::Equal, true),
                    CmpOp::Le => (Rel::Greater, true),
                };
                let set = diff.sign_set(rel).map_err(err)?;
                if negate {
                    set.complement()
                } else {
                    set
                }
            }
        })
    }

    fn bind(&mut self, stmt: &Stmt) -> std::result::Result<(), Diagnostic> {
        match &stmt.kind {
            StmtKind::LetSeq(name, e) => {
                let v = self.lower_expr(e)?;
                self.seqs.insert(name.clone(), v);
            }
            StmtKind::LetSet(name, s) => {
                let v = self.lower_set(s)?;
                self.sets.insert(name.clone(), v);
            }
            _ => {}
        }
        Ok(())
    }
}

/// Lowers every statement without running queries: the `check` pass.
pub fn check(program: &Program) -> Vec<Diagnostic> {
    let mut env = Env::default();
    let mut errors = Vec::new();
    for stmt in &program.stmts {
        let r = match &stmt.kind {
            StmtKind::LetSeq(..) | StmtKind::LetSet(..) => env.bind(stmt),
            StmtKind::Classify(e) | StmtKind::St(e) | StmtKind::Monotone(e) => env.lower_expr(e).map(drop),
            StmtKind::Compare(a, b) => env.lower_expr(a).and_then(|_| env.lower_expr(b)).map(drop),
            StmtKind::Decide(s) => env.lower_set(s).map(drop),
            StmtKind::Ramsey(ColoringExpr::Order(e)) | StmtKind::Select(PartitionExpr::Level(e)) => {
                env.lower_expr(e).map(drop)
            }
            _ => Ok(()),
        };
        if let Err(d) = r {
            errors.push(d);
        }
    }
    let mut out = env.warnings;
    out.extend(errors);
    out
}

/// Parses and lowers a closed sequence expression (only `n`, no names).
pub fn sequence(src: &str) -> std::result::Result<SeqExpr, Diagnostic> {
    let e = super::parser::parse_expr(src)?;
    Env::default().lower_expr(&e)
}

/// `q` rounded to `digits` decimals.
pub fn decimal(q: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let two = BigInt::from(2);
    let scaled: BigInt = q.numer() * &scale * &two + q.denom();
    let rounded = scaled.div_floor(&(q.denom() * &two));
    let neg = rounded.is_negative();
    let digits_str = rounded.abs().to_string();
    let d = digits as usize;
    let padded = format!("{digits_str:0>width$}", width = d + 1);
    let (int, frac) = padded.split_at(padded.len() - d);
    let sign = if neg { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

struct Runner<'a> {
    opts: &'a RunOptions,
    session: OracleSession,
    env: Env,
    report: String,
}

impl Runner<'_> {
    fn hyper(&mut self, e: &Expr) -> std::result::Result<Hyperrational, Diagnostic> {
        let s = self.env.lower_expr(e)?;
        Hyperrational::new(&self.session, s).map_err(eval_err(e.span))
    }

    fn line(&mut self, key: impl std::fmt::Display, value: impl std::fmt::Display) {
        writeln!(self.report, "{key}: {value}").unwrap();
    }

    fn stmt(&mut self, stmt: &Stmt) -> std::result::Result<(), Diagnostic> {
        let err = eval_err(stmt.span);
        let k = self.opts.prefix;
        match &stmt.kind {
            StmtKind::Seed(_) | StmtKind::Horizon(_) => {}
            StmtKind::LetSeq(..) | StmtKind::LetSet(..) => self.env.bind(stmt)?,
            StmtKind::Classify(e) => {
                let x = self.hyper(e)?;
                let m = hyper::classify(&mut self.session, &x).map_err(err)?;
                self.line(stmt, m.as_str());
            }
            StmtKind::St(e) => {
                let x = self.hyper(e)?;
                let eps = Rational::ten_to_minus(self.opts.digits);
                let q = hyper::standard_part(&mut self.session, &x, &eps).map_err(err)?;
                let value = format!("{q} ~ {}", decimal(&q, self.opts.digits));
                self.line(stmt, value);
            }
            StmtKind::Monotone(e) => {
                let x = self.hyper(e)?;
                let w = hyper::extract_monotone(&mut self.session, &x).map_err(&err)?;
                let bands = if w.finiteness == Finiteness::FiniteOrInfinitesimal { k.min(MODULUS_BANDS) } else { 0 };
                let t = w.export(&mut self.session, k, bands as u64).map_err(&err)?;
                let mut value = format!("{} {}; indices {}", t.kind.as_str(), t.finiteness.as_str(), join(&t.indices));
                write!(value, "; values {}", join(&t.values)).unwrap();
                if let Some(l) = &w.limit {
                    write!(value, "; limit {l}; modulus {}", join(&t.modulus)).unwrap();
                }
                self.line(stmt, value);
            }
            StmtKind::Compare(a, b) => {
                let (x, y) = (self.hyper(a)?, self.hyper(b)?);
                let ord = hyper::h_compare(&mut self.session, &x, &y).map_err(err)?;
                let sym = match ord {
                    std::cmp::Ordering::Less => "<",
                    std::cmp::Ordering::Equal => "=",
                    std::cmp::Ordering::Greater => ">",
                };
                self.line(stmt, sym);
            }
            StmtKind::Decide(s) => {
                let set = self.env.lower_set(s)?;
                let d = self.session.decide(&IndexSet::Structured(set)).map_err(err)?;
                self.line(stmt, d);
            }
            StmtKind::Ramsey(c) => {
                let (color, r) = match c {
                    ColoringExpr::Sum(m, zs) => self
                        .session
                        .ramsey_homogeneous(Arc::new(SumColoring { modulus: *m, zero_sums: zs.clone() })),
                    ColoringExpr::Distance(ds) => {
                        self.session.ramsey_homogeneous(Arc::new(DistanceColoring { distances: ds.clone() }))
                    }
                    ColoringExpr::Order(e) => {
                        let x = self.hyper(e)?;
                        hyper::value_order_homogeneous(&mut self.session, &x)
                    }
                }
                .map_err(&err)?;
                let prefix = self.session.enumerate(&IndexSet::Committed(r), k).map_err(&err)?;
                self.line(stmt, format!("color {color}; {}", join(&prefix)));
            }
            StmtKind::Select(p) => {
                let r = match p {
                    PartitionExpr::Block(size) => self.session.big_selection(Arc::new(BlockPartition { size: *size })),
                    PartitionExpr::Level(e) => {
                        let x = self.hyper(e)?;
                        self.session.big_selection(Arc::new(LevelPartition::new(x.form().clone())))
                    }
                }
                .map_err(&err)?;
                let prefix = self.session.enumerate(&IndexSet::Committed(r), k).map_err(&err)?;
                self.line(stmt, join(&prefix));
            }
        }
        Ok(())
    }
}

/// Runs `program` in a fresh (or replayed) session. Execution stops at the
/// first error; the report and journal cover everything before it.
pub fn run(program: &Program, opts: &RunOptions) -> RunOutput {
    let directive = |f: fn(&StmtKind) -> Option<u64>| program.stmts.iter().find_map(|s| f(&s.kind));
    let seed = opts.seed.or_else(|| directive(|k| if let StmtKind::Seed(s) = k { Some(*s) } else { None }));
    let seed = seed.unwrap_or(0);
    let horizon = opts
        .horizon
        .or_else(|| directive(|k| if let StmtKind::Horizon(h) = k { Some(*h) } else { None }))
        .unwrap_or(DEFAULT_HORIZON);
    let mut out = RunOutput::default();
    let session = match &opts.replay {
        Some(text) => match OracleSession::replay(text, Some(seed)) {
            Ok(s) => s,
            Err(e) => {
                out.diagnostics.push(Diagnostic::from_error(&e, Span { line: 1, column: 1, ..Span::default() }));
                return out;
            }
        },
        None => OracleSession::new(seed),
    };
    let mut runner = Runner { opts, session, env: Env::default(), report: String::new() };
    runner.session.set_horizon(horizon);
    runner.line("seed", seed);
    runner.line("horizon", horizon);
    let mut failure = None;
    for stmt in &program.stmts {
        if let Err(d) = runner.stmt(stmt) {
            failure = Some(d);
            break;
        }
    }
    if failure.is_none() && opts.replay.is_some() {
        if let Err(e) = runner.session.finish_replay() {
            let end = program.stmts.last().map_or_else(Span::default, |s| s.span);
            failure = Some(Diagnostic::from_error(&e, end));
        }
    }
    out.diagnostics = std::mem::take(&mut runner.env.warnings);
    out.diagnostics.extend(failure);
    out.report = runner.report;
    out.journal = runner.session.journal_text();
    out
}

/// Parses and runs source text.
pub fn run_source(src: &str, opts: &RunOptions) -> RunOutput {
    match parse(src) {
        Ok(p) => run(&p, opts),
        Err(diagnostics) => RunOutput { diagnostics, ..RunOutput::default() },
    }
}
