//! Hyperrational numbers: sequence classes modulo the session's ultrafilter.
//!
//! Every predicate (equality, order, size) is a bigness decision on a
//! comparison set, so answers are stable for the life of a session.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use crate::epset::EpSet;
use crate::error::{Error, Result};
use crate::index::{CommittedRef, IndexSet, SessionId};
use crate::oracle::present::{ConstFamily, LevelPartition};
use crate::oracle::{Coloring, OracleSession, Partition};
use crate::rational::{ArithOp, Rational, Sign};
use crate::seq::{Compiled, RatFn, Rel, SeqExpr};

/// A sequence bound to the session that decides its predicates.
#[derive(Clone, Debug)]
pub struct Hyperrational {
    expr: SeqExpr,
    form: Arc<Compiled>,
    session: SessionId,
}

impl Hyperrational {
    pub fn new(session: &OracleSession, expr: SeqExpr) -> Result<Self> {
        let form = Arc::new(Compiled::new(&expr)?);
        Ok(Hyperrational { expr, form, session: session.id() })
    }

    pub fn expr(&self) -> &SeqExpr {
        &self.expr
    }

    pub fn form(&self) -> &Arc<Compiled> {
        &self.form
    }

    pub fn session(&self) -> SessionId {
        self.session
    }

    /// The representative's `n`-th term.
    pub fn term(&self, n: u64) -> Rational {
        self.form.eval(n)
    }
}

impl fmt::Display for Hyperrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}

fn check_session(session: &OracleSession, xs: &[&Hyperrational]) -> Result<()> {
    if xs.iter().all(|x| session.accepts(x.session)) && xs.windows(2).all(|w| w[0].session == w[1].session) {
        Ok(())
    } else {
        Err(Error::SessionMismatch)
    }
}

/// The class of the constant sequence `q`.
pub fn embed(session: &OracleSession, q: Rational) -> Hyperrational {
    Hyperrational {
        expr: SeqExpr::Const(q.clone()),
        form: Arc::new(Compiled::constant(q)),
        session: session.id(),
    }
}

/// Termwise arithmetic. Division needs a divisor whose zero set is Small;
/// those finitely many or Small-many zero terms divide by 1 instead.
pub fn h_arith(
    session: &mut OracleSession,
    x: &Hyperrational,
    y: &Hyperrational,
    op: ArithOp,
) -> Result<Hyperrational> {
    check_session(session, &[x, y])?;
    if op == ArithOp::Div {
        let zeros = y.form.sign_set(Rel::Equal)?;
        if session.decide(&IndexSet::Structured(zeros))?.is_big() {
            return Err(Error::DivisionByZeroHyperrational);
        }
    }
    let expr = SeqExpr::arith(x.expr.clone(), y.expr.clone(), op).map_err(|e| match e {
        Error::DivisionByZero => Error::DivisionByZeroHyperrational,
        other => other,
    })?;
    let form = Arc::new(Compiled::combine(&x.form, &y.form, op)?);
    Ok(Hyperrational { expr, form, session: x.session })
}

/// The relation whose comparison set is Big.
pub fn h_compare(session: &mut OracleSession, x: &Hyperrational, y: &Hyperrational) -> Result<Ordering> {
    check_session(session, &[x, y])?;
    let diff = Compiled::combine(&x.form, &y.form, ArithOp::Sub)?;
    let mut found = None;
    for (rel, ord) in [(Rel::Less, Ordering::Less), (Rel::Equal, Ordering::Equal), (Rel::Greater, Ordering::Greater)] {
        if session.decide(&IndexSet::Structured(diff.sign_set(rel)?))?.is_big() {
            if found.is_some() {
                return Err(Error::Internal("two order relations decided Big".into()));
            }
            found = Some(ord);
        }
    }
    found.ok_or_else(|| Error::Internal("no order relation decided Big".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Magnitude {
    Infinitesimal,
    FiniteNonInfinitesimal,
    InfinitelyLarge,
}

impl Magnitude {
    pub fn as_str(self) -> &'static str {
        match self {
            Magnitude::Infinitesimal => "Infinitesimal",
            Magnitude::FiniteNonInfinitesimal => "FiniteNonInfinitesimal",
            Magnitude::InfinitelyLarge => "InfinitelyLarge",
        }
    }
}

/// The branch that describes `x` on a Big set: with `M` the modulus of the
/// normal form, the residue class of `r_M` is Big and `x` agrees with one
/// rational function there.
fn big_branch(session: &mut OracleSession, x: &Hyperrational) -> Result<RatFn> {
    let m = x.form.modulus();
    let r = session.residue(m)?;
    let class = EpSet::residue(m, &[r])?;
    if !session.decide(&IndexSet::Structured(class))?.is_big() {
        return Err(Error::Internal(format!("residue class {r} mod {m} decided Small")));
    }
    Ok(x.form.branch(r).clone())
}

fn degree_gap(f: &RatFn) -> Option<i64> {
    let nd = f.num.degree()? as i64;
    Some(nd - f.den.degree().unwrap_or(0) as i64)
}

/// Size class of `x`, certified by bigness decisions on `{n : |x_n| > k}`
/// (or `< 1/k`) for a few `k`.
pub fn classify(session: &mut OracleSession, x: &Hyperrational) -> Result<Magnitude> {
    check_session(session, &[x])?;
    let f = big_branch(session, x)?;
    let magnitude = match degree_gap(&f) {
        None => Magnitude::Infinitesimal,
        Some(g) if g > 0 => Magnitude::InfinitelyLarge,
        Some(g) if g < 0 => Magnitude::Infinitesimal,
        Some(_) => Magnitude::FiniteNonInfinitesimal,
    };
    let certify = |session: &mut OracleSession, k: Rational, above: bool| -> Result<bool> {
        let hi = Compiled::combine(&x.form, &Compiled::constant(k.clone()), ArithOp::Sub)?;
        let lo = Compiled::combine(&x.form, &Compiled::constant(-k), ArithOp::Sub)?;
        let set = if above {
            hi.sign_set(Rel::Greater)?.union(&lo.sign_set(Rel::Less)?)?
        } else {
            hi.sign_set(Rel::Less)?.intersect(&lo.sign_set(Rel::Greater)?)?
        };
        Ok(session.decide(&IndexSet::Structured(set))?.is_big())
    };
    for k in [1i64, 10, 1000] {
        let k = Rational::from(k);
        let ok = match magnitude {
            Magnitude::InfinitelyLarge => certify(session, k.clone(), true)?,
            Magnitude::Infinitesimal => certify(session, k.recip()?, false)?,
            Magnitude::FiniteNonInfinitesimal => true,
        };
        if !ok {
            return Err(Error::Internal(format!("size certificate failed at bound {k}")));
        }
    }
    Ok(magnitude)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MonotoneKind {
    StrictlyIncreasing,
    StrictlyDecreasing,
    Stationary,
}

impl MonotoneKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MonotoneKind::StrictlyIncreasing => "StrictlyIncreasing",
            MonotoneKind::StrictlyDecreasing => "StrictlyDecreasing",
            MonotoneKind::Stationary => "Stationary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Finiteness {
    FiniteOrInfinitesimal,
    InfinitePositive,
    InfiniteNegative,
}

impl Finiteness {
    pub fn as_str(self) -> &'static str {
        match self {
            Finiteness::FiniteOrInfinitesimal => "FiniteOrInfinitesimal",
            Finiteness::InfinitePositive => "InfinitePositive",
            Finiteness::InfiniteNegative => "InfiniteNegative",
        }
    }
}

/// Which side of the standard part the selected terms approach from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Approach {
    Below,
    Above,
}

/// Bands `J_s` at distance `(1/(s+1), 1/s]` from `L` on one side. Class 0 is
/// everything not strictly on that side, class 1 is distance above 1 and
/// class `s + 1` is `J_s`.
struct BandPartition {
    form: Arc<Compiled>,
    limit: Rational,
    approach: Approach,
}

impl BandPartition {
    fn distance(&self, v: &Rational) -> Rational {
        match self.approach {
            Approach::Below => &self.limit - v,
            Approach::Above => v - &self.limit,
        }
    }

    fn class_of_value(&self, v: &Rational) -> u64 {
        let d = self.distance(v);
        if d.sign() != Sign::Positive {
            return 0;
        }
        if d > Rational::one() {
            return 1;
        }
        let s = d.recip().expect("positive").floor();
        s.to_u64().map_or(u64::MAX, |s| s.saturating_add(1))
    }

    // `{n : distance(x_n) rel c}`
    fn distance_set(&self, c: &Rational, rel: Rel) -> Result<EpSet> {
        let shifted = match self.approach {
            Approach::Below => Compiled::combine(&Compiled::constant(self.limit.clone()), &self.form, ArithOp::Sub)?,
            Approach::Above => Compiled::combine(&self.form, &Compiled::constant(self.limit.clone()), ArithOp::Sub)?,
        };
        Compiled::combine(&shifted, &Compiled::constant(c.clone()), ArithOp::Sub)?.sign_set(rel)
    }
}

impl Partition for BandPartition {
    fn class_of(&self, n: u64) -> u64 {
        self.class_of_value(&self.form.eval(n))
    }

    fn class_set(&self, class: u64) -> Result<EpSet> {
        let zero = Rational::zero();
        match class {
            0 => Ok(self.distance_set(&zero, Rel::Greater)?.complement()),
            1 => self.distance_set(&Rational::one(), Rel::Greater),
            c => {
                let s = Rational::from(c - 1);
                let upper = s.recip()?;
                let lower = (s + Rational::one()).recip()?;
                let le_upper = self.distance_set(&upper, Rel::Greater)?.complement();
                le_upper.intersect(&self.distance_set(&lower, Rel::Greater)?)
            }
        }
    }
}

/// `I_k = {n : k < x_n <= k + 1}` for integer `k`, named by the zigzag code.
struct IntervalPartition {
    form: Arc<Compiled>,
}

fn zigzag(k: &BigInt) -> u64 {
    let k = k.to_i64().unwrap_or(i64::MAX / 2);
    if k >= 0 {
        2 * k as u64
    } else {
        (-2 * k - 1) as u64
    }
}

fn unzigzag(c: u64) -> i64 {
    if c % 2 == 0 {
        (c / 2) as i64
    } else {
        -(((c + 1) / 2) as i64)
    }
}

fn interval_set(form: &Compiled, k: i64) -> Result<EpSet> {
    let above = Compiled::combine(form, &Compiled::constant(Rational::from(k)), ArithOp::Sub)?.sign_set(Rel::Greater)?;
    let over = Compiled::combine(form, &Compiled::constant(Rational::from(k + 1)), ArithOp::Sub)?
        .sign_set(Rel::Greater)?;
    above.minus(&over)
}

impl Partition for IntervalPartition {
    fn class_of(&self, n: u64) -> u64 {
        zigzag(&(self.form.eval(n).ceil() - BigInt::one()))
    }

    fn class_set(&self, class: u64) -> Result<EpSet> {
        interval_set(&self.form, unzigzag(class))
    }
}

/// `{i < j}` gets color 0 iff `x_i < x_j`.
struct ValueOrder {
    form: Arc<Compiled>,
}

impl Coloring for ValueOrder {
    fn color(&self, i: u64, j: u64) -> u8 {
        u8::from(self.form.eval(i) >= self.form.eval(j))
    }

    fn zero_set(&self, i: u64) -> Result<EpSet> {
        let v = self.form.eval(i);
        Compiled::combine(&self.form, &Compiled::constant(v), ArithOp::Sub)?
            .sign_set(Rel::Greater)?
            .intersect(&EpSet::tail(i + 1))
    }
}

#[derive(Clone)]
struct Bands {
    partition: Arc<BandPartition>,
}

/// A Big index set on which `x` is strictly monotone or constant.
#[derive(Clone)]
pub struct MonotoneWitness {
    pub kind: MonotoneKind,
    pub indices: CommittedRef,
    pub finiteness: Finiteness,
    /// Standard part, for finite numbers.
    pub limit: Option<Rational>,
    x: Hyperrational,
    bands: Option<Bands>,
}

impl fmt::Debug for MonotoneWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneWitness")
            .field("kind", &self.kind)
            .field("indices", &self.indices)
            .field("finiteness", &self.finiteness)
            .field("limit", &self.limit)
            .finish()
    }
}

impl MonotoneWitness {
    pub fn value(&self) -> &Hyperrational {
        &self.x
    }

    /// First `k` selected indices.
    pub fn prefix(&self, session: &mut OracleSession, k: usize) -> Result<Vec<u64>> {
        session.enumerate(&IndexSet::Committed(self.indices), k)
    }

    /// Position in the selected prefix from which every term lies within
    /// `1/s` of the standard part (on the approach side). Deciding the nearer
    /// bands keeps later selections out of them.
    pub fn bound(&self, session: &mut OracleSession, s: u64) -> Result<usize> {
        if self.finiteness != Finiteness::FiniteOrInfinitesimal {
            return Err(Error::InfiniteArgument);
        }
        let Some(bands) = &self.bands else {
            return Ok(0);
        };
        let s = s.max(1);
        // distance > 1/s means class 1 (distance > 1) or J_t with t < s
        for class in 1..=s {
            let set = bands.partition.class_set(class)?;
            if session.decide(&IndexSet::Structured(set))?.is_big() {
                return Err(Error::ClassDecidedBig(class));
            }
        }
        let prefix = session.prefix(self.indices)?;
        Ok(prefix
            .iter()
            .rposition(|&n| bands.partition.class_of(n) <= s)
            .map_or(0, |p| p + 1))
    }

    /// Plain-data export: the first `k` indices and values plus the bound
    /// for each band index `1..=bands`.
    pub fn export(&self, session: &mut OracleSession, k: usize, bands: u64) -> Result<WitnessTable> {
        let indices = self.prefix(session, k)?;
        let values = indices.iter().map(|&n| self.x.term(n)).collect();
        let modulus = if self.finiteness == Finiteness::FiniteOrInfinitesimal {
            (1..=bands).map(|s| self.bound(session, s)).collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        Ok(WitnessTable {
            kind: self.kind,
            finiteness: self.finiteness,
            indices,
            values,
            modulus,
            x: self.x.clone(),
        })
    }
}

/// A witness materialized to a fixed depth.
#[derive(Clone, Debug)]
pub struct WitnessTable {
    pub kind: MonotoneKind,
    pub finiteness: Finiteness,
    pub indices: Vec<u64>,
    pub values: Vec<Rational>,
    /// `modulus[s - 1]` is the position certified for band index `s`.
    pub modulus: Vec<usize>,
    x: Hyperrational,
}

impl WitnessTable {
    pub fn value(&self) -> &Hyperrational {
        &self.x
    }
}

/// Extracts a monotone subsequence indexed by a Big set.
///
/// 1. If the level set of some value is Big, `x` is that rational and the
///    level set itself is the witness.
/// 2. Otherwise select one index per level (distinct values). If some
///    `I_k = {k < x_n <= k+1}` is Big, `x` is finite: decide the side of the
///    standard part `L` from which terms approach, and select one index per
///    band `J_s`. If no `I_k` is Big, select one index per `I_k` and decide the
///    sign of `x`.
/// 3. Order the survivors by value: the pair coloring `x_i < x_j` has a Big
///    homogeneous set, increasing or decreasing.
pub fn extract_monotone(session: &mut OracleSession, x: &Hyperrational) -> Result<MonotoneWitness> {
    check_session(session, &[x])?;
    let f = big_branch(session, x)?;
    if let Some(c) = f.as_constant() {
        let level = Compiled::combine(&x.form, &Compiled::constant(c.clone()), ArithOp::Sub)?.sign_set(Rel::Equal)?;
        let level_set = IndexSet::Structured(level.clone());
        if session.decide(&level_set)?.is_big() {
            let indices = session.diagonal_big(Arc::new(ConstFamily(level)), &level_set)?;
            return Ok(MonotoneWitness {
                kind: MonotoneKind::Stationary,
                indices,
                finiteness: Finiteness::FiniteOrInfinitesimal,
                limit: Some(c),
                x: x.clone(),
                bands: None,
            });
        }
    }
    session.big_selection(Arc::new(LevelPartition::new(x.form.clone())))?;

    let (finiteness, limit, bands) = match f.limit() {
        Some(l) => {
            let floor = l.floor().to_i64().ok_or_else(|| Error::UnsupportedExpression("limit out of range".into()))?;
            let mut found = false;
            for k in [floor - 1, floor] {
                if session.decide(&IndexSet::Structured(interval_set(&x.form, k)?))?.is_big() {
                    found = true;
                    break;
                }
            }
            if !found {
                return Err(Error::Internal(format!("no unit interval near {l} is Big")));
            }
            let approach = approach_side(session, x, &f, &l)?;
            let partition = Arc::new(BandPartition { form: x.form.clone(), limit: l.clone(), approach });
            session.big_selection(partition.clone())?;
            (Finiteness::FiniteOrInfinitesimal, Some(l), Some(Bands { partition }))
        }
        None => {
            session.big_selection(Arc::new(IntervalPartition { form: x.form.clone() }))?;
            let positive = x.form.sign_set(Rel::Greater)?;
            let finiteness = if session.decide(&IndexSet::Structured(positive))?.is_big() {
                Finiteness::InfinitePositive
            } else {
                Finiteness::InfiniteNegative
            };
            (finiteness, None, None)
        }
    };
    let (color, indices) = session.ramsey_homogeneous(Arc::new(ValueOrder { form: x.form.clone() }))?;
    let kind = if color == 0 { MonotoneKind::StrictlyIncreasing } else { MonotoneKind::StrictlyDecreasing };
    Ok(MonotoneWitness { kind, indices, finiteness, limit, x: x.clone(), bands })
}

/// A Big set on which `x` is strictly monotone, as a homogeneous set for the
/// coloring `{i < j} ↦ 0` iff `x_i < x_j`. Color 0 means increasing.
pub fn value_order_homogeneous(session: &mut OracleSession, x: &Hyperrational) -> Result<(u8, CommittedRef)> {
    check_session(session, &[x])?;
    session.ramsey_homogeneous(Arc::new(ValueOrder { form: x.form.clone() }))
}

/// Decides `E_1 = {n : x_n < x}`; since `x − L` is infinitesimal with the
/// sign of `f − L`, `E_1` is `{x_n < L}`, plus `{x_n = L}` when `x > L`.
fn approach_side(session: &mut OracleSession, x: &Hyperrational, f: &RatFn, l: &Rational) -> Result<Approach> {
    let shifted = Compiled::combine(&x.form, &Compiled::constant(l.clone()), ArithOp::Sub)?;
    let delta = RatFn::new(f.num.sub(&f.den.scale(l)), f.den.clone()).eventual_sign().0;
    let mut e1 = shifted.sign_set(Rel::Less)?;
    if delta == Sign::Positive {
        e1 = e1.union(&shifted.sign_set(Rel::Equal)?)?;
    }
    if session.decide(&IndexSet::Structured(e1))?.is_big() {
        return Ok(Approach::Below);
    }
    let e2 = shifted.sign_set(Rel::Greater)?;
    if session.decide(&IndexSet::Structured(e2))?.is_big() {
        return Ok(Approach::Above);
    }
    Err(Error::Internal("non-stationary number equals its standard part on a Big set".into()))
}

/// Largest gap `|x_{n_j} − y_{m_j}|` over positions `j >= bound(s)` in both
/// tables, for each band index `s` up to the tables' depth. The two numbers
/// must be equal in `session`.
pub fn metric_equiv_check(
    session: &mut OracleSession,
    w1: &WitnessTable,
    w2: &WitnessTable,
) -> Result<Vec<(u64, Rational)>> {
    let (a, b) = (&w1.x, &w2.x);
    let b_here = if session.accepts(b.session) { b.clone() } else { Hyperrational::new(session, b.expr.clone())? };
    let a_here = if session.accepts(a.session) { a.clone() } else { Hyperrational::new(session, a.expr.clone())? };
    if h_compare(session, &a_here, &b_here)? != Ordering::Equal {
        return Err(Error::WitnessMismatch);
    }
    if w1.finiteness != Finiteness::FiniteOrInfinitesimal || w2.finiteness != Finiteness::FiniteOrInfinitesimal {
        return Err(Error::InfiniteArgument);
    }
    let depth = w1.values.len().min(w2.values.len());
    let bands = w1.modulus.len().min(w2.modulus.len());
    let mut out = Vec::with_capacity(bands);
    for s in 1..=bands {
        let start = w1.modulus[s - 1].max(w2.modulus[s - 1]);
        let gap = (start..depth)
            .map(|j| (&w1.values[j] - &w2.values[j]).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        out.push((s as u64, gap));
    }
    Ok(out)
}

/// `ν(x)` to within `eps`. For the supported algebra the standard part is the
/// exact limit of the Big branch, which is returned as is.
pub fn standard_part(session: &mut OracleSession, x: &Hyperrational, eps: &Rational) -> Result<Rational> {
    if eps.sign() != Sign::Positive {
        return Err(Error::UnsupportedExpression("precision must be positive".into()));
    }
    Ok(standard_part_approx(session, x)?.exact)
}

/// `ν(x)` through the bands of a monotone witness: a selected term beyond
/// band `s` is within `1/s` of the standard part.
pub fn standard_part_by_bands(session: &mut OracleSession, w: &MonotoneWitness, s: u64) -> Result<Rational> {
    if w.finiteness != Finiteness::FiniteOrInfinitesimal {
        return Err(Error::InfiniteArgument);
    }
    let pos = w.bound(session, s)?;
    let idx = w.prefix(session, pos + 1)?;
    Ok(w.x.term(idx[pos]))
}

/// A real number answered to any rational precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealApprox {
    exact: Rational,
}

impl RealApprox {
    /// Some `q` with `|ν − q| < eps`.
    pub fn approx(&self, eps: &Rational) -> Result<Rational> {
        if eps.sign() != Sign::Positive {
            return Err(Error::UnsupportedExpression("precision must be positive".into()));
        }
        Ok(self.exact.clone())
    }

    /// The value itself; every number in the supported algebra has a rational
    /// standard part.
    pub fn exact(&self) -> &Rational {
        &self.exact
    }
}

pub fn standard_part_approx(session: &mut OracleSession, x: &Hyperrational) -> Result<RealApprox> {
    check_session(session, &[x])?;
    if classify(session, x)? == Magnitude::InfinitelyLarge {
        return Err(Error::InfiniteArgument);
    }
    let f = big_branch(session, x)?;
    let exact = f.limit().ok_or_else(|| Error::Internal("finite branch without a limit".into()))?;
    Ok(RealApprox { exact })
}

/// Whether `x` is invertible in the ring of finite numbers.
pub fn is_unit_in_finite_ring(session: &mut OracleSession, x: &Hyperrational) -> Result<bool> {
    match classify(session, x)? {
        Magnitude::InfinitelyLarge => Err(Error::InfiniteArgument),
        Magnitude::Infinitesimal => Ok(false),
        Magnitude::FiniteNonInfinitesimal => {
            let one = embed(session, Rational::one());
            let inv = h_arith(session, &one, x, ArithOp::Div)?;
            if classify(session, &inv)? == Magnitude::InfinitelyLarge {
                return Err(Error::Internal("inverse of a finite unit is infinite".into()));
            }
            Ok(true)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    RationalPoint,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "Left",
            Side::Right => "Right",
            Side::RationalPoint => "RationalPoint",
        }
    }
}

/// Left numbers have increasing representatives, right numbers decreasing
/// ones, and stationary representatives give the rationals.
pub fn side(session: &mut OracleSession, x: &Hyperrational) -> Result<Side> {
    if classify(session, x)? == Magnitude::InfinitelyLarge {
        return Err(Error::InfiniteArgument);
    }
    Ok(match extract_monotone(session, x)?.kind {
        MonotoneKind::StrictlyIncreasing => Side::Left,
        MonotoneKind::StrictlyDecreasing => Side::Right,
        MonotoneKind::Stationary => Side::RationalPoint,
    })
}

#[cfg(test)]
mod tests;
