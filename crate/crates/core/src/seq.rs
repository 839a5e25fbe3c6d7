//! Symbolic rational sequences `ω → ℚ`.
//!
//! [`SeqExpr`] is the expression tree the language and the hyperrational layer
//! work with. Every expression is total: a division whose divisor vanishes at
//! some `n` uses the divisor `1` there. [`Compiled`] is the evaluation normal
//! form: one reduced rational function per residue class modulo a common
//! modulus, plus finitely many patched indices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::epset::{EpSet, MAX_MODULUS};
use crate::error::{Error, Result};
use crate::poly::PolyQ;
use crate::rational::{ArithOp, Rational, Sign};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum SeqExpr {
    Const(Rational),
    /// Reduced `num/den` in `n`; `den` is monic and not the constant 1 unless
    /// `num` is non-constant.
    Ratio(PolyQ, PolyQ),
    Piecewise { modulus: u64, branches: Vec<SeqExpr> },
    /// Sorted, duplicate-free overrides on finitely many indices.
    Patch { points: Vec<(u64, Rational)>, base: Box<SeqExpr> },
    Add(Box<SeqExpr>, Box<SeqExpr>),
    Sub(Box<SeqExpr>, Box<SeqExpr>),
    Mul(Box<SeqExpr>, Box<SeqExpr>),
    Div(Box<SeqExpr>, Box<SeqExpr>),
    Neg(Box<SeqExpr>),
}

/// Relation selector for comparison sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Less,
    Equal,
    Greater,
}

impl Rel {
    pub fn holds(self, sign: Sign) -> bool {
        matches!(
            (self, sign),
            (Rel::Less, Sign::Negative) | (Rel::Equal, Sign::Zero) | (Rel::Greater, Sign::Positive)
        )
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Less => "<",
            Rel::Equal => "=",
            Rel::Greater => ">",
        }
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl SeqExpr {
    pub fn constant(q: Rational) -> Self {
        SeqExpr::Const(q)
    }

    /// The identity sequence `n`.
    pub fn var() -> Self {
        SeqExpr::Ratio(PolyQ::var(), PolyQ::constant(Rational::one()))
    }

    /// Canonical rational function; an identically zero denominator is an error.
    pub fn ratio(num: PolyQ, den: PolyQ) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(SeqExpr::Const(Rational::zero()));
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g)?;
        let (den, _) = den.div_rem(&g)?;
        let lead = den.leading().unwrap().recip()?;
        let (num, den) = (num.scale(&lead), den.scale(&lead));
        match (num.as_constant(), den.degree()) {
            (Some(c), Some(0)) => Ok(SeqExpr::Const(c)),
            _ => Ok(SeqExpr::Ratio(num, den)),
        }
    }

    fn as_ratio(&self) -> Option<(PolyQ, PolyQ)> {
        match self {
            SeqExpr::Const(c) => Some((PolyQ::constant(c.clone()), PolyQ::constant(Rational::one()))),
            SeqExpr::Ratio(n, d) => Some((n.clone(), d.clone())),
            _ => None,
        }
    }

    pub fn is_rational_function(&self) -> bool {
        matches!(self, SeqExpr::Const(_) | SeqExpr::Ratio(..))
    }

    pub fn add(a: SeqExpr, b: SeqExpr) -> SeqExpr {
        match (a.as_ratio(), b.as_ratio()) {
            (Some((an, ad)), Some((bn, bd))) => {
                SeqExpr::ratio(an.mul(&bd).add(&bn.mul(&ad)), ad.mul(&bd)).expect("nonzero den")
            }
            _ => SeqExpr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: SeqExpr, b: SeqExpr) -> SeqExpr {
        match (a.as_ratio(), b.as_ratio()) {
            (Some((an, ad)), Some((bn, bd))) => {
                SeqExpr::ratio(an.mul(&bd).sub(&bn.mul(&ad)), ad.mul(&bd)).expect("nonzero den")
            }
            _ => SeqExpr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: SeqExpr, b: SeqExpr) -> SeqExpr {
        match (a.as_ratio(), b.as_ratio()) {
            (Some((an, ad)), Some((bn, bd))) => {
                SeqExpr::ratio(an.mul(&bn), ad.mul(&bd)).expect("nonzero den")
            }
            _ => SeqExpr::Mul(Box::new(a), Box::new(b)),
        }
    }

    /// Division; fails only when the divisor is identically zero.
    pub fn div(a: SeqExpr, b: SeqExpr) -> Result<SeqExpr> {
        match (a.as_ratio(), b.as_ratio()) {
            (Some((an, ad)), Some((bn, bd))) => SeqExpr::ratio(an.mul(&bd), ad.mul(&bn)),
            _ => Ok(SeqExpr::Div(Box::new(a), Box::new(b))),
        }
    }

    pub fn neg(a: SeqExpr) -> SeqExpr {
        match a.as_ratio() {
            Some((an, ad)) => SeqExpr::ratio(an.neg(), ad).expect("nonzero den"),
            None => SeqExpr::Neg(Box::new(a)),
        }
    }

    pub fn pow(a: SeqExpr, exp: u32) -> SeqExpr {
        if let Some((an, ad)) = a.as_ratio() {
            return SeqExpr::ratio(an.pow(exp), ad.pow(exp)).expect("nonzero den");
        }
        let mut acc = SeqExpr::Const(Rational::one());
        for _ in 0..exp {
            acc = SeqExpr::mul(acc, a.clone());
        }
        acc
    }

    pub fn arith(a: SeqExpr, b: SeqExpr, op: ArithOp) -> Result<SeqExpr> {
        Ok(match op {
            ArithOp::Add => SeqExpr::add(a, b),
            ArithOp::Sub => SeqExpr::sub(a, b),
            ArithOp::Mul => SeqExpr::mul(a, b),
            ArithOp::Div => SeqExpr::div(a, b)?,
        })
    }

    pub fn piecewise(modulus: u64, branches: Vec<SeqExpr>) -> Result<SeqExpr> {
        if modulus == 0 || branches.len() as u64 != modulus {
            return Err(Error::UnsupportedExpression(format!(
                "piecewise modulus {modulus} needs exactly {modulus} branches, got {}",
                branches.len()
            )));
        }
        Ok(SeqExpr::Piecewise { modulus, branches })
    }

    pub fn patch(points: Vec<(u64, Rational)>, base: SeqExpr) -> Result<SeqExpr> {
        let mut sorted = points;
        sorted.sort_by_key(|(i, _)| *i);
        if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::UnsupportedExpression("patch index repeated".into()));
        }
        Ok(SeqExpr::Patch { points: sorted, base: Box::new(base) })
    }

    /// Direct recursive evaluation, independent of [`Compiled`].
    pub fn eval(&self, n: u64) -> Rational {
        match self {
            SeqExpr::Const(c) => c.clone(),
            SeqExpr::Ratio(num, den) => {
                let d = den.eval(n);
                if d.is_zero() {
                    num.eval(n)
                } else {
                    num.eval(n).checked_div(&d).unwrap()
                }
            }
            SeqExpr::Piecewise { modulus, branches } => branches[(n % modulus) as usize].eval(n),
            SeqExpr::Patch { points, base } => match points.binary_search_by_key(&n, |(i, _)| *i) {
                Ok(k) => points[k].1.clone(),
                Err(_) => base.eval(n),
            },
            SeqExpr::Add(a, b) => a.eval(n) + b.eval(n),
            SeqExpr::Sub(a, b) => a.eval(n) - b.eval(n),
            SeqExpr::Mul(a, b) => a.eval(n) * b.eval(n),
            SeqExpr::Div(a, b) => {
                let d = b.eval(n);
                if d.is_zero() {
                    a.eval(n)
                } else {
                    a.eval(n).checked_div(&d).unwrap()
                }
            }
            SeqExpr::Neg(a) => -a.eval(n),
        }
    }

    /// Indices where some divisor vanishes, restricted to `n < limit`.
    pub fn divisor_zeros(&self, limit: u64) -> Vec<u64> {
        let mut out = Vec::new();
        self.collect_divisor_zeros(limit, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_divisor_zeros(&self, limit: u64, out: &mut Vec<u64>) {
        match self {
            SeqExpr::Const(_) => {}
            SeqExpr::Ratio(_, den) => {
                if let Ok(roots) = den.integer_roots() {
                    out.extend(roots.into_iter().filter(|&n| n < limit));
                }
            }
            SeqExpr::Piecewise { branches, .. } => {
                branches.iter().for_each(|b| b.collect_divisor_zeros(limit, out))
            }
            SeqExpr::Patch { base, .. } => base.collect_divisor_zeros(limit, out),
            SeqExpr::Add(a, b) | SeqExpr::Sub(a, b) | SeqExpr::Mul(a, b) => {
                a.collect_divisor_zeros(limit, out);
                b.collect_divisor_zeros(limit, out);
            }
            SeqExpr::Div(a, b) => {
                a.collect_divisor_zeros(limit, out);
                b.collect_divisor_zeros(limit, out);
                if let Ok(c) = Compiled::new(b) {
                    if let Ok(zs) = c.zero_indices_below(limit) {
                        out.extend(zs);
                    }
                }
            }
            SeqExpr::Neg(a) => a.collect_divisor_zeros(limit, out),
        }
    }

    fn is_atomic(&self) -> bool {
        match self {
            SeqExpr::Piecewise { .. } | SeqExpr::Patch { .. } => true,
            SeqExpr::Const(c) => c.is_integer() && c.sign() != Sign::Negative,
            _ => false,
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_atomic() {
            write!(f, "{self}")
        } else {
            write!(f, "({self})")
        }
    }
}

impl fmt::Display for SeqExpr {
    /// Sequence-language syntax; reparses to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqExpr::Const(c) => write!(f, "{c}"),
            SeqExpr::Ratio(num, den) => {
                if den.degree() == Some(0) {
                    write!(f, "{num}")
                } else {
                    write!(f, "({num})/({den})")
                }
            }
            SeqExpr::Piecewise { modulus, branches } => {
                write!(f, "piecewise(mod {modulus}")?;
                for (r, b) in branches.iter().enumerate() {
                    write!(f, "; {r}: {b}")?;
                }
                write!(f, ")")
            }
            SeqExpr::Patch { points, base } => {
                write!(f, "patch(")?;
                for (k, (i, q)) in points.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{i}: {q}")?;
                }
                write!(f, "; {base})")
            }
            SeqExpr::Add(a, b) | SeqExpr::Sub(a, b) | SeqExpr::Mul(a, b) | SeqExpr::Div(a, b) => {
                let op = match self {
                    SeqExpr::Add(..) => '+',
                    SeqExpr::Sub(..) => '-',
                    SeqExpr::Mul(..) => '*',
                    _ => '/',
                };
                a.fmt_operand(f)?;
                write!(f, " {op} ")?;
                b.fmt_operand(f)
            }
            SeqExpr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_operand(f)
            }
        }
    }
}

impl fmt::Debug for SeqExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SeqExpr({self})")
    }
}

/// A reduced rational function with a nonzero denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFn {
    pub num: PolyQ,
    pub den: PolyQ,
}

impl RatFn {
    pub fn constant(c: Rational) -> Self {
        RatFn { num: PolyQ::constant(c), den: PolyQ::constant(Rational::one()) }
    }

    pub fn new(num: PolyQ, den: PolyQ) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RatFn::constant(Rational::zero());
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g).unwrap().0;
        let den = den.div_rem(&g).unwrap().0;
        let lead = den.leading().unwrap().recip().unwrap();
        RatFn { num: num.scale(&lead), den: den.scale(&lead) }
    }

    pub fn eval(&self, n: u64) -> Option<Rational> {
        let d = self.den.eval(n);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(n).checked_div(&d).unwrap())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match (self.num.as_constant(), self.den.degree()) {
            (Some(c), Some(0)) => Some(c.checked_div(&self.den.coeffs()[0]).unwrap()),
            _ => None,
        }
    }

    /// Sign of the values for large `n`, and an index from which it holds.
    pub fn eventual_sign(&self) -> (Sign, u64) {
        if self.num.is_zero() {
            return (Sign::Zero, 0);
        }
        let sign = self.num.eventual_sign().times(self.den.eventual_sign());
        let from = self.num.sign_threshold().unwrap().max(self.den.sign_threshold().unwrap());
        (sign, from)
    }

    /// Limit as `n → ∞`, or `None` when the values are unbounded.
    pub fn limit(&self) -> Option<Rational> {
        let (nd, dd) = (self.num.degree(), self.den.degree().unwrap());
        match nd {
            None => Some(Rational::zero()),
            Some(k) if k < dd => Some(Rational::zero()),
            Some(k) if k == dd => {
                Some(self.num.leading().unwrap().checked_div(self.den.leading().unwrap()).unwrap())
            }
            _ => None,
        }
    }

    fn combine(a: &RatFn, b: &RatFn, op: ArithOp) -> RatFn {
        match op {
            ArithOp::Add => RatFn::new(a.num.mul(&b.den).add(&b.num.mul(&a.den)), a.den.mul(&b.den)),
            ArithOp::Sub => RatFn::new(a.num.mul(&b.den).sub(&b.num.mul(&a.den)), a.den.mul(&b.den)),
            ArithOp::Mul => RatFn::new(a.num.mul(&b.num), a.den.mul(&b.den)),
            ArithOp::Div if b.is_zero() => a.clone(),
            ArithOp::Div => RatFn::new(a.num.mul(&b.den), a.den.mul(&b.num)),
        }
    }
}

/// Branch-per-residue normal form of a sequence.
///
/// For `n >= bound`, or `n` below it and not patched, the value is
/// `branches[n % modulus](n)` and that denominator is nonzero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Compiled {
    modulus: u64,
    branches: Vec<RatFn>,
    bound: u64,
    patch: BTreeMap<u64, Rational>,
}

fn checked_lcm(a: u64, b: u64) -> Result<u64> {
    let l = a.lcm(&b);
    if l > MAX_MODULUS {
        return Err(Error::UnsupportedExpression(format!("modulus {l} too large")));
    }
    Ok(l)
}

impl Compiled {
    pub fn new(expr: &SeqExpr) -> Result<Compiled> {
        match expr {
            SeqExpr::Const(c) => Ok(Compiled::constant(c.clone())),
            SeqExpr::Ratio(num, den) => {
                let f = RatFn::new(num.clone(), den.clone());
                Ok(Compiled::fixed(1, vec![f], den.integer_roots()?, |n| expr.eval(n)))
            }
            SeqExpr::Piecewise { modulus, branches } => {
                let parts = branches.iter().map(Compiled::new).collect::<Result<Vec<_>>>()?;
                let mut m = *modulus;
                for p in &parts {
                    m = checked_lcm(m, p.modulus)?;
                }
                let fs = (0..m)
                    .map(|r| parts[(r % modulus) as usize].branch(r).clone())
                    .collect();
                let candidates: BTreeSet<u64> = parts.iter().flat_map(|p| p.patch.keys().copied()).collect();
                Ok(Compiled::fixed(m, fs, candidates, |n| {
                    parts[(n % modulus) as usize].eval(n)
                }))
            }
            SeqExpr::Patch { points, base } => {
                let mut c = Compiled::new(base)?;
                for (i, q) in points {
                    c.patch.insert(*i, q.clone());
                }
                c.bound = c.patch.keys().next_back().map_or(c.bound, |&k| c.bound.max(k + 1));
                Ok(c)
            }
            SeqExpr::Add(a, b) => Compiled::combine(&Compiled::new(a)?, &Compiled::new(b)?, ArithOp::Add),
            SeqExpr::Sub(a, b) => Compiled::combine(&Compiled::new(a)?, &Compiled::new(b)?, ArithOp::Sub),
            SeqExpr::Mul(a, b) => Compiled::combine(&Compiled::new(a)?, &Compiled::new(b)?, ArithOp::Mul),
            SeqExpr::Div(a, b) => Compiled::combine(&Compiled::new(a)?, &Compiled::new(b)?, ArithOp::Div),
            SeqExpr::Neg(a) => Compiled::combine(
                &Compiled::constant(Rational::zero()),
                &Compiled::new(a)?,
                ArithOp::Sub,
            ),
        }
    }

    pub fn constant(c: Rational) -> Compiled {
        Compiled { modulus: 1, branches: vec![RatFn::constant(c)], bound: 0, patch: BTreeMap::new() }
    }

    /// Patches every candidate index where the branch formula is undefined or
    /// disagrees with `direct`. Off the candidates the two must agree.
    fn fixed(
        modulus: u64,
        branches: Vec<RatFn>,
        candidates: impl IntoIterator<Item = u64>,
        direct: impl Fn(u64) -> Rational,
    ) -> Compiled {
        let mut patch = BTreeMap::new();
        for n in candidates {
            let want = direct(n);
            if branches[(n % modulus) as usize].eval(n).as_ref() != Some(&want) {
                patch.insert(n, want);
            }
        }
        let bound = patch.keys().next_back().map_or(0, |&k| k + 1);
        Compiled { modulus, branches, bound, patch }
    }

    pub fn combine(a: &Compiled, b: &Compiled, op: ArithOp) -> Result<Compiled> {
        let m = checked_lcm(a.modulus, b.modulus)?;
        let mut candidates: BTreeSet<u64> = a.patch.keys().chain(b.patch.keys()).copied().collect();
        let mut fs = Vec::with_capacity(m as usize);
        for r in 0..m {
            let (fa, fb) = (a.branch(r), b.branch(r));
            let f = RatFn::combine(fa, fb, op);
            let mut vanishing = vec![&fa.den, &fb.den, &f.den];
            if op == ArithOp::Div && !fb.is_zero() {
                vanishing.push(&fb.num);
            }
            for p in vanishing {
                candidates.extend(p.integer_roots()?.into_iter().filter(|n| n % m == r));
            }
            fs.push(f);
        }
        Ok(Compiled::fixed(m, fs, candidates, |n| {
            let (x, y) = (a.eval(n), b.eval(n));
            match op {
                ArithOp::Add => x + y,
                ArithOp::Sub => x - y,
                ArithOp::Mul => x * y,
                ArithOp::Div if y.is_zero() => x,
                ArithOp::Div => x.checked_div(&y).unwrap(),
            }
        }))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn branches(&self) -> &[RatFn] {
        &self.branches
    }

    pub fn branch(&self, residue: u64) -> &RatFn {
        &self.branches[(residue % self.modulus) as usize]
    }

    pub fn patch(&self) -> &BTreeMap<u64, Rational> {
        &self.patch
    }

    pub fn eval(&self, n: u64) -> Rational {
        if let Some(v) = self.patch.get(&n) {
            return v.clone();
        }
        self.branch(n)
            .eval(n)
            .expect("normal form guarantees a nonzero denominator off the patch")
    }

    /// `{n : sign(x_n) satisfies rel}` as an eventually periodic set.
    pub fn sign_set(&self, rel: Rel) -> Result<EpSet> {
        let m = self.modulus;
        let mut pattern = Vec::with_capacity(m as usize);
        let mut points: BTreeSet<u64> = self.patch.keys().copied().collect();
        for (r, f) in self.branches.iter().enumerate() {
            let r = r as u64;
            let (sign, from) = f.eventual_sign();
            let tail = rel.holds(sign);
            pattern.push(tail);
            // the sign of num/den is the sign of num·den wherever den ≠ 0
            for (a, b, s) in f.num.mul(&f.den).sign_runs(0, from) {
                if rel.holds(s) != tail {
                    let first = a + (r + m - a % m) % m;
                    points.extend((first..b).step_by(m as usize));
                }
            }
        }
        EpSet::from_points(pattern, points, |n| rel.holds(self.eval(n).sign()))
    }

    fn zero_indices_below(&self, limit: u64) -> Result<Vec<u64>> {
        let zeros = self.sign_set(Rel::Equal)?;
        if !zeros.is_finite() {
            return Ok(Vec::new());
        }
        Ok(zeros.iter().take_while(|&n| n < limit).collect())
    }
}

/// Shared compiled form, cheap to clone.
pub type SharedCompiled = Arc<Compiled>;

/// `{n | x_n rel y_n}`.
pub fn comparison_set(x: &SeqExpr, y: &SeqExpr, rel: Rel) -> Result<EpSet> {
    let diff = Compiled::combine(&Compiled::new(x)?, &Compiled::new(y)?, ArithOp::Sub)?;
    diff.sign_set(rel)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn n() -> SeqExpr {
        SeqExpr::var()
    }

    fn c(s: &str) -> SeqExpr {
        SeqExpr::Const(q(s))
    }

    fn recip_n_plus_1() -> SeqExpr {
        SeqExpr::div(c("1"), SeqExpr::add(n(), c("1"))).unwrap()
    }

    #[test]
    fn folds_rational_functions() {
        let x = recip_n_plus_1();
        assert!(matches!(x, SeqExpr::Ratio(..)));
        let y = SeqExpr::div(n(), SeqExpr::add(n(), c("1"))).unwrap();
        assert_eq!(SeqExpr::add(x, y), c("1"));
        assert_eq!(SeqExpr::div(n(), n()).unwrap(), c("1"));
        assert!(SeqExpr::div(c("1"), c("0")).is_err());
    }

    #[test]
    fn comparison_examples() {
        assert_eq!(comparison_set(&recip_n_plus_1(), &c("0"), Rel::Less).unwrap(), EpSet::empty());
        let gt = comparison_set(&n(), &c("10"), Rel::Greater).unwrap();
        let scanned: Vec<u64> = (0..=20).filter(|&k| k > 10).collect();
        assert_eq!(gt.iter().take_while(|&k| k <= 20).collect::<Vec<_>>(), scanned);
        assert_eq!(gt, EpSet::tail(11));
        let pw = SeqExpr::piecewise(2, vec![c("0"), c("1")]).unwrap();
        assert_eq!(comparison_set(&pw, &c("0"), Rel::Equal).unwrap(), EpSet::residue(2, &[0]).unwrap());
    }

    #[test]
    fn divisor_patching() {
        let z = SeqExpr::div(c("1"), SeqExpr::sub(n(), c("3"))).unwrap();
        assert_eq!(z.eval(3), q("1"));
        assert_eq!(Compiled::new(&z).unwrap().eval(3), q("1"));
        assert_eq!(z.divisor_zeros(100), vec![3]);
    }

    #[test]
    fn compiled_matches_direct_evaluation() {
        let pw = SeqExpr::piecewise(3, vec![n(), recip_n_plus_1(), c("-2")]).unwrap();
        let odd = SeqExpr::piecewise(2, vec![c("0"), n()]).unwrap();
        let quot = SeqExpr::div(SeqExpr::add(pw.clone(), c("5")), odd.clone()).unwrap();
        let patched = SeqExpr::patch(vec![(4, q("7/3")), (0, q("-1"))], quot.clone()).unwrap();
        for e in [pw, odd, quot, patched] {
            let comp = Compiled::new(&e).unwrap();
            for k in 0..300 {
                assert_eq!(comp.eval(k), e.eval(k), "{e} at {k}");
            }
        }
    }

    #[test]
    fn display_forms() {
        assert_eq!(recip_n_plus_1().to_string(), "(1)/(n + 1)");
        let pw = SeqExpr::piecewise(2, vec![c("0"), n()]).unwrap();
        assert_eq!(pw.to_string(), "piecewise(mod 2; 0: 0; 1: n)");
        assert_eq!(SeqExpr::add(pw, c("-1/2")).to_string(), "piecewise(mod 2; 0: 0; 1: n) + (-1/2)");
    }
}
