//! Univariate polynomials over ℚ in the index variable `n`, with the
//! large-argument sign analysis that makes comparison sets decidable.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{Rational, Sign};

/// Integer ranges at most this long are scanned term by term.
const DIRECT_SCAN: u64 = 16;

/// Polynomial with ascending coefficients; the leading coefficient is nonzero
/// unless the list is empty (the zero polynomial).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyQ {
    coeffs: Vec<Rational>,
    // coeffs[i] == ints[i] / scale, scale > 0; used for fast evaluation.
    ints: Vec<BigInt>,
    scale: BigInt,
}

impl PolyQ {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        let scale = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = coeffs
            .iter()
            .map(|c| c.numer() * (&scale / c.denom()))
            .collect();
        PolyQ { coeffs, ints, scale }
    }

    pub fn zero() -> Self {
        PolyQ::new(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        PolyQ::new(vec![c])
    }

    /// The polynomial `n`.
    pub fn var() -> Self {
        PolyQ::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn eval_int(&self, n: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.ints.iter().rev() {
            acc = acc * n + c;
        }
        acc
    }

    pub fn eval(&self, n: u64) -> Rational {
        if self.coeffs.is_empty() {
            return Rational::zero();
        }
        let v = self.eval_int(&BigInt::from(n));
        Rational::new(v, self.scale.clone()).expect("scale is positive")
    }

    pub fn sign_at(&self, n: u64) -> Sign {
        Sign::from_ordering(self.eval_int(&BigInt::from(n)).sign().cmp(&num_bigint::Sign::NoSign))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        PolyQ::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &PolyQ) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        PolyQ::new(
            (0..len)
                .map(|i| {
                    self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero)
                })
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        PolyQ::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &PolyQ) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PolyQ) -> Self {
        if self.is_zero() || other.is_zero() {
            return PolyQ::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        PolyQ::new(out)
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(PolyQ::constant(Rational::one()), |acc, _| acc.mul(self))
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &PolyQ) -> Result<(PolyQ, PolyQ)> {
        let d_deg = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead = divisor.leading().expect("nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(d_deg)];
        while rem.len() > d_deg && !rem.is_empty() {
            let shift = rem.len() - 1 - d_deg;
            let factor = rem.last().unwrap().checked_div(lead)?;
            for (i, c) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &(&factor * c);
            }
            quot[shift] = factor;
            rem.pop();
            while rem.last().is_some_and(Rational::is_zero) {
                rem.pop();
            }
        }
        Ok((PolyQ::new(quot), PolyQ::new(rem)))
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &PolyQ) -> PolyQ {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("b nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> PolyQ {
        match self.leading() {
            Some(l) => self.scale(&l.recip().expect("leading nonzero")),
            None => self.clone(),
        }
    }

    /// Sign of `p(n)` for all sufficiently large `n`.
    pub fn eventual_sign(&self) -> Sign {
        self.leading().map_or(Sign::Zero, Rational::sign)
    }

    /// Least `N` with `sign(p(n)) == eventual_sign(p)` for every `n >= N`.
    pub fn sign_threshold(&self) -> Result<u64> {
        let bound = self.root_bound()?;
        let target = self.eventual_sign();
        Ok(match self.sign_runs(0, bound + 1).last() {
            Some(&(start, _, sign)) if sign == target => start,
            _ => bound + 1,
        })
    }

    /// An integer above every real root.
    fn root_bound(&self) -> Result<u64> {
        let deg = self.degree().ok_or(Error::ZeroPolynomial)?;
        if deg == 0 {
            return Ok(0);
        }
        let lead = self.leading().unwrap();
        let max_ratio = self.coeffs[..deg]
            .iter()
            .map(|c| c.checked_div(lead).map(|r| r.abs()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or_else(Rational::zero);
        // Cauchy: every real root r has |r| < 1 + max_ratio
        let bound = (max_ratio + Rational::one()).ceil();
        bound
            .to_u64()
            .filter(|&b| b < u64::MAX / 2)
            .ok_or_else(|| Error::UnsupportedExpression(format!("root bound {bound} exceeds the index range")))
    }

    /// Nonnegative integer roots, ascending.
    pub fn integer_roots(&self) -> Result<Vec<u64>> {
        let bound = self.root_bound()?;
        Ok(self
            .sign_runs(0, bound + 1)
            .into_iter()
            .filter(|r| r.2 == Sign::Zero)
            .flat_map(|(a, b, _)| a..b)
            .collect())
    }

    /// Maximal runs `[a, b)` of integers in `[lo, hi)` on which the sign of
    /// `p` is constant, in order. Real roots are isolated with a Sturm
    /// sequence, so the cost does not grow with the length of the range.
    pub fn sign_runs(&self, lo: u64, hi: u64) -> Vec<(u64, u64, Sign)> {
        let mut runs: Vec<(u64, u64, Sign)> = Vec::new();
        if lo >= hi {
            return runs;
        }
        if self.degree().is_none_or(|d| d == 0) {
            runs.push((lo, hi, self.eventual_sign()));
            return runs;
        }
        let chain = self.sturm_chain();
        let mut push = |a: u64, b: u64, s: Sign| match runs.last_mut() {
            Some(last) if last.2 == s && last.1 == a => last.1 = b,
            _ => runs.push((a, b, s)),
        };
        let mut stack = vec![(lo, hi)];
        while let Some((a, b)) = stack.pop() {
            if b - a <= DIRECT_SCAN {
                for n in a..b {
                    push(n, n + 1, self.sign_at(n));
                }
            } else if self.root_free(&chain, a, b - 1) {
                push(a, b, self.sign_at(a));
            } else {
                let mid = a + (b - a) / 2;
                stack.push((mid, b));
                stack.push((a, mid));
            }
        }
        runs
    }

    // No real root in [a, b].
    fn root_free(&self, chain: &[PolyQ], a: u64, b: u64) -> bool {
        if self.sign_at(a) == Sign::Zero || self.sign_at(b) == Sign::Zero {
            return false;
        }
        let (a, b) = (Rational::from(a), Rational::from(b));
        variations(chain, &a) == variations(chain, &b)
    }

    fn derivative(&self) -> PolyQ {
        PolyQ::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Rational::from(i as u64))
                .collect(),
        )
    }

    fn eval_at(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    // Sturm sequence of the squarefree part.
    fn sturm_chain(&self) -> Vec<PolyQ> {
        let d = self.derivative();
        let p0 = self.div_rem(&self.gcd(&d)).expect("gcd divides").0;
        let mut chain = vec![p0.clone(), p0.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                return chain;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero");
            chain.push(r.neg());
        }
    }
}

fn variations(chain: &[PolyQ], x: &Rational) -> usize {
    let signs: Vec<Sign> = chain.iter().map(|p| p.eval_at(x).sign()).filter(|s| *s != Sign::Zero).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

impl fmt::Display for PolyQ {
    /// Renders in the sequence-language syntax, highest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.sign() == Sign::Negative;
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let var = match i {
                0 => String::new(),
                1 => "n".to_string(),
                k => format!("n^{k}"),
            };
            match (mag == Rational::one(), var.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                (true, false) => write!(f, "{var}")?,
                (false, false) => write!(f, "{mag}*{var}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyQ({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> PolyQ {
        PolyQ::new(cs.iter().map(|&c| Rational::from(c)).collect())
    }

    // brute-force oracle: smallest N such that the sign is constant on [N, hi]
    fn brute_threshold(poly: &PolyQ, hi: u64) -> u64 {
        let target = poly.eventual_sign();
        let mut n = hi + 1;
        while n > 0 && poly.sign_at(n - 1) == target {
            n -= 1;
        }
        n
    }

    #[test]
    fn eventual_sign_examples() {
        assert_eq!(p(&[-1000, 1]).eventual_sign(), Sign::Positive);
        assert_eq!(PolyQ::zero().eventual_sign(), Sign::Zero);
        let q = p(&[3, 10, -1]);
        assert_eq!(q.eventual_sign(), Sign::Negative);
        // Cauchy bound is 11; check past it directly
        for n in 11..200 {
            assert_eq!(q.sign_at(n), Sign::Negative);
        }
    }

    #[test]
    fn threshold_examples() {
        let lin = p(&[-5, 1]);
        let n = lin.sign_threshold().unwrap();
        assert!(n <= 6);
        for k in n..=10 {
            assert_eq!(lin.sign_at(k), Sign::Positive);
        }
        assert_eq!(p(&[3]).sign_threshold().unwrap(), 0);
        // (n-2)(n-7) = n^2 - 9n + 14
        let quad = p(&[14, -9, 1]);
        assert_eq!(brute_threshold(&quad, 10), 8);
        assert_eq!(quad.sign_threshold().unwrap(), 8);
        assert_eq!(PolyQ::zero().sign_threshold(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn gcd_and_division() {
        let a = p(&[14, -9, 1]);
        let b = p(&[-2, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, p(&[-7, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[-4, 0, 1])), b);
        assert_eq!(p(&[1, 1]).gcd(&p(&[2])), p(&[1]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[3, 10, -1]).to_string(), "-n^2 + 10*n + 3");
        assert_eq!(p(&[0, 1]).to_string(), "n");
        assert_eq!(PolyQ::new(vec![Rational::new(1, 2).unwrap()]).to_string(), "1/2");
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn threshold_is_sound(cs in proptest::collection::vec(-30i64..30, 1..5)) {
            let poly = p(&cs);
            prop_assume!(!poly.is_zero());
            let n = poly.sign_threshold().unwrap();
            let target = poly.eventual_sign();
            for k in n..n + 1000 {
                prop_assert_eq!(poly.sign_at(k), target);
            }
        }
    }
}
