//! Eventually periodic subsets of ω in a unique normal form.
//!
//! A set is described by a periodic tail pattern (`modulus`, `residues`) and a
//! finite patch below `threshold`: `added` holds the indices that are members
//! although the pattern says no, `removed` those that are not members although
//! the pattern says yes. The normal form has the minimal period and then the
//! minimal threshold, so extensional equality is structural equality.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest modulus the set algebra will build.
pub const MAX_MODULUS: u64 = 1 << 24;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpSet {
    threshold: u64,
    modulus: u64,
    residues: Vec<bool>,
    added: BTreeSet<u64>,
    removed: BTreeSet<u64>,
}

/// Size classification that drives forced oracle decisions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SizeClass {
    Finite(usize),
    Cofinite,
    ProperPeriodic(Rational),
    Constructed,
}

/// Constructor shapes for [`EpSet::from_predicate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetKind {
    Finite(Vec<u64>),
    Cofinite(Vec<u64>),
    Residue(u64, Vec<u64>),
    /// `{n : n >= from}`
    Tail(u64),
}

/// Boolean operators of the set algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetOp {
    And,
    Or,
    Minus,
}

impl EpSet {
    /// Builds the normal form of the set whose members below `threshold` are
    /// given by `head` and whose members from `threshold` on follow `pattern`.
    pub fn from_parts(threshold: u64, pattern: Vec<bool>, head: impl Fn(u64) -> bool) -> Result<Self> {
        EpSet::from_points(pattern, 0..threshold, head)
    }

    /// Normal form of the set that follows `pattern` except possibly at
    /// `points`, where membership is given by `member`.
    pub(crate) fn from_points(
        pattern: Vec<bool>,
        points: impl IntoIterator<Item = u64>,
        member: impl Fn(u64) -> bool,
    ) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::MalformedSet("modulus must be positive".into()));
        }
        let modulus = minimal_period(&pattern);
        let mut residues = pattern;
        residues.truncate(modulus);
        let modulus = modulus as u64;
        let mut added = BTreeSet::new();
        let mut removed = BTreeSet::new();
        for n in points {
            match (member(n), residues[(n % modulus) as usize]) {
                (true, false) => {
                    added.insert(n);
                }
                (false, true) => {
                    removed.insert(n);
                }
                _ => {}
            }
        }
        let threshold = added
            .iter()
            .next_back()
            .max(removed.iter().next_back())
            .map_or(0, |m| m + 1);
        Ok(EpSet { threshold, modulus, residues, added, removed })
    }

    pub fn empty() -> Self {
        EpSet::from_parts(0, vec![false], |_| false).unwrap()
    }

    pub fn omega() -> Self {
        EpSet::from_parts(0, vec![true], |_| true).unwrap()
    }

    pub fn from_predicate(kind: &SetKind) -> Result<Self> {
        match kind {
            SetKind::Finite(xs) => {
                let set: BTreeSet<u64> = xs.iter().copied().collect();
                EpSet::from_points(vec![false], set.iter().copied(), |n| set.contains(&n))
            }
            SetKind::Cofinite(xs) => {
                let set: BTreeSet<u64> = xs.iter().copied().collect();
                EpSet::from_points(vec![true], set.iter().copied(), |n| !set.contains(&n))
            }
            SetKind::Residue(m, rs) => {
                if *m == 0 || *m > MAX_MODULUS {
                    return Err(Error::MalformedSet(format!("modulus {m} out of range")));
                }
                if let Some(r) = rs.iter().find(|&&r| r >= *m) {
                    return Err(Error::MalformedSet(format!("residue {r} not below modulus {m}")));
                }
                let mut pattern = vec![false; *m as usize];
                for &r in rs {
                    pattern[r as usize] = true;
                }
                EpSet::from_parts(0, pattern, |_| false)
            }
            SetKind::Tail(from) => EpSet::from_parts(*from, vec![true], |_| false),
        }
    }

    pub fn residue(m: u64, rs: &[u64]) -> Result<Self> {
        EpSet::from_predicate(&SetKind::Residue(m, rs.to_vec()))
    }

    pub fn finite(xs: &[u64]) -> Self {
        EpSet::from_predicate(&SetKind::Finite(xs.to_vec())).unwrap()
    }

    pub fn cofinite(xs: &[u64]) -> Self {
        EpSet::from_predicate(&SetKind::Cofinite(xs.to_vec())).unwrap()
    }

    /// `{n : n >= from}`.
    pub fn tail(from: u64) -> Self {
        EpSet::from_predicate(&SetKind::Tail(from)).unwrap()
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn residues(&self) -> impl Iterator<Item = u64> + '_ {
        self.residues
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(r, _)| r as u64)
    }

    pub fn pattern_contains(&self, residue: u64) -> bool {
        self.residues[(residue % self.modulus) as usize]
    }

    pub fn added(&self) -> &BTreeSet<u64> {
        &self.added
    }

    pub fn removed(&self) -> &BTreeSet<u64> {
        &self.removed
    }

    pub fn contains(&self, n: u64) -> bool {
        if n < self.threshold {
            if self.added.contains(&n) {
                return true;
            }
            if self.removed.contains(&n) {
                return false;
            }
        }
        self.residues[(n % self.modulus) as usize]
    }

    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && !self.residues.iter().any(|&b| b)
    }

    pub fn classify_size(&self) -> SizeClass {
        let count = self.residues.iter().filter(|&&b| b).count() as u64;
        if count == 0 {
            SizeClass::Finite(self.added.len())
        } else if count == self.modulus {
            SizeClass::Cofinite
        } else {
            SizeClass::ProperPeriodic(Rational::new(count, self.modulus).unwrap())
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.classify_size(), SizeClass::Finite(_))
    }

    pub fn complement(&self) -> Self {
        EpSet {
            threshold: self.threshold,
            modulus: self.modulus,
            residues: self.residues.iter().map(|b| !b).collect(),
            added: self.removed.clone(),
            removed: self.added.clone(),
        }
    }

    pub fn combine(&self, other: &EpSet, op: SetOp) -> Result<Self> {
        let f = |a: bool, b: bool| match op {
            SetOp::And => a && b,
            SetOp::Or => a || b,
            SetOp::Minus => a && !b,
        };
        let modulus = self.modulus.lcm(&other.modulus);
        if modulus > MAX_MODULUS {
            return Err(Error::UnsupportedExpression(format!("modulus {modulus} too large")));
        }
        let pattern = (0..modulus)
            .map(|r| f(self.pattern_contains(r), other.pattern_contains(r)))
            .collect();
        // off the operands' exceptions the result follows the combined pattern
        let points: BTreeSet<u64> = [&self.added, &self.removed, &other.added, &other.removed]
            .into_iter()
            .flatten()
            .copied()
            .collect();
        EpSet::from_points(pattern, points, |n| f(self.contains(n), other.contains(n)))
    }

    pub fn intersect(&self, other: &EpSet) -> Result<Self> {
        self.combine(other, SetOp::And)
    }

    pub fn union(&self, other: &EpSet) -> Result<Self> {
        self.combine(other, SetOp::Or)
    }

    pub fn minus(&self, other: &EpSet) -> Result<Self> {
        self.combine(other, SetOp::Minus)
    }

    pub fn is_subset(&self, other: &EpSet) -> Result<bool> {
        Ok(self.minus(other)?.is_empty())
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        let finite = self.is_finite();
        let last = self.added.iter().next_back().copied();
        (0u64..)
            .take_while(move |&n| !finite || last.is_some_and(|l| n <= l))
            .filter(move |&n| self.contains(n))
    }

    /// The first `k` members in increasing order.
    pub fn enumerate(&self, k: usize) -> Result<Vec<u64>> {
        let out: Vec<u64> = self.iter().take(k).collect();
        if out.len() < k {
            return Err(Error::ExhaustedFinite(out.len()));
        }
        Ok(out)
    }
}

fn minimal_period(pattern: &[bool]) -> usize {
    let m = pattern.len();
    (1..=m)
        .filter(|d| m % d == 0)
        .find(|&d| (0..m).all(|i| pattern[i] == pattern[(i + d) % m]))
        .unwrap_or(m)
}

fn write_list<'a>(f: &mut fmt::Formatter<'_>, xs: impl Iterator<Item = &'a u64>) -> fmt::Result {
    let parts: Vec<String> = xs.map(u64::to_string).collect();
    write!(f, "{{{}}}", parts.join(","))
}

impl fmt::Display for EpSet {
    /// Journal form: `EP N=<n> m=<m> R={..} add={..} rm={..}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EP N={} m={} R=", self.threshold, self.modulus)?;
        let rs: Vec<u64> = self.residues().collect();
        write_list(f, rs.iter())?;
        write!(f, " add=")?;
        write_list(f, self.added.iter())?;
        write!(f, " rm=")?;
        write_list(f, self.removed.iter())
    }
}

impl fmt::Debug for EpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    let inner = s
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::MalformedSet(format!("expected braces in `{s}`")))?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) || (t.len() > 1 && t.starts_with('0')) {
                return Err(Error::MalformedSet(format!("bad number `{t}`")));
            }
            t.parse().map_err(|_| Error::MalformedSet(format!("bad number `{t}`")))
        })
        .collect()
}

fn field<'a>(tok: Option<&'a str>, key: &str) -> Result<&'a str> {
    tok.and_then(|t| t.strip_prefix(key))
        .ok_or_else(|| Error::MalformedSet(format!("expected `{key}`")))
}

impl FromStr for EpSet {
    type Err = Error;

    /// Parses the journal form; only normal forms are accepted so that the
    /// text round-trips bit-exactly.
    fn from_str(s: &str) -> Result<Self> {
        let mut toks = s.split(' ');
        if toks.next() != Some("EP") {
            return Err(Error::MalformedSet("expected `EP`".into()));
        }
        let threshold: u64 = field(toks.next(), "N=")?
            .parse()
            .map_err(|_| Error::MalformedSet("bad N".into()))?;
        let modulus: u64 = field(toks.next(), "m=")?
            .parse()
            .map_err(|_| Error::MalformedSet("bad m".into()))?;
        let residues = parse_list(field(toks.next(), "R=")?)?;
        let added = parse_list(field(toks.next(), "add=")?)?;
        let removed = parse_list(field(toks.next(), "rm=")?)?;
        if toks.next().is_some() {
            return Err(Error::MalformedSet("trailing fields".into()));
        }
        let base = EpSet::from_predicate(&SetKind::Residue(modulus, residues))?;
        let added_set: BTreeSet<u64> = added.iter().copied().collect();
        let removed_set: BTreeSet<u64> = removed.iter().copied().collect();
        let set = EpSet::from_parts(threshold, base.residues_pattern(modulus), |n| {
            if added_set.contains(&n) {
                true
            } else if removed_set.contains(&n) {
                false
            } else {
                base.contains(n)
            }
        })?;
        if set.to_string() != s {
            return Err(Error::MalformedSet(format!("`{s}` is not in normal form")));
        }
        Ok(set)
    }
}

impl EpSet {
    fn residues_pattern(&self, modulus: u64) -> Vec<bool> {
        (0..modulus).map(|r| self.pattern_contains(r)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constructor_normal_forms() {
        assert_eq!(EpSet::finite(&[3, 5]).to_string(), "EP N=6 m=1 R={} add={3,5} rm={}");
        let evens = EpSet::residue(2, &[0]).unwrap();
        assert_eq!(evens.enumerate(4).unwrap(), vec![0, 2, 4, 6]);
        assert_eq!(
            EpSet::cofinite(&[0, 1, 2]).to_string(),
            "EP N=3 m=1 R={0} add={} rm={0,1,2}"
        );
        assert_eq!(EpSet::residue(4, &[0, 2]).unwrap(), evens);
        assert!(EpSet::residue(0, &[]).is_err());
        assert!(EpSet::residue(3, &[3]).is_err());
    }

    #[test]
    fn algebra_examples() {
        let evens = EpSet::residue(2, &[0]).unwrap();
        let odds = EpSet::residue(2, &[1]).unwrap();
        assert_eq!(evens.intersect(&odds).unwrap(), EpSet::empty());
        let threes = EpSet::residue(3, &[0]).unwrap();
        assert_eq!(threes.complement().union(&threes).unwrap(), EpSet::omega());
        let crt = odds.intersect(&EpSet::residue(3, &[2]).unwrap()).unwrap();
        // oracle: direct scan
        let scanned: Vec<u64> = (0..=60).filter(|n| n % 2 == 1 && n % 3 == 2).collect();
        assert_eq!(crt.iter().take_while(|&n| n <= 60).collect::<Vec<_>>(), scanned);
        assert_eq!(crt, EpSet::residue(6, &[5]).unwrap());
        assert_eq!(crt.enumerate(3).unwrap(), vec![5, 11, 17]);
    }

    #[test]
    fn size_classes() {
        assert_eq!(EpSet::finite(&[3, 5]).classify_size(), SizeClass::Finite(2));
        assert_eq!(
            EpSet::residue(2, &[0]).unwrap().classify_size(),
            SizeClass::ProperPeriodic(Rational::new(1, 2).unwrap())
        );
        assert_eq!(EpSet::cofinite(&[0]).classify_size(), SizeClass::Cofinite);
        assert_eq!(EpSet::finite(&[3, 5]).enumerate(3), Err(Error::ExhaustedFinite(2)));
    }

    #[test]
    fn journal_text_rejects_non_normal() {
        assert!("EP N=6 m=2 R={0,1} add={} rm={}".parse::<EpSet>().is_err());
        assert!("EP N=9 m=1 R={} add={3} rm={}".parse::<EpSet>().is_err());
        assert!("EP N=0 m=1 R={} add={} rm={} x".parse::<EpSet>().is_err());
    }

    pub(crate) fn arb_epset() -> impl Strategy<Value = EpSet> {
        (1u64..7, proptest::collection::vec(any::<bool>(), 6), proptest::collection::vec(0u64..20, 0..5), proptest::collection::vec(0u64..20, 0..5))
            .prop_map(|(m, bits, add, rm)| {
                let pattern: Vec<bool> = bits[..m as usize].to_vec();
                EpSet::from_parts(20, pattern.clone(), |n| {
                    if add.contains(&n) {
                        true
                    } else if rm.contains(&n) {
                        false
                    } else {
                        pattern[(n % m) as usize]
                    }
                })
                .unwrap()
            })
    }

    proptest! {
        #[test]
        fn normal_form_is_canonical(a in arb_epset()) {
            let text = a.to_string();
            prop_assert_eq!(text.parse::<EpSet>().unwrap(), a.clone());
            let again = EpSet::from_parts(a.threshold() + 7, (0..a.modulus() * 3).map(|r| a.pattern_contains(r)).collect(), |n| a.contains(n)).unwrap();
            prop_assert_eq!(again, a);
        }

        #[test]
        fn boolean_laws(a in arb_epset(), b in arb_epset(), c in arb_epset()) {
            let lhs = a.union(&b).unwrap().complement();
            let rhs = a.complement().intersect(&b.complement()).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            let d1 = a.intersect(&b.union(&c).unwrap()).unwrap();
            let d2 = a.intersect(&b).unwrap().union(&a.intersect(&c).unwrap()).unwrap();
            prop_assert_eq!(&d1, &d2);
            for n in 0..1000 {
                prop_assert_eq!(lhs.contains(n), !(a.contains(n) || b.contains(n)));
                prop_assert_eq!(d1.contains(n), a.contains(n) && (b.contains(n) || c.contains(n)));
            }
        }
    }
}
