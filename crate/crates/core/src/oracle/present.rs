//! How infinite combinatorial inputs are handed to the oracle.
//!
//! Partitions, families of sets, pair colorings and injections on ω are all
//! infinite objects. Each is presented by a pointwise rule plus, for every
//! index, a structured [`EpSet`] describing the relevant slice, which is what
//! the oracle actually decides.

use std::collections::{BTreeMap, HashSet};
use std::sync::{Arc, Mutex};

use crate::epset::EpSet;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::seq::{Compiled, Rel};

/// A partition of ω, or equivalently a map `ω → ω` with its fibers.
pub trait Partition: Send + Sync {
    /// Identifier of the class containing `n`.
    fn class_of(&self, n: u64) -> u64;
    /// The class with identifier `class` as a structured set.
    fn class_set(&self, class: u64) -> Result<EpSet>;
}

/// A family `i ↦ A_i` of index sets.
pub trait Family: Send + Sync {
    fn member(&self, i: u64) -> Result<EpSet>;
}

/// A two-coloring of `[ω]²`.
pub trait Coloring: Send + Sync {
    /// Color of `{i, j}` with `i < j`.
    fn color(&self, i: u64, j: u64) -> u8;
    /// `{j > i : color(i, j) = 0}`.
    fn zero_set(&self, i: u64) -> Result<EpSet>;

    /// `{j > i : color(i, j) = c}`.
    fn color_set(&self, i: u64, c: u8) -> Result<EpSet> {
        let zero = self.zero_set(i)?;
        if c == 0 {
            Ok(zero)
        } else {
            EpSet::tail(i + 1).minus(&zero)
        }
    }
}

/// An injection `ω → ω`.
pub trait Injection: Send + Sync {
    fn map(&self, n: u64) -> u64;
    /// `{j > i : π(j) > π(i)}`.
    fn increasing_from(&self, i: u64) -> Result<EpSet>;
}

/// Consecutive blocks `{k·size, …, k·size + size − 1}`.
pub struct BlockPartition {
    pub size: u64,
}

impl Partition for BlockPartition {
    fn class_of(&self, n: u64) -> u64 {
        n / self.size
    }

    fn class_set(&self, class: u64) -> Result<EpSet> {
        let lo = class * self.size;
        Ok(EpSet::finite(&(lo..lo + self.size).collect::<Vec<_>>()))
    }
}

/// Partition given by two closures.
pub struct FnPartition<C, S> {
    class_of: C,
    class_set: S,
}

impl<C, S> FnPartition<C, S>
where
    C: Fn(u64) -> u64 + Send + Sync,
    S: Fn(u64) -> Result<EpSet> + Send + Sync,
{
    pub fn new(class_of: C, class_set: S) -> Self {
        FnPartition { class_of, class_set }
    }
}

impl<C, S> Partition for FnPartition<C, S>
where
    C: Fn(u64) -> u64 + Send + Sync,
    S: Fn(u64) -> Result<EpSet> + Send + Sync,
{
    fn class_of(&self, n: u64) -> u64 {
        (self.class_of)(n)
    }

    fn class_set(&self, class: u64) -> Result<EpSet> {
        (self.class_set)(class)
    }
}

/// Fibers of a map with an explicit preimage bound: `below(i)` is some `N`
/// with `f(n) > i` for all `n >= N`, which makes every fiber finite.
pub struct FiniteFibers<F, B> {
    map: F,
    below: B,
}

impl<F, B> FiniteFibers<F, B>
where
    F: Fn(u64) -> u64 + Send + Sync,
    B: Fn(u64) -> u64 + Send + Sync,
{
    pub fn new(map: F, below: B) -> Self {
        FiniteFibers { map, below }
    }
}

impl<F, B> Partition for FiniteFibers<F, B>
where
    F: Fn(u64) -> u64 + Send + Sync,
    B: Fn(u64) -> u64 + Send + Sync,
{
    fn class_of(&self, n: u64) -> u64 {
        (self.map)(n)
    }

    fn class_set(&self, class: u64) -> Result<EpSet> {
        let top = (self.below)(class);
        let members: Vec<u64> = (0..top).filter(|&n| (self.map)(n) == class).collect();
        Ok(EpSet::finite(&members))
    }
}

/// Level sets `{n : x_n = v}` of a sequence; a class is named by its least
/// member.
pub struct LevelPartition {
    form: Arc<Compiled>,
}

impl LevelPartition {
    pub fn new(form: Arc<Compiled>) -> Self {
        LevelPartition { form }
    }

    fn level(&self, value: Rational) -> Result<EpSet> {
        Compiled::combine(&self.form, &Compiled::constant(value), crate::rational::ArithOp::Sub)?
            .sign_set(Rel::Equal)
    }
}

impl Partition for LevelPartition {
    fn class_of(&self, n: u64) -> u64 {
        self.level(self.form.eval(n))
            .ok()
            .and_then(|s| s.iter().next())
            .unwrap_or(n)
    }

    fn class_set(&self, class: u64) -> Result<EpSet> {
        self.level(self.form.eval(class))
    }
}

/// Family with the same member at every index.
pub struct ConstFamily(pub EpSet);

impl Family for ConstFamily {
    fn member(&self, _i: u64) -> Result<EpSet> {
        Ok(self.0.clone())
    }
}

/// Family given by a closure, with memoized members.
pub struct FnFamily<F> {
    rule: F,
    cache: Mutex<BTreeMap<u64, EpSet>>,
}

impl<F> FnFamily<F>
where
    F: Fn(u64) -> Result<EpSet> + Send + Sync,
{
    pub fn new(rule: F) -> Self {
        FnFamily { rule, cache: Mutex::new(BTreeMap::new()) }
    }
}

impl<F> Family for FnFamily<F>
where
    F: Fn(u64) -> Result<EpSet> + Send + Sync,
{
    fn member(&self, i: u64) -> Result<EpSet> {
        if let Some(s) = self.cache.lock().unwrap().get(&i) {
            return Ok(s.clone());
        }
        let s = (self.rule)(i)?;
        self.cache.lock().unwrap().insert(i, s.clone());
        Ok(s)
    }
}

/// `color{i,j} = 0` iff `(i + j) mod m` lies in `zero_sums`.
pub struct SumColoring {
    pub modulus: u64,
    pub zero_sums: Vec<u64>,
}

impl Coloring for SumColoring {
    fn color(&self, i: u64, j: u64) -> u8 {
        u8::from(!self.zero_sums.contains(&((i + j) % self.modulus)))
    }

    fn zero_set(&self, i: u64) -> Result<EpSet> {
        let m = self.modulus;
        let residues: Vec<u64> = self.zero_sums.iter().map(|&s| (s + m - i % m) % m).collect();
        EpSet::residue(m, &residues)?.intersect(&EpSet::tail(i + 1))
    }
}

/// `color{i,j} = 0` iff `j − i` lies in a finite set of distances.
pub struct DistanceColoring {
    pub distances: Vec<u64>,
}

impl Coloring for DistanceColoring {
    fn color(&self, i: u64, j: u64) -> u8 {
        u8::from(!self.distances.contains(&(j - i)))
    }

    fn zero_set(&self, i: u64) -> Result<EpSet> {
        let xs: Vec<u64> = self.distances.iter().filter(|&&d| d > 0).map(|&d| i + d).collect();
        Ok(EpSet::finite(&xs))
    }
}

/// `color{i,j}` looked up from a symmetric table on `(i mod m, j mod m)`.
pub struct ResidueTableColoring {
    modulus: u64,
    zero: Vec<Vec<bool>>,
}

impl ResidueTableColoring {
    /// `zero[a][b]` marks residue pairs colored 0; it must be symmetric.
    pub fn new(modulus: u64, zero: Vec<Vec<bool>>) -> Result<Self> {
        let m = modulus as usize;
        let square = zero.len() == m && zero.iter().all(|row| row.len() == m);
        if modulus == 0 || !square {
            return Err(Error::UnsupportedColoring("table must be m × m".into()));
        }
        if (0..m).any(|a| (0..m).any(|b| zero[a][b] != zero[b][a])) {
            return Err(Error::UnsupportedColoring("table must be symmetric".into()));
        }
        Ok(ResidueTableColoring { modulus, zero })
    }
}

impl Coloring for ResidueTableColoring {
    fn color(&self, i: u64, j: u64) -> u8 {
        let m = self.modulus;
        u8::from(!self.zero[(i % m) as usize][(j % m) as usize])
    }

    fn zero_set(&self, i: u64) -> Result<EpSet> {
        let row = &self.zero[(i % self.modulus) as usize];
        let residues: Vec<u64> = (0..self.modulus).filter(|&b| row[b as usize]).collect();
        EpSet::residue(self.modulus, &residues)?.intersect(&EpSet::tail(i + 1))
    }
}

/// Coloring given by a color rule and a zero-set rule.
pub struct FnColoring<C, Z> {
    color: C,
    zero: Z,
}

impl<C, Z> FnColoring<C, Z>
where
    C: Fn(u64, u64) -> u8 + Send + Sync,
    Z: Fn(u64) -> Result<EpSet> + Send + Sync,
{
    pub fn new(color: C, zero: Z) -> Self {
        FnColoring { color, zero }
    }
}

impl<C, Z> Coloring for FnColoring<C, Z>
where
    C: Fn(u64, u64) -> u8 + Send + Sync,
    Z: Fn(u64) -> Result<EpSet> + Send + Sync,
{
    fn color(&self, i: u64, j: u64) -> u8 {
        (self.color)(i, j)
    }

    fn zero_set(&self, i: u64) -> Result<EpSet> {
        (self.zero)(i)
    }
}

/// Injection given pointwise together with a preimage bound: `below(v)` is
/// some `N` such that `π(j) >= v` for all `j >= N`.
pub struct FnInjection<F, B> {
    map: F,
    below: B,
}

impl<F, B> FnInjection<F, B>
where
    F: Fn(u64) -> u64 + Send + Sync,
    B: Fn(u64) -> u64 + Send + Sync,
{
    pub fn new(map: F, below: B) -> Self {
        FnInjection { map, below }
    }
}

impl<F, B> Injection for FnInjection<F, B>
where
    F: Fn(u64) -> u64 + Send + Sync,
    B: Fn(u64) -> u64 + Send + Sync,
{
    fn map(&self, n: u64) -> u64 {
        (self.map)(n)
    }

    fn increasing_from(&self, i: u64) -> Result<EpSet> {
        let v = (self.map)(i);
        let top = (self.below)(v + 1).max(i + 1);
        let excluded: Vec<u64> = (0..top).filter(|&j| j <= i || (self.map)(j) <= v).collect();
        Ok(EpSet::cofinite(&excluded))
    }
}

/// The pair coloring of an injection: `{i < j}` gets 0 iff `π(i) < π(j)`.
pub struct OrderColoring(pub Arc<dyn Injection>);

impl Coloring for OrderColoring {
    fn color(&self, i: u64, j: u64) -> u8 {
        u8::from(self.0.map(i) >= self.0.map(j))
    }

    fn zero_set(&self, i: u64) -> Result<EpSet> {
        self.0.increasing_from(i)
    }
}

/// Checks a partition presentation on `0..sample`.
pub fn verify_partition(p: &dyn Partition, sample: u64) -> Result<()> {
    let mut classes: BTreeMap<u64, EpSet> = BTreeMap::new();
    for n in 0..sample {
        let k = p.class_of(n);
        if let std::collections::btree_map::Entry::Vacant(e) = classes.entry(k) {
            e.insert(p.class_set(k)?);
        }
    }
    for n in 0..sample {
        let k = p.class_of(n);
        for (&c, set) in &classes {
            if set.contains(n) != (c == k) {
                return Err(Error::NotAPartition(format!(
                    "index {n} lies in class {k} but membership in class {c} disagrees"
                )));
            }
        }
    }
    Ok(())
}

/// Checks a coloring presentation on pairs below `sample`.
pub fn verify_coloring(c: &dyn Coloring, sample: u64) -> Result<()> {
    for i in 0..sample {
        let zero = c.zero_set(i)?;
        for j in 0..sample {
            let expected = j > i && c.color(i, j) == 0;
            if zero.contains(j) != expected {
                return Err(Error::UnsupportedColoring(format!(
                    "zero set of {i} disagrees with the color of {{{i},{j}}}"
                )));
            }
            if j > i && c.color(i, j) > 1 {
                return Err(Error::UnsupportedColoring("colors must be 0 or 1".into()));
            }
        }
    }
    Ok(())
}

/// Checks injectivity on `0..sample` and the presented increasing sets on a
/// smaller window.
pub fn verify_injection(inj: &dyn Injection, sample: u64) -> Result<()> {
    let mut seen = HashSet::new();
    for n in 0..sample {
        let v = inj.map(n);
        if !seen.insert(v) {
            return Err(Error::NotInjective(format!("value {v} is hit twice below {sample}")));
        }
    }
    let window = sample.min(128);
    for i in 0..window.min(32) {
        let set = inj.increasing_from(i)?;
        for j in 0..window {
            if set.contains(j) != (j > i && inj.map(j) > inj.map(i)) {
                return Err(Error::NotInjective(format!(
                    "increasing set of {i} disagrees with the map at {j}"
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::SeqExpr;

    #[test]
    fn block_partition_is_valid() {
        verify_partition(&BlockPartition { size: 2 }, 100).unwrap();
        let broken = FnPartition::new(|n| n / 2, |k| Ok(EpSet::finite(&[2 * k])));
        assert!(matches!(verify_partition(&broken, 10), Err(Error::NotAPartition(_))));
    }

    #[test]
    fn level_partition_names_classes_by_least_member() {
        let x = SeqExpr::piecewise(2, vec![SeqExpr::Const(Rational::zero()), SeqExpr::var()]).unwrap();
        let p = LevelPartition::new(Arc::new(Compiled::new(&x).unwrap()));
        assert_eq!(p.class_of(6), 0);
        assert_eq!(p.class_of(7), 7);
        assert_eq!(p.class_of(1), 1);
        verify_partition(&p, 40).unwrap();
    }

    #[test]
    fn colorings_present_consistently() {
        verify_coloring(&SumColoring { modulus: 2, zero_sums: vec![0] }, 30).unwrap();
        verify_coloring(&DistanceColoring { distances: vec![1] }, 30).unwrap();
        let table = ResidueTableColoring::new(3, vec![
            vec![true, false, true],
            vec![false, false, true],
            vec![true, true, false],
        ])
        .unwrap();
        verify_coloring(&table, 30).unwrap();
        assert!(ResidueTableColoring::new(2, vec![vec![true, false], vec![true, true]]).is_err());
    }

    #[test]
    fn injections() {
        let swap = FnInjection::new(|n| n ^ 1, |v| v + 2);
        verify_injection(&swap, 1000).unwrap();
        let collapse = FnInjection::new(|n| n / 2, |v| 2 * v + 2);
        assert!(matches!(verify_injection(&collapse, 100), Err(Error::NotInjective(_))));
    }
}
