//! Constructions that commit new Big sets: selections, diagonal (normal)
//! sets, homogeneous sets for pair colorings and monotone reindexings.

use std::sync::{Arc, Mutex};

use super::present::{verify_coloring, verify_injection, verify_partition, OrderColoring};
use super::{Coloring, Family, Hook, Injection, OracleSession, Partition};
use crate::epset::EpSet;
use crate::error::{Error, Result};
use crate::index::{CommittedRef, ConstructionKind, IndexSet};

/// Candidates polled when choosing the color of a homogeneous set.
pub const MAJORITY_WINDOW: usize = 15;

/// Indices checked eagerly against a presentation before committing.
const PRESENTATION_SAMPLE: u64 = 128;
const FAMILY_SAMPLE: u64 = 64;

impl OracleSession {
    fn sample(&self) -> u64 {
        self.horizon.min(PRESENTATION_SAMPLE)
    }

    /// A Big set meeting every class of `partition` at most once. Classes
    /// must be Small; the next element always comes from a class not yet hit.
    pub fn big_selection(&mut self, partition: Arc<dyn Partition>) -> Result<CommittedRef> {
        self.selection(partition, ConstructionKind::Selection)
    }

    /// A Big set on which `f` (given with its fibers) is injective.
    pub fn injective_restriction(&mut self, f: Arc<dyn Partition>) -> Result<CommittedRef> {
        self.selection(f, ConstructionKind::Selection)
    }

    fn selection(&mut self, partition: Arc<dyn Partition>, kind: ConstructionKind) -> Result<CommittedRef> {
        let sample = self.sample();
        verify_partition(&*partition, sample)?;
        let mut seen = std::collections::BTreeSet::new();
        for n in 0..sample {
            let k = partition.class_of(n);
            if seen.insert(k) && self.peek(&partition.class_set(k)?)?.is_big() {
                return Err(Error::ClassDecidedBig(k));
            }
        }
        self.commit(kind, Vec::new(), Hook::Selection(partition))
    }

    /// For each listed class: the element the selection `r` picked there, or
    /// the least element of the class if the selection missed it. Adding the
    /// back-filled points to `r` keeps it Big and a selection.
    pub fn transversal(&mut self, r: CommittedRef, classes: &[u64]) -> Result<Vec<(u64, Option<u64>)>> {
        if !self.owns(r) {
            return Err(Error::ForeignHandle);
        }
        let Hook::Selection(p) = self.committed[r.id].hook.clone() else {
            return Err(Error::UnsupportedExpression("transversal of a set that is not a selection".into()));
        };
        let prefix = &self.committed[r.id].prefix;
        classes
            .iter()
            .map(|&k| {
                let hit = prefix.iter().copied().find(|&b| p.class_of(b) == k);
                let pick = match hit {
                    Some(b) => Some(b),
                    None => p.class_set(k)?.iter().next(),
                };
                Ok((k, pick))
            })
            .collect()
    }

    fn precheck_family(&mut self, family: &dyn Family, domain: Option<&EpSet>) -> Result<()> {
        for i in 0..FAMILY_SAMPLE {
            if domain.is_some_and(|d| !d.contains(i)) {
                continue;
            }
            if !self.peek(&family.member(i)?)?.is_big() {
                return Err(Error::FamilyMemberSmall(i));
            }
        }
        Ok(())
    }

    /// A Big `A ⊆ domain` with `j ∈ A_i` for all `i < j` in `A`: each new
    /// element must lie in the members indexed by the earlier ones.
    pub fn diagonal_big(&mut self, family: Arc<dyn Family>, domain: &IndexSet) -> Result<CommittedRef> {
        if !self.decide(domain)?.is_big() {
            return Err(Error::DomainSmall);
        }
        self.precheck_family(&*family, domain.as_structured())?;
        self.commit(ConstructionKind::Diagonal, Vec::new(), Hook::Diagonal(family))
    }

    /// Same contract as [`diagonal_big`](Self::diagonal_big), reached through
    /// an injective selection and a block decomposition.
    ///
    /// With `A'_k = A_k ∩ (k, ∞)` (or `(k, ∞)` off the domain) and
    /// `f(i) = min{j : i ∉ A'_j}`, a Big `B` with `f` injective is split into
    /// consecutive blocks `P_k` whose `f`-values jump past everything chosen
    /// before. Taking one point from each even block gives the first `len`
    /// elements; later elements continue as in `diagonal_big`.
    pub fn normalize_via_blocks(
        &mut self,
        family: Arc<dyn Family>,
        domain: &IndexSet,
        len: usize,
    ) -> Result<CommittedRef> {
        let IndexSet::Structured(dom) = domain else {
            return Err(Error::UnsupportedExpression(
                "block normalization needs a structured domain".into(),
            ));
        };
        if !self.decide(domain)?.is_big() {
            return Err(Error::DomainSmall);
        }
        self.precheck_family(&*family, Some(dom))?;
        let shifted = Arc::new(Shifted::new(family.clone(), dom.clone()));
        let b = IndexSet::Committed(self.injective_restriction(shifted.clone())?);

        let mut settled = 0u64;
        let mut known: Vec<(u64, u64)> = Vec::new();
        let mut top: Option<u64> = None;
        let mut last_boundary: Option<u64> = None;
        let mut blocks: Vec<Vec<u64>> = Vec::new();
        while blocks.len() < 2 * len {
            let above = |fx: u64| top.is_none_or(|t| fx > t);
            let boundary = loop {
                if let Some(c) = known.iter().map(|p| p.1).filter(|&fx| above(fx)).min() {
                    // pin down every fiber up to c, then nothing new can land below it
                    self.settle_fibers(&shifted, &mut settled, c)?;
                    self.sync_known(&b, &shifted, &mut known)?;
                    break known.iter().map(|p| p.1).filter(|&fx| above(fx)).min().unwrap_or(c);
                }
                let next = self.enumerate(&b, known.len() + 1)?;
                self.sync_known_from(&next, &shifted, &mut known);
            };
            let block: Vec<u64> = known
                .iter()
                .filter(|(_, fx)| last_boundary.is_none_or(|m| *fx > m) && *fx <= boundary)
                .map(|p| p.0)
                .collect();
            let Some(&block_top) = block.iter().max() else {
                return Err(Error::Internal("empty block in normalization".into()));
            };
            top = Some(top.map_or(block_top, |t| t.max(block_top)));
            last_boundary = Some(boundary);
            blocks.push(block);
        }
        // the even-indexed blocks are the ones kept
        let prefix: Vec<u64> = blocks.iter().step_by(2).map(|blk| blk[0]).take(len).collect();
        for &i in &prefix {
            if !self.decide_structured(&family.member(i)?)?.is_big() {
                return Err(Error::FamilyMemberSmall(i));
            }
        }
        self.commit(ConstructionKind::Diagonal, prefix, Hook::Diagonal(family))
    }

    fn settle_fibers(&mut self, shifted: &Shifted, settled: &mut u64, upto: u64) -> Result<()> {
        while *settled <= upto {
            let j = *settled;
            if !self.decide_structured(&shifted.prime(j)?)?.is_big() {
                return Err(Error::FamilyMemberSmall(j));
            }
            if self.decide_structured(&shifted.class_set(j)?)?.is_big() {
                return Err(Error::ClassDecidedBig(j));
            }
            *settled += 1;
        }
        Ok(())
    }

    fn sync_known(&mut self, b: &IndexSet, shifted: &Shifted, known: &mut Vec<(u64, u64)>) -> Result<()> {
        let IndexSet::Committed(r) = b else { unreachable!() };
        let prefix = self.prefix(*r)?.to_vec();
        self.sync_known_from(&prefix, shifted, known);
        Ok(())
    }

    fn sync_known_from(&self, prefix: &[u64], shifted: &Shifted, known: &mut Vec<(u64, u64)>) {
        for &x in &prefix[known.len()..] {
            known.push((x, shifted.class_of(x)));
        }
    }

    /// A Big set homogeneous for `coloring`, with its color. For each
    /// candidate `i` exactly one of `{j > i : color c}` (c = 0, 1) is Big; the
    /// color Big for most of the next candidates wins, and from then on only
    /// indices whose winning-color set is Big are taken, each followed by a
    /// decision that forces later elements into it.
    pub fn ramsey_homogeneous(&mut self, coloring: Arc<dyn Coloring>) -> Result<(u8, CommittedRef)> {
        self.homogeneous(coloring, ConstructionKind::Homog)
    }

    fn homogeneous(&mut self, coloring: Arc<dyn Coloring>, kind: ConstructionKind) -> Result<(u8, CommittedRef)> {
        verify_coloring(&*coloring, self.sample().min(48))?;
        let votes = self.chain_votes(&*coloring, MAJORITY_WINDOW)?;
        let zero_votes = votes.iter().filter(|&&c| c == 0).count();
        let color = u8::from(2 * zero_votes < votes.len());
        let r = self.commit(kind, Vec::new(), Hook::Homog { coloring, color })?;
        Ok((color, r))
    }

    /// Big colors along a chain `c_0 < c_1 < …` of candidates where each
    /// `c_k` lies in the Big color set of every earlier one and in the
    /// residue class of the point modulo everything involved. Nothing is
    /// recorded.
    fn chain_votes(&mut self, coloring: &dyn Coloring, want: usize) -> Result<Vec<u8>> {
        let mut within = EpSet::omega();
        let mut n = self.first_candidate()?;
        let mut votes = Vec::with_capacity(want);
        while votes.len() < want {
            let mut scanned = 0u64;
            let m = num_integer::lcm(self.lcm, within.modulus());
            if m > crate::epset::MAX_MODULUS {
                return Err(Error::OracleUndecided(format!("chain modulus {m} exceeds the supported range")));
            }
            let r = self.point.residue(m)?;
            loop {
                if scanned >= self.horizon {
                    return Err(Error::OracleUndecided(format!(
                        "no chain candidate within {} steps",
                        self.horizon
                    )));
                }
                scanned += 1;
                n = n
                    .checked_add((r + m - n % m) % m)
                    .ok_or_else(|| Error::OracleUndecided("chain left the index range".into()))?;
                if within.contains(n) && self.admissible(n)? {
                    break;
                }
                n += m;
            }
            let c = u8::from(!self.peek(&coloring.zero_set(n)?)?.is_big());
            votes.push(c);
            within = within.intersect(&coloring.color_set(n, c)?)?;
            n += 1;
        }
        Ok(votes)
    }

    /// A Big set on which the injection `pi` is strictly increasing.
    pub fn monotone_reindex(&mut self, pi: Arc<dyn Injection>) -> Result<CommittedRef> {
        verify_injection(&*pi, self.horizon.min(4096))?;
        let (color, r) = self.homogeneous(Arc::new(OrderColoring(pi)), ConstructionKind::Reindex)?;
        if color != 0 {
            return Err(Error::Internal("an injection cannot be decreasing on a Big set".into()));
        }
        Ok(r)
    }
}

/// The shifted family `A'_k` and the map `f(i) = min{j : i ∉ A'_j}`,
/// presented as the partition of ω into fibers of `f`.
struct Shifted {
    family: Arc<dyn Family>,
    domain: EpSet,
    primes: Mutex<Vec<EpSet>>,
    // cums[j] = A'_0 ∩ … ∩ A'_{j-1}
    cums: Mutex<Vec<EpSet>>,
}

impl Shifted {
    fn new(family: Arc<dyn Family>, domain: EpSet) -> Self {
        Shifted { family, domain, primes: Mutex::new(Vec::new()), cums: Mutex::new(vec![EpSet::omega()]) }
    }

    fn prime(&self, k: u64) -> Result<EpSet> {
        let mut primes = self.primes.lock().unwrap();
        while primes.len() as u64 <= k {
            let j = primes.len() as u64;
            let tail = EpSet::tail(j + 1);
            let p = if self.domain.contains(j) { self.family.member(j)?.intersect(&tail)? } else { tail };
            primes.push(p);
        }
        Ok(primes[k as usize].clone())
    }

    fn cum(&self, j: u64) -> Result<EpSet> {
        loop {
            let len = self.cums.lock().unwrap().len() as u64;
            if len > j {
                return Ok(self.cums.lock().unwrap()[j as usize].clone());
            }
            let p = self.prime(len - 1)?;
            let mut cums = self.cums.lock().unwrap();
            let next = cums[len as usize - 1].intersect(&p)?;
            cums.push(next);
        }
    }
}

impl Partition for Shifted {
    fn class_of(&self, n: u64) -> u64 {
        // n ∉ A'_n always, so the search stops by n
        if self.prime(n).is_err() {
            return n;
        }
        let primes = self.primes.lock().unwrap();
        (0..=n).find(|&j| !primes[j as usize].contains(n)).unwrap_or(n)
    }

    fn class_set(&self, class: u64) -> Result<EpSet> {
        self.cum(class)?.minus(&self.prime(class)?)
    }
}
