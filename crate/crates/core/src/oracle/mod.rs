//! The ultrafilter oracle.
//!
//! A session fixes a non-principal ultrafilter lazily. Structured sets are
//! decided through the residue point, which makes those decisions a boolean
//! homomorphism on their own. Constructed sets are carved out of the *generic
//! diagonal* `G`: a strictly increasing stream in which every new element
//! obeys all decisions taken so far and the constraint of every committed
//! set. Each committed set contains every `G` element appended after its
//! commitment, so the filter generated by the decisions stays proper.

mod construct;
pub mod journal;
pub mod point;
pub mod present;

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_integer::Integer;

use crate::epset::{EpSet, SizeClass, MAX_MODULUS};
use crate::error::{Error, Result};
use crate::index::{CommittedRef, CommittedSnapshot, ConstructionKind, IndexSet, SessionId};

pub use construct::MAJORITY_WINDOW;
pub use journal::{Bigness, Decision, Journal, Provenance, Record};
pub use point::ResiduePoint;
pub use present::{Coloring, Family, Injection, Partition};

pub const DEFAULT_HORIZON: u64 = 1_000_000;

static NEXT_SESSION: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> SessionId {
    SessionId(NEXT_SESSION.fetch_add(1, Ordering::Relaxed))
}

/// What a committed set demands of each new diagonal element.
#[derive(Clone)]
enum Hook {
    Selection(Arc<dyn Partition>),
    Diagonal(Arc<dyn Family>),
    Homog { coloring: Arc<dyn Coloring>, color: u8 },
}

#[derive(Clone)]
struct Committed {
    kind: ConstructionKind,
    prefix: Vec<u64>,
    hook: Hook,
    born: usize,
}

#[derive(Clone)]
pub struct OracleSession {
    id: SessionId,
    // ancestors (and self) with the number of committed sets they owned at
    // the fork; handles beyond that count belong to the ancestor alone
    lineage: Vec<(SessionId, usize)>,
    point: ResiduePoint,
    horizon: u64,
    base: Option<EpSet>,
    decided: HashMap<EpSet, Decision>,
    decided_order: Vec<EpSet>,
    // distinct periodic patterns of Big sets
    big_periodic: Vec<EpSet>,
    pending: Vec<(EpSet, bool)>,
    lcm: u64,
    committed: Vec<Committed>,
    combos: HashMap<IndexSet, Decision>,
    diagonal: Vec<u64>,
    journal: Journal,
}

impl std::fmt::Debug for OracleSession {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OracleSession")
            .field("id", &self.id)
            .field("seed", &self.point.seed())
            .field("decided", &self.decided.len())
            .field("committed", &self.committed.len())
            .field("diagonal", &self.diagonal.len())
            .finish()
    }
}

impl Default for OracleSession {
    fn default() -> Self {
        OracleSession::new(0)
    }
}

impl OracleSession {
    pub fn new(seed: u64) -> Self {
        OracleSession::with_journal(seed, Journal::new(seed))
    }

    fn with_journal(seed: u64, journal: Journal) -> Self {
        let id = fresh_id();
        OracleSession {
            id,
            lineage: vec![(id, usize::MAX)],
            point: ResiduePoint::new(seed),
            horizon: DEFAULT_HORIZON,
            base: None,
            decided: HashMap::new(),
            decided_order: Vec::new(),
            big_periodic: Vec::new(),
            pending: Vec::new(),
            lcm: 1,
            committed: Vec::new(),
            combos: HashMap::new(),
            diagonal: Vec::new(),
            journal,
        }
    }

    /// Loads a journal for replay. Every structured decision in it is checked
    /// against the seed; the session then insists that re-running the same
    /// queries reproduces the journal line by line. Empty text gives a fresh
    /// session with `seed` (or 0).
    pub fn replay(text: &str, seed: Option<u64>) -> Result<Self> {
        let (journal_seed, lines) = journal::split_journal(text)?;
        let Some(js) = journal_seed else {
            return Ok(OracleSession::new(seed.unwrap_or(0)));
        };
        if let Some(s) = seed.filter(|&s| s != js) {
            return Err(Error::SeedMismatch { journal: js.to_string(), session: s.to_string() });
        }
        let mut point = ResiduePoint::new(js);
        let mut extents: Vec<Option<u64>> = Vec::new();
        for (i, line) in lines.iter().enumerate() {
            let at = i + 2;
            let corrupt = |message: String| Error::CorruptJournal { line: at, message };
            match Record::parse(line).map_err(|e| corrupt(e.to_string()))? {
                Record::Query { set, decision } => {
                    if set.starts_with("EP ") {
                        let s: EpSet = set.parse().map_err(|e: Error| corrupt(e.to_string()))?;
                        check_structured(&mut point, &s, decision).map_err(corrupt)?;
                    } else if set.starts_with("CS ") {
                        let snap: CommittedSnapshot =
                            set.parse().map_err(|e: Error| corrupt(e.to_string()))?;
                        if decision != Decision::new(Bigness::Big, Provenance::Constructed) {
                            return Err(corrupt("committed sets are always Big by construction".into()));
                        }
                        if snap.id == extents.len() {
                            extents.push(snap.prefix.last().copied());
                        } else if snap.id > extents.len() {
                            return Err(corrupt(format!("set {} committed out of order", snap.id)));
                        }
                    } else if decision.provenance != Provenance::Constructed {
                        return Err(corrupt("combinations are decided by construction".into()));
                    }
                }
                Record::Extend { id, element } => {
                    let slot = extents
                        .get_mut(id)
                        .ok_or_else(|| corrupt(format!("extension of unknown set {id}")))?;
                    if slot.is_some_and(|last| element <= last) {
                        return Err(corrupt(format!("set {id} extended out of order")));
                    }
                    *slot = Some(element);
                }
            }
        }
        Ok(OracleSession::with_journal(js, Journal::expecting(js, lines)))
    }

    pub fn id(&self) -> SessionId {
        self.id
    }

    pub fn seed(&self) -> u64 {
        self.point.seed()
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn set_horizon(&mut self, horizon: u64) {
        self.horizon = horizon.max(1);
    }

    /// `r_m` of this session's residue point.
    pub fn residue(&mut self, m: u64) -> Result<u64> {
        self.point.residue(m)
    }

    pub fn journal(&self) -> &Journal {
        &self.journal
    }

    pub fn journal_text(&self) -> String {
        self.journal.text()
    }

    /// Fails if a replayed journal still has lines nobody reproduced.
    pub fn finish_replay(&self) -> Result<()> {
        match self.journal.unreplayed() {
            0 => Ok(()),
            k => Err(Error::CorruptJournal {
                line: self.journal.lines().len() + 2,
                message: format!("{k} journal lines were not reproduced"),
            }),
        }
    }

    /// The generic diagonal built so far.
    pub fn diagonal(&self) -> &[u64] {
        &self.diagonal
    }

    pub fn committed_count(&self) -> usize {
        self.committed.len()
    }

    /// Every structured decision recorded so far, in order.
    pub fn decisions(&self) -> Vec<(EpSet, Decision)> {
        self.decided_order.iter().map(|s| (s.clone(), self.decided[s])).collect()
    }

    /// Whether values created in session `id` may be used here.
    pub fn accepts(&self, id: SessionId) -> bool {
        self.lineage.iter().any(|&(sid, _)| sid == id)
    }

    fn owns(&self, r: CommittedRef) -> bool {
        self.lineage.iter().any(|&(sid, count)| sid == r.session && r.id < count)
            && r.id < self.committed.len()
    }

    fn check_handles(&self, s: &IndexSet) -> Result<()> {
        if s.handles().into_iter().all(|r| self.owns(r)) {
            Ok(())
        } else {
            Err(Error::ForeignHandle)
        }
    }

    pub fn snapshot(&self, r: CommittedRef) -> Result<CommittedSnapshot> {
        if !self.owns(r) {
            return Err(Error::ForeignHandle);
        }
        let c = &self.committed[r.id];
        Ok(CommittedSnapshot { id: r.id, kind: c.kind, prefix: c.prefix.clone() })
    }

    /// Elements of a committed set fixed so far, without extending it.
    pub fn prefix(&self, r: CommittedRef) -> Result<&[u64]> {
        if !self.owns(r) {
            return Err(Error::ForeignHandle);
        }
        Ok(&self.committed[r.id].prefix)
    }

    /// Number of diagonal elements that existed when `r` was committed.
    pub fn committed_at(&self, r: CommittedRef) -> Result<usize> {
        if !self.owns(r) {
            return Err(Error::ForeignHandle);
        }
        Ok(self.committed[r.id].born)
    }

    pub fn render(&self, s: &IndexSet) -> String {
        s.render(&|r| match self.committed.get(r.id) {
            Some(c) => CommittedSnapshot { id: r.id, kind: c.kind, prefix: c.prefix.clone() }.to_string(),
            None => format!("CS id={} kind=? prefix=[]", r.id),
        })
    }

    fn effective(&self, s: &EpSet) -> Result<EpSet> {
        match &self.base {
            Some(b) => s.intersect(b),
            None => Ok(s.clone()),
        }
    }

    /// The residue-policy value, without superset bookkeeping.
    fn policy(&mut self, s: &EpSet) -> Result<Decision> {
        Ok(match s.classify_size() {
            SizeClass::Finite(_) => Decision::new(Bigness::Small, Provenance::ForcedFinite),
            SizeClass::Cofinite => Decision::new(Bigness::Big, Provenance::ForcedCofinite),
            _ => {
                let r = self.point.residue(s.modulus())?;
                Decision::new(Bigness::from_bool(s.pattern_contains(r)), Provenance::ResiduePolicy)
            }
        })
    }

    /// The decision `s` would get, without recording it.
    pub fn peek(&mut self, s: &EpSet) -> Result<Decision> {
        let s = self.effective(s)?;
        if let Some(d) = self.decided.get(&s) {
            return Ok(*d);
        }
        self.policy(&s)
    }

    fn decide_structured(&mut self, s: &EpSet) -> Result<Decision> {
        let s = self.effective(s)?;
        if let Some(d) = self.decided.get(&s) {
            return Ok(*d);
        }
        let mut d = self.policy(&s)?;
        if d.provenance == Provenance::ResiduePolicy && d.is_big() && self.big_periodic.iter().any(|a| almost_within(a, &s)) {
            d.provenance = Provenance::ForcedSuperset;
        }
        let m = s.modulus();
        let lcm = self.lcm.lcm(&m);
        if lcm > MAX_MODULUS {
            return Err(Error::OracleUndecided(format!(
                "joint modulus {} {m} would exceed {MAX_MODULUS}",
                self.lcm
            )));
        }
        self.journal.push(Record::Query { set: s.to_string(), decision: d }.to_string())?;
        self.lcm = lcm;
        let frontier = self.diagonal.last().map_or(0, |g| g + 1);
        if s.threshold() > frontier {
            self.pending.push((s.clone(), d.is_big()));
        }
        if d.is_big() && matches!(s.classify_size(), SizeClass::ProperPeriodic(_)) {
            let pattern = EpSet::residue(m, &s.residues().collect::<Vec<_>>())?;
            if !self.big_periodic.contains(&pattern) {
                self.big_periodic.push(pattern);
            }
        }
        self.decided.insert(s.clone(), d);
        self.decided_order.push(s);
        Ok(d)
    }

    /// Decides bigness; the answer is journaled once and never changes.
    pub fn decide(&mut self, s: &IndexSet) -> Result<Decision> {
        self.check_handles(s)?;
        if let IndexSet::Structured(e) = s {
            return self.decide_structured(e);
        }
        if let Some(d) = self.combos.get(s) {
            return Ok(*d);
        }
        let big = self.evaluate(s)?;
        let d = Decision::new(Bigness::from_bool(big), Provenance::Constructed);
        self.journal.push(Record::Query { set: self.render(s), decision: d }.to_string())?;
        self.combos.insert(s.clone(), d);
        Ok(d)
    }

    // committed sets are Big, and the decision map is a homomorphism
    fn evaluate(&mut self, s: &IndexSet) -> Result<bool> {
        Ok(match s {
            IndexSet::Structured(e) => self.decide_structured(e)?.is_big(),
            IndexSet::Committed(_) => true,
            IndexSet::Not(a) => !self.evaluate(a)?,
            IndexSet::And(a, b) => self.evaluate(a)? & self.evaluate(b)?,
            IndexSet::Or(a, b) => self.evaluate(a)? | self.evaluate(b)?,
        })
    }

    /// Membership test; committed sets are extended far enough to answer.
    pub fn contains(&mut self, s: &IndexSet, n: u64) -> Result<bool> {
        self.check_handles(s)?;
        self.contains_unchecked(s, n)
    }

    fn contains_unchecked(&mut self, s: &IndexSet, n: u64) -> Result<bool> {
        Ok(match s {
            IndexSet::Structured(e) => e.contains(n),
            IndexSet::Committed(r) => {
                let mut steps = 0u64;
                while self.diagonal.last().is_none_or(|&g| g < n) {
                    if steps >= self.horizon {
                        return Err(Error::OracleUndecided(format!(
                            "membership of {n} needs more than {} diagonal steps",
                            self.horizon
                        )));
                    }
                    self.extend_diagonal()?;
                    steps += 1;
                }
                self.committed[r.id].prefix.binary_search(&n).is_ok()
            }
            IndexSet::Not(a) => !self.contains_unchecked(a, n)?,
            IndexSet::And(a, b) => self.contains_unchecked(a, n)? && self.contains_unchecked(b, n)?,
            IndexSet::Or(a, b) => self.contains_unchecked(a, n)? || self.contains_unchecked(b, n)?,
        })
    }

    /// The first `k` elements of `s`.
    pub fn enumerate(&mut self, s: &IndexSet, k: usize) -> Result<Vec<u64>> {
        self.check_handles(s)?;
        match s {
            IndexSet::Structured(e) => e.enumerate(k),
            IndexSet::Committed(r) => {
                while self.committed[r.id].prefix.len() < k {
                    self.extend_diagonal()?;
                }
                Ok(self.committed[r.id].prefix[..k].to_vec())
            }
            _ => {
                let mut out = Vec::with_capacity(k);
                let mut n = 0u64;
                while out.len() < k {
                    if n >= self.horizon {
                        return Err(Error::OracleUndecided(format!(
                            "found only {} elements below {}",
                            out.len(),
                            self.horizon
                        )));
                    }
                    if self.contains_unchecked(s, n)? {
                        out.push(n);
                    }
                    n += 1;
                }
                Ok(out)
            }
        }
    }

    fn commit(&mut self, kind: ConstructionKind, prefix: Vec<u64>, hook: Hook) -> Result<CommittedRef> {
        let id = self.committed.len();
        let born = self.diagonal.len();
        self.committed.push(Committed { kind, prefix, hook, born });
        let r = CommittedRef { session: self.id, id };
        let d = Decision::new(Bigness::Big, Provenance::Constructed);
        let text = self.snapshot(r)?.to_string();
        self.journal.push(Record::Query { set: text, decision: d }.to_string())?;
        self.combos.insert(IndexSet::Committed(r), d);
        Ok(r)
    }

    fn first_candidate(&mut self) -> Result<u64> {
        let start = self.diagonal.last().map_or(0, |g| g + 1);
        let l = self.lcm;
        let r = self.point.residue(l)?;
        let offset = (r + l - start % l) % l;
        start
            .checked_add(offset)
            .ok_or_else(|| Error::OracleUndecided("diagonal left the index range".into()))
    }

    /// Candidates for the next diagonal element, smallest first, that satisfy
    /// every recorded decision and every committed constraint that rejects
    /// rather than fails. At most `limit` candidates are scanned.
    fn admissible_candidates(&mut self, want: usize, limit: u64) -> Result<Vec<u64>> {
        let mut n = self.first_candidate()?;
        let mut out = Vec::new();
        for _ in 0..limit {
            if self.admissible(n)? {
                out.push(n);
                if out.len() == want {
                    break;
                }
            }
            n = n
                .checked_add(self.lcm)
                .ok_or_else(|| Error::OracleUndecided("diagonal left the index range".into()))?;
        }
        Ok(out)
    }

    fn admissible(&mut self, n: u64) -> Result<bool> {
        if self.pending.iter().any(|(s, big)| s.threshold() > n && s.contains(n) != *big) {
            return Ok(false);
        }
        let hooks: Vec<Hook> = self.committed.iter().map(|c| c.hook.clone()).collect();
        for hook in &hooks {
            if let Hook::Homog { coloring, color } = hook {
                if !self.peek(&coloring.color_set(n, *color)?)?.is_big() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    // checks that would make the construction unsound rather than merely
    // skip a candidate
    fn fatal_checks(&mut self, n: u64) -> Result<()> {
        let hooks: Vec<Hook> = self.committed.iter().map(|c| c.hook.clone()).collect();
        for hook in &hooks {
            match hook {
                Hook::Selection(p) => {
                    let k = p.class_of(n);
                    if self.peek(&p.class_set(k)?)?.is_big() {
                        return Err(Error::ClassDecidedBig(k));
                    }
                }
                Hook::Diagonal(f) => {
                    if !self.peek(&f.member(n)?)?.is_big() {
                        return Err(Error::FamilyMemberSmall(n));
                    }
                }
                Hook::Homog { .. } => {}
            }
        }
        Ok(())
    }

    /// Appends the next element of `G`, extending every committed set.
    pub fn extend_diagonal(&mut self) -> Result<u64> {
        let start = self.diagonal.last().map_or(0, |g| g + 1);
        self.pending.retain(|(s, _)| s.threshold() > start);
        let found = self.admissible_candidates(1, self.horizon)?;
        let Some(&n) = found.first() else {
            return Err(Error::OracleUndecided(format!(
                "no admissible diagonal element within {} candidates from {start}",
                self.horizon
            )));
        };
        self.fatal_checks(n)?;
        self.diagonal.push(n);
        for id in 0..self.committed.len() {
            self.committed[id].prefix.push(n);
            self.journal.push(Record::Extend { id, element: n }.to_string())?;
        }
        let hooks: Vec<Hook> = self.committed.iter().map(|c| c.hook.clone()).collect();
        for hook in &hooks {
            match hook {
                Hook::Selection(p) => {
                    let k = p.class_of(n);
                    if self.decide_structured(&p.class_set(k)?)?.is_big() {
                        return Err(Error::ClassDecidedBig(k));
                    }
                }
                Hook::Diagonal(f) => {
                    if !self.decide_structured(&f.member(n)?)?.is_big() {
                        return Err(Error::FamilyMemberSmall(n));
                    }
                }
                Hook::Homog { coloring, color } => {
                    if !self.decide_structured(&coloring.color_set(n, *color)?)?.is_big() {
                        return Err(Error::Internal("accepted a homogeneous candidate with a small color set".into()));
                    }
                }
            }
        }
        Ok(n)
    }

    /// A derived session for the filter restricted to `b`.
    pub fn restrict(&mut self, b: &IndexSet) -> Result<OracleSession> {
        if !self.decide(b)?.is_big() {
            return Err(Error::RestrictToSmall);
        }
        let mut child = self.clone();
        for entry in &mut child.lineage {
            if entry.0 == self.id {
                entry.1 = self.committed.len();
            }
        }
        child.id = fresh_id();
        child.lineage.push((child.id, usize::MAX));
        if let IndexSet::Structured(e) = b {
            child.base = Some(child.effective(e)?);
        }
        Ok(child)
    }

    /// Violations of the filter laws among recorded decisions, plus diagonal
    /// elements missing from committed sets. Empty when all is well.
    pub fn audit(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let entries = self.decisions();
        for (s, d) in &entries {
            match s.classify_size() {
                SizeClass::Finite(_) if d.is_big() => problems.push(format!("finite set {s} decided Big")),
                SizeClass::Cofinite if !d.is_big() => problems.push(format!("cofinite set {s} decided Small")),
                _ => {}
            }
            if let Some(dc) = self.decided.get(&s.complement()) {
                if dc.is_big() == d.is_big() {
                    problems.push(format!("{s} and its complement share a decision"));
                }
            }
        }
        let bigs: Vec<&EpSet> = entries.iter().filter(|(_, d)| d.is_big()).map(|(s, _)| s).collect();
        // a Big set is infinite, so both laws only depend on the periodic tails
        for (i, a) in bigs.iter().enumerate() {
            for (s, d) in &entries {
                if !d.is_big() && tails_agree(a, s, |x, y| !x || y) && a.is_subset(s).unwrap_or(false) {
                    problems.push(format!("{s} contains Big {a} but is Small"));
                }
            }
            for b in &bigs[i + 1..] {
                if tails_agree(a, b, |x, y| !(x && y)) {
                    problems.push(format!("Big sets {a} and {b} meet finitely"));
                }
            }
        }
        for (id, c) in self.committed.iter().enumerate() {
            for g in &self.diagonal[c.born..] {
                if c.prefix.binary_search(g).is_err() {
                    problems.push(format!("diagonal element {g} missing from set {id}"));
                }
            }
        }
        problems
    }
}

// whether `rel` holds between the periodic patterns at every residue
fn tails_agree(a: &EpSet, b: &EpSet, rel: impl Fn(bool, bool) -> bool) -> bool {
    let m = a.modulus().lcm(&b.modulus());
    (0..m).all(|r| rel(a.pattern_contains(r), b.pattern_contains(r)))
}

/// Whether `a` is contained in `s` up to finitely many points, judged on the
/// periodic patterns alone.
fn almost_within(a: &EpSet, s: &EpSet) -> bool {
    let m = a.modulus().lcm(&s.modulus());
    (0..m).all(|r| !a.pattern_contains(r) || s.pattern_contains(r))
}

fn check_structured(point: &mut ResiduePoint, s: &EpSet, d: Decision) -> std::result::Result<(), String> {
    let (value, allowed): (bool, &[Provenance]) = match s.classify_size() {
        SizeClass::Finite(_) => (false, &[Provenance::ForcedFinite]),
        SizeClass::Cofinite => (true, &[Provenance::ForcedCofinite]),
        _ => {
            let r = point.residue(s.modulus()).map_err(|e| e.to_string())?;
            let big = s.pattern_contains(r);
            let provs: &[Provenance] = if big {
                &[Provenance::ResiduePolicy, Provenance::ForcedSuperset]
            } else {
                &[Provenance::ResiduePolicy]
            };
            (big, provs)
        }
    };
    if d.is_big() != value || !allowed.contains(&d.provenance) {
        return Err(format!("decision on {s} disagrees with the seed"));
    }
    Ok(())
}
