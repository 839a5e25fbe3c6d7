//! Index sets: structured (eventually periodic) sets, handles to sets
//! committed by an oracle session, and boolean combinations of both.

use std::fmt;
use std::str::FromStr;

use crate::epset::{EpSet, SetOp, SizeClass};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SessionId(pub(crate) u64);

/// Handle to a set constructed inside an oracle session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CommittedRef {
    pub session: SessionId,
    pub id: usize,
}

/// How a committed set was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstructionKind {
    Selection,
    Diagonal,
    Homog,
    Reindex,
    Restrict,
}

impl ConstructionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstructionKind::Selection => "selection",
            ConstructionKind::Diagonal => "diagonal",
            ConstructionKind::Homog => "homog",
            ConstructionKind::Reindex => "reindex",
            ConstructionKind::Restrict => "restrict",
        }
    }
}

impl FromStr for ConstructionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "selection" => ConstructionKind::Selection,
            "diagonal" => ConstructionKind::Diagonal,
            "homog" => ConstructionKind::Homog,
            "reindex" => ConstructionKind::Reindex,
            "restrict" => ConstructionKind::Restrict,
            _ => return Err(Error::MalformedSet(format!("unknown construction `{s}`"))),
        })
    }
}

/// Journal view of a committed set at one moment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommittedSnapshot {
    pub id: usize,
    pub kind: ConstructionKind,
    pub prefix: Vec<u64>,
}

impl fmt::Display for CommittedSnapshot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.prefix.iter().map(u64::to_string).collect();
        write!(f, "CS id={} kind={} prefix=[{}]", self.id, self.kind.as_str(), items.join(","))
    }
}

impl FromStr for CommittedSnapshot {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::MalformedSet(format!("{m} in `{s}`"));
        let rest = s.strip_prefix("CS id=").ok_or_else(|| bad("expected `CS id=`"))?;
        let (id, rest) = rest.split_once(" kind=").ok_or_else(|| bad("expected kind"))?;
        let (kind, rest) = rest.split_once(" prefix=[").ok_or_else(|| bad("expected prefix"))?;
        let body = rest.strip_suffix(']').ok_or_else(|| bad("unterminated prefix"))?;
        let number = |t: &str| -> Result<u64> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) || (t.len() > 1 && t.starts_with('0')) {
                return Err(bad("bad number"));
            }
            t.parse().map_err(|_| bad("bad number"))
        };
        let prefix = if body.is_empty() {
            Vec::new()
        } else {
            body.split(',').map(number).collect::<Result<Vec<_>>>()?
        };
        if prefix.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("prefix not strictly increasing"));
        }
        Ok(CommittedSnapshot { id: number(id)? as usize, kind: kind.parse()?, prefix })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum IndexSet {
    Structured(EpSet),
    Committed(CommittedRef),
    Not(Box<IndexSet>),
    And(Box<IndexSet>, Box<IndexSet>),
    Or(Box<IndexSet>, Box<IndexSet>),
}

impl From<EpSet> for IndexSet {
    fn from(s: EpSet) -> Self {
        IndexSet::Structured(s)
    }
}

impl From<CommittedRef> for IndexSet {
    fn from(r: CommittedRef) -> Self {
        IndexSet::Committed(r)
    }
}

impl IndexSet {
    pub fn as_structured(&self) -> Option<&EpSet> {
        match self {
            IndexSet::Structured(s) => Some(s),
            _ => None,
        }
    }

    pub fn complement(&self) -> IndexSet {
        match self {
            IndexSet::Structured(s) => IndexSet::Structured(s.complement()),
            IndexSet::Not(inner) => (**inner).clone(),
            other => IndexSet::Not(Box::new(other.clone())),
        }
    }

    /// Boolean combination; two structured operands normalize to one set.
    pub fn combine(&self, other: &IndexSet, op: SetOp) -> Result<IndexSet> {
        if let (IndexSet::Structured(a), IndexSet::Structured(b)) = (self, other) {
            return Ok(IndexSet::Structured(a.combine(b, op)?));
        }
        let (a, b) = (Box::new(self.clone()), Box::new(other.clone()));
        Ok(match op {
            SetOp::And => IndexSet::And(a, b),
            SetOp::Or => IndexSet::Or(a, b),
            SetOp::Minus => IndexSet::And(a, Box::new(other.complement())),
        })
    }

    pub fn classify_size(&self) -> SizeClass {
        match self {
            IndexSet::Structured(s) => s.classify_size(),
            _ => SizeClass::Constructed,
        }
    }

    /// Every committed handle mentioned by this set.
    pub fn handles(&self) -> Vec<CommittedRef> {
        let mut out = Vec::new();
        self.collect_handles(&mut out);
        out
    }

    fn collect_handles(&self, out: &mut Vec<CommittedRef>) {
        match self {
            IndexSet::Structured(_) => {}
            IndexSet::Committed(r) => out.push(*r),
            IndexSet::Not(a) => a.collect_handles(out),
            IndexSet::And(a, b) | IndexSet::Or(a, b) => {
                a.collect_handles(out);
                b.collect_handles(out);
            }
        }
    }

    /// Journal text, with committed handles rendered by `show`.
    pub fn render(&self, show: &dyn Fn(CommittedRef) -> String) -> String {
        match self {
            IndexSet::Structured(s) => s.to_string(),
            IndexSet::Committed(r) => show(*r),
            IndexSet::Not(a) => format!("!({})", a.render(show)),
            IndexSet::And(a, b) => format!("({}) & ({})", a.render(show), b.render(show)),
            IndexSet::Or(a, b) => format!("({}) | ({})", a.render(show), b.render(show)),
        }
    }
}

/// `ep_algebra`: combination with an optional unary complement.
pub fn ep_algebra(a: &IndexSet, b: Option<&IndexSet>, op: Option<SetOp>) -> Result<IndexSet> {
    match (b, op) {
        (Some(b), Some(op)) => a.combine(b, op),
        (None, None) => Ok(a.complement()),
        _ => Err(Error::MalformedSet("binary operator needs two operands".into())),
    }
}
