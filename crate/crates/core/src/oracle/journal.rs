//! The append-only decision log and its line format.
//!
//! ```text
//! #seed 0
//! Q EP N=0 m=2 R={0} add={} rm={} -> Big residue-policy
//! Q CS id=0 kind=selection prefix=[] -> Big constructed
//! X 0 += 4
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bigness {
    Big,
    Small,
}

impl Bigness {
    pub fn from_bool(big: bool) -> Self {
        if big {
            Bigness::Big
        } else {
            Bigness::Small
        }
    }

    pub fn is_big(self) -> bool {
        self == Bigness::Big
    }
}

impl fmt::Display for Bigness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bigness::Big => "Big",
            Bigness::Small => "Small",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    ForcedFinite,
    ForcedCofinite,
    ForcedSuperset,
    ResiduePolicy,
    Constructed,
    Horizon,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::ForcedFinite => "forced-finite",
            Provenance::ForcedCofinite => "forced-cofinite",
            Provenance::ForcedSuperset => "forced-superset",
            Provenance::ResiduePolicy => "residue-policy",
            Provenance::Constructed => "constructed",
            Provenance::Horizon => "horizon",
        }
    }
}

impl FromStr for Provenance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "forced-finite" => Provenance::ForcedFinite,
            "forced-cofinite" => Provenance::ForcedCofinite,
            "forced-superset" => Provenance::ForcedSuperset,
            "residue-policy" => Provenance::ResiduePolicy,
            "constructed" => Provenance::Constructed,
            "horizon" => Provenance::Horizon,
            _ => return Err(Error::MalformedSet(format!("unknown provenance `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Decision {
    pub value: Bigness,
    pub provenance: Provenance,
}

impl Decision {
    pub fn new(value: Bigness, provenance: Provenance) -> Self {
        Decision { value, provenance }
    }

    pub fn is_big(self) -> bool {
        self.value.is_big()
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.value, self.provenance.as_str())
    }
}

/// One parsed journal line after the header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Record {
    Query { set: String, decision: Decision },
    Extend { id: usize, element: u64 },
}

impl Record {
    pub fn parse(line: &str) -> Result<Record> {
        let bad = |m: &str| Error::MalformedSet(format!("{m}: `{line}`"));
        if let Some(body) = line.strip_prefix("Q ") {
            let (set, verdict) = body.rsplit_once(" -> ").ok_or_else(|| bad("missing `->`"))?;
            let (value, prov) = verdict.split_once(' ').ok_or_else(|| bad("missing provenance"))?;
            let value = match value {
                "Big" => Bigness::Big,
                "Small" => Bigness::Small,
                _ => return Err(bad("decision must be Big or Small")),
            };
            return Ok(Record::Query {
                set: set.to_string(),
                decision: Decision::new(value, prov.parse()?),
            });
        }
        if let Some(body) = line.strip_prefix("X ") {
            let (id, elem) = body.split_once(" += ").ok_or_else(|| bad("missing `+=`"))?;
            let id = canonical_number(id).ok_or_else(|| bad("bad set id"))?;
            let element = canonical_number(elem).ok_or_else(|| bad("bad element"))?;
            return Ok(Record::Extend { id: id as usize, element });
        }
        Err(bad("unknown record"))
    }
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Record::Query { set, decision } => {
                write!(f, "Q {set} -> {} {}", decision.value, decision.provenance.as_str())
            }
            Record::Extend { id, element } => write!(f, "X {id} += {element}"),
        }
    }
}

pub(crate) fn canonical_number(t: &str) -> Option<u64> {
    let ok = !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) && !(t.len() > 1 && t.starts_with('0'));
    if ok {
        t.parse().ok()
    } else {
        None
    }
}

pub fn seed_header(seed: u64) -> String {
    format!("#seed {seed}")
}

/// Splits journal text into its seed and body lines. Empty text has no seed.
pub fn split_journal(text: &str) -> Result<(Option<u64>, Vec<String>)> {
    let mut lines = text.lines();
    let Some(first) = lines.next() else {
        return Ok((None, Vec::new()));
    };
    let seed = first
        .strip_prefix("#seed ")
        .and_then(canonical_number)
        .ok_or_else(|| Error::CorruptJournal { line: 1, message: "expected `#seed <n>` header".into() })?;
    Ok((Some(seed), lines.map(str::to_string).collect()))
}

/// The log itself. While replaying, every appended line must match the next
/// expected one.
#[derive(Debug, Clone)]
pub struct Journal {
    seed: u64,
    lines: Vec<String>,
    expected: Option<Vec<String>>,
}

impl Journal {
    pub fn new(seed: u64) -> Self {
        Journal { seed, lines: Vec::new(), expected: None }
    }

    pub(crate) fn expecting(seed: u64, expected: Vec<String>) -> Self {
        Journal { seed, lines: Vec::new(), expected: Some(expected) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn push(&mut self, line: String) -> Result<()> {
        if let Some(expected) = &self.expected {
            let at = self.lines.len();
            if expected.get(at).is_some_and(|e| *e != line) {
                return Err(Error::CorruptJournal {
                    line: at + 2,
                    message: format!("replay produced `{line}`"),
                });
            }
        }
        self.lines.push(line);
        Ok(())
    }

    /// Lines of a replayed journal not yet reproduced.
    pub fn unreplayed(&self) -> usize {
        self.expected.as_ref().map_or(0, |e| e.len().saturating_sub(self.lines.len()))
    }

    pub fn text(&self) -> String {
        let mut out = seed_header(self.seed);
        out.push('\n');
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_round_trip() {
        for line in [
            "Q EP N=0 m=2 R={0} add={} rm={} -> Big residue-policy",
            "Q CS id=0 kind=selection prefix=[] -> Big constructed",
            "Q (EP N=2 m=1 R={} add={} rm={}) & (CS id=1 kind=homog prefix=[3]) -> Small constructed",
            "X 12 += 40",
        ] {
            assert_eq!(Record::parse(line).unwrap().to_string(), line);
        }
        for line in ["Q EP -> Huge residue-policy", "X 01 += 3", "Z", "Q x -> Big magic"] {
            assert!(Record::parse(line).is_err(), "{line}");
        }
    }

    #[test]
    fn header() {
        assert_eq!(split_journal("").unwrap(), (None, vec![]));
        assert_eq!(split_journal("#seed 5\nX 0 += 1\n").unwrap(), (Some(5), vec!["X 0 += 1".into()]));
        assert!(matches!(split_journal("#seed x\n"), Err(Error::CorruptJournal { line: 1, .. })));
    }

    #[test]
    fn replay_detects_divergence() {
        let mut j = Journal::expecting(0, vec!["X 0 += 1".into()]);
        assert!(j.push("X 0 += 2".into()).is_err());
        j.push("X 0 += 1".into()).unwrap();
        assert_eq!(j.unreplayed(), 0);
        j.push("X 0 += 3".into()).unwrap();
        assert_eq!(j.text(), "#seed 0\nX 0 += 1\nX 0 += 3\n");
    }
}
