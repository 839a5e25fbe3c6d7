//! Hyperrational numbers `ℚ^ω / ∼` over a lazily decided selective ultrafilter.
//!
//! The crate is organised bottom-up:
//!
//! - [`rational`] and [`poly`]: exact scalars and polynomial sign analysis.
//! - [`epset`] and [`index`]: the decidable algebra of index sets.
//! - [`seq`]: symbolic sequences and their comparison sets.
//! - [`oracle`]: the ultrafilter decision engine and the combinatorial
//!   constructions (big selections, diagonal sets, homogeneous sets).
//! - [`hyper`]: arithmetic, order, classification, monotone witnesses and the
//!   standard part map.
//! - [`lang`]: the sequence language and the batch program runner.

pub mod epset;
pub mod hyper;
pub mod error;
pub mod index;
pub mod lang;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod seq;

pub use epset::{EpSet, SetKind, SetOp, SizeClass};
pub use error::{Error, Result};
pub use index::{ep_algebra, CommittedRef, CommittedSnapshot, ConstructionKind, IndexSet, SessionId};
pub use oracle::{Bigness, Decision, OracleSession, Provenance};
pub use poly::PolyQ;
pub use rational::{rat_arith, ArithOp, Rational, Sign};
pub use seq::{comparison_set, Compiled, RatFn, Rel, SeqExpr};
