//! Occurrence-level inconsistency analysis for propositional bases.
//!
//! A base is analysed by distinguishing every occurrence of every variable
//! and asking which equalities between occurrences of the same variable make
//! the base unsatisfiable. The crate enumerates minimal inconsistency
//! relations and maximal consistency relations, checks the hitting-set
//! duality between them, and answers queries under renaming-based,
//! occurrence-semantics and LP_m inference relations.

pub mod caps;
pub mod duality;
pub mod error;
pub mod formula;
pub mod inference;
pub mod lpm;
pub mod osem;
pub mod relations;
pub mod semantics;
pub mod session;
pub mod unionfind;

pub use caps::Caps;
pub use error::{Error, ParseError, Resource, Result};
pub use formula::{parse_formula, Base, Formula, OccId, Occurrence, Polarity};
pub use relations::OccRelation;
pub use session::{Answer, Relation, Session};
