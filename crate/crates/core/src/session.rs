//! One base, its caps, and lazily computed analysis results shared by all
//! queries against it.

use std::cell::OnceCell;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::caps::Caps;
use crate::duality::{verify_duality, DualityReport};
use crate::error::Result;
use crate::formula::{Base, Formula};
use crate::inference::{query_renamings, Quantifier, RenamingVerdict};
use crate::lpm::{minimal_lpm_models, query_lpm_models, LpmInterpretation, LpmVerdict};
use crate::osem::{
    a_minimal_among, b_minimal_among, o_models, query_o_models, OInterpretation, OsemVerdict,
};
use crate::relations::{bmcrs_among, Lattice, OccRelation};
use crate::semantics::{Problem, Valuation};

/// The inference relations a query can be posed under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Classical,
    M1,
    M2,
    MB1,
    MB2,
    A1,
    A2,
    B1,
    B2,
    Lpm,
}

impl Relation {
    pub const ALL: [Relation; 10] = [
        Relation::Classical,
        Relation::M1,
        Relation::M2,
        Relation::MB1,
        Relation::MB2,
        Relation::A1,
        Relation::A2,
        Relation::B1,
        Relation::B2,
        Relation::Lpm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::Classical => "classical",
            Relation::M1 => "m1",
            Relation::M2 => "m2",
            Relation::MB1 => "mb1",
            Relation::MB2 => "mb2",
            Relation::A1 => "a1",
            Relation::A2 => "a2",
            Relation::B1 => "b1",
            Relation::B2 => "b2",
            Relation::Lpm => "lpm",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownRelation(pub String);

impl fmt::Display for UnknownRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = Relation::ALL.iter().map(|r| r.name()).collect();
        write!(
            f,
            "unknown relation `{}` (expected one of {})",
            self.0,
            names.join(", ")
        )
    }
}

impl std::error::Error for UnknownRelation {}

impl FromStr for Relation {
    type Err = UnknownRelation;

    fn from_str(s: &str) -> Result<Relation, UnknownRelation> {
        Relation::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownRelation(s.to_string()))
    }
}

/// A verdict together with whatever explains it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    /// A negative answer carries a model of the base falsifying the query.
    Classical {
        holds: bool,
        counter_model: Option<Valuation>,
    },
    Renaming(RenamingVerdict),
    OSem(OsemVerdict),
    Lpm(LpmVerdict),
}

impl Answer {
    pub fn holds(&self) -> bool {
        match self {
            Answer::Classical { holds, .. } => *holds,
            Answer::Renaming(v) => v.holds,
            Answer::OSem(v) => v.holds,
            Answer::Lpm(v) => v.holds,
        }
    }
}

fn cached<T>(cell: &OnceCell<T>, f: impl FnOnce() -> Result<T>) -> Result<&T> {
    if let Some(v) = cell.get() {
        return Ok(v);
    }
    let v = f()?;
    Ok(cell.get_or_init(|| v))
}

/// Analysis results for one base, computed on first use.
pub struct Session<'b> {
    base: &'b Base,
    caps: Caps,
    lattice: Lattice<'b>,
    mirs: OnceCell<Vec<OccRelation>>,
    mcrs: OnceCell<Vec<OccRelation>>,
    bmcrs: OnceCell<Vec<OccRelation>>,
    mises: OnceCell<Vec<BTreeSet<usize>>>,
    o_models: OnceCell<Vec<OInterpretation>>,
    a_minimal: OnceCell<Vec<OInterpretation>>,
    b_minimal: OnceCell<Vec<OInterpretation>>,
    lpm_models: OnceCell<Vec<LpmInterpretation>>,
}

impl<'b> Session<'b> {
    pub fn new(base: &'b Base, caps: Caps) -> Session<'b> {
        Session {
            base,
            caps,
            lattice: Lattice::new(base, caps),
            mirs: OnceCell::new(),
            mcrs: OnceCell::new(),
            bmcrs: OnceCell::new(),
            mises: OnceCell::new(),
            o_models: OnceCell::new(),
            a_minimal: OnceCell::new(),
            b_minimal: OnceCell::new(),
            lpm_models: OnceCell::new(),
        }
    }

    pub fn base(&self) -> &'b Base {
        self.base
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn lattice(&self) -> &Lattice<'b> {
        &self.lattice
    }

    pub fn is_consistent(&self) -> bool {
        self.lattice
            .is_consistent(&OccRelation::canonical(self.base))
    }

    pub fn mirs(&self) -> Result<&[OccRelation]> {
        cached(&self.mirs, || self.lattice.mirs()).map(Vec::as_slice)
    }

    pub fn mcrs(&self) -> Result<&[OccRelation]> {
        cached(&self.mcrs, || self.lattice.mcrs()).map(Vec::as_slice)
    }

    pub fn bmcrs(&self) -> Result<&[OccRelation]> {
        cached(&self.bmcrs, || Ok(bmcrs_among(self.base, self.mcrs()?))).map(Vec::as_slice)
    }

    pub fn mises(&self) -> Result<&[BTreeSet<usize>]> {
        cached(&self.mises, || self.lattice.mises()).map(Vec::as_slice)
    }

    pub fn o_models(&self) -> Result<&[OInterpretation]> {
        cached(&self.o_models, || o_models(self.base, self.caps)).map(Vec::as_slice)
    }

    pub fn a_minimal_o_models(&self) -> Result<&[OInterpretation]> {
        cached(&self.a_minimal, || {
            Ok(a_minimal_among(self.base, self.o_models()?))
        })
        .map(Vec::as_slice)
    }

    pub fn b_minimal_o_models(&self) -> Result<&[OInterpretation]> {
        cached(&self.b_minimal, || {
            Ok(b_minimal_among(self.base, self.o_models()?))
        })
        .map(Vec::as_slice)
    }

    pub fn minimal_lpm_models(&self) -> Result<&[LpmInterpretation]> {
        cached(&self.lpm_models, || {
            minimal_lpm_models(self.base, self.caps)
        })
        .map(Vec::as_slice)
    }

    pub fn duality(&self) -> Result<DualityReport> {
        verify_duality(self.base, self.caps)
    }

    /// Classical entailment, with a counter-model when it fails.
    pub fn classical(&self, query: &Formula) -> Answer {
        let negated = Formula::not(query.desugar());
        let p = Problem::new(
            self.base.formulas().iter().chain(std::iter::once(&negated)),
            std::iter::empty(),
        );
        let counter_model = p.models(&[]).next();
        Answer::Classical {
            holds: counter_model.is_none(),
            counter_model,
        }
    }

    pub fn entails(&self, relation: Relation, query: &Formula) -> Result<Answer> {
        use Quantifier::{Exists, Forall};
        let b = self.base;
        Ok(match relation {
            Relation::Classical => self.classical(query),
            Relation::M1 => Answer::Renaming(query_renamings(b, self.mcrs()?, query, Exists)),
            Relation::M2 => Answer::Renaming(query_renamings(b, self.mcrs()?, query, Forall)),
            Relation::MB1 => Answer::Renaming(query_renamings(b, self.bmcrs()?, query, Exists)),
            Relation::MB2 => Answer::Renaming(query_renamings(b, self.bmcrs()?, query, Forall)),
            Relation::A1 => {
                Answer::OSem(query_o_models(b, self.a_minimal_o_models()?, query, Exists))
            }
            Relation::A2 => {
                Answer::OSem(query_o_models(b, self.a_minimal_o_models()?, query, Forall))
            }
            Relation::B1 => {
                Answer::OSem(query_o_models(b, self.b_minimal_o_models()?, query, Exists))
            }
            Relation::B2 => {
                Answer::OSem(query_o_models(b, self.b_minimal_o_models()?, query, Forall))
            }
            Relation::Lpm => Answer::Lpm(query_lpm_models(
                b,
                self.minimal_lpm_models()?,
                query,
                self.caps,
            )?),
        })
    }
}
