//! Serializable reports. Every list is built in a fixed order so that the
//! JSON output of a command depends on its input only.

use std::collections::BTreeMap;

use occlogic::duality::DualityReport;
use occlogic::inference::ClassRenaming;
use occlogic::relations::{cmcrs, omis_of, pn_pairs, Pair};
use occlogic::{Answer, Base, Formula, OccId, OccRelation, Relation, Session};
use serde::Serialize;

pub const ANALYZE_SCHEMA: &str = "occlogic.analyze/1";
pub const ENTAIL_SCHEMA: &str = "occlogic.entail/1";
pub const DUALITY_SCHEMA: &str = "occlogic.duality/1";
pub const COMPARE_SCHEMA: &str = "occlogic.compare/1";

pub fn occ(base: &Base, o: OccId) -> String {
    base.occurrence(o).to_string()
}

fn pair(base: &Base, (a, b): Pair) -> [String; 2] {
    [occ(base, a), occ(base, b)]
}

#[derive(Debug, Serialize)]
pub struct OccurrenceRow {
    pub id: String,
    pub label: String,
    pub variable: String,
    pub formula: usize,
    pub polarity: char,
}

/// A relation as its non-singleton blocks plus its (positive, negative)
/// pairs; every occurrence not listed is alone in its class.
#[derive(Debug, Serialize)]
pub struct RelationView {
    pub blocks: Vec<Vec<String>>,
    pub pn: Vec<[String; 2]>,
}

impl RelationView {
    pub fn new(base: &Base, rel: &OccRelation) -> RelationView {
        let mut blocks: Vec<&[OccId]> = rel.blocks().filter(|b| b.len() > 1).collect();
        blocks.sort_by_key(|b| b[0]);
        RelationView {
            blocks: blocks
                .iter()
                .map(|b| b.iter().map(|&o| occ(base, o)).collect())
                .collect(),
            pn: pn_pairs(base, rel)
                .into_iter()
                .map(|p| pair(base, p))
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DualitySummary {
    pub passed: bool,
    pub relations_checked: u64,
    pub mcrs_are_h_maximal: bool,
    pub h_maximal_are_mcrs: bool,
    pub mirs_are_h_minimal: bool,
    pub h_minimal_are_mirs: bool,
    pub counterexamples: Vec<DualityCounterexample>,
}

#[derive(Debug, Serialize)]
pub struct DualityCounterexample {
    /// `mcr` or `mir`: which side of the duality disagrees.
    pub side: &'static str,
    pub relation: RelationView,
    pub enumerated: bool,
    pub hitting_set: Option<Vec<[String; 2]>>,
}

impl DualitySummary {
    pub fn new(base: &Base, r: &DualityReport) -> DualitySummary {
        let mut counterexamples = Vec::new();
        for (side, list) in [
            ("mcr", &r.mcr_counterexamples),
            ("mir", &r.mir_counterexamples),
        ] {
            for c in list {
                counterexamples.push(DualityCounterexample {
                    side,
                    relation: RelationView::new(base, &c.relation),
                    enumerated: c.enumerated,
                    hitting_set: c
                        .witness
                        .as_ref()
                        .map(|h| h.iter().map(|&p| pair(base, p)).collect()),
                });
            }
        }
        DualitySummary {
            passed: r.passed(),
            relations_checked: r.relations_checked,
            mcrs_are_h_maximal: r.mcr_only_if_holds(),
            h_maximal_are_mcrs: r.mcr_if_holds(),
            mirs_are_h_minimal: r.mir_only_if_holds(),
            h_minimal_are_mirs: r.mir_if_holds(),
            counterexamples,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Stats {
    pub formulas: usize,
    pub variables: usize,
    pub occurrences: usize,
    pub mirs: usize,
    pub mcrs: usize,
    pub bmcrs: usize,
    pub omises: usize,
    pub mises: usize,
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub schema: &'static str,
    pub formulas: Vec<String>,
    pub occurrences: Vec<OccurrenceRow>,
    pub consistent: bool,
    pub mirs: Vec<RelationView>,
    pub mcrs: Vec<RelationView>,
    pub bmcrs: Vec<RelationView>,
    pub omises: Vec<Vec<usize>>,
    pub mises: Vec<Vec<usize>>,
    pub cmcrs: Vec<Vec<[String; 2]>>,
    pub duality: DualitySummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<Stats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl AnalyzeReport {
    pub fn build(session: &Session<'_>, stats: bool) -> occlogic::Result<AnalyzeReport> {
        let base = session.base();
        let mirs = session.mirs()?;
        let mcrs = session.mcrs()?;
        let bmcrs = session.bmcrs()?;
        let mises = session.mises()?;
        let duality = session.duality()?;
        let mut omises: Vec<Vec<usize>> = mirs
            .iter()
            .map(|m| omis_of(base, m).into_iter().collect())
            .collect();
        omises.sort();
        omises.dedup();
        let view = |rs: &[OccRelation]| {
            rs.iter()
                .map(|r| RelationView::new(base, r))
                .collect::<Vec<_>>()
        };
        let stats = stats.then(|| Stats {
            formulas: base.len(),
            variables: base.variables().len(),
            occurrences: base.occurrences().len(),
            mirs: mirs.len(),
            mcrs: mcrs.len(),
            bmcrs: bmcrs.len(),
            omises: omises.len(),
            mises: mises.len(),
        });
        Ok(AnalyzeReport {
            schema: ANALYZE_SCHEMA,
            formulas: base.surface().iter().map(|f| f.to_string()).collect(),
            occurrences: base
                .occurrences()
                .iter()
                .map(|o| OccurrenceRow {
                    id: o.to_string(),
                    label: o.short_label(),
                    variable: o.variable.clone(),
                    formula: o.formula_index,
                    polarity: o.polarity.sign(),
                })
                .collect(),
            consistent: session.is_consistent(),
            mirs: view(mirs),
            mcrs: view(mcrs),
            bmcrs: view(bmcrs),
            omises,
            mises: mises.iter().map(|m| m.iter().copied().collect()).collect(),
            cmcrs: cmcrs(base, mcrs)
                .into_iter()
                .map(|c| c.pairs.into_iter().map(|p| pair(base, p)).collect())
                .collect(),
            duality: DualitySummary::new(base, &duality),
            stats,
            timing_ms: None,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct RenamingWitnessView {
    pub relation: RelationView,
    /// The base after giving each class of the relation its own variable.
    pub renamed_base: Vec<String>,
    pub substitution: Option<BTreeMap<String, String>>,
}

/// Why an answer came out the way it did.
#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A model of the base falsifying the query.
    CounterModel {
        valuation: BTreeMap<String, bool>,
    },
    Renaming {
        relations: Vec<RenamingWitnessView>,
    },
    OModel {
        /// Occurrence values in occurrence order.
        o_model: Vec<(String, bool)>,
        valuation: Option<BTreeMap<String, bool>>,
    },
    LpmCounterModel {
        interpretation: BTreeMap<String, String>,
    },
    None,
}

impl Witness {
    pub fn new(base: &Base, query: &Formula, answer: &Answer) -> Witness {
        match answer {
            Answer::Classical { counter_model, .. } => match counter_model {
                Some(v) => Witness::CounterModel {
                    valuation: v.iter().map(|(k, b)| (k.to_string(), b)).collect(),
                },
                None => Witness::None,
            },
            Answer::Renaming(v) => Witness::Renaming {
                relations: v
                    .witnesses
                    .iter()
                    .map(|w| RenamingWitnessView {
                        relation: RelationView::new(base, &w.relation),
                        renamed_base: ClassRenaming::new(base, &w.relation, &query.variables())
                            .renamed_base()
                            .iter()
                            .map(|f| f.to_string())
                            .collect(),
                        substitution: w.substitution.as_ref().map(|s| s.iter().cloned().collect()),
                    })
                    .collect(),
            },
            Answer::OSem(v) => match &v.witness {
                Some(w) => Witness::OModel {
                    o_model: base
                        .occurrences()
                        .iter()
                        .map(|o| (o.to_string(), w.model.get(o.id())))
                        .collect(),
                    valuation: w
                        .valuation
                        .as_ref()
                        .map(|v| v.iter().map(|(k, b)| (k.to_string(), b)).collect()),
                },
                None => Witness::None,
            },
            Answer::Lpm(v) => match &v.counter_model {
                Some(l) => Witness::LpmCounterModel {
                    interpretation: l
                        .iter()
                        .map(|(k, t)| (k.to_string(), t.to_string()))
                        .collect(),
                },
                None => Witness::None,
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct EntailReport {
    pub schema: &'static str,
    pub query: String,
    pub relation: String,
    pub holds: bool,
    pub witness: Witness,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct DualityCheckReport {
    pub schema: &'static str,
    pub mirs: usize,
    pub mcrs: usize,
    pub duality: DualitySummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct CompareRow {
    pub query: String,
    pub verdicts: BTreeMap<String, bool>,
}

#[derive(Debug, Serialize)]
pub struct Violation {
    pub query: String,
    pub rule: String,
}

#[derive(Debug, Serialize)]
pub struct CompareReport {
    pub schema: &'static str,
    pub relations: Vec<String>,
    pub rows: Vec<CompareRow>,
    pub violations: Vec<Violation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

/// `(name, weaker, stronger)`: whatever `weaker` accepts, `stronger` must.
pub const RULES: [(&str, Relation, Relation); 13] = [
    ("m2 => m1", Relation::M2, Relation::M1),
    ("m1 => mb1", Relation::M1, Relation::MB1),
    ("m2 => mb2", Relation::M2, Relation::MB2),
    ("mb2 => mb1", Relation::MB2, Relation::MB1),
    ("m1 => a1", Relation::M1, Relation::A1),
    ("a1 => b1", Relation::A1, Relation::B1),
    ("mb1 => b1", Relation::MB1, Relation::B1),
    ("m1 => lpm", Relation::M1, Relation::Lpm),
    ("a1 => lpm", Relation::A1, Relation::Lpm),
    ("a2 => m2", Relation::A2, Relation::M2),
    ("m2 => a2", Relation::M2, Relation::A2),
    ("b2 => mb2", Relation::B2, Relation::MB2),
    ("mb2 => b2", Relation::MB2, Relation::B2),
];

/// Rules a row of verdicts breaks; on a consistent base every relation must
/// also agree with classical entailment.
pub fn violations(verdicts: &BTreeMap<Relation, bool>, consistent: bool) -> Vec<String> {
    let mut out: Vec<String> = RULES
        .iter()
        .filter(|(_, weak, strong)| verdicts[weak] && !verdicts[strong])
        .map(|(name, _, _)| name.to_string())
        .collect();
    if consistent {
        let classical = verdicts[&Relation::Classical];
        out.extend(
            verdicts
                .iter()
                .filter(|(_, &v)| v != classical)
                .map(|(r, _)| format!("{r} = classical on a consistent base")),
        );
    }
    out
}
