//! Inference by renaming the equivalence classes of maximal consistency
//! relations.
//!
//! For an MCR `∼` every block gets its own variable, which makes the base
//! consistent. A query is then adapted by substituting, for each variable it
//! shares with the base, one of the names that variable received. The four
//! relations differ in which MCRs are consulted (all of them, or only the
//! BMCRs) and whether some or every adaptation must be entailed.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::formula::{Base, Formula, OccId};
use crate::relations::{Lattice, OccRelation};
use crate::semantics::{entails, Problem};

/// How the adaptations of a query are quantified for each relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    /// Some adaptation must be entailed.
    Exists,
    /// Every adaptation must be entailed.
    Forall,
}

/// A variable per block of a relation.
///
/// A block holding every occurrence of `p` keeps the name `p`. Otherwise the
/// blocks of `p` are named `p__1`, `p__2`, … in block order, with the
/// separator lengthened until no name collides with a reserved one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRenaming {
    by_occurrence: Vec<String>,
    // variable -> names of its blocks, in block order
    classes: BTreeMap<String, Vec<String>>,
    renamed: Vec<Formula>,
}

impl ClassRenaming {
    /// Builds the renaming of `rel` without checking that it is an MCR.
    /// `reserved` names (typically the query's variables) are never used as
    /// fresh names.
    pub fn new(base: &Base, rel: &OccRelation, reserved: &BTreeSet<String>) -> ClassRenaming {
        let mut taken: BTreeSet<String> = base.variables().iter().cloned().collect();
        taken.extend(reserved.iter().cloned());

        let mut by_occurrence = vec![String::new(); base.occurrences().len()];
        let mut classes = BTreeMap::new();
        for (v, var) in base.variables().iter().enumerate() {
            let blocks = rel.var_blocks(v);
            let names: Vec<String> = if blocks.len() == 1 {
                vec![var.clone()]
            } else {
                let mut sep = String::from("__");
                loop {
                    let cand: Vec<String> = (1..=blocks.len())
                        .map(|i| format!("{var}{sep}{i}"))
                        .collect();
                    if cand.iter().all(|c| !taken.contains(c)) {
                        break cand;
                    }
                    sep.push('_');
                }
            };
            for (block, name) in blocks.iter().zip(&names) {
                for &o in block {
                    by_occurrence[o.0] = name.clone();
                }
            }
            taken.extend(names.iter().cloned());
            classes.insert(var.clone(), names);
        }
        let renamed = base.rename_occurrences(|id, _| by_occurrence[id.0].clone());
        ClassRenaming {
            by_occurrence,
            classes,
            renamed,
        }
    }

    pub fn name(&self, o: OccId) -> &str {
        &self.by_occurrence[o.0]
    }

    /// Names given to the occurrences of `var`, in block order.
    pub fn names_of(&self, var: &str) -> &[String] {
        self.classes.get(var).map_or(&[], Vec::as_slice)
    }

    pub fn classes(&self) -> &BTreeMap<String, Vec<String>> {
        &self.classes
    }

    /// The renamed base formulas, in core form.
    pub fn renamed_base(&self) -> &[Formula] {
        &self.renamed
    }
}

/// Checks that `rel` is an MCR before building its renaming.
pub fn build_renaming(
    lattice: &Lattice<'_>,
    rel: &OccRelation,
    reserved: &BTreeSet<String>,
) -> Result<ClassRenaming> {
    if !lattice.is_mcr(rel) {
        return Err(Error::NotAnMcr);
    }
    Ok(ClassRenaming::new(lattice.base(), rel, reserved))
}

/// The variables a query shares with the base, and the candidate names for
/// each under one renaming.
#[derive(Debug, Clone)]
pub struct QueryPlan {
    shared: Vec<String>,
    choices: Vec<Vec<String>>,
}

impl QueryPlan {
    pub fn new(renaming: &ClassRenaming, shared: &[String]) -> QueryPlan {
        QueryPlan {
            shared: shared.to_vec(),
            choices: shared
                .iter()
                .map(|p| renaming.names_of(p).to_vec())
                .collect(),
        }
    }

    pub fn shared(&self) -> &[String] {
        &self.shared
    }

    pub fn tuple_count(&self) -> usize {
        self.choices.iter().map(Vec::len).product()
    }

    /// Substitution tuples in odometer order, the last variable fastest.
    /// With no shared variables there is exactly one, empty, tuple.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<String>> + '_ {
        let n = self.tuple_count();
        (0..n).map(move |mut k| {
            let mut out = vec![String::new(); self.choices.len()];
            for (i, c) in self.choices.iter().enumerate().rev() {
                out[i] = c[k % c.len()].clone();
                k /= c.len();
            }
            out
        })
    }

    pub fn substitute(&self, query: &Formula, tuple: &[String]) -> Formula {
        let map = self
            .shared
            .iter()
            .cloned()
            .zip(tuple.iter().cloned())
            .collect();
        query.substitute(&map)
    }
}

/// `var(K) ∩ var(φ)`, sorted.
pub fn shared_variables(base: &Base, query: &Formula) -> Vec<String> {
    query
        .variables()
        .into_iter()
        .filter(|v| base.contains_var(v))
        .collect()
}

/// One relation consulted by a query and the adaptation that decided it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenamingWitness {
    pub relation: OccRelation,
    /// Pairs `(shared variable, substituted name)`; `None` when no
    /// adaptation is entailed.
    pub substitution: Option<Vec<(String, String)>>,
}

/// Outcome of a renaming-based query.
///
/// Under [`Quantifier::Exists`] a positive answer carries the entailed
/// adaptation for every relation, a negative one the relation that has none.
/// Under [`Quantifier::Forall`] a negative answer carries the relation and
/// the adaptation that is not entailed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenamingVerdict {
    pub holds: bool,
    pub witnesses: Vec<RenamingWitness>,
}

/// Decides the query against each of `relations`.
pub fn query_renamings(
    base: &Base,
    relations: &[OccRelation],
    query: &Formula,
    quantifier: Quantifier,
) -> RenamingVerdict {
    let query = query.desugar();
    let reserved = query.variables();
    let shared = shared_variables(base, &query);
    let mut witnesses = Vec::new();
    for rel in relations {
        let renaming = ClassRenaming::new(base, rel, &reserved);
        let plan = QueryPlan::new(&renaming, &shared);
        let premises = renaming.renamed_base();
        let pairs = |t: &[String]| {
            shared
                .iter()
                .cloned()
                .zip(t.iter().cloned())
                .collect::<Vec<_>>()
        };
        match quantifier {
            Quantifier::Exists => {
                let hit = plan
                    .tuples()
                    .find(|t| entails(premises, &[], &plan.substitute(&query, t)));
                let found = hit.is_some();
                witnesses.push(RenamingWitness {
                    relation: rel.clone(),
                    substitution: hit.as_deref().map(pairs),
                });
                if !found {
                    return RenamingVerdict {
                        holds: false,
                        witnesses: witnesses.split_off(witnesses.len() - 1),
                    };
                }
            }
            Quantifier::Forall => {
                if let Some(t) = plan
                    .tuples()
                    .find(|t| !entails(premises, &[], &plan.substitute(&query, t)))
                {
                    return RenamingVerdict {
                        holds: false,
                        witnesses: vec![RenamingWitness {
                            relation: rel.clone(),
                            substitution: Some(pairs(&t)),
                        }],
                    };
                }
            }
        }
    }
    RenamingVerdict {
        holds: true,
        witnesses,
    }
}

/// Whether the renamed base of `rel` is consistent; true for every MCR.
pub fn renamed_consistent(base: &Base, rel: &OccRelation) -> bool {
    let r = ClassRenaming::new(base, rel, &BTreeSet::new());
    Problem::new(r.renamed_base(), std::iter::empty()).is_satisfiable(&[])
}

fn with_lattice<T>(base: &Base, f: impl FnOnce(&Lattice<'_>) -> Result<T>) -> Result<T> {
    f(&Lattice::new(base, crate::caps::Caps::default()))
}

/// `K ⊩1 φ`: every MCR has an entailed adaptation.
pub fn infer1(base: &Base, query: &Formula) -> Result<bool> {
    with_lattice(base, |l| {
        Ok(query_renamings(base, &l.mcrs()?, query, Quantifier::Exists).holds)
    })
}

/// `K ⊩2 φ`: every MCR entails every adaptation.
pub fn infer2(base: &Base, query: &Formula) -> Result<bool> {
    with_lattice(base, |l| {
        Ok(query_renamings(base, &l.mcrs()?, query, Quantifier::Forall).holds)
    })
}

/// `K ⊩1ᴮ φ`: as [`infer1`] over the BMCRs.
pub fn infer1b(base: &Base, query: &Formula) -> Result<bool> {
    with_lattice(base, |l| {
        let b = l.bmcrs(&l.mcrs()?);
        Ok(query_renamings(base, &b, query, Quantifier::Exists).holds)
    })
}

/// `K ⊩2ᴮ φ`: as [`infer2`] over the BMCRs.
pub fn infer2b(base: &Base, query: &Formula) -> Result<bool> {
    with_lattice(base, |l| {
        let b = l.bmcrs(&l.mcrs()?);
        Ok(query_renamings(base, &b, query, Quantifier::Forall).holds)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::relations::{canonical_relation, enumerate_mcrs};
    use crate::Caps;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn k2() -> Base {
        Base::parse("p\n!p\n!p | q").unwrap()
    }

    fn strs(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn k2_renamings() {
        let b = k2();
        let mcrs = enumerate_mcrs(&b).unwrap();
        // mcrs[0] merges p1,p3; mcrs[1] merges p2,p3
        let r1 = ClassRenaming::new(&b, &mcrs[0], &BTreeSet::new());
        let shown: Vec<String> = r1.renamed_base().iter().map(|f| f.to_string()).collect();
        assert_eq!(shown, ["p__1", "!p__2", "!(!!p__1 & !q)"]);
        assert_eq!(r1.names_of("p"), strs(&["p__1", "p__2"]));
        assert_eq!(r1.names_of("q"), strs(&["q"]));

        let r2 = ClassRenaming::new(&b, &mcrs[1], &BTreeSet::new());
        let shown: Vec<String> = r2.renamed_base().iter().map(|f| f.to_string()).collect();
        assert_eq!(shown, ["p__1", "!p__2", "!(!!p__2 & !q)"]);

        let plan = QueryPlan::new(&r1, &strs(&["p", "q"]));
        let tuples: Vec<_> = plan.tuples().collect();
        assert_eq!(tuples, vec![strs(&["p__1", "q"]), strs(&["p__2", "q"])]);
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let b = Base::parse("p & p__1\n!p").unwrap();
        let mcr = &enumerate_mcrs(&b).unwrap()[0];
        let reserved = BTreeSet::from(["p___1".to_string()]);
        let r = ClassRenaming::new(&b, mcr, &reserved);
        assert_eq!(r.names_of("p"), strs(&["p____1", "p____2"]));
        assert_eq!(r.names_of("p__1"), strs(&["p__1"]));
    }

    #[test]
    fn consistent_base_renaming_is_identity() {
        let b = Base::parse("p & q\n!r | p").unwrap();
        let r = ClassRenaming::new(&b, &canonical_relation(&b), &BTreeSet::new());
        assert_eq!(r.renamed_base(), b.formulas());
    }

    #[test]
    fn build_renaming_rejects_non_mcr() {
        let b = k2();
        let l = Lattice::new(&b, Caps::default());
        let err = build_renaming(&l, &canonical_relation(&b), &BTreeSet::new()).unwrap_err();
        assert!(matches!(err, Error::NotAnMcr));
        let mcr = &l.mcrs().unwrap()[0];
        assert!(build_renaming(&l, mcr, &BTreeSet::new()).is_ok());
    }

    #[test]
    fn k2_verdict_table() {
        let b = k2();
        let p = f("p");
        let q = f("q");
        assert!(infer1(&b, &p).unwrap());
        assert!(!infer2(&b, &p).unwrap());
        assert!(infer1b(&b, &p).unwrap());
        assert!(!infer2b(&b, &p).unwrap());
        assert!(!infer1(&b, &q).unwrap());
        assert!(!infer2(&b, &q).unwrap());
        assert!(infer1b(&b, &q).unwrap());
        assert!(infer2b(&b, &q).unwrap());
    }

    #[test]
    fn separation_query_fails_under_m1() {
        let b = Base::parse("p\n!p\nq | r").unwrap();
        let phi = f("(!p & (!q | !r)) | (p & q & r)");
        assert!(!infer1(&b, &phi).unwrap());
    }

    #[test]
    fn contradiction_not_inferred() {
        let b = Base::parse("p\n!p").unwrap();
        assert!(!infer1b(&b, &f("p & !p")).unwrap());
    }

    #[test]
    fn consistent_base_is_classical() {
        let b = Base::parse("p & q").unwrap();
        for rel in [infer1, infer2, infer1b, infer2b] {
            assert!(rel(&b, &f("q")).unwrap());
            assert!(!rel(&b, &f("r")).unwrap());
            assert!(rel(&b, &f("r | !r")).unwrap());
        }
    }

    #[test]
    fn witnesses() {
        let b = k2();
        let mcrs = enumerate_mcrs(&b).unwrap();
        let v = query_renamings(&b, &mcrs, &f("p"), Quantifier::Exists);
        assert!(v.holds);
        let subs: Vec<_> = v
            .witnesses
            .iter()
            .map(|w| w.substitution.clone().unwrap())
            .collect();
        let p1 = vec![("p".to_string(), "p__1".to_string())];
        assert_eq!(subs, vec![p1.clone(), p1]);

        let v = query_renamings(&b, &mcrs, &f("p"), Quantifier::Forall);
        assert!(!v.holds);
        assert_eq!(v.witnesses[0].relation, mcrs[0]);
        assert_eq!(
            v.witnesses[0].substitution,
            Some(vec![("p".into(), "p__2".into())])
        );

        let v = query_renamings(&b, &mcrs, &f("q"), Quantifier::Exists);
        assert!(!v.holds);
        assert_eq!(
            v.witnesses,
            vec![RenamingWitness {
                relation: mcrs[1].clone(),
                substitution: None
            }]
        );
    }

    #[test]
    fn every_mcr_renames_to_consistent_base() {
        let b = Base::parse("p & q\n!p & r\n!q | !r").unwrap();
        for m in enumerate_mcrs(&b).unwrap() {
            assert!(renamed_consistent(&b, &m));
        }
        assert!(!renamed_consistent(&b, &canonical_relation(&b)));
    }
}
