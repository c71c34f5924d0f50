//! Minimal hitting sets and the MIR/MCR duality check.
//!
//! An MCR is exactly a relation that is maximal among those avoiding some
//! minimal hitting set of the MIR pair sets, and a MIR is exactly the
//! equivalence closure of some minimal hitting set of the C-MCRs.
//! [`verify_duality`] checks both statements over every compliant relation
//! of a base; it is a verification harness, the lattice enumerators in
//! [`crate::relations`] stay the source of truth.

use std::collections::{BTreeSet, HashSet};

use crate::caps::Caps;
use crate::error::{Error, Resource, Result};
use crate::formula::{Base, OccId};
use crate::relations::{cmcrs, Lattice, OccRelation, Pair};

/// All subset-minimal hitting sets of `collection`, in sorted order.
///
/// An empty collection has the single hitting set `∅`. An empty member has
/// no hitting set at all, which is reported as [`Error::EmptyTargetSet`].
pub fn minimal_hitting_sets<T: Ord + Clone>(
    collection: &[BTreeSet<T>],
) -> Result<Vec<BTreeSet<T>>> {
    if let Some(i) = collection.iter().position(BTreeSet::is_empty) {
        return Err(Error::EmptyTargetSet(i));
    }
    let mut out = BTreeSet::new();
    let mut chosen = Vec::new();
    branch(collection, &mut chosen, &mut out);
    Ok(out.into_iter().collect())
}

/// Every chosen element must keep a private set (one it alone hits);
/// adding elements only removes private sets, so a violation prunes.
fn all_critical<T: Ord>(collection: &[BTreeSet<T>], chosen: &[T]) -> bool {
    chosen.iter().all(|x| {
        collection
            .iter()
            .any(|s| s.contains(x) && chosen.iter().filter(|y| s.contains(y)).count() == 1)
    })
}

fn branch<T: Ord + Clone>(
    collection: &[BTreeSet<T>],
    chosen: &mut Vec<T>,
    out: &mut BTreeSet<BTreeSet<T>>,
) {
    let Some(unhit) = collection
        .iter()
        .find(|s| !chosen.iter().any(|x| s.contains(x)))
    else {
        out.insert(chosen.iter().cloned().collect());
        return;
    };
    for e in unhit {
        chosen.push(e.clone());
        if all_critical(collection, chosen) {
            branch(collection, chosen, out);
        }
        chosen.pop();
    }
}

/// `rel` avoids `h`, and every strictly coarser compliant relation meets
/// `h`. Checking immediate coarsenings suffices: any strict coarsening
/// contains one of them.
pub fn is_h_maximal(rel: &OccRelation, h: &BTreeSet<Pair>) -> bool {
    let avoids = |r: &OccRelation| r.pairs().is_disjoint(h);
    avoids(rel) && rel.coarsenings().iter().all(|c| !avoids(c))
}

/// `rel` contains `h` and no strictly finer relation does, i.e. `rel` is
/// the equivalence closure of `h`.
pub fn is_h_minimal(base: &Base, rel: &OccRelation, h: &BTreeSet<Pair>) -> bool {
    if !h.is_subset(&rel.pairs()) {
        return false;
    }
    match OccRelation::closure(base, h.iter().copied()) {
        Ok(c) => &c == rel,
        Err(_) => false,
    }
}

/// A relation on which one side of an equivalence disagrees with the other.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub relation: OccRelation,
    /// Membership according to the lattice enumeration.
    pub enumerated: bool,
    /// Membership according to the hitting-set characterization.
    pub dual: bool,
    /// The hitting set that makes `dual` true, if any.
    pub witness: Option<BTreeSet<Pair>>,
}

#[derive(Debug, Clone)]
pub struct DualityReport {
    pub relations_checked: u64,
    pub mir_count: usize,
    pub mcr_count: usize,
    pub mir_hitting_sets: Vec<BTreeSet<Pair>>,
    pub cmcr_hitting_sets: Vec<BTreeSet<Pair>>,
    pub mcr_counterexamples: Vec<Counterexample>,
    pub mir_counterexamples: Vec<Counterexample>,
}

impl DualityReport {
    pub fn passed(&self) -> bool {
        self.mcr_counterexamples.is_empty() && self.mir_counterexamples.is_empty()
    }

    /// Every MCR is H-maximal for some minimal hitting set of the MIRs.
    pub fn mcr_only_if_holds(&self) -> bool {
        self.mcr_counterexamples.iter().all(|c| !c.enumerated)
    }

    /// Every H-maximal relation is an MCR.
    pub fn mcr_if_holds(&self) -> bool {
        self.mcr_counterexamples.iter().all(|c| !c.dual)
    }

    /// Every MIR is H-minimal for some minimal hitting set of the C-MCRs.
    pub fn mir_only_if_holds(&self) -> bool {
        self.mir_counterexamples.iter().all(|c| !c.enumerated)
    }

    /// Every H-minimal relation is a MIR.
    pub fn mir_if_holds(&self) -> bool {
        self.mir_counterexamples.iter().all(|c| !c.dual)
    }
}

fn bell(n: usize) -> u64 {
    // Bell triangle
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let v = next.last().unwrap().saturating_add(x);
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// Set partitions of `elems` via restricted growth strings.
fn set_partitions(elems: &[OccId]) -> Vec<Vec<Vec<OccId>>> {
    let n = elems.len();
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let blocks = rgs.iter().copied().max().unwrap() + 1;
        let mut parts = vec![Vec::new(); blocks];
        for (i, &b) in rgs.iter().enumerate() {
            parts[b].push(elems[i]);
        }
        out.push(parts);
        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let prefix_max = rgs[..i].iter().copied().max().unwrap();
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for x in &mut rgs[i + 1..] {
                    *x = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Checks both duality statements over every compliant relation of `base`.
pub fn verify_duality(base: &Base, caps: Caps) -> Result<DualityReport> {
    let lattice = Lattice::new(base, caps);
    let mirs = lattice.mirs()?;
    let mcrs = lattice.mcrs()?;

    let mir_sets: Vec<BTreeSet<Pair>> = mirs.iter().map(OccRelation::pairs).collect();
    let mir_hitting_sets = minimal_hitting_sets(&mir_sets)?;
    let cmcr_sets: Vec<BTreeSet<Pair>> = cmcrs(base, &mcrs).into_iter().map(|c| c.pairs).collect();
    let cmcr_hitting_sets = match minimal_hitting_sets(&cmcr_sets) {
        Ok(hs) => hs,
        // a consistent base has the empty C-MCR, which nothing hits
        Err(Error::EmptyTargetSet(_)) => Vec::new(),
        Err(e) => return Err(e),
    };

    let nvars = base.variables().len();
    let total = (0..nvars)
        .map(|v| bell(base.occurrences_of(v).len()))
        .try_fold(1u64, u64::checked_mul)
        .unwrap_or(u64::MAX);
    if total > caps.relations {
        return Err(Error::CapExceeded {
            resource: Resource::Relations,
            limit: caps.relations,
            actual: total,
        });
    }
    let options: Vec<_> = (0..nvars)
        .map(|v| set_partitions(base.occurrences_of(v)))
        .collect();

    let mir_set: HashSet<&OccRelation> = mirs.iter().collect();
    let mcr_set: HashSet<&OccRelation> = mcrs.iter().collect();
    let mut report = DualityReport {
        relations_checked: 0,
        mir_count: mirs.len(),
        mcr_count: mcrs.len(),
        mir_hitting_sets,
        cmcr_hitting_sets,
        mcr_counterexamples: Vec::new(),
        mir_counterexamples: Vec::new(),
    };

    let mut odometer = vec![0usize; nvars];
    loop {
        let parts = odometer
            .iter()
            .zip(&options)
            .map(|(&i, o)| o[i].clone())
            .collect();
        let rel = OccRelation::from_parts(base, parts)?;
        report.relations_checked += 1;

        let is_mcr = mcr_set.contains(&rel);
        let witness = report
            .mir_hitting_sets
            .iter()
            .find(|h| is_h_maximal(&rel, h));
        if is_mcr != witness.is_some() {
            report.mcr_counterexamples.push(Counterexample {
                relation: rel.clone(),
                enumerated: is_mcr,
                dual: witness.is_some(),
                witness: witness.cloned(),
            });
        }
        let is_mir = mir_set.contains(&rel);
        let witness = report
            .cmcr_hitting_sets
            .iter()
            .find(|h| is_h_minimal(base, &rel, h));
        if is_mir != witness.is_some() {
            report.mir_counterexamples.push(Counterexample {
                relation: rel,
                enumerated: is_mir,
                dual: witness.is_some(),
                witness: witness.cloned(),
            });
        }

        let mut k = 0;
        loop {
            if k == nvars {
                return Ok(report);
            }
            odometer[k] += 1;
            if odometer[k] < options[k].len() {
                break;
            }
            odometer[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::{canonical_relation, enumerate_mcrs, enumerate_mirs};

    fn set(xs: &[char]) -> BTreeSet<char> {
        xs.iter().copied().collect()
    }

    #[test]
    fn small_hitting_sets() {
        assert_eq!(
            minimal_hitting_sets(&[set(&['a']), set(&['b'])]).unwrap(),
            vec![set(&['a', 'b'])]
        );
        assert_eq!(
            minimal_hitting_sets(&[set(&['a', 'b'])]).unwrap(),
            vec![set(&['a']), set(&['b'])]
        );
        assert_eq!(
            minimal_hitting_sets::<char>(&[]).unwrap(),
            vec![BTreeSet::new()]
        );
        assert!(matches!(
            minimal_hitting_sets(&[set(&['a']), BTreeSet::new()]),
            Err(Error::EmptyTargetSet(1))
        ));
    }

    #[test]
    fn hitting_sets_are_minimal() {
        let c = [
            set(&['a', 'b']),
            set(&['b', 'c']),
            set(&['c', 'd']),
            set(&['a', 'd']),
        ];
        let hs = minimal_hitting_sets(&c).unwrap();
        assert_eq!(hs, vec![set(&['a', 'c']), set(&['b', 'd'])]);
    }

    #[test]
    fn partitions_count_matches_bell() {
        for n in 0..7 {
            let elems: Vec<OccId> = (0..n).map(OccId).collect();
            assert_eq!(set_partitions(&elems).len() as u64, bell(n));
        }
        assert_eq!(bell(10), 115_975);
    }

    #[test]
    fn k1_hitting_sets_of_mirs() {
        let b = Base::parse("p & q\n!p & r\n!q | !r").unwrap();
        let sets: Vec<_> = enumerate_mirs(&b)
            .unwrap()
            .iter()
            .map(OccRelation::pairs)
            .collect();
        let p = (OccId(0), OccId(2));
        let q = (OccId(1), OccId(4));
        let r = (OccId(3), OccId(5));
        assert_eq!(
            minimal_hitting_sets(&sets).unwrap(),
            vec![BTreeSet::from([p, q]), BTreeSet::from([p, r])]
        );
    }

    #[test]
    fn h_maximality_and_minimality() {
        let b = Base::parse("p & q\n!p & r\n!q | !r").unwrap();
        let p = (OccId(0), OccId(2));
        let q = (OccId(1), OccId(4));
        let r = (OccId(3), OccId(5));
        let mcr_q = enumerate_mcrs(&b).unwrap()[0].clone();
        assert!(is_h_maximal(&mcr_q, &BTreeSet::from([p, r])));
        assert!(!is_h_maximal(&mcr_q, &BTreeSet::from([q])));
        let top = canonical_relation(&b);
        assert!(is_h_maximal(&top, &BTreeSet::new()));

        let qr = OccRelation::closure(&b, [q, r]).unwrap();
        assert!(is_h_minimal(&b, &qr, &BTreeSet::from([q, r])));
        assert!(!is_h_minimal(&b, &top, &BTreeSet::from([q])));
        let mir2 = enumerate_mirs(&b)
            .unwrap()
            .into_iter()
            .find(|m| m.pairs().contains(&q))
            .unwrap();
        assert!(is_h_minimal(&b, &mir2, &BTreeSet::from([q, r])));
    }

    #[test]
    fn duality_holds_on_examples() {
        for text in ["p & q\n!p & r\n!q | !r", "p & q\nq | r", ""] {
            let b = Base::parse(text).unwrap();
            let report = verify_duality(&b, Caps::default()).unwrap();
            assert!(report.passed(), "{text}: {report:?}");
        }
    }

    #[test]
    fn closure_of_cmcr_hitting_set_can_overshoot_the_mir() {
        // p, !p, !p | q: the hitting set {p1~p3, p2~p3} closes to the
        // inconsistent canonical relation, which strictly contains the MIR p1~p2
        let b = Base::parse("p\n!p\n!p | q").unwrap();
        let report = verify_duality(&b, Caps::default()).unwrap();
        assert!(report.mcr_if_holds() && report.mcr_only_if_holds());
        assert!(report.mir_only_if_holds());
        assert!(!report.mir_if_holds());
        assert_eq!(report.mir_counterexamples.len(), 1);
        let c = &report.mir_counterexamples[0];
        assert_eq!(c.relation, canonical_relation(&b));
        assert_eq!(
            c.witness,
            Some(BTreeSet::from([(OccId(0), OccId(2)), (OccId(1), OccId(2))]))
        );
    }

    #[test]
    fn consistent_base_degenerate_convention() {
        let b = Base::parse("p & q").unwrap();
        let report = verify_duality(&b, Caps::default()).unwrap();
        assert_eq!(report.mir_hitting_sets, vec![BTreeSet::new()]);
        assert!(report.cmcr_hitting_sets.is_empty());
        assert_eq!(report.mcr_count, 1);
    }
}
