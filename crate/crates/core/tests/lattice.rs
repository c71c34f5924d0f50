use std::collections::BTreeSet;

use occlogic::duality::verify_duality;
use occlogic::relations::{Lattice, OccRelation};
use occlogic::{Base, Caps, OccId};
use occlogic_testkit::suites::{structure_suite, tally, Tally};
use occlogic_testkit::BruteLattice;

const SEED: u64 = 0x5eed_0001;
const BASES: usize = 250;

fn suite() -> Vec<Tally> {
    let tallies = structure_suite(SEED, BASES);
    for t in &tallies {
        println!("{t}");
    }
    tallies
}

fn assert_clean(tallies: &[Tally], names: &[&str]) {
    for name in names {
        let t = tally(tallies, name);
        assert!(t.checked > 0, "{name} never exercised");
        assert!(t.passed(), "{t}");
    }
}

#[test]
fn lattice_agrees_with_brute_force() {
    let tallies = suite();
    assert_clean(
        &tallies,
        &[
            "mir/mcr enumeration matches brute force",
            "consistent iff no mir",
            "mir blocks are bipolar",
            "at most two classes per variable in an mcr",
            "every mis is an o-mis",
            "mis enumeration matches brute force",
            "consistent base has the canonical relation as sole mcr",
            "inconsistency is upward closed",
            "mirs are pn-minimal",
            "bipolar pn-minimal inconsistent relations are mirs",
            "bmcrs match pn-maximality over all consistent relations",
            "minimal hitting sets match brute force",
            "duality: mcrs are h-maximal",
            "duality: mirs are h-minimal",
            "duality report matches brute force",
        ],
    );
}

fn pairs(xs: &[(usize, usize)]) -> BTreeSet<(OccId, OccId)> {
    xs.iter().map(|&(a, b)| (OccId(a), OccId(b))).collect()
}

#[test]
fn h_maximal_relation_can_miss_a_consistent_coarsening() {
    // p p p q q; the mirs are {p1,p2} and {p2,p3}+{q1,q2}
    let base = Base::parse("p\n!p\n(p | q) & !q").unwrap();
    let report = verify_duality(&base, Caps::default()).unwrap();
    assert!(report.mcr_only_if_holds());
    assert!(!report.mcr_if_holds());
    let bad = report
        .mcr_counterexamples
        .iter()
        .find(|c| c.relation.pairs() == pairs(&[(0, 2)]))
        .expect("p1~p3 alone is h-maximal");
    assert!(bad.dual && !bad.enumerated);
    assert_eq!(bad.witness.as_ref().unwrap(), &pairs(&[(0, 1), (3, 4)]));

    let lattice = Lattice::new(&base, Caps::default());
    let bigger = OccRelation::closure(&base, pairs(&[(0, 2), (3, 4)])).unwrap();
    assert!(lattice.is_consistent(&bigger));
    assert!(lattice.is_mcr(&bigger));
}

#[test]
fn h_minimal_relation_can_overshoot_every_mir() {
    let base = Base::parse("p\n!p\n!p | q").unwrap();
    let report = verify_duality(&base, Caps::default()).unwrap();
    assert!(report.mir_only_if_holds());
    assert!(!report.mir_if_holds());
    let bad = &report.mir_counterexamples[0];
    assert_eq!(bad.relation, OccRelation::canonical(&base));
    assert!(bad.dual && !bad.enumerated);
}

#[test]
fn pn_minimality_admits_relations_with_unipolar_blocks() {
    // merging the two positive q occurrences leaves PN unchanged
    let base = Base::parse("p\n!p\nq\nq").unwrap();
    let brute = BruteLattice::new(&base);
    let by_pn = brute.mirs_by_pn();
    let mirs = brute.mirs();
    let extra: Vec<_> = by_pn.difference(&mirs).collect();
    assert_eq!(extra.len(), 1);
    assert_eq!(extra[0], &[(0, 1), (2, 3)].into_iter().collect());
}

#[test]
fn suite_is_reproducible() {
    let a: Vec<(usize, usize)> = structure_suite(7, 20)
        .iter()
        .map(|t| (t.checked, t.failed))
        .collect();
    let b: Vec<(usize, usize)> = structure_suite(7, 20)
        .iter()
        .map(|t| (t.checked, t.failed))
        .collect();
    assert_eq!(a, b);
}
