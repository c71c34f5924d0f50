//! Seeded randomized suites shared by the core tests and the acceptance run.
//!
//! Each suite returns one [`Tally`] per checked statement. A tally records
//! how many instances were checked and keeps the first few failures so a
//! red line can be explained without rerunning anything.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use occlogic::duality::{minimal_hitting_sets, verify_duality};
use occlogic::lpm::{
    is_lpm_model, lpm_eval, lpm_from_o_interp, mcr_from_lpm, minimal_lpm_models, o_interp_from_lpm,
    LpmInterpretation, Truth,
};
use occlogic::osem::{
    a_minimal_o_models, b_minimal_o_models, diff_profile, o_models_of_relation, relation_of,
    OInterpretation,
};
use occlogic::relations::{bmcrs_among, omis_of, Lattice, Pair};
use occlogic::{Base, Caps, Formula, OccRelation, Polarity, Relation, Session};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{
    brute_a_minimal, brute_b_minimal, brute_minimal_hitting_sets, brute_minimal_lpm, brute_mises,
    classically_entails, eval, eval3, o_model_masks, random_base, random_formula, random_query,
    satisfiable, BruteLattice, GenConfig, Lpm3, PairSet, VARS,
};

const KEPT_FAILURES: usize = 3;

/// Outcome of one randomized statement.
#[derive(Debug, Clone)]
pub struct Tally {
    pub name: &'static str,
    pub checked: usize,
    pub failed: usize,
    pub examples: Vec<String>,
}

impl Tally {
    pub fn new(name: &'static str) -> Tally {
        Tally {
            name,
            checked: 0,
            failed: 0,
            examples: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.examples.len() < KEPT_FAILURES {
                self.examples.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} checked, {} failed",
            self.name, self.checked, self.failed
        )?;
        for e in &self.examples {
            write!(f, "\n    {e}")?;
        }
        Ok(())
    }
}

/// Looks a tally up by name.
pub fn tally<'a>(tallies: &'a [Tally], name: &str) -> &'a Tally {
    tallies
        .iter()
        .find(|t| t.name == name)
        .unwrap_or_else(|| panic!("no tally named {name}"))
}

fn show(base: &Base) -> String {
    let fs: Vec<String> = base.surface().iter().map(|f| f.to_string()).collect();
    format!("{{{}}}", fs.join(", "))
}

fn pair_set(pairs: &BTreeSet<Pair>) -> PairSet {
    pairs.iter().map(|(a, b)| (a.0, b.0)).collect()
}

fn pairs_of(rel: &OccRelation) -> PairSet {
    pair_set(&rel.pairs())
}

/// True when every occurrence with a partner has a partner of the other
/// polarity, i.e. every non-singleton block mixes polarities.
fn bipolar(pairs: &PairSet, positive: &[bool]) -> bool {
    let mut has_other: BTreeMap<usize, bool> = BTreeMap::new();
    for &(x, y) in pairs {
        let mixed = positive[x] != positive[y];
        *has_other.entry(x).or_default() |= mixed;
        *has_other.entry(y).or_default() |= mixed;
    }
    has_other.values().all(|&b| b)
}

fn closure(n: usize, h: &PairSet, var_of: &[usize]) -> PairSet {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for &(x, y) in h {
        let (a, b) = (find(&mut parent, x), find(&mut parent, y));
        parent[a] = b;
    }
    let mut out = PairSet::new();
    for x in 0..n {
        for y in x + 1..n {
            if var_of[x] == var_of[y] && find(&mut parent, x) == find(&mut parent, y) {
                out.insert((x, y));
            }
        }
    }
    out
}

/// `pairs` avoids `h` and merging any two of its blocks of one variable
/// would relate some pair of `h`.
fn h_maximal(labels: &[usize], var_of: &[usize], pairs: &PairSet, h: &PairSet) -> bool {
    if !pairs.is_disjoint(h) {
        return false;
    }
    let mut blocks: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (o, (&l, &v)) in labels.iter().zip(var_of).enumerate() {
        blocks.entry((v, l)).or_default().push(o);
    }
    let keys: Vec<(usize, usize)> = blocks.keys().copied().collect();
    for (i, a) in keys.iter().enumerate() {
        for b in &keys[i + 1..] {
            if a.0 != b.0 {
                continue;
            }
            let meets = blocks[a]
                .iter()
                .any(|&x| blocks[b].iter().any(|&y| h.contains(&(x.min(y), x.max(y)))));
            if !meets {
                return false;
            }
        }
    }
    true
}

fn generate(seed: u64, count: usize, cfg: &GenConfig) -> Vec<Base> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_base(&mut rng, cfg)).collect()
}

/// Relation lattice statements: enumeration against brute force, the
/// consistency criterion, bipolarity, class bounds, MIS/O-MIS, PN minimality,
/// BMCRs, upward closure, hitting sets and both duality statements.
pub fn structure_suite(seed: u64, count: usize) -> Vec<Tally> {
    let caps = Caps::default();
    let mut enumeration = Tally::new("mir/mcr enumeration matches brute force");
    let mut no_mir = Tally::new("consistent iff no mir");
    let mut bipolarity = Tally::new("mir blocks are bipolar");
    let mut eqc = Tally::new("at most two classes per variable in an mcr");
    let mut mis = Tally::new("every mis is an o-mis");
    let mut mises = Tally::new("mis enumeration matches brute force");
    let mut unique = Tally::new("consistent base has the canonical relation as sole mcr");
    let mut upward = Tally::new("inconsistency is upward closed");
    let mut pn_only_if = Tally::new("mirs are pn-minimal");
    let mut pn_if_bipolar = Tally::new("bipolar pn-minimal inconsistent relations are mirs");
    let mut pn_if = Tally::new("pn-minimal inconsistent relations are mirs");
    let mut bmcr = Tally::new("bmcrs match pn-maximality over all consistent relations");
    let mut hitting = Tally::new("minimal hitting sets match brute force");
    let mut mcr_only_if = Tally::new("duality: mcrs are h-maximal");
    let mut mcr_if = Tally::new("duality: h-maximal relations are mcrs");
    let mut mir_only_if = Tally::new("duality: mirs are h-minimal");
    let mut mir_if = Tally::new("duality: h-minimal relations are mirs");
    let mut report_agrees = Tally::new("duality report matches brute force");

    for base in generate(seed, count, &GenConfig::default()) {
        let lat = Lattice::new(&base, caps);
        let brute = BruteLattice::new(&base);
        let n = base.occurrences().len();
        let var_of: Vec<usize> = (0..n).map(|i| base.var_of(occlogic::OccId(i))).collect();
        let mirs = lat.mirs().expect("within caps");
        let mcrs = lat.mcrs().expect("within caps");
        let lib_mirs: BTreeSet<PairSet> = mirs.iter().map(pairs_of).collect();
        let lib_mcrs: BTreeSet<PairSet> = mcrs.iter().map(pairs_of).collect();
        let brute_mirs = brute.mirs();
        let brute_mcrs = brute.mcrs();

        enumeration.check(lib_mirs == brute_mirs && lib_mcrs == brute_mcrs, || {
            format!(
                "{}: mirs {:?} vs {:?}, mcrs {:?} vs {:?}",
                show(&base),
                lib_mirs,
                brute_mirs,
                lib_mcrs,
                brute_mcrs
            )
        });

        let consistent = satisfiable(base.surface());
        no_mir.check(consistent == mirs.is_empty(), || {
            format!("{}: {} mirs", show(&base), mirs.len())
        });

        for m in &mirs {
            let ok = m.blocks().filter(|b| b.len() > 1).all(|b| {
                b.iter().any(|&o| base.polarity(o) == Polarity::Positive)
                    && b.iter().any(|&o| base.polarity(o) == Polarity::Negative)
            });
            bipolarity.check(ok, || format!("{}: {}", show(&base), m.display(&base)));
        }

        for m in &mcrs {
            let ok = (0..base.variables().len()).all(|v| m.var_blocks(v).len() <= 2);
            eqc.check(ok, || format!("{}: {}", show(&base), m.display(&base)));
        }

        let omises: BTreeSet<BTreeSet<usize>> = mirs.iter().map(|m| omis_of(&base, m)).collect();
        let classical = brute_mises(&base);
        for s in &classical {
            mis.check(omises.contains(s), || {
                format!("{}: mis {:?} not among {:?}", show(&base), s, omises)
            });
        }
        let lib_mises: BTreeSet<BTreeSet<usize>> =
            lat.mises().expect("within caps").into_iter().collect();
        mises.check(lib_mises == classical, || {
            format!("{}: {:?} vs {:?}", show(&base), lib_mises, classical)
        });

        if consistent {
            unique.check(
                lib_mcrs.len() == 1 && lib_mcrs.contains(brute.canonical()),
                || format!("{}: {:?}", show(&base), lib_mcrs),
            );
        }

        let verdict: HashMap<&PairSet, bool> = brute
            .relations
            .iter()
            .map(|r| (&r.pairs, r.consistent))
            .collect();
        for r in brute.relations.iter().filter(|r| !r.consistent).take(40) {
            let rel = OccRelation::from_labels(&base, &r.labels);
            for c in rel.coarsenings() {
                let cp = pairs_of(&c);
                upward.check(!verdict[&cp], || {
                    format!("{}: {:?} above {:?}", show(&base), cp, r.pairs)
                });
            }
        }

        let by_pn = brute.mirs_by_pn();
        for m in &brute_mirs {
            pn_only_if.check(by_pn.contains(m), || format!("{}: {:?}", show(&base), m));
        }
        for r in &by_pn {
            pn_if.check(brute_mirs.contains(r), || {
                format!("{}: {:?} is pn-minimal, not a mir", show(&base), r)
            });
            if bipolar(r, &brute.positive) {
                pn_if_bipolar.check(brute_mirs.contains(r), || {
                    format!("{}: {:?}", show(&base), r)
                });
            }
        }

        let lib_bmcrs: BTreeSet<PairSet> = bmcrs_among(&base, &mcrs).iter().map(pairs_of).collect();
        let brute_bmcrs = brute.bmcrs();
        bmcr.check(lib_bmcrs == brute_bmcrs, || {
            format!("{}: {:?} vs {:?}", show(&base), lib_bmcrs, brute_bmcrs)
        });

        let mir_sets: Vec<PairSet> = brute_mirs.iter().cloned().collect();
        let canonical = brute.canonical().clone();
        let cmcr_sets: Vec<PairSet> = brute_mcrs
            .iter()
            .map(|m| canonical.difference(m).copied().collect())
            .collect();
        let small = |sets: &[PairSet]| sets.iter().flatten().collect::<BTreeSet<_>>().len() <= 16;
        let mir_hs: Vec<PairSet> = if small(&mir_sets) {
            let lib = minimal_hitting_sets(&mir_sets).expect("mirs are nonempty");
            let want = brute_minimal_hitting_sets(&mir_sets);
            hitting.check(lib == want, || {
                format!("{}: {:?} vs {:?}", show(&base), lib, want)
            });
            want
        } else {
            minimal_hitting_sets(&mir_sets).expect("mirs are nonempty")
        };
        let cmcr_hs: Vec<PairSet> = if consistent {
            Vec::new()
        } else if small(&cmcr_sets) {
            let lib = minimal_hitting_sets(&cmcr_sets).expect("c-mcrs are nonempty");
            let want = brute_minimal_hitting_sets(&cmcr_sets);
            hitting.check(lib == want, || {
                format!("{}: {:?} vs {:?}", show(&base), lib, want)
            });
            want
        } else {
            minimal_hitting_sets(&cmcr_sets).expect("c-mcrs are nonempty")
        };

        let mut mcr_wrong = BTreeSet::new();
        let mut mir_wrong = BTreeSet::new();
        for r in &brute.relations {
            let is_mcr = brute_mcrs.contains(&r.pairs);
            let dual = mir_hs
                .iter()
                .any(|h| h_maximal(&r.labels, &var_of, &r.pairs, h));
            if is_mcr {
                mcr_only_if.check(dual, || format!("{}: mcr {:?}", show(&base), r.pairs));
            }
            if dual {
                mcr_if.check(is_mcr, || {
                    format!("{}: {:?} is h-maximal", show(&base), r.pairs)
                });
            }
            if is_mcr != dual {
                mcr_wrong.insert(r.pairs.clone());
            }

            let is_mir = brute_mirs.contains(&r.pairs);
            let dual = cmcr_hs.iter().find(|h| closure(n, h, &var_of) == r.pairs);
            if is_mir {
                mir_only_if.check(dual.is_some(), || {
                    format!("{}: mir {:?}", show(&base), r.pairs)
                });
            }
            if let Some(h) = dual {
                mir_if.check(is_mir, || {
                    format!("{}: {:?} closes {:?}", show(&base), h, r.pairs)
                });
            }
            if is_mir != dual.is_some() {
                mir_wrong.insert(r.pairs.clone());
            }
        }
        let report = verify_duality(&base, caps).expect("within caps");
        let lib_mcr_wrong: BTreeSet<PairSet> = report
            .mcr_counterexamples
            .iter()
            .map(|c| pairs_of(&c.relation))
            .collect();
        let lib_mir_wrong: BTreeSet<PairSet> = report
            .mir_counterexamples
            .iter()
            .map(|c| pairs_of(&c.relation))
            .collect();
        report_agrees.check(
            lib_mcr_wrong == mcr_wrong && lib_mir_wrong == mir_wrong,
            || {
                format!(
                    "{}: {:?}/{:?} vs {:?}/{:?}",
                    show(&base),
                    lib_mcr_wrong,
                    lib_mir_wrong,
                    mcr_wrong,
                    mir_wrong
                )
            },
        );
    }

    vec![
        enumeration,
        no_mir,
        bipolarity,
        eqc,
        mis,
        mises,
        unique,
        upward,
        pn_only_if,
        pn_if_bipolar,
        pn_if,
        bmcr,
        hitting,
        mcr_only_if,
        mcr_if,
        mir_only_if,
        mir_if,
        report_agrees,
    ]
}

/// Model-level agreement: o-model filters and minimal LP_m models against
/// exhaustive enumeration.
pub fn model_suite(seed: u64, count: usize) -> Vec<Tally> {
    let caps = Caps::default();
    let mut a_min = Tally::new("a-minimal o-models match brute force");
    let mut b_min = Tally::new("b-minimal o-models match brute force");
    let mut lpm = Tally::new("minimal lp_m models match brute force");
    for base in generate(seed, count, &GenConfig::default()) {
        let vals = |ms: Vec<OInterpretation>| -> Vec<Vec<bool>> {
            let mut v: Vec<Vec<bool>> = ms.into_iter().map(|m| m.values().to_vec()).collect();
            v.sort();
            v
        };
        let got = vals(a_minimal_o_models(&base, caps).expect("within caps"));
        let want = brute_a_minimal(&base);
        a_min.check(got == want, || {
            format!("{}: {:?} vs {:?}", show(&base), got, want)
        });
        let got = vals(b_minimal_o_models(&base, caps).expect("within caps"));
        let want = brute_b_minimal(&base);
        b_min.check(got == want, || {
            format!("{}: {:?} vs {:?}", show(&base), got, want)
        });

        let got: BTreeSet<Lpm3> = minimal_lpm_models(&base, caps)
            .expect("within caps")
            .iter()
            .map(to_lpm3)
            .collect();
        let want = brute_minimal_lpm(&base);
        lpm.check(got == want, || {
            format!("{}: {:?} vs {:?}", show(&base), got, want)
        });
    }
    vec![a_min, b_min, lpm]
}

fn to_lpm3(l: &LpmInterpretation) -> Lpm3 {
    l.iter()
        .map(|(k, t)| {
            let c = match t {
                Truth::False => 0,
                Truth::True => 1,
                Truth::Both => 2,
            };
            (k.to_string(), c)
        })
        .collect()
}

fn from_lpm3(l: &Lpm3) -> LpmInterpretation {
    LpmInterpretation::new(
        l.iter()
            .map(|(k, &c)| {
                let t = match c {
                    0 => Truth::False,
                    1 => Truth::True,
                    _ => Truth::Both,
                };
                (k.clone(), t)
            })
            .collect(),
    )
}

/// Inclusions between the inference relations, each stated as
/// `(name, weaker, stronger)`: whatever `weaker` accepts, `stronger` accepts.
pub const INCLUSIONS: [(&str, Relation, Relation); 11] = [
    ("m2 implies m1", Relation::M2, Relation::M1),
    ("m1 implies mb1", Relation::M1, Relation::MB1),
    ("m2 implies mb2", Relation::M2, Relation::MB2),
    ("mb2 implies mb1", Relation::MB2, Relation::MB1),
    ("m1 implies a1", Relation::M1, Relation::A1),
    ("a1 implies b1", Relation::A1, Relation::B1),
    ("mb1 implies b1", Relation::MB1, Relation::B1),
    ("m1 implies lpm", Relation::M1, Relation::Lpm),
    ("a1 implies lpm", Relation::A1, Relation::Lpm),
    ("a2 implies m2", Relation::A2, Relation::M2),
    ("b2 implies mb2", Relation::B2, Relation::MB2),
];

/// Equalities, checked as the reverse inclusions of the last two entries.
pub const REVERSES: [(&str, Relation, Relation); 2] = [
    ("m2 implies a2", Relation::M2, Relation::A2),
    ("mb2 implies b2", Relation::MB2, Relation::B2),
];

/// Random base/query pairs under every relation at once.
pub fn containment_suite(seed: u64, count: usize) -> Vec<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = GenConfig::default();
    let mut tallies: Vec<Tally> = INCLUSIONS
        .iter()
        .chain(&REVERSES)
        .map(|(n, _, _)| Tally::new(n))
        .collect();
    let mut classical = Tally::new("classical verdict matches truth tables");
    let mut collapse = Tally::new("consistent base: every relation is classical");
    let mut lpm_witness = Tally::new("lpm counter-models are minimal models refuting the query");
    for _ in 0..count {
        let base = random_base(&mut rng, &cfg);
        let query = random_query(&mut rng, &base);
        let session = Session::new(&base, Caps::default());
        let answers: BTreeMap<Relation, bool> = Relation::ALL
            .iter()
            .map(|&r| (r, session.entails(r, &query).expect("within caps").holds()))
            .collect();
        let ctx = || format!("{} |- {}: {:?}", show(&base), query, answers);
        for (t, (_, weak, strong)) in tallies.iter_mut().zip(INCLUSIONS.iter().chain(&REVERSES)) {
            if answers[weak] {
                t.check(answers[strong], ctx);
            }
        }
        let truth = classically_entails(base.surface(), &query);
        classical.check(truth == answers[&Relation::Classical], ctx);
        if satisfiable(base.surface()) {
            collapse.check(answers.values().all(|&v| v == truth), ctx);
        }
        if let occlogic::Answer::Lpm(v) =
            session.entails(Relation::Lpm, &query).expect("within caps")
        {
            if let Some(m) = v.counter_model {
                let ok = is_lpm_model(&m, base.formulas()) && !lpm_eval(&m, &query).one;
                lpm_witness.check(ok, ctx);
            }
        }
    }
    tallies.push(classical);
    tallies.push(collapse);
    tallies.push(lpm_witness);
    tallies
}

fn random_valuation<R: Rng>(rng: &mut R) -> BTreeMap<String, bool> {
    VARS.iter()
        .map(|v| (v.to_string(), rng.gen_bool(0.5)))
        .collect()
}

fn random_lpm<R: Rng>(rng: &mut R, vars: &[&str]) -> LpmInterpretation {
    let ts = [Truth::False, Truth::True, Truth::Both];
    LpmInterpretation::new(
        vars.iter()
            .map(|v| (v.to_string(), ts[rng.gen_range(0..3)]))
            .collect(),
    )
}

fn pure(f: &Formula, var: &str) -> Option<Polarity> {
    let pols = f.polarities();
    let set = pols.get(var)?;
    if set.len() == 1 {
        set.iter().next().copied()
    } else {
        None
    }
}

/// The pure-variable statement: flipping a pure variable in its own
/// direction preserves models and, the other way, counter-models.
pub fn pure_variable_suite(seed: u64, trials: usize) -> Vec<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::new("pure variables");
    let mut attempts = 0;
    while t.checked < trials {
        attempts += 1;
        assert!(
            attempts < trials * 50,
            "generator rarely yields pure variables"
        );
        let leaves = rng.gen_range(1..=6);
        let f = random_formula(&mut rng, &VARS, leaves);
        let w = random_valuation(&mut rng);
        let holds = |w: &BTreeMap<String, bool>| eval(&f, &|v| w[v]);
        for var in f.variables() {
            let Some(pol) = pure(&f, &var) else { continue };
            let model = holds(&w);
            // positive: raise models, lower counter-models; negative: the reverse
            let toward = (pol == Polarity::Positive) == model;
            let mut w2 = w.clone();
            w2.insert(var.clone(), toward);
            t.check(holds(&w2) == model, || {
                format!("{f} with {var}={toward} from {w:?}")
            });
        }
    }
    vec![t]
}

/// Gluts only add truth values: gluts and the four occurrence replacement
/// clauses.
pub fn lpm_formula_suite(seed: u64, trials: usize) -> Vec<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gluts = Tally::new("gluts never remove truth values");
    let mut replacement = Tally::new("occurrence replacement keeps truth values");
    let mut agree = Tally::new("lp_m evaluation matches oracle");
    let fresh = Formula::var("z");
    while gluts.checked < trials || replacement.checked < trials {
        let leaves = rng.gen_range(1..=6);
        let f = random_formula(&mut rng, &VARS, leaves);
        let lam = random_lpm(&mut rng, &VARS);
        let v = lpm_eval(&lam, &f);
        let oracle = eval3(&f, &|x| {
            let s = lam.get(x).values();
            (s.zero, s.one)
        });
        agree.check((v.zero, v.one) == oracle, || format!("{f} under {lam}"));

        for p in f.variables() {
            let w = lpm_eval(&lam.with(&p, Truth::Both), &f);
            gluts.check((!v.zero || w.zero) && (!v.one || w.one), || {
                format!("{f} under {lam}, glut {p}")
            });
        }

        let core = f.desugar();
        let sites = core.sites();
        let site = &sites[rng.gen_range(0..sites.len())];
        let g = core
            .substitute_occurrence(&site.var, site.index, &fresh)
            .expect("site exists");
        let with_one = lpm_eval(&lam.with("z", Truth::True), &g);
        let with_zero = lpm_eval(&lam.with("z", Truth::False), &g);
        let positive = site.polarity == Polarity::Positive;
        let describe = || format!("{core}, occurrence {}#{} in {lam}", site.var, site.index);
        if positive && v.one {
            replacement.check(with_one.one, describe);
        }
        if !positive && v.zero {
            replacement.check(with_one.zero, describe);
        }
        if !positive && v.one {
            replacement.check(with_zero.one, describe);
        }
        if positive && v.zero {
            replacement.check(with_zero.zero, describe);
        }
    }
    vec![gluts, replacement, agree]
}

/// The bridges between o-models, MCRs and minimal LP_m models, one random
/// base per trial.
pub fn bridge_suite(seed: u64, trials: usize) -> Vec<Tally> {
    let caps = Caps::default();
    let cfg = GenConfig {
        max_occurrences: 8,
        max_per_var: 5,
        ..GenConfig::default()
    };
    let mut induced = Tally::new("every o-model induces an lp_m model");
    let mut to_mcr = Tally::new("minimal lp_m models induce mcrs");
    let mut glut_image = Tally::new("minimal lp_m models give a-minimal o-models");
    let mut glut_source = Tally::new("a-minimal o-models come from minimal lp_m models");
    let mut to_relation = Tally::new("a-minimal o-models induce mcrs");
    let mut from_relation = Tally::new("o-models of mcrs are a-minimal");

    for base in generate(seed, trials, &cfg) {
        let lat = Lattice::new(&base, caps);
        let mcrs = lat.mcrs().expect("within caps");
        let mcr_set: BTreeSet<PairSet> = mcrs.iter().map(pairs_of).collect();
        let n = base.occurrences().len();

        let mut induced_ok = true;
        for m in o_model_masks(&base) {
            let mu = OInterpretation::new(&base, (0..n).map(|i| m >> i & 1 == 1).collect())
                .expect("shape");
            let lam = lpm_from_o_interp(&base, &mu);
            induced_ok &= base.surface().iter().all(|f| lpm_eval(&lam, f).one);
        }
        induced.check(induced_ok, || show(&base));

        let minimal = minimal_lpm_models(&base, caps).expect("within caps");
        let mcr_ok = minimal.iter().all(|l| match mcr_from_lpm(&base, l) {
            Ok(r) => mcr_set.contains(&pairs_of(&r)),
            Err(_) => false,
        });
        to_mcr.check(mcr_ok, || show(&base));

        let a_min: BTreeSet<Vec<bool>> = brute_a_minimal(&base).into_iter().collect();
        let brute_min = brute_minimal_lpm(&base);
        let vars = base.variables();
        let mut only_if_ok = true;
        let mut if_bad = None;
        for code in 0..3u32.pow(vars.len() as u32) {
            let mut c = code;
            let l3: Lpm3 = vars
                .iter()
                .map(|v| {
                    let t = (c % 3) as u8;
                    c /= 3;
                    (v.clone(), t)
                })
                .collect();
            let lam = from_lpm3(&l3);
            let is_min = brute_min.contains(&l3);
            let mu_a_min = a_min.contains(o_interp_from_lpm(&base, &lam).values());
            only_if_ok &= !is_min || mu_a_min;
            if mu_a_min && !is_min && if_bad.is_none() {
                if_bad = Some(lam.to_string());
            }
        }
        glut_image.check(only_if_ok, || show(&base));
        glut_source.check(if_bad.is_none(), || {
            format!(
                "{}: {} is not minimal",
                show(&base),
                if_bad.clone().unwrap()
            )
        });

        let a_models = a_minimal_o_models(&base, caps).expect("within caps");
        let canonical = pairs_of(&OccRelation::canonical(&base));
        let relation_ok = a_models.iter().all(|mu| {
            let rel = relation_of(&base, mu);
            let expected: PairSet = canonical
                .difference(&pair_set(&diff_profile(&base, mu).a))
                .copied()
                .collect();
            pairs_of(&rel) == expected && mcr_set.contains(&expected)
        });
        to_relation.check(relation_ok, || show(&base));

        let a_set: BTreeSet<&[bool]> = a_models.iter().map(|m| m.values()).collect();
        let models_ok = mcrs.iter().all(|r| {
            o_models_of_relation(&base, r, caps)
                .expect("within caps")
                .iter()
                .all(|m| a_set.contains(m.values()))
        });
        from_relation.check(models_ok, || show(&base));
    }
    vec![
        induced,
        to_mcr,
        glut_image,
        glut_source,
        to_relation,
        from_relation,
    ]
}

pub const K2: &str = "p\n!p\n!p | q";
pub const SEP: &str = "p\n!p\nq | r";
pub const SEP_QUERY: &str = "(!p & (!q | !r)) | (p & q & r)";
pub const LIAR: &str = "p\n!p";

/// Documented separations as `(base, query, accepted by, rejected by)`.
pub const SEPARATIONS: [(&str, &str, Relation, Relation); 18] = [
    (K2, "p", Relation::M1, Relation::M2),
    (K2, "p", Relation::MB1, Relation::MB2),
    (K2, "p", Relation::M1, Relation::MB2),
    (K2, "q", Relation::MB1, Relation::M1),
    (K2, "q", Relation::MB2, Relation::M2),
    (K2, "q", Relation::MB2, Relation::M1),
    (LIAR, "p & !p", Relation::Lpm, Relation::M1),
    (K2, "q", Relation::MB2, Relation::Lpm),
    (K2, "q", Relation::MB1, Relation::Lpm),
    (LIAR, "p & !p", Relation::Lpm, Relation::MB1),
    (SEP, SEP_QUERY, Relation::A1, Relation::M1),
    (SEP, SEP_QUERY, Relation::B1, Relation::MB1),
    (K2, "q", Relation::B1, Relation::A1),
    (SEP, SEP_QUERY, Relation::A1, Relation::MB1),
    (K2, "q", Relation::MB2, Relation::A1),
    (LIAR, "p & !p", Relation::Lpm, Relation::A1),
    (LIAR, "p & !p", Relation::Lpm, Relation::B1),
    (K2, "q", Relation::B1, Relation::Lpm),
];

/// Every documented separation, one check each.
pub fn separation_suite() -> Tally {
    let mut t = Tally::new("documented separations");
    for (base, query, yes, no) in SEPARATIONS {
        let b = Base::parse(base).expect("fixture parses");
        let q = occlogic::parse_formula(query).expect("fixture parses");
        let s = Session::new(&b, Caps::default());
        let verdict = |r: Relation| s.entails(r, &q).expect("within caps").holds();
        t.check(verdict(yes) && !verdict(no), || {
            format!("{} |- {query}: {yes} yes, {no} no", show(&b))
        });
    }
    t
}
