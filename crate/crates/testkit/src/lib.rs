//! Random bases and brute-force oracles for the occlogic test suites.
//!
//! The oracles only use the parsed formula trees and the occurrence table of
//! a [`Base`]; every verdict is recomputed by truth tables and exhaustive
//! enumeration, never through the library's solver or lattice code.

pub mod suites;

use std::collections::{BTreeMap, BTreeSet};

use occlogic::{Base, Formula};
use rand::Rng;

pub const VARS: [&str; 4] = ["p", "q", "r", "s"];

/// Size limits for [`random_base`].
#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub max_vars: usize,
    pub max_formulas: usize,
    pub max_occurrences: usize,
    pub max_per_var: usize,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            max_vars: 4,
            max_formulas: 4,
            max_occurrences: 10,
            max_per_var: 6,
        }
    }
}

/// A random formula over `vars` with at most `leaves` variable leaves in its
/// surface form. `<->` is rare since it doubles occurrences.
pub fn random_formula<R: Rng>(rng: &mut R, vars: &[&str], leaves: usize) -> Formula {
    if leaves <= 1 || rng.gen_bool(0.25) {
        let v = Formula::var(vars[rng.gen_range(0..vars.len())]);
        return if rng.gen_bool(0.4) {
            Formula::not(v)
        } else {
            v
        };
    }
    if rng.gen_bool(0.15) {
        return Formula::not(random_formula(rng, vars, leaves));
    }
    let left = rng.gen_range(1..leaves);
    let a = random_formula(rng, vars, left);
    let b = random_formula(rng, vars, leaves - left);
    match rng.gen_range(0..20) {
        0..=7 => Formula::and(a, b),
        8..=14 => Formula::or(a, b),
        15..=18 => Formula::implies(a, b),
        _ => Formula::iff(a, b),
    }
}

fn within(base: &Base, cfg: &GenConfig) -> bool {
    base.occurrences().len() <= cfg.max_occurrences
        && (0..base.variables().len()).all(|v| base.occurrences_of(v).len() <= cfg.max_per_var)
}

/// A random base within `cfg`. About half the time it starts with a literal
/// and a formula built on its negation, which makes inconsistency common.
pub fn random_base<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Base {
    loop {
        let nvars = rng.gen_range(1..=cfg.max_vars.min(VARS.len()));
        let vars = &VARS[..nvars];
        let nform = rng.gen_range(1..=cfg.max_formulas);
        let mut budget = cfg.max_occurrences;
        let mut fs = Vec::new();
        if nform >= 2 && rng.gen_bool(0.5) {
            let x = Formula::var(vars[rng.gen_range(0..nvars)]);
            let leaves = rng.gen_range(0..=2);
            let neg = Formula::not(x.clone());
            let second = if leaves == 0 {
                neg
            } else if rng.gen_bool(0.5) {
                Formula::or(neg, random_formula(rng, vars, leaves))
            } else {
                Formula::and(neg, random_formula(rng, vars, leaves))
            };
            fs.push(x);
            fs.push(second);
            budget = budget.saturating_sub(2 + leaves);
        }
        while fs.len() < nform && budget > 0 {
            let leaves = rng.gen_range(1..=budget.min(4));
            fs.push(random_formula(rng, vars, leaves));
            budget -= leaves;
        }
        let base = Base::new(fs);
        if within(&base, cfg) {
            return base;
        }
    }
}

/// A random query mostly over the base's variables, sometimes mentioning
/// a variable outside it.
pub fn random_query<R: Rng>(rng: &mut R, base: &Base) -> Formula {
    let mut vars: Vec<&str> = base.variables().iter().map(String::as_str).collect();
    if vars.is_empty() || rng.gen_bool(0.2) {
        vars.push("t");
    }
    let leaves = rng.gen_range(1..=4);
    random_formula(rng, &vars, leaves)
}

/// Two-valued evaluation written independently of the library.
pub fn eval(f: &Formula, val: &dyn Fn(&str) -> bool) -> bool {
    match f {
        Formula::Var(v) => val(v),
        Formula::Not(a) => !eval(a, val),
        Formula::And(a, b) => eval(a, val) && eval(b, val),
        Formula::Or(a, b) => eval(a, val) || eval(b, val),
        Formula::Implies(a, b) => !eval(a, val) || eval(b, val),
        Formula::Iff(a, b) => eval(a, val) == eval(b, val),
    }
}

fn all_vars(fs: &[&Formula]) -> Vec<String> {
    let mut s = BTreeSet::new();
    for f in fs {
        s.extend(f.variables());
    }
    s.into_iter().collect()
}

fn assignments(vars: &[String]) -> impl Iterator<Item = BTreeMap<String, bool>> + '_ {
    (0u64..1 << vars.len()).map(move |bits| {
        vars.iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), bits >> i & 1 == 1))
            .collect()
    })
}

pub fn satisfiable(fs: &[Formula]) -> bool {
    let refs: Vec<&Formula> = fs.iter().collect();
    let vars = all_vars(&refs);
    let sat = assignments(&vars).any(|a| fs.iter().all(|f| eval(f, &|v| a[v])));
    sat
}

pub fn classically_entails(premises: &[Formula], goal: &Formula) -> bool {
    let mut refs: Vec<&Formula> = premises.iter().collect();
    refs.push(goal);
    let vars = all_vars(&refs);
    let ok = assignments(&vars)
        .all(|a| !premises.iter().all(|f| eval(f, &|v| a[v])) || eval(goal, &|v| a[v]));
    ok
}

/// Evaluates the core formulas with one value per leaf, leaves numbered in
/// reading order across the base.
fn eval_leaves(f: &Formula, values: u32, next: &mut usize) -> bool {
    match f {
        Formula::Var(_) => {
            let v = values >> *next & 1 == 1;
            *next += 1;
            v
        }
        Formula::Not(a) => !eval_leaves(a, values, next),
        Formula::And(a, b) => {
            let x = eval_leaves(a, values, next);
            let y = eval_leaves(b, values, next);
            x && y
        }
        _ => panic!("base formulas are expected in core form"),
    }
}

/// Every o-model as a bitmask (bit k = value of occurrence k).
pub fn o_model_masks(base: &Base) -> Vec<u32> {
    let n = base.occurrences().len();
    assert!(n <= 24, "oracle is meant for small bases");
    (0u32..1 << n)
        .filter(|&m| {
            let mut next = 0;
            let mut ok = true;
            for f in base.formulas() {
                ok &= eval_leaves(f, m, &mut next);
            }
            assert_eq!(next, n);
            ok
        })
        .collect()
}

/// Set partitions of `0..n` as restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            go(i + 1, n, cur, if b == max { max + 1 } else { max }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut out);
    out
}

/// A compliant relation as its set of related occurrence pairs `(i, j)`,
/// `i < j`, by occurrence index.
pub type PairSet = BTreeSet<(usize, usize)>;

#[derive(Debug, Clone)]
pub struct BruteRelation {
    /// Block label per occurrence, local to its variable.
    pub labels: Vec<usize>,
    pub pairs: PairSet,
    pub consistent: bool,
}

/// Every compliant relation of a base with its consistency verdict.
pub struct BruteLattice {
    pub relations: Vec<BruteRelation>,
    /// Polarity per occurrence, true when positive.
    pub positive: Vec<bool>,
}

impl BruteLattice {
    pub fn new(base: &Base) -> BruteLattice {
        let models = o_model_masks(base);
        let n = base.occurrences().len();
        let per_var: Vec<Vec<usize>> = (0..base.variables().len())
            .map(|v| base.occurrences_of(v).iter().map(|o| o.0).collect())
            .collect();
        let options: Vec<Vec<Vec<usize>>> = per_var
            .iter()
            .map(|occ| set_partitions(occ.len()))
            .collect();

        let mut relations = Vec::new();
        let mut idx = vec![0usize; per_var.len()];
        loop {
            let mut labels = vec![0usize; n];
            for (v, occs) in per_var.iter().enumerate() {
                for (k, &o) in occs.iter().enumerate() {
                    labels[o] = options[v][idx[v]][k];
                }
            }
            let mut pairs = PairSet::new();
            for occs in &per_var {
                for (a, &x) in occs.iter().enumerate() {
                    for &y in &occs[a + 1..] {
                        if labels[x] == labels[y] {
                            pairs.insert((x.min(y), x.max(y)));
                        }
                    }
                }
            }
            let consistent = models
                .iter()
                .any(|&m| pairs.iter().all(|&(x, y)| (m >> x & 1) == (m >> y & 1)));
            relations.push(BruteRelation {
                labels,
                pairs,
                consistent,
            });

            let mut k = 0;
            loop {
                if k == per_var.len() {
                    let positive = base
                        .occurrences()
                        .iter()
                        .map(|o| o.polarity == occlogic::Polarity::Positive)
                        .collect();
                    return BruteLattice {
                        relations,
                        positive,
                    };
                }
                idx[k] += 1;
                if idx[k] < options[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    fn strictly_inside(a: &PairSet, b: &PairSet) -> bool {
        a.len() < b.len() && a.is_subset(b)
    }

    /// Inconsistent relations with no inconsistent relation strictly inside.
    pub fn mirs(&self) -> BTreeSet<PairSet> {
        let bad: Vec<&PairSet> = self
            .relations
            .iter()
            .filter(|r| !r.consistent)
            .map(|r| &r.pairs)
            .collect();
        bad.iter()
            .filter(|r| !bad.iter().any(|o| Self::strictly_inside(o, r)))
            .map(|r| (*r).clone())
            .collect()
    }

    /// Consistent relations with no consistent relation strictly above.
    pub fn mcrs(&self) -> BTreeSet<PairSet> {
        let good: Vec<&PairSet> = self
            .relations
            .iter()
            .filter(|r| r.consistent)
            .map(|r| &r.pairs)
            .collect();
        good.iter()
            .filter(|r| !good.iter().any(|o| Self::strictly_inside(r, o)))
            .map(|r| (*r).clone())
            .collect()
    }

    /// Related (positive, negative) pairs, positive first.
    pub fn pn(&self, pairs: &PairSet) -> PairSet {
        pairs
            .iter()
            .filter(|&&(x, y)| self.positive[x] != self.positive[y])
            .map(|&(x, y)| if self.positive[x] { (x, y) } else { (y, x) })
            .collect()
    }

    /// Inconsistent relations whose PN set has no inconsistent relation's
    /// PN set strictly inside it.
    pub fn mirs_by_pn(&self) -> BTreeSet<PairSet> {
        let bad: Vec<&PairSet> = self
            .relations
            .iter()
            .filter(|r| !r.consistent)
            .map(|r| &r.pairs)
            .collect();
        let pns: Vec<PairSet> = bad.iter().map(|r| self.pn(r)).collect();
        bad.iter()
            .zip(&pns)
            .filter(|(_, pn)| !pns.iter().any(|o| Self::strictly_inside(o, pn)))
            .map(|(r, _)| (*r).clone())
            .collect()
    }

    /// MCRs whose PN set is not strictly inside the PN set of any
    /// consistent relation.
    pub fn bmcrs(&self) -> BTreeSet<PairSet> {
        let good_pns: Vec<PairSet> = self
            .relations
            .iter()
            .filter(|r| r.consistent)
            .map(|r| self.pn(&r.pairs))
            .collect();
        self.mcrs()
            .into_iter()
            .filter(|m| {
                let pn = self.pn(m);
                !good_pns.iter().any(|o| Self::strictly_inside(&pn, o))
            })
            .collect()
    }

    /// The relation relating every same-variable pair.
    pub fn canonical(&self) -> &PairSet {
        self.relations
            .iter()
            .max_by_key(|r| r.pairs.len())
            .map(|r| &r.pairs)
            .unwrap()
    }
}

/// All minimal hitting sets by subset enumeration over the union.
pub fn brute_minimal_hitting_sets<T: Ord + Clone>(collection: &[BTreeSet<T>]) -> Vec<BTreeSet<T>> {
    let universe: Vec<T> = collection
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    assert!(universe.len() <= 20);
    let hits = |mask: u32| {
        collection.iter().all(|s| {
            universe
                .iter()
                .enumerate()
                .any(|(i, e)| mask >> i & 1 == 1 && s.contains(e))
        })
    };
    let hitting: Vec<u32> = (0u32..1 << universe.len()).filter(|&m| hits(m)).collect();
    let mut out: Vec<BTreeSet<T>> = hitting
        .iter()
        .filter(|&&m| !hitting.iter().any(|&o| o != m && o & m == o))
        .map(|&m| {
            universe
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .map(|(_, e)| e.clone())
                .collect()
        })
        .collect();
    out.sort();
    out
}

/// Minimal unsatisfiable subsets of the base, as formula index sets.
pub fn brute_mises(base: &Base) -> BTreeSet<BTreeSet<usize>> {
    let n = base.len();
    let unsat: Vec<u32> = (0u32..1 << n)
        .filter(|&m| {
            let fs: Vec<Formula> = (0..n)
                .filter(|i| m >> i & 1 == 1)
                .map(|i| base.surface()[i].clone())
                .collect();
            !satisfiable(&fs)
        })
        .collect();
    unsat
        .iter()
        .filter(|&&m| !unsat.iter().any(|&o| o != m && o & m == o))
        .map(|&m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn diff_bits(base: &Base, m: u32, bipolar_only: bool) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for a in base.occurrences() {
        for b in base.occurrences() {
            let (x, y) = (a.id().0, b.id().0);
            if x < y
                && a.variable == b.variable
                && (m >> x & 1) != (m >> y & 1)
                && (!bipolar_only || a.polarity != b.polarity)
            {
                out.insert((x, y));
            }
        }
    }
    out
}

/// a-minimal o-models as value vectors, sorted.
pub fn brute_a_minimal(base: &Base) -> Vec<Vec<bool>> {
    let models = o_model_masks(base);
    let diffs: Vec<_> = models.iter().map(|&m| diff_bits(base, m, false)).collect();
    let keep = |i: usize| {
        !diffs
            .iter()
            .any(|d| d.len() < diffs[i].len() && d.is_subset(&diffs[i]))
    };
    to_vectors(
        base,
        models
            .iter()
            .enumerate()
            .filter(|&(i, _)| keep(i))
            .map(|(_, &m)| m),
    )
}

/// b-minimal o-models as value vectors, sorted.
pub fn brute_b_minimal(base: &Base) -> Vec<Vec<bool>> {
    let a: BTreeSet<Vec<bool>> = brute_a_minimal(base).into_iter().collect();
    let models = o_model_masks(base);
    let diffs: Vec<_> = models.iter().map(|&m| diff_bits(base, m, true)).collect();
    let keep = |i: usize| {
        !diffs
            .iter()
            .any(|d| d.len() < diffs[i].len() && d.is_subset(&diffs[i]))
    };
    to_vectors(
        base,
        models
            .iter()
            .enumerate()
            .filter(|&(i, _)| keep(i))
            .map(|(_, &m)| m),
    )
    .into_iter()
    .filter(|v| a.contains(v))
    .collect()
}

fn to_vectors(base: &Base, masks: impl Iterator<Item = u32>) -> Vec<Vec<bool>> {
    let n = base.occurrences().len();
    let mut out: Vec<Vec<bool>> = masks
        .map(|m| (0..n).map(|i| m >> i & 1 == 1).collect())
        .collect();
    out.sort();
    out
}

/// Three-valued value sets as `(may be 0, may be 1)`.
pub fn eval3(f: &Formula, val: &dyn Fn(&str) -> (bool, bool)) -> (bool, bool) {
    let and = |(a0, a1): (bool, bool), (b0, b1): (bool, bool)| (a0 || b0, a1 && b1);
    let not = |(a0, a1): (bool, bool)| (a1, a0);
    match f {
        Formula::Var(v) => val(v),
        Formula::Not(a) => not(eval3(a, val)),
        Formula::And(a, b) => and(eval3(a, val), eval3(b, val)),
        Formula::Or(a, b) => not(and(not(eval3(a, val)), not(eval3(b, val)))),
        Formula::Implies(a, b) => not(and(eval3(a, val), not(eval3(b, val)))),
        Formula::Iff(a, b) => {
            let (x, y) = (eval3(a, val), eval3(b, val));
            and(not(and(x, not(y))), not(and(y, not(x))))
        }
    }
}

/// 0 = {0}, 1 = {1}, 2 = {0,1}.
pub type Lpm3 = BTreeMap<String, u8>;

pub fn pair_of(t: u8) -> (bool, bool) {
    match t {
        0 => (true, false),
        1 => (false, true),
        _ => (true, true),
    }
}

/// All minimal LP_m models of the base over its variables, by scanning all
/// `3^n` interpretations.
pub fn brute_minimal_lpm(base: &Base) -> BTreeSet<Lpm3> {
    let vars = base.variables();
    let n = vars.len();
    let mut models = Vec::new();
    for code in 0..3u32.pow(n as u32) {
        let mut c = code;
        let lam: Lpm3 = vars
            .iter()
            .map(|v| {
                let t = (c % 3) as u8;
                c /= 3;
                (v.clone(), t)
            })
            .collect();
        if base
            .surface()
            .iter()
            .all(|f| eval3(f, &|v| pair_of(lam[v])).1)
        {
            models.push(lam);
        }
    }
    let gluts = |l: &Lpm3| -> BTreeSet<String> {
        l.iter()
            .filter(|(_, &t)| t == 2)
            .map(|(k, _)| k.clone())
            .collect()
    };
    let gs: Vec<_> = models.iter().map(gluts).collect();
    models
        .iter()
        .zip(&gs)
        .filter(|(_, g)| !gs.iter().any(|o| o.len() < g.len() && o.is_subset(g)))
        .map(|(m, _)| m.clone())
        .collect()
}
