//! Occurrence-based semantics.
//!
//! An o-interpretation gives each occurrence its own truth value; it is an
//! o-model when the occurrence-renamed base holds under it. O-models are
//! ordered by the same-variable occurrence pairs they split (`diffA`), or
//! by the split pairs of opposite polarity only (`diffB`), and queries are
//! answered over the Boolean valuations compatible with the minimal ones.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::formula::{Base, Formula, OccId, Renaming};
use crate::inference::{shared_variables, Quantifier};
use crate::relations::{pair, OccRelation, Pair};
use crate::semantics::{enumerate_models, EqConstraint, Problem, Valuation};

/// A truth value per occurrence, indexed by global ordinal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OInterpretation(Vec<bool>);

impl OInterpretation {
    pub fn new(base: &Base, values: Vec<bool>) -> Result<OInterpretation> {
        if values.len() != base.occurrences().len() {
            return Err(Error::InterpretationShape {
                expected: base.occurrences().len(),
                actual: values.len(),
            });
        }
        Ok(OInterpretation(values))
    }

    pub fn get(&self, o: OccId) -> bool {
        self.0[o.0]
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    /// `{p1+=1, p2-=0, …}` using short occurrence labels.
    pub fn display<'a>(&'a self, base: &'a Base) -> impl fmt::Display + 'a {
        DisplayO(self, base)
    }
}

struct DisplayO<'a>(&'a OInterpretation, &'a Base);

impl fmt::Display for DisplayO<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, occ) in self.1.occurrences().iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}={}", occ.short_label(), u8::from(self.0 .0[i]))?;
        }
        f.write_str("}")
    }
}

/// Same-variable pairs an o-interpretation splits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffProfile {
    pub a: BTreeSet<Pair>,
    /// The pairs of `a` joining a positive and a negative occurrence.
    pub b: BTreeSet<Pair>,
}

pub fn diff_profile(base: &Base, mu: &OInterpretation) -> DiffProfile {
    let mut a = BTreeSet::new();
    let mut b = BTreeSet::new();
    for v in 0..base.variables().len() {
        let occs = base.occurrences_of(v);
        for (i, &x) in occs.iter().enumerate() {
            for &y in &occs[i + 1..] {
                if mu.get(x) != mu.get(y) {
                    a.insert(pair(x, y));
                    if base.polarity(x) != base.polarity(y) {
                        b.insert(pair(x, y));
                    }
                }
            }
        }
    }
    DiffProfile { a, b }
}

pub fn is_o_model(base: &Base, mu: &OInterpretation) -> bool {
    mu.0.len() == base.occurrences().len() && base.eval_by_occurrence(&mu.0)
}

/// The relation relating same-variable occurrences with equal values.
pub fn relation_of(base: &Base, mu: &OInterpretation) -> OccRelation {
    OccRelation::from_labels(base, &mu.0)
}

fn models_under(base: &Base, eqs: &[EqConstraint], caps: Caps) -> Result<Vec<OInterpretation>> {
    let (renamed, renaming) = base.crename();
    let models = enumerate_models(renamed.formulas(), eqs, renaming.names(), caps.bool_vars)?;
    let mut out: Vec<OInterpretation> = models
        .iter()
        .map(|m| OInterpretation(renaming.names().iter().map(|n| m.get(n).unwrap()).collect()))
        .collect();
    out.sort();
    Ok(out)
}

/// Every o-model of the base, sorted by value vector.
pub fn o_models(base: &Base, caps: Caps) -> Result<Vec<OInterpretation>> {
    models_under(base, &[], caps)
}

/// `OM(∼)`: the o-models read off the models of the renamed base in which
/// related occurrences agree.
pub fn o_models_of_relation(
    base: &Base,
    rel: &OccRelation,
    caps: Caps,
) -> Result<Vec<OInterpretation>> {
    let eqs: Vec<EqConstraint> = rel
        .spanning_pairs()
        .into_iter()
        .map(|(a, b)| EqConstraint::new(Renaming::fresh_name(a), Renaming::fresh_name(b)))
        .collect();
    models_under(base, &eqs, caps)
}

// diff sets as bitmasks over the same-variable pairs of the base
struct PairIndex {
    pairs: Vec<(OccId, OccId, bool)>,
}

impl PairIndex {
    fn new(base: &Base) -> PairIndex {
        let mut pairs = Vec::new();
        for v in 0..base.variables().len() {
            let occs = base.occurrences_of(v);
            for (i, &x) in occs.iter().enumerate() {
                for &y in &occs[i + 1..] {
                    pairs.push((x, y, base.polarity(x) != base.polarity(y)));
                }
            }
        }
        PairIndex { pairs }
    }

    fn mask(&self, mu: &OInterpretation, bipolar_only: bool) -> Vec<u64> {
        let mut bits = vec![0u64; self.pairs.len().div_ceil(64)];
        for (k, &(x, y, bipolar)) in self.pairs.iter().enumerate() {
            if (bipolar || !bipolar_only) && mu.get(x) != mu.get(y) {
                bits[k / 64] |= 1 << (k % 64);
            }
        }
        bits
    }
}

fn strict_subset(a: &[u64], b: &[u64]) -> bool {
    a != b && a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Masks not strictly above another mask in the set.
fn minimal_masks(masks: &BTreeSet<Vec<u64>>) -> BTreeSet<Vec<u64>> {
    masks
        .iter()
        .filter(|m| !masks.iter().any(|o| strict_subset(o, m)))
        .cloned()
        .collect()
}

/// The members of `models` whose `diffA` is ⊆-minimal among them.
/// `models` must be all o-models of the base.
pub fn a_minimal_among(base: &Base, models: &[OInterpretation]) -> Vec<OInterpretation> {
    let index = PairIndex::new(base);
    let masks: Vec<_> = models.iter().map(|m| index.mask(m, false)).collect();
    let min = minimal_masks(&masks.iter().cloned().collect());
    models
        .iter()
        .zip(&masks)
        .filter(|(_, m)| min.contains(*m))
        .map(|(mu, _)| mu.clone())
        .collect()
}

/// The a-minimal members of `models` whose `diffB` is also ⊆-minimal among
/// all of `models`.
pub fn b_minimal_among(base: &Base, models: &[OInterpretation]) -> Vec<OInterpretation> {
    let index = PairIndex::new(base);
    let b_masks: Vec<_> = models.iter().map(|m| index.mask(m, true)).collect();
    let min_b = minimal_masks(&b_masks.iter().cloned().collect());
    let a_min: BTreeSet<_> = a_minimal_among(base, models).into_iter().collect();
    models
        .iter()
        .zip(&b_masks)
        .filter(|(mu, m)| min_b.contains(*m) && a_min.contains(*mu))
        .map(|(mu, _)| mu.clone())
        .collect()
}

pub fn a_minimal_o_models(base: &Base, caps: Caps) -> Result<Vec<OInterpretation>> {
    Ok(a_minimal_among(base, &o_models(base, caps)?))
}

pub fn b_minimal_o_models(base: &Base, caps: Caps) -> Result<Vec<OInterpretation>> {
    Ok(b_minimal_among(base, &o_models(base, caps)?))
}

/// Values the occurrences of each base variable take under `mu`, as
/// `(can be false, can be true)`.
fn allowed(base: &Base, mu: &OInterpretation, var: usize) -> (bool, bool) {
    let occs = base.occurrences_of(var);
    (
        occs.iter().any(|&o| !mu.get(o)),
        occs.iter().any(|&o| mu.get(o)),
    )
}

/// Valuations over `var(K) ∪ extra` compatible with an o-interpretation, in
/// lexicographic order (false before true, variables sorted by name).
pub struct CompatibleValuations {
    vars: Vec<(String, Vec<bool>)>,
    counter: Vec<usize>,
    done: bool,
}

impl Iterator for CompatibleValuations {
    type Item = Valuation;

    fn next(&mut self) -> Option<Valuation> {
        if self.done {
            return None;
        }
        let mut val = Valuation::default();
        for ((name, opts), &i) in self.vars.iter().zip(&self.counter) {
            val.set(name.clone(), opts[i]);
        }
        // advance, last variable fastest
        self.done = true;
        for k in (0..self.counter.len()).rev() {
            self.counter[k] += 1;
            if self.counter[k] < self.vars[k].1.len() {
                self.done = false;
                break;
            }
            self.counter[k] = 0;
        }
        Some(val)
    }
}

/// Every base variable takes a value of one of its occurrences; `extra`
/// variables outside the base range freely.
pub fn compatible_valuations(
    base: &Base,
    mu: &OInterpretation,
    extra: &BTreeSet<String>,
) -> CompatibleValuations {
    let mut vars: Vec<(String, Vec<bool>)> = base
        .variables()
        .iter()
        .enumerate()
        .map(|(v, name)| {
            let (f, t) = allowed(base, mu, v);
            let opts = [(f, false), (t, true)]
                .iter()
                .filter(|x| x.0)
                .map(|x| x.1)
                .collect();
            (name.clone(), opts)
        })
        .collect();
    vars.extend(
        extra
            .iter()
            .filter(|v| !base.contains_var(v))
            .map(|v| (v.clone(), vec![false, true])),
    );
    vars.sort();
    let counter = vec![0; vars.len()];
    CompatibleValuations {
        vars,
        counter,
        done: false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OsemWitness {
    pub model: OInterpretation,
    /// A compatible valuation falsifying the query, for universal queries.
    pub valuation: Option<Valuation>,
}

/// Outcome of an o-semantics query. A negative answer carries the o-model
/// with no compatible model of the query (existential) or with a compatible
/// counter-model (universal).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OsemVerdict {
    pub holds: bool,
    pub witness: Option<OsemWitness>,
}

/// Decides the query against each of `models`.
pub fn query_o_models(
    base: &Base,
    models: &[OInterpretation],
    query: &Formula,
    quantifier: Quantifier,
) -> OsemVerdict {
    let query = query.desugar();
    let shared = shared_variables(base, &query);
    let shared_idx: Vec<usize> = shared.iter().map(|v| base.var_index(v).unwrap()).collect();
    // verdicts depend only on the values allowed for the shared variables
    let mut seen: HashMap<Vec<(bool, bool)>, bool> = HashMap::new();
    for mu in models {
        let profile: Vec<(bool, bool)> = shared_idx.iter().map(|&v| allowed(base, mu, v)).collect();
        let units: Vec<Formula> = shared
            .iter()
            .zip(&profile)
            .filter_map(|(name, &(f, t))| match (f, t) {
                (true, false) => Some(Formula::not(Formula::var(name.clone()))),
                (false, true) => Some(Formula::var(name.clone())),
                _ => None,
            })
            .collect();
        let ok = *seen
            .entry(profile.clone())
            .or_insert_with(|| match quantifier {
                Quantifier::Exists => {
                    // choose the two-valued shared variables; off-base variables
                    // must then satisfy the query whatever their values
                    let free: Vec<&String> = shared
                        .iter()
                        .zip(&profile)
                        .filter(|(_, &(f, t))| f && t)
                        .map(|(n, _)| n)
                        .collect();
                    (0u64..1 << free.len()).any(|bits| {
                        let mut fs = units.clone();
                        fs.extend(free.iter().enumerate().map(|(i, name)| {
                            let v = Formula::var(name.as_str());
                            if bits >> i & 1 == 1 {
                                v
                            } else {
                                Formula::not(v)
                            }
                        }));
                        crate::semantics::entails(&fs, &[], &query)
                    })
                }
                Quantifier::Forall => crate::semantics::entails(&units, &[], &query),
            });
        if !ok {
            let valuation = match quantifier {
                Quantifier::Exists => None,
                Quantifier::Forall => Some(counter_valuation(base, mu, &units, &query)),
            };
            return OsemVerdict {
                holds: false,
                witness: Some(OsemWitness {
                    model: mu.clone(),
                    valuation,
                }),
            };
        }
    }
    OsemVerdict {
        holds: true,
        witness: None,
    }
}

/// A compatible valuation falsifying `query`, which must exist.
fn counter_valuation(
    base: &Base,
    mu: &OInterpretation,
    units: &[Formula],
    query: &Formula,
) -> Valuation {
    let negated = Formula::not(query.clone());
    let p = Problem::new(
        units.iter().chain(std::iter::once(&negated)),
        std::iter::empty(),
    );
    let m = p.models(&[]).next().expect("query is not entailed");
    let mut val = Valuation::default();
    for (v, name) in base.variables().iter().enumerate() {
        // variables the query does not mention take their first occurrence's value
        let first = mu.get(base.occurrences_of(v)[0]);
        val.set(name.clone(), m.get(name).unwrap_or(first));
    }
    for (name, value) in m.iter() {
        val.set(name, value);
    }
    val
}

fn with_models<T>(
    base: &Base,
    pick: fn(&Base, &[OInterpretation]) -> Vec<OInterpretation>,
    f: impl FnOnce(&[OInterpretation]) -> T,
) -> Result<T> {
    let all = o_models(base, Caps::default())?;
    Ok(f(&pick(base, &all)))
}

/// `K ⊩a1 φ`: every a-minimal o-model has a compatible valuation of the base
/// variables under which `φ` holds whatever the variables outside the base are.
pub fn infer_a1(base: &Base, query: &Formula) -> Result<bool> {
    with_models(base, a_minimal_among, |m| {
        query_o_models(base, m, query, Quantifier::Exists).holds
    })
}

/// `K ⊩a2 φ`: every valuation compatible with an a-minimal o-model satisfies `φ`.
pub fn infer_a2(base: &Base, query: &Formula) -> Result<bool> {
    with_models(base, a_minimal_among, |m| {
        query_o_models(base, m, query, Quantifier::Forall).holds
    })
}

pub fn infer_b1(base: &Base, query: &Formula) -> Result<bool> {
    with_models(base, b_minimal_among, |m| {
        query_o_models(base, m, query, Quantifier::Exists).holds
    })
}

pub fn infer_b2(base: &Base, query: &Formula) -> Result<bool> {
    with_models(base, b_minimal_among, |m| {
        query_o_models(base, m, query, Quantifier::Forall).holds
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn mu(base: &Base, bits: &str) -> OInterpretation {
        OInterpretation::new(base, bits.chars().map(|c| c == '1').collect()).unwrap()
    }

    fn sep_base() -> Base {
        Base::parse("p\n!p\nq | r").unwrap()
    }

    #[test]
    fn o_model_check() {
        let b = sep_base();
        assert!(is_o_model(&b, &mu(&b, "1010")));
        assert!(!is_o_model(&b, &mu(&b, "0000")));
        let empty = Base::parse("").unwrap();
        assert!(is_o_model(&empty, &mu(&empty, "")));
        assert!(OInterpretation::new(&b, vec![true]).is_err());
    }

    #[test]
    fn three_a_minimal_models() {
        let b = sep_base();
        let got = a_minimal_o_models(&b, Caps::default()).unwrap();
        assert_eq!(got, vec![mu(&b, "1001"), mu(&b, "1010"), mu(&b, "1011")]);
        assert_eq!(
            got[1].display(&b).to_string(),
            "{p1+=1, p2-=0, q1+=1, r1+=0}"
        );
    }

    #[test]
    fn consistent_base_has_undivided_minimal_models() {
        let b = Base::parse("p | q\n!q | p").unwrap();
        let a = a_minimal_o_models(&b, Caps::default()).unwrap();
        assert!(!a.is_empty());
        for m in &a {
            assert!(diff_profile(&b, m).a.is_empty());
        }
        assert_eq!(b_minimal_o_models(&b, Caps::default()).unwrap(), a);
    }

    #[test]
    fn k2_minimal_models() {
        let b = Base::parse("p\n!p\n!p | q").unwrap();
        let a = a_minimal_o_models(&b, Caps::default()).unwrap();
        assert_eq!(a, vec![mu(&b, "1000"), mu(&b, "1001"), mu(&b, "1011")]);
        let bm = b_minimal_o_models(&b, Caps::default()).unwrap();
        assert_eq!(bm, vec![mu(&b, "1011")]);
        let d = diff_profile(&b, &bm[0]);
        assert_eq!(d.b, BTreeSet::from([(OccId(0), OccId(1))]));
    }

    #[test]
    fn liar_base_b_minimal() {
        let b = Base::parse("p\n!p").unwrap();
        assert_eq!(
            b_minimal_o_models(&b, Caps::default()).unwrap(),
            vec![mu(&b, "10")]
        );
    }

    #[test]
    fn compatibility() {
        let b = sep_base();
        let m1 = mu(&b, "1010");
        let all: Vec<String> = compatible_valuations(&b, &m1, &BTreeSet::new())
            .map(|v| v.to_string())
            .collect();
        assert_eq!(all, ["{p=0, q=1, r=0}", "{p=1, q=1, r=0}"]);
        let extra = BTreeSet::from(["s".to_string()]);
        assert_eq!(compatible_valuations(&b, &m1, &extra).count(), 4);
        let ones = mu(&b, "1111");
        assert!(
            compatible_valuations(&b, &ones, &BTreeSet::new()).all(|v| v.get("p") == Some(true))
        );
    }

    #[test]
    fn query_examples() {
        let b = sep_base();
        let phi = f("(!p & (!q | !r)) | (p & q & r)");
        assert!(infer_a1(&b, &phi).unwrap());

        let k2 = Base::parse("p\n!p\n!p | q").unwrap();
        assert!(infer_b1(&k2, &f("q")).unwrap());
        assert!(!infer_a1(&k2, &f("q")).unwrap());

        let liar = Base::parse("p\n!p").unwrap();
        assert!(!infer_a1(&liar, &f("p & !p")).unwrap());
    }

    #[test]
    fn universal_witness_is_compatible_counter_model() {
        let k2 = Base::parse("p\n!p\n!p | q").unwrap();
        let a = a_minimal_o_models(&k2, Caps::default()).unwrap();
        let v = query_o_models(&k2, &a, &f("p"), Quantifier::Forall);
        assert!(!v.holds);
        let w = v.witness.unwrap();
        let omega = w.valuation.unwrap();
        assert_eq!(omega.get("p"), Some(false));
        let compatible: Vec<_> = compatible_valuations(&k2, &w.model, &BTreeSet::new()).collect();
        assert!(compatible.contains(&omega));
    }

    #[test]
    fn relation_of_minimal_model_is_mcr() {
        let b = sep_base();
        let mcrs = crate::relations::enumerate_mcrs(&b).unwrap();
        for m in a_minimal_o_models(&b, Caps::default()).unwrap() {
            assert!(mcrs.contains(&relation_of(&b, &m)));
        }
        let om = o_models_of_relation(&b, &mcrs[0], Caps::default()).unwrap();
        assert_eq!(om.len(), 3);
    }

    #[test]
    fn cap_is_enforced() {
        let b = sep_base();
        let caps = Caps {
            bool_vars: 3,
            ..Caps::default()
        };
        assert!(o_models(&b, caps).unwrap_err().is_cap_exceeded());
    }
}
