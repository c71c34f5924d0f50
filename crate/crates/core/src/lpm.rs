//! Minimally inconsistent Logic of Paradox.
//!
//! Variables take one of `{0}`, `{1}` or `{0,1}`; a formula holds when `1`
//! is among its values. Minimal models are those whose set of glutted
//! variables is ⊆-minimal, and entailment quantifies over them. The bridge
//! functions translate between LP_m interpretations, MCRs and
//! o-interpretations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::caps::Caps;
use crate::error::{check_cap, Error, Resource, Result};
use crate::formula::{Base, Formula, Polarity};
use crate::osem::OInterpretation;
use crate::relations::OccRelation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Truth {
    False,
    True,
    Both,
}

impl Truth {
    pub fn values(self) -> ValueSet {
        match self {
            Truth::False => ValueSet {
                zero: true,
                one: false,
            },
            Truth::True => ValueSet {
                zero: false,
                one: true,
            },
            Truth::Both => ValueSet {
                zero: true,
                one: true,
            },
        }
    }

    pub fn crisp(b: bool) -> Truth {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }
}

impl fmt::Display for Truth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Truth::False => "{0}",
            Truth::True => "{1}",
            Truth::Both => "{0,1}",
        })
    }
}

/// A nonempty subset of `{0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueSet {
    pub zero: bool,
    pub one: bool,
}

impl ValueSet {
    fn not(self) -> ValueSet {
        ValueSet {
            zero: self.one,
            one: self.zero,
        }
    }

    fn and(self, other: ValueSet) -> ValueSet {
        ValueSet {
            zero: self.zero || other.zero,
            one: self.one && other.one,
        }
    }
}

/// Variables absent from the map read as `{0}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LpmInterpretation(BTreeMap<String, Truth>);

impl LpmInterpretation {
    pub fn new(values: BTreeMap<String, Truth>) -> LpmInterpretation {
        LpmInterpretation(values)
    }

    pub fn get(&self, var: &str) -> Truth {
        self.0.get(var).copied().unwrap_or(Truth::False)
    }

    pub fn set(&mut self, var: impl Into<String>, t: Truth) {
        self.0.insert(var.into(), t);
    }

    pub fn with(&self, var: &str, t: Truth) -> LpmInterpretation {
        let mut out = self.clone();
        out.set(var, t);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Truth)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// `λ!`: the glutted variables.
    pub fn gluts(&self) -> BTreeSet<String> {
        self.0
            .iter()
            .filter(|(_, &t)| t == Truth::Both)
            .map(|(k, _)| k.clone())
            .collect()
    }
}

impl fmt::Display for LpmInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str("}")
    }
}

pub fn lpm_eval(lambda: &LpmInterpretation, f: &Formula) -> ValueSet {
    match f {
        Formula::Var(v) => lambda.get(v).values(),
        Formula::Not(a) => lpm_eval(lambda, a).not(),
        Formula::And(a, b) => lpm_eval(lambda, a).and(lpm_eval(lambda, b)),
        _ => lpm_eval(lambda, &f.desugar()),
    }
}

pub fn is_lpm_model(lambda: &LpmInterpretation, formulas: &[Formula]) -> bool {
    formulas.iter().all(|f| lpm_eval(lambda, f).one)
}

/// Assignments over `vars` with exactly the variables in `glut` glutted and
/// every other variable crisp, in lexicographic order of the crisp values.
fn with_glut_set<'a>(
    vars: &'a [String],
    glut: &'a [bool],
) -> impl Iterator<Item = LpmInterpretation> + 'a {
    let free: Vec<usize> = (0..vars.len()).filter(|&i| !glut[i]).collect();
    (0u64..1 << free.len()).map(move |bits| {
        let mut m = BTreeMap::new();
        for (i, v) in vars.iter().enumerate() {
            if glut[i] {
                m.insert(v.clone(), Truth::Both);
            }
        }
        for (k, &i) in free.iter().enumerate() {
            // most significant bit on the first free variable
            let b = bits >> (free.len() - 1 - k) & 1 == 1;
            m.insert(vars[i].clone(), Truth::crisp(b));
        }
        LpmInterpretation(m)
    })
}

/// Index subsets of `0..n` with `k` members, in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// All minimal LP_m models of `formulas` over `vars`, grouped by glut set
/// (smaller first).
pub fn minimal_lpm_models_of(
    formulas: &[Formula],
    vars: &[String],
    caps: Caps,
) -> Result<Vec<LpmInterpretation>> {
    check_cap(Resource::LpmVariables, caps.lpm_vars, vars.len())?;
    let formulas: Vec<Formula> = formulas.iter().map(Formula::desugar).collect();
    let n = vars.len();
    let mut minimal_sets: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for k in 0..=n {
        for set in combinations(n, k) {
            if minimal_sets
                .iter()
                .any(|m| m.iter().all(|i| set.contains(i)))
            {
                continue;
            }
            let mut glut = vec![false; n];
            for &i in &set {
                glut[i] = true;
            }
            let before = out.len();
            out.extend(with_glut_set(vars, &glut).filter(|l| is_lpm_model(l, &formulas)));
            if out.len() > before {
                minimal_sets.push(set);
            }
        }
    }
    Ok(out)
}

/// Minimal LP_m models of `⋀K` over `var(K)`.
pub fn minimal_lpm_models(base: &Base, caps: Caps) -> Result<Vec<LpmInterpretation>> {
    minimal_lpm_models_of(base.formulas(), base.variables(), caps)
}

/// Outcome of an LP_m query; a negative answer carries a minimal model
/// (extended to the query's own variables) that does not satisfy it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpmVerdict {
    pub holds: bool,
    pub counter_model: Option<LpmInterpretation>,
}

/// Checks `query` in every minimal model in `models`, under every crisp
/// assignment of the query variables outside the base.
pub fn query_lpm_models(
    base: &Base,
    models: &[LpmInterpretation],
    query: &Formula,
    caps: Caps,
) -> Result<LpmVerdict> {
    let query = query.desugar();
    let extra: Vec<String> = query
        .variables()
        .into_iter()
        .filter(|v| !base.contains_var(v))
        .collect();
    check_cap(
        Resource::LpmVariables,
        caps.lpm_vars,
        base.variables().len() + extra.len(),
    )?;
    let crisp = vec![false; extra.len()];
    for lambda in models {
        for ext in with_glut_set(&extra, &crisp) {
            let mut full = lambda.clone();
            for (k, t) in ext.iter() {
                full.set(k, t);
            }
            if !lpm_eval(&full, &query).one {
                return Ok(LpmVerdict {
                    holds: false,
                    counter_model: Some(full),
                });
            }
        }
    }
    Ok(LpmVerdict {
        holds: true,
        counter_model: None,
    })
}

/// `K ⊢LPm φ`.
pub fn lpm_entails(base: &Base, query: &Formula, caps: Caps) -> Result<bool> {
    let models = minimal_lpm_models(base, caps)?;
    Ok(query_lpm_models(base, &models, query, caps)?.holds)
}

/// `∼λ`: occurrences of a crisp variable form one block; those of a glutted
/// variable split into its positive and its negative occurrences.
pub fn mcr_from_lpm(base: &Base, lambda: &LpmInterpretation) -> Result<OccRelation> {
    if !is_lpm_model(lambda, base.formulas()) {
        return Err(Error::NotALpmModel);
    }
    let labels: Vec<u8> = base
        .occurrences()
        .iter()
        .map(|o| match (lambda.get(&o.variable), o.polarity) {
            (Truth::Both, Polarity::Negative) => 1,
            _ => 0,
        })
        .collect();
    Ok(OccRelation::from_labels(base, &labels))
}

/// `μλ`: a crisp variable's occurrences take its value; a glutted variable's
/// positive occurrences are true and negative ones false.
pub fn o_interp_from_lpm(base: &Base, lambda: &LpmInterpretation) -> OInterpretation {
    let values = base
        .occurrences()
        .iter()
        .map(|o| match lambda.get(&o.variable) {
            Truth::False => false,
            Truth::True => true,
            Truth::Both => o.polarity == Polarity::Positive,
        })
        .collect();
    OInterpretation::new(base, values).expect("one value per occurrence")
}

/// `λμ`: a base variable may be true (false) iff one of its occurrences is.
pub fn lpm_from_o_interp(base: &Base, mu: &OInterpretation) -> LpmInterpretation {
    let mut out = LpmInterpretation::default();
    for (v, name) in base.variables().iter().enumerate() {
        let occs = base.occurrences_of(v);
        let t = occs.iter().any(|&o| mu.get(o));
        let f = occs.iter().any(|&o| !mu.get(o));
        out.set(
            name.clone(),
            match (f, t) {
                (true, true) => Truth::Both,
                (_, t) => Truth::crisp(t),
            },
        );
    }
    out
}
