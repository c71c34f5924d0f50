//! Two-valued reasoning over core formulas with side equalities between
//! variables.
//!
//! The engine is a backtracking search over the formula trees themselves
//! (no clause conversion). Each node is evaluated three-valued under the
//! partial assignment, and values that a conjunct forces are propagated
//! before branching. Equality constraints are compiled away up front by
//! merging the variables they relate into a single search variable.
//! Branching always picks the lexicographically smallest open variable and
//! tries `false` first, so model enumeration order is reproducible.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::error::{check_cap, Error, Resource, Result};
use crate::formula::Formula;
use crate::unionfind::DisjointSets;

/// Requires two variables to take the same truth value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EqConstraint {
    pub left: String,
    pub right: String,
}

impl EqConstraint {
    pub fn new(left: impl Into<String>, right: impl Into<String>) -> EqConstraint {
        EqConstraint {
            left: left.into(),
            right: right.into(),
        }
    }
}

/// A total assignment over a declared variable set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Valuation(BTreeMap<String, bool>);

impl Valuation {
    pub fn new(values: BTreeMap<String, bool>) -> Valuation {
        Valuation(values)
    }

    pub fn get(&self, var: &str) -> Option<bool> {
        self.0.get(var).copied()
    }

    pub fn set(&mut self, var: impl Into<String>, value: bool) {
        self.0.insert(var.into(), value);
    }

    /// Copy with `var` reassigned.
    pub fn with(&self, var: &str, value: bool) -> Valuation {
        let mut v = self.clone();
        v.set(var, value);
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Evaluates `f`; variables missing from the valuation read as false.
    pub fn satisfies(&self, f: &Formula) -> bool {
        f.eval(&|v| self.get(v).unwrap_or(false))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={}", u8::from(v))?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Var(usize),
    Not(u32),
    And(u32, u32),
}

/// A compiled conjunction of formulas over a fixed, sorted variable set.
/// Compiling once and querying with different variable merges is how the
/// relation lattice checks many equality patterns against the same base.
#[derive(Debug, Clone)]
pub struct Problem {
    names: Vec<String>,
    index: HashMap<String, usize>,
    nodes: Vec<Node>,
    roots: Vec<u32>,
}

impl Problem {
    pub fn new<'a>(
        formulas: impl IntoIterator<Item = &'a Formula>,
        extra_vars: impl IntoIterator<Item = &'a str>,
    ) -> Problem {
        let formulas: Vec<Formula> = formulas
            .into_iter()
            .map(|f| if f.is_core() { f.clone() } else { f.desugar() })
            .collect();
        let mut names: BTreeSet<String> = extra_vars.into_iter().map(str::to_string).collect();
        for f in &formulas {
            names.extend(f.variables());
        }
        let names: Vec<String> = names.into_iter().collect();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let mut p = Problem {
            names,
            index,
            nodes: Vec::new(),
            roots: Vec::new(),
        };
        for f in &formulas {
            p.add_root(f);
        }
        p
    }

    fn add_root(&mut self, f: &Formula) {
        if let Formula::And(a, b) = f {
            self.add_root(a);
            self.add_root(b);
        } else {
            let id = self.compile(f);
            self.roots.push(id);
        }
    }

    fn compile(&mut self, f: &Formula) -> u32 {
        let node = match f {
            Formula::Var(v) => Node::Var(self.index[v]),
            Formula::Not(a) => Node::Not(self.compile(a)),
            Formula::And(a, b) => {
                let a = self.compile(a);
                Node::And(a, self.compile(b))
            }
            _ => unreachable!("compiled formulas are in core form"),
        };
        self.nodes.push(node);
        (self.nodes.len() - 1) as u32
    }

    /// Variables in lexicographic order.
    pub fn variables(&self) -> &[String] {
        &self.names
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    fn engine(&self, merges: &[(usize, usize)]) -> Engine<'_> {
        let mut ds = DisjointSets::new(self.names.len());
        for &(a, b) in merges {
            ds.union(a, b);
        }
        let (class_of, classes) = ds.labels();
        Engine {
            p: self,
            class_of,
            classes,
        }
    }

    /// Whether the formulas have a model in which each merged pair of
    /// variables (by index) agrees.
    pub fn is_satisfiable(&self, merges: &[(usize, usize)]) -> bool {
        let e = self.engine(merges);
        let mut assign = vec![None; e.classes];
        e.solve(&mut assign)
    }

    /// All models, each exactly once, in lexicographic order.
    pub fn models(&self, merges: &[(usize, usize)]) -> Models<'_> {
        let e = self.engine(merges);
        let start = vec![None; e.classes];
        Models {
            engine: e,
            stack: vec![start],
        }
    }
}

struct Engine<'p> {
    p: &'p Problem,
    class_of: Vec<usize>,
    classes: usize,
}

impl Engine<'_> {
    fn eval(&self, n: u32, a: &[Option<bool>]) -> Option<bool> {
        match self.p.nodes[n as usize] {
            Node::Var(v) => a[self.class_of[v]],
            Node::Not(c) => self.eval(c, a).map(|x| !x),
            Node::And(l, r) => match (self.eval(l, a), self.eval(r, a)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
        }
    }

    /// Collects the assignments needed for node `n` to evaluate to `want`.
    fn forced(&self, n: u32, want: bool, a: &[Option<bool>], out: &mut Vec<(usize, bool)>) {
        match self.p.nodes[n as usize] {
            Node::Var(v) => {
                let c = self.class_of[v];
                if a[c].is_none() {
                    out.push((c, want));
                }
            }
            Node::Not(c) => self.forced(c, !want, a, out),
            Node::And(l, r) => {
                if want {
                    self.forced(l, true, a, out);
                    self.forced(r, true, a, out);
                } else {
                    match (self.eval(l, a), self.eval(r, a)) {
                        (Some(true), None) => self.forced(r, false, a, out),
                        (None, Some(true)) => self.forced(l, false, a, out),
                        _ => {}
                    }
                }
            }
        }
    }

    /// Unit propagation to a fixpoint. Returns `None` on conflict, otherwise
    /// whether every conjunct is already true.
    fn propagate(&self, a: &mut [Option<bool>]) -> Option<bool> {
        let mut forced = Vec::new();
        loop {
            forced.clear();
            let mut all_true = true;
            for &root in &self.p.roots {
                match self.eval(root, a) {
                    Some(false) => return None,
                    Some(true) => {}
                    None => {
                        all_true = false;
                        self.forced(root, true, a, &mut forced);
                    }
                }
            }
            if forced.is_empty() {
                return Some(all_true);
            }
            for &(c, v) in &forced {
                match a[c] {
                    Some(old) if old != v => return None,
                    _ => a[c] = Some(v),
                }
            }
        }
    }

    fn solve(&self, a: &mut [Option<bool>]) -> bool {
        match self.propagate(a) {
            None => false,
            Some(true) => true,
            Some(false) => {
                let Some(c) = a.iter().position(Option::is_none) else {
                    return false;
                };
                for v in [false, true] {
                    let mut next = a.to_vec();
                    next[c] = Some(v);
                    if self.solve(&mut next) {
                        return true;
                    }
                }
                false
            }
        }
    }
}

/// Lazy model stream over a [`Problem`].
pub struct Models<'p> {
    engine: Engine<'p>,
    stack: Vec<Vec<Option<bool>>>,
}

impl Iterator for Models<'_> {
    type Item = Valuation;

    fn next(&mut self) -> Option<Valuation> {
        while let Some(mut a) = self.stack.pop() {
            if self.engine.propagate(&mut a).is_none() {
                continue;
            }
            match a.iter().position(Option::is_none) {
                Some(c) => {
                    let mut hi = a.clone();
                    hi[c] = Some(true);
                    self.stack.push(hi);
                    a[c] = Some(false);
                    self.stack.push(a);
                }
                None => {
                    let names = &self.engine.p.names;
                    let values = names
                        .iter()
                        .enumerate()
                        .map(|(i, n)| (n.clone(), a[self.engine.class_of[i]].unwrap()))
                        .collect();
                    return Some(Valuation(values));
                }
            }
        }
        None
    }
}

fn merge_pairs(p: &Problem, eqs: &[EqConstraint]) -> Vec<(usize, usize)> {
    eqs.iter()
        .map(|e| (p.index[&e.left], p.index[&e.right]))
        .collect()
}

fn eq_vars(eqs: &[EqConstraint]) -> impl Iterator<Item = &str> {
    eqs.iter().flat_map(|e| [e.left.as_str(), e.right.as_str()])
}

/// Whether the conjunction of `formulas` and the equalities has a model.
/// The empty conjunction is consistent.
pub fn is_consistent(formulas: &[Formula], eqs: &[EqConstraint]) -> bool {
    let p = Problem::new(formulas, eq_vars(eqs));
    p.is_satisfiable(&merge_pairs(&p, eqs))
}

/// Whether every model of `premises` and the equalities satisfies `goal`.
pub fn entails(premises: &[Formula], eqs: &[EqConstraint], goal: &Formula) -> bool {
    let negated = Formula::not(goal.clone());
    let p = Problem::new(
        premises.iter().chain(std::iter::once(&negated)),
        eq_vars(eqs),
    );
    !p.is_satisfiable(&merge_pairs(&p, eqs))
}

/// Default cap on the number of variables in a model enumeration.
pub const DEFAULT_BOOL_CAP: usize = 26;

/// Enumerates every model over exactly the variables `vars`, in
/// lexicographic order. Fails if the formulas or equalities mention a
/// variable outside `vars`, or if `vars` is larger than `cap`.
pub fn enumerate_models(
    formulas: &[Formula],
    eqs: &[EqConstraint],
    vars: &[String],
    cap: usize,
) -> Result<Vec<Valuation>> {
    let declared: BTreeSet<&str> = vars.iter().map(String::as_str).collect();
    check_cap(Resource::BooleanVariables, cap, declared.len())?;
    for f in formulas {
        if let Some(v) = f
            .variables()
            .into_iter()
            .find(|v| !declared.contains(v.as_str()))
        {
            return Err(Error::UndeclaredVariable(v));
        }
    }
    if let Some(v) = eq_vars(eqs).find(|v| !declared.contains(v)) {
        return Err(Error::UndeclaredVariable(v.to_string()));
    }
    let p = Problem::new(formulas, declared.iter().copied());
    let merges = merge_pairs(&p, eqs);
    Ok(p.models(&merges).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula, Base};

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn k1_renamed() -> (Vec<Formula>, Vec<EqConstraint>) {
        let (r, _) = Base::parse("p & q\n!p & r\n!q | !r").unwrap().crename();
        // occurrences: p1 q1 p2 r1 q2 r2
        let eqs = vec![
            EqConstraint::new("_o1", "_o3"),
            EqConstraint::new("_o2", "_o5"),
            EqConstraint::new("_o4", "_o6"),
        ];
        (r.formulas().to_vec(), eqs)
    }

    #[test]
    fn renamed_k1_is_consistent_only_without_equalities() {
        let (fs, eqs) = k1_renamed();
        assert!(!is_consistent(&fs, &eqs));
        assert!(is_consistent(&fs, &[]));
        assert!(is_consistent(&[], &[]));
    }

    #[test]
    fn entailment_examples() {
        assert!(entails(
            &[f("x1"), f("!x2"), f("!x1 | q").desugar()],
            &[],
            &f("q")
        ));
        assert!(!entails(
            &[f("x1"), f("!x2"), f("!x2 | q").desugar()],
            &[],
            &f("q")
        ));
        assert!(entails(&[], &[], &f("p | !p").desugar()));
    }

    #[test]
    fn model_enumeration() {
        let vars = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let ms = enumerate_models(&[f("p")], &[], &vars(&["p"]), 26).unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0].get("p"), Some(true));
        let ms = enumerate_models(&[f("p | !p").desugar()], &[], &vars(&["p"]), 26).unwrap();
        assert_eq!(ms.len(), 2);
        let (fs, eqs) = k1_renamed();
        let names: Vec<String> = (1..=6).map(|k| format!("_o{k}")).collect();
        assert!(enumerate_models(&fs, &eqs, &names, 26).unwrap().is_empty());
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let vars: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let ms = enumerate_models(&[f("a | b | c").desugar()], &[], &vars, 26).unwrap();
        let bits: Vec<String> = ms
            .iter()
            .map(|m| m.iter().map(|(_, v)| if v { '1' } else { '0' }).collect())
            .collect();
        assert_eq!(bits, ["001", "010", "011", "100", "101", "110", "111"]);
    }

    #[test]
    fn enumeration_errors() {
        let vars = vec!["p".to_string()];
        assert!(matches!(
            enumerate_models(&[f("q")], &[], &vars, 26),
            Err(Error::UndeclaredVariable(v)) if v == "q"
        ));
        assert!(matches!(
            enumerate_models(&[], &[EqConstraint::new("p", "r")], &vars, 26),
            Err(Error::UndeclaredVariable(_))
        ));
        let many: Vec<String> = (0..5).map(|i| format!("v{i}")).collect();
        assert!(enumerate_models(&[], &[], &many, 4)
            .unwrap_err()
            .is_cap_exceeded());
    }

    #[test]
    fn equalities_merge_variables() {
        let vars: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let ms = enumerate_models(&[], &[EqConstraint::new("b", "a")], &vars, 26).unwrap();
        assert_eq!(ms.len(), 2);
        assert!(ms.iter().all(|m| m.get("a") == m.get("b")));
        assert!(!is_consistent(
            &[f("a"), f("!b")],
            &[EqConstraint::new("a", "b")]
        ));
    }
}
