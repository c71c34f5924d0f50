//! Propositional formulas over named variables.
//!
//! The surface language has `!`, `&`, `|`, `->` and `<->`. Every analysis in
//! this crate works on the *core* form, which keeps only variables, negation
//! and conjunction; [`Formula::desugar`] performs the translation and keeps
//! the left-to-right order of variable occurrences.

mod base;
mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub use base::{Base, OccId, Occurrence, Renaming};
pub use parse::{parse_formula, parse_lines};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    pub fn sign(self) -> char {
        match self {
            Polarity::Positive => '+',
            Polarity::Negative => '-',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    // surface-only connectives, removed by `desugar`
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

/// One variable occurrence inside a single formula, in left-to-right order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Site {
    pub var: String,
    /// 1-based index among the occurrences of `var` in this formula.
    pub index: usize,
    pub polarity: Polarity,
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Formula {
        Formula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    /// Left-nested conjunction of `fs`; `None` for an empty iterator.
    pub fn conjoin<I: IntoIterator<Item = Formula>>(fs: I) -> Option<Formula> {
        fs.into_iter().reduce(Formula::and)
    }

    /// True when only variables, negations and conjunctions occur.
    pub fn is_core(&self) -> bool {
        match self {
            Formula::Var(_) => true,
            Formula::Not(a) => a.is_core(),
            Formula::And(a, b) => a.is_core() && b.is_core(),
            _ => false,
        }
    }

    /// Rewrites into the `¬`/`∧` core:
    /// `a | b` to `!(!a & !b)`, `a -> b` to `!(a & !b)` and
    /// `a <-> b` to `!(a & !b) & !(b & !a)`. The biconditional duplicates
    /// both sides, so its occurrences are counted twice.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Var(v) => Formula::Var(v.clone()),
            Formula::Not(a) => Formula::not(a.desugar()),
            Formula::And(a, b) => Formula::and(a.desugar(), b.desugar()),
            Formula::Or(a, b) => Formula::not(Formula::and(
                Formula::not(a.desugar()),
                Formula::not(b.desugar()),
            )),
            Formula::Implies(a, b) => {
                Formula::not(Formula::and(a.desugar(), Formula::not(b.desugar())))
            }
            Formula::Iff(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                Formula::and(
                    Formula::not(Formula::and(a.clone(), Formula::not(b.clone()))),
                    Formula::not(Formula::and(b, Formula::not(a))),
                )
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v| {
            out.insert(v.to_string());
        });
        out
    }

    /// Number of variable leaves in the core form.
    pub fn occurrence_count(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::Not(a) => a.occurrence_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.occurrence_count() + b.occurrence_count()
            }
            Formula::Iff(a, b) => 2 * (a.occurrence_count() + b.occurrence_count()),
        }
    }

    fn visit_vars(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::Var(v) => f(v),
            Formula::Not(a) => a.visit_vars(f),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    /// Occurrences of the core form, left to right, with their polarity.
    pub fn sites(&self) -> Vec<Site> {
        fn walk(
            f: &Formula,
            pol: Polarity,
            seen: &mut BTreeMap<String, usize>,
            out: &mut Vec<Site>,
        ) {
            match f {
                Formula::Var(v) => {
                    let n = seen.entry(v.clone()).or_insert(0);
                    *n += 1;
                    out.push(Site {
                        var: v.clone(),
                        index: *n,
                        polarity: pol,
                    });
                }
                Formula::Not(a) => walk(a, pol.flip(), seen, out),
                Formula::And(a, b) => {
                    walk(a, pol, seen, out);
                    walk(b, pol, seen, out);
                }
                _ => unreachable!("sites are computed on core form"),
            }
        }
        let core;
        let f = if self.is_core() {
            self
        } else {
            core = self.desugar();
            &core
        };
        let mut out = Vec::new();
        walk(f, Polarity::Positive, &mut BTreeMap::new(), &mut out);
        out
    }

    /// Polarities with which each variable occurs. A variable mapped to a
    /// single polarity is pure.
    pub fn polarities(&self) -> BTreeMap<String, BTreeSet<Polarity>> {
        let mut out: BTreeMap<String, BTreeSet<Polarity>> = BTreeMap::new();
        for s in self.sites() {
            out.entry(s.var).or_default().insert(s.polarity);
        }
        out
    }

    /// Two-valued evaluation; every variable must be resolvable by `val`.
    pub fn eval(&self, val: &impl Fn(&str) -> bool) -> bool {
        match self {
            Formula::Var(v) => val(v),
            Formula::Not(a) => !a.eval(val),
            Formula::And(a, b) => a.eval(val) && b.eval(val),
            Formula::Or(a, b) => a.eval(val) || b.eval(val),
            Formula::Implies(a, b) => !a.eval(val) || b.eval(val),
            Formula::Iff(a, b) => a.eval(val) == b.eval(val),
        }
    }

    /// Simultaneous variable-for-variable substitution. Unmapped variables
    /// are kept.
    pub fn substitute(&self, map: &BTreeMap<String, String>) -> Formula {
        self.map_vars(&mut |v| map.get(v).cloned().unwrap_or_else(|| v.to_string()))
    }

    pub(crate) fn map_vars(&self, f: &mut impl FnMut(&str) -> String) -> Formula {
        match self {
            Formula::Var(v) => Formula::Var(f(v)),
            Formula::Not(a) => Formula::not(a.map_vars(f)),
            Formula::And(a, b) => {
                let a = a.map_vars(f);
                Formula::and(a, b.map_vars(f))
            }
            Formula::Or(a, b) => {
                let a = a.map_vars(f);
                Formula::or(a, b.map_vars(f))
            }
            Formula::Implies(a, b) => {
                let a = a.map_vars(f);
                Formula::implies(a, b.map_vars(f))
            }
            Formula::Iff(a, b) => {
                let a = a.map_vars(f);
                Formula::iff(a, b.map_vars(f))
            }
        }
    }

    /// Renames every leaf of the core form by its 0-based left-to-right
    /// position.
    pub(crate) fn rename_leaves(
        &self,
        next: &mut usize,
        f: &mut impl FnMut(usize, &str) -> String,
    ) -> Formula {
        match self {
            Formula::Var(v) => {
                let name = f(*next, v);
                *next += 1;
                Formula::Var(name)
            }
            Formula::Not(a) => Formula::not(a.rename_leaves(next, f)),
            Formula::And(a, b) => {
                let a = a.rename_leaves(next, f);
                Formula::and(a, b.rename_leaves(next, f))
            }
            _ => unreachable!("leaf renaming runs on core form"),
        }
    }

    /// Replaces the `index`-th (1-based) occurrence of `var` by `with`,
    /// leaving every other occurrence alone. Works on the core form.
    pub fn substitute_occurrence(
        &self,
        var: &str,
        index: usize,
        with: &Formula,
    ) -> Result<Formula> {
        fn walk(
            f: &Formula,
            var: &str,
            target: usize,
            seen: &mut usize,
            with: &Formula,
        ) -> Formula {
            match f {
                Formula::Var(v) if v == var => {
                    *seen += 1;
                    if *seen == target {
                        with.clone()
                    } else {
                        f.clone()
                    }
                }
                Formula::Var(_) => f.clone(),
                Formula::Not(a) => Formula::not(walk(a, var, target, seen, with)),
                Formula::And(a, b) => {
                    let a = walk(a, var, target, seen, with);
                    Formula::and(a, walk(b, var, target, seen, with))
                }
                _ => unreachable!("occurrence substitution runs on core form"),
            }
        }
        let core = if self.is_core() {
            self.clone()
        } else {
            self.desugar()
        };
        let count = core.sites().iter().filter(|s| s.var == var).count();
        if index == 0 || index > count {
            return Err(Error::OccurrenceOutOfRange {
                var: var.to_string(),
                index,
            });
        }
        let mut seen = 0;
        Ok(walk(&core, var, index, &mut seen, with))
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            Formula::Var(..) => 6,
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, c: &Formula, paren: bool) -> fmt::Result {
            if paren {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        }
        let p = self.precedence();
        match self {
            Formula::Var(v) => f.write_str(v),
            Formula::Not(a) => {
                f.write_str("!")?;
                child(f, a, a.precedence() < p)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Iff(a, b) => {
                let op = match self {
                    Formula::And(..) => "&",
                    Formula::Or(..) => "|",
                    _ => "<->",
                };
                // left-associative
                child(f, a, a.precedence() < p)?;
                write!(f, " {op} ")?;
                child(f, b, b.precedence() <= p)
            }
            Formula::Implies(a, b) => {
                // right-associative
                child(f, a, a.precedence() <= p)?;
                f.write_str(" -> ")?;
                child(f, b, b.precedence() < p)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn desugar_disjunction() {
        assert_eq!(f("!q | !r").desugar(), f("!(!!q & !!r)"));
    }

    #[test]
    fn desugar_implication() {
        assert_eq!(f("p -> !q").desugar(), f("!(p & !!q)"));
        assert_eq!(f("p -> !p & q").desugar(), f("!(p & !(!p & q))"));
    }

    #[test]
    fn desugar_biconditional_duplicates() {
        let d = f("p <-> q").desugar();
        assert_eq!(d, f("!(p & !q) & !(q & !p)"));
        assert_eq!(d.sites().len(), 4);
        assert_eq!(f("p <-> q").occurrence_count(), 4);
    }

    #[test]
    fn desugar_keeps_occurrence_order() {
        let s = f("a | (b -> c) & d");
        let names: Vec<_> = s.desugar().sites().into_iter().map(|s| s.var).collect();
        assert_eq!(names, ["a", "b", "c", "d"]);
    }

    #[test]
    fn sites_polarity() {
        let sites = f("!(p & !(!p & q))").sites();
        let got: Vec<_> = sites
            .iter()
            .map(|s| (s.var.as_str(), s.index, s.polarity.sign()))
            .collect();
        assert_eq!(got, [("p", 1, '-'), ("p", 2, '-'), ("q", 1, '+')]);
    }

    #[test]
    fn substitute_is_simultaneous() {
        let map = BTreeMap::from([
            ("p".to_string(), "q".to_string()),
            ("q".to_string(), "p".to_string()),
        ]);
        assert_eq!(f("p & q").substitute(&map), f("q & p"));
        assert_eq!(f("p & q").substitute(&BTreeMap::new()), f("p & q"));
    }

    #[test]
    fn substitute_keeps_shape() {
        let phi = f("(!p & (!q | !r)) | (p & q & r)");
        let map = BTreeMap::from([("p".to_string(), "x1".to_string())]);
        assert_eq!(phi.substitute(&map), f("(!x1 & (!q | !r)) | (x1 & q & r)"));
    }

    #[test]
    fn substitute_single_occurrence() {
        assert_eq!(
            f("p & p").substitute_occurrence("p", 1, &f("r")).unwrap(),
            f("r & p")
        );
        assert_eq!(
            f("!p").substitute_occurrence("p", 1, &f("q")).unwrap(),
            f("!q")
        );
        assert_eq!(
            f("!(p & !q)")
                .substitute_occurrence("q", 1, &f("r"))
                .unwrap(),
            f("!(p & !r)")
        );
        assert!(matches!(
            f("p").substitute_occurrence("p", 2, &f("r")),
            Err(Error::OccurrenceOutOfRange { .. })
        ));
        assert!(f("p").substitute_occurrence("q", 1, &f("r")).is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "p & q & r",
            "p & (q & r)",
            "p -> q -> r",
            "(p -> q) -> r",
            "!(p | q) <-> r",
            "!!p",
            "(!p & (!q | !r)) | p & q & r",
        ] {
            let parsed = f(s);
            assert_eq!(f(&parsed.to_string()), parsed, "{s}");
        }
        assert_eq!(f("(p & q) | r").to_string(), "p & q | r");
    }

    #[test]
    fn eval_surface_and_core_agree() {
        let phi = f("(p -> q) <-> !r | p");
        let core = phi.desugar();
        for bits in 0..8u8 {
            let val = |v: &str| match v {
                "p" => bits & 1 != 0,
                "q" => bits & 2 != 0,
                _ => bits & 4 != 0,
            };
            assert_eq!(phi.eval(&val), core.eval(&val));
        }
    }
}
