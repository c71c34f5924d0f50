use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{parse_lines, Formula, Polarity};
use crate::error::{Error, Result};

/// Index of an occurrence in a [`Base`]; `OccId(k)` has global ordinal `k + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Occurrence {
    pub variable: String,
    /// 0-based position of the formula in the base.
    pub formula_index: usize,
    /// 1-based index of this occurrence among the occurrences of the same
    /// variable inside its formula.
    pub index_in_formula: usize,
    /// 1-based position among all occurrences of the base conjunction.
    pub global_ordinal: usize,
    /// 1-based index among the occurrences of the same variable in the base
    /// conjunction (the subscript in `p₃⁻`).
    pub var_rank: usize,
    pub polarity: Polarity,
}

impl Occurrence {
    pub fn id(&self) -> OccId {
        OccId(self.global_ordinal - 1)
    }

    /// Short label in subscript-superscript style, e.g. `p3-`.
    pub fn short_label(&self) -> String {
        format!("{}{}{}", self.variable, self.var_rank, self.polarity.sign())
    }
}

/// Prints as `p@f<formula>#<index><sign>`.
impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}@f{}#{}{}",
            self.variable,
            self.formula_index,
            self.index_in_formula,
            self.polarity.sign()
        )
    }
}

/// An ordered propositional base. Formula order is the input order; it fixes
/// occurrence numbering and is never changed.
#[derive(Debug, Clone)]
pub struct Base {
    surface: Vec<Formula>,
    formulas: Vec<Formula>,
    occurrences: Vec<Occurrence>,
    variables: Vec<String>,
    var_index: BTreeMap<String, usize>,
    occ_by_var: Vec<Vec<OccId>>,
}

impl Base {
    /// Builds a base from surface formulas, desugaring each to core form.
    pub fn new(surface: Vec<Formula>) -> Base {
        let formulas: Vec<Formula> = surface.iter().map(Formula::desugar).collect();
        let mut var_index = BTreeMap::new();
        for f in &formulas {
            for v in f.variables() {
                var_index.insert(v, 0);
            }
        }
        let variables: Vec<String> = var_index.keys().cloned().collect();
        for (i, v) in variables.iter().enumerate() {
            var_index.insert(v.clone(), i);
        }

        let mut occurrences = Vec::new();
        let mut occ_by_var = vec![Vec::new(); variables.len()];
        for (fi, f) in formulas.iter().enumerate() {
            for site in f.sites() {
                let vi = var_index[&site.var];
                let id = OccId(occurrences.len());
                occ_by_var[vi].push(id);
                occurrences.push(Occurrence {
                    variable: site.var,
                    formula_index: fi,
                    index_in_formula: site.index,
                    global_ordinal: id.0 + 1,
                    var_rank: occ_by_var[vi].len(),
                    polarity: site.polarity,
                });
            }
        }

        Base {
            surface,
            formulas,
            occurrences,
            variables,
            var_index,
            occ_by_var,
        }
    }

    pub fn parse(text: &str) -> Result<Base> {
        Ok(Base::new(parse_lines(text)?))
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    /// Formulas as written.
    pub fn surface(&self) -> &[Formula] {
        &self.surface
    }

    /// Formulas in core form.
    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    /// Conjunction of the core formulas; `None` for the empty base.
    pub fn conjunction(&self) -> Option<Formula> {
        Formula::conjoin(self.formulas.iter().cloned())
    }

    /// Variables of the base in lexicographic order.
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_index.get(name).copied()
    }

    pub fn contains_var(&self, name: &str) -> bool {
        self.var_index.contains_key(name)
    }

    /// All occurrences sorted by global ordinal.
    pub fn occurrences(&self) -> &[Occurrence] {
        &self.occurrences
    }

    pub fn occurrence(&self, id: OccId) -> &Occurrence {
        &self.occurrences[id.0]
    }

    /// Occurrences of the variable with index `var`, in ordinal order.
    pub fn occurrences_of(&self, var: usize) -> &[OccId] {
        &self.occ_by_var[var]
    }

    pub fn var_of(&self, id: OccId) -> usize {
        self.var_index[&self.occurrences[id.0].variable]
    }

    pub fn polarity(&self, id: OccId) -> Polarity {
        self.occurrences[id.0].polarity
    }

    /// Core formulas with each occurrence renamed by `name(occ, variable)`.
    pub fn rename_occurrences(&self, mut name: impl FnMut(OccId, &str) -> String) -> Vec<Formula> {
        let mut next = 0;
        self.formulas
            .iter()
            .map(|f| f.rename_leaves(&mut next, &mut |k, v| name(OccId(k), v)))
            .collect()
    }

    /// Evaluates the base conjunction with one truth value per occurrence.
    pub fn eval_by_occurrence(&self, values: &[bool]) -> bool {
        fn walk(f: &Formula, values: &[bool], next: &mut usize) -> bool {
            match f {
                Formula::Var(_) => {
                    let v = values[*next];
                    *next += 1;
                    v
                }
                Formula::Not(a) => !walk(a, values, next),
                Formula::And(a, b) => {
                    // evaluate both sides so the leaf counter stays aligned
                    let x = walk(a, values, next);
                    let y = walk(b, values, next);
                    x && y
                }
                _ => unreachable!("base formulas are in core form"),
            }
        }
        assert_eq!(values.len(), self.occurrences.len());
        let mut next = 0;
        let mut ok = true;
        for f in &self.formulas {
            ok &= walk(f, values, &mut next);
        }
        ok
    }

    /// The fixed occurrence renaming `R`: occurrence with global ordinal `k`
    /// becomes `_o{k}`. Returns `R(K)` as a base together with the map.
    pub fn crename(&self) -> (Base, Renaming) {
        let renaming = Renaming::for_base(self);
        let renamed = self.rename_occurrences(|id, _| renaming.name(id).to_string());
        (Base::new(renamed), renaming)
    }
}

/// Injective map from occurrences to reserved fresh names `_o1, _o2, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Renaming {
    names: Vec<String>,
    inverse: HashMap<String, OccId>,
}

impl Renaming {
    pub fn fresh_name(id: OccId) -> String {
        format!("_o{}", id.0 + 1)
    }

    pub fn for_base(base: &Base) -> Renaming {
        let names: Vec<String> = (0..base.occurrences().len())
            .map(|k| Renaming::fresh_name(OccId(k)))
            .collect();
        let inverse = names
            .iter()
            .enumerate()
            .map(|(k, n)| (n.clone(), OccId(k)))
            .collect();
        Renaming { names, inverse }
    }

    pub fn name(&self, id: OccId) -> &str {
        &self.names[id.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn occurrence_of(&self, name: &str) -> Option<OccId> {
        self.inverse.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

impl Base {
    /// Looks up a variable index, reporting unknown names.
    pub fn require_var(&self, name: &str) -> Result<usize> {
        self.var_index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }
}
