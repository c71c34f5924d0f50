//! Compliant equivalence relations on occurrences and the enumeration of
//! minimal inconsistency relations (MIRs), maximal consistency relations
//! (MCRs) and the objects derived from them.
//!
//! A relation is stored as one set partition per variable, so relating
//! occurrences of different variables cannot be expressed at all. The
//! refinement order on relations is inclusion of their pair sets.
//!
//! Inconsistency of a relation (the occurrence-renamed base plus one
//! equality per related pair is unsatisfiable) is upward closed in that
//! order. Two consequences drive the enumerators:
//!
//! * a relation is minimal inconsistent iff it is inconsistent and every
//!   immediate refinement (one block split in two) is consistent, and
//!   maximal consistent iff it is consistent and every immediate coarsening
//!   (two blocks of one variable merged) is inconsistent;
//! * every non-singleton block of a MIR holds a positive and a negative
//!   occurrence, and every MCR has at most two blocks per variable.
//!
//! MIRs are found by a breadth-first walk upward from the discrete relation
//! through consistent relations whose non-singleton blocks all have both
//! polarities. MCRs are found among the relations with at most two blocks per
//! variable.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::caps::Caps;
use crate::error::{check_cap, Error, Resource, Result};
use crate::formula::{Base, OccId, Polarity};
use crate::semantics::Problem;

/// Unordered occurrence pair, stored with the smaller ordinal first.
pub type Pair = (OccId, OccId);

pub fn pair(a: OccId, b: OccId) -> Pair {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A compliant equivalence relation on the occurrences of a base.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccRelation {
    // parts[var] = blocks over the occurrences of that variable; each block
    // sorted, blocks ordered by their first element
    parts: Vec<Vec<Vec<OccId>>>,
}

impl OccRelation {
    /// Every occurrence in its own block.
    pub fn discrete(base: &Base) -> OccRelation {
        OccRelation {
            parts: (0..base.variables().len())
                .map(|v| base.occurrences_of(v).iter().map(|&o| vec![o]).collect())
                .collect(),
        }
    }

    /// One block per variable: relates all occurrences of the same variable.
    pub fn canonical(base: &Base) -> OccRelation {
        OccRelation {
            parts: (0..base.variables().len())
                .map(|v| vec![base.occurrences_of(v).to_vec()])
                .collect(),
        }
    }

    fn normalized(mut parts: Vec<Vec<Vec<OccId>>>) -> OccRelation {
        for blocks in &mut parts {
            blocks.retain(|b| !b.is_empty());
            for b in blocks.iter_mut() {
                b.sort();
            }
            blocks.sort();
        }
        OccRelation { parts }
    }

    /// Builds a relation from explicit per-variable blocks, checking that they
    /// partition each variable's occurrences.
    pub fn from_parts(base: &Base, parts: Vec<Vec<Vec<OccId>>>) -> Result<OccRelation> {
        if parts.len() != base.variables().len() {
            return Err(Error::RelationShape);
        }
        let r = OccRelation::normalized(parts);
        for (v, blocks) in r.parts.iter().enumerate() {
            let mut all: Vec<OccId> = blocks.iter().flatten().copied().collect();
            all.sort();
            if all != base.occurrences_of(v) {
                return Err(Error::RelationShape);
            }
        }
        Ok(r)
    }

    /// The smallest equivalence relation containing `pairs`. Fails if a pair
    /// joins occurrences of different variables.
    pub fn closure<I: IntoIterator<Item = Pair>>(base: &Base, pairs: I) -> Result<OccRelation> {
        let n = base.occurrences().len();
        let mut ds = crate::unionfind::DisjointSets::new(n);
        for (a, b) in pairs {
            if a.0 >= n || b.0 >= n || base.var_of(a) != base.var_of(b) {
                return Err(Error::RelationShape);
            }
            ds.union(a.0, b.0);
        }
        let mut parts = vec![Vec::new(); base.variables().len()];
        for class in ds.classes() {
            let v = base.var_of(OccId(class[0]));
            parts[v].push(class.into_iter().map(OccId).collect());
        }
        Ok(OccRelation::normalized(parts))
    }

    /// Relates two occurrences iff they share a variable and a label.
    pub fn from_labels<T: Eq + std::hash::Hash>(base: &Base, labels: &[T]) -> OccRelation {
        let mut parts = Vec::with_capacity(base.variables().len());
        for v in 0..base.variables().len() {
            let mut blocks: Vec<Vec<OccId>> = Vec::new();
            let mut slot: HashMap<&T, usize> = HashMap::new();
            for &o in base.occurrences_of(v) {
                let i = *slot.entry(&labels[o.0]).or_insert_with(|| {
                    blocks.push(Vec::new());
                    blocks.len() - 1
                });
                blocks[i].push(o);
            }
            parts.push(blocks);
        }
        OccRelation::normalized(parts)
    }

    /// Blocks over the occurrences of variable `var`.
    pub fn var_blocks(&self, var: usize) -> &[Vec<OccId>] {
        &self.parts[var]
    }

    /// All blocks, grouped by variable in variable order.
    pub fn blocks(&self) -> impl Iterator<Item = &[OccId]> {
        self.parts.iter().flatten().map(Vec::as_slice)
    }

    pub fn variable_count(&self) -> usize {
        self.parts.len()
    }

    /// Related pairs, excluding the diagonal.
    pub fn pairs(&self) -> BTreeSet<Pair> {
        let mut out = BTreeSet::new();
        for b in self.blocks() {
            for (i, &x) in b.iter().enumerate() {
                for &y in &b[i + 1..] {
                    out.insert((x, y));
                }
            }
        }
        out
    }

    pub fn sorted_pairs(&self) -> Vec<Pair> {
        self.pairs().into_iter().collect()
    }

    /// `self ⊆ other` as pair sets: every block of `self` lies inside a
    /// block of `other`.
    pub fn refines(&self, other: &OccRelation) -> bool {
        self.parts.iter().zip(&other.parts).all(|(mine, theirs)| {
            mine.iter()
                .all(|b| theirs.iter().any(|t| b.iter().all(|o| t.contains(o))))
        })
    }

    /// Relations obtained by merging two blocks of one variable.
    pub fn coarsenings(&self) -> Vec<OccRelation> {
        let mut out = Vec::new();
        for (v, blocks) in self.parts.iter().enumerate() {
            for i in 0..blocks.len() {
                for j in i + 1..blocks.len() {
                    out.push(self.merged(v, i, j));
                }
            }
        }
        out
    }

    fn merged(&self, var: usize, i: usize, j: usize) -> OccRelation {
        let mut parts = self.parts.clone();
        let blocks = &mut parts[var];
        let moved = blocks.remove(j);
        blocks[i].extend(moved);
        blocks[i].sort();
        blocks.sort();
        OccRelation { parts }
    }

    /// Relations obtained by splitting one block into two nonempty parts.
    pub fn refinements(&self) -> Vec<OccRelation> {
        let mut out = Vec::new();
        for (v, blocks) in self.parts.iter().enumerate() {
            for (bi, block) in blocks.iter().enumerate() {
                let k = block.len();
                if k < 2 {
                    continue;
                }
                // the first element stays in the left part
                for mask in 1u64..(1u64 << (k - 1)) {
                    let (mut left, mut right) = (vec![block[0]], Vec::new());
                    for (i, &o) in block[1..].iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            right.push(o);
                        } else {
                            left.push(o);
                        }
                    }
                    let mut parts = self.parts.clone();
                    parts[v][bi] = left;
                    parts[v].push(right);
                    parts[v].sort();
                    out.push(OccRelation { parts });
                }
            }
        }
        out
    }

    /// Occurrence pairs (one per non-first element of each block) whose
    /// equalities generate this relation.
    pub fn spanning_pairs(&self) -> Vec<Pair> {
        self.blocks()
            .flat_map(|b| b.windows(2).map(|w| (w[0], w[1])))
            .collect()
    }

    /// Human-readable block list, e.g. `{p@f0#1+, p@f1#1-} {q@f0#1+}`.
    pub fn display<'a>(&'a self, base: &'a Base) -> impl fmt::Display + 'a {
        DisplayRelation { rel: self, base }
    }
}

struct DisplayRelation<'a> {
    rel: &'a OccRelation,
    base: &'a Base,
}

impl fmt::Display for DisplayRelation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut blocks: Vec<&[OccId]> = self.rel.blocks().collect();
        blocks.sort_by_key(|b| b[0]);
        for (i, b) in blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str("{")?;
            for (j, o) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.base.occurrence(*o))?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

/// Sorts relations by their sorted pair lists.
pub fn sort_relations(rels: &mut [OccRelation]) {
    rels.sort_by_cached_key(OccRelation::sorted_pairs);
}

/// Complement of an MCR's pairs within the canonical relation's pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CMcr {
    pub pairs: BTreeSet<Pair>,
}

fn has_both_polarities(base: &Base, block: impl IntoIterator<Item = OccId>) -> bool {
    let (mut pos, mut neg) = (false, false);
    for o in block {
        match base.polarity(o) {
            Polarity::Positive => pos = true,
            Polarity::Negative => neg = true,
        }
    }
    pos && neg
}

/// Consistency oracle and enumerators over the relation lattice of one base.
/// The occurrence-renamed base is compiled once; verdicts are memoized.
pub struct Lattice<'b> {
    base: &'b Base,
    problem: Problem,
    occ_var: Vec<usize>,
    caps: Caps,
    memo: RefCell<HashMap<OccRelation, bool>>,
}

impl<'b> Lattice<'b> {
    pub fn new(base: &'b Base, caps: Caps) -> Lattice<'b> {
        let (renamed, renaming) = base.crename();
        let problem = Problem::new(
            renamed.formulas(),
            renaming.names().iter().map(String::as_str),
        );
        let occ_var = renaming
            .names()
            .iter()
            .map(|n| {
                problem
                    .var_index(n)
                    .expect("renamed occurrence is a problem variable")
            })
            .collect();
        Lattice {
            base,
            problem,
            occ_var,
            caps,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn base(&self) -> &'b Base {
        self.base
    }

    /// Whether the renamed base stays satisfiable when the occurrences
    /// related by `rel` are forced equal.
    pub fn is_consistent(&self, rel: &OccRelation) -> bool {
        if let Some(&v) = self.memo.borrow().get(rel) {
            return v;
        }
        let merges: Vec<(usize, usize)> = rel
            .spanning_pairs()
            .into_iter()
            .map(|(a, b)| (self.occ_var[a.0], self.occ_var[b.0]))
            .collect();
        let v = self.problem.is_satisfiable(&merges);
        self.memo.borrow_mut().insert(rel.clone(), v);
        v
    }

    fn check_occurrences(&self) -> Result<()> {
        check_cap(
            Resource::Occurrences,
            self.caps.occurrences,
            self.base.occurrences().len(),
        )
    }

    fn check_visited(&self, n: usize) -> Result<()> {
        check_cap(Resource::Relations, self.caps.relations as usize, n)
    }

    pub fn is_mir(&self, rel: &OccRelation) -> bool {
        !self.is_consistent(rel) && rel.refinements().iter().all(|r| self.is_consistent(r))
    }

    pub fn is_mcr(&self, rel: &OccRelation) -> bool {
        self.is_consistent(rel) && rel.coarsenings().iter().all(|r| !self.is_consistent(r))
    }

    /// All MIRs, sorted by pair list.
    pub fn mirs(&self) -> Result<Vec<OccRelation>> {
        self.check_occurrences()?;
        let bottom = OccRelation::discrete(self.base);
        if !self.is_consistent(&bottom) {
            return Ok(vec![bottom]);
        }
        let mut seen: HashSet<OccRelation> = HashSet::from([bottom.clone()]);
        let mut queue = VecDeque::from([bottom]);
        let mut found = Vec::new();
        while let Some(rel) = queue.pop_front() {
            for (v, blocks) in rel.parts.iter().enumerate() {
                for i in 0..blocks.len() {
                    for j in i + 1..blocks.len() {
                        let joined = blocks[i].iter().chain(&blocks[j]).copied();
                        if !has_both_polarities(self.base, joined) {
                            continue;
                        }
                        let next = rel.merged(v, i, j);
                        if !seen.insert(next.clone()) {
                            continue;
                        }
                        self.check_visited(seen.len())?;
                        if self.is_consistent(&next) {
                            queue.push_back(next);
                        } else if self.is_mir(&next) {
                            found.push(next);
                        }
                    }
                }
            }
        }
        sort_relations(&mut found);
        Ok(found)
    }

    /// All MCRs, sorted by pair list.
    pub fn mcrs(&self) -> Result<Vec<OccRelation>> {
        self.check_occurrences()?;
        // per variable: the one-block partition and every two-block partition
        let options: Vec<Vec<Vec<Vec<OccId>>>> = (0..self.base.variables().len())
            .map(|v| at_most_two_blocks(self.base.occurrences_of(v)))
            .collect();
        let total = options
            .iter()
            .try_fold(1u64, |acc, o| acc.checked_mul(o.len() as u64))
            .unwrap_or(u64::MAX);
        if total > self.caps.relations {
            return Err(Error::CapExceeded {
                resource: Resource::Relations,
                limit: self.caps.relations,
                actual: total,
            });
        }
        let mut found = Vec::new();
        let mut odometer = vec![0usize; options.len()];
        loop {
            let parts = odometer
                .iter()
                .zip(&options)
                .map(|(&i, o)| o[i].clone())
                .collect();
            let rel = OccRelation::normalized(parts);
            if self.is_mcr(&rel) {
                found.push(rel);
            }
            // advance
            let mut k = 0;
            loop {
                if k == odometer.len() {
                    sort_relations(&mut found);
                    return Ok(found);
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

    /// MCRs whose positive/negative pair set is maximal among all MCRs.
    pub fn bmcrs(&self, mcrs: &[OccRelation]) -> Vec<OccRelation> {
        bmcrs_among(self.base, mcrs)
    }

    /// Minimal inconsistent subsets of formulas (by index), searched by
    /// increasing size.
    pub fn mises(&self) -> Result<Vec<BTreeSet<usize>>> {
        let n = self.base.len();
        check_cap(Resource::Occurrences, self.caps.occurrences, n)?;
        let fs = self.base.formulas();
        let mut found: Vec<BTreeSet<usize>> = Vec::new();
        for k in 1..=n {
            for subset in combinations(n, k) {
                let set: BTreeSet<usize> = subset.iter().copied().collect();
                if found.iter().any(|m| m.is_subset(&set)) {
                    continue;
                }
                let chosen: Vec<_> = subset.iter().map(|&i| fs[i].clone()).collect();
                if !crate::semantics::is_consistent(&chosen, &[]) {
                    found.push(set);
                }
            }
        }
        found.sort_by_cached_key(|s| s.iter().copied().collect::<Vec<_>>());
        Ok(found)
    }
}

fn at_most_two_blocks(occs: &[OccId]) -> Vec<Vec<Vec<OccId>>> {
    let mut out = vec![vec![occs.to_vec()]];
    let k = occs.len();
    if k >= 2 {
        for mask in 1u64..(1u64 << (k - 1)) {
            let (mut left, mut right) = (vec![occs[0]], Vec::new());
            for (i, &o) in occs[1..].iter().enumerate() {
                if mask >> i & 1 == 1 {
                    right.push(o);
                } else {
                    left.push(o);
                }
            }
            out.push(vec![left, right]);
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
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
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// `PN(rel)`: related (positive, negative) occurrence pairs, oriented
/// positive first.
pub fn pn_pairs(base: &Base, rel: &OccRelation) -> BTreeSet<(OccId, OccId)> {
    let mut out = BTreeSet::new();
    for b in rel.blocks() {
        for &x in b {
            for &y in b {
                if base.polarity(x) == Polarity::Positive && base.polarity(y) == Polarity::Negative
                {
                    out.insert((x, y));
                }
            }
        }
    }
    out
}

/// Members of `mcrs` whose PN set is not strictly contained in another's.
pub fn bmcrs_among(base: &Base, mcrs: &[OccRelation]) -> Vec<OccRelation> {
    let pns: Vec<_> = mcrs.iter().map(|m| pn_pairs(base, m)).collect();
    mcrs.iter()
        .zip(&pns)
        .filter(|(_, pn)| {
            !pns.iter()
                .any(|other| pn.is_subset(other) && pn.len() < other.len())
        })
        .map(|(m, _)| m.clone())
        .collect()
}

pub fn canonical_relation(base: &Base) -> OccRelation {
    OccRelation::canonical(base)
}

pub fn relation_consistent(base: &Base, rel: &OccRelation) -> bool {
    Lattice::new(base, Caps::default()).is_consistent(rel)
}

pub fn enumerate_mirs(base: &Base) -> Result<Vec<OccRelation>> {
    Lattice::new(base, Caps::default()).mirs()
}

pub fn enumerate_mcrs(base: &Base) -> Result<Vec<OccRelation>> {
    Lattice::new(base, Caps::default()).mcrs()
}

pub fn enumerate_bmcrs(base: &Base) -> Result<Vec<OccRelation>> {
    let mcrs = enumerate_mcrs(base)?;
    Ok(bmcrs_among(base, &mcrs))
}

pub fn enumerate_mises(base: &Base) -> Result<Vec<BTreeSet<usize>>> {
    Lattice::new(base, Caps::default()).mises()
}

/// The complement `pairs(canonical) ∖ pairs(mcr)`.
pub fn cmcr_of(base: &Base, mcr: &OccRelation) -> CMcr {
    let own = mcr.pairs();
    CMcr {
        pairs: OccRelation::canonical(base)
            .pairs()
            .into_iter()
            .filter(|p| !own.contains(p))
            .collect(),
    }
}

pub fn cmcrs(base: &Base, mcrs: &[OccRelation]) -> Vec<CMcr> {
    mcrs.iter().map(|m| cmcr_of(base, m)).collect()
}

/// Indices of the formulas holding an occurrence in a block of size ≥ 2.
pub fn omis_of(base: &Base, mir: &OccRelation) -> BTreeSet<usize> {
    mir.blocks()
        .filter(|b| b.len() >= 2)
        .flatten()
        .map(|&o| base.occurrence(o).formula_index)
        .collect()
}

/// The blocks of `rel` over the occurrences of variable `var`.
pub fn eq_classes_of(base: &Base, rel: &OccRelation, var: &str) -> Result<Vec<Vec<OccId>>> {
    let v = base.require_var(var)?;
    Ok(rel.var_blocks(v).to_vec())
}
