//! Ext between simple modules of the rational incidence algebra of a finite
//! poset, read off from the reduced cohomology of open intervals.
//!
//! `Ext^n(S_x, S_y)` is `H̃^{n-2}` of the order complex of `I(x, y)` when
//! `y < x`, `Q` in degree 0 when `x = y`, and zero when `y` is not below `x`.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::groups::{quotient_invariants, SubgroupLattice};
use crate::posets::{order_complex, FinitePoset, PosetError};
use crate::qlinalg::{reduced_cohomology_dims, GradedDims};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IzError {
    #[error("global dimension of the empty poset is undefined")]
    EmptyPoset,
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("cross-check failed: {0}")]
    Discrepancy(String),
}

/// How interval cohomology is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Engine {
    /// Complementation when the poset is known to be a lattice, else direct.
    #[default]
    Auto,
    /// Order complex of every interval.
    Direct,
    /// Complementation recursion; needs a lattice.
    Complement,
}

/// `Ext^*(S_x, S_y)` straight from the order complex of the open interval.
pub fn ext_dims(p: &FinitePoset, x: usize, y: usize) -> Result<GradedDims, IzError> {
    p.check_index(x)?;
    p.check_index(y)?;
    if x == y {
        return Ok(GradedDims::unit(0));
    }
    if !p.leq(y, x) {
        return Ok(GradedDims::new());
    }
    let interval = p.open_interval(x, y)?;
    Ok(reduced_cohomology_dims(&order_complex(&interval)).shift(2))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Shape {
    Any,
    Lattice,
    Modular,
}

type KeyFn<'a> = Box<dyn Fn(usize, usize) -> Vec<u64> + 'a>;

/// Memoising Ext computer over one poset.
pub struct ExtComputer<'a> {
    poset: &'a FinitePoset,
    shape: Shape,
    direct_only: bool,
    key: Option<KeyFn<'a>>,
    memo: HashMap<(usize, usize), GradedDims>,
    type_memo: HashMap<Vec<u64>, GradedDims>,
    fault: Option<(usize, usize)>,
}

/// Lattices up to this size are tested for modularity under `Engine::Auto`.
const AUTO_LATTICE_CHECK: usize = 48;

impl<'a> ExtComputer<'a> {
    pub fn new(poset: &'a FinitePoset) -> Self {
        Self::with_engine(poset, Engine::Auto)
    }

    pub fn with_engine(poset: &'a FinitePoset, engine: Engine) -> Self {
        let shape = match engine {
            Engine::Direct => Shape::Any,
            Engine::Auto if poset.len() > AUTO_LATTICE_CHECK => Shape::Any,
            _ if !poset.is_lattice() => Shape::Any,
            _ if poset.is_modular_lattice() => Shape::Modular,
            _ => Shape::Lattice,
        };
        ExtComputer {
            poset,
            shape,
            direct_only: engine == Engine::Direct,
            key: None,
            memo: HashMap::new(),
            type_memo: HashMap::new(),
            fault: None,
        }
    }

    /// Subgroup lattices are modular, and `I(H, K)` only depends on the
    /// isomorphism type of `H/K`, which becomes the memo key.
    pub fn for_subgroup_lattice(lattice: &'a SubgroupLattice) -> Self {
        let subs = lattice.subgroups();
        ExtComputer {
            poset: lattice.poset(),
            shape: Shape::Modular,
            direct_only: false,
            key: Some(Box::new(move |x, y| {
                quotient_invariants(&subs[x], &subs[y]).expect("y <= x")
            })),
            memo: HashMap::new(),
            type_memo: HashMap::new(),
            fault: None,
        }
    }

    /// Reuses interval results keyed by quotient type from an earlier run.
    pub fn with_type_memo(mut self, memo: HashMap<Vec<u64>, GradedDims>) -> Self {
        self.type_memo = memo;
        self
    }

    pub fn into_type_memo(self) -> HashMap<Vec<u64>, GradedDims> {
        self.type_memo
    }

    pub fn poset(&self) -> &FinitePoset {
        self.poset
    }

    /// Corrupts the result for one pair by adding a class in degree 0.
    #[doc(hidden)]
    pub fn inject_fault(&mut self, x: usize, y: usize) {
        self.fault = Some((x, y));
    }

    pub fn ext(&mut self, x: usize, y: usize) -> Result<GradedDims, IzError> {
        self.poset.check_index(x)?;
        self.poset.check_index(y)?;
        let mut out = if x == y {
            GradedDims::unit(0)
        } else if !self.poset.leq(y, x) {
            GradedDims::new()
        } else {
            self.interval(x, y).shift(2)
        };
        if self.fault == Some((x, y)) {
            out.add(0, 1);
        }
        Ok(out)
    }

    /// Reduced cohomology of `I(x, y)` for `y < x`.
    pub fn interval(&mut self, x: usize, y: usize) -> GradedDims {
        debug_assert!(self.poset.lt(y, x));
        if self.poset.upper_covers(y).contains(&x) {
            return GradedDims::unit(-1);
        }
        if let Some(h) = self.memo.get(&(x, y)) {
            return h.clone();
        }
        let key = self.key.as_ref().map(|k| k(x, y));
        if let Some(h) = key.as_ref().and_then(|k| self.type_memo.get(k)) {
            let h = h.clone();
            self.memo.insert((x, y), h.clone());
            return h;
        }
        let h = if self.direct_only {
            self.direct(x, y)
        } else {
            match self.complements(x, y) {
                Some(bs) => {
                    let mut acc = GradedDims::new();
                    for b in bs {
                        let lower = self.interval(b, y);
                        let upper = self.interval(x, b);
                        acc.add_all(&lower.tensor(&upper).shift(2));
                    }
                    acc
                }
                None => self.direct(x, y),
            }
        };
        if let Some(k) = key {
            self.type_memo.insert(k, h.clone());
        }
        self.memo.insert((x, y), h.clone());
        h
    }

    fn direct(&self, x: usize, y: usize) -> GradedDims {
        let interval = self.poset.induced_convex(&self.poset.open_interval_indices(x, y));
        reduced_cohomology_dims(&order_complex(&interval))
    }

    /// Complements in `[y, x]` of an atom of that interval, when they form
    /// an antichain; `None` sends the pair to the direct route.
    fn complements(&self, x: usize, y: usize) -> Option<Vec<usize>> {
        let p = self.poset;
        let a = *p.upper_covers(y).iter().find(|&&a| p.leq(a, x))?;
        match self.shape {
            Shape::Any => None,
            Shape::Modular => Some(
                p.lower_covers(x)
                    .iter()
                    .copied()
                    .filter(|&b| p.leq(y, b) && !p.leq(a, b))
                    .collect(),
            ),
            Shape::Lattice => {
                let mut span = p.up_set(y).clone();
                span.intersect_with(p.down_set(x));
                let bs: Vec<usize> = span
                    .ones()
                    .filter(|&b| b != x && b != y)
                    .filter(|&b| p.meet(a, b) == Some(y) && p.join(a, b) == Some(x))
                    .collect();
                let antichain = bs
                    .iter()
                    .all(|&b| bs.iter().all(|&c| b == c || !p.leq(b, c)));
                antichain.then_some(bs)
            }
        }
    }

    /// Every nonzero entry over all pairs.
    pub fn table(&mut self) -> ExtTable {
        let n = self.poset.len();
        let mut entries = BTreeMap::new();
        for x in 0..n {
            let below: Vec<usize> = self.poset.down_set(x).ones().collect();
            for y in below {
                let e = self.ext(x, y).expect("indices in range");
                for (d, k) in e.iter() {
                    entries.insert((x, y, d as usize), k);
                }
            }
        }
        // faults may sit on pairs outside the down-sets
        if let Some((x, y)) = self.fault {
            if !self.poset.leq(y, x) {
                entries.insert((x, y, 0), 1);
            }
        }
        ExtTable {
            labels: self.poset.labels().to_vec(),
            entries,
        }
    }

    /// Largest degree with a nonzero Ext. Pairs are visited by decreasing
    /// interval length, which bounds their top degree, so the scan stops
    /// once no remaining pair can beat the best degree found.
    pub fn gldim(&mut self) -> Result<usize, IzError> {
        Ok(self.gldim_witness()?.2)
    }

    /// `(x, y, n)` attaining the global dimension.
    pub fn gldim_witness(&mut self) -> Result<(usize, usize, usize), IzError> {
        let n = self.poset.len();
        if n == 0 {
            return Err(IzError::EmptyPoset);
        }
        let mut best = (0, 0, 0);
        let by_length = pairs_by_length(self.poset);
        for (len, pairs) in by_length.iter().enumerate().rev() {
            if len <= best.2 {
                break;
            }
            for &(x, y) in pairs {
                if let Some(t) = self.ext(x, y)?.top_degree() {
                    if t as usize > best.2 {
                        best = (x, y, t as usize);
                    }
                }
            }
        }
        if let Some((x, y)) = self.fault {
            if let Some(t) = self.ext(x, y)?.top_degree() {
                if t as usize > best.2 {
                    best = (x, y, t as usize);
                }
            }
        }
        Ok(best)
    }
}

/// Comparable pairs `(x, y)`, `y < x`, bucketed by the length of `[y, x]`.
fn pairs_by_length(p: &FinitePoset) -> Vec<Vec<(usize, usize)>> {
    let n = p.len();
    let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); p.height() + 1];
    if let Some(rank) = p.graded_rank() {
        let mut level = vec![FixedBitSet::with_capacity(n); p.height() + 1];
        for (v, &r) in rank.iter().enumerate() {
            level[r].insert(v);
        }
        for len in 1..out.len() {
            for x in 0..n {
                if rank[x] < len {
                    continue;
                }
                let mut d = p.down_set(x).clone();
                d.intersect_with(&level[rank[x] - len]);
                out[len].extend(d.ones().map(|y| (x, y)));
            }
        }
        return out;
    }
    for y in 0..n {
        let mut best = vec![None::<usize>; n];
        best[y] = Some(0);
        for &v in p.linear_extension() {
            if let Some(b) = best[v] {
                for &u in p.upper_covers(v) {
                    best[u] = Some(best[u].map_or(b + 1, |c| c.max(b + 1)));
                }
            }
        }
        for (x, l) in best.into_iter().enumerate() {
            if let Some(l) = l.filter(|&l| l > 0) {
                out[l].push((x, y));
            }
        }
    }
    out
}

/// Global dimension of the incidence algebra, with the default engine.
pub fn gldim_incidence(p: &FinitePoset) -> Result<usize, IzError> {
    ExtComputer::new(p).gldim()
}

/// Global dimension of the incidence algebra of a subgroup lattice.
pub fn gldim_subgroup_lattice(l: &SubgroupLattice) -> Result<usize, IzError> {
    ExtComputer::for_subgroup_lattice(l).gldim()
}

/// Nonzero `dim Ext^n(S_x, S_y)` keyed by `(x, y, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtTable {
    pub labels: Vec<String>,
    pub entries: BTreeMap<(usize, usize, usize), usize>,
}

#[derive(Serialize)]
struct ExtEntry {
    x: usize,
    y: usize,
    n: usize,
    dim: usize,
}

#[derive(Serialize)]
struct ExtTableJson<'a> {
    schema: u32,
    poset_labels: &'a [String],
    entries: Vec<ExtEntry>,
}

impl ExtTable {
    pub fn get(&self, x: usize, y: usize, n: usize) -> usize {
        self.entries.get(&(x, y, n)).copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries.keys().map(|k| k.2).max()
    }

    /// Entries with `x != y`.
    pub fn off_diagonal(&self) -> impl Iterator<Item = ((usize, usize, usize), usize)> + '_ {
        self.entries
            .iter()
            .filter(|(k, _)| k.0 != k.1)
            .map(|(&k, &v)| (k, v))
    }

    /// Entries that differ between two tables, as `(key, self, other)`.
    pub fn diff(&self, other: &ExtTable) -> Vec<((usize, usize, usize), usize, usize)> {
        let mut keys: Vec<_> = self.entries.keys().chain(other.entries.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .filter_map(|k| {
                let (a, b) = (self.get(k.0, k.1, k.2), other.get(k.0, k.1, k.2));
                (a != b).then_some((k, a, b))
            })
            .collect()
    }

    /// JSON form `{schema, poset_labels, entries: [{x, y, n, dim}]}`.
    pub fn to_json_value(&self) -> impl Serialize + '_ {
        ExtTableJson {
            schema: 1,
            poset_labels: &self.labels,
            entries: self
                .entries
                .iter()
                .map(|(&(x, y, n), &dim)| ExtEntry { x, y, n, dim })
                .collect(),
        }
    }
}

/// Subgroup `H` whose pair `(H, Φ(H))` carries the top Ext degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrattiniWitness {
    pub subgroup: usize,
    pub label: String,
    pub frattini: usize,
    pub degree: usize,
    pub gldim: usize,
}

/// Maximises the top Ext degree of `(H, Φ(H))` over all subgroups and
/// checks it against the global dimension of the whole lattice.
pub fn frattini_realization(l: &SubgroupLattice) -> Result<FrattiniWitness, IzError> {
    let mut c = ExtComputer::for_subgroup_lattice(l);
    frattini_realization_with(l, &mut c)
}

pub fn frattini_realization_with(
    l: &SubgroupLattice,
    c: &mut ExtComputer<'_>,
) -> Result<FrattiniWitness, IzError> {
    let mut best: Option<(usize, usize, usize)> = None;
    // larger subgroups first, so ties go to the biggest H
    for h in (0..l.len()).rev() {
        let f = l.frattini(h);
        let d = c.ext(h, f)?.top_degree().unwrap_or(0).max(0) as usize;
        if best.is_none_or(|b| d > b.2) {
            best = Some((h, f, d));
        }
    }
    let (h, f, degree) = best.expect("lattice is non-empty");
    let gldim = c.gldim()?;
    if gldim != degree {
        return Err(IzError::Discrepancy(format!(
            "global dimension {gldim} but the best Frattini pair ({}, {}) reaches {degree}",
            l.label(h),
            l.label(f)
        )));
    }
    Ok(FrattiniWitness {
        subgroup: h,
        label: l.label(h).to_string(),
        frattini: f,
        degree,
        gldim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{parse_group, subgroup_lattice};

    fn lattice(spec: &str) -> SubgroupLattice {
        subgroup_lattice(&parse_group(spec).unwrap()).unwrap()
    }

    #[test]
    fn base_cases() {
        let p = FinitePoset::chain(2);
        assert_eq!(ext_dims(&p, 1, 1).unwrap(), GradedDims::unit(0));
        assert_eq!(ext_dims(&p, 1, 0).unwrap(), GradedDims::unit(1));
        assert_eq!(ext_dims(&p, 0, 1).unwrap(), GradedDims::new());
        assert!(ext_dims(&p, 2, 0).unwrap().is_zero());
        assert!(ext_dims(&p, 7, 0).is_err());
    }

    #[test]
    fn c6_diamond() {
        let l = lattice("C6");
        let (g, e) = (l.whole(), l.trivial());
        assert_eq!(ext_dims(l.poset(), g, e).unwrap(), GradedDims::unit(2));
        assert_eq!(gldim_subgroup_lattice(&l).unwrap(), 2);
    }

    #[test]
    fn engines_agree_on_small_lattices() {
        for spec in ["C12", "C2xC2", "C2xC4", "C30", "C3xC3", "C2xC2xC2"] {
            let l = lattice(spec);
            let direct = ExtComputer::with_engine(l.poset(), Engine::Direct).table();
            let comp = ExtComputer::with_engine(l.poset(), Engine::Complement).table();
            let typed = ExtComputer::for_subgroup_lattice(&l).table();
            assert_eq!(direct, comp, "{spec}");
            assert_eq!(direct, typed, "{spec}");
        }
    }

    #[test]
    fn pentagon_uses_general_complements() {
        // 0 < a < b < 1, 0 < c < 1
        let p = FinitePoset::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        let mut c = ExtComputer::with_engine(&p, Engine::Complement);
        assert!(c.shape == Shape::Lattice);
        assert_eq!(c.table(), ExtComputer::with_engine(&p, Engine::Direct).table());
    }

    #[test]
    fn elementary_abelian_top() {
        // proper part of the subspace lattice of F_2^3 is a wedge of 8 circles
        let l = lattice("C2xC2xC2");
        let mut c = ExtComputer::for_subgroup_lattice(&l);
        assert_eq!(c.ext(l.whole(), l.trivial()).unwrap(), GradedDims::from_pairs([(3, 8)]));
    }

    #[test]
    fn empty_rejected_discrete_zero() {
        assert_eq!(gldim_incidence(&FinitePoset::discrete(0)), Err(IzError::EmptyPoset));
        assert_eq!(gldim_incidence(&FinitePoset::discrete(3)).unwrap(), 0);
    }

    #[test]
    fn frattini_examples() {
        let l = lattice("C2xC2");
        let w = frattini_realization(&l).unwrap();
        assert_eq!((w.subgroup, w.frattini, w.degree), (l.whole(), l.trivial(), 2));
        let l = lattice("C12");
        let w = frattini_realization(&l).unwrap();
        assert_eq!((w.subgroup, w.degree), (l.whole(), 2));
        assert_eq!(l.subgroup(w.frattini).order(), 2);
    }

    #[test]
    fn fault_is_visible() {
        let l = lattice("C6");
        let clean = ExtComputer::for_subgroup_lattice(&l).table();
        let mut c = ExtComputer::for_subgroup_lattice(&l);
        c.inject_fault(3, 0);
        assert_eq!(c.table().diff(&clean).len(), 1);
    }
}
