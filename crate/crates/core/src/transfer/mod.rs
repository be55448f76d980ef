//! Transfer systems on the subgroup lattice of a finite abelian group.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::groups::{GroupError, SubgroupLattice};
use crate::posets::FinitePoset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransferError {
    #[error("generator {0} -> {1} is not an inclusion")]
    NotContained(String, String),
    #[error("{0} is not the representative of an inseparability class")]
    NotRepresentative(String),
    #[error("transfer system is not disk-like: {0} -> {1} is not generated by arrows into G")]
    NotDiskLike(String, String),
    #[error("invalid transfer system: {0}")]
    Invalid(Violation),
    #[error("group has {found} subgroups, over the enumeration budget of {max}")]
    BudgetExceeded { found: usize, max: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// First failing axiom found by [`validate`], with subgroup labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    NotRefiningInclusion { k: String, h: String },
    NotReflexive { k: String },
    NotAntisymmetric { k: String, h: String },
    NotTransitive { a: String, b: String, c: String },
    NotRestrictionClosed { k: String, h: String, l: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotRefiningInclusion { k, h } => write!(f, "{k} -> {h} but {k} is not a subgroup of {h}"),
            Violation::NotReflexive { k } => write!(f, "missing identity arrow at {k}"),
            Violation::NotAntisymmetric { k, h } => write!(f, "{k} -> {h} and {h} -> {k}"),
            Violation::NotTransitive { a, b, c } => write!(f, "{a} -> {b} -> {c} but not {a} -> {c}"),
            Violation::NotRestrictionClosed { k, h, l } => {
                write!(f, "{k} -> {h} and {l} <= {h}, but the restriction to {l} is missing")
            }
        }
    }
}

/// A relation on subgroup indices, `K -> H` stored as `rel[K][H]`.
#[derive(Clone)]
pub struct TransferSystem {
    lattice: Arc<SubgroupLattice>,
    rel: Vec<FixedBitSet>,
}

impl PartialEq for TransferSystem {
    fn eq(&self, other: &Self) -> bool {
        self.rel == other.rel
    }
}
impl Eq for TransferSystem {}

impl fmt::Debug for TransferSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrows: Vec<String> = self
            .arrows()
            .into_iter()
            .filter(|(k, h)| k != h)
            .map(|(k, h)| format!("{} -> {}", self.lattice.label(k), self.lattice.label(h)))
            .collect();
        f.debug_struct("TransferSystem").field("arrows", &arrows).finish()
    }
}

impl TransferSystem {
    /// Wraps an arbitrary relation; call [`validate`] before trusting it.
    pub fn from_pairs(lattice: &Arc<SubgroupLattice>, pairs: &[(usize, usize)]) -> Self {
        let n = lattice.len();
        let mut rel = vec![FixedBitSet::with_capacity(n); n];
        for &(k, h) in pairs {
            rel[k].insert(h);
        }
        TransferSystem {
            lattice: lattice.clone(),
            rel,
        }
    }

    /// Identity arrows only.
    pub fn trivial(lattice: &Arc<SubgroupLattice>) -> Self {
        let pairs: Vec<_> = (0..lattice.len()).map(|i| (i, i)).collect();
        Self::from_pairs(lattice, &pairs)
    }

    /// Every inclusion.
    pub fn complete(lattice: &Arc<SubgroupLattice>) -> Self {
        TransferSystem {
            lattice: lattice.clone(),
            rel: (0..lattice.len())
                .map(|k| lattice.poset().up_set(k).clone())
                .collect(),
        }
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    #[inline]
    pub fn has(&self, k: usize, h: usize) -> bool {
        self.rel[k].contains(h)
    }

    pub fn targets(&self, k: usize) -> &FixedBitSet {
        &self.rel[k]
    }

    /// All arrows `(K, H)` including identities, sorted.
    pub fn arrows(&self) -> Vec<(usize, usize)> {
        (0..self.rel.len())
            .flat_map(|k| self.rel[k].ones().map(move |h| (k, h)))
            .collect()
    }

    pub fn arrow_count(&self) -> usize {
        self.rel.iter().map(|r| r.count_ones(..)).sum()
    }

    /// `T1 <= T2` as sets of arrows.
    pub fn is_subsystem_of(&self, other: &TransferSystem) -> bool {
        self.rel.iter().zip(&other.rel).all(|(a, b)| a.is_subset(b))
    }

    pub fn is_complete(&self) -> bool {
        *self == Self::complete(&self.lattice)
    }

    pub fn is_trivial(&self) -> bool {
        *self == Self::trivial(&self.lattice)
    }

    /// `Sub_G^O = {H : H -> G}`.
    pub fn sub_o(&self) -> FixedBitSet {
        let g = self.lattice.whole();
        let mut s = FixedBitSet::with_capacity(self.rel.len());
        for h in 0..self.rel.len() {
            if self.has(h, g) {
                s.insert(h);
            }
        }
        s
    }

    /// Non-identity arrows into `G`.
    pub fn generators_into_whole(&self) -> Vec<(usize, usize)> {
        let g = self.lattice.whole();
        self.sub_o().ones().filter(|&h| h != g).map(|h| (h, g)).collect()
    }

    fn labelled(&self, k: usize, h: usize) -> (String, String) {
        (self.lattice.label(k).to_string(), self.lattice.label(h).to_string())
    }
}

/// Smallest transfer system containing the generators: a worklist fixed
/// point of reflexivity, transitivity and restriction.
pub fn close(
    lattice: &Arc<SubgroupLattice>,
    generators: &[(usize, usize)],
) -> Result<TransferSystem, TransferError> {
    let p = lattice.poset();
    let n = lattice.len();
    for &(k, h) in generators {
        if !p.leq(k, h) {
            return Err(TransferError::NotContained(
                lattice.label(k).into(),
                lattice.label(h).into(),
            ));
        }
    }
    let mut out = vec![FixedBitSet::with_capacity(n); n];
    let mut inc = vec![FixedBitSet::with_capacity(n); n];
    for i in 0..n {
        out[i].insert(i);
        inc[i].insert(i);
    }
    let mut work: Vec<(usize, usize)> = Vec::new();
    let add = |k: usize, h: usize, out: &mut Vec<FixedBitSet>, inc: &mut Vec<FixedBitSet>, work: &mut Vec<(usize, usize)>| {
        if !out[k].contains(h) {
            out[k].insert(h);
            inc[h].insert(k);
            work.push((k, h));
        }
    };
    for &(k, h) in generators {
        add(k, h, &mut out, &mut inc, &mut work);
    }
    while let Some((k, h)) = work.pop() {
        // restriction along every L <= H
        for l in p.down_set(h).ones() {
            let m = lattice.meet(k, l);
            add(m, l, &mut out, &mut inc, &mut work);
        }
        // transitivity on both sides
        let after: Vec<usize> = out[h].ones().collect();
        for m in after {
            add(k, m, &mut out, &mut inc, &mut work);
        }
        let before: Vec<usize> = inc[k].ones().collect();
        for j in before {
            add(j, h, &mut out, &mut inc, &mut work);
        }
    }
    Ok(TransferSystem {
        lattice: lattice.clone(),
        rel: out,
    })
}

/// Checks the axioms and reports the first violation.
pub fn validate(t: &TransferSystem) -> Result<(), Violation> {
    let lat = &t.lattice;
    let p = lat.poset();
    let n = lat.len();
    for k in 0..n {
        if !t.has(k, k) {
            return Err(Violation::NotReflexive {
                k: lat.label(k).into(),
            });
        }
    }
    for k in 0..n {
        for h in t.rel[k].ones() {
            if !p.leq(k, h) {
                let (k, h) = t.labelled(k, h);
                return Err(Violation::NotRefiningInclusion { k, h });
            }
            if h != k && t.has(h, k) {
                let (k, h) = t.labelled(k, h);
                return Err(Violation::NotAntisymmetric { k, h });
            }
        }
    }
    for a in 0..n {
        for b in t.rel[a].ones() {
            if let Some(c) = t.rel[b].ones().find(|&c| !t.has(a, c)) {
                return Err(Violation::NotTransitive {
                    a: lat.label(a).into(),
                    b: lat.label(b).into(),
                    c: lat.label(c).into(),
                });
            }
        }
    }
    for k in 0..n {
        for h in t.rel[k].ones() {
            for l in p.down_set(h).ones() {
                let m = lat.meet(k, l);
                if !t.has(m, l) {
                    let (k, h) = t.labelled(k, h);
                    return Err(Violation::NotRestrictionClosed {
                        k,
                        h,
                        l: lat.label(l).into(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// `T` equals the closure of its own arrows into `G`.
pub fn is_disk_like(t: &TransferSystem) -> bool {
    disk_like_witness(t).is_none()
}

/// An arrow of `T` missing from the closure of its arrows into `G`.
pub fn disk_like_witness(t: &TransferSystem) -> Option<(usize, usize)> {
    let c = close(&t.lattice, &t.generators_into_whole()).expect("arrows of T are inclusions");
    t.arrows().into_iter().find(|&(k, h)| !c.has(k, h))
}

/// Classes of subgroups with equal up-sets inside `Sub_G^O`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InseparabilityPartition {
    system: TransferSystem,
    classes: Vec<Vec<usize>>,
    representatives: Vec<usize>,
    class_of: Vec<usize>,
}

impl InseparabilityPartition {
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn representatives(&self) -> &[usize] {
        &self.representatives
    }

    pub fn class_of(&self, k: usize) -> usize {
        self.class_of[k]
    }

    pub fn system(&self) -> &TransferSystem {
        &self.system
    }

    /// Members of the class whose representative is `h`.
    pub fn class_members(&self, h: usize) -> Result<&[usize], TransferError> {
        let c = self.class_of[h];
        if self.representatives[c] != h {
            return Err(TransferError::NotRepresentative(
                self.system.lattice.label(h).into(),
            ));
        }
        Ok(&self.classes[c])
    }
}

/// Inseparability for an abelian ambient group: `J ~ K` iff
/// `{L in Sub_G^O : J <= L} = {L in Sub_G^O : K <= L}`. (Every subgroup of an
/// abelian group is normal, so the fixed-point count `|(G/L)^J|` is
/// `|G/L|` when `J <= L` and zero otherwise.)
pub fn inseparability_classes(t: &TransferSystem) -> InseparabilityPartition {
    let lat = &t.lattice;
    let p = lat.poset();
    let sub_o = t.sub_o();
    let mut by_print: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for j in 0..lat.len() {
        let mut f = p.up_set(j).clone();
        f.intersect_with(&sub_o);
        by_print.entry(f.ones().collect()).or_default().push(j);
    }
    let mut classes: Vec<Vec<usize>> = by_print.into_values().collect();
    // indices are sorted by order: the maximum is the last member
    classes.sort_by_key(|c| *c.last().expect("non-empty class"));
    let representatives: Vec<usize> = classes.iter().map(|c| *c.last().unwrap()).collect();
    let mut class_of = vec![0; lat.len()];
    for (ci, c) in classes.iter().enumerate() {
        for &j in c {
            class_of[j] = ci;
        }
    }
    InseparabilityPartition {
        system: t.clone(),
        classes,
        representatives,
        class_of,
    }
}

/// The class of representative `h` as an inclusion poset.
pub fn class_poset(part: &InseparabilityPartition, h: usize) -> Result<FinitePoset, TransferError> {
    let members = part.class_members(h)?;
    // classes are convex, so Hasse covers restrict
    Ok(part.system.lattice.poset().induced_convex(members))
}

/// Distinct disk-like systems (closures of subsets of `{H -> G}`), ordered
/// by arrow count then relation, and their inclusion poset.
pub fn enumerate_disk_like(
    lattice: &Arc<SubgroupLattice>,
    max_subgroups: usize,
) -> Result<(Vec<TransferSystem>, FinitePoset), TransferError> {
    if lattice.len() > max_subgroups {
        return Err(TransferError::BudgetExceeded {
            found: lattice.len(),
            max: max_subgroups,
        });
    }
    let g = lattice.whole();
    let candidates: Vec<usize> = (0..lattice.len()).filter(|&h| h != g).collect();
    let mut seen: HashSet<Vec<Vec<usize>>> = HashSet::new();
    let mut systems = Vec::new();
    for mask in 0u64..(1u64 << candidates.len()) {
        let gens: Vec<(usize, usize)> = candidates
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &h)| (h, g))
            .collect();
        let t = close(lattice, &gens)?;
        let key: Vec<Vec<usize>> = t.rel.iter().map(|r| r.ones().collect()).collect();
        if seen.insert(key) {
            systems.push(t);
        }
    }
    systems.sort_by(|a, b| {
        a.arrow_count()
            .cmp(&b.arrow_count())
            .then_with(|| a.arrows().cmp(&b.arrows()))
    });
    let mut rel = Vec::new();
    for (i, a) in systems.iter().enumerate() {
        for (j, b) in systems.iter().enumerate() {
            if i != j && a.is_subsystem_of(b) {
                rel.push((i, j));
            }
        }
    }
    let labels = (0..systems.len()).map(|i| format!("T{i}")).collect();
    let order = FinitePoset::from_covers(systems.len(), &rel)
        .expect("inclusion is a partial order")
        .with_labels(labels);
    Ok((systems, order))
}

/// Reads `gen: <label> -> <label>` lines (blank lines and `#` comments
/// allowed) into generator pairs.
pub fn parse_generator_file(
    lattice: &SubgroupLattice,
    text: &str,
) -> Result<Vec<(usize, usize)>, TransferError> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| TransferError::Parse { line: no + 1, msg };
        let body = line
            .strip_prefix("gen:")
            .ok_or_else(|| err(format!("expected `gen: K -> H`, got `{line}`")))?;
        let (k, h) = body
            .split_once("->")
            .ok_or_else(|| err("missing `->`".into()))?;
        let k = lattice.resolve(k).map_err(|e| err(e.to_string()))?;
        let h = lattice.resolve(h).map_err(|e| err(e.to_string()))?;
        out.push((k, h));
    }
    Ok(out)
}

pub fn write_generator_file(lattice: &SubgroupLattice, gens: &[(usize, usize)]) -> String {
    gens.iter()
        .map(|&(k, h)| format!("gen: {} -> {}\n", lattice.label(k), lattice.label(h)))
        .collect()
}
