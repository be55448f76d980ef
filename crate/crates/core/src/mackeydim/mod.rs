//! Global dimension of rational Mackey functors for a disk-like transfer
//! system on a finite abelian group, computed class by class, plus the
//! scans built on it.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::groups::{quotient_factor_count, quotient_invariants, AbelianGroup, SubgroupLattice};
use crate::izext::{self, ExtComputer, FrattiniWitness, IzError};
use crate::posets::{to_dot, FinitePoset};
use crate::qlinalg::GradedDims;
use crate::transfer::{
    class_poset, disk_like_witness, enumerate_disk_like, inseparability_classes, validate,
    InseparabilityPartition, TransferError, TransferSystem,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MackeyError {
    #[error(transparent)]
    Transfer(#[from] TransferError),
    #[error(transparent)]
    Iz(#[from] IzError),
    #[error("cross-check failed: {0}")]
    Discrepancy(String),
}

impl MackeyError {
    /// Whether the error reports two computations disagreeing.
    pub fn is_discrepancy(&self) -> bool {
        matches!(
            self,
            MackeyError::Discrepancy(_) | MackeyError::Iz(IzError::Discrepancy(_))
        )
    }
}

fn minimal_members(l: &SubgroupLattice, members: &[usize]) -> Vec<usize> {
    let p = l.poset();
    members
        .iter()
        .copied()
        .filter(|&k| !members.iter().any(|&j| j != k && p.leq(j, k)))
        .collect()
}

fn factor_count(l: &SubgroupLattice, h: usize, k: usize) -> usize {
    quotient_factor_count(l.subgroup(h), l.subgroup(k)).expect("k <= h in one ambient group")
}

/// Max over `K <= L` in the class of the number of prime-power cyclic
/// factors of `L/K`.
pub fn class_dim_all_pairs(part: &InseparabilityPartition, h: usize) -> Result<usize, MackeyError> {
    let l = part.system().lattice().clone();
    let members = part.class_members(h)?;
    let mut best = 0;
    for &big in members {
        for &small in members {
            if l.poset().leq(small, big) {
                best = best.max(factor_count(&l, big, small));
            }
        }
    }
    Ok(best)
}

/// Max over minimal class members `K` of the factor count of `H/K`.
pub fn class_dim_minimal(part: &InseparabilityPartition, h: usize) -> Result<usize, MackeyError> {
    let l = part.system().lattice().clone();
    let members = part.class_members(h)?;
    Ok(minimal_members(&l, members)
        .into_iter()
        .map(|k| factor_count(&l, h, k))
        .max()
        .unwrap_or(0))
}

/// `dim([H])`, with both formulations required to agree.
pub fn class_dim(part: &InseparabilityPartition, h: usize) -> Result<usize, MackeyError> {
    let a = class_dim_minimal(part, h)?;
    let b = class_dim_all_pairs(part, h)?;
    if a != b {
        let l = part.system().lattice();
        return Err(MackeyError::Discrepancy(format!(
            "class of {}: minimal-element form gives {a}, all-pairs form gives {b}",
            l.label(h)
        )));
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassRow {
    pub representative: String,
    pub size: usize,
    pub minimal: Vec<String>,
    pub dim: usize,
    pub height: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MackeyDimReport {
    pub schema: u32,
    pub group: AbelianGroup,
    #[serde(skip)]
    pub system: TransferSystem,
    pub generators: Vec<Arrow>,
    pub per_class: Vec<ClassRow>,
    pub gldim: usize,
    pub height_bound: usize,
}

fn check_disk_like(t: &TransferSystem) -> Result<(), MackeyError> {
    validate(t).map_err(TransferError::Invalid)?;
    if let Some((k, h)) = disk_like_witness(t) {
        let l = t.lattice();
        return Err(TransferError::NotDiskLike(l.label(k).into(), l.label(h).into()).into());
    }
    Ok(())
}

/// Maximum of `dim([H])` over the inseparability classes, with the height
/// of the class posets as an upper bound.
pub fn gldim_mackey(t: &TransferSystem) -> Result<MackeyDimReport, MackeyError> {
    check_disk_like(t)?;
    let l = t.lattice().clone();
    let part = inseparability_classes(t);
    let mut per_class = Vec::new();
    for (&h, members) in part.representatives().iter().zip(part.classes()) {
        let dim = class_dim(&part, h)?;
        let height = class_poset(&part, h)?.height();
        per_class.push(ClassRow {
            representative: l.label(h).to_string(),
            size: members.len(),
            minimal: minimal_members(&l, members)
                .into_iter()
                .map(|k| l.label(k).to_string())
                .collect(),
            dim,
            height,
        });
    }
    let gldim = per_class.iter().map(|r| r.dim).max().unwrap_or(0);
    let height_bound = per_class.iter().map(|r| r.height).max().unwrap_or(0);
    if gldim > height_bound {
        return Err(MackeyError::Discrepancy(format!(
            "global dimension {gldim} exceeds the height bound {height_bound}"
        )));
    }
    Ok(MackeyDimReport {
        schema: 1,
        group: l.group().as_ref().clone(),
        system: t.clone(),
        generators: t
            .generators_into_whole()
            .into_iter()
            .map(|(k, h)| Arrow {
                from: l.label(k).into(),
                to: l.label(h).into(),
            })
            .collect(),
        per_class,
        gldim,
        height_bound,
    })
}

/// Class posets up to this size go through the generic poset engine.
const RAW_CLASS_LIMIT: usize = 48;

/// Max over classes of the incidence-algebra global dimension of the class
/// poset. Classes are convex in the subgroup lattice, so large ones are
/// handled with the lattice engine restricted to pairs inside the class.
pub fn class_gldims_via_ext(t: &TransferSystem) -> Result<Vec<usize>, MackeyError> {
    check_disk_like(t)?;
    let l = t.lattice().clone();
    let part = inseparability_classes(t);
    let mut big: Option<ExtComputer<'_>> = None;
    let mut out = Vec::new();
    for (&h, members) in part.representatives().iter().zip(part.classes()) {
        let d = if members.len() <= RAW_CLASS_LIMIT {
            izext::gldim_incidence(&class_poset(&part, h)?)?
        } else {
            let c = big.get_or_insert_with(|| ExtComputer::for_subgroup_lattice(&l));
            let p = l.poset();
            let mut best = 0usize;
            let mut pairs: Vec<(usize, usize, usize)> = members
                .iter()
                .flat_map(|&x| members.iter().map(move |&y| (x, y)))
                .filter(|&(x, y)| x != y && p.leq(y, x))
                .map(|(x, y)| (p.interval_length(x, y).expect("y <= x"), x, y))
                .collect();
            pairs.sort_unstable_by(|a, b| b.cmp(a));
            for (len, x, y) in pairs {
                if len <= best {
                    break;
                }
                best = best.max(c.ext(x, y)?.top_degree().unwrap_or(0) as usize);
            }
            best
        };
        out.push(d);
    }
    Ok(out)
}

pub fn gldim_mackey_via_ext(t: &TransferSystem) -> Result<usize, MackeyError> {
    Ok(class_gldims_via_ext(t)?.into_iter().max().unwrap_or(0))
}

/// Both routes, with a discrepancy error if they disagree.
pub fn gldim_mackey_checked(t: &TransferSystem) -> Result<MackeyDimReport, MackeyError> {
    let report = gldim_mackey(t)?;
    let via = gldim_mackey_via_ext(t)?;
    if via != report.gldim {
        return Err(MackeyError::Discrepancy(format!(
            "class formula gives {}, incidence algebras of the classes give {via}",
            report.gldim
        )));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SystemRow {
    pub label: String,
    pub generators: Vec<Arrow>,
    pub arrows: usize,
    pub gldim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub smaller: String,
    pub larger: String,
    pub smaller_gldim: usize,
    pub larger_gldim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityReport {
    pub schema: u32,
    pub group: AbelianGroup,
    pub systems: Vec<SystemRow>,
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
    #[serde(skip)]
    pub order: FinitePoset,
}

impl MonotonicityReport {
    /// Hasse diagram of the systems, labelled with their global dimension.
    pub fn dot(&self) -> String {
        let labels = self
            .systems
            .iter()
            .map(|s| format!("{} gldim={}", s.label, s.gldim))
            .collect();
        to_dot(&self.order.clone().with_labels(labels), "systems")
    }
}

/// Checks `gldim(O2) <= gldim(O1)` for every inclusion `O1 <= O2` of
/// disk-like systems.
pub fn scan_monotonicity(
    lattice: &Arc<SubgroupLattice>,
    max_subgroups: usize,
) -> Result<MonotonicityReport, MackeyError> {
    let (systems, order) = enumerate_disk_like(lattice, max_subgroups)?;
    let mut rows = Vec::new();
    for (i, t) in systems.iter().enumerate() {
        let r = gldim_mackey(t)?;
        rows.push(SystemRow {
            label: format!("T{i}"),
            generators: r.generators,
            arrows: t.arrow_count(),
            gldim: r.gldim,
        });
    }
    let mut pairs = 0;
    let mut violations = Vec::new();
    for i in 0..systems.len() {
        for j in order.up_set(i).ones().filter(|&j| j != i) {
            pairs += 1;
            if rows[j].gldim > rows[i].gldim {
                violations.push(Violation {
                    smaller: rows[i].label.clone(),
                    larger: rows[j].label.clone(),
                    smaller_gldim: rows[i].gldim,
                    larger_gldim: rows[j].gldim,
                });
            }
        }
    }
    Ok(MonotonicityReport {
        schema: 1,
        group: lattice.group().as_ref().clone(),
        systems: rows,
        pairs_checked: pairs,
        violations,
        order,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalFailure {
    pub h: String,
    pub k: String,
    pub cohomology: GradedDims,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrattiniReport {
    pub schema: u32,
    pub group: AbelianGroup,
    /// Pairs `K < H` with `Φ(H)` not inside `K` and `I(H, K)` non-empty.
    pub pairs_checked: usize,
    /// Of those, how many were also computed from the order complex.
    pub direct_checks: usize,
    pub nonvanishing: Vec<IntervalFailure>,
    pub witness: FrattiniWitness,
    /// Top Ext degree at `(G, Φ(G))`.
    pub whole_group_degree: usize,
    pub gldim: usize,
}

impl FrattiniReport {
    pub fn passed(&self) -> bool {
        self.nonvanishing.is_empty()
            && self.witness.degree == self.gldim
            && self.whole_group_degree == self.gldim
    }
}

/// Intervals with at most this many elements are also checked directly.
const DIRECT_INTERVAL_LIMIT: usize = 14;

/// Cohomology vanishing below Frattini-avoiding pairs, and realisation of the
/// global dimension at `(G, Φ(G))`. `memo` carries interval results by
/// quotient type across calls.
pub fn scan_frattini(
    lattice: &SubgroupLattice,
    memo: &mut HashMap<Vec<u64>, GradedDims>,
) -> Result<FrattiniReport, MackeyError> {
    let p = lattice.poset();
    let mut c = ExtComputer::for_subgroup_lattice(lattice).with_type_memo(std::mem::take(memo));
    let mut pairs = 0;
    let mut direct = 0;
    let mut nonvanishing = Vec::new();
    let mut direct_seen: HashSet<Vec<u64>> = HashSet::new();
    for h in 0..lattice.len() {
        let f = lattice.frattini(h);
        let mut ks = p.down_set(h).clone();
        ks.difference_with(p.up_set(f));
        for k in ks.ones() {
            if p.upper_covers(k).contains(&h) {
                continue;
            }
            pairs += 1;
            let coh = c.interval(h, k);
            if !coh.is_zero() {
                nonvanishing.push(IntervalFailure {
                    h: lattice.label(h).into(),
                    k: lattice.label(k).into(),
                    cohomology: coh.clone(),
                });
            }
            let idx = p.open_interval_indices(h, k);
            if idx.len() <= DIRECT_INTERVAL_LIMIT {
                let key = quotient_invariants(lattice.subgroup(h), lattice.subgroup(k)).expect("k <= h");
                if direct_seen.insert(key) {
                    direct += 1;
                    let d = izext::ext_dims(p, h, k)?.shift(-2);
                    if d != coh {
                        return Err(MackeyError::Discrepancy(format!(
                            "I({}, {}): engine {:?}, order complex {:?}",
                            lattice.label(h),
                            lattice.label(k),
                            coh,
                            d
                        )));
                    }
                }
            }
        }
    }
    let witness = izext::frattini_realization_with(lattice, &mut c)?;
    let g = lattice.whole();
    let whole_group_degree = c.ext(g, lattice.frattini(g))?.top_degree().unwrap_or(0) as usize;
    let gldim = witness.gldim;
    *memo = c.into_type_memo();
    Ok(FrattiniReport {
        schema: 1,
        group: lattice.group().as_ref().clone(),
        pairs_checked: pairs,
        direct_checks: direct,
        nonvanishing,
        witness,
        whole_group_degree,
        gldim,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrattiniRow {
    pub element: String,
    pub frattini: String,
    pub degree: usize,
}

/// Lattice-theoretic Frattini witnesses on an arbitrary finite lattice
/// (meet of the lower covers of each element). Reports, never asserts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FrattiniConjectureTable {
    pub name: String,
    pub rows: Vec<FrattiniRow>,
    pub best: usize,
    pub gldim: usize,
    pub holds: bool,
}

pub fn frattini_conjecture_table(name: &str, p: &FinitePoset) -> Result<Option<FrattiniConjectureTable>, MackeyError> {
    if !p.is_lattice() {
        return Ok(None);
    }
    let mut c = ExtComputer::new(p);
    let mut rows = Vec::new();
    for h in 0..p.len() {
        let covers = p.lower_covers(h);
        let f = covers
            .iter()
            .skip(1)
            .fold(covers.first().copied().unwrap_or(h), |a, &b| p.meet(a, b).expect("lattice"));
        let degree = c.ext(h, f)?.top_degree().unwrap_or(0) as usize;
        rows.push(FrattiniRow {
            element: p.label(h).into(),
            frattini: p.label(f).into(),
            degree,
        });
    }
    let best = rows.iter().map(|r| r.degree).max().unwrap_or(0);
    let gldim = c.gldim()?;
    Ok(Some(FrattiniConjectureTable {
        name: name.into(),
        rows,
        best,
        gldim,
        holds: best == gldim,
    }))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub schema: u32,
    /// Disk-like systems with their global dimension, and whether zero is
    /// reached only by the complete system.
    pub systems: Vec<SystemRow>,
    pub zero_only_at_complete: bool,
    pub frattini: Vec<FrattiniConjectureTable>,
}

/// Witness tables for the monotonicity-with-minimum and Frattini
/// statements. Extra posets (for example a non-abelian subgroup lattice
/// given as a raw poset) are only tabulated.
pub fn scan_conjectures(
    lattice: &Arc<SubgroupLattice>,
    max_subgroups: usize,
    extra: &[(String, FinitePoset)],
) -> Result<ConjectureReport, MackeyError> {
    let mono = scan_monotonicity(lattice, max_subgroups)?;
    let (systems, _) = enumerate_disk_like(lattice, max_subgroups)?;
    let zero_only_at_complete = systems
        .iter()
        .zip(&mono.systems)
        .all(|(t, r)| (r.gldim == 0) == t.is_complete());
    let mut frattini = Vec::new();
    let name = format!("Sub({})", lattice.group());
    frattini.extend(frattini_conjecture_table(&name, lattice.poset())?);
    for (name, p) in extra {
        frattini.extend(frattini_conjecture_table(name, p)?);
    }
    Ok(ConjectureReport {
        schema: 1,
        systems: mono.systems,
        zero_only_at_complete,
        frattini,
    })
}
