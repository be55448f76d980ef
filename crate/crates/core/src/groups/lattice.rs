use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::subgroup::{join, meet, Subgroup};
use super::{AbelianGroup, GroupError};
use crate::posets::FinitePoset;
use crate::qlinalg::hnf::modular_hnf;
use crate::qlinalg::{Int, IntMatrix};

/// Enumeration limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_order: u64,
    pub max_subgroups: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_order: 100_000,
            max_subgroups: 40_000,
        }
    }
}

/// All subgroups of `G` in a fixed order, with the inclusion poset on their
/// indices.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    group: Arc<AbelianGroup>,
    subgroups: Vec<Subgroup>,
    poset: FinitePoset,
    index: HashMap<IntMatrix, usize>,
}

/// Lower-triangular lattices `diag(n) Z^k <= L <= Z^k` in HNF for one
/// Sylow block with moduli `n`.
fn block_lattices(p: u64, n: &[u64], cap: usize) -> Result<Vec<IntMatrix>, usize> {
    let k = n.len();
    let mut out = Vec::new();
    let mut b = IntMatrix::zeros(k, k);

    // is `v` (zero above row j0) in the span of columns j0.. of `b`?
    fn in_tail(b: &IntMatrix, j0: usize, v: &[i64]) -> bool {
        let k = b.rows();
        let mut x: Vec<i64> = vec![0; k];
        for i in j0..k {
            let mut rhs = v[i];
            for l in j0..i {
                rhs -= b[(i, l)].to_i64().unwrap() * x[l];
            }
            let d = b[(i, i)].to_i64().unwrap();
            if rhs % d != 0 {
                return false;
            }
            x[i] = rhs / d;
        }
        true
    }

    fn rec(
        j: usize,
        p: u64,
        n: &[u64],
        b: &mut IntMatrix,
        out: &mut Vec<IntMatrix>,
        cap: usize,
    ) -> Result<(), usize> {
        let k = n.len();
        let mut d = 1u64;
        while n[j].is_multiple_of(d) {
            let c = (n[j] / d) as i64;
            b[(j, j)] = Int::from(d);
            // tails t_i in [0, d_i) for i > j
            let bounds: Vec<i64> = (j + 1..k).map(|i| b[(i, i)].to_i64().unwrap()).collect();
            let mut t = vec![0i64; bounds.len()];
            'tails: loop {
                let mut v = vec![0i64; k];
                for (o, &ti) in t.iter().enumerate() {
                    v[j + 1 + o] = c * ti;
                }
                if in_tail(b, j + 1, &v) {
                    for (o, &ti) in t.iter().enumerate() {
                        b[(j + 1 + o, j)] = Int::from(ti);
                    }
                    if j == 0 {
                        if out.len() >= cap {
                            return Err(out.len());
                        }
                        out.push(b.clone());
                    } else {
                        rec(j - 1, p, n, b, out, cap)?;
                    }
                }
                let mut o = 0;
                loop {
                    if o == t.len() {
                        break 'tails;
                    }
                    t[o] += 1;
                    if t[o] < bounds[o] {
                        break;
                    }
                    t[o] = 0;
                    o += 1;
                }
            }
            for i in j + 1..k {
                b[(i, j)] = Int::ZERO;
            }
            if d == n[j] {
                break;
            }
            d *= p;
        }
        b[(j, j)] = Int::ZERO;
        Ok(())
    }

    if k == 0 {
        return Ok(vec![b]);
    }
    rec(k - 1, p, n, &mut b, &mut out, cap)?;
    Ok(out)
}

/// Upper covers inside one Sylow block: for each `K`, the subgroups
/// `<K, g>` with `g` outside `K` and `p g` inside.
fn block_covers(
    group: &Arc<AbelianGroup>,
    lattices: &[IntMatrix],
    p: u64,
) -> Vec<Vec<usize>> {
    let index: HashMap<&IntMatrix, usize> =
        lattices.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let n = group.moduli();
    let k = n.len();
    let mut strides = vec![1usize; k];
    for i in (0..k.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * n[i + 1] as usize;
    }
    let encode = |g: &[u64]| -> usize { g.iter().zip(&strides).map(|(&x, &s)| x as usize * s).sum() };
    let elements = Subgroup::whole(group).elements();
    let size = elements.len();
    let moduli = group.moduli_int();
    let mut covers = vec![Vec::new(); lattices.len()];
    let mut in_k = FixedBitSet::with_capacity(size);
    let mut covered = FixedBitSet::with_capacity(size);
    for (ki, basis) in lattices.iter().enumerate() {
        let sub = Subgroup::from_canonical(group.clone(), basis.clone());
        let k_elems = sub.elements();
        in_k.clear();
        covered.clear();
        for e in &k_elems {
            in_k.insert(encode(e));
        }
        let mut found: Vec<usize> = Vec::new();
        for g in &elements {
            let code = encode(g);
            if in_k.contains(code) || covered.contains(code) {
                continue;
            }
            let pg: Vec<u64> = g.iter().zip(&n).map(|(&x, &m)| (x * p) % m).collect();
            if !in_k.contains(encode(&pg)) {
                continue;
            }
            let mut shifted = g.clone();
            for _ in 1..p {
                for e in &k_elems {
                    let h: Vec<u64> = e
                        .iter()
                        .zip(&shifted)
                        .zip(&n)
                        .map(|((&a, &b), &m)| (a + b) % m)
                        .collect();
                    covered.insert(encode(&h));
                }
                for (x, (&y, &m)) in shifted.iter_mut().zip(g.iter().zip(&n)) {
                    *x = (*x + y) % m;
                }
            }
            let mut gens: Vec<Vec<Int>> = (0..basis.cols()).map(|j| basis.col(j)).collect();
            gens.push(g.iter().map(|&x| Int::from(x)).collect());
            let h = modular_hnf(&gens, &moduli);
            found.push(index[&h]);
        }
        found.sort_unstable();
        covers[ki] = found;
    }
    covers
}

pub fn subgroup_lattice(g: &AbelianGroup) -> Result<SubgroupLattice, GroupError> {
    subgroup_lattice_with(g, Budget::default())
}

pub fn subgroup_lattice_with(g: &AbelianGroup, budget: Budget) -> Result<SubgroupLattice, GroupError> {
    if g.order() > budget.max_order {
        return Err(GroupError::OrderTooLarge {
            order: g.order(),
            max: budget.max_order,
        });
    }
    let group = Arc::new(g.clone());
    let k = g.rank();
    // per Sylow block: lattices and covers in block coordinates
    let mut blocks = Vec::new();
    let mut total: usize = 1;
    for (p, range) in g.sylow_blocks() {
        let n: Vec<u64> = g.moduli()[range.clone()].to_vec();
        let lats = block_lattices(p, &n, budget.max_subgroups)
            .map_err(|found| GroupError::BudgetExceeded { found })?;
        total = total.saturating_mul(lats.len());
        if total > budget.max_subgroups {
            return Err(GroupError::BudgetExceeded { found: total.min(budget.max_subgroups) });
        }
        let sylow = Arc::new(
            AbelianGroup::new(g.factors()[range.clone()].to_vec()).expect("factors of a group"),
        );
        let covers = block_covers(&sylow, &lats, p);
        blocks.push((range, lats, covers));
    }
    // product over blocks, mixed radix with the last block fastest
    let radix: Vec<usize> = blocks.iter().map(|b| b.1.len()).collect();
    let mut subgroups: Vec<(Subgroup, usize)> = Vec::with_capacity(total);
    let mut digits = vec![0usize; blocks.len()];
    for code in 0..total {
        let mut rem = code;
        for b in (0..blocks.len()).rev() {
            digits[b] = rem % radix[b];
            rem /= radix[b];
        }
        let mut basis = IntMatrix::zeros(k, k);
        for (b, (range, lats, _)) in blocks.iter().enumerate() {
            let m = &lats[digits[b]];
            let off = range.start;
            for i in 0..range.len() {
                for j in 0..=i {
                    basis[(off + i, off + j)] = m[(i, j)].clone();
                }
            }
        }
        subgroups.push((Subgroup::from_canonical(group.clone(), basis), code));
    }
    subgroups.sort_by(|a, b| a.0.cmp(&b.0));
    let mut pos = vec![0usize; total];
    for (i, (_, code)) in subgroups.iter().enumerate() {
        pos[*code] = i;
    }
    let mut rel = Vec::new();
    let mut strides = vec![1usize; blocks.len()];
    for b in (0..blocks.len().saturating_sub(1)).rev() {
        strides[b] = strides[b + 1] * radix[b + 1];
    }
    for code in 0..total {
        for (b, (_, _, covers)) in blocks.iter().enumerate() {
            let digit = (code / strides[b]) % radix[b];
            for &c in &covers[digit] {
                let other = code - digit * strides[b] + c * strides[b];
                rel.push((pos[code], pos[other]));
            }
        }
    }
    let subgroups: Vec<Subgroup> = subgroups.into_iter().map(|s| s.0).collect();
    let labels = subgroups.iter().map(Subgroup::label).collect();
    let poset = FinitePoset::from_covers(total, &rel)
        .expect("inclusion is a partial order")
        .with_labels(labels);
    let index = subgroups
        .iter()
        .enumerate()
        .map(|(i, s)| (s.lattice_basis().clone(), i))
        .collect();
    Ok(SubgroupLattice {
        group,
        subgroups,
        poset,
        index,
    })
}

impl SubgroupLattice {
    pub fn group(&self) -> &Arc<AbelianGroup> {
        &self.group
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.index.get(h.lattice_basis()).copied()
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn whole(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn label(&self, i: usize) -> &str {
        self.poset.label(i)
    }

    /// Resolves `e`, `G`, `#<index>`, a printed label, or any generator
    /// list `<(..),(..)>` to a subgroup index.
    pub fn resolve(&self, text: &str) -> Result<usize, GroupError> {
        let t = text.trim();
        let unknown = || GroupError::UnknownSubgroup(t.to_string());
        if t == "e" {
            return Ok(self.trivial());
        }
        if t == "G" {
            return Ok(self.whole());
        }
        if let Some(num) = t.strip_prefix('#') {
            let i: usize = num.parse().map_err(|_| unknown())?;
            return if i < self.len() { Ok(i) } else { Err(unknown()) };
        }
        if let Some(i) = self.poset.index_of(t) {
            return Ok(i);
        }
        let gens = parse_generators(t, self.group.rank()).ok_or_else(unknown)?;
        let h = Subgroup::generated_by(&self.group, &gens);
        self.index_of(&h).ok_or_else(unknown)
    }

    /// Index of `H ∩ K`. Indices are sorted by order, so the meet is the
    /// largest index below both.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        let mut d = self.poset.down_set(a).clone();
        d.intersect_with(self.poset.down_set(b));
        d.ones().next_back().expect("trivial subgroup lies below everything")
    }

    /// Index of `H + K`, the smallest index above both.
    pub fn join(&self, a: usize, b: usize) -> usize {
        let mut u = self.poset.up_set(a).clone();
        u.intersect_with(self.poset.up_set(b));
        u.ones().next().expect("G lies above everything")
    }

    /// `meet` computed from the HNF bases instead of the poset.
    pub fn meet_by_basis(&self, a: usize, b: usize) -> usize {
        let m = meet(&self.subgroups[a], &self.subgroups[b]).expect("same ambient");
        self.index_of(&m).expect("lattice is closed under meets")
    }

    pub fn join_by_basis(&self, a: usize, b: usize) -> usize {
        let m = join(&self.subgroups[a], &self.subgroups[b]).expect("same ambient");
        self.index_of(&m).expect("lattice is closed under joins")
    }

    /// Maximal proper subgroups of `H`.
    pub fn maximal_subgroups(&self, h: usize) -> &[usize] {
        self.poset.lower_covers(h)
    }

    /// Intersection of the maximal subgroups of `H` (`H` itself when trivial).
    pub fn frattini(&self, h: usize) -> usize {
        let maxes = self.maximal_subgroups(h);
        if maxes.is_empty() {
            return h;
        }
        let mut d = self.poset.down_set(maxes[0]).clone();
        for &m in &maxes[1..] {
            d.intersect_with(self.poset.down_set(m));
        }
        // the intersection is the down-set of the meet, its largest index
        d.ones().next_back().expect("trivial subgroup lies below everything")
    }
}

/// Parses `<(a,b,..),(..)>` (or `()`-free single tuple lists) into generator
/// vectors of length `k`.
pub fn parse_generators(text: &str, k: usize) -> Option<Vec<Vec<i64>>> {
    let inner = text.trim().strip_prefix('<')?.strip_suffix('>')?.trim();
    if inner.is_empty() {
        return Some(Vec::new());
    }
    let mut gens = Vec::new();
    let mut rest = inner;
    loop {
        rest = rest.trim_start().strip_prefix('(')?;
        let close = rest.find(')')?;
        let tuple: Option<Vec<i64>> = rest[..close]
            .split(',')
            .map(|s| s.trim().parse().ok())
            .collect();
        let tuple = tuple?;
        if tuple.len() != k {
            return None;
        }
        gens.push(tuple);
        rest = rest[close + 1..].trim_start();
        if rest.is_empty() {
            return Some(gens);
        }
        rest = rest.strip_prefix(',')?;
    }
}
