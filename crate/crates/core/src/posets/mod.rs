//! Finite posets: up/down sets as bitsets, Hasse covers, intervals, height,
//! products and order complexes.

mod complex;
mod iso;
mod text;

pub use complex::{order_complex, OrderComplex};
pub use iso::{find_isomorphism, is_isomorphic};
pub use text::{parse_poset, to_dot, to_text};

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("relation is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("relation is not antisymmetric: {0} and {1}")]
    NotAntisymmetric(usize, usize),
    #[error("relation is not transitive: {0} <= {1} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("cover relation contains a cycle")]
    Cycle,
    #[error("index {0} out of range for a poset with {1} elements")]
    IndexOutOfRange(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A finite partial order on `0..n`.
#[derive(Clone)]
pub struct FinitePoset {
    labels: Vec<String>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    covers: Vec<(usize, usize)>,
    upper_covers: Vec<Vec<usize>>,
    lower_covers: Vec<Vec<usize>>,
    linear: Vec<usize>,
    graded_rank: Option<Vec<usize>>,
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.up == other.up
    }
}
impl Eq for FinitePoset {}

impl std::fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FinitePoset")
            .field("labels", &self.labels)
            .field("covers", &self.covers)
            .finish()
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl FinitePoset {
    /// Poset generated by the given relations `(lower, upper)`; redundant
    /// pairs are allowed and dropped by the transitive reduction.
    pub fn from_covers(n: usize, rel: &[(usize, usize)]) -> Result<Self, PosetError> {
        let mut out_edges = vec![Vec::new(); n];
        for &(a, b) in rel {
            for v in [a, b] {
                if v >= n {
                    return Err(PosetError::IndexOutOfRange(v, n));
                }
            }
            if a == b {
                continue;
            }
            out_edges[a].push(b);
        }
        for e in out_edges.iter_mut() {
            e.sort_unstable();
            e.dedup();
        }
        // Kahn order doubles as cycle detection
        let mut indeg = vec![0usize; n];
        for e in &out_edges {
            for &b in e {
                indeg[b] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut linear = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            linear.push(v);
            for &b in &out_edges[v] {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    queue.push_back(b);
                }
            }
        }
        if linear.len() != n {
            return Err(PosetError::Cycle);
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &v in linear.iter().rev() {
            let mut s = FixedBitSet::with_capacity(n);
            s.insert(v);
            for &b in &out_edges[v] {
                s.union_with(&up[b]);
            }
            up[v] = s;
        }
        // an edge v -> b is a cover unless b lies strictly above another target
        let mut covers = Vec::new();
        let mut strict = FixedBitSet::with_capacity(n);
        for v in 0..n {
            let outs = &out_edges[v];
            if outs.len() <= 16 {
                for &z in outs {
                    if !outs.iter().any(|&w| w != z && up[w].contains(z)) {
                        covers.push((v, z));
                    }
                }
            } else {
                strict.clear();
                for &w in outs {
                    let mut s = up[w].clone();
                    s.set(w, false);
                    strict.union_with(&s);
                }
                covers.extend(outs.iter().filter(|&&z| !strict.contains(z)).map(|&z| (v, z)));
            }
        }
        Ok(Self::assemble(default_labels(n), up, covers, linear))
    }

    fn assemble(
        labels: Vec<String>,
        up: Vec<FixedBitSet>,
        mut covers: Vec<(usize, usize)>,
        linear: Vec<usize>,
    ) -> Self {
        let n = labels.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (a, s) in up.iter().enumerate() {
            for b in s.ones() {
                down[b].insert(a);
            }
        }
        covers.sort_unstable();
        let mut upper_covers = vec![Vec::new(); n];
        let mut lower_covers = vec![Vec::new(); n];
        for &(a, b) in &covers {
            upper_covers[a].push(b);
            lower_covers[b].push(a);
        }
        let mut p = FinitePoset {
            labels,
            up,
            down,
            covers,
            upper_covers,
            lower_covers,
            linear,
            graded_rank: None,
        };
        p.graded_rank = p.compute_graded_rank();
        p
    }

    /// Validates a dense relation matrix `leq[a][b]` meaning `a <= b`.
    pub fn from_leq_matrix(leq: &[Vec<bool>]) -> Result<Self, PosetError> {
        let n = leq.len();
        for (a, row) in leq.iter().enumerate() {
            if row.len() != n {
                return Err(PosetError::IndexOutOfRange(row.len(), n));
            }
            if !row[a] {
                return Err(PosetError::NotReflexive(a));
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if leq[a][b] && leq[b][a] {
                    return Err(PosetError::NotAntisymmetric(a, b));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !leq[a][b] || a == b {
                    continue;
                }
                for c in 0..n {
                    if leq[b][c] && !leq[a][c] {
                        return Err(PosetError::NotTransitive(a, b, c));
                    }
                }
            }
        }
        let rel: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (0..n).filter(move |&b| a != b).map(move |b| (a, b)))
            .filter(|&(a, b)| leq[a][b])
            .collect();
        Self::from_covers(n, &rel)
    }

    pub fn discrete(n: usize) -> Self {
        Self::from_covers(n, &[]).expect("no relations")
    }

    /// Chain `0 < 1 < ... < len` with `len` edges.
    pub fn chain(len: usize) -> Self {
        let rel: Vec<_> = (0..len).map(|i| (i, i + 1)).collect();
        Self::from_covers(len + 1, &rel).expect("chain is acyclic")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.len(), "label count mismatch");
        self.labels = labels;
        self
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn check_index(&self, i: usize) -> Result<(), PosetError> {
        if i < self.len() {
            Ok(())
        } else {
            Err(PosetError::IndexOutOfRange(i, self.len()))
        }
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// `{z : a <= z}`
    pub fn up_set(&self, a: usize) -> &FixedBitSet {
        &self.up[a]
    }

    /// `{z : z <= a}`
    pub fn down_set(&self, a: usize) -> &FixedBitSet {
        &self.down[a]
    }

    /// Hasse covers `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, a: usize) -> &[usize] {
        &self.upper_covers[a]
    }

    pub fn lower_covers(&self, a: usize) -> &[usize] {
        &self.lower_covers[a]
    }

    /// Elements in an order compatible with `<`.
    pub fn linear_extension(&self) -> &[usize] {
        &self.linear
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.lower_covers[i].is_empty()).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.upper_covers[i].is_empty()).collect()
    }

    pub fn leq_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.len())
            .map(|a| (0..self.len()).map(|b| self.leq(a, b)).collect())
            .collect()
    }

    /// Longest chain ending at each element (edges).
    pub fn depth(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.len()];
        for &v in &self.linear {
            d[v] = self.lower_covers[v].iter().map(|&c| d[c] + 1).max().unwrap_or(0);
        }
        d
    }

    fn compute_graded_rank(&self) -> Option<Vec<usize>> {
        let d = self.depth();
        let ok = self.covers.iter().all(|&(a, b)| d[b] == d[a] + 1)
            && self
                .minimal_elements()
                .iter()
                .all(|&m| d[m] == 0);
        ok.then_some(d)
    }

    /// Rank function when every cover raises the depth by exactly one.
    pub fn graded_rank(&self) -> Option<&[usize]> {
        self.graded_rank.as_deref()
    }

    /// Length of the longest chain from `y` up to `x` (both included);
    /// `None` when `y` is not below `x`.
    pub fn interval_length(&self, x: usize, y: usize) -> Option<usize> {
        if !self.leq(y, x) {
            return None;
        }
        if let Some(r) = &self.graded_rank {
            return Some(r[x] - r[y]);
        }
        let mut best = vec![None::<usize>; self.len()];
        best[y] = Some(0);
        for &v in &self.linear {
            if let Some(b) = best[v] {
                for &u in &self.upper_covers[v] {
                    if self.leq(u, x) {
                        best[u] = Some(best[u].map_or(b + 1, |c: usize| c.max(b + 1)));
                    }
                }
            }
        }
        best[x]
    }

    /// Longest strict chain, in edges; 0 for empty or discrete posets.
    pub fn height(&self) -> usize {
        self.depth().into_iter().max().unwrap_or(0)
    }

    /// Elements strictly between `y` and `x`, ascending.
    pub fn open_interval_indices(&self, x: usize, y: usize) -> Vec<usize> {
        if x == y || !self.leq(y, x) {
            return Vec::new();
        }
        let mut s = self.up[y].clone();
        s.intersect_with(&self.down[x]);
        s.set(x, false);
        s.set(y, false);
        s.ones().collect()
    }

    /// The open interval `I(x, y) = {z : y < z < x}` as a poset.
    pub fn open_interval(&self, x: usize, y: usize) -> Result<FinitePoset, PosetError> {
        self.check_index(x)?;
        self.check_index(y)?;
        let idx = self.open_interval_indices(x, y);
        Ok(self.induced_convex(&idx))
    }

    /// Induced subposet on a convex subset (covers restrict directly).
    pub fn induced_convex(&self, idx: &[usize]) -> FinitePoset {
        let m = idx.len();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &v) in idx.iter().enumerate() {
            pos[v] = i;
        }
        let covers: Vec<(usize, usize)> = idx
            .iter()
            .flat_map(|&a| self.upper_covers[a].iter().map(move |&b| (a, b)))
            .filter(|&(_, b)| pos[b] != usize::MAX)
            .map(|(a, b)| (pos[a], pos[b]))
            .collect();
        let p = FinitePoset::from_covers(m, &covers).expect("subposet of a poset");
        p.with_labels(idx.iter().map(|&v| self.labels[v].clone()).collect())
    }

    /// Induced subposet on an arbitrary subset.
    pub fn induced(&self, idx: &[usize]) -> FinitePoset {
        let rel: Vec<(usize, usize)> = (0..idx.len())
            .flat_map(|i| (0..idx.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| i != j && self.leq(idx[i], idx[j]))
            .collect();
        let p = FinitePoset::from_covers(idx.len(), &rel).expect("subposet of a poset");
        p.with_labels(idx.iter().map(|&v| self.labels[v].clone()).collect())
    }

    /// Componentwise order on pairs; element `(a, b)` has index
    /// `a * other.len() + b`.
    pub fn product(&self, other: &FinitePoset) -> FinitePoset {
        let m = other.len();
        let mut rel = Vec::new();
        for a in 0..self.len() {
            for b in 0..m {
                for &a2 in &self.upper_covers[a] {
                    rel.push((a * m + b, a2 * m + b));
                }
                for &b2 in &other.upper_covers[b] {
                    rel.push((a * m + b, a * m + b2));
                }
            }
        }
        let labels = (0..self.len())
            .flat_map(|a| (0..m).map(move |b| (a, b)))
            .map(|(a, b)| format!("{}.{}", self.labels[a], other.labels[b]))
            .collect();
        FinitePoset::from_covers(self.len() * m, &rel)
            .expect("product of posets")
            .with_labels(labels)
    }

    /// Least upper bound, if it exists.
    pub fn join(&self, a: usize, b: usize) -> Option<usize> {
        let mut u = self.up[a].clone();
        u.intersect_with(&self.up[b]);
        u.ones().find(|&c| {
            let mut t = u.clone();
            t.difference_with(&self.up[c]);
            t.is_clear()
        })
    }

    /// Greatest lower bound, if it exists.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let mut d = self.down[a].clone();
        d.intersect_with(&self.down[b]);
        d.ones().find(|&c| {
            let mut t = d.clone();
            t.difference_with(&self.down[c]);
            t.is_clear()
        })
    }

    pub fn is_lattice(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        (0..n).all(|a| (a + 1..n).all(|b| self.join(a, b).is_some() && self.meet(a, b).is_some()))
    }

    /// Modular lattice test: `a <= c` implies `a v (b ^ c) = (a v b) ^ c`.
    pub fn is_modular_lattice(&self) -> bool {
        if !self.is_lattice() {
            return false;
        }
        let n = self.len();
        for a in 0..n {
            for c in self.up[a].ones() {
                for b in 0..n {
                    let l = self.join(a, self.meet(b, c).unwrap()).unwrap();
                    let r = self.meet(self.join(a, b).unwrap(), c).unwrap();
                    if l != r {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The opposite order.
    pub fn dual(&self) -> FinitePoset {
        let rel: Vec<_> = self.covers.iter().map(|&(a, b)| (b, a)).collect();
        FinitePoset::from_covers(self.len(), &rel)
            .expect("dual of a poset")
            .with_labels(self.labels.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FinitePoset {
        FinitePoset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn closure_and_reduction() {
        let p = FinitePoset::from_covers(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(p.covers(), &[(0, 1), (1, 2)]);
        assert!(p.leq(0, 2));
        assert!(!p.leq(2, 0));
        assert_eq!(
            FinitePoset::from_covers(2, &[(0, 1), (1, 0)]).unwrap_err(),
            PosetError::Cycle
        );
    }

    #[test]
    fn leq_matrix_validation() {
        let bad = vec![vec![true, true, false], vec![false, true, true], vec![false, false, true]];
        assert_eq!(
            FinitePoset::from_leq_matrix(&bad).unwrap_err(),
            PosetError::NotTransitive(0, 1, 2)
        );
        let p = diamond();
        let q = FinitePoset::from_leq_matrix(&p.leq_matrix()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn heights() {
        assert_eq!(FinitePoset::chain(3).height(), 3);
        assert_eq!(FinitePoset::discrete(5).height(), 0);
        assert_eq!(FinitePoset::discrete(0).height(), 0);
        assert_eq!(diamond().height(), 2);
    }

    #[test]
    fn intervals() {
        let p = diamond();
        let i = p.open_interval(3, 0).unwrap();
        assert_eq!(i.len(), 2);
        assert_eq!(i.height(), 0);
        assert!(p.open_interval(1, 2).unwrap().is_empty());
        assert!(p.open_interval(1, 1).unwrap().is_empty());
        assert!(FinitePoset::chain(1).open_interval(1, 0).unwrap().is_empty());
        assert_eq!(p.interval_length(3, 0), Some(2));
        assert!(p.open_interval(7, 0).is_err());
    }

    #[test]
    fn products() {
        let c1 = FinitePoset::chain(1);
        let d = c1.product(&c1);
        assert!(is_isomorphic(&d, &diamond()));
        let pt = FinitePoset::discrete(1);
        assert!(is_isomorphic(&diamond().product(&pt), &diamond()));
    }

    #[test]
    fn lattices() {
        assert!(diamond().is_lattice());
        assert!(diamond().is_modular_lattice());
        assert!(!FinitePoset::discrete(2).is_lattice());
        // pentagon N5 is a lattice but not modular
        let n5 = FinitePoset::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        assert!(n5.is_lattice());
        assert!(!n5.is_modular_lattice());
    }

    #[test]
    fn non_graded_interval_length() {
        let n5 = FinitePoset::from_covers(5, &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)]).unwrap();
        assert!(n5.graded_rank().is_none());
        assert_eq!(n5.interval_length(4, 0), Some(3));
        assert_eq!(n5.interval_length(3, 0), Some(1));
    }
}
