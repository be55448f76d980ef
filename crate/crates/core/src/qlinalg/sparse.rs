//! Sparse fraction-free row echelon over the integers (rank over Q).

use std::collections::HashMap;

use super::int::Int;

/// Sparse integer vector: `(index, value)` pairs, strictly increasing index,
/// no stored zeros.
pub type SparseVec = Vec<(u32, Int)>;

pub fn normalize(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += &x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|e| !e.1.is_zero());
    out
}

/// `a*u - b*w`, merged.
fn combine(a: &Int, u: &[(u32, Int)], b: &Int, w: &[(u32, Int)]) -> SparseVec {
    let mut out = Vec::with_capacity(u.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < u.len() || j < w.len() {
        let take_u = j == w.len() || (i < u.len() && u[i].0 < w[j].0);
        let take_w = i == u.len() || (j < w.len() && w[j].0 < u[i].0);
        if take_u {
            out.push((u[i].0, a * &u[i].1));
            i += 1;
        } else if take_w {
            out.push((w[j].0, -(b * &w[j].1)));
            j += 1;
        } else {
            let x = &(a * &u[i].1) - &(b * &w[j].1);
            if !x.is_zero() {
                out.push((u[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn primitive(mut v: SparseVec) -> SparseVec {
    let mut g = Int::ZERO;
    for (_, x) in &v {
        g = g.gcd(x);
        if g.is_one() {
            return v;
        }
    }
    if !g.is_zero() {
        for (_, x) in v.iter_mut() {
            *x = x.div_exact(&g);
        }
    }
    v
}

/// Incremental echelon basis keyed by each row's largest index.
#[derive(Default, Debug, Clone)]
pub struct Echelon {
    pivots: HashMap<u32, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` until its leading index is not a pivot (or it vanishes).
    pub fn reduce(&self, v: SparseVec) -> SparseVec {
        let mut v = v;
        while let Some((lead, x)) = v.last() {
            let Some(p) = self.pivots.get(lead) else { break };
            let px = &p.last().expect("pivot rows are nonzero").1;
            let g = px.gcd(x);
            let a = px.div_exact(&g);
            let b = x.div_exact(&g);
            v = primitive(combine(&a, &v, &b, p));
        }
        v
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        match r.last() {
            None => false,
            Some(&(lead, _)) => {
                self.pivots.insert(lead, r);
                true
            }
        }
    }
}

/// Rank of the columns and a basis of their relations: each returned vector
/// `c` (indexed by column) satisfies `sum_j c_j cols[j] = 0`. Columns are
/// taken in order, so the kernel basis is reproducible.
pub fn kernel(cols: &[SparseVec]) -> (usize, Vec<SparseVec>) {
    let mut pivots: HashMap<u32, (SparseVec, SparseVec)> = HashMap::new();
    let mut out = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        let mut v = col.clone();
        let mut c: SparseVec = vec![(j as u32, Int::ONE)];
        while let Some((lead, x)) = v.last() {
            let Some((pv, pc)) = pivots.get(lead) else { break };
            let px = &pv.last().expect("pivot rows are nonzero").1;
            let g = px.gcd(x);
            let a = px.div_exact(&g);
            let b = x.div_exact(&g);
            v = combine(&a, &v, &b, pv);
            c = combine(&a, &c, &b, pc);
            let g = v.iter().chain(&c).fold(Int::ZERO, |g, (_, x)| g.gcd(x));
            if !g.is_one() {
                for (_, x) in v.iter_mut().chain(c.iter_mut()) {
                    *x = x.div_exact(&g);
                }
            }
        }
        match v.last() {
            None => out.push(primitive(c)),
            Some(&(lead, _)) => {
                pivots.insert(lead, (v, c));
            }
        }
    }
    (pivots.len(), out)
}

/// Rank over Q of the rows.
pub fn sparse_rank<I: IntoIterator<Item = SparseVec>>(rows: I) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::matrix::{rank, IntMatrix};
    use proptest::prelude::*;

    fn to_sparse(m: &IntMatrix) -> Vec<SparseVec> {
        (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .filter(|&j| !m[(i, j)].is_zero())
                    .map(|j| (j as u32, m[(i, j)].clone()))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn simple_rank() {
        let m = IntMatrix::from_i64(&[&[1, -1, 0], &[0, 1, -1], &[1, 0, -1]]);
        assert_eq!(sparse_rank(to_sparse(&m)), 2);
    }

    #[test]
    fn normalize_merges() {
        let v = normalize(vec![(3, Int::from(1)), (1, Int::from(2)), (3, Int::from(-1))]);
        assert_eq!(v, vec![(1, Int::from(2))]);
    }

    fn apply(cols: &[SparseVec], c: &SparseVec) -> SparseVec {
        let mut acc = Vec::new();
        for (j, x) in c {
            acc.extend(cols[*j as usize].iter().map(|(i, y)| (*i, x * y)));
        }
        normalize(acc)
    }

    proptest! {
        #[test]
        fn kernel_is_exact(r in 1usize..7, c in 1usize..7, v in proptest::collection::vec(-3i64..4, 49)) {
            let m = IntMatrix::from_fn(r, c, |i, j| Int::from(v[i * 7 + j]));
            let cols = to_sparse(&m.transpose());
            let (rk, ker) = kernel(&cols);
            prop_assert_eq!(rk, rank(&m));
            prop_assert_eq!(ker.len(), c - rk);
            for k in &ker {
                prop_assert!(apply(&cols, k).is_empty());
            }
            prop_assert_eq!(sparse_rank(ker.iter().cloned()), ker.len());
        }


        #[test]
        fn agrees_with_bareiss(r in 1usize..7, c in 1usize..7, v in proptest::collection::vec(-3i64..4, 49)) {
            let m = IntMatrix::from_fn(r, c, |i, j| Int::from(v[i * 7 + j]));
            prop_assert_eq!(sparse_rank(to_sparse(&m)), rank(&m));
        }
    }
}
