//! Minimal resolutions with every syzygy kept as a sub-presheaf of the
//! previous projective. A sum of representables has a coordinate basis at
//! each `z` (its summands at elements `>= z`) and its structure maps are
//! coordinate inclusions, so a sub-presheaf is just a subspace per element
//! written in global summand indices.

use std::collections::BTreeMap;

use crate::posets::FinitePoset;
use crate::qlinalg::sparse::{kernel, Echelon, SparseVec};

use super::OracleError;

/// Multiplicity of each representable in each homological degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    x: usize,
    terms: Vec<BTreeMap<usize, usize>>,
}

impl Resolution {
    pub fn simple(&self) -> usize {
        self.x
    }

    /// `terms()[n][y]` copies of the representable at `y` in degree `n`.
    pub fn terms(&self) -> &[BTreeMap<usize, usize>] {
        &self.terms
    }

    /// Last nonzero degree.
    pub fn length(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn multiplicity(&self, n: usize, y: usize) -> usize {
        self.terms.get(n).and_then(|t| t.get(&y)).copied().unwrap_or(0)
    }
}

/// Resolves `S_x`. `max_len` must be at least `height + 1`; a resolution
/// still running after `max_len` steps is an error, as is any failed
/// exactness or minimality audit.
pub fn minimal_resolution(p: &FinitePoset, x: usize, max_len: usize) -> Result<Resolution, OracleError> {
    if x >= p.len() {
        return Err(OracleError::IndexOutOfRange(x));
    }
    let need = p.height() + 1;
    if max_len < need {
        return Err(OracleError::MaxLenTooSmall { max_len, need });
    }
    // only the down-set of x is ever nonzero; visit it top-down
    let order: Vec<usize> = p
        .linear_extension()
        .iter()
        .rev()
        .copied()
        .filter(|&z| p.leq(z, x))
        .collect();

    // degree 0: one summand at x; its kernel onto S_x is everything below x
    let mut gens: Vec<usize> = vec![x];
    let mut syz: Vec<Vec<SparseVec>> = vec![Vec::new(); p.len()];
    for &z in &order {
        if z != x {
            syz[z].push(vec![(0, 1i64.into())]);
        }
    }
    let mut terms = vec![BTreeMap::from([(x, 1)])];

    for degree in 0..max_len {
        if syz.iter().all(Vec::is_empty) {
            return Ok(Resolution { x, terms });
        }
        // minimality: the syzygy lies in the radical, i.e. it never uses a
        // summand sitting at the element itself
        for &z in &order {
            if syz[z].iter().flatten().any(|&(g, _)| gens[g as usize] == z) {
                return Err(OracleError::NotMinimal { degree, z });
            }
        }
        // top of the syzygy: a basis at z modulo images from above
        let mut next: Vec<usize> = Vec::new();
        let mut images: Vec<SparseVec> = Vec::new();
        for &z in &order {
            let mut e = Echelon::new();
            for &u in p.upper_covers(z) {
                for v in &syz[u] {
                    e.insert(v.clone());
                }
            }
            for v in &syz[z] {
                if e.insert(v.clone()) {
                    next.push(z);
                    images.push(v.clone());
                }
            }
        }
        let mut term = BTreeMap::new();
        for &w in &next {
            *term.entry(w).or_insert(0) += 1;
        }
        terms.push(term);

        // new syzygy: relations among the generators alive at each z
        let mut new_syz: Vec<Vec<SparseVec>> = vec![Vec::new(); p.len()];
        for &z in &order {
            let alive: Vec<usize> = (0..next.len()).filter(|&h| p.leq(z, next[h])).collect();
            let cols: Vec<SparseVec> = alive.iter().map(|&h| images[h].clone()).collect();
            let (rank, rel) = kernel(&cols);
            // exactness: the new generators span the old syzygy at z
            if rank != syz[z].len() {
                return Err(OracleError::NotExact { degree: degree + 1, z });
            }
            new_syz[z] = rel
                .into_iter()
                .map(|r| r.into_iter().map(|(j, c)| (alive[j as usize] as u32, c)).collect())
                .collect();
        }
        gens = next;
        syz = new_syz;
    }
    if syz.iter().all(Vec::is_empty) {
        return Ok(Resolution { x, terms });
    }
    Err(OracleError::NonTermination { x, max_len })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::minimal_resolution_dense;

    #[test]
    fn chain_and_discrete() {
        let p = FinitePoset::chain(1);
        let r = minimal_resolution(&p, 1, 3).unwrap();
        assert_eq!(r.terms(), &[BTreeMap::from([(1, 1)]), BTreeMap::from([(0, 1)])]);
        assert_eq!(r.length(), 1);
        let d = FinitePoset::discrete(4);
        assert_eq!(minimal_resolution(&d, 2, 1).unwrap().length(), 0);
    }

    #[test]
    fn guards() {
        let p = FinitePoset::chain(3);
        assert_eq!(
            minimal_resolution(&p, 3, 2),
            Err(OracleError::MaxLenTooSmall { max_len: 2, need: 4 })
        );
        assert!(minimal_resolution(&p, 9, 9).is_err());
    }

    #[test]
    fn matches_dense_route() {
        let posets = [
            FinitePoset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap(),
            // two crossing chains: a, b < c, d
            FinitePoset::from_covers(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap(),
            FinitePoset::from_covers(6, &[(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 5), (4, 5)]).unwrap(),
        ];
        for p in &posets {
            for x in 0..p.len() {
                let sparse = minimal_resolution(p, x, p.height() + 2).unwrap();
                let dense = minimal_resolution_dense(p, x, p.height() + 2).unwrap();
                assert_eq!(sparse.terms(), dense.as_slice());
            }
        }
    }
}
