//! Reduced rational cohomology of simplicial complexes given by their
//! simplices, including the augmentation in degree -1.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::int::Int;
use super::sparse::{Echelon, SparseVec};
use crate::posets::OrderComplex;

/// Nonzero dimensions indexed by degree.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedDims(BTreeMap<i64, usize>);

impl GradedDims {
    pub fn new() -> Self {
        Self::default()
    }

    /// Dimension one in a single degree.
    pub fn unit(degree: i64) -> Self {
        let mut g = Self::new();
        g.add(degree, 1);
        g
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, usize)>>(pairs: I) -> Self {
        let mut g = Self::new();
        for (d, n) in pairs {
            g.add(d, n);
        }
        g
    }

    pub fn get(&self, degree: i64) -> usize {
        self.0.get(&degree).copied().unwrap_or(0)
    }

    pub fn add(&mut self, degree: i64, n: usize) {
        if n > 0 {
            *self.0.entry(degree).or_insert(0) += n;
        }
    }

    pub fn add_all(&mut self, other: &GradedDims) {
        for (&d, &n) in &other.0 {
            self.add(d, n);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top_degree(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn shift(&self, by: i64) -> GradedDims {
        GradedDims(self.0.iter().map(|(&d, &n)| (d + by, n)).collect())
    }

    /// Graded tensor product (dimensions convolve).
    pub fn tensor(&self, other: &GradedDims) -> GradedDims {
        let mut g = GradedDims::new();
        for (&a, &m) in &self.0 {
            for (&b, &n) in &other.0 {
                g.add(a + b, m * n);
            }
        }
        g
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0
            .iter()
            .map(|(&d, &n)| if d.rem_euclid(2) == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.0.iter().map(|(&d, &n)| (d, n))
    }

    pub fn as_map(&self) -> &BTreeMap<i64, usize> {
        &self.0
    }
}

impl fmt::Debug for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

/// Which differential is fed to the echelon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Coboundary,
    Boundary,
}

fn face_index(faces: &[Vec<u32>], f: &[u32]) -> u32 {
    faces
        .binary_search_by(|s| s.as_slice().cmp(f))
        .expect("order complex is not face-closed") as u32
}

fn boundary_rows(lower: &[Vec<u32>], upper: &[Vec<u32>]) -> Vec<SparseVec> {
    let mut face = Vec::new();
    upper
        .iter()
        .map(|s| {
            let mut row: SparseVec = (0..s.len())
                .map(|i| {
                    face.clear();
                    face.extend(s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v));
                    let sign = if i % 2 == 0 { Int::ONE } else { -Int::ONE };
                    (face_index(lower, &face), sign)
                })
                .collect();
            row.sort_by_key(|e| e.0);
            row
        })
        .collect()
}

fn transpose(rows: Vec<SparseVec>, ncols: usize) -> Vec<SparseVec> {
    let mut out: Vec<SparseVec> = vec![Vec::new(); ncols];
    for (i, r) in rows.into_iter().enumerate() {
        for (j, x) in r {
            out[j as usize].push((i as u32, x));
        }
    }
    out
}

/// Rank of the boundary map from dimension `d` to `d - 1` (`d >= 1`).
pub fn boundary_rank(c: &OrderComplex, d: usize, route: Route) -> usize {
    let s = c.simplices_by_dim();
    if d >= s.len() {
        return 0;
    }
    let rows = boundary_rows(&s[d - 1], &s[d]);
    let rows = match route {
        Route::Boundary => rows,
        Route::Coboundary => transpose(rows, s[d - 1].len()),
    };
    let mut e = Echelon::new();
    for r in rows {
        if !r.is_empty() {
            e.insert(r);
        }
    }
    e.rank()
}

/// Reduced cohomology dimensions over Q, in all degrees from -1 upward.
/// The empty complex has Q in degree -1.
pub fn reduced_cohomology_dims(c: &OrderComplex) -> GradedDims {
    reduced_cohomology_dims_by(c, Route::Coboundary)
}

pub fn reduced_cohomology_dims_by(c: &OrderComplex, route: Route) -> GradedDims {
    let s = c.simplices_by_dim();
    if s.is_empty() || s[0].is_empty() {
        return GradedDims::unit(-1);
    }
    let top = s.len();
    // ranks[d] = rank of the boundary from C_d to C_{d-1}; ranks[0] is the augmentation
    let mut ranks = vec![1usize];
    for d in 1..top {
        ranks.push(boundary_rank(c, d, route));
    }
    ranks.push(0);
    let mut out = GradedDims::new();
    for d in 0..top {
        let dim = s[d].len() - ranks[d] - ranks[d + 1];
        out.add(d as i64, dim);
    }
    out
}
