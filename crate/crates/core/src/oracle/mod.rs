//! Rational presheaves on a finite poset (modules over its incidence
//! algebra), projective covers and minimal projective resolutions, by plain
//! linear algebra. Nothing here looks at interval cohomology.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::izext::ExtTable;
use crate::posets::FinitePoset;
use crate::qlinalg::matrix::{nullspace, rref, solve};
use crate::qlinalg::{rank_q, QMatrix};

mod resolution;

pub use resolution::{minimal_resolution, Resolution};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("element {0} out of range")]
    IndexOutOfRange(usize),
    #[error("map at {y} <- {x} has shape {found:?}, expected {expected:?}")]
    Shape {
        y: usize,
        x: usize,
        found: (usize, usize),
        expected: (usize, usize),
    },
    #[error("missing structure map at {y} <- {x}")]
    MissingMap { y: usize, x: usize },
    #[error("functoriality fails at {z} < {y} < {x}")]
    NotFunctorial { z: usize, y: usize, x: usize },
    #[error("naturality fails at {y} < {x}")]
    NotNatural { y: usize, x: usize },
    #[error("subspaces are not closed under the structure map at {y} <- {x}")]
    NotClosed { y: usize, x: usize },
    #[error("max_len {max_len} is below height + 1 = {need}")]
    MaxLenTooSmall { max_len: usize, need: usize },
    #[error("resolution of S_{x} does not stop within {max_len} steps")]
    NonTermination { x: usize, max_len: usize },
    #[error("exactness fails in degree {degree} at element {z}")]
    NotExact { degree: usize, z: usize },
    #[error("differential in degree {degree} leaves the radical at element {z}")]
    NotMinimal { degree: usize, z: usize },
    #[error("global dimension of the empty poset is undefined")]
    EmptyPoset,
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Structure maps `M(x) -> M(y)` for every `y < x`, each `dims[y] × dims[x]`.
#[derive(Clone, Debug)]
pub struct Presheaf<'p> {
    poset: &'p FinitePoset,
    dims: Vec<usize>,
    maps: HashMap<(usize, usize), QMatrix>,
}

impl<'p> Presheaf<'p> {
    /// Validates shapes and functoriality.
    pub fn new(
        poset: &'p FinitePoset,
        dims: Vec<usize>,
        maps: HashMap<(usize, usize), QMatrix>,
    ) -> Result<Self, OracleError> {
        assert_eq!(dims.len(), poset.len(), "one dimension per element");
        for x in 0..poset.len() {
            for y in poset.down_set(x).ones().filter(|&y| y != x) {
                let m = maps.get(&(y, x)).ok_or(OracleError::MissingMap { y, x })?;
                if (m.rows(), m.cols()) != (dims[y], dims[x]) {
                    return Err(OracleError::Shape {
                        y,
                        x,
                        found: (m.rows(), m.cols()),
                        expected: (dims[y], dims[x]),
                    });
                }
            }
        }
        let m = Presheaf { poset, dims, maps };
        m.check_functoriality()?;
        Ok(m)
    }

    pub fn zero(poset: &'p FinitePoset) -> Self {
        Self::from_parts(poset, vec![0; poset.len()], |_, _| None)
    }

    /// Unchecked constructor; missing maps are zero.
    fn from_parts(
        poset: &'p FinitePoset,
        dims: Vec<usize>,
        mut map: impl FnMut(usize, usize) -> Option<QMatrix>,
    ) -> Self {
        let mut maps = HashMap::new();
        for x in 0..poset.len() {
            for y in poset.down_set(x).ones().filter(|&y| y != x) {
                let m = map(y, x).unwrap_or_else(|| QMatrix::zeros(dims[y], dims[x]));
                maps.insert((y, x), m);
            }
        }
        Presheaf { poset, dims, maps }
    }

    pub fn poset(&self) -> &'p FinitePoset {
        self.poset
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, z: usize) -> usize {
        self.dims[z]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `M(x) -> M(y)` for `y <= x`.
    pub fn map(&self, y: usize, x: usize) -> QMatrix {
        if x == y {
            QMatrix::identity(self.dims[x])
        } else {
            self.maps[&(y, x)].clone()
        }
    }

    pub fn check_functoriality(&self) -> Result<(), OracleError> {
        let p = self.poset;
        for x in 0..p.len() {
            for y in p.down_set(x).ones().filter(|&y| y != x) {
                let yx = &self.maps[&(y, x)];
                for z in p.down_set(y).ones().filter(|&z| z != y) {
                    if self.maps[&(z, y)].mul(yx) != self.maps[&(z, x)] {
                        return Err(OracleError::NotFunctorial { z, y, x });
                    }
                }
            }
        }
        Ok(())
    }
}

/// Componentwise linear maps `source(z) -> target(z)` commuting with the
/// structure maps.
#[derive(Clone, Debug)]
pub struct PresheafMap<'p> {
    source: Presheaf<'p>,
    target: Presheaf<'p>,
    components: Vec<QMatrix>,
}

impl<'p> PresheafMap<'p> {
    pub fn new(
        source: Presheaf<'p>,
        target: Presheaf<'p>,
        components: Vec<QMatrix>,
    ) -> Result<Self, OracleError> {
        let p = source.poset;
        for (z, c) in components.iter().enumerate() {
            if (c.rows(), c.cols()) != (target.dims[z], source.dims[z]) {
                return Err(OracleError::Shape {
                    y: z,
                    x: z,
                    found: (c.rows(), c.cols()),
                    expected: (target.dims[z], source.dims[z]),
                });
            }
        }
        for x in 0..p.len() {
            for y in p.down_set(x).ones().filter(|&y| y != x) {
                let left = target.maps[&(y, x)].mul(&components[x]);
                let right = components[y].mul(&source.maps[&(y, x)]);
                if left != right {
                    return Err(OracleError::NotNatural { y, x });
                }
            }
        }
        Ok(PresheafMap {
            source,
            target,
            components,
        })
    }

    pub fn source(&self) -> &Presheaf<'p> {
        &self.source
    }

    pub fn target(&self) -> &Presheaf<'p> {
        &self.target
    }

    pub fn component(&self, z: usize) -> &QMatrix {
        &self.components[z]
    }

    pub fn is_surjective(&self) -> bool {
        self.components
            .iter()
            .enumerate()
            .all(|(z, c)| rank_q(c) == self.target.dims[z])
    }

    pub fn is_injective(&self) -> bool {
        self.components
            .iter()
            .enumerate()
            .all(|(z, c)| rank_q(c) == self.source.dims[z])
    }
}

/// `Q` at `x`, zero elsewhere.
pub fn simple(p: &FinitePoset, x: usize) -> Result<Presheaf<'_>, OracleError> {
    if x >= p.len() {
        return Err(OracleError::IndexOutOfRange(x));
    }
    let dims = (0..p.len()).map(|z| usize::from(z == x)).collect();
    Ok(Presheaf::from_parts(p, dims, |_, _| None))
}

/// `Q` on the down-set of `x` with identity maps.
pub fn representable(p: &FinitePoset, x: usize) -> Result<Presheaf<'_>, OracleError> {
    if x >= p.len() {
        return Err(OracleError::IndexOutOfRange(x));
    }
    let dims: Vec<usize> = (0..p.len()).map(|z| usize::from(p.leq(z, x))).collect();
    let d = dims.clone();
    Ok(Presheaf::from_parts(p, dims, |y, z| {
        (d[y] == 1 && d[z] == 1).then(|| QMatrix::identity(1))
    }))
}

/// Column basis of the span of `vectors` in `Q^dim`, in reduced form.
fn span_basis(vectors: &[Vec<BigRational>], dim: usize) -> QMatrix {
    if vectors.is_empty() {
        return QMatrix::zeros(dim, 0);
    }
    let (r, piv) = rref(&QMatrix::from_rows(vectors.to_vec()));
    let rows: Vec<Vec<BigRational>> = (0..piv.len()).map(|i| r.row(i).to_vec()).collect();
    QMatrix::from_cols(rows, dim)
}

fn columns(m: &QMatrix) -> Vec<Vec<BigRational>> {
    (0..m.cols()).map(|j| m.col(j)).collect()
}

/// The sub-presheaf whose value at `z` is the column span of `bases[z]`
/// (full column rank), with its inclusion.
pub fn sub_presheaf<'p>(
    m: &Presheaf<'p>,
    bases: Vec<QMatrix>,
) -> Result<(Presheaf<'p>, PresheafMap<'p>), OracleError> {
    let p = m.poset;
    let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
    let mut maps = HashMap::new();
    for x in 0..p.len() {
        for y in p.down_set(x).ones().filter(|&y| y != x) {
            let image = m.maps[&(y, x)].mul(&bases[x]);
            let mut cols = Vec::with_capacity(dims[x]);
            for j in 0..dims[x] {
                let c = solve(&bases[y], &image.col(j)).ok_or(OracleError::NotClosed { y, x })?;
                cols.push(c);
            }
            maps.insert((y, x), QMatrix::from_cols(cols, dims[y]));
        }
    }
    let sub = Presheaf::new(p, dims, maps)?;
    let inc = PresheafMap::new(sub.clone(), m.clone(), bases)?;
    Ok((sub, inc))
}

/// Span at each `y` of the images of all `M(x) -> M(y)` with `x > y`.
pub fn radical<'p>(m: &Presheaf<'p>) -> Result<(Presheaf<'p>, PresheafMap<'p>), OracleError> {
    let bases = radical_bases(m);
    sub_presheaf(m, bases)
}

fn radical_bases(m: &Presheaf<'_>) -> Vec<QMatrix> {
    let p = m.poset;
    (0..p.len())
        .map(|y| {
            // images from upper covers already contain those from above
            let vs: Vec<Vec<BigRational>> = p
                .upper_covers(y)
                .iter()
                .flat_map(|&x| columns(&m.maps[&(y, x)]))
                .collect();
            span_basis(&vs, m.dims[y])
        })
        .collect()
}

/// A sum of representables mapping onto `M`, one summand per top basis
/// vector; `generators[i]` is the element of summand `i`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover<'p> {
    pub projective: Presheaf<'p>,
    pub cover: PresheafMap<'p>,
    pub generators: Vec<usize>,
}

impl ProjectiveCover<'_> {
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for &w in &self.generators {
            *out.entry(w).or_insert(0) += 1;
        }
        out
    }
}

/// The direct sum of `representable(w)` over `gens`, with inclusion maps.
pub fn sum_of_representables<'p>(p: &'p FinitePoset, gens: &[usize]) -> Presheaf<'p> {
    let support: Vec<Vec<usize>> = (0..p.len())
        .map(|z| (0..gens.len()).filter(|&g| p.leq(z, gens[g])).collect())
        .collect();
    let dims = support.iter().map(Vec::len).collect();
    Presheaf::from_parts(p, dims, |y, x| {
        let m = QMatrix::from_fn(support[y].len(), support[x].len(), |i, j| {
            if support[y][i] == support[x][j] {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        });
        Some(m)
    })
}

/// Lifts a basis of `M / rad M`, chosen among standard basis vectors in
/// order, to summands of a projective.
pub fn projective_cover<'p>(m: &Presheaf<'p>) -> Result<ProjectiveCover<'p>, OracleError> {
    let p = m.poset;
    let rad = radical_bases(m);
    let mut gens: Vec<(usize, usize)> = Vec::new();
    for w in 0..p.len() {
        let mut rows = columns(&rad[w]);
        let mut r = rows.len();
        for i in 0..m.dims[w] {
            let e: Vec<BigRational> = (0..m.dims[w]).map(|k| q(i64::from(k == i))).collect();
            rows.push(e);
            let rk = rank_q(&QMatrix::from_rows(rows.clone()));
            if rk > r {
                r = rk;
                gens.push((w, i));
            } else {
                rows.pop();
            }
        }
    }
    let elems: Vec<usize> = gens.iter().map(|g| g.0).collect();
    let projective = sum_of_representables(p, &elems);
    let components = (0..p.len())
        .map(|z| {
            let cols: Vec<Vec<BigRational>> = gens
                .iter()
                .filter(|&&(w, _)| p.leq(z, w))
                .map(|&(w, i)| m.map(z, w).col(i))
                .collect();
            QMatrix::from_cols(cols, m.dims[z])
        })
        .collect();
    let cover = PresheafMap::new(projective.clone(), m.clone(), components)?;
    Ok(ProjectiveCover {
        projective,
        cover,
        generators: elems,
    })
}

/// Kernel of a presheaf map as a sub-presheaf of its source.
pub fn kernel<'p>(f: &PresheafMap<'p>) -> Result<(Presheaf<'p>, PresheafMap<'p>), OracleError> {
    let bases = f
        .components
        .iter()
        .enumerate()
        .map(|(z, c)| span_basis(&nullspace(c), f.source.dims[z]))
        .collect();
    sub_presheaf(&f.source, bases)
}

/// Minimal resolution of `S_x` built from [`projective_cover`] and
/// [`kernel`] on dense presheaves; small posets only. Returns the
/// multiplicities of each term.
pub fn minimal_resolution_dense(
    p: &FinitePoset,
    x: usize,
    max_len: usize,
) -> Result<Vec<BTreeMap<usize, usize>>, OracleError> {
    let mut m = simple(p, x)?;
    let mut terms = Vec::new();
    for degree in 0..=max_len {
        let pc = projective_cover(&m)?;
        if !pc.cover.is_surjective() {
            return Err(OracleError::NotExact { degree, z: x });
        }
        terms.push(pc.multiplicities());
        let (k, inc) = kernel(&pc.cover)?;
        // the syzygy must sit inside the radical of the projective
        let rad = radical_bases(&pc.projective);
        for z in 0..p.len() {
            let r = rad[z].cols();
            let mut both = columns(&rad[z]);
            both.extend(columns(inc.component(z)));
            if !both.is_empty() && rank_q(&QMatrix::from_rows(both)) != r {
                return Err(OracleError::NotMinimal { degree, z });
            }
        }
        if k.total_dim() == 0 {
            return Ok(terms);
        }
        m = k;
    }
    Err(OracleError::NonTermination { x, max_len })
}

/// `max_x` of the length of the minimal resolution of `S_x`.
pub fn gldim_oracle(p: &FinitePoset) -> Result<usize, OracleError> {
    if p.is_empty() {
        return Err(OracleError::EmptyPoset);
    }
    let max_len = p.height() + 2;
    let mut best = 0;
    for x in 0..p.len() {
        best = best.max(minimal_resolution(p, x, max_len)?.length());
    }
    Ok(best)
}

/// Every nonzero `dim Ext^n(S_x, S_y)`, read off minimal resolutions.
pub fn ext_table(p: &FinitePoset) -> Result<ExtTable, OracleError> {
    let max_len = p.height() + 2;
    let mut entries = BTreeMap::new();
    for x in 0..p.len() {
        let r = minimal_resolution(p, x, max_len)?;
        for (n, term) in r.terms().iter().enumerate() {
            for (&y, &m) in term {
                entries.insert((x, y, n), m);
            }
        }
    }
    Ok(ExtTable {
        labels: p.labels().to_vec(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> FinitePoset {
        FinitePoset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn simple_and_representable() {
        let p = diamond();
        let s = simple(&p, 3).unwrap();
        assert_eq!(s.total_dim(), 1);
        s.check_functoriality().unwrap();
        let r = representable(&p, 3).unwrap();
        assert_eq!(r.total_dim(), 4);
        assert_eq!(representable(&p, 0).unwrap().dims(), simple(&p, 0).unwrap().dims());
        assert!(simple(&p, 9).is_err());
    }

    #[test]
    fn functoriality_is_checked() {
        let p = FinitePoset::chain(2);
        let mut maps = HashMap::new();
        let one = QMatrix::identity(1);
        maps.insert((0, 1), one.clone());
        maps.insert((1, 2), one.clone());
        maps.insert((0, 2), QMatrix::zeros(1, 1));
        let err = Presheaf::new(&p, vec![1, 1, 1], maps).unwrap_err();
        assert_eq!(err, OracleError::NotFunctorial { z: 0, y: 1, x: 2 });
    }

    #[test]
    fn radicals() {
        let p = FinitePoset::chain(1);
        assert_eq!(radical(&simple(&p, 1).unwrap()).unwrap().0.total_dim(), 0);
        let (r, inc) = radical(&representable(&p, 1).unwrap()).unwrap();
        assert_eq!(r.dims(), &[1, 0]);
        assert!(inc.is_injective());
        let d = diamond();
        let (r, _) = radical(&representable(&d, 3).unwrap()).unwrap();
        assert_eq!(r.dims(), &[1, 1, 1, 0]);
    }

    #[test]
    fn covers() {
        let p = FinitePoset::chain(1);
        let pc = projective_cover(&simple(&p, 1).unwrap()).unwrap();
        assert_eq!(pc.generators, vec![1]);
        let (k, _) = kernel(&pc.cover).unwrap();
        assert_eq!(k.dims(), simple(&p, 0).unwrap().dims());
        let d = diamond();
        let rep = representable(&d, 3).unwrap();
        let pc = projective_cover(&rep).unwrap();
        assert_eq!(pc.generators, vec![3]);
        assert!(pc.cover.is_injective() && pc.cover.is_surjective());
    }

    #[test]
    fn dense_resolutions() {
        let p = FinitePoset::chain(1);
        let t = minimal_resolution_dense(&p, 1, 3).unwrap();
        assert_eq!(t, vec![BTreeMap::from([(1, 1)]), BTreeMap::from([(0, 1)])]);
        let d = diamond();
        let t = minimal_resolution_dense(&d, 3, 4).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[2], BTreeMap::from([(0, 1)]));
        let disc = FinitePoset::discrete(3);
        assert_eq!(minimal_resolution_dense(&disc, 1, 2).unwrap().len(), 1);
    }
}
