use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::arith::factorize;
use super::{AbelianGroup, GroupError};
use crate::qlinalg::hnf::{column_hnf, modular_hnf, nontrivial_invariants, solve_lower_triangular};
use crate::qlinalg::{Int, IntMatrix};

/// A subgroup `H <= G`, stored as the column HNF of the lattice
/// `L = {x in Z^k : x mod n in H}`, which sits between `diag(n) Z^k` and
/// `Z^k`. Equal subgroups have identical bases.
#[derive(Clone)]
pub struct Subgroup {
    ambient: Arc<AbelianGroup>,
    basis: IntMatrix,
    order: u64,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.ambient == other.ambient
    }
}
impl Eq for Subgroup {}

impl Hash for Subgroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.hash(state);
    }
}

impl Ord for Subgroup {
    /// By order, then row-major basis entries.
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.basis.as_slice().cmp(other.basis.as_slice()))
            .then_with(|| self.ambient.cmp(&other.ambient))
    }
}
impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Subgroup {
    /// Wraps a basis already in canonical form.
    pub(crate) fn from_canonical(ambient: Arc<AbelianGroup>, basis: IntMatrix) -> Self {
        let index: u64 = (0..basis.rows())
            .map(|i| basis[(i, i)].to_u64().expect("pivot fits in u64"))
            .product();
        let order = ambient.order() / index;
        Subgroup {
            ambient,
            basis,
            order,
        }
    }

    /// Subgroup generated by the given elements (coordinates may be any
    /// integers; they are read modulo the cyclic factor orders).
    pub fn generated_by(ambient: &Arc<AbelianGroup>, gens: &[Vec<i64>]) -> Self {
        let gens: Vec<Vec<Int>> = gens
            .iter()
            .map(|g| g.iter().map(|&v| Int::from(v)).collect())
            .collect();
        Self::generated_by_int(ambient, &gens)
    }

    pub fn generated_by_int(ambient: &Arc<AbelianGroup>, gens: &[Vec<Int>]) -> Self {
        let basis = modular_hnf(gens, &ambient.moduli_int());
        Self::from_canonical(ambient.clone(), basis)
    }

    pub fn trivial(ambient: &Arc<AbelianGroup>) -> Self {
        Self::generated_by(ambient, &[])
    }

    pub fn whole(ambient: &Arc<AbelianGroup>) -> Self {
        let basis = IntMatrix::identity(ambient.rank());
        Self::from_canonical(ambient.clone(), basis)
    }

    pub fn ambient(&self) -> &Arc<AbelianGroup> {
        &self.ambient
    }

    pub fn lattice_basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    fn same_ambient(&self, other: &Subgroup) -> Result<(), GroupError> {
        if Arc::ptr_eq(&self.ambient, &other.ambient) || self.ambient == other.ambient {
            Ok(())
        } else {
            Err(GroupError::AmbientMismatch)
        }
    }

    /// Whether the integer vector lies in this subgroup's lattice.
    pub fn contains_vector(&self, v: &[Int]) -> bool {
        solve_lower_triangular(&self.basis, v).is_some()
    }

    pub fn contains_element(&self, g: &[u64]) -> bool {
        let v: Vec<Int> = g.iter().map(|&x| Int::from(x)).collect();
        self.contains_vector(&v)
    }

    /// `other <= self`.
    pub fn contains(&self, other: &Subgroup) -> bool {
        if other.order > self.order || !self.order.is_multiple_of(other.order) {
            return false;
        }
        (0..other.basis.cols()).all(|j| self.contains_vector(&other.basis.col(j)))
    }

    /// Generators read off the basis columns, reduced modulo the factor
    /// orders, zero columns dropped.
    pub fn generators(&self) -> Vec<Vec<u64>> {
        let n = self.ambient.moduli_int();
        (0..self.basis.cols())
            .map(|j| {
                (0..self.basis.rows())
                    .map(|i| self.basis[(i, j)].mod_floor(&n[i]).to_u64().expect("reduced"))
                    .collect::<Vec<u64>>()
            })
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect()
    }

    /// `e`, or the generator list such as `<(1,0),(0,3)>`.
    pub fn label(&self) -> String {
        let gens = self.generators();
        if gens.is_empty() {
            return "e".into();
        }
        let parts: Vec<String> = gens
            .iter()
            .map(|g| {
                let xs: Vec<String> = g.iter().map(u64::to_string).collect();
                format!("({})", xs.join(","))
            })
            .collect();
        format!("<{}>", parts.join(","))
    }

    /// All elements, each as a coordinate tuple.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let k = self.basis.rows();
        let n = self.ambient.moduli();
        // x_i ranges over [0, n_i / d_i); x -> B x mod n is a bijection onto H
        let bounds: Vec<u64> = (0..k)
            .map(|i| n[i] / self.basis[(i, i)].to_u64().expect("pivot"))
            .collect();
        let cols: Vec<Vec<u64>> = (0..k)
            .map(|j| {
                (0..k)
                    .map(|i| self.basis[(i, j)].mod_floor(&Int::from(n[i])).to_u64().unwrap())
                    .collect()
            })
            .collect();
        let mut out = Vec::with_capacity(self.order as usize);
        let mut x = vec![0u64; k];
        loop {
            let mut g = vec![0u64; k];
            for (j, &xj) in x.iter().enumerate() {
                if xj != 0 {
                    for i in j..k {
                        g[i] = (g[i] + xj * cols[j][i]) % n[i];
                    }
                }
            }
            out.push(g);
            let mut i = 0;
            loop {
                if i == k {
                    return out;
                }
                x[i] += 1;
                if x[i] < bounds[i] {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
        }
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.label(), self.order)
    }
}

pub fn join(h: &Subgroup, k: &Subgroup) -> Result<Subgroup, GroupError> {
    h.same_ambient(k)?;
    let gens: Vec<Vec<Int>> = (0..h.basis.cols())
        .map(|j| h.basis.col(j))
        .chain((0..k.basis.cols()).map(|j| k.basis.col(j)))
        .collect();
    Ok(Subgroup::generated_by_int(&h.ambient, &gens))
}

/// Lattice intersection via the HNF of `[[B1, B2], [B1, 0]]`: columns whose
/// top half vanishes carry `L1 ∩ L2` in their bottom half.
pub fn meet(h: &Subgroup, k: &Subgroup) -> Result<Subgroup, GroupError> {
    h.same_ambient(k)?;
    let r = h.basis.rows();
    if r == 0 {
        return Ok(h.clone());
    }
    let big = IntMatrix::from_fn(2 * r, 2 * r, |i, j| {
        if i < r {
            if j < r {
                h.basis[(i, j)].clone()
            } else {
                k.basis[(i, j - r)].clone()
            }
        } else if j < r {
            h.basis[(i - r, j)].clone()
        } else {
            Int::ZERO
        }
    });
    let hnf = column_hnf(&big);
    let gens: Vec<Vec<Int>> = (0..hnf.cols())
        .filter(|&j| (0..r).all(|i| hnf[(i, j)].is_zero()))
        .map(|j| (r..2 * r).map(|i| hnf[(i, j)].clone()).collect())
        .collect();
    Ok(Subgroup::generated_by_int(&h.ambient, &gens))
}

/// Invariant factors (all greater than one) of `H/K`, from the Smith form of
/// `K`'s basis written in `H`'s basis.
pub fn quotient_invariants(h: &Subgroup, k: &Subgroup) -> Result<Vec<u64>, GroupError> {
    h.same_ambient(k)?;
    if !h.contains(k) {
        return Err(GroupError::NotContained(k.label(), h.label()));
    }
    let r = h.basis.rows();
    let cols: Vec<Vec<Int>> = (0..r)
        .map(|j| solve_lower_triangular(&h.basis, &k.basis.col(j)).expect("K <= H"))
        .collect();
    let x = IntMatrix::from_cols(cols, r);
    Ok(nontrivial_invariants(&x)
        .into_iter()
        .map(|d| d.to_u64().expect("invariant divides |G|"))
        .collect())
}

/// `Φ(H) = Σ_p p·H_p`, the abelian closed form (used as a cross-check of the
/// lattice computation).
pub fn frattini_closed_form(h: &Subgroup) -> Subgroup {
    let g = h.ambient();
    let gens: Vec<Vec<Int>> = (0..h.basis.cols())
        .map(|j| {
            let col = h.basis.col(j);
            // columns are supported in a single Sylow block
            let p = col
                .iter()
                .position(|v| !v.is_zero())
                .map_or(1, |i| g.prime_of(i));
            col.iter().map(|v| v * &Int::from(p)).collect()
        })
        .collect();
    Subgroup::generated_by_int(g, &gens)
}

/// Number of prime-power cyclic factors of `H/K`.
pub fn quotient_factor_count(h: &Subgroup, k: &Subgroup) -> Result<usize, GroupError> {
    Ok(quotient_invariants(h, k)?
        .iter()
        .map(|&d| factorize(d).len())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::parse_group;

    fn g(spec: &str) -> Arc<AbelianGroup> {
        Arc::new(parse_group(spec).unwrap())
    }

    #[test]
    fn orders_and_containment() {
        let c6 = g("C6");
        let c2 = Subgroup::generated_by(&c6, &[vec![1, 0]]);
        let c3 = Subgroup::generated_by(&c6, &[vec![0, 1]]);
        assert_eq!(c2.order(), 2);
        assert_eq!(c3.order(), 3);
        let whole = Subgroup::whole(&c6);
        assert_eq!(join(&c2, &c3).unwrap(), whole);
        assert!(meet(&c2, &c3).unwrap().is_trivial());
        assert_eq!(meet(&c2, &c2).unwrap(), c2);
        assert!(whole.contains(&c2) && !c2.contains(&c3));
        assert_eq!(c2.label(), "<(1,0)>");
        assert_eq!(Subgroup::trivial(&c6).label(), "e");
    }

    #[test]
    fn canonical_from_different_generators() {
        let a = g("C4xC4");
        let h1 = Subgroup::generated_by(&a, &[vec![1, 2], vec![0, 2]]);
        let h2 = Subgroup::generated_by(&a, &[vec![3, 0], vec![2, 2]]);
        assert_eq!(h1, h2);
        assert_eq!(h1.lattice_basis(), h2.lattice_basis());
        assert_eq!(h1.order(), 8);
        assert_eq!(h1.elements().len(), 8);
    }

    #[test]
    fn quotients() {
        let a = g("C12");
        let whole = Subgroup::whole(&a);
        let cq = Subgroup::generated_by(&a, &[vec![0, 1]]);
        let cp = Subgroup::generated_by(&a, &[vec![2, 0]]);
        assert_eq!(quotient_invariants(&whole, &cq).unwrap(), vec![4]);
        assert_eq!(quotient_invariants(&whole, &cp).unwrap(), vec![6]);
        assert_eq!(quotient_invariants(&cq, &cq).unwrap(), Vec::<u64>::new());
        assert!(quotient_invariants(&cq, &cp).is_err());
        assert_eq!(quotient_factor_count(&whole, &cp).unwrap(), 2);
    }

    #[test]
    fn frattini_closed() {
        let a = g("C2xC2");
        assert!(frattini_closed_form(&Subgroup::whole(&a)).is_trivial());
        let c12 = g("C12");
        let phi = frattini_closed_form(&Subgroup::whole(&c12));
        assert_eq!(phi.order(), 2);
    }

    #[test]
    fn ambient_mismatch() {
        let a = Subgroup::whole(&g("C2"));
        let b = Subgroup::whole(&g("C3"));
        assert_eq!(join(&a, &b), Err(GroupError::AmbientMismatch));
    }
}
