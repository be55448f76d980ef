//! Finite abelian groups, their subgroups as HNF lattices, and subgroup
//! lattices.

pub mod arith;
pub mod elements;
mod lattice;
mod subgroup;

pub use lattice::{subgroup_lattice, subgroup_lattice_with, Budget, SubgroupLattice};
pub use subgroup::{frattini_closed_form, join, meet, quotient_factor_count, quotient_invariants, Subgroup};

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::qlinalg::Int;
use arith::{factorize, is_prime};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cannot parse group spec `{0}`")]
    Parse(String),
    #[error("cyclic factor {0} is not allowed (factors must be at least 2)")]
    BadFactor(u64),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("group order {order} exceeds the enumeration budget {max}")]
    OrderTooLarge { order: u64, max: u64 },
    #[error("subgroup enumeration budget exceeded after {found} subgroups")]
    BudgetExceeded { found: usize },
    #[error("{0} is not contained in {1}")]
    NotContained(String, String),
    #[error("subgroups live in different ambient groups")]
    AmbientMismatch,
    #[error("unknown subgroup `{0}`")]
    UnknownSubgroup(String),
}

/// A finite abelian group as a product of cyclic groups of prime-power
/// order, factors sorted by `(prime, exponent)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    factors: Vec<(u64, u32)>,
    order: u64,
}

impl AbelianGroup {
    pub fn new(mut factors: Vec<(u64, u32)>) -> Result<Self, GroupError> {
        for &(p, e) in &factors {
            if !is_prime(p) {
                return Err(GroupError::NotPrime(p));
            }
            if e == 0 {
                return Err(GroupError::BadFactor(1));
            }
        }
        factors.sort_unstable();
        let order = factors
            .iter()
            .try_fold(1u64, |acc, &(p, e)| p.checked_pow(e).and_then(|q| acc.checked_mul(q)))
            .ok_or_else(|| GroupError::Parse("order overflows".into()))?;
        Ok(AbelianGroup { factors, order })
    }

    pub fn trivial() -> Self {
        AbelianGroup {
            factors: Vec::new(),
            order: 1,
        }
    }

    /// Product of cyclic groups of the given orders (each at least 2).
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self, GroupError> {
        let mut factors = Vec::new();
        for &n in orders {
            if n < 2 {
                return Err(GroupError::BadFactor(n));
            }
            factors.extend(factorize(n));
        }
        Self::new(factors)
    }

    pub fn cyclic(n: u64) -> Self {
        if n == 1 {
            return Self::trivial();
        }
        Self::from_cyclic_orders(&[n]).expect("n >= 2")
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Number of cyclic factors `k` (coordinates of elements).
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Orders `p^e` of the cyclic factors.
    pub fn moduli(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, e)| p.pow(e)).collect()
    }

    pub fn moduli_int(&self) -> Vec<Int> {
        self.moduli().into_iter().map(Int::from).collect()
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self.factors.iter().map(|f| f.0).collect();
        ps.dedup();
        ps
    }

    /// Coordinate range of each Sylow subgroup, with its prime.
    pub fn sylow_blocks(&self) -> Vec<(u64, std::ops::Range<usize>)> {
        let mut out: Vec<(u64, std::ops::Range<usize>)> = Vec::new();
        for (i, &(p, _)) in self.factors.iter().enumerate() {
            match out.last_mut() {
                Some((q, r)) if *q == p => r.end = i + 1,
                _ => out.push((p, i..i + 1)),
            }
        }
        out
    }

    pub fn prime_of(&self, coord: usize) -> u64 {
        self.factors[coord].0
    }

    /// Invariant factors `d_1 | d_2 | ...`, all greater than one.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut per_prime: Vec<Vec<u32>> = Vec::new();
        let blocks = self.sylow_blocks();
        for (_, r) in &blocks {
            let mut es: Vec<u32> = self.factors[r.clone()].iter().map(|f| f.1).collect();
            es.sort_unstable_by(|a, b| b.cmp(a));
            per_prime.push(es);
        }
        let len = per_prime.iter().map(Vec::len).max().unwrap_or(0);
        let mut out: Vec<u64> = (0..len)
            .map(|i| {
                blocks
                    .iter()
                    .zip(&per_prime)
                    .map(|((p, _), es)| es.get(i).map_or(1, |&e| p.pow(e)))
                    .product()
            })
            .collect();
        out.reverse();
        out
    }

    /// Number of prime-power cyclic factors.
    pub fn prime_power_factor_count(&self) -> usize {
        self.factors.len()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors().len() <= 1
    }

    pub fn spec_string(&self) -> String {
        if self.factors.is_empty() {
            return "C1".into();
        }
        self.moduli()
            .iter()
            .map(|n| format!("C{n}"))
            .collect::<Vec<_>>()
            .join("x")
    }

    /// Every abelian group of the given order, up to isomorphism.
    pub fn all_of_order(n: u64) -> Vec<AbelianGroup> {
        let mut out = vec![Vec::new()];
        for (p, e) in factorize(n) {
            let mut next = Vec::new();
            for part in arith::partitions(e) {
                for base in &out {
                    let mut f: Vec<(u64, u32)> = base.clone();
                    f.extend(part.iter().map(|&x| (p, x)));
                    next.push(f);
                }
            }
            out = next;
        }
        let mut gs: Vec<AbelianGroup> = out
            .into_iter()
            .map(|f| AbelianGroup::new(f).expect("prime factors"))
            .collect();
        gs.sort();
        gs
    }

    pub fn all_up_to_order(max: u64) -> Vec<AbelianGroup> {
        (1..=max).flat_map(Self::all_of_order).collect()
    }

    pub fn into_arc(self) -> Arc<AbelianGroup> {
        Arc::new(self)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec_string())
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.spec_string())
    }
}

fn parse_num(s: &str, whole: &str) -> Result<u64, GroupError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(GroupError::Parse(whole.to_string()));
    }
    s.parse().map_err(|_| GroupError::Parse(whole.to_string()))
}

/// Parses `C<n>` factors joined by `x`, or `<p>^<e>` factors joined by `*`
/// (`^<e>` may be omitted), case-insensitively. `C1` alone is the trivial
/// group.
pub fn parse_group(spec: &str) -> Result<AbelianGroup, GroupError> {
    let s: String = spec.trim().to_ascii_lowercase();
    if s.is_empty() {
        return Err(GroupError::Parse(spec.to_string()));
    }
    if s.starts_with('c') {
        let parts: Vec<&str> = s.split('x').collect();
        let mut orders = Vec::new();
        for part in &parts {
            let num = part
                .trim()
                .strip_prefix('c')
                .ok_or_else(|| GroupError::Parse(spec.to_string()))?;
            orders.push(parse_num(num.trim(), spec)?);
        }
        if orders == [1] {
            return Ok(AbelianGroup::trivial());
        }
        return AbelianGroup::from_cyclic_orders(&orders);
    }
    let mut factors = Vec::new();
    for part in s.split('*') {
        let (p, e) = match part.trim().split_once('^') {
            Some((p, e)) => (parse_num(p.trim(), spec)?, parse_num(e.trim(), spec)?),
            None => (parse_num(part.trim(), spec)?, 1),
        };
        if p < 2 {
            return Err(GroupError::BadFactor(p));
        }
        if !is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        if e == 0 {
            return Err(GroupError::BadFactor(1));
        }
        let e = u32::try_from(e).map_err(|_| GroupError::Parse(spec.to_string()))?;
        factors.push((p, e));
    }
    AbelianGroup::new(factors)
}

/// Sum over the entries of the number of distinct primes dividing each.
pub fn count_prime_power_factors(invariants: &[u64]) -> usize {
    invariants.iter().map(|&d| factorize(d).len()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        let g = parse_group("C1").unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.factors().is_empty());
        assert_eq!(parse_group("C12").unwrap().factors(), &[(2, 2), (3, 1)]);
        assert_eq!(parse_group("c12").unwrap().order(), 12);
        assert_eq!(parse_group("C2xC2").unwrap().factors(), &[(2, 1), (2, 1)]);
        assert_eq!(parse_group("2^2*3").unwrap(), parse_group("C12").unwrap());
        assert_eq!(parse_group("2^1*2^1").unwrap(), parse_group("C2xC2").unwrap());
        assert_eq!(parse_group("2^3*3^2").unwrap().order(), 72);
        assert_eq!(parse_group("C0"), Err(GroupError::BadFactor(0)));
        assert_eq!(parse_group("C2xC1"), Err(GroupError::BadFactor(1)));
        assert_eq!(parse_group("1^3"), Err(GroupError::BadFactor(1)));
        assert_eq!(parse_group("4^1"), Err(GroupError::NotPrime(4)));
        assert_eq!(parse_group("2^0"), Err(GroupError::BadFactor(1)));
        for bad in ["", "C", "Cx2", "D4", "2^", "2**3", "C-3"] {
            assert!(parse_group(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn invariants_and_counts() {
        assert_eq!(parse_group("C12").unwrap().invariant_factors(), vec![12]);
        assert_eq!(parse_group("C2xC4xC3").unwrap().invariant_factors(), vec![2, 12]);
        assert_eq!(AbelianGroup::trivial().invariant_factors(), Vec::<u64>::new());
        assert_eq!(count_prime_power_factors(&[6]), 2);
        assert_eq!(count_prime_power_factors(&[]), 0);
        assert_eq!(count_prime_power_factors(&[2, 2]), 2);
    }

    #[test]
    fn classification_counts() {
        assert_eq!(AbelianGroup::all_of_order(16).len(), 5);
        assert_eq!(AbelianGroup::all_of_order(72).len(), 6);
        assert_eq!(AbelianGroup::all_of_order(1), vec![AbelianGroup::trivial()]);
        assert_eq!(AbelianGroup::all_up_to_order(8).len(), 1 + 1 + 1 + 2 + 1 + 1 + 1 + 3);
    }

    #[test]
    fn spec_round_trip() {
        for g in AbelianGroup::all_up_to_order(40) {
            assert_eq!(parse_group(&g.spec_string()).unwrap(), g);
        }
    }
}
