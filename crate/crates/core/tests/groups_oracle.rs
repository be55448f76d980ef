//! The lattice engine against explicit element sets.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gldim_core::groups::arith::divisors;
use gldim_core::groups::elements::{all_subgroups, closure, fixed_coset_count, Element};
use gldim_core::groups::{count_prime_power_factors, quotient_invariants, subgroup_lattice, AbelianGroup, Subgroup};
use gldim_core::transfer::{close, inseparability_classes};

fn element_set(h: &Subgroup) -> BTreeSet<Element> {
    h.elements().into_iter().collect()
}

#[test]
fn lattices_match_element_sets() {
    for g in AbelianGroup::all_up_to_order(200) {
        let l = subgroup_lattice(&g).unwrap();
        // the element engine adjoins one element at a time; keep it to small lattices
        if l.len() > 400 {
            continue;
        }
        let mut ours: Vec<BTreeSet<Element>> = l.subgroups().iter().map(element_set).collect();
        let mut theirs = all_subgroups(&g);
        ours.sort();
        theirs.sort();
        assert_eq!(ours, theirs, "{g}");
    }
}

#[test]
fn canonical_forms_from_random_generators() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in AbelianGroup::all_up_to_order(200) {
        let a = Arc::new(g.clone());
        let moduli = g.moduli();
        for _ in 0..4 {
            let gens: Vec<Vec<u64>> = (0..rng.gen_range(1..=3))
                .map(|_| moduli.iter().map(|&m| rng.gen_range(0..m)).collect())
                .collect();
            let signed: Vec<Vec<i64>> = gens.iter().map(|v| v.iter().map(|&x| x as i64).collect()).collect();
            let h = Subgroup::generated_by(&a, &signed);
            let set = closure(&g, &gens);
            assert_eq!(element_set(&h), set, "{g} {gens:?}");
            // any generating set of the same element set gives the same basis
            let mut other: Vec<Vec<u64>> = set.iter().cloned().collect();
            other.reverse();
            other.truncate(4);
            other.extend(gens.iter().cloned());
            let signed: Vec<Vec<i64>> = other.iter().map(|v| v.iter().map(|&x| x as i64).collect()).collect();
            let h2 = Subgroup::generated_by(&a, &signed);
            assert_eq!(h.lattice_basis(), h2.lattice_basis());
        }
    }
}

#[test]
fn cyclic_subgroup_counts() {
    for n in 1..=1000u64 {
        let l = subgroup_lattice(&AbelianGroup::cyclic(n)).unwrap();
        assert_eq!(l.len(), divisors(n).len(), "C{n}");
    }
}

#[test]
fn lattice_laws() {
    for spec in ["C36", "C2xC4", "C60", "C2xC2xC3", "C3xC9"] {
        let g = gldim_core::groups::parse_group(spec).unwrap();
        let l = subgroup_lattice(&g).unwrap();
        let n = l.len();
        for a in 0..n {
            assert_eq!(l.meet(a, a), a);
            assert_eq!(l.join(a, a), a);
            for b in 0..n {
                assert_eq!(l.meet(a, b), l.meet(b, a));
                assert_eq!(l.join(a, b), l.join(b, a));
                assert_eq!(l.meet(a, l.join(a, b)), a);
                assert_eq!(l.join(a, l.meet(a, b)), a);
                assert_eq!(l.meet(a, b), l.meet_by_basis(a, b));
                assert_eq!(l.join(a, b), l.join_by_basis(a, b));
                if g.is_cyclic() {
                    let o = |i| l.subgroup(i).order();
                    assert_eq!(o(l.meet(a, b)) * o(l.join(a, b)), o(a) * o(b));
                }
                for c in 0..n {
                    assert_eq!(l.meet(a, l.meet(b, c)), l.meet(l.meet(a, b), c));
                    assert_eq!(l.join(a, l.join(b, c)), l.join(l.join(a, b), c));
                }
            }
        }
    }
}

#[test]
fn whole_group_quotients() {
    for g in AbelianGroup::all_up_to_order(200) {
        let a = Arc::new(g.clone());
        let q = quotient_invariants(&Subgroup::whole(&a), &Subgroup::trivial(&a)).unwrap();
        let inv: Vec<u64> = g.invariant_factors().into_iter().filter(|&d| d > 1).collect();
        let q: Vec<u64> = q.into_iter().filter(|&d| d > 1).collect();
        assert_eq!(q, inv, "{g}");
        assert_eq!(count_prime_power_factors(&q), g.factors().len());
    }
}

#[test]
fn fingerprints_match_coset_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for g in AbelianGroup::all_up_to_order(200) {
        if g.order() == 1 {
            continue;
        }
        let l = Arc::new(subgroup_lattice(&g).unwrap());
        if l.len() > 40 {
            continue;
        }
        let sets: Vec<BTreeSet<Element>> = l.subgroups().iter().map(element_set).collect();
        let whole = l.whole();
        let gens: Vec<_> = (0..l.len()).filter(|_| rng.gen_bool(0.3)).map(|h| (h, whole)).collect();
        let t = close(&l, &gens).unwrap();
        let part = inseparability_classes(&t);
        let sub_o: Vec<usize> = t.sub_o().ones().collect();
        // J ~ K iff |(G/L)^J| = |(G/L)^K| for every L -> G
        let counts: Vec<Vec<usize>> = (0..l.len())
            .map(|j| sub_o.iter().map(|&m| fixed_coset_count(&g, &sets[m], &sets[j])).collect())
            .collect();
        for j in 0..l.len() {
            for k in 0..l.len() {
                assert_eq!(
                    part.class_of(j) == part.class_of(k),
                    counts[j] == counts[k],
                    "{g}: {} vs {}",
                    l.label(j),
                    l.label(k)
                );
            }
        }
    }
}
