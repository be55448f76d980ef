//! Checks shared by the property tests and the acceptance runner. Each
//! returns a description of the first failure.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use gldim_core::groups::{subgroup_lattice, AbelianGroup, SubgroupLattice};
use gldim_core::izext::{gldim_incidence, gldim_subgroup_lattice, Engine, ExtComputer};
use gldim_core::mackeydim::{class_dim_all_pairs, class_dim_minimal, gldim_mackey, gldim_mackey_via_ext};
use gldim_core::posets::{is_isomorphic, order_complex, parse_poset, to_text, FinitePoset};
use gldim_core::transfer::{close, inseparability_classes, validate, TransferSystem};

pub type Check = Result<(), String>;

pub fn lattice(spec: &str) -> Arc<SubgroupLattice> {
    let g = gldim_core::groups::parse_group(spec).unwrap();
    Arc::new(subgroup_lattice(&g).unwrap())
}

pub fn fixture(name: &str) -> String {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/");
    std::fs::read_to_string(format!("{path}{name}")).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Strict inclusions `K < H`.
pub fn strict_pairs(l: &SubgroupLattice) -> Vec<(usize, usize)> {
    let p = l.poset();
    (0..l.len())
        .flat_map(|k| (0..l.len()).map(move |h| (k, h)))
        .filter(|&(k, h)| p.lt(k, h))
        .collect()
}

/// A disk-like system generated by a random set of arrows into `G`.
pub fn random_disk_like<R: Rng>(rng: &mut R, l: &Arc<SubgroupLattice>) -> TransferSystem {
    let g = l.whole();
    let gens: Vec<_> = (0..l.len()).filter(|_| rng.gen_bool(0.3)).map(|h| (h, g)).collect();
    close(l, &gens).unwrap()
}

/// Closure is a validated system, idempotent, monotone, and contained in
/// `sup`, a transfer system chosen to contain the generators.
pub fn check_closure<R: Rng>(rng: &mut R, sup: &TransferSystem) -> Check {
    let l = sup.lattice();
    let inside: Vec<_> = sup.arrows().into_iter().filter(|(k, h)| k != h).collect();
    let k = rng.gen_range(0..=inside.len().min(3));
    let gens: Vec<_> = inside.choose_multiple(rng, k).copied().collect();
    let t = close(l, &gens).map_err(|e| e.to_string())?;
    validate(&t).map_err(|v| format!("closure of {gens:?} invalid: {v:?}"))?;
    if gens.iter().any(|&(a, b)| !t.has(a, b)) {
        return Err("closure drops a generator".into());
    }
    if !t.is_subsystem_of(sup) {
        return Err(format!("closure of {gens:?} is not below {sup:?}"));
    }
    let again = close(l, &t.arrows()).map_err(|e| e.to_string())?;
    if again != t {
        return Err(format!("closure not idempotent on {gens:?}"));
    }
    let pairs = strict_pairs(l);
    let mut more = gens.clone();
    more.extend(pairs.choose_multiple(rng, 2).copied());
    let bigger = close(l, &more).map_err(|e| e.to_string())?;
    if !t.is_subsystem_of(&bigger) {
        return Err(format!("closure not monotone: {gens:?} vs {more:?}"));
    }
    Ok(())
}

/// Every transfer system on a small lattice, by brute force over subsets of
/// strict inclusions.
pub fn all_transfer_systems(l: &Arc<SubgroupLattice>) -> Vec<TransferSystem> {
    let pairs = strict_pairs(l);
    assert!(pairs.len() <= 16, "brute force is limited to tiny lattices");
    let refl: Vec<_> = (0..l.len()).map(|i| (i, i)).collect();
    (0u32..1 << pairs.len())
        .filter_map(|mask| {
            let mut rel = refl.clone();
            rel.extend((0..pairs.len()).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]));
            let t = TransferSystem::from_pairs(l, &rel);
            validate(&t).is_ok().then_some(t)
        })
        .collect()
}

/// `close(S)` equals the intersection of every transfer system containing
/// `S`, for all generator sets of size at most two.
pub fn check_closure_is_intersection(l: &Arc<SubgroupLattice>) -> Check {
    let all = all_transfer_systems(l);
    let pairs = strict_pairs(l);
    let mut gen_sets: Vec<Vec<(usize, usize)>> = vec![vec![]];
    for (i, &a) in pairs.iter().enumerate() {
        gen_sets.push(vec![a]);
        for &b in &pairs[i + 1..] {
            gen_sets.push(vec![a, b]);
        }
    }
    for gens in gen_sets {
        let t = close(l, &gens).map_err(|e| e.to_string())?;
        let n = l.len();
        for k in 0..n {
            for h in 0..n {
                let in_all = all
                    .iter()
                    .filter(|s| gens.iter().all(|&(a, b)| s.has(a, b)))
                    .all(|s| s.has(k, h));
                if in_all != t.has(k, h) {
                    return Err(format!("{}: closure of {gens:?} disagrees at ({k},{h})", l.group()));
                }
            }
        }
    }
    Ok(())
}

pub fn check_height_bound(p: &FinitePoset) -> Check {
    if p.is_empty() {
        return Ok(());
    }
    let d = gldim_incidence(p).map_err(|e| e.to_string())?;
    if d > p.height() {
        return Err(format!("gldim {d} above height {}", p.height()));
    }
    Ok(())
}

fn product_group(a: &AbelianGroup, b: &AbelianGroup) -> AbelianGroup {
    let mut f = a.factors().to_vec();
    f.extend_from_slice(b.factors());
    AbelianGroup::new(f).unwrap()
}

/// For coprime `A`, `B`: `Sub(A x B)` is `Sub A x Sub B` and global
/// dimensions add. Products over 64 elements are skipped.
pub fn check_coprime_additivity(a: &AbelianGroup, b: &AbelianGroup) -> Check {
    let la = subgroup_lattice(a).map_err(|e| e.to_string())?;
    let lb = subgroup_lattice(b).map_err(|e| e.to_string())?;
    let lab = subgroup_lattice(&product_group(a, b)).map_err(|e| e.to_string())?;
    if la.len() * lb.len() > 64 {
        return Ok(());
    }
    let prod = la.poset().product(lb.poset());
    if !is_isomorphic(lab.poset(), &prod) {
        return Err(format!("Sub({a} x {b}) is not the product lattice"));
    }
    let (da, db) = (gldim_subgroup_lattice(&la).unwrap(), gldim_subgroup_lattice(&lb).unwrap());
    // the product of two lattices is a lattice, so the complement engine applies
    let dp = ExtComputer::with_engine(&prod, Engine::Complement).gldim().unwrap();
    let dg = gldim_subgroup_lattice(&lab).unwrap();
    if dp != da + db || dg != da + db {
        return Err(format!("{a} x {b}: {da} + {db} vs product {dp}, group {dg}"));
    }
    Ok(())
}

/// Möbius function `mu(y, x)` by its defining recursion.
pub fn mobius(p: &FinitePoset, y: usize) -> HashMap<usize, i64> {
    let mut mu = HashMap::new();
    for &x in p.linear_extension() {
        if !p.leq(y, x) {
            continue;
        }
        let v = if x == y {
            1
        } else {
            -p.down_set(x)
                .ones()
                .filter(|&z| z != x && p.leq(y, z))
                .map(|z| mu[&z])
                .sum::<i64>()
        };
        mu.insert(x, v);
    }
    mu
}

/// On every interval: the reduced Euler characteristic of the computed
/// cohomology equals the alternating simplex count of the order complex
/// minus one, and the Möbius value.
pub fn check_euler(p: &FinitePoset) -> Check {
    let mut c = ExtComputer::new(p);
    for y in 0..p.len() {
        let mu = mobius(p, y);
        for x in 0..p.len() {
            if !p.lt(y, x) {
                continue;
            }
            let h = c.interval(x, y);
            let chi = h.euler_characteristic();
            let oc = order_complex(&p.open_interval(x, y).unwrap());
            let counts: i64 = if oc.is_empty() {
                0
            } else {
                (0..=oc.dimension() as usize)
                    .map(|d| if d % 2 == 0 { oc.count(d) as i64 } else { -(oc.count(d) as i64) })
                    .sum()
            };
            if chi != counts - 1 || chi != mu[&x] {
                return Err(format!("I({x},{y}): chi {chi}, simplices {}, mobius {}", counts - 1, mu[&x]));
            }
        }
    }
    Ok(())
}

/// Both class-dimension formulations, the height bound, and the two
/// global-dimension routes.
pub fn check_mackey(t: &TransferSystem) -> Check {
    let part = inseparability_classes(t);
    for &h in part.representatives() {
        let a = class_dim_all_pairs(&part, h).map_err(|e| e.to_string())?;
        let b = class_dim_minimal(&part, h).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("class of {}: all pairs {a}, minimal {b}", t.lattice().label(h)));
        }
    }
    let r = gldim_mackey(t).map_err(|e| e.to_string())?;
    if r.gldim > r.height_bound {
        return Err(format!("gldim {} above height bound {}", r.gldim, r.height_bound));
    }
    let v = gldim_mackey_via_ext(t).map_err(|e| e.to_string())?;
    if v != r.gldim {
        return Err(format!("{:?}: classes {} vs Ext {v}", t, r.gldim));
    }
    Ok(())
}

pub fn check_round_trip(p: &FinitePoset) -> Check {
    let text = to_text(p);
    let q = parse_poset(&text).map_err(|e| e.to_string())?;
    if q.covers() != p.covers() || q.labels() != p.labels() || to_text(&q) != text {
        return Err(format!("round trip changed the poset:\n{text}"));
    }
    Ok(())
}
