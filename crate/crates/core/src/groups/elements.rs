//! Element-set subgroup engine: subgroups as explicit sets of coordinate
//! tuples. Independent of the lattice representation, for cross-checking on
//! small groups only.

use std::collections::{BTreeSet, HashSet};

use super::AbelianGroup;

/// Largest group order this engine accepts.
pub const MAX_ORDER: u64 = 2000;

pub type Element = Vec<u64>;
pub type ElementSet = BTreeSet<Element>;

fn add(g: &AbelianGroup, a: &[u64], b: &[u64]) -> Element {
    g.moduli()
        .iter()
        .zip(a.iter().zip(b))
        .map(|(n, (x, y))| (x + y) % n)
        .collect()
}

pub fn all_elements(g: &AbelianGroup) -> Vec<Element> {
    assert!(g.order() <= MAX_ORDER, "element engine is limited to small groups");
    let n = g.moduli();
    let mut out = vec![Vec::new()];
    for &m in &n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u64>| {
                (0..m).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Closure of the generators under addition.
pub fn closure(g: &AbelianGroup, gens: &[Element]) -> ElementSet {
    assert!(g.order() <= MAX_ORDER, "element engine is limited to small groups");
    let zero = vec![0u64; g.rank()];
    let mut set: ElementSet = BTreeSet::new();
    set.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for s in gens {
            let y = add(g, &x, s);
            if set.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    set
}

/// Every subgroup as an element set, found by repeatedly adjoining single
/// elements starting from the trivial subgroup.
pub fn all_subgroups(g: &AbelianGroup) -> Vec<ElementSet> {
    let elems = all_elements(g);
    let mut seen: HashSet<Vec<Element>> = HashSet::new();
    let trivial = closure(g, &[]);
    let mut queue = vec![trivial.clone()];
    seen.insert(trivial.iter().cloned().collect());
    let mut out = Vec::new();
    while let Some(h) = queue.pop() {
        // one representative per coset of h
        let mut covered = h.clone();
        for x in &elems {
            if covered.contains(x) {
                continue;
            }
            covered.extend(h.iter().map(|a| add(g, a, x)));
            // h + <x> as a sumset
            let cyc = closure(g, std::slice::from_ref(x));
            let bigger: ElementSet = h.iter().flat_map(|a| cyc.iter().map(move |b| add(g, a, b))).collect();
            let key: Vec<Element> = bigger.iter().cloned().collect();
            if seen.insert(key) {
                queue.push(bigger);
            }
        }
        out.push(h);
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// `#{gL : J <= L}` style count `|(G/L)^J|`: cosets `gL` fixed by every
/// `j` in `J`, i.e. with `j + g + L = g + L`.
pub fn fixed_coset_count(g: &AbelianGroup, l: &ElementSet, j: &ElementSet) -> usize {
    let elems = all_elements(g);
    let mut cosets: BTreeSet<Vec<Element>> = BTreeSet::new();
    for x in &elems {
        let coset: Vec<Element> = l.iter().map(|y| add(g, x, y)).collect::<BTreeSet<_>>().into_iter().collect();
        cosets.insert(coset);
    }
    cosets
        .iter()
        .filter(|c| {
            let set: BTreeSet<&Element> = c.iter().collect();
            j.iter().all(|jj| set.contains(&add(g, jj, &c[0])))
        })
        .count()
}
