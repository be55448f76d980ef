use super::FinitePoset;

type Signature = (usize, usize, usize, usize, usize, usize);

fn signatures(p: &FinitePoset) -> Vec<Signature> {
    let depth = p.depth();
    let coheight = p.dual().depth();
    (0..p.len())
        .map(|v| {
            (
                depth[v],
                coheight[v],
                p.up_set(v).count_ones(..),
                p.down_set(v).count_ones(..),
                p.upper_covers(v).len(),
                p.lower_covers(v).len(),
            )
        })
        .collect()
}

/// An order isomorphism `a -> b` as an index map, if one exists.
pub fn find_isomorphism(a: &FinitePoset, b: &FinitePoset) -> Option<Vec<usize>> {
    if a.len() != b.len() || a.covers().len() != b.covers().len() {
        return None;
    }
    let sa = signatures(a);
    let sb = signatures(b);
    let mut ka = sa.clone();
    let mut kb = sb.clone();
    ka.sort_unstable();
    kb.sort_unstable();
    if ka != kb {
        return None;
    }
    let order: Vec<usize> = a.linear_extension().to_vec();
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];

    fn go(
        k: usize,
        order: &[usize],
        a: &FinitePoset,
        b: &FinitePoset,
        sa: &[Signature],
        sb: &[Signature],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        for w in 0..b.len() {
            if used[w] || sa[v] != sb[w] {
                continue;
            }
            let consistent = order[..k].iter().all(|&u| {
                a.leq(u, v) == b.leq(map[u], w) && a.leq(v, u) == b.leq(w, map[u])
            });
            if !consistent {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if go(k + 1, order, a, b, sa, sb, map, used) {
                return true;
            }
            used[w] = false;
            map[v] = usize::MAX;
        }
        false
    }

    go(0, &order, a, b, &sa, &sb, &mut map, &mut used).then_some(map)
}

pub fn is_isomorphic(a: &FinitePoset, b: &FinitePoset) -> bool {
    find_isomorphism(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_vs_antichain() {
        assert!(!is_isomorphic(&FinitePoset::chain(2), &FinitePoset::discrete(3)));
        assert!(is_isomorphic(&FinitePoset::chain(2), &FinitePoset::chain(2)));
    }

    #[test]
    fn relabelled_diamond() {
        let a = FinitePoset::from_covers(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let b = FinitePoset::from_covers(4, &[(3, 0), (3, 1), (0, 2), (1, 2)]).unwrap();
        let m = find_isomorphism(&a, &b).unwrap();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(a.leq(x, y), b.leq(m[x], m[y]));
            }
        }
    }
}
