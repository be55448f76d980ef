use super::FinitePoset;

/// Simplicial complex of strict chains, grouped by dimension. Each simplex is
/// a sorted index tuple and each dimension's list is sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderComplex {
    simplices: Vec<Vec<Vec<u32>>>,
}

impl OrderComplex {
    pub fn from_simplices(simplices: Vec<Vec<Vec<u32>>>) -> Self {
        let mut simplices = simplices;
        while simplices.last().is_some_and(Vec::is_empty) {
            simplices.pop();
        }
        for (d, list) in simplices.iter_mut().enumerate() {
            for s in list.iter_mut() {
                assert_eq!(s.len(), d + 1, "simplex in wrong dimension");
                s.sort_unstable();
            }
            list.sort();
            list.dedup();
        }
        OrderComplex { simplices }
    }

    pub fn simplices_by_dim(&self) -> &[Vec<Vec<u32>>] {
        &self.simplices
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// -1 for the empty complex.
    pub fn dimension(&self) -> i64 {
        self.simplices.len() as i64 - 1
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices.get(d).map_or(0, Vec::len)
    }

    /// Every face of every simplex is present.
    pub fn is_face_closed(&self) -> bool {
        for d in 1..self.simplices.len() {
            let lower = &self.simplices[d - 1];
            for s in &self.simplices[d] {
                for i in 0..s.len() {
                    let f: Vec<u32> = s
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, &v)| v)
                        .collect();
                    if lower.binary_search(&f).is_err() {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// All strict chains of `p`.
pub fn order_complex(p: &FinitePoset) -> OrderComplex {
    let mut simplices: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut chain: Vec<u32> = Vec::new();
    fn extend(p: &FinitePoset, chain: &mut Vec<u32>, out: &mut Vec<Vec<Vec<u32>>>) {
        let d = chain.len() - 1;
        if out.len() <= d {
            out.push(Vec::new());
        }
        let mut s = chain.clone();
        s.sort_unstable();
        out[d].push(s);
        let last = *chain.last().unwrap() as usize;
        for z in p.up_set(last).ones() {
            if z != last {
                chain.push(z as u32);
                extend(p, chain, out);
                chain.pop();
            }
        }
    }
    for v in 0..p.len() {
        chain.push(v as u32);
        extend(p, &mut chain, &mut simplices);
        chain.pop();
    }
    for list in simplices.iter_mut() {
        list.sort();
    }
    OrderComplex { simplices }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_is_full_simplex() {
        let c = order_complex(&FinitePoset::chain(2));
        assert_eq!(c.count(0), 3);
        assert_eq!(c.simplices_by_dim()[1], vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(c.simplices_by_dim()[2], vec![vec![0, 1, 2]]);
        assert!(c.is_face_closed());
    }

    #[test]
    fn small_cases() {
        let c = order_complex(&FinitePoset::discrete(2));
        assert_eq!(c.count(0), 2);
        assert_eq!(c.dimension(), 0);
        assert_eq!(order_complex(&FinitePoset::discrete(1)).count(0), 1);
        assert!(order_complex(&FinitePoset::discrete(0)).is_empty());
    }
}
