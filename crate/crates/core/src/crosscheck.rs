//! Full Ext tables from interval cohomology compared against tables read off
//! minimal resolutions, over a corpus of random posets and subgroup lattices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::groups::{subgroup_lattice, AbelianGroup};
use crate::izext::{ExtComputer, IzError};
use crate::oracle::{ext_table, OracleError};
use crate::posets::FinitePoset;

#[derive(Clone, Debug)]
pub struct CorpusConfig {
    /// Random posets have between 1 and this many elements.
    pub max_elements: usize,
    pub samples: usize,
    /// Subgroup lattices of every abelian group up to this order; 0 for none.
    pub max_order: u64,
    pub seed: u64,
    /// Probability of each `i < j` (in index order) before closing.
    pub density: f64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_elements: 7,
            samples: 500,
            max_order: 60,
            seed: 0x5eed,
            density: 0.35,
        }
    }
}

/// A random poset on `n` elements: each `i < j` kept with probability
/// `density`, then transitively closed. Labels are `v0, v1, ...`.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> FinitePoset {
    let mut rel = Vec::new();
    for j in 0..n {
        for i in 0..j {
            if rng.gen_bool(density) {
                rel.push((i, j));
            }
        }
    }
    FinitePoset::from_covers(n, &rel)
        .expect("index order is a linear extension")
        .with_labels((0..n).map(|i| format!("v{i}")).collect())
}

#[derive(Clone, Debug)]
pub struct CorpusItem {
    pub name: String,
    pub poset: FinitePoset,
}

/// Random posets first, then subgroup lattices in group order.
pub fn build_corpus(cfg: &CorpusConfig) -> Vec<CorpusItem> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for i in 0..cfg.samples {
        let n = rng.gen_range(1..=cfg.max_elements.max(1));
        out.push(CorpusItem {
            name: format!("random#{i}"),
            poset: random_poset(&mut rng, n, cfg.density),
        });
    }
    if cfg.max_order > 0 {
        for g in AbelianGroup::all_up_to_order(cfg.max_order) {
            let l = subgroup_lattice(&g).expect("small groups fit the default budget");
            out.push(CorpusItem {
                name: format!("Sub({g})"),
                poset: l.poset().clone(),
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellDiff {
    pub item: String,
    pub x: usize,
    pub y: usize,
    pub n: usize,
    pub izext: usize,
    pub oracle: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub schema: u32,
    pub items: usize,
    pub cells: usize,
    pub diffs: Vec<CellDiff>,
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error("{item}: {source}")]
    Iz { item: String, source: IzError },
    #[error("{item}: {source}")]
    Oracle { item: String, source: OracleError },
}

type ItemResult = Result<(usize, Vec<CellDiff>), CheckError>;

fn compare(item: &CorpusItem, fault: Option<(usize, usize)>) -> ItemResult {
    let mut c = ExtComputer::new(&item.poset);
    if let Some((x, y)) = fault {
        c.inject_fault(x, y);
    }
    let a = c.table();
    let b = ext_table(&item.poset).map_err(|source| CheckError::Oracle {
        item: item.name.clone(),
        source,
    })?;
    let diffs = a
        .diff(&b)
        .into_iter()
        .map(|((x, y, n), izext, oracle)| CellDiff {
            item: item.name.clone(),
            x,
            y,
            n,
            izext,
            oracle,
        })
        .collect();
    Ok((a.entries.len().max(b.entries.len()), diffs))
}

/// Compares every item, spread over `threads` workers. The report does not
/// depend on the thread count. `inject_fault` corrupts one cell of the first
/// item with at least two comparable elements.
pub fn run_check(corpus: &[CorpusItem], threads: usize, inject_fault: bool) -> Result<CheckReport, CheckError> {
    let fault_at = inject_fault
        .then(|| {
            corpus.iter().enumerate().find_map(|(i, it)| {
                let p = &it.poset;
                p.covers().first().map(|&(a, b)| (i, (b, a)))
            })
        })
        .flatten();
    let threads = threads.max(1);
    let mut results: Vec<Option<ItemResult>> = Vec::new();
    results.resize_with(corpus.len(), || None);
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                s.spawn(move || {
                    (t..corpus.len())
                        .step_by(threads)
                        .map(|i| {
                            let fault = fault_at.filter(|f| f.0 == i).map(|f| f.1);
                            (i, compare(&corpus[i], fault))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                results[i] = Some(r);
            }
        }
    });
    let mut cells = 0;
    let mut diffs = Vec::new();
    for r in results {
        let (c, d) = r.expect("every item visited")?;
        cells += c;
        diffs.extend(d);
    }
    Ok(CheckReport {
        schema: 1,
        items: corpus.len(),
        cells,
        diffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic() {
        let cfg = CorpusConfig {
            samples: 20,
            max_order: 8,
            ..Default::default()
        };
        let a = build_corpus(&cfg);
        let b = build_corpus(&cfg);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.poset.covers(), y.poset.covers());
        }
        assert!(a.iter().all(|it| !it.poset.is_empty()));
    }

    #[test]
    fn small_corpus_agrees_and_fault_shows() {
        let cfg = CorpusConfig {
            max_elements: 5,
            samples: 30,
            max_order: 12,
            ..Default::default()
        };
        let corpus = build_corpus(&cfg);
        let clean = run_check(&corpus, 1, false).unwrap();
        assert!(clean.diffs.is_empty(), "{:?}", clean.diffs);
        let threaded = run_check(&corpus, 3, false).unwrap();
        assert_eq!(threaded.cells, clean.cells);
        let bad = run_check(&corpus, 2, true).unwrap();
        assert_eq!(bad.diffs.len(), 1);
        assert_eq!(bad.diffs[0].n, 0);
    }
}
