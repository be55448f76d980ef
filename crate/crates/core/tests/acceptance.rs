//! Acceptance runner: one line per criterion with its runtime target.
//! Exits non-zero if any criterion fails or overruns.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use gldim_core::crosscheck::{build_corpus, random_poset, run_check, CorpusConfig};
use gldim_core::groups::{subgroup_lattice, AbelianGroup};
use gldim_core::izext::{gldim_incidence, gldim_subgroup_lattice, ExtComputer};
use gldim_core::mackeydim::{gldim_mackey, gldim_mackey_via_ext, scan_frattini, scan_monotonicity};
use gldim_core::oracle::{ext_table, gldim_oracle};
use gldim_core::posets::parse_poset;
use gldim_core::transfer::{close, enumerate_disk_like, parse_generator_file};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden() -> Outcome {
    let cases = [("C2", 1), ("C4", 1), ("C8", 1), ("C9", 1), ("C32", 1), ("C6", 2), ("C30", 3), ("C2xC2", 2)];
    for (spec, want) in cases {
        let l = lattice(spec);
        let a = gldim_subgroup_lattice(&l).map_err(|e| e.to_string())?;
        let b = gldim_oracle(l.poset()).map_err(|e| e.to_string())?;
        ensure(a == want && b == want, || format!("{spec}: izext {a}, oracle {b}, want {want}"))?;
    }
    Ok(format!("{} groups, both routes", cases.len()))
}

fn c6_entries() -> Outcome {
    let l = lattice("C6");
    let want: BTreeMap<_, _> = [((1, 0, 1), 1), ((2, 0, 1), 1), ((3, 1, 1), 1), ((3, 2, 1), 1), ((3, 0, 2), 1)]
        .into_iter()
        .collect();
    let ours: BTreeMap<_, _> = ExtComputer::new(l.poset()).table().off_diagonal().collect();
    let oracle: BTreeMap<_, _> = ext_table(l.poset()).map_err(|e| e.to_string())?.off_diagonal().collect();
    ensure(ours == want, || format!("izext {ours:?}"))?;
    ensure(oracle == want, || format!("oracle {oracle:?}"))?;
    Ok("five entries in degrees 1,1,1,1,2".into())
}

fn factor_theorem() -> Outcome {
    let groups = AbelianGroup::all_up_to_order(100);
    for g in &groups {
        let l = subgroup_lattice(g).map_err(|e| e.to_string())?;
        let d = gldim_subgroup_lattice(&l).map_err(|e| e.to_string())?;
        ensure(d == g.prime_power_factor_count(), || format!("{g}: gldim {d}"))?;
    }
    Ok(format!("{} groups", groups.len()))
}

fn worked_examples() -> Outcome {
    let cases = [
        ("C12", "e_to_g_c12.gen", 2),
        ("2^3*3^2", "o_c72.gen", 2),
        ("2^3*3^2", "oprime_c72.gen", 2),
        ("2^3*3^2", "oprime2.gen", 1),
    ];
    for (spec, file, want) in cases {
        let l = lattice(spec);
        let gens = parse_generator_file(&l, &fixture(file)).map_err(|e| e.to_string())?;
        let t = close(&l, &gens).map_err(|e| e.to_string())?;
        let a = gldim_mackey(&t).map_err(|e| e.to_string())?.gldim;
        let b = gldim_mackey_via_ext(&t).map_err(|e| e.to_string())?;
        ensure(a == want && b == want, || format!("{file}: classes {a}, Ext {b}, want {want}"))?;
    }
    Ok("2, 2, 2, 1 via both routes".into())
}

fn dim_zero() -> Outcome {
    let mut systems = 0;
    let mut groups = 0;
    for g in AbelianGroup::all_up_to_order(100) {
        let l = Arc::new(subgroup_lattice(&g).map_err(|e| e.to_string())?);
        if l.len() > 12 {
            continue;
        }
        groups += 1;
        let (all, _) = enumerate_disk_like(&l, 12).map_err(|e| e.to_string())?;
        for t in &all {
            let r = gldim_mackey(t).map_err(|e| e.to_string())?;
            let v = gldim_mackey_via_ext(t).map_err(|e| e.to_string())?;
            ensure(r.gldim == v, || format!("{g} {t:?}: routes {} vs {v}", r.gldim))?;
            ensure((r.gldim == 0) == t.is_complete(), || format!("{g} {t:?}: gldim {}", r.gldim))?;
            if t.is_trivial() {
                ensure(r.gldim == g.prime_power_factor_count(), || format!("{g}: trivial system {}", r.gldim))?;
            }
            systems += 1;
        }
    }
    Ok(format!("{systems} systems over {groups} groups of order <= 100"))
}

fn monotonicity() -> Outcome {
    let mut pairs = 0;
    for spec in ["C4", "C9", "C6", "C12", "C2xC2"] {
        let r = scan_monotonicity(&lattice(spec), 16).map_err(|e| e.to_string())?;
        ensure(r.violations.is_empty(), || format!("{spec}: {:?}", r.violations))?;
        pairs += r.pairs_checked;
    }
    Ok(format!("{pairs} inclusion pairs, no violations"))
}

fn frattini() -> Outcome {
    let mut memo = HashMap::new();
    let mut pairs = 0;
    let groups = AbelianGroup::all_up_to_order(200);
    for g in &groups {
        let l = subgroup_lattice(g).map_err(|e| e.to_string())?;
        let r = scan_frattini(&l, &mut memo).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("{g}: {:?} witness {:?}", r.nonvanishing, r.witness))?;
        pairs += r.pairs_checked;
    }
    Ok(format!("{} groups, {pairs} eligible pairs", groups.len()))
}

fn f5() -> Outcome {
    for (file, n) in [("f5_subgroups.poset", 14), ("f5_conjugacy.poset", 6)] {
        let p = parse_poset(&fixture(file)).map_err(|e| e.to_string())?;
        ensure(p.len() == n, || format!("{file}: {} elements", p.len()))?;
        let a = gldim_incidence(&p).map_err(|e| e.to_string())?;
        let b = gldim_oracle(&p).map_err(|e| e.to_string())?;
        ensure(a == 2 && b == 2, || format!("{file}: izext {a}, oracle {b}"))?;
    }
    Ok("both posets, both routes".into())
}

fn oracle_equivalence() -> Outcome {
    let corpus = build_corpus(&CorpusConfig::default());
    let r = run_check(&corpus, 1, false).map_err(|e| e.to_string())?;
    ensure(r.diffs.is_empty(), || format!("{} diffs, first {:?}", r.diffs.len(), r.diffs[0]))?;
    Ok(format!("{} posets, {} table cells", r.items, r.cells))
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut cases = 0;
    for spec in ["C4", "C6", "C8", "C2xC2", "C12", "C9"] {
        let l = lattice(spec);
        check_closure_is_intersection(&l)?;
        let all = all_transfer_systems(&l);
        for _ in 0..50 {
            let sup = &all[rng.gen_range(0..all.len())];
            check_closure(&mut rng, sup)?;
            cases += 1;
        }
    }
    for _ in 0..300 {
        let n = rng.gen_range(1..=8);
        let d = rng.gen_range(0.1..0.9);
        let p = random_poset(&mut rng, n, d);
        check_height_bound(&p)?;
        check_euler(&p)?;
        check_round_trip(&p)?;
        cases += 1;
    }
    let small = AbelianGroup::all_up_to_order(30);
    for a in &small {
        for b in &small {
            if a.order() < b.order() && num_integer::gcd(a.order(), b.order()) == 1 && a.order() * b.order() <= 600 {
                check_coprime_additivity(a, b)?;
                cases += 1;
            }
        }
    }
    let groups: Vec<_> = AbelianGroup::all_up_to_order(100).into_iter().filter(|g| g.order() > 1).collect();
    for _ in 0..300 {
        let g = &groups[rng.gen_range(0..groups.len())];
        let l = Arc::new(subgroup_lattice(g).map_err(|e| e.to_string())?);
        if l.len() > 64 {
            continue;
        }
        check_mackey(&random_disk_like(&mut rng, &l))?;
        cases += 1;
    }
    Ok(format!("{cases} cases"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("golden global dimensions", golden, 5),
        ("C6 Ext entries", c6_entries, 1),
        ("prime-power factor theorem, order <= 100", factor_theorem, 60),
        ("worked transfer-system examples", worked_examples, 30),
        ("zero exactly at the complete system", dim_zero, 120),
        ("monotonicity", monotonicity, 300),
        ("Frattini suite, order <= 200", frattini, 300),
        ("F5 posets", f5, 5),
        ("oracle equivalence", oracle_equivalence, 300),
        ("property suites", properties, 120),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (name, f, limit) in criteria {
        if !filter.is_empty() && !filter.iter().any(|s| name.contains(s.as_str())) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let slow = took > Duration::from_secs(limit);
        let (tag, detail) = match (&out, slow) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {limit}s target")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("{tag}  {name}: {detail} [{:.2}s / {limit}s]", took.as_secs_f64());
    }
    println!("{} of {ran} criteria passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
