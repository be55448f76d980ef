mod fail;

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use gldim_core::crosscheck::{build_corpus, run_check, CorpusConfig};
use gldim_core::groups::{parse_group, subgroup_lattice_with, Budget, SubgroupLattice};
use gldim_core::izext::{Engine, ExtComputer, ExtTable};
use gldim_core::mackeydim::{gldim_mackey_checked, scan_conjectures, scan_frattini, scan_monotonicity};
use gldim_core::oracle::ext_table;
use gldim_core::posets::{parse_poset, to_dot, to_text, FinitePoset};
use gldim_core::transfer::{close, parse_generator_file};

use fail::Failure;

#[derive(Parser)]
#[command(name = "gldim", version, about = "Global dimensions of incidence algebras and incomplete Mackey functors")]
struct Cli {
    /// Worker threads for commands that fan out (results do not depend on it).
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    threads: u64,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, short, global = true, value_enum)]
    format: Option<Format>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BudgetArgs {
    /// Largest group order accepted for subgroup enumeration.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_order: Option<u64>,
    /// Largest number of subgroups enumerated.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_subgroups: Option<u64>,
    /// Largest subgroup lattice on which all disk-like systems are enumerated.
    #[arg(long, global = true, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    max_scan_subgroups: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Budget {
        let d = Budget::default();
        Budget {
            max_order: self.max_order.unwrap_or(d.max_order),
            max_subgroups: self.max_subgroups.map_or(d.max_subgroups, |m| m as usize),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Tsv,
    Dot,
    /// Reloadable poset file.
    Poset,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Auto,
    Direct,
    Complement,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanKind {
    Monotonicity,
    Frattini,
    Conjectures,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Abelian group spec, e.g. `C12`, `C2xC6`, `2^2*3`.
    #[arg(long)]
    group: Option<String>,
    /// Poset file with `elements:` and `cover:` lines.
    #[arg(long)]
    poset: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List the subgroups of an abelian group with their Hasse diagram.
    Lattice { group: String },
    /// Global dimension of the incidence algebra of a poset or subgroup lattice.
    GldimIa {
        #[command(flatten)]
        source: Source,
        /// Also print every nonzero Ext dimension.
        #[arg(long)]
        table: bool,
        #[arg(long, value_enum, default_value_t = EngineArg::Auto)]
        engine: EngineArg,
        /// Recompute the full Ext table from minimal resolutions and compare.
        #[arg(long)]
        check: bool,
    },
    /// Global dimension of rational Mackey functors for a disk-like transfer system.
    GldimMackey {
        #[arg(long)]
        group: String,
        /// Generator file with `gen: K -> G` lines.
        #[arg(long)]
        gens: PathBuf,
    },
    /// Property scans over one group.
    Scan {
        #[arg(long)]
        group: String,
        #[arg(value_enum)]
        kind: ScanKind,
        /// Extra lattices to tabulate in the conjectures scan.
        #[arg(long = "poset")]
        posets: Vec<PathBuf>,
    },
    /// Compare interval cohomology against minimal resolutions on a corpus.
    OracleCheck {
        #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(1..))]
        max_elements: u64,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        /// Include subgroup lattices of abelian groups up to this order (0 for none).
        #[arg(long, default_value_t = 60)]
        lattices_up_to: u64,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        #[arg(long, default_value_t = 0.35)]
        density: f64,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

/// Rendered report plus an optional failure raised after rendering (the
/// report is still written, then the process exits non-zero).
struct Outcome {
    text: String,
    after: Option<Failure>,
}

impl From<String> for Outcome {
    fn from(text: String) -> Self {
        Outcome { text, after: None }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|out| {
        emit(cli.output.as_deref(), &out.text)?;
        out.after.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code() as u8)
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_lattice(spec: &str, budget: Budget) -> Result<Arc<SubgroupLattice>, Failure> {
    let g = parse_group(spec)?;
    Ok(Arc::new(subgroup_lattice_with(&g, budget)?))
}

fn load_poset(path: &Path) -> Result<FinitePoset, Failure> {
    Ok(parse_poset(&read(path)?)?)
}

fn to_json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn pick(format: Option<Format>, default: Format, allowed: &[Format], command: &str) -> Result<Format, Failure> {
    let f = format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let names: Vec<_> = allowed
            .iter()
            .map(|a| a.to_possible_value().expect("no skipped variants").get_name().to_string())
            .collect();
        Err(Failure::Usage(format!("{command} supports --format {}", names.join("|"))))
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let budget = cli.budget.budget();
    let scan_cap = cli.budget.max_scan_subgroups as usize;
    let threads = cli.threads as usize;
    match &cli.command {
        Command::Lattice { group } => {
            let f = pick(cli.format, Format::Text, &[Format::Text, Format::Json, Format::Tsv, Format::Dot, Format::Poset], "lattice")?;
            let l = load_lattice(group, budget)?;
            Ok(render_lattice(&l, f).into())
        }
        Command::GldimIa { source, table, engine, check } => {
            let f = pick(cli.format, Format::Text, &[Format::Text, Format::Json, Format::Tsv], "gldim-ia")?;
            gldim_ia(source, *table, *engine, *check, f, budget)
        }
        Command::GldimMackey { group, gens } => {
            let f = pick(cli.format, Format::Json, &[Format::Json, Format::Text], "gldim-mackey")?;
            let l = load_lattice(group, budget)?;
            let pairs = parse_generator_file(&l, &read(gens)?)?;
            let t = close(&l, &pairs)?;
            let r = gldim_mackey_checked(&t)?;
            Ok(match f {
                Format::Json => to_json(&r),
                _ => {
                    let mut s = format!("group {}\n", r.group);
                    for a in &r.generators {
                        let _ = writeln!(s, "gen {} -> {}", a.from, a.to);
                    }
                    s.push_str("class\tsize\tminimal\tdim\theight\n");
                    for c in &r.per_class {
                        let _ = writeln!(s, "{}\t{}\t{}\t{}\t{}", c.representative, c.size, c.minimal.join(","), c.dim, c.height);
                    }
                    let _ = writeln!(s, "gldim {}\nheight_bound {}", r.gldim, r.height_bound);
                    s
                }
            }
            .into())
        }
        Command::Scan { group, kind, posets } => {
            let l = load_lattice(group, budget)?;
            scan(&l, *kind, posets, cli.format, scan_cap)
        }
        Command::OracleCheck {
            max_elements,
            samples,
            lattices_up_to,
            seed,
            density,
            inject_fault,
        } => {
            let f = pick(cli.format, Format::Text, &[Format::Text, Format::Json], "oracle-check")?;
            if !(0.0..=1.0).contains(density) {
                return Err(Failure::Usage("--density must lie in [0, 1]".into()));
            }
            if *lattices_up_to > budget.max_order {
                return Err(Failure::Domain(format!(
                    "--lattices-up-to {lattices_up_to} exceeds the order budget {}",
                    budget.max_order
                )));
            }
            let cfg = CorpusConfig {
                max_elements: *max_elements as usize,
                samples: *samples,
                max_order: *lattices_up_to,
                seed: *seed,
                density: *density,
            };
            let corpus = build_corpus(&cfg);
            let report = run_check(&corpus, threads, *inject_fault).map_err(|e| match e {
                gldim_core::crosscheck::CheckError::Iz { source, .. } => Failure::from(source),
                gldim_core::crosscheck::CheckError::Oracle { source, .. } => Failure::from(source),
            })?;
            let text = match f {
                Format::Json => to_json(&report),
                _ => {
                    let mut s = String::new();
                    for d in &report.diffs {
                        let _ = writeln!(
                            s,
                            "diff {} Ext^{}(S_{}, S_{}): izext {} oracle {}",
                            d.item, d.n, d.x, d.y, d.izext, d.oracle
                        );
                    }
                    let _ = writeln!(s, "items {}\ncells {}\ndiffs {}", report.items, report.cells, report.diffs.len());
                    s
                }
            };
            let after = (!report.diffs.is_empty())
                .then(|| Failure::Discrepancy(format!("{} table cells disagree", report.diffs.len())));
            Ok(Outcome { text, after })
        }
    }
}

fn render_lattice(l: &SubgroupLattice, f: Format) -> String {
    let p = l.poset();
    let rows: Vec<_> = (0..l.len())
        .map(|i| {
            let h = l.subgroup(i);
            (i, h.order(), l.label(i).to_string(), p.upper_covers(i).to_vec())
        })
        .collect();
    match f {
        Format::Json => to_json(&json!({
            "schema": 1,
            "group": l.group().to_string(),
            "subgroups": rows.iter().map(|(i, o, lab, up)| json!({
                "index": i, "order": o, "label": lab, "covered_by": up,
            })).collect::<Vec<_>>(),
            "covers": p.covers(),
        })),
        Format::Tsv => {
            let mut s = String::from("index\torder\tlabel\tcovered_by\n");
            for (i, o, lab, up) in &rows {
                let up: Vec<_> = up.iter().map(usize::to_string).collect();
                let _ = writeln!(s, "{i}\t{o}\t{lab}\t{}", up.join(","));
            }
            s
        }
        Format::Dot => to_dot(p, "subgroups"),
        Format::Poset => to_text(p),
        Format::Text => {
            let mut s = format!("# {} subgroups of {}\n", l.len(), l.group());
            for (i, o, lab, _) in &rows {
                let _ = writeln!(s, "{i:>4}  {o:>8}  {lab}");
            }
            s.push('\n');
            s.push_str(&to_dot(p, "subgroups"));
            s
        }
    }
}

fn gldim_ia(
    source: &Source,
    table: bool,
    engine: EngineArg,
    check: bool,
    f: Format,
    budget: Budget,
) -> Result<Outcome, Failure> {
    let engine = match engine {
        EngineArg::Auto => Engine::Auto,
        EngineArg::Direct => Engine::Direct,
        EngineArg::Complement => Engine::Complement,
    };
    let lattice;
    let loaded;
    let (name, mut c) = match (&source.group, &source.poset) {
        (Some(g), _) => {
            lattice = load_lattice(g, budget)?;
            let c = match engine {
                Engine::Auto => ExtComputer::for_subgroup_lattice(&lattice),
                e => ExtComputer::with_engine(lattice.poset(), e),
            };
            (format!("Sub({})", lattice.group()), c)
        }
        (None, Some(path)) => {
            loaded = load_poset(path)?;
            (path.display().to_string(), ExtComputer::with_engine(&loaded, engine))
        }
        (None, None) => unreachable!("clap requires a source"),
    };
    let (x, y, n) = c.gldim_witness()?;
    let full: Option<ExtTable> = (table || check).then(|| c.table());
    let p = c.poset();
    let mut after = None;
    if check {
        let oracle = ext_table(p)?;
        let diff = full.as_ref().expect("computed above").diff(&oracle);
        if !diff.is_empty() {
            after = Some(Failure::Discrepancy(format!("{} Ext table cells disagree with the oracle", diff.len())));
        }
    }
    let shown = if table { full.as_ref() } else { None };
    let text = match f {
        Format::Json => {
            let mut v = json!({
                "schema": 1,
                "source": name,
                "elements": p.len(),
                "gldim": n,
                "witness": {"x": p.label(x), "y": p.label(y), "n": n},
            });
            if let Some(t) = shown {
                v["table"] = serde_json::to_value(t.to_json_value()).expect("table serializes");
            }
            if check {
                v["checked"] = json!(after.is_none());
            }
            to_json(&v)
        }
        Format::Tsv => {
            let mut s = String::new();
            match shown {
                Some(t) => {
                    s.push_str("x\ty\tn\tdim\n");
                    for (&(x, y, n), d) in &t.entries {
                        let _ = writeln!(s, "{}\t{}\t{n}\t{d}", p.label(x), p.label(y));
                    }
                }
                None => {
                    let _ = writeln!(s, "source\tgldim\n{name}\t{n}");
                }
            }
            s
        }
        _ => {
            let mut s = format!("gldim {n}\nwitness Ext^{n}(S_{}, S_{})\n", p.label(x), p.label(y));
            if let Some(t) = shown {
                for (&(x, y, n), d) in &t.entries {
                    let _ = writeln!(s, "Ext^{n}(S_{}, S_{}) = Q^{d}", p.label(x), p.label(y));
                }
            }
            if check && after.is_none() {
                s.push_str("oracle agrees\n");
            }
            s
        }
    };
    Ok(Outcome { text, after })
}

fn scan(
    l: &Arc<SubgroupLattice>,
    kind: ScanKind,
    posets: &[PathBuf],
    format: Option<Format>,
    scan_cap: usize,
) -> Result<Outcome, Failure> {
    if kind != ScanKind::Conjectures && !posets.is_empty() {
        return Err(Failure::Usage("--poset only applies to the conjectures scan".into()));
    }
    match kind {
        ScanKind::Monotonicity => {
            let f = pick(format, Format::Text, &[Format::Text, Format::Json, Format::Dot], "scan monotonicity")?;
            let r = scan_monotonicity(l, scan_cap)?;
            let text = match f {
                Format::Json => to_json(&r),
                Format::Dot => r.dot(),
                _ => {
                    let mut s = String::from("system\tarrows\tgldim\tgenerators\n");
                    for row in &r.systems {
                        let gens: Vec<_> = row.generators.iter().map(|a| format!("{}->{}", a.from, a.to)).collect();
                        let _ = writeln!(s, "{}\t{}\t{}\t{}", row.label, row.arrows, row.gldim, gens.join(" "));
                    }
                    for v in &r.violations {
                        let _ = writeln!(
                            s,
                            "violation {} <= {} but gldim {} < {}",
                            v.smaller, v.larger, v.smaller_gldim, v.larger_gldim
                        );
                    }
                    let _ = writeln!(s, "pairs {}\nviolations {}", r.pairs_checked, r.violations.len());
                    s
                }
            };
            let after = (!r.violations.is_empty())
                .then(|| Failure::Discrepancy(format!("{} monotonicity violations", r.violations.len())));
            Ok(Outcome { text, after })
        }
        ScanKind::Frattini => {
            let f = pick(format, Format::Text, &[Format::Text, Format::Json], "scan frattini")?;
            let r = scan_frattini(l, &mut HashMap::new())?;
            let text = match f {
                Format::Json => to_json(&r),
                _ => {
                    let mut s = String::new();
                    for bad in &r.nonvanishing {
                        let _ = writeln!(s, "nonvanishing I({}, {}): {:?}", bad.h, bad.k, bad.cohomology);
                    }
                    let _ = writeln!(
                        s,
                        "pairs {}\ndirect {}\nnonvanishing {}\nwitness {} frattini {} degree {}\nwhole_group_degree {}\ngldim {}",
                        r.pairs_checked,
                        r.direct_checks,
                        r.nonvanishing.len(),
                        r.witness.label,
                        l.label(r.witness.frattini),
                        r.witness.degree,
                        r.whole_group_degree,
                        r.gldim
                    );
                    s
                }
            };
            let after = (!r.passed()).then(|| Failure::Discrepancy("Frattini scan failed".into()));
            Ok(Outcome { text, after })
        }
        ScanKind::Conjectures => {
            let f = pick(format, Format::Text, &[Format::Text, Format::Json], "scan conjectures")?;
            let extra = posets
                .iter()
                .map(|p| Ok((p.display().to_string(), load_poset(p)?)))
                .collect::<Result<Vec<_>, Failure>>()?;
            let r = scan_conjectures(l, scan_cap, &extra)?;
            Ok(match f {
                Format::Json => to_json(&r),
                _ => {
                    let mut s = String::new();
                    for row in &r.systems {
                        let _ = writeln!(s, "{}\tgldim {}", row.label, row.gldim);
                    }
                    let _ = writeln!(s, "zero_only_at_complete {}", r.zero_only_at_complete);
                    for t in &r.frattini {
                        let _ = writeln!(s, "{}: best {} gldim {} holds {}", t.name, t.best, t.gldim, t.holds);
                    }
                    s
                }
            }
            .into())
        }
    }
}
