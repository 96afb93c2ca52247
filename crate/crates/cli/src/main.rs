//! `extenso`: command-line access to exact linear-extension counts, bounds,
//! graph entropy, random orders and exhaustive extremal tables.
//!
//! Every subcommand writes one JSON document (or a CSV table with a header
//! row) to `--output` or stdout. Exit status: 0 on success, 2 for invalid
//! input or a failed precondition, 3 when a size cap is exceeded, 1 when a
//! numerical solver does not converge or output cannot be written.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use extenso::bounds::{bounds_report, construction_bounds_check, formula_report, Density};
use extenso::count::count_extensions;
use extenso::entropy::{attach_entropy, entropy_sandwich, stanley_volume_mc, DEFAULT_TOL};
use extenso::extremal::{extremal_table, ExtremalTable};
use extenso::random::{
    comp_concentration_experiment, dyadic_lower_bound, sample_interval_poset, sample_kdim_poset, IntervalFamily,
};
use extenso::{Error, Poset};

#[derive(Parser, Debug)]
#[command(name = "extenso", version, about = "Linear extensions of finite posets: exact counts, bounds, entropy, random orders")]
struct Cli {
    /// Worker threads for parallel sections; output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact number of linear extensions: {"e": "<decimal>"}.
    Count {
        /// Poset JSON: {"n": N, "relations": [[a, b], ...]}.
        #[arg(long)]
        input: PathBuf,
    },
    /// Every applicable bound for a poset (--input), or the density formulas
    /// at (--n, --delta).
    Bounds {
        #[arg(long, conflicts_with_all = ["n", "delta"])]
        input: Option<PathBuf>,
        #[arg(long, requires = "delta")]
        n: Option<usize>,
        /// Proportion of comparable pairs as "p/q".
        #[arg(long, requires = "n")]
        delta: Option<String>,
        /// With --n/--delta: exit 2 unless an exact extremal formula applies.
        #[arg(long, requires = "n")]
        require_exact: bool,
    },
    /// Bounds report with graph-entropy fields H_G, H_Gbar, kk_*, cardinal_*.
    Entropy {
        #[arg(long)]
        input: PathBuf,
        /// Certified optimality gap in bits.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Monte Carlo estimate of n! vol(C(G)): {estimate, stderr, hits, samples}.
    Volume {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Random interval order: {"intervals": [[a, b], ...], "poset": {...}}.
    RandomInterval {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Random k-dimensional order as poset JSON.
    RandomKdim {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Comparable-pair concentration over random interval orders; CSV rows
    /// are (trial, Z, A_n, dyadic_bound_log2).
    Concentration {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Dyadic antichain decomposition and the factorial-product lower bound
    /// for an interval family {"intervals": [[a, b], ...]}.
    DyadicBound {
        #[arg(long)]
        input: PathBuf,
    },
    /// Exhaustive extremal table; CSV columns n, m, f_plus, f_minus,
    /// f_plus_witness_id, f_minus_witness_id.
    Table {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m_min: Option<usize>,
        #[arg(long)]
        m_max: Option<usize>,
        /// Also write the witness posets, keyed by id, as JSON.
        #[arg(long)]
        witnesses: Option<PathBuf>,
    },
    /// Exhaustive checks of the balanced antichain and chain conjectures for
    /// every k in 2..=n (or one --k).
    Conjectures {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Witness families for (--n, --delta) against their comp thresholds and
    /// extension-count inequalities.
    Constructions {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: String,
    },
}

/// A failure with the flag it concerns and the exit status it maps to.
struct Failure {
    context: String,
    message: String,
    code: u8,
}

impl Failure {
    fn new(context: impl Into<String>, error: Error) -> Failure {
        let code = match error {
            Error::Capacity(_) => 3,
            Error::Convergence(_) => 1,
            _ => 2,
        };
        Failure { context: context.into(), message: error.to_string(), code }
    }

    fn io(context: impl Into<String>, error: std::io::Error) -> Failure {
        Failure { context: context.into(), message: error.to_string(), code: 1 }
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn with_flag<T>(flag: &str, value: impl std::fmt::Display, r: extenso::Result<T>) -> Run<T> {
    r.map_err(|e| Failure::new(format!("{flag} {value}"), e))
}

fn read_input(path: &Path) -> Run<String> {
    fs::read_to_string(path).map_err(|e| {
        let mut f = Failure::io(format!("--input {}", path.display()), e);
        f.code = 2;
        f
    })
}

fn read_poset(path: &Path) -> Run<Poset> {
    let text = read_input(path)?;
    with_flag("--input", path.display(), Poset::from_json_str(&text))
}

fn parse_delta(s: &str) -> Run<Density> {
    with_flag("--delta", s, s.parse())
}

fn json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("reports serialize");
    out.push(b'\n');
    out
}

fn csv_rows<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for row in rows {
        w.serialize(row).expect("rows serialize");
    }
    w.into_inner().expect("in-memory writer")
}

fn render<T: Serialize, R: Serialize>(format: Format, doc: &T, rows: impl FnOnce() -> Vec<R>) -> Vec<u8> {
    match format {
        Format::Json => json(doc),
        Format::Csv => csv_rows(rows()),
    }
}

#[derive(Serialize)]
struct CountOut {
    e: extenso::BigCount,
}

#[derive(Serialize)]
struct IntervalOut<'a> {
    intervals: Vec<[f64; 2]>,
    poset: &'a extenso::poset::PosetJson,
}

#[derive(Serialize)]
struct IntervalRow {
    j: usize,
    a: f64,
    b: f64,
}

#[derive(Serialize)]
struct RelationRow {
    a: usize,
    b: usize,
}

#[derive(Serialize)]
struct GroupRow {
    i: u64,
    j: u32,
    size: usize,
    members: String,
}

#[derive(Serialize)]
struct TableRow<'a> {
    n: usize,
    m: usize,
    f_plus: &'a extenso::BigCount,
    f_minus: &'a extenso::BigCount,
    f_plus_witness_id: u64,
    f_minus_witness_id: u64,
}

#[derive(Serialize)]
struct ConjectureRow<'a> {
    family: extenso::extremal::Family,
    n: usize,
    k: usize,
    threshold_comp: usize,
    reference_e: &'a extenso::BigCount,
    extremal_e: &'a extenso::BigCount,
    posets_checked: u64,
    verdict: extenso::extremal::Verdict,
    counterexample_id: Option<u64>,
}

#[derive(Serialize)]
struct ConstructionRow<'a> {
    family: &'a str,
    k_or_t: String,
    comp: u128,
    comp_relation: &'a str,
    comp_ok: bool,
    built_comp_matches: Option<bool>,
    log2_e: f64,
    inequalities_hold: bool,
    ok: bool,
}

#[derive(Serialize)]
struct TableOut<'a> {
    n: usize,
    total_posets: u64,
    records: Vec<&'a extenso::extremal::ExtremalRecord>,
}

#[derive(Serialize)]
struct WitnessBundle<'a> {
    n: usize,
    witnesses: &'a [extenso::extremal::Witness],
}

fn run(cli: &Cli) -> Run<Vec<u8>> {
    let format = cli.format;
    Ok(match &cli.command {
        Command::Count { input } => {
            let p = read_poset(input)?;
            let e = with_flag("--input", input.display(), count_extensions(&p))?;
            let out = CountOut { e };
            render(format, &out, || vec![&out])
        }
        Command::Bounds { input: Some(input), .. } => {
            let r = bounds_report(&read_poset(input)?);
            render(format, &r, || vec![&r])
        }
        Command::Bounds { input: None, n: Some(n), delta: Some(delta), require_exact } => {
            let d = parse_delta(delta)?;
            let r = with_flag("--n", n, formula_report(*n, d))?;
            if *require_exact {
                let guards: Vec<&str> = r
                    .skipped
                    .iter()
                    .filter(|s| s.starts_with("fplus_dense_exact") || s.starts_with("fminus_sparse_exact"))
                    .map(|s| s.split_once(": ").map_or(s.as_str(), |x| x.1))
                    .map(|s| s.strip_prefix("precondition failed: ").unwrap_or(s))
                    .collect();
                if guards.len() == 2 {
                    return Err(Failure::new(format!("--delta {delta}"), Error::Precondition(guards.join("; "))));
                }
            }
            render(format, &r, || vec![&r])
        }
        Command::Bounds { .. } => {
            return Err(Failure::new("bounds", Error::Parse("give --input, or both --n and --delta".into())))
        }
        Command::Entropy { input, tol } => {
            let p = read_poset(input)?;
            let mut r = bounds_report(&p);
            let s = with_flag("--tol", tol, entropy_sandwich(&p, *tol))?;
            attach_entropy(&mut r, &s);
            render(format, &r, || vec![&r])
        }
        Command::Volume { input, samples, seed } => {
            let p = read_poset(input)?;
            let v = with_flag("--samples", samples, stanley_volume_mc(&p, *samples, *seed))?;
            render(format, &v, || vec![&v])
        }
        Command::RandomInterval { n, seed } => {
            let (p, f) = with_flag("--n", n, sample_interval_poset(*n, *seed))?;
            let pj = p.to_json();
            let out = IntervalOut { intervals: f.intervals().iter().map(|&(a, b)| [a, b]).collect(), poset: &pj };
            render(format, &out, || {
                f.intervals().iter().enumerate().map(|(j, &(a, b))| IntervalRow { j, a, b }).collect()
            })
        }
        Command::RandomKdim { n, k, seed } => {
            let p = with_flag("--n", format!("{n} --k {k}"), sample_kdim_poset(*n, *k, *seed))?;
            let pj = p.to_json();
            render(format, &pj, || p.covers().into_iter().map(|(a, b)| RelationRow { a, b }).collect())
        }
        Command::Concentration { n, trials, seed } => {
            let s = with_flag("--trials", trials, comp_concentration_experiment(*n, *trials, *seed))?;
            render(format, &s, || s.rows.iter().collect())
        }
        Command::DyadicBound { input } => {
            let text = read_input(input)?;
            let f = with_flag("--input", input.display(), IntervalFamily::from_json_str(&text))?;
            let d = with_flag("--input", input.display(), dyadic_lower_bound(&f))?;
            render(format, &d, || {
                d.groups
                    .iter()
                    .map(|g| GroupRow {
                        i: g.i,
                        j: g.j,
                        size: g.members.len(),
                        members: g.members.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" "),
                    })
                    .collect()
            })
        }
        Command::Table { n, m_min, m_max, witnesses } => {
            let t = with_flag("--n", n, extremal_table(*n))?;
            let lo = m_min.unwrap_or(0);
            let hi = m_max.unwrap_or(usize::MAX);
            let records: Vec<_> = t.records.iter().filter(|r| r.m >= lo && r.m <= hi).collect();
            if let Some(path) = witnesses {
                write_file(path, &json(&WitnessBundle { n: t.n, witnesses: &t.witnesses }))?;
            }
            let out = TableOut { n: t.n, total_posets: t.total_posets, records: records.clone() };
            render(format, &out, || {
                records
                    .iter()
                    .map(|r| TableRow {
                        n: r.n,
                        m: r.m,
                        f_plus: &r.f_plus_at_least_m,
                        f_minus: &r.f_minus_at_most_m,
                        f_plus_witness_id: r.f_plus_witness_id,
                        f_minus_witness_id: r.f_minus_witness_id,
                    })
                    .collect()
            })
        }
        Command::Conjectures { n, k } => {
            let t: ExtremalTable = with_flag("--n", n, extremal_table(*n))?;
            let ks: Vec<usize> = match k {
                Some(k) => vec![*k],
                None => (2..=*n).collect(),
            };
            let mut reports = Vec::new();
            for &k in &ks {
                reports.push(with_flag("--k", k, t.check_antichain(k))?);
                reports.push(with_flag("--k", k, t.check_chain(k))?);
            }
            render(format, &reports, || {
                reports
                    .iter()
                    .map(|r| ConjectureRow {
                        family: r.family,
                        n: r.n,
                        k: r.k,
                        threshold_comp: r.threshold_comp,
                        reference_e: &r.reference_e,
                        extremal_e: &r.extremal_e,
                        posets_checked: r.posets_checked,
                        verdict: r.verdict,
                        counterexample_id: r.counterexample.as_ref().map(|w| w.id),
                    })
                    .collect()
            })
        }
        Command::Constructions { n, delta } => {
            let d = parse_delta(delta)?;
            let r = with_flag("--n", n, construction_bounds_check(*n, d))?;
            render(format, &r, || {
                r.checks
                    .iter()
                    .map(|c| {
                        let (family, args) = c.family.split_once('(').unwrap_or((&c.family, ""));
                        ConstructionRow {
                            family,
                            k_or_t: args.trim_end_matches(')').to_string(),
                            comp: c.comp,
                            comp_relation: &c.comp_relation,
                            comp_ok: c.comp_ok,
                            built_comp_matches: c.built_comp_matches,
                            log2_e: c.log2_e,
                            inequalities_hold: c.inequalities.iter().all(|i| i.holds),
                            ok: c.ok,
                        }
                    })
                    .collect()
            })
        }
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Run<()> {
    fs::write(path, bytes).map_err(|e| Failure::io(path.display().to_string(), e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs 0: need at least one worker thread");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global().expect("thread pool is configured once");
    }
    let result = run(&cli).and_then(|bytes| match &cli.output {
        Some(path) => write_file(path, &bytes),
        None => std::io::stdout().write_all(&bytes).map_err(|e| Failure::io("stdout", e)),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}: {}", f.context, f.message);
            ExitCode::from(f.code)
        }
    }
}
