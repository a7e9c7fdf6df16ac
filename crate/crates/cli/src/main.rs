use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dcell_core::broadcast::{fixed_cycle_experiment, simulate, Scheme, SimConfig};
use dcell_core::construct::{check_supported, counted_dcell_hp, ensure_within, PathDocument};
use dcell_core::fault::{ft_hc, ft_hp, FaultSet};
use dcell_core::oracle::{self, certify_base_cases, FaultMode, Sampling, SmallGraph, Status};
use dcell_core::partial::{check_copy_connectivity, materialize_partial, partial_hp, Listing, Prefix, ShapeA};
use dcell_core::topology::{build_graph, to_dot, to_edge_list, to_json};
use dcell_core::{verify_path, Dcell, DcellError, Result};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "dcell", version, about = "Hamiltonian paths and cycles in DCell networks")]
struct Cli {
    /// Refuse to build anything with more vertices than this.
    #[arg(long, global = true, default_value_t = 100_000)]
    max_vertices: u64,
    /// Worker threads for parallel steps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct NK {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Edgelist,
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Hc,
    Hcc,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the DCell graph.
    Gen {
        #[command(flatten)]
        nk: NK,
        #[arg(long, value_enum, default_value = "edgelist")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hamiltonian path between two vertices.
    Hp {
        #[command(flatten)]
        nk: NK,
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hamiltonian path avoiding faulty vertices and links.
    FtHp {
        #[command(flatten)]
        nk: NK,
        #[arg(long)]
        faults: PathBuf,
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Hamiltonian cycle avoiding faulty vertices and links.
    FtHc {
        #[command(flatten)]
        nk: NK,
        #[arg(long)]
        faults: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive search on small graphs.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Partial DCells.
    Partial {
        #[command(subcommand)]
        command: PartialCommand,
    },
    /// Broadcast simulation.
    Bcast {
        #[command(flatten)]
        nk: NK,
        #[arg(long, value_parser = parse_scheme, default_value = "ham")]
        scheme: Scheme,
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        source: u64,
        /// Also estimate how often the fixed cycle survives the faults.
        #[arg(long)]
        experiment: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the construction and count recursive calls.
    Bench {
        /// `n,k` rows to measure; repeatable.
        #[arg(long = "row", value_parser = parse_row)]
        rows: Vec<(usize, usize)>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Re-certify the base cases used by the construction.
    Certify {
        /// Defaults to the directory named by DCELL_CACHE_DIR.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive Hamiltonian path search.
    Hp {
        #[command(flatten)]
        nk: NK,
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: u64,
    },
    /// Check every (or a sample of) fault sets of a given size.
    FaultCheck {
        #[command(flatten)]
        nk: NK,
        #[arg(long)]
        f: usize,
        #[arg(long, value_enum, default_value = "hc")]
        mode: Mode,
        /// Check this many random sets instead of all of them.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum PartialCommand {
    /// Run the enumeration on an arbitrary shape.
    Next {
        /// Digit bounds, most significant first, e.g. `3,3,2`.
        #[arg(long, value_delimiter = ',', required = true)]
        shape: Vec<u64>,
        #[arg(long)]
        steps: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report the connectivity of the partial DCell with `d` units.
    Check {
        #[command(flatten)]
        nk: NK,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        c: u64,
    },
    /// Hamiltonian path in the partial DCell with `d` units.
    Hp {
        #[command(flatten)]
        nk: NK,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        u: u64,
        #[arg(long)]
        v: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_scheme(s: &str) -> std::result::Result<Scheme, String> {
    s.parse().map_err(|e: DcellError| e.to_string())
}

fn parse_row(s: &str) -> std::result::Result<(usize, usize), String> {
    let (n, k) = s.split_once(',').ok_or_else(|| format!("expected n,k, got {s:?}"))?;
    let n = n.trim().parse().map_err(|e| format!("{e}"))?;
    let k = k.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((n, k))
}

fn io_err(e: std::io::Error) -> DcellError {
    DcellError::Io(e.to_string())
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| DcellError::Parse(e.to_string()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(io_err),
        None => print_stdout(text),
    }
}

/// Writes to stdout; a closed pipe ends output quietly.
fn print_stdout(text: &str) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{text}").and_then(|_| stdout.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(io_err(e)),
        _ => Ok(()),
    }
}

fn dcell(nk: NK, cap: u64) -> Result<Dcell> {
    let d = Dcell::from_nk(nk.n, nk.k)?;
    ensure_within(&d, cap)?;
    Ok(d)
}

fn load_faults(d: &Dcell, path: &Path) -> Result<FaultSet> {
    let text = std::fs::read_to_string(path).map_err(io_err)?;
    FaultSet::from_json(d, &text)
}

fn check_certificate(check: dcell_core::PathCheck) -> Result<()> {
    match check.violation {
        None => Ok(()),
        Some(bad) => Err(DcellError::Invariant(format!("certificate rejected: {bad}"))),
    }
}

fn run(cli: Cli) -> Result<()> {
    let cap = cli.max_vertices;
    match cli.command {
        Command::Gen { nk, format, out } => {
            let d = dcell(nk, cap)?;
            let g = build_graph(&d, cap)?;
            let text = match format {
                Format::Edgelist => to_edge_list(&g),
                Format::Dot => to_dot(&d, &g)?,
                Format::Json => json(&to_json(&d, &g)?)?,
            };
            emit(text.trim_end(), out.as_deref())
        }
        Command::Hp { nk, u, v, out } => {
            let d = dcell(nk, cap)?;
            check_supported(&d)?;
            let (path, _) = counted_dcell_hp(&d, u, v)?;
            check_certificate(verify_path(&d, &path, u, v, true))?;
            emit(&json(&PathDocument::path(&d, path))?, out.as_deref())
        }
        Command::FtHp { nk, faults, u, v, out } => {
            let d = dcell(nk, cap)?;
            let f = load_faults(&d, &faults)?;
            let path = ft_hp(&d, &f, u, v)?;
            emit(&json(&PathDocument::path(&d, path))?, out.as_deref())
        }
        Command::FtHc { nk, faults, out } => {
            let d = dcell(nk, cap)?;
            let f = load_faults(&d, &faults)?;
            let cycle = ft_hc(&d, &f)?;
            emit(&json(&PathDocument::cycle(&d, cycle))?, out.as_deref())
        }
        Command::Oracle { command } => run_oracle(command),
        Command::Partial { command } => run_partial(command, cap),
        Command::Bcast { nk, scheme, p, trials, seed, source, experiment, out } => {
            dcell(nk, cap)?;
            let config = SimConfig { n: nk.n, k: nk.k, source, scheme, p, trials, seed };
            let result = simulate(&config)?;
            let text = if experiment {
                let report = fixed_cycle_experiment(&config)?;
                json(&serde_json::json!({ "simulation": result, "fixed_cycle": report }))?
            } else {
                json(&result)?
            };
            emit(&text, out.as_deref())
        }
        Command::Bench { rows, json: as_json } => run_bench(&rows, cap, as_json),
    }
}

fn run_oracle(command: OracleCommand) -> Result<()> {
    match command {
        OracleCommand::Certify { cache_dir, json: as_json } => {
            let cache_dir = cache_dir.or_else(oracle::cache_dir_from_env);
            let report = certify_base_cases(cache_dir.as_deref())?;
            if as_json {
                print_stdout(&json(&report)?)?;
            } else {
                let lines: Vec<String> = report
                    .claims
                    .iter()
                    .map(|c| {
                        let status = if c.status == Status::Pass { "PASS" } else { "FAIL" };
                        format!("{status} {} ({} ms)", c.claim, c.elapsed_ms)
                    })
                    .collect();
                print_stdout(&lines.join("\n"))?;
            }
            if report.all_pass() {
                Ok(())
            } else {
                Err(DcellError::Certification("at least one claim failed".into()))
            }
        }
        OracleCommand::Hp { nk, u, v } => {
            let g = SmallGraph::from_dcell(nk.n, nk.k)?;
            let cert = oracle::find_hp(&g, u as usize, v as usize)?;
            if cert.found() {
                check_certificate(verify_path(&g, &cert.sequence, u, v, true))?;
            }
            print_stdout(&json(&cert)?)?;
            Ok(())
        }
        OracleCommand::FaultCheck { nk, f, mode, samples, seed } => {
            let g = SmallGraph::from_dcell(nk.n, nk.k)?;
            let mode = match mode {
                Mode::Hc => FaultMode::Hamiltonian,
                Mode::Hcc => FaultMode::HamiltonianConnected,
            };
            let sampling = match samples {
                Some(count) => Sampling::Random { count, seed },
                None => Sampling::Exhaustive,
            };
            let report = oracle::fault_check(&g, f, mode, sampling)?;
            print_stdout(&json(&report)?)?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct CheckOutput {
    n: usize,
    k: usize,
    d: u64,
    c: u64,
    vertices: u64,
    kc_connected: bool,
    witness: Option<String>,
    copy_connectivity: Vec<serde_json::Value>,
}

fn partial_for(nk: NK, d: u64, cap: u64) -> Result<dcell_core::PartialTopology> {
    let shape = ShapeA::dcell(nk.n, nk.k)?;
    if d > shape.size() {
        return Err(DcellError::OutOfRange(format!("d = {d} exceeds |A| = {}", shape.size())));
    }
    let listing = Listing::with_calls(shape, d)?;
    materialize_partial(&listing, nk.n, nk.k, cap)
}

fn run_partial(command: PartialCommand, cap: u64) -> Result<()> {
    match command {
        PartialCommand::Next { shape, steps, out } => {
            let mut listing = Listing::new(ShapeA::new(shape)?);
            let mut lines = Vec::new();
            for _ in 0..steps {
                let tuple = listing.next()?;
                lines.push(tuple.iter().map(|d| d.to_string()).collect::<String>());
            }
            match out {
                Some(path) => listing.save(&path),
                None if lines.is_empty() => Ok(()),
                None => print_stdout(&lines.join("\n")),
            }
        }
        PartialCommand::Check { nk, d, c } => {
            let p = partial_for(nk, d, cap)?;
            let report = p.listing().is_kc_connected(c)?;
            let mut copy_connectivity = Vec::new();
            for l in 1..nk.k {
                let mut prefixes = vec![Prefix::root()];
                for depth in 0..nk.k - l - 1 {
                    let bound = p.listing().shape().bounds()[depth];
                    let mut next = Vec::new();
                    for pre in &prefixes {
                        for i in 0..bound {
                            let child = pre.child(i);
                            if !p.listing().is_empty_prefix(&child)? {
                                next.push(child);
                            }
                        }
                    }
                    prefixes = next;
                }
                for pre in prefixes {
                    let r = check_copy_connectivity(&p, &pre, l)?;
                    copy_connectivity.push(serde_json::json!({
                        "prefix": pre.to_string(),
                        "level": l,
                        "m": r.m,
                        "m_links": r.m_links,
                        "m_required": r.m_required,
                        "missing_pairs": r.missing_pairs,
                        "passed": r.passed(),
                    }));
                }
            }
            let out = CheckOutput {
                n: nk.n,
                k: nk.k,
                d,
                c,
                vertices: p.vertex_count(),
                kc_connected: report.connected,
                witness: report.witness.map(|w| w.to_string()),
                copy_connectivity,
            };
            print_stdout(&json(&out)?)?;
            Ok(())
        }
        PartialCommand::Hp { nk, d, c, u, v, out } => {
            let p = partial_for(nk, d, cap)?;
            let h = partial_hp(&p, c, u, v)?;
            emit(&json(&h)?, out.as_deref())
        }
    }
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    k: usize,
    t_k: u64,
    calls: u64,
    calls_per_vertex: f64,
    millis: f64,
}

fn run_bench(rows: &[(usize, usize)], cap: u64, as_json: bool) -> Result<()> {
    let mut table = Vec::with_capacity(rows.len());
    for &(n, k) in rows {
        let d = dcell(NK { n, k }, cap)?;
        check_supported(&d)?;
        let top = d.vertex_count();
        // warm-up run loads any cached base tables
        counted_dcell_hp(&d, 0, top - 1)?;
        let start = Instant::now();
        let (path, calls) = counted_dcell_hp(&d, 0, top - 1)?;
        let millis = start.elapsed().as_secs_f64() * 1000.0;
        check_certificate(verify_path(&d, &path, 0, top - 1, true))?;
        table.push(BenchRow { n, k, t_k: top, calls, calls_per_vertex: calls as f64 / top as f64, millis });
    }
    if as_json {
        print_stdout(&json(&table)?)?;
    } else {
        let mut lines =
            vec![format!("{:>3} {:>3} {:>10} {:>10} {:>10} {:>10}", "n", "k", "t_k", "calls", "calls/t_k", "ms")];
        for r in &table {
            lines.push(format!(
                "{:>3} {:>3} {:>10} {:>10} {:>10.4} {:>10.3}",
                r.n, r.k, r.t_k, r.calls, r.calls_per_vertex, r.millis
            ));
        }
        print_stdout(&lines.join("\n"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let body = serde_json::json!({ "error": e.code(), "message": e.to_string() });
            eprintln!("{body}");
            if e.is_parameter_error() {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
