//! `cyclone` — count, enumerate and explore the triangulations of cyclic
//! polytopes from the command line.
//!
//! Exit codes are a stable contract: 0 success, 1 failed validity verdicts
//! or internal errors, 2 usage/parse errors, 3 capacity limits or interrupt.

use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::One;

use cyclone::enumerate::{
    enumerate_serial_while, enumerate_serial_with_limit, Checkpoint, Coordinator, EnumerationStats,
    RunOutcome, VisitEvent,
};
use cyclone::gkz::compute_gkz;
use cyclone::hst::{build_hst1, export_dot, minimal_and_maximal, transitive_reduction};
use cyclone::{check_triangulation, gkz, Error, PointConfig, Result, Triangulation};

#[derive(Parser)]
#[command(
    name = "cyclone",
    version,
    about = "Exact enumeration of the triangulations of cyclic polytopes C(n,d)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum StreamFormat {
    #[default]
    Topcom,
    Jsonl,
}

#[derive(Subcommand)]
enum Command {
    /// Count all triangulations of C(n,d)
    Count {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        d: u32,
        /// Number of parallel workers
        #[arg(long, value_name = "WORKERS", value_parser = clap::value_parser!(u32).range(1..))]
        parallel: Option<u32>,
        /// Nodes a worker expands per work unit before returning the rest
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        /// Resume from this checkpoint if it exists; save to it on interrupt
        #[arg(long, value_name = "FILE")]
        checkpoint: Option<PathBuf>,
        /// Record the result in this count ledger (one row per (c,d), replaced on rerun)
        #[arg(long, value_name = "FILE")]
        ledger: Option<PathBuf>,
    },
    /// Stream every triangulation, one per line, in reverse-search visit order
    Enumerate {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        d: u32,
        #[arg(long, value_enum, default_value_t)]
        format: StreamFormat,
        /// Append the GKZ vector to each record
        #[arg(long)]
        with_gkz: bool,
    },
    /// Build the first higher Stasheff-Tamari order HST1(n,d)
    Poset {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        d: u32,
        /// Write the flip DAG as Graphviz DOT (tree edges solid)
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
        /// Also compute the transitive reduction
        #[arg(long)]
        reduce: bool,
    },
    /// Compare the counts of C(n,n-5) and C(n,2) for n = 7..N
    Ratios {
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u32).range(7..))]
        max_n: u32,
    },
    /// Validate triangulations given one per line in canonical text form
    Check {
        #[arg(long, value_name = "FILE")]
        file: PathBuf,
        #[arg(short)]
        n: u32,
        #[arg(short)]
        d: u32,
    },
    /// Print the reverse-search root triangulation
    Root {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        d: u32,
        #[arg(long)]
        with_gkz: bool,
    },
    /// Print GKZ vectors of triangulations read from a file or stdin
    Gkz {
        #[arg(short)]
        n: u32,
        #[arg(short)]
        d: u32,
        #[arg(long, value_name = "FILE")]
        file: Option<PathBuf>,
    },
}

static INTERRUPTED: AtomicBool = AtomicBool::new(false);

extern "C" fn on_sigint(_: libc::c_int) {
    INTERRUPTED.store(true, Ordering::Relaxed);
}

fn install_sigint_handler() {
    unsafe {
        libc::signal(libc::SIGINT, on_sigint as *const () as libc::sighandler_t);
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidDimensions { .. }
        | Error::InvalidSimplex(_)
        | Error::InvalidFace(_)
        | Error::InvalidGap { .. }
        | Error::InvalidCircuit(_)
        | Error::InvalidTriangulation(_)
        | Error::CheckpointFormat(_)
        | Error::Parse { .. } => 2,
        Error::Capacity(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("cyclone: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn node_limit() -> Result<u64> {
    match std::env::var("CYCLONE_NODE_LIMIT") {
        Err(_) => Ok(1_000_000),
        Ok(s) => s.parse().map_err(|_| Error::Parse {
            line: 0,
            message: format!("CYCLONE_NODE_LIMIT must be an integer, got {s:?}"),
        }),
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Count {
            n,
            d,
            parallel,
            budget,
            checkpoint,
            ledger,
        } => cmd_count(n, d, parallel, budget, checkpoint, ledger),
        Command::Enumerate {
            n,
            d,
            format,
            with_gkz,
        } => cmd_enumerate(n, d, format, with_gkz),
        Command::Poset { n, d, dot, reduce } => cmd_poset(n, d, dot, reduce),
        Command::Ratios { max_n } => cmd_ratios(max_n),
        Command::Check { file, n, d } => cmd_check(&file, n, d),
        Command::Root { n, d, with_gkz } => cmd_root(n, d, with_gkz),
        Command::Gkz { n, d, file } => cmd_gkz(n, d, file.as_deref()),
    }
}

fn cmd_count(
    n: u32,
    d: u32,
    parallel: Option<u32>,
    budget: u64,
    checkpoint: Option<PathBuf>,
    ledger: Option<PathBuf>,
) -> Result<u8> {
    let cfg = PointConfig::new(n, d)?;
    let workers = parallel.unwrap_or(1) as usize;
    let mode = if parallel.is_some() {
        "parallel"
    } else {
        "serial"
    };
    install_sigint_handler();

    let started = Instant::now();
    let mut coord = match &checkpoint {
        Some(path) if path.exists() => {
            let file = fs::File::open(path)?;
            let ckpt = Checkpoint::read_from(io::BufReader::new(file))?;
            eprintln!(
                "resuming from {} ({} pending units, {} visited)",
                path.display(),
                ckpt.units.len(),
                ckpt.visited
            );
            Coordinator::from_checkpoint(&cfg, &ckpt, budget)?
        }
        _ => Coordinator::new(&cfg, budget)?,
    };

    match coord.run_until(workers, |_| INTERRUPTED.load(Ordering::Relaxed))? {
        RunOutcome::Complete(stats) => {
            println!("{}", stats.triangulation_count);
            eprintln!(
                "count={} tree_edges={} flip_edges={} max_depth={} time_s={:.3} mode={mode} workers={workers} budget={budget}",
                stats.triangulation_count,
                stats.tree_edge_count,
                stats.flip_edge_count,
                stats.max_tree_depth,
                started.elapsed().as_secs_f64(),
            );
            if let Some(path) = ledger {
                update_ledger(&path, &cfg, &stats, mode, workers, budget)?;
            }
            Ok(0)
        }
        RunOutcome::Paused => {
            match &checkpoint {
                Some(path) => {
                    let mut file = fs::File::create(path)?;
                    coord.checkpoint().write_to(&mut file)?;
                    eprintln!(
                        "interrupted after {} triangulations; checkpoint saved to {}",
                        coord.visited(),
                        path.display()
                    );
                }
                None => eprintln!("interrupted after {} triangulations", coord.visited()),
            }
            Ok(3)
        }
    }
}

fn update_ledger(
    path: &Path,
    cfg: &PointConfig,
    stats: &EnumerationStats,
    mode: &str,
    workers: usize,
    budget: u64,
) -> Result<()> {
    let mut rows: Vec<(u32, u32, String)> = Vec::new();
    if path.exists() {
        for (i, line) in fs::read_to_string(path)?.lines().enumerate() {
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.len() != 7 {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("ledger row must have 7 fields, got {}", fields.len()),
                });
            }
            let c: u32 = fields[0].parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: "bad c value".into(),
            })?;
            let d: u32 = fields[1].parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: "bad d value".into(),
            })?;
            rows.push((c, d, line.to_string()));
        }
    }
    let key = (cfg.codim(), cfg.d());
    rows.retain(|&(c, d, _)| (c, d) != key);
    rows.push((
        key.0,
        key.1,
        format!(
            "{} {} {} {:.3} {mode} {workers} {budget}",
            key.0,
            key.1,
            stats.triangulation_count,
            stats.wall_time.as_secs_f64()
        ),
    ));
    rows.sort();
    let mut out = String::new();
    for (_, _, line) in rows {
        out.push_str(&line);
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

fn jsonl_record(t: &Triangulation, gkz_vec: Option<&cyclone::GkzVector>) -> String {
    let mut line = String::from("{\"cells\":[");
    for (i, cell) in t.cells().iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        line.push('[');
        for (j, label) in cell.labels().iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&label.to_string());
        }
        line.push(']');
    }
    line.push(']');
    if let Some(v) = gkz_vec {
        line.push_str(",\"gkz\":[");
        for (i, e) in v.entries().iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&e.to_string());
        }
        line.push(']');
    }
    line.push('}');
    line
}

fn cmd_enumerate(n: u32, d: u32, format: StreamFormat, with_gkz: bool) -> Result<u8> {
    let cfg = PointConfig::new(n, d)?;
    let stdout = io::stdout().lock();
    let mut out = BufWriter::new(stdout);
    let mut write_error: Option<io::Error> = None;

    enumerate_serial_while(&cfg, None, |event: VisitEvent<'_>| {
        let t = event.triangulation;
        let result = match format {
            StreamFormat::Topcom => {
                if with_gkz {
                    writeln!(out, "{t} {}", gkz(&cfg, t))
                } else {
                    writeln!(out, "{t}")
                }
            }
            StreamFormat::Jsonl => {
                let v = with_gkz.then(|| gkz(&cfg, t).clone());
                writeln!(out, "{}", jsonl_record(t, v.as_ref()))
            }
        };
        match result {
            Ok(()) => true,
            Err(e) => {
                write_error = Some(e);
                false
            }
        }
    })?;
    match write_error {
        None => {
            out.flush()?;
            Ok(0)
        }
        // a closed pipe downstream is normal termination
        Some(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(0),
        Some(e) => Err(e.into()),
    }
}

fn cmd_poset(n: u32, d: u32, dot: Option<PathBuf>, reduce: bool) -> Result<u8> {
    let cfg = PointConfig::new(n, d)?;
    let poset = build_hst1(&cfg, node_limit()?)?;
    let (min, max) = minimal_and_maximal(&poset)?;
    let mut summary = format!(
        "nodes={} edges={} tree={} min={} max={}",
        poset.node_count(),
        poset.edges().len(),
        poset.tree_edges().len(),
        poset.nodes()[min],
        poset.nodes()[max],
    );
    if reduce {
        summary.push_str(&format!(" reduced={}", transitive_reduction(&poset)?.len()));
    }
    println!("{summary}");
    if let Some(path) = dot {
        fs::write(path, export_dot(&poset))?;
    }
    Ok(0)
}

fn count_up_to(cfg: &PointConfig, limit: u64) -> Result<BigUint> {
    let stats = enumerate_serial_with_limit(cfg, Some(limit), |_| {})?;
    Ok(stats.triangulation_count)
}

/// Round-half-even rendering of a/b to three decimal places, computed
/// exactly on integers.
fn ratio_decimal(a: &BigUint, b: &BigUint) -> String {
    let scaled = a * 1000u32;
    let mut q = &scaled / b;
    let r = &scaled % b;
    let twice = &r * 2u32;
    if twice > *b || (twice == *b && &q % 2u32 == BigUint::one()) {
        q += 1u32;
    }
    let int = &q / 1000u32;
    let frac = u32::try_from(&q % 1000u32).unwrap();
    format!("{int}.{frac:03}")
}

fn cmd_ratios(max_n: u32) -> Result<u8> {
    let limit = node_limit()?;
    for n in 7..=max_n {
        let codim5 = PointConfig::new(n, n - 5)?;
        let planar = PointConfig::new(n, 2)?;
        let counts =
            count_up_to(&codim5, limit).and_then(|a| Ok((a, count_up_to(&planar, limit)?)));
        match counts {
            Ok((a, b)) => {
                println!("{n} {a} {b} {a}/{b} {}", ratio_decimal(&a, &b));
            }
            Err(Error::Capacity(_)) => println!("{n} skipped"),
            Err(e) => return Err(e),
        }
    }
    Ok(0)
}

fn cmd_check(file: &Path, n: u32, d: u32) -> Result<u8> {
    let cfg = PointConfig::new(n, d)?;
    let content = fs::read_to_string(file)?;
    let mut all_ok = true;
    for (i, line) in content.lines().enumerate() {
        let lineno = i + 1;
        let t: Triangulation = line.parse().map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                line: lineno,
                message,
            },
            other => other,
        })?;
        match check_triangulation(&cfg, &t) {
            Ok(report) if report.is_valid() => println!("line {lineno}: ok"),
            Ok(report) => {
                println!("line {lineno}: {report}");
                all_ok = false;
            }
            Err(e @ Error::InvalidSimplex(_)) => {
                println!("line {lineno}: {e}");
                all_ok = false;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(if all_ok { 0 } else { 1 })
}

fn cmd_root(n: u32, d: u32, with_gkz: bool) -> Result<u8> {
    let cfg = PointConfig::new(n, d)?;
    let t = cyclone::enumerate::root(&cfg)?;
    if with_gkz {
        println!("{t} {}", gkz(&cfg, &t));
    } else {
        println!("{t}");
    }
    Ok(0)
}

fn cmd_gkz(n: u32, d: u32, file: Option<&Path>) -> Result<u8> {
    let cfg = PointConfig::new(n, d)?;
    let content = match file {
        Some(path) => fs::read_to_string(path)?,
        None => {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    for (i, line) in content.lines().enumerate() {
        let lineno = i + 1;
        let t: Triangulation = line.parse().map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                line: lineno,
                message,
            },
            other => other,
        })?;
        let v = compute_gkz(&cfg, &t).map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        println!("{v}");
    }
    Ok(0)
}
