//! The `beads` command line.

pub mod format;
pub mod svg;
pub mod validate;

use std::ffi::OsString;
use std::hash::{BuildHasher, Hasher};
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::hexagon::{check_hahn_line, DiscreteHexagon};
use crate::kernel::{KernelContext, SpacePoint};
use crate::model::HexagonSpec;
use crate::sampler::{available_threads, sample_many};
use crate::scaling::{bulk_convergence_probe, bulk_grid, bulk_kernel, support_interval, ScalingContext};
use format::{g17, Cell, Table};
use validate::{Check, Level};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "beads", version, about = "Finitized bead process: sampling, kernels, oracles, limits")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
    format: OutFormat,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpecArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw configurations (CSV: sample,line,index,position).
    Sample {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Seed; drawn from entropy and reported on stderr when absent.
        #[arg(long)]
        seed: Option<u64>,
        /// Maximum worker threads.
        #[arg(long)]
        threads: Option<usize>,
        /// Also write an SVG picture with the limit-shape boundary.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// One-point density on a line at midpoints of a uniform grid, or at --x.
    Density {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[command(flatten)]
        output: Output,
    },
    /// K(s,y; t,x). Prints the value for a single point, or a grid with --grid.
    Kernel {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        y: Option<f64>,
        /// Points per axis of a midpoint grid over (0,1)².
        #[arg(long)]
        grid: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// n-point correlation det[K] at points given as LINE:POSITION.
    Correlate {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long = "point", required = true, value_parser = parse_point)]
        points: Vec<SpacePoint>,
    },
    /// Enumerate lattice configurations of the n×p×q hexagon.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        spec: SpecArgs,
        /// Print only the number of configurations.
        #[arg(long)]
        count_only: bool,
        /// Check line marginals against the Hahn weight (validation CSV).
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Support endpoints (CSV: S,c,d) along scaled lines S in [0, 2+k].
    LimitShape {
        /// (q-p)/p; alternatively give --p and --q.
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, default_value_t = 256)]
        points: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Bulk convergence table, or K* itself with --limit-only.
    Bulk {
        #[arg(long)]
        k: f64,
        #[arg(long = "S")]
        s: f64,
        /// Values of p for the finite kernel.
        #[arg(long = "p", value_delimiter = ',', default_values_t = vec![16usize, 32, 64])]
        ps: Vec<usize>,
        /// Evaluate K* on the offset grid without the finite comparison.
        #[arg(long)]
        limit_only: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run self-check suites (CSV: suite,check,status,measure,threshold).
    Validate {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    All,
    Kernel,
    Sampler,
    Hexagon,
    Scaling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

fn parse_point(s: &str) -> std::result::Result<SpacePoint, String> {
    let (t, x) = s.split_once(':').ok_or("expected LINE:POSITION")?;
    let t = t.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let x = x.trim().parse::<f64>().map_err(|e| e.to_string())?;
    Ok(SpacePoint::new(t, x))
}

/// Failure modes mapped to exit codes.
enum Failure {
    Usage(String),
    Runtime(String),
    Validation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Structure(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            EXIT_FAILED
        }
        Err(Failure::Validation) => EXIT_FAILED,
    }
}

/// A seed from the process's hashing entropy.
fn entropy_seed() -> u64 {
    let mut h = std::collections::hash_map::RandomState::new().build_hasher();
    h.write_u128(
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_nanos()),
    );
    h.finish()
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = entropy_seed();
        eprintln!("seed: {s}");
        s
    })
}

fn resolve_threads(threads: Option<usize>) -> usize {
    threads.unwrap_or_else(available_threads).max(1)
}

fn emit(output: &Output, table: &Table, spec: &[(&str, Cell)], seed: Option<u64>) -> Outcome {
    let text = match output.format {
        OutFormat::Csv => table.to_csv(),
        OutFormat::Json => table.to_json(spec, seed),
    };
    write_text(output.out.as_ref(), &text)
}

fn write_text(path: Option<&PathBuf>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn pq(spec: &HexagonSpec) -> Vec<(&'static str, Cell)> {
    vec![("p", spec.p().into()), ("q", spec.q().into())]
}

fn dispatch(cmd: Command) -> Outcome {
    match cmd {
        Command::Sample {
            spec,
            count,
            seed,
            threads,
            svg,
            output,
        } => {
            let spec = HexagonSpec::new(spec.p, spec.q)?;
            let seed = resolve_seed(seed);
            let configs = sample_many(&spec, count, seed, resolve_threads(threads))?;
            let mut table = Table::new(&["sample", "line", "index", "position"]);
            for (i, c) in configs.iter().enumerate() {
                for (t, line) in c.lines().iter().enumerate() {
                    for (j, &x) in line.iter().enumerate() {
                        table.push(vec![i.into(), (t + 1).into(), (j + 1).into(), x.into()]);
                    }
                }
            }
            if let Some(path) = svg {
                std::fs::write(path, svg::render(&spec, &configs))?;
            }
            emit(&output, &table, &pq(&spec), Some(seed))
        }
        Command::Density {
            spec,
            t,
            x,
            points,
            output,
        } => {
            let spec = HexagonSpec::new(spec.p, spec.q)?;
            let ctx = KernelContext::new(spec);
            let xs: Vec<f64> = match x {
                Some(x) => vec![x],
                None => {
                    if points == 0 {
                        return Err(Failure::Usage("--points must be positive".into()));
                    }
                    (0..points).map(|i| (i as f64 + 0.5) / points as f64).collect()
                }
            };
            let mut table = Table::new(&["s", "y", "t", "x", "value"]);
            for x in xs {
                let v = ctx.line_density(t, x)?;
                table.push(vec![t.into(), x.into(), t.into(), x.into(), v.into()]);
            }
            emit(&output, &table, &pq(&spec), None)
        }
        Command::Kernel {
            spec,
            s,
            t,
            x,
            y,
            grid,
            output,
        } => {
            let spec = HexagonSpec::new(spec.p, spec.q)?;
            let ctx = KernelContext::new(spec);
            match (x, y, grid) {
                (Some(x), Some(y), None) => {
                    let v = ctx.kernel_eval(s, y, t, x)?;
                    if output.format == OutFormat::Csv && output.out.is_none() {
                        return write_text(None, &format!("{}\n", g17(v)));
                    }
                    let mut table = Table::new(&["s", "y", "t", "x", "value"]);
                    table.push(vec![s.into(), y.into(), t.into(), x.into(), v.into()]);
                    emit(&output, &table, &pq(&spec), None)
                }
                (None, None, Some(m)) if m > 0 => {
                    let pts: Vec<f64> = (0..m).map(|i| (i as f64 + 0.5) / m as f64).collect();
                    let mut table = Table::new(&["s", "y", "t", "x", "value"]);
                    for &y in &pts {
                        for &x in &pts {
                            let v = ctx.kernel_eval(s, y, t, x)?;
                            table.push(vec![s.into(), y.into(), t.into(), x.into(), v.into()]);
                        }
                    }
                    emit(&output, &table, &pq(&spec), None)
                }
                _ => Err(Failure::Usage("give both --x and --y, or --grid N (N > 0)".into())),
            }
        }
        Command::Correlate { spec, points } => {
            let spec = HexagonSpec::new(spec.p, spec.q)?;
            let ctx = KernelContext::new(spec);
            let v = ctx.npoint_correlation(&points)?;
            write_text(None, &format!("{}\n", g17(v)))
        }
        Command::Enumerate {
            n,
            spec,
            count_only,
            check,
            output,
        } => {
            let hex = DiscreteHexagon::new(n, spec.p, spec.q)?;
            let all = hex.enumerate_configurations()?;
            let env = vec![("p", spec.p.into()), ("q", spec.q.into()), ("n", n.into())];
            if count_only {
                return write_text(output.out.as_ref(), &format!("{}\n", all.len()));
            }
            if check {
                let mut table = Table::new(&["suite", "check", "status", "measure", "threshold"]);
                let mut ok = true;
                for t in 1..spec.p + spec.q {
                    let c = check_hahn_line(&hex, &all, t)?;
                    ok &= c.proportional;
                    table.push(vec![
                        "hexagon".into(),
                        Cell::Text(format!("hahn_line_{t}")),
                        status(c.proportional),
                        Cell::Int(!c.proportional as i64),
                        Cell::Int(0),
                    ]);
                }
                emit(&output, &table, &env, None)?;
                return if ok { Ok(()) } else { Err(Failure::Validation) };
            }
            let mut table = Table::new(&["sample", "line", "index", "position"]);
            for (i, c) in all.iter().enumerate() {
                for (t, line) in c.iter().enumerate() {
                    for (j, &x) in line.iter().enumerate() {
                        table.push(vec![i.into(), (t + 1).into(), (j + 1).into(), Cell::Int(x)]);
                    }
                }
            }
            emit(&output, &table, &env, None)
        }
        Command::LimitShape {
            k,
            p,
            q,
            points,
            output,
        } => {
            let (k, env) = match (k, p, q) {
                (Some(k), None, None) => (k, vec![("k", k.into())]),
                (None, Some(p), Some(q)) => {
                    let spec = HexagonSpec::new(p, q)?;
                    let k = (q as f64 - p as f64) / p as f64;
                    let mut env = pq(&spec);
                    env.push(("k", k.into()));
                    (k, env)
                }
                _ => return Err(Failure::Usage("give --k, or both --p and --q".into())),
            };
            if points < 2 {
                return Err(Failure::Usage("--points must be at least 2".into()));
            }
            let mut table = Table::new(&["S", "c", "d"]);
            for i in 0..points {
                let s = ((2.0 + k) * i as f64 / (points - 1) as f64).min(2.0 + k);
                let (c, d) = support_interval(k, s)?;
                table.push(vec![s.into(), c.into(), d.into()]);
            }
            emit(&output, &table, &env, None)
        }
        Command::Bulk {
            k,
            s,
            ps,
            limit_only,
            output,
        } => {
            let sc = ScalingContext::new(k, s)?;
            let env = vec![("k", k.into()), ("S", s.into())];
            let grid = bulk_grid();
            if limit_only {
                let mut table = Table::new(&["s", "y", "t", "x", "value"]);
                for &(s0, t0, x, y) in &grid {
                    table.push(vec![s0.into(), y.into(), t0.into(), x.into(), bulk_kernel(sc.nu, s0, y, t0, x).into()]);
                }
                return emit(&output, &table, &env, None);
            }
            let mut table = Table::new(&[
                "p", "s0", "t0", "X", "Y", "scaled", "limit", "err_gauge", "err_b_alt", "err_a_naive",
            ]);
            for p in ps {
                for r in bulk_convergence_probe(k, s, p, &grid)? {
                    table.push(vec![
                        p.into(),
                        r.s0.into(),
                        r.t0.into(),
                        r.x.into(),
                        r.y.into(),
                        r.scaled.into(),
                        r.limit.into(),
                        r.err_gauge.into(),
                        r.err_b_alt.into(),
                        r.err_a_naive.into(),
                    ]);
                }
            }
            emit(&output, &table, &env, None)
        }
        Command::Validate {
            suite,
            level,
            seed,
            threads,
            output,
        } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let mut checks: Vec<Check> = Vec::new();
            let mut seed_used = None;
            if matches!(suite, Suite::All | Suite::Kernel) {
                checks.extend(validate::kernel_suite(level)?);
            }
            if matches!(suite, Suite::All | Suite::Sampler) {
                let sd = resolve_seed(seed);
                seed_used = Some(sd);
                checks.extend(validate::sampler_suite(level, sd, resolve_threads(threads))?);
            }
            if matches!(suite, Suite::All | Suite::Hexagon) {
                checks.extend(validate::hexagon_suite(level)?);
            }
            if matches!(suite, Suite::All | Suite::Scaling) {
                checks.extend(validate::scaling_suite(level)?);
            }
            let mut table = Table::new(&["suite", "check", "status", "measure", "threshold"]);
            for c in &checks {
                table.push(vec![c.suite.into(), c.name.into(), status(c.passed), c.measure.into(), c.threshold.into()]);
            }
            emit(&output, &table, &[], seed_used)?;
            if checks.iter().all(|c| c.passed) {
                Ok(())
            } else {
                Err(Failure::Validation)
            }
        }
    }
}

fn status(ok: bool) -> Cell {
    Cell::Text(if ok { "pass" } else { "fail" }.into())
}
