use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use adelic_gaps::adele::{parse_point, AdelePoint, PrimeSet};
use adelic_gaps::lattice::{deltas_via_lattice, scan_g, RotationMatrixSpec};
use adelic_gaps::sharpness::reproduce_all;
use adelic_gaps::sweep::{run_sweep, PrimeSetPool, SweepConfig};
use adelic_gaps::{gap_report, Rational};

const USAGE: u8 = 1;
const VERIFICATION: u8 = 2;

#[derive(Parser)]
#[command(
    name = "adelic-gaps",
    version,
    about = "Exact gap statistics for rotations on adelic tori"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Nearest-neighbour distances and distinct gaps of the first N orbit points.
    Gaps {
        /// Prime set: `all`, `all-except:2,3` or `2,3,5`.
        #[arg(long)]
        primes: String,
        /// Rotation, e.g. `inf=351/100;default=0;2=1`.
        #[arg(long)]
        alpha: String,
        #[arg(long = "N", visible_alias = "n", value_parser = clap::value_parser!(u64).range(1..))]
        len: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Checks g_N <= 3 on seeded random instances.
    #[command(long_about = "Checks g_N <= 3 on seeded random instances.\n\n\
        Sample i uses its own ChaCha8 stream (seed, stream i). The real coordinate is a/b \
        with |a| <= H and 1 <= b <= H. The default coordinate is an integer in [-H, H] or \
        such a fraction, with equal odds. Each of the four smallest primes of P gets an \
        override with probability 1/2, and primes of P dividing the default's denominator \
        always get one. N is uniform on [2, max-n]. Orbits that collapse to a single point \
        are redrawn.\n\n\
        `--primes mixed` draws P per sample: a finite subset of {2,3,5,7} with 1 to 3 \
        members (40%), all primes (30%) or all primes except 2 (30%).")]
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 40)]
        max_n: u64,
        #[arg(long, default_value_t = 60)]
        max_height: u64,
        /// A prime set, or `mixed`.
        #[arg(long, default_value = "mixed")]
        primes: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Recomputes the pinned sharpness examples and compares every value exactly.
    #[command(visible_alias = "paper")]
    Sharpness {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compares direct and lattice computations of every distance.
    LatticeCheck {
        #[arg(long)]
        primes: String,
        #[arg(long)]
        alpha: String,
        #[arg(long = "N", visible_alias = "n", value_parser = clap::value_parser!(u64).range(1..))]
        len: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// A failed run: exit code plus message for stderr.
struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(USAGE, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut out = io::stdout().lock();
    match run(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, message)) => {
            let _ = out.flush();
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> Result<(), Failure> {
    match command {
        Command::Gaps {
            primes,
            alpha,
            len,
            format,
        } => {
            let alpha = parse_alpha(&alpha, &primes)?;
            cmd_gaps(&alpha, len, format, out)
        }
        Command::Verify {
            seed,
            samples,
            max_n,
            max_height,
            primes,
            format,
        } => {
            let primes = if primes == "mixed" {
                PrimeSetPool::Mixed
            } else {
                PrimeSetPool::Fixed(primes.parse()?)
            };
            let config = SweepConfig {
                seed,
                samples,
                max_n,
                max_height,
                primes,
            };
            cmd_verify(&config, format, out)
        }
        Command::Sharpness { format } => cmd_sharpness(format, out),
        Command::LatticeCheck {
            primes,
            alpha,
            len,
            format,
        } => {
            let alpha = parse_alpha(&alpha, &primes)?;
            cmd_lattice_check(&alpha, len, format, out)
        }
    }
}

fn parse_alpha(alpha: &str, primes: &str) -> Result<AdelePoint, Failure> {
    let primes: PrimeSet = primes.parse()?;
    Ok(parse_point(alpha, &primes)?)
}

fn write_json(out: &mut impl Write, value: &impl Serialize) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn join(values: &[Rational]) -> String {
    values
        .iter()
        .map(Rational::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_gaps(
    alpha: &AdelePoint,
    len: u64,
    format: Format,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let report = gap_report(alpha, len)?;
    match format {
        Format::Json => write_json(out, &report)?,
        Format::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["n", "delta"])?;
            for (i, d) in report.deltas.iter().enumerate() {
                w.write_record([(i + 1).to_string(), d.to_string()])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "alpha: {alpha}")?;
            writeln!(out, "N: {len}")?;
            writeln!(out, "g: {}", report.gap_count)?;
            for (gap, n) in &report.witnesses {
                writeln!(out, "gap {gap} first at n = {n}")?;
            }
        }
    }
    Ok(())
}

fn cmd_verify(config: &SweepConfig, format: Format, out: &mut impl Write) -> Result<(), Failure> {
    let summary = run_sweep(config)?;
    match format {
        Format::Json => write_json(out, &summary)?,
        Format::Csv => {
            let mut w = csv_writer(&mut *out);
            w.write_record(["index", "primes", "alpha", "N", "g", "gaps"])?;
            for r in &summary.records {
                w.write_record([
                    r.index.to_string(),
                    r.primes.to_string(),
                    r.alpha.clone(),
                    r.len.to_string(),
                    r.gap_count.to_string(),
                    join(&r.distinct_gaps),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "seed: {}", summary.seed)?;
            writeln!(out, "samples: {}", summary.samples)?;
            for (g, count) in &summary.histogram {
                writeln!(out, "g = {g}: {count}")?;
            }
            writeln!(out, "violations: {}", summary.violations.len())?;
        }
    }
    if summary.passed() {
        return Ok(());
    }
    let mut message = format!(
        "{} instance(s) with more than three gaps",
        summary.violations.len()
    );
    for r in &summary.violations {
        message.push_str(&format!(
            "\n  sample {}: --primes {} --alpha \"{}\" --N {} gives g = {} ({})",
            r.index,
            r.primes,
            r.alpha,
            r.len,
            r.gap_count,
            join(&r.distinct_gaps)
        ));
    }
    Err(Failure(VERIFICATION, message))
}

fn cmd_sharpness(format: Format, out: &mut impl Write) -> Result<(), Failure> {
    let table = reproduce_all();
    match format {
        Format::Json => write_json(out, &table)?,
        Format::Csv => {
            let mut w = csv_writer(&mut *out);
            w.write_record(["instance", "quantity", "expected", "computed", "pass"])?;
            for r in &table.rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in &table.rows {
                let status = if r.pass { "PASS" } else { "FAIL" };
                writeln!(
                    out,
                    "{status}  {:<24} {:<10} {}",
                    r.instance, r.quantity, r.computed
                )?;
            }
            let passed = table.rows.iter().filter(|r| r.pass).count();
            writeln!(out, "{passed}/{} values match", table.rows.len())?;
        }
    }
    if table.all_pass {
        return Ok(());
    }
    let mut message = String::from("reproduction mismatch");
    for r in table.failures() {
        message.push_str(&format!(
            "\n  {} {}: expected {}, computed {}",
            r.instance, r.quantity, r.expected, r.computed
        ));
    }
    Err(Failure(VERIFICATION, message))
}

#[derive(Serialize)]
struct LatticeRow {
    n: u64,
    direct: Rational,
    lattice: Rational,
    #[serde(rename = "match")]
    matches: bool,
}

#[derive(Serialize)]
struct LatticeSummary {
    alpha: String,
    #[serde(rename = "N")]
    len: u64,
    matches: usize,
    g: usize,
    g_lattice: usize,
    g_scan: usize,
    chain_holds: bool,
    rows: Vec<LatticeRow>,
}

fn cmd_lattice_check(
    alpha: &AdelePoint,
    len: u64,
    format: Format,
    out: &mut impl Write,
) -> Result<(), Failure> {
    let direct = gap_report(alpha, len)?;
    let lattice = deltas_via_lattice(alpha, len)?;
    let spec = RotationMatrixSpec::for_orbit(alpha.clone(), len)?;
    let scan = scan_g(&spec, 2 * len + 1)?;
    let rows: Vec<LatticeRow> = direct
        .deltas
        .iter()
        .zip(lattice)
        .enumerate()
        .map(|(i, (d, l))| LatticeRow {
            n: i as u64 + 1,
            matches: *d == l,
            direct: d.clone(),
            lattice: l,
        })
        .collect();
    let g_lattice = rows
        .iter()
        .map(|r| &r.lattice)
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    let summary = LatticeSummary {
        alpha: alpha.to_string(),
        len,
        matches: rows.iter().filter(|r| r.matches).count(),
        g: direct.gap_count,
        g_lattice,
        g_scan: scan.distinct_count,
        chain_holds: direct.gap_count == g_lattice && g_lattice <= scan.distinct_count,
        rows,
    };
    match format {
        Format::Json => write_json(out, &summary)?,
        Format::Csv => {
            let mut w = csv_writer(&mut *out);
            w.write_record(["n", "direct", "lattice", "match"])?;
            for r in &summary.rows {
                w.write_record([
                    r.n.to_string(),
                    r.direct.to_string(),
                    r.lattice.to_string(),
                    r.matches.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "alpha: {}", summary.alpha)?;
            writeln!(out, "matches: {}/{}", summary.matches, len)?;
            writeln!(out, "g_N: {}", summary.g)?;
            writeln!(out, "G_N: {}", summary.g_lattice)?;
            writeln!(out, "G: {}", summary.g_scan)?;
            let verdict = if summary.chain_holds {
                "holds"
            } else {
                "fails"
            };
            writeln!(out, "g_N = G_N <= G: {verdict}")?;
        }
    }
    let mut problems: Vec<String> = summary
        .rows
        .iter()
        .filter(|r| !r.matches)
        .map(|r| format!("n = {}: direct {}, lattice {}", r.n, r.direct, r.lattice))
        .collect();
    if !summary.chain_holds {
        problems.push(format!(
            "chain g_N = G_N <= G fails: {} / {} / {}",
            summary.g, summary.g_lattice, summary.g_scan
        ));
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure(VERIFICATION, problems.join("\n  ")))
    }
}
