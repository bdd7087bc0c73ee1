mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hyperweil::admissibility::{self, ClassTable};
use hyperweil::census::{Census, CensusMode, CensusRecord, CensusVerifier};
use hyperweil::enumerate;
use hyperweil::sieve::{self, CheckSet, Failure};
use hyperweil::{Parities, Partition, WeilPolyCoeffs};

use output::{Format, Sink};

#[derive(Parser)]
#[command(name = "hyperweil", version, about = "Mod-2 admissibility of Weil polynomials for hyperelliptic Jacobians")]
struct Cli {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Admissible mod-2 classes for a genus.
    Classes(ClassesArgs),
    /// Admissibility and sieve verdict for one Weil polynomial.
    Classify(ClassifyArgs),
    /// Enumerate Weil polynomials.
    Enum(EnumArgs),
    /// Census of hyperelliptic curves with direct point counts.
    Census(CensusArgs),
    /// Point-count sieve verdicts.
    Sieve(SieveArgs),
    /// Inadmissible proportion against its limit.
    Report(ReportArgs),
}

#[derive(Args)]
struct ClassesArgs {
    #[arg(long)]
    genus: usize,
    /// Include every partition of 2g + 2 in each row.
    #[arg(long)]
    full: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Isogeny class label such as 3.3.a_ab_ac.
    #[arg(conflicts_with_all = ["g", "q", "coeffs"], required_unless_present = "coeffs")]
    label: Option<String>,
    #[arg(long = "g", visible_alias = "genus", requires_all = ["q", "coeffs"])]
    g: Option<usize>,
    #[arg(long, requires = "coeffs")]
    q: Option<u64>,
    /// Comma-separated a_1, ..., a_g.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires_all = ["g", "q"])]
    coeffs: Option<Vec<i64>>,
}

#[derive(Args)]
struct EnumArgs {
    #[arg(long)]
    genus: usize,
    #[arg(long)]
    q: u64,
    /// Apply the Honda–Tate rule (default).
    #[arg(long, overrides_with = "no_filter")]
    honda_tate: bool,
    /// Keep every Weil polynomial.
    #[arg(long)]
    no_filter: bool,
    #[arg(long)]
    count_only: bool,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(long)]
    genus: usize,
    #[arg(long)]
    q: u64,
    /// Draw this many curves instead of running exhaustively.
    #[arg(long, requires = "seed")]
    sample: Option<u64>,
    #[arg(long, requires = "sample")]
    seed: Option<u64>,
    /// Audit every record; the summary goes to standard error.
    #[arg(long)]
    verify: bool,
    /// Suppress the per-curve records.
    #[arg(long, requires = "verify")]
    summary_only: bool,
}

#[derive(Args)]
struct SieveArgs {
    #[arg(long)]
    genus: usize,
    /// Largest m with 2^m in the check set.
    #[arg(long)]
    max_m: Option<u32>,
    /// Also check mixed n (even, not a power of 2).
    #[arg(long)]
    mixed: bool,
    /// Compare sieve verdicts with admissibility for every parity class.
    #[arg(long, conflicts_with = "label")]
    cross_validate: bool,
    /// Sieve a single Weil polynomial instead of every class.
    #[arg(long)]
    label: Option<String>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    genus: usize,
    #[arg(long)]
    q: u64,
}

/// Exit status of a successful run.
enum Verdict {
    Ok,
    Negative,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Negative) => ExitCode::from(1),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|cause| {
        cause.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
            || cause
                .downcast_ref::<serde_json::Error>()
                .is_some_and(|j| j.io_error_kind() == Some(std::io::ErrorKind::BrokenPipe))
            || cause
                .downcast_ref::<csv::Error>()
                .is_some_and(|c| matches!(c.kind(), csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe))
    })
}

fn run(cli: Cli) -> Result<Verdict> {
    let sink = |default: Format| Sink::open(cli.out.as_deref(), cli.format.unwrap_or(default));
    match cli.command {
        Command::Classes(a) => classes(a, sink(Format::Json)?),
        Command::Classify(a) => classify(a, sink(Format::Json)?),
        Command::Enum(a) => enumerate_cmd(a, sink(Format::Csv)?),
        Command::Census(a) => census(a, sink(Format::Csv)?),
        Command::Sieve(a) => sieve_cmd(a, sink(Format::Json)?),
        Command::Report(a) => report(a, sink(Format::Text)?),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct ClassOut {
    parities: Parities,
    witness_partition: Partition,
    #[serde(skip_serializing_if = "Option::is_none")]
    all_partitions: Option<Vec<Partition>>,
}

fn classes(a: ClassesArgs, mut sink: Sink) -> Result<Verdict> {
    let rows: Vec<ClassOut> = if a.full {
        let table = ClassTable::new(a.genus)?;
        table
            .rows()
            .into_iter()
            .map(|(_, r)| ClassOut {
                parities: r.parities,
                witness_partition: r.witness.clone(),
                all_partitions: Some(r.partitions.clone()),
            })
            .collect()
    } else {
        let set = admissibility::admissible_set(a.genus)?;
        let mut rows: Vec<ClassOut> = set
            .classes()
            .map(|(class, witness)| ClassOut {
                parities: Parities::from_f2poly(a.genus, class),
                witness_partition: witness.clone(),
                all_partitions: None,
            })
            .collect();
        rows.sort_by_key(|r| r.parities.to_vec());
        rows
    };
    match sink.format() {
        Format::Json => sink.json(&rows)?,
        Format::Csv => {
            let mut header = vec!["parities", "witness_partition"];
            if a.full {
                header.push("all_partitions");
            }
            sink.csv_row(&header)?;
            for r in &rows {
                let mut row = vec![join(&r.parities.to_vec()), join(r.witness_partition.parts())];
                if let Some(all) = &r.all_partitions {
                    row.push(all.iter().map(|p| join(p.parts())).collect::<Vec<_>>().join(";"));
                }
                sink.csv_row(&row)?;
            }
        }
        Format::Text => {
            for r in &rows {
                let mut line = format!("{}  {}", r.parities, r.witness_partition);
                if let Some(all) = &r.all_partitions {
                    let parts: Vec<String> = all.iter().map(ToString::to_string).collect();
                    line.push_str(&format!("  [{}]", parts.join(", ")));
                }
                sink.line(&line)?;
            }
        }
    }
    sink.finish()?;
    Ok(Verdict::Ok)
}

#[derive(Serialize)]
struct ClassifyOut {
    label: String,
    g: usize,
    q: u64,
    a: Vec<i64>,
    admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_partition: Option<Partition>,
    sieve_ruled_out: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure_trace: Option<Vec<Failure>>,
}

fn classify(a: ClassifyArgs, mut sink: Sink) -> Result<Verdict> {
    let w = match (&a.label, a.g, a.q, a.coeffs) {
        (Some(label), ..) => WeilPolyCoeffs::from_label(label)?,
        (None, Some(g), Some(q), Some(coeffs)) => WeilPolyCoeffs::new(g, q, coeffs)?,
        _ => bail!("give a label or all of --g, --q and --coeffs"),
    };
    let parities = w.reduce_mod2()?;
    let witness = admissibility::is_admissible(&parities);
    let verdict = sieve::instance_ruled_out(&w)?;
    let out = ClassifyOut {
        label: w.label().to_string(),
        g: w.g,
        q: w.q,
        a: w.a.clone(),
        admissible: witness.is_some(),
        witness_partition: witness,
        sieve_ruled_out: verdict.ruled_out,
        failure_trace: verdict.ruled_out.then_some(verdict.failure_trace),
    };
    match sink.format() {
        Format::Json => sink.json(&out)?,
        Format::Csv => {
            sink.csv_row(["label", "admissible", "witness_partition", "sieve_ruled_out"])?;
            sink.csv_row([
                out.label.clone(),
                out.admissible.to_string(),
                out.witness_partition.as_ref().map_or(String::new(), |p| join(p.parts())),
                out.sieve_ruled_out.to_string(),
            ])?;
        }
        Format::Text => {
            let verdict = match &out.witness_partition {
                Some(p) => format!("admissible (witness {p})"),
                None => "inadmissible".to_string(),
            };
            let sieve = if out.sieve_ruled_out { "ruled out" } else { "not ruled out" };
            sink.line(&format!("{}: {verdict}; sieve: {sieve}", out.label))?;
        }
    }
    sink.finish()?;
    Ok(if out.admissible { Verdict::Ok } else { Verdict::Negative })
}

#[derive(Serialize)]
struct CountOut {
    g: usize,
    q: u64,
    honda_tate: bool,
    count: u64,
}

fn enumerate_cmd(a: EnumArgs, mut sink: Sink) -> Result<Verdict> {
    let filter = !a.no_filter;
    let list = if filter {
        enumerate::enumerate_isogeny_classes(a.genus, a.q)?
    } else {
        enumerate::enumerate(a.genus, a.q)?
    };
    if a.count_only {
        let out = CountOut {
            g: a.genus,
            q: a.q,
            honda_tate: filter && hyperweil::arith::is_prime(a.q),
            count: list.len() as u64,
        };
        match sink.format() {
            Format::Json => sink.json(&out)?,
            Format::Csv => {
                sink.csv_row(["g", "q", "honda_tate", "count"])?;
                sink.csv_row([out.g.to_string(), out.q.to_string(), out.honda_tate.to_string(), out.count.to_string()])?;
            }
            Format::Text => sink.line(&out.count.to_string())?,
        }
    } else {
        match sink.format() {
            Format::Json => {
                for w in &list {
                    sink.json(w)?;
                }
            }
            Format::Csv => {
                sink.csv_row(["label"])?;
                for w in &list {
                    sink.csv_row([w.label().as_str()])?;
                }
            }
            Format::Text => {
                for w in &list {
                    sink.line(w.label().as_str())?;
                }
            }
        }
    }
    sink.finish()?;
    Ok(Verdict::Ok)
}

fn write_record(sink: &mut Sink, r: &CensusRecord) -> Result<()> {
    match sink.format() {
        Format::Json => sink.json(r),
        Format::Csv => sink.csv_row([
            r.id.to_string(),
            join(&r.f),
            join(r.degree_set.parts()),
            join(&r.counts),
            r.label.to_string(),
        ]),
        Format::Text => sink.line(&format!(
            "{} f=[{}] degree_set={} counts=[{}] {}",
            r.id,
            join(&r.f),
            r.degree_set,
            join(&r.counts),
            r.label
        )),
    }
}

fn census(a: CensusArgs, mut sink: Sink) -> Result<Verdict> {
    let mode = match (a.sample, a.seed) {
        (Some(count), Some(seed)) => CensusMode::Sample { count, seed },
        (None, None) => CensusMode::Exhaustive,
        _ => bail!("--sample and --seed go together"),
    };
    let census = Census::new(a.genus, a.q)?;
    let mut verifier = if a.verify { Some(CensusVerifier::new(a.genus, a.q)?) } else { None };
    let show = !a.summary_only;
    if show && sink.format() == Format::Csv {
        sink.csv_row(["id", "f", "degree_set", "counts", "label"])?;
    }
    let mut write_error = None;
    let outcome = census.run(mode, |r| {
        if let Some(v) = verifier.as_mut() {
            v.observe(&r)?;
        }
        if show {
            if let Err(e) = write_record(&mut sink, &r) {
                let message = format!("{e:#}");
                write_error = Some(e);
                return Err(hyperweil::Error::InvalidArgument(message));
            }
        }
        Ok(())
    });
    if let Some(e) = write_error {
        return Err(e);
    }
    outcome?;
    sink.finish()?;
    let Some(v) = verifier else {
        return Ok(Verdict::Ok);
    };
    let summary = v.finish();
    eprintln!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(if summary.violations == 0 { Verdict::Ok } else { Verdict::Negative })
}

fn sieve_cmd(a: SieveArgs, mut sink: Sink) -> Result<Verdict> {
    let cs = match a.max_m {
        Some(m) => CheckSet::with_depth(a.genus, m, a.mixed),
        None => CheckSet::with_depth(a.genus, sieve::default_depth(a.genus), a.mixed),
    };
    if let Some(label) = &a.label {
        let w = WeilPolyCoeffs::from_label(label)?;
        if w.g != a.genus {
            bail!("label {label} has genus {}, not {}", w.g, a.genus);
        }
        let verdict = sieve::instance_ruled_out_with(&w, &cs)?;
        expect_json(&sink)?;
        sink.json(&verdict)?;
        sink.finish()?;
        return Ok(Verdict::Ok);
    }
    if a.cross_validate {
        let cv = sieve::cross_validate_with(&cs)?;
        let agrees = cv.agrees();
        match sink.format() {
            Format::Text => {
                sink.line(&format!(
                    "g={} depth={} inadmissible={} sieve_ruled_out={} symmetric_difference={}",
                    cv.g,
                    cv.depth,
                    cv.inadmissible.len(),
                    cv.sieve_ruled_out.len(),
                    cv.symmetric_difference.len()
                ))?;
            }
            _ => {
                expect_json(&sink)?;
                sink.json(&cv)?;
            }
        }
        sink.finish()?;
        return Ok(if agrees { Verdict::Ok } else { Verdict::Negative });
    }
    let mut classes: Vec<Parities> = Parities::all(a.genus).collect();
    classes.sort_by_key(Parities::to_vec);
    let verdicts = classes
        .iter()
        .map(|p| sieve::class_ruled_out_with(p, &cs))
        .collect::<hyperweil::Result<Vec<_>>>()?;
    match sink.format() {
        Format::Text => {
            for v in &verdicts {
                let how = if v.ruled_out_by_parity {
                    "ruled out by parity"
                } else if v.ruled_out {
                    "ruled out 2-adically"
                } else {
                    "survives"
                };
                sink.line(&format!("{}  {how}", v.parities))?;
            }
        }
        _ => {
            expect_json(&sink)?;
            sink.json(&verdicts)?;
        }
    }
    sink.finish()?;
    Ok(Verdict::Ok)
}

fn expect_json(sink: &Sink) -> Result<()> {
    if sink.format() == Format::Csv {
        bail!("this output has no CSV form; use --format json or text");
    }
    Ok(())
}

#[derive(Serialize)]
struct ReportOut {
    g: usize,
    q: u64,
    honda_tate: bool,
    total: u64,
    admissible: u64,
    inadmissible: u64,
    percentage: String,
    limit: String,
    gap: String,
}

fn report(a: ReportArgs, mut sink: Sink) -> Result<Verdict> {
    let r = enumerate::proportion_report(a.genus, a.q)
        .with_context(|| format!("report for g = {}, q = {}", a.genus, a.q))?;
    let limit = admissibility::limit_inadmissible(a.genus);
    let limit = 100.0 * *limit.numer() as f64 / *limit.denom() as f64;
    let pct = r.inadmissible_percent();
    let out = ReportOut {
        g: r.g,
        q: r.q,
        honda_tate: r.honda_tate,
        total: r.total,
        admissible: r.admissible,
        inadmissible: r.inadmissible,
        percentage: format!("{pct:.2}"),
        limit: format!("{limit:.2}"),
        gap: format!("{:.2}", limit - pct),
    };
    match sink.format() {
        Format::Json => sink.json(&out)?,
        Format::Csv => {
            sink.csv_row(["g", "q", "total", "inadmissible", "percentage", "limit", "gap"])?;
            sink.csv_row([
                out.g.to_string(),
                out.q.to_string(),
                out.total.to_string(),
                out.inadmissible.to_string(),
                out.percentage.clone(),
                out.limit.clone(),
                out.gap.clone(),
            ])?;
        }
        Format::Text => sink.line(&format!(
            "g={} q={} total={} inadmissible={} ({}%) limit={}% gap={}%",
            out.g, out.q, out.total, out.inadmissible, out.percentage, out.limit, out.gap
        ))?,
    }
    sink.finish()?;
    Ok(Verdict::Ok)
}
