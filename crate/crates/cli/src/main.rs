//! Command-line driver: invariant queries, plane-curve counts, multiple-cover
//! sums, partition series, the conjectural evaluator, graph dumps, and the
//! verification suite. Rationals are always printed as `p/q`, never floats;
//! equal configurations produce byte-identical reports (timing and cache
//! statistics appear only under `--timing`).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use gwloc::error::Error;
use gwloc::hodge::HodgeTable;
use gwloc::localization::per_graph_contributions;
use gwloc::{
    cache, conjecture_value, enumerate_graphs, gamma_series, gw_invariant, manin_sum, mast2_sum,
    mast_sum, multicover_graphsum, multicover_graphsum_with_weights, psi_series, s_beta,
    weight_independence_check, EngineOptions, InvariantQuery, Rat, WeightStream, WeightVector,
};

#[derive(Parser)]
#[command(
    name = "gwloc",
    version,
    about = "Exact Gromov-Witten invariants of projective space via torus fixed-point graph sums"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed of the deterministic weight stream.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Number of independent weight vectors; values must agree exactly.
    #[arg(long, global = true, default_value_t = 1)]
    trials: u32,

    /// Upper bound on explicitly enumerated graphs (the graphs command,
    /// verbose dumps, and the skeleton enumeration inside every sum).
    #[arg(long, global = true, default_value_t = 10_000_000)]
    graph_cap: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Vertex-integral cache file, persisted across runs.
    #[arg(long, global = true, env = "GWLOC_CACHE")]
    cache: Option<PathBuf>,

    /// Worker threads for the parallel graph reduction (0 = all cores).
    /// Results are identical for any worker count.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,

    /// Include elapsed time and cache statistics in the report.
    #[arg(long, global = true)]
    timing: bool,

    /// Dump per-graph contributions as JSON lines to stderr.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum McMode {
    /// Graph mode for genus 0, both for genus 1, partition for genus >= 2.
    Auto,
    Graph,
    Partition,
    Both,
}

#[derive(Copy, Clone, ValueEnum)]
enum SeriesKind {
    /// Genus-1 generating function; matches -log(1+t)/24.
    Gamma,
    /// Genus-0 three-point generating function; matches 1/(1+t).
    Psi,
    /// Its coefficients s_beta = (-1)^beta, one per line.
    Sbeta,
    /// Partition power sums, (-1)^d, one per line.
    Manin,
}

#[derive(Subcommand)]
enum Command {
    /// Gromov-Witten invariant of P^r with hyperplane-power insertions.
    Gw {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u8,
        /// Number of point-class (H^r) insertions.
        #[arg(long)]
        points: Option<u32>,
        /// Comma-separated insertion powers, e.g. 2,2,1,1.
        #[arg(long, conflicts_with = "points")]
        insertions: Option<String>,
    },
    /// Number of genus-g degree-d plane curves through 3d+g-1 points.
    Count {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: u32,
    },
    /// Multiple-cover contribution of a (-1,-1) rational curve.
    Multicover {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, value_enum, default_value_t = McMode::Auto)]
        mode: McMode,
        /// Evaluate under the collapse weights (0,-1) instead of generic ones.
        #[arg(long)]
        manin: bool,
        /// Hodge-integral table for genus >= 2 partition sums.
        #[arg(long)]
        hodge_table: Option<PathBuf>,
    },
    /// Partition-sum generating functions and summation identities.
    Series {
        #[arg(long, value_enum)]
        kind: SeriesKind,
        #[arg(long, default_value_t = 10)]
        order: u32,
    },
    /// Conjectural genus >= 2 multiple-cover closed form.
    Conjecture {
        #[arg(long)]
        g: Option<u32>,
        #[arg(long)]
        d: Option<u32>,
        /// Tabulate g = 2..6, d = 1..5.
        #[arg(long)]
        grid: bool,
    },
    /// Enumerate the fixed-point graphs for (g, n, r, d).
    Graphs {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        r: u8,
        #[arg(long, default_value_t = 0)]
        n: u32,
    },
    /// Run the verification suite; exits nonzero on any failure.
    Selfcheck {
        /// Include the slower enumerative criteria.
        #[arg(long)]
        extended: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.workers > 0 {
        // ignore the error if a pool already exists; results do not depend
        // on the worker count
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.workers).build_global();
    }
    if let Some(path) = &cli.cache {
        if path.exists() {
            match cache::global().load(path) {
                Ok(_) => {}
                Err(warning) => eprintln!("warning: {warning}"),
            }
        }
    }
    let started = std::time::Instant::now();
    let outcome = run(&cli);
    if let Some(path) = &cli.cache {
        if let Err(e) = cache::global().save(path) {
            eprintln!("warning: could not persist cache to {path:?}: {e}");
        }
    }
    match outcome {
        Ok(mut report) => {
            if cli.timing {
                report.insert("elapsed_ms".into(), json!(started.elapsed().as_millis() as u64));
                report.insert("cache_hits".into(), json!(cache::global().hits()));
            }
            emit(&cli.format, &report);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::DimensionMismatch(_) => 2,
        Error::UnsupportedGenus(_) => 3,
        Error::MissingHodgeIntegrals(_) | Error::HodgeTable(_) => 4,
        Error::GraphCapExceeded { .. } => 5,
        _ => 1,
    }
}

type Report = Map<String, Value>;

fn run(cli: &Cli) -> Result<Report, Error> {
    let opts = EngineOptions {
        seed: cli.seed,
        graph_cap: cli.graph_cap,
        ..EngineOptions::default()
    };
    match &cli.command {
        Command::Gw { g, d, r, points, insertions } => {
            let ins: Vec<u8> = match (points, insertions) {
                (Some(p), None) => vec![*r; *p as usize],
                (None, Some(list)) => parse_insertions(list)?,
                (None, None) => Vec::new(),
                (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
            };
            let q = InvariantQuery::new(*g, *d, *r, ins)?;
            if cli.verbose {
                dump_graphs(*g, q.marks(), *r, *d, q.insertions(), false, &opts)?;
            }
            invariant_report(cli, &q, &opts)
        }
        Command::Count { g, d } => {
            let n = 3 * *d as i64 + *g as i64 - 1;
            let q = InvariantQuery::new(*g, *d, 2, vec![2; n as usize])?;
            if cli.verbose {
                dump_graphs(*g, q.marks(), 2, *d, q.insertions(), false, &opts)?;
            }
            let mut report = invariant_report(cli, &q, &opts)?;
            report.insert("points".into(), json!(n));
            Ok(report)
        }
        Command::Multicover { g, d, mode, manin, hodge_table } => {
            multicover_report(cli, *g, *d, *mode, *manin, hodge_table.as_deref(), &opts)
        }
        Command::Series { kind, order } => series_report(*kind, *order),
        Command::Conjecture { g, d, grid } => conjecture_report(*g, *d, *grid),
        Command::Graphs { g, d, r, n } => {
            let graphs = enumerate_graphs(*g, *n, *r, *d, cli.graph_cap)?;
            let mut report = Report::new();
            report.insert("command".into(), json!("graphs"));
            report.insert(
                "query".into(),
                json!({"genus": g, "degree": d, "r": r, "marks": n}),
            );
            report.insert("graph_count".into(), json!(graphs.len()));
            report.insert(
                "graphs".into(),
                Value::Array(
                    graphs
                        .iter()
                        .map(|gr| {
                            let mut o = serde_json::to_value(gr).expect("graph serializes");
                            o.as_object_mut().unwrap().insert(
                                "automorphism_order".into(),
                                json!(gr.automorphism_order().to_string()),
                            );
                            o
                        })
                        .collect(),
                ),
            );
            Ok(report)
        }
        Command::Selfcheck { extended } => {
            let mut results = Vec::new();
            let mut failed = 0usize;
            for c in gwloc::selfcheck::criteria() {
                if c.extended && !extended {
                    continue;
                }
                match (c.run)() {
                    Ok(()) => {
                        println!("PASS {:>3}  {}", c.id, c.summary);
                        results.push(json!({"id": c.id, "status": "pass"}));
                    }
                    Err(msg) => {
                        println!("FAIL {:>3}  {}: {msg}", c.id, c.summary);
                        results.push(json!({"id": c.id, "status": "fail", "detail": msg}));
                        failed += 1;
                    }
                }
            }
            if failed > 0 {
                return Err(Error::InvalidArgument(format!("{failed} criteria failed")));
            }
            let mut report = Report::new();
            report.insert("command".into(), json!("selfcheck"));
            report.insert("criteria".into(), Value::Array(results));
            report.insert("status".into(), json!("pass"));
            Ok(report)
        }
    }
}

fn parse_insertions(list: &str) -> Result<Vec<u8>, Error> {
    list.split(',')
        .map(|t| {
            t.trim()
                .parse::<u8>()
                .map_err(|_| Error::InvalidArgument(format!("bad insertion power {t:?}")))
        })
        .collect()
}

fn invariant_report(cli: &Cli, q: &InvariantQuery, opts: &EngineOptions) -> Result<Report, Error> {
    let mut report = Report::new();
    report.insert("command".into(), json!("gw"));
    report.insert(
        "query".into(),
        json!({
            "genus": q.genus(),
            "degree": q.degree(),
            "r": q.r(),
            "insertions": q.insertions(),
        }),
    );
    report.insert("weight_seed".into(), json!(cli.seed));
    if cli.trials <= 1 {
        let out = gw_invariant(q, opts)?;
        report.insert("value".into(), json!(out.value.to_string()));
        report.insert("graph_count".into(), json!(out.graph_count.to_string()));
        report.insert("weight_vectors_used".into(), json!(1));
        report.insert("weights".into(), json!(out.weights.to_string()));
    } else {
        let check = weight_independence_check(q, cli.trials, opts)?;
        if !check.consistent {
            let shown: Vec<String> =
                check.values.iter().map(|(w, v)| format!("{w} -> {v}")).collect();
            return Err(Error::NonGenericWeights(format!(
                "values disagree across weight vectors: {}",
                shown.join("; ")
            )));
        }
        let out = gw_invariant(q, opts)?;
        report.insert("value".into(), json!(check.values[0].1.to_string()));
        report.insert("graph_count".into(), json!(out.graph_count.to_string()));
        report.insert("weight_vectors_used".into(), json!(cli.trials));
        report.insert(
            "weights".into(),
            Value::Array(
                check.values.iter().map(|(w, _)| json!(w.to_string())).collect(),
            ),
        );
    }
    Ok(report)
}

fn multicover_report(
    cli: &Cli,
    g: u32,
    d: u32,
    mode: McMode,
    manin: bool,
    hodge_table: Option<&std::path::Path>,
    opts: &EngineOptions,
) -> Result<Report, Error> {
    let mode = match (mode, g) {
        (McMode::Auto, 0) => McMode::Graph,
        (McMode::Auto, 1) => McMode::Both,
        (McMode::Auto, _) => McMode::Partition,
        (m, _) => m,
    };
    let mut report = Report::new();
    report.insert("command".into(), json!("multicover"));
    report.insert("query".into(), json!({"genus": g, "degree": d}));
    let graph_value = if mode == McMode::Graph || mode == McMode::Both {
        if cli.verbose {
            dump_graphs(g, 0, 1, d, &[], true, opts)?;
        }
        let value = if manin {
            let w = WeightVector::manin();
            let v = multicover_graphsum_with_weights(g, d, &w, opts.graph_cap)?;
            report.insert("weights".into(), json!(w.to_string()));
            v
        } else if cli.trials > 1 {
            let mut stream = WeightStream::new(1, opts.seed);
            let mut values: Vec<(WeightVector, Rat)> = Vec::new();
            while values.len() < cli.trials as usize {
                let w = stream.next().expect("infinite stream");
                match multicover_graphsum_with_weights(g, d, &w, opts.graph_cap) {
                    Ok(v) => values.push((w, v)),
                    Err(Error::NonGenericWeights(_) | Error::SingularWeight(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            if values.windows(2).any(|p| p[0].1 != p[1].1) {
                let shown: Vec<String> =
                    values.iter().map(|(w, v)| format!("{w} -> {v}")).collect();
                return Err(Error::NonGenericWeights(format!(
                    "values disagree across weight vectors: {}",
                    shown.join("; ")
                )));
            }
            report.insert("weight_vectors_used".into(), json!(cli.trials));
            values.remove(0).1
        } else {
            let out = multicover_graphsum(g, d, opts)?;
            report.insert("graph_count".into(), json!(out.graph_count.to_string()));
            report.insert("weights".into(), json!(out.weights.to_string()));
            out.value
        };
        report.insert("graph_value".into(), json!(value.to_string()));
        Some(value)
    } else {
        None
    };
    let partition_value = if mode == McMode::Partition || mode == McMode::Both {
        let value = if g == 1 {
            mast_sum(d)?
        } else {
            let table = match hodge_table {
                Some(path) => Some(HodgeTable::from_path(path)?),
                None => None,
            };
            mast2_sum(g, d, table.as_ref())?
        };
        report.insert("partition_value".into(), json!(value.to_string()));
        Some(value)
    } else {
        None
    };
    let value = match (&graph_value, &partition_value) {
        (Some(a), Some(b)) => {
            if a != b {
                return Err(Error::InvalidArgument(format!(
                    "graph sum {a} and partition sum {b} disagree"
                )));
            }
            a.clone()
        }
        (Some(a), None) => a.clone(),
        (None, Some(b)) => b.clone(),
        (None, None) => unreachable!("mode resolution always picks a route"),
    };
    report.insert("weight_seed".into(), json!(cli.seed));
    report.insert("value".into(), json!(value.to_string()));
    Ok(report)
}

fn series_report(kind: SeriesKind, order: u32) -> Result<Report, Error> {
    let mut report = Report::new();
    report.insert("command".into(), json!("series"));
    let (name, coeffs, start): (&str, Vec<Rat>, u32) = match kind {
        SeriesKind::Gamma => ("gamma", gamma_series(order)?, 1),
        SeriesKind::Psi => ("psi", psi_series(order)?, 0),
        SeriesKind::Sbeta => {
            ("s_beta", (1..=order).map(s_beta).collect::<Result<_, _>>()?, 1)
        }
        SeriesKind::Manin => {
            ("manin", (1..=order).map(manin_sum).collect::<Result<_, _>>()?, 1)
        }
    };
    report.insert("series".into(), json!(name));
    report.insert("order".into(), json!(order));
    report.insert(
        "coefficients".into(),
        Value::Array(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| json!({"power": start + i as u32, "value": c.to_string()}))
                .collect(),
        ),
    );
    Ok(report)
}

fn conjecture_report(g: Option<u32>, d: Option<u32>, grid: bool) -> Result<Report, Error> {
    let mut report = Report::new();
    report.insert("command".into(), json!("conjecture"));
    if grid {
        let mut rows = Vec::new();
        for g in 2..=6u32 {
            for d in 1..=5u32 {
                let v = conjecture_value(g, d)?;
                rows.push(json!({"genus": g, "degree": d, "value": v.value().to_string()}));
            }
        }
        report.insert("values".into(), Value::Array(rows));
    } else {
        let (g, d) = match (g, d) {
            (Some(g), Some(d)) => (g, d),
            _ => {
                return Err(Error::InvalidArgument(
                    "conjecture needs --g and --d, or --grid".into(),
                ))
            }
        };
        let v = conjecture_value(g, d)?;
        report.insert("query".into(), json!({"genus": g, "degree": d}));
        report.insert("value".into(), json!(v.value().to_string()));
        report.insert("bernoulli_form".into(), json!(v.bernoulli_form.to_string()));
        report.insert(
            "euler_characteristic_form".into(),
            json!(v.euler_characteristic_form.to_string()),
        );
    }
    Ok(report)
}

fn dump_graphs(
    g: u32,
    n: u32,
    r: u8,
    d: u32,
    insertions: &[u8],
    obstruction: bool,
    opts: &EngineOptions,
) -> Result<(), Error> {
    let (pairs, weights) = per_graph_contributions(g, n, r, d, insertions, obstruction, opts)?;
    eprintln!("{}", json!({"weights": weights.to_string()}));
    for (graph, value) in pairs {
        let line = json!({
            "graph": serde_json::to_value(&graph).expect("graph serializes"),
            "value": value.to_string(),
            "automorphism_order": graph.automorphism_order().to_string(),
        });
        eprintln!("{line}");
    }
    Ok(())
}

fn emit(format: &Format, report: &Report) {
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string(&Value::Object(report.clone())).unwrap());
        }
        Format::Csv => {
            let flat = flatten(report);
            let header: Vec<&str> = flat.iter().map(|(k, _)| k.as_str()).collect();
            let row: Vec<String> = flat.iter().map(|(_, v)| csv_field(v)).collect();
            println!("{}", header.join(","));
            println!("{}", row.join(","));
        }
        Format::Text => {
            for (k, v) in flatten(report) {
                println!("{k} = {v}");
            }
        }
    }
}

fn flatten(report: &Report) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (k, v) in report {
        match v {
            Value::Object(inner) => {
                for (ik, iv) in inner {
                    out.push((format!("{k}.{ik}"), scalar(iv)));
                }
            }
            Value::Array(items) => {
                if k == "coefficients" {
                    for item in items {
                        let power = item.get("power").and_then(Value::as_u64).unwrap_or(0);
                        let val =
                            item.get("value").and_then(Value::as_str).unwrap_or_default();
                        out.push((format!("t^{power}"), val.to_string()));
                    }
                } else if k == "values" {
                    for item in items {
                        let g = item.get("genus").and_then(Value::as_u64).unwrap_or(0);
                        let d = item.get("degree").and_then(Value::as_u64).unwrap_or(0);
                        let val =
                            item.get("value").and_then(Value::as_str).unwrap_or_default();
                        out.push((format!("g{g}_d{d}"), val.to_string()));
                    }
                } else if k == "graphs" {
                    for (i, item) in items.iter().enumerate() {
                        out.push((format!("graph.{i}"), item.to_string()));
                    }
                } else {
                    out.push((
                        k.clone(),
                        items.iter().map(scalar).collect::<Vec<_>>().join("|"),
                    ));
                }
            }
            other => out.push((k.clone(), scalar(other))),
        }
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
