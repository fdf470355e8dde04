//! `superzono`: command-line front end.
//!
//! Every subcommand builds a JSON report; `--format text` renders a short
//! human summary instead. The exit code is 0 when all requested checks pass,
//! 1 when a check fails (a failure record is written to stderr), and 2 on
//! input errors. Set `RAYON_NUM_THREADS` to bound the worker pool.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use superzono::arrangement::Arrangement;
use superzono::inverse_basis::{build_family, verify_basis};
use superzono::invariants::{
    conjecture_internal_check, doubled_region_count, fvector_generic, hilbert_via_recursion, hilbert_via_tutte,
    logconcavity_check, top_summand_check,
};
use superzono::io::{canonical_json, parse_edges, read_arrangement};
use superzono::matroid::{all_activities, tutte, TutteMethod};
use superzono::perp::hilbert_via_perp;
use superzono::{corpus, BigradedSeries, Error};

#[derive(Parser)]
#[command(name = "superzono", version, about = "Superspace zonotopal algebras of hyperplane arrangements")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized runs (`survey`).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Include wall-clock time in the report (makes output nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TutteArg {
    SubsetSum,
    Delcon,
    Activity,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HilbertArg {
    Perp,
    Tutte,
    Recursion,
    All,
}

#[derive(Subcommand)]
enum Command {
    /// Tutte polynomial.
    Tutte {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = TutteArg::SubsetSum)]
        method: TutteArg,
    },
    /// Bigraded Hilbert series of the inverse system.
    Hilbert {
        file: PathBuf,
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        k: i32,
        #[arg(long, value_enum, default_value_t = HilbertArg::Perp)]
        method: HilbertArg,
    },
    /// The activity basis, grouped by source basis and bidegree.
    Basis {
        file: PathBuf,
        #[arg(long)]
        verify: bool,
    },
    /// Internal and external activities of every basis.
    Activities { file: PathBuf },
    /// Face numbers of a generic deformation.
    Fvector { file: PathBuf },
    /// Region count of a generic deformation, or of the doubled one.
    Regions {
        file: PathBuf,
        #[arg(long)]
        doubled: bool,
    },
    /// Top-degree part of the series against the characteristic polynomial.
    TopCheck { file: PathBuf },
    /// Log-concavity of rows, columns and diagonals of the series.
    Logconcavity { file: PathBuf },
    /// Internal (k = 0) series against the conjectured Tutte formula.
    Conjecture { file: PathBuf },
    /// Emit the arrangement file of a graph.
    Graph {
        /// Edges as `u-v` pairs, comma separated, vertices from 1.
        #[arg(long, allow_hyphen_values = true)]
        edges: String,
        /// Number of vertices; defaults to the largest vertex mentioned.
        #[arg(long)]
        vertices: Option<usize>,
    },
    /// Three-way Hilbert series agreement on a seeded random corpus.
    Survey {
        #[arg(long, default_value_t = 20)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        max_m: usize,
    },
}

struct Outcome {
    report: Value,
    text: String,
    failures: Vec<String>,
}

impl Outcome {
    fn ok(report: Value, text: String) -> Self {
        Outcome { report, text, failures: Vec::new() }
    }
}

fn series_json(s: &BigradedSeries) -> Value {
    json!({ "terms": s, "display": s.to_string() })
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn load(path: &Path) -> Result<Arrangement, Error> {
    read_arrangement(path).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn run(cmd: &Command, seed: u64) -> Result<Outcome, Box<dyn std::error::Error>> {
    Ok(match cmd {
        Command::Tutte { file, method } => {
            let a = load(file)?;
            let methods: Vec<TutteMethod> = match method {
                TutteArg::SubsetSum => vec![TutteMethod::SubsetSum],
                TutteArg::Delcon => vec![TutteMethod::DeletionContraction],
                TutteArg::Activity => vec![TutteMethod::Activity],
                TutteArg::All => TutteMethod::ALL.to_vec(),
            };
            let results: Vec<_> = methods.iter().map(|&m| (m.name(), tutte(&a, m))).collect();
            let agree = results.windows(2).all(|w| w[0].1 == w[1].1);
            let mut text: Vec<String> = results.iter().map(|(n, t)| format!("{n}: {t}")).collect();
            if results.len() == 1 {
                text = vec![results[0].1.to_string()];
            } else {
                text.push(if agree { "AGREE" } else { "DISAGREE" }.into());
            }
            let report = json!({
                "command": "tutte",
                "results": results.iter().map(|(n, t)| json!({"method": n, "tutte": t, "display": t.to_string()})).collect::<Vec<_>>(),
                "agree": agree,
            });
            let failures = if agree { vec![] } else { vec!["Tutte methods disagree".into()] };
            Outcome { report, text: text.join("\n"), failures }
        }
        Command::Hilbert { file, k, method } => {
            let a = load(file)?;
            if *method != HilbertArg::Perp && *k != 1 {
                return Err(format!("--method tutte, recursion and all require k = 1, got k = {k}").into());
            }
            let mut results = Vec::new();
            if matches!(method, HilbertArg::Perp | HilbertArg::All) {
                results.push(("perp", hilbert_via_perp(&a, *k)?));
            }
            if matches!(method, HilbertArg::Tutte | HilbertArg::All) {
                results.push(("tutte", hilbert_via_tutte(&a)));
            }
            if matches!(method, HilbertArg::Recursion | HilbertArg::All) {
                results.push(("recursion", hilbert_via_recursion(&a)));
            }
            let agree = results.windows(2).all(|w| w[0].1 == w[1].1);
            let mut text: Vec<String> = results.iter().map(|(n, s)| format!("{n}: {s}")).collect();
            if results.len() > 1 {
                text.push(if agree { "AGREE" } else { "DISAGREE" }.into());
            } else {
                text = vec![results[0].1.to_string()];
            }
            let report = json!({
                "command": "hilbert",
                "k": k,
                "results": results.iter().map(|(n, s)| json!({"method": n, "series": series_json(s)})).collect::<Vec<_>>(),
                "agree": agree,
            });
            let failures = if agree { vec![] } else { vec!["Hilbert series methods disagree".into()] };
            Outcome { report, text: text.join("\n"), failures }
        }
        Command::Basis { file, verify } => {
            let a = load(file)?;
            let family = build_family(&a);
            let mut groups = Vec::new();
            let mut text = vec![format!("{} elements", family.len())];
            for (d, e) in &family.elements {
                let bd = d.bidegree();
                groups.push(json!({
                    "source_basis": one_based(&d.source_basis),
                    "e": one_based(&d.e), "i": one_based(&d.i), "s": one_based(&d.s), "t": one_based(&d.t),
                    "bidegree": bd,
                    "terms": e.to_records(),
                }));
                text.push(format!("B={:?} {bd}: {e}", one_based(&d.source_basis)));
            }
            let mut report = json!({ "command": "basis", "cardinality": family.len(), "elements": groups });
            let mut failures = Vec::new();
            if *verify {
                let v = verify_basis(&a);
                for c in &v.checks {
                    text.push(format!("{}: {}", c.name, if c.passed { "pass" } else { "FAIL" }));
                    if !c.passed {
                        failures.push(format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()));
                    }
                }
                report["verification"] = json!(v);
            }
            Outcome { report, text: text.join("\n"), failures }
        }
        Command::Activities { file } => {
            let a = load(file)?;
            let recs = all_activities(&a);
            let rows: Vec<Value> = recs
                .iter()
                .map(|r| {
                    json!({
                        "basis": one_based(&r.basis),
                        "EA": one_based(&r.externally_active),
                        "EP": one_based(&r.externally_passive),
                        "IA": one_based(&r.internally_active),
                        "IP": one_based(&r.internally_passive),
                    })
                })
                .collect();
            let text = recs
                .iter()
                .map(|r| {
                    format!(
                        "B={:?} EA={:?} EP={:?} IA={:?} IP={:?}",
                        one_based(&r.basis),
                        one_based(&r.externally_active),
                        one_based(&r.externally_passive),
                        one_based(&r.internally_active),
                        one_based(&r.internally_passive)
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            Outcome::ok(json!({ "command": "activities", "bases": rows }), text)
        }
        Command::Fvector { file } => {
            let a = load(file)?;
            let f = fvector_generic(&a);
            let text = format!("f = {:?}", f.counts);
            Outcome::ok(json!({ "command": "fvector", "fvector": f.counts, "total": f.total() }), text)
        }
        Command::Regions { file, doubled } => {
            let a = load(file)?;
            if *doubled {
                let rep = doubled_region_count(&a);
                let text = format!(
                    "Hilb(1,1) = {}, independent sets of doubled = {}, series identity {}",
                    rep.dimension,
                    rep.doubled_independent_sets,
                    if rep.series_identity { "holds" } else { "FAILS" }
                );
                let mut failures = Vec::new();
                if !(rep.equal && rep.series_identity) {
                    failures.push("doubled region count mismatch".into());
                }
                Outcome { report: json!({ "command": "regions", "doubled": rep }), text, failures }
            } else {
                let f = fvector_generic(&a);
                let regions = f.counts[a.dim()];
                Outcome::ok(json!({ "command": "regions", "regions": regions }), format!("{regions} regions"))
            }
        }
        Command::TopCheck { file } => {
            let a = load(file)?;
            let rep = top_summand_check(&a, &hilbert_via_perp(&a, 1)?);
            let text = format!("extracted: {}\npredicted: {}\n{}", rep.extracted, rep.predicted, if rep.equal { "AGREE" } else { "DISAGREE" });
            let failures = if rep.equal { vec![] } else { vec!["top summand mismatch".into()] };
            Outcome { report: json!({ "command": "top-check", "report": rep }), text, failures }
        }
        Command::Logconcavity { file } => {
            let a = load(file)?;
            let rep = logconcavity_check(&hilbert_via_perp(&a, 1)?);
            let text = if rep.passed() {
                format!("log-concave ({} sequences)", rep.sequences_checked)
            } else {
                rep.violations.join("\n")
            };
            Outcome { report: json!({ "command": "logconcavity", "report": rep }), text, failures: rep.violations.clone() }
        }
        Command::Conjecture { file } => {
            let a = load(file)?;
            let rep = conjecture_internal_check(&a);
            let mut text = format!("k = 0 series: {}\nformula:      {}\n{}", rep.lhs, rep.rhs, if rep.equal { "AGREE" } else { "DISAGREE" });
            if let Some(ok) = rep.essentialized_equal {
                text.push_str(&format!("\nnot essential; essentialization {}", if ok { "agrees" } else { "disagrees" }));
            }
            let report = json!({
                "command": "conjecture",
                "lhs": series_json(&rep.lhs),
                "rhs": series_json(&rep.rhs),
                "equal": rep.equal,
                "essential": rep.essential,
                "essentialized_equal": rep.essentialized_equal,
            });
            Outcome::ok(report, text)
        }
        Command::Graph { edges, vertices } => {
            let edges = parse_edges(edges)?;
            let n = vertices.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(1));
            let a = Arrangement::from_graph(&edges, n)?;
            let text = canonical_json(&a);
            Outcome::ok(serde_json::from_str(&text).expect("canonical JSON parses"), text)
        }
        Command::Survey { count, max_m } => {
            let arrs = corpus::corpus(seed, *count, *max_m);
            let mut failures = Vec::new();
            for (idx, a) in arrs.iter().enumerate() {
                let p = hilbert_via_perp(a, 1)?;
                if p != hilbert_via_tutte(a) || p != hilbert_via_recursion(a) {
                    failures.push(format!("#{idx}: {}", canonical_json(a)));
                }
            }
            let text = format!("{} of {count} arrangements agree", count - failures.len());
            Outcome { report: json!({ "command": "survey", "seed": seed, "count": count, "disagreements": failures }), text, failures }
        }
    })
}

fn emit(cli: &Cli, body: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, format!("{body}\n")),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{body}") {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => other,
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match run(&cli.command, cli.seed) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{}", json!({ "status": "error", "message": e.to_string() }));
            return ExitCode::from(2);
        }
    };
    let Outcome { mut report, text, failures } = outcome;
    if cli.timing {
        report["timing_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    let body = match cli.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize"),
        Format::Text if cli.timing => format!("{text}\n({} ms)", start.elapsed().as_millis()),
        Format::Text => text,
    };
    if let Err(e) = emit(&cli, &body) {
        eprintln!("{}", json!({ "status": "error", "message": e.to_string() }));
        return ExitCode::from(2);
    }
    if failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("{}", json!({ "status": "fail", "failures": failures }));
        ExitCode::from(1)
    }
}
