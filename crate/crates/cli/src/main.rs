use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sft_core::classify::{
    census, default_max_n, depth4_catalog, verify_depth4_with_fallback, CensusReport,
};
use sft_core::criteria::{classify, ClassificationRecord, Verdict};
use sft_core::pattern::io::{parse_pattern_text, to_leafperm_text};
use sft_core::pattern::{hausdorff_dimension, restriction_order, RestrictionTower};
use sft_core::{Error, LeafNumbering, PatternGroup};

/// Writes to stdout, ignoring a closed pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout().lock(), $($arg)*);
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

const EXIT_INPUT: u8 = 2;
const EXIT_UNDECIDED: u8 = 3;
const EXIT_UNSUPPORTED: u8 = 4;
const EXIT_INTERNAL: u8 = 1;

#[derive(Parser)]
#[command(name = "sft", version)]
#[command(
    about = "Decide finiteness and topological finite generation of self-similar groups of finite type"
)]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    /// Numbering of the k^d leaves used by cycle-notation input and output
    #[arg(long, global = true, default_value_t = LeafNumbering::Lex)]
    leaf_numbering: LeafNumbering,

    /// Worker threads (defaults to the available parallelism)
    #[arg(long, global = true, env = "SFT_JOBS")]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the group defined by a pattern-group file
    Analyze {
        file: PathBuf,
        /// Highest restriction level to examine (default d + 4)
        #[arg(long)]
        max_n: Option<usize>,
    },
    /// Enumerate, minimize and classify all binary pattern groups of a depth
    Census {
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        max_n: Option<usize>,
        /// Also write census.json and census.csv into this directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The 32 depth-4 pattern groups P_ijk
    Catalog {
        #[arg(value_enum)]
        which: CatalogName,
        /// Check order, minimality, restriction, transitivity and the
        /// certificate levels of every group
        #[arg(long)]
        verify: bool,
        /// Levels at which both criteria are run
        #[arg(long, value_delimiter = ',', default_values_t = [4, 5, 6])]
        levels: Vec<usize>,
        /// First level expected to carry a finite generation certificate
        #[arg(long, default_value_t = 6)]
        certificate_level: usize,
        /// Write one .patgrp file per group into this directory
        #[arg(long)]
        write: Option<PathBuf>,
    },
    /// Print the minimal pattern group defining the same group
    Minimize { file: PathBuf },
    /// Print the pattern graph
    Graph {
        file: PathBuf,
        /// Graphviz output
        #[arg(long)]
        dot: bool,
    },
    /// Order and generators of the restriction to X^[n]
    Restrict {
        file: PathBuf,
        #[arg(long)]
        level: usize,
    },
    /// Hausdorff dimension of the group
    Hausdorff { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum CatalogName {
    Depth4,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::Domain(_)
            | Error::Structure { .. }
            | Error::Precondition(_) => EXIT_INPUT,
            Error::Unsupported(_) | Error::Resource(_) => EXIT_UNSUPPORTED,
            Error::Internal(_) => EXIT_INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input_failure(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

fn load(path: &Path, numbering: LeafNumbering) -> Result<PatternGroup, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input_failure(format!("cannot read {}: {e}", path.display())))?;
    parse_pattern_text(&text, numbering)
        .map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.global.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(EXIT_INPUT);
        }
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { file, max_n } => {
            let p = load(file, g.leaf_numbering)?;
            let max_n = max_n.unwrap_or(default_max_n(p.depth()));
            if max_n < p.depth() {
                return Err(input_failure(format!(
                    "--max-n {max_n} is below the pattern depth {}",
                    p.depth()
                )));
            }
            let record = classify(&p, max_n)?;
            out!("{}", render_record(&record, g.format));
            Ok(if record.verdict.is_definite() {
                0
            } else {
                EXIT_UNDECIDED
            })
        }
        Command::Census { depth, max_n, out } => {
            let max_n = max_n.unwrap_or(default_max_n(*depth));
            if max_n < *depth {
                return Err(input_failure(format!(
                    "--max-n {max_n} is below the depth {depth}"
                )));
            }
            let report = census(*depth, max_n)?;
            if let Some(dir) = out {
                write_file(&dir.join("census.json"), &report.to_json())?;
                write_file(&dir.join("census.csv"), &report.to_csv())?;
            }
            out!("{}", render_census(&report, g.format));
            Ok(if report.count("Undecided") == 0 {
                0
            } else {
                EXIT_UNDECIDED
            })
        }
        Command::Catalog {
            which: CatalogName::Depth4,
            verify,
            levels,
            certificate_level,
            write,
        } => {
            let catalog = depth4_catalog();
            if let Some(dir) = write {
                fs::create_dir_all(dir)
                    .map_err(|e| input_failure(format!("cannot create {}: {e}", dir.display())))?;
                for e in &catalog {
                    write_file(
                        &dir.join(format!("{}.patgrp", e.label())),
                        &e.file_text(g.leaf_numbering),
                    )?;
                }
            }
            if !verify {
                for e in &catalog {
                    let [a, b, c] = &e.generators;
                    outln!("{}\t{a}\t{b}\t{c}", e.label());
                }
                return Ok(0);
            }
            let reports = verify_depth4_with_fallback(levels, *certificate_level)?;
            let last = reports.last().expect("at least one numbering is tried");
            match g.format {
                Format::Json => outln!("{}", last.to_json()),
                _ => {
                    for r in &reports {
                        outln!(
                            "leaf numbering {}: {}",
                            r.numbering,
                            if r.passed {
                                "all checks passed"
                            } else {
                                "FAILED"
                            }
                        );
                        for line in r.diagnostics() {
                            outln!("  {line}");
                        }
                    }
                    outln!(
                        "fingerprint buckets: {} (at most 20 isomorphism classes expected)",
                        last.bucket_count()
                    );
                    for bucket in &last.fingerprint_buckets {
                        outln!("  {}", bucket.join(" "));
                    }
                }
            }
            Ok(if last.passed { 0 } else { EXIT_INTERNAL })
        }
        Command::Minimize { file } => {
            let p = load(file, g.leaf_numbering)?;
            let q = p.minimize()?.with_small_generators();
            match g.format {
                Format::Json => outln!(
                    "{}",
                    serde_json::json!({
                        "input_order": p.order(),
                        "order": q.order(),
                        "was_minimal": p.order() == q.order(),
                        "generators": q.generators().iter()
                            .map(|x| x.to_leaf_permutation_with(g.leaf_numbering).to_string())
                            .collect::<Vec<_>>(),
                    })
                ),
                _ => out!("{}", to_leafperm_text(&q, g.leaf_numbering)),
            }
            Ok(0)
        }
        Command::Graph { file, dot } => {
            let p = load(file, g.leaf_numbering)?;
            let graph = p.pattern_graph();
            if *dot {
                if graph.vertex_count() > sft_core::pattern::DOT_WARN_VERTICES {
                    eprintln!(
                        "warning: the pattern graph has {} vertices",
                        graph.vertex_count()
                    );
                }
                out!("{}", graph.to_dot(&p));
            } else {
                let summary = serde_json::json!({
                    "vertices": graph.vertex_count(),
                    "arcs": graph.arc_count(),
                    "full_out_degree": graph.has_full_out_degree(),
                    "regular_out_degree": graph.regular_out_degree(),
                });
                match g.format {
                    Format::Json => outln!("{summary}"),
                    _ => outln!(
                        "vertices {}\narcs {}\nminimal {}\nout-degree {}",
                        graph.vertex_count(),
                        graph.arc_count(),
                        graph.has_full_out_degree(),
                        graph
                            .regular_out_degree()
                            .map(|m| m.to_string())
                            .unwrap_or_else(|| "irregular".into())
                    ),
                }
            }
            Ok(0)
        }
        Command::Restrict { file, level } => {
            let p = load(file, g.leaf_numbering)?.minimize()?;
            let tower = RestrictionTower::new(&p)?;
            let group = tower.restriction_group(*level)?;
            let formula = restriction_order(&p, *level)?;
            let gens: Vec<String> = group.generators().iter().map(ToString::to_string).collect();
            match g.format {
                Format::Json => outln!(
                    "{}",
                    serde_json::json!({
                        "level": level,
                        "order": group.order().to_string(),
                        "formula": formula.to_string(),
                        "generators": gens,
                    })
                ),
                _ => {
                    outln!("order {}", group.order());
                    outln!("formula {formula}");
                    for s in gens {
                        outln!("{s}");
                    }
                }
            }
            Ok(0)
        }
        Command::Hausdorff { file } => {
            let p = load(file, g.leaf_numbering)?.minimize()?;
            let dim = hausdorff_dimension(&p)?;
            match g.format {
                Format::Json => outln!("{}", serde_json::to_string(&dim).expect("serializes")),
                _ => outln!("{dim}"),
            }
            Ok(0)
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| input_failure(format!("cannot write {}: {e}", path.display())))
}

fn render_record(r: &ClassificationRecord, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", r.to_json()),
        Format::Csv => {
            let mut s = String::from("order,m,verdict,witness_level,level_transitive\n");
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                r.order_formula.p,
                r.order_formula.m,
                r.verdict.name(),
                r.witness_level.map(|n| n.to_string()).unwrap_or_default(),
                r.level_transitive
                    .map(|t| t.to_string())
                    .unwrap_or_default()
            );
            s
        }
        Format::Human => {
            let mut s = String::new();
            let _ = writeln!(s, "alphabet {}, depth {}", r.alphabet, r.depth);
            let _ = writeln!(
                s,
                "|P| = {} (input {}), m = |St_P(d-1)| = {}",
                r.order_formula.p, r.input_order, r.order_formula.m
            );
            let verdict = match &r.verdict {
                Verdict::Trivial => "trivial".to_string(),
                Verdict::Finite { order } => format!(
                    "finite of order {order}{}",
                    r.isomorphism_type
                        .as_ref()
                        .map(|t| format!(", isomorphic to {t}"))
                        .unwrap_or_default()
                ),
                Verdict::NotFinitelyGenerated { level, witness } => format!(
                    "not topologically finitely generated (witness at level {level}: {})",
                    witness.element
                ),
                Verdict::FinitelyGenerated { level, .. } => {
                    format!("topologically finitely generated (certificate at level {level})")
                }
                Verdict::Undecided { bound } => format!("undecided up to level {bound}"),
            };
            let _ = writeln!(s, "verdict: {verdict}");
            if let Some(t) = r.level_transitive {
                let _ = writeln!(s, "level-transitive: {t}");
            }
            if let Some(h) = &r.hausdorff_dimension {
                let _ = writeln!(s, "Hausdorff dimension: {h}");
            }
            s
        }
    }
}

fn render_census(r: &CensusReport, format: Format) -> String {
    match format {
        Format::Json => format!("{}\n", r.to_json()),
        Format::Csv => r.to_csv(),
        Format::Human => {
            let mut s = String::new();
            let _ = writeln!(s, "depth {}, levels up to {}", r.depth, r.max_n);
            let _ = writeln!(s, "subgroups {}", r.subgroup_count);
            let _ = writeln!(s, "minimal pattern groups {}", r.minimal_count);
            for (v, c) in &r.verdicts {
                let levels = r
                    .witness_levels
                    .get(v)
                    .map(|m| {
                        let parts: Vec<String> =
                            m.iter().map(|(n, c)| format!("{c} at n={n}")).collect();
                        format!(" ({})", parts.join(", "))
                    })
                    .unwrap_or_default();
                let _ = writeln!(s, "{v} {c}{levels}");
            }
            for (t, c) in &r.finite_types {
                let _ = writeln!(s, "  finite {t}: {c}");
            }
            s
        }
    }
}
