use std::fs;
use std::io::{self, BufReader, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use defcolor::certificate::{reduction_claim, Certificate, ChargeAudit, Claim};
use defcolor::coloring::{is_critical, solve, CapacityMap, CapacitySpec, Coloring};
use defcolor::enumerate::random_graph;
use defcolor::graph6::read_graph6_lines;
use defcolor::potential::{min_potential, SubsetFilter};
use defcolor::proof_colorer::proof_guided_solve;
use defcolor::survey::{run_survey_with_threads, SurveyCheck, SurveyConfig};
use defcolor::{mad, write_graph6, Error, Graph, VertexSet};

const EXIT_OK: u8 = 0;
const EXIT_INTERNAL: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_NEGATIVE: u8 = 10;

/// Exact defective 2-coloring toolkit. Certificates are written as JSON.
///
/// Exit codes: 0 success or colorable, 10 uncolorable or violation found,
/// 2 input error.
#[derive(Parser, Debug)]
#[command(name = "defcolor", version)]
struct Cli {
    /// Re-check a certificate file (`-` for stdin) instead of running a command.
    #[arg(long, value_name = "FILE")]
    verify_certificate: Option<String>,

    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Worker threads for parallel commands (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(clap::Args, Debug)]
struct Input {
    /// graph6 file with a single graph, or `-` for stdin.
    #[arg(long, default_value = "-")]
    graph: String,

    /// Capacities: JSON (`{"uniform":[1,3]}`, `{"per_vertex":[[1,3],...]}`)
    /// or `uniform:J,K`.
    #[arg(long, default_value = "uniform:1,3")]
    caps: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Engine {
    /// Backtracking search.
    Exact,
    /// Quasi-edge extraction with exact fallback.
    Proof,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Filter {
    All,
    Proper,
    Nontrivial,
}

impl From<Filter> for SubsetFilter {
    fn from(f: Filter) -> SubsetFilter {
        match f {
            Filter::All => SubsetFilter::AllNonempty,
            Filter::Proper => SubsetFilter::ProperNonempty,
            Filter::Nontrivial => SubsetFilter::Nontrivial,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide colorability; emits a coloring or unsat certificate.
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Engine::Exact)]
        engine: Engine,
    },
    /// Test criticality; exit 0 when critical, 10 otherwise.
    Critical {
        #[command(flatten)]
        input: Input,
    },
    /// Check a statement over all connected graphs up to `max-n` vertices.
    Survey {
        #[arg(long)]
        max_n: usize,
        /// th0, th0critical, potential-th1 or proof-colorer.
        #[arg(long, value_parser = parse_check)]
        check: SurveyCheck,
        /// Include a verified coloring for every eligible graph.
        #[arg(long)]
        keep_witnesses: bool,
    },
    /// Minimum potential over a family of vertex subsets.
    Potential {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Filter::All)]
        filter: Filter,
    },
    /// Maximum average degree with a densest subset.
    Mad {
        #[command(flatten)]
        input: Input,
    },
    /// Charges before and after discharging, plus forbidden configurations.
    Audit {
        #[command(flatten)]
        input: Input,
    },
    /// Collapse a colored vertex set into its gadget.
    Reduce {
        #[command(flatten)]
        input: Input,
        /// Comma-separated vertex ids.
        #[arg(long)]
        set: String,
        /// Colors (1 or 2) of the set members in increasing id order;
        /// found by the solver when omitted.
        #[arg(long)]
        phi: Option<String>,
    },
    /// Print a G(n,p) graph in graph6, drawn with `--seed`.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
}

fn parse_check(s: &str) -> Result<SurveyCheck, String> {
    SurveyCheck::parse(s).map_err(|e| e.to_string())
}

/// Bad user input; mapped to exit code 2.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(InputError(msg.into()))
}

fn is_input_error(e: &anyhow::Error) -> bool {
    if e.downcast_ref::<InputError>().is_some() {
        return true;
    }
    matches!(
        e.downcast_ref::<Error>(),
        Some(
            Error::TooManyVertices { .. }
                | Error::VertexOutOfRange { .. }
                | Error::SelfLoop(_)
                | Error::DuplicateEdge(..)
                | Error::Graph6(_)
                | Error::Capacity(_)
                | Error::Coloring(_)
                | Error::Precondition(_)
                | Error::EmptySearchSpace(_)
                | Error::TooLarge(_)
                | Error::InvalidArgument(_)
        )
    )
}

fn read_source(path: &str) -> anyhow::Result<String> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text).map_err(|e| input_err(format!("reading stdin: {e}")))?;
    } else {
        text = fs::read_to_string(path).map_err(|e| input_err(format!("reading {path}: {e}")))?;
    }
    Ok(text)
}

impl Input {
    fn load(&self) -> anyhow::Result<(Graph, CapacityMap)> {
        let text = read_source(&self.graph)?;
        let mut graphs = read_graph6_lines(BufReader::new(text.as_bytes()))?;
        if graphs.len() != 1 {
            return Err(input_err(format!("expected exactly one graph6 line, found {}", graphs.len())));
        }
        let g = graphs.pop().expect("one graph");
        let c = CapacitySpec::parse(&self.caps)?.resolve(g.n())?;
        Ok((g, c))
    }
}

fn parse_list<T>(text: &str, what: &str, f: impl Fn(&str) -> Option<T>) -> anyhow::Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| f(s).ok_or_else(|| input_err(format!("bad {what} entry {s:?}"))))
        .collect()
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let out = cli.out.as_deref();
    if let Some(path) = &cli.verify_certificate {
        let cert = Certificate::from_json(&read_source(path)?).map_err(|e| input_err(e.to_string()))?;
        return Ok(match cert.verify() {
            Ok(()) => {
                eprintln!("certificate ({}) verified", cert.claim.kind());
                EXIT_OK
            }
            Err(e) => {
                eprintln!("certificate ({}) rejected: {e}", cert.claim.kind());
                EXIT_NEGATIVE
            }
        });
    }
    let Some(command) = cli.command else {
        return Err(input_err("no command given (see --help)"));
    };
    let (cert, code) = match command {
        Command::Solve { input, engine } => {
            let (g, c) = input.load()?;
            let claim = match engine {
                Engine::Exact => match solve(&g, &c)? {
                    Some(coloring) => Claim::Coloring { coloring, trace: None },
                    None => Claim::Unsat { trace: None },
                },
                Engine::Proof => {
                    let outcome = proof_guided_solve(&g, &c)?;
                    let trace = Some(outcome.trace);
                    match outcome.coloring {
                        Some(coloring) => Claim::Coloring { coloring, trace },
                        None => Claim::Unsat { trace },
                    }
                }
            };
            let code = if matches!(claim, Claim::Unsat { .. }) { EXIT_NEGATIVE } else { EXIT_OK };
            eprintln!("{}", if code == EXIT_OK { "SAT" } else { "UNSAT" });
            (Certificate::new(&g, &c, claim)?, code)
        }
        Command::Critical { input } => {
            let (g, c) = input.load()?;
            let crit = is_critical(&g, &c)?;
            let code = if crit.critical { EXIT_OK } else { EXIT_NEGATIVE };
            (Certificate::new(&g, &c, Claim::Critical { critical: crit.critical, evidence: crit.evidence })?, code)
        }
        Command::Survey { max_n, check, keep_witnesses } => {
            let config = SurveyConfig { max_n, check, keep_witnesses };
            let threads = cli.threads.unwrap_or(0);
            let report = run_survey_with_threads(&config, threads)?;
            for l in &report.levels {
                eprintln!("n={} graphs={} eligible={} passed={}", l.n, l.graphs, l.eligible, l.passed);
            }
            if let Some(rate) = report.extraction_rate() {
                eprintln!("extraction rate {:.4}", rate);
            }
            eprintln!("violations: {}", report.violations.len());
            let code = if report.violations.is_empty() { EXIT_OK } else { EXIT_NEGATIVE };
            (Certificate::for_survey(report)?, code)
        }
        Command::Potential { input, filter } => {
            let (g, c) = input.load()?;
            let filter = SubsetFilter::from(filter);
            let (value, witness) = min_potential(&g, &c, filter)?;
            eprintln!("minimum potential {value} at {witness}");
            (Certificate::new(&g, &c, Claim::LowPotentialSet { filter, value, witness })?, EXIT_OK)
        }
        Command::Mad { input } => {
            let (g, c) = input.load()?;
            let (value, witness) = mad(&g)?;
            eprintln!("mad {value} at {witness}");
            (Certificate::new(&g, &c, Claim::DensityWitness { mad: value, witness })?, EXIT_OK)
        }
        Command::Audit { input } => {
            let (g, c) = input.load()?;
            let audit = ChargeAudit::compute(&g, &c)?;
            eprintln!("conserved: {}, findings: {}", audit.conserved, audit.findings.len());
            (Certificate::new(&g, &c, Claim::ChargeAudit(audit))?, EXIT_OK)
        }
        Command::Reduce { input, set, phi } => {
            let (g, c) = input.load()?;
            let members = parse_list(&set, "set", |s| s.parse::<usize>().ok())?;
            if let Some(&v) = members.iter().find(|&&v| v >= g.n()) {
                return Err(input_err(format!("vertex {v} out of range for n = {}", g.n())));
            }
            let s = VertexSet::from_vertices(members);
            let phi = match phi {
                Some(text) => {
                    let digits = parse_list(&text, "phi", |s| s.parse::<u8>().ok())?;
                    Coloring::from_digits(&digits)?
                }
                None => {
                    let (h, keep) = g.induced(s);
                    solve(&h, &c.restrict(&keep))?.ok_or_else(|| input_err("the set has no valid coloring"))?
                }
            };
            let claim = reduction_claim(&g, &c, s, &phi)?;
            eprintln!("case {}", claim.case.number());
            (Certificate::new(&g, &c, Claim::Reduction(claim))?, EXIT_OK)
        }
        Command::Random { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(input_err(format!("p must lie in [0,1], got {p}")));
            }
            emit(out, &write_graph6(&random_graph(n, p, cli.seed)?)?)?;
            return Ok(EXIT_OK);
        }
    };
    emit(out, &cert.to_json()?)?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if is_input_error(&e) { EXIT_INPUT } else { EXIT_INTERNAL };
            ExitCode::from(code)
        }
    }
}

