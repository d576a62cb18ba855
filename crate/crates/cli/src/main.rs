use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use matro::catalog::{generate_representatives, labeled_catalog, Catalog};
use matro::constructions::{figure2_example, spanning_circuit_counterexample};
use matro::order::{clone_pairs, find_rp_weak_map, freer_than, FreerWitness};
use matro::tutte::{format_rational, parse_rational, tutte_delcon, tutte_subset_expansion, Sign};
use matro::verify::{default_grid, parse_grid, run_suite, GridPoint, Suite, SuiteInput, VerificationReport};
use matro::{parse_matroid, write_matroid, Matroid, ParseError, TutteCache};

#[derive(Parser)]
#[command(name = "matro", version, about = "Exact matroid computations and weak-order verification")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file holds a valid matroid.
    Validate { file: String },
    /// Print the Tutte polynomial's coefficient matrix and its values at points.
    Tutte {
        file: String,
        /// An evaluation point `X Y` (rationals `p/q` or integers); repeatable.
        #[arg(long = "at", num_args = 2, value_names = ["X", "Y"], action = clap::ArgAction::Append)]
        at: Vec<String>,
        #[arg(long, value_enum, default_value_t = Method::Delcon)]
        method: Method,
    },
    /// Compare two matroids' Tutte polynomials over a grid.
    Compare {
        first: String,
        second: String,
        /// `default` or a file of `x y` lines.
        #[arg(long, default_value = "default")]
        grid: String,
    },
    /// Decide whether element `f` is freer than `g`.
    Freer { file: String, f: usize, g: usize },
    /// List all clone pairs.
    Clones { file: String },
    /// Print a named example with its element labels.
    Examples {
        #[arg(value_enum)]
        name: Example,
    },
    /// Generate a catalog of matroids on `n` elements.
    Catalog {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Repr)]
        mode: Mode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites over the catalogs.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value = "default")]
        grid: String,
        #[arg(long, default_value_t = matro::verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Delcon,
    Subset,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Figure2,
    Counterexample,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Labeled,
    Repr,
}

/// Exit 1: a check failed. Exit 2: bad input or usage.
enum Failure {
    Check(String),
    Usage(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    }
    Ok(text)
}

fn describe(e: &ParseError) -> String {
    match e {
        ParseError::Invalid { line, source } => format!("line {line}: {}: {source}", source.kind()),
        other => other.to_string(),
    }
}

fn load_matroid(path: &str) -> Result<Matroid, Failure> {
    parse_matroid(&read_input(path)?).map_err(|e| Failure::Usage(format!("{path}: {}", describe(&e))))
}

fn cache() -> TutteCache {
    match std::env::var_os("MATRO_CACHE_DIR").filter(|d| !d.is_empty()) {
        None => TutteCache::new(),
        Some(dir) => TutteCache::with_dir(&dir).unwrap_or_else(|e| {
            eprintln!("warning: cache directory {}: {e}; using memory only", dir.to_string_lossy());
            TutteCache::new()
        }),
    }
}

fn load_grid(spec: &str) -> Result<Vec<GridPoint>, Failure> {
    if spec == "default" {
        return Ok(default_grid());
    }
    parse_grid(&read_input(spec)?).map_err(|e| Failure::Usage(format!("{spec}: {e}")))
}

fn run(command: Command) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Validate { file } => {
            let m = load_matroid(&file)?;
            writeln!(out, "valid: n={} r={} bases={}", m.n(), m.rank(), m.num_bases())?;
        }
        Command::Tutte { file, at, method } => {
            let m = load_matroid(&file)?;
            let mut points = Vec::new();
            for pair in at.chunks(2) {
                let parse = |s: &str| parse_rational(s).map_err(|e| Failure::Usage(format!("--at {s}: {e}")));
                points.push((parse(&pair[0])?, parse(&pair[1])?));
            }
            let t = match method {
                Method::Delcon => tutte_delcon(&m, &cache()),
                Method::Subset => tutte_subset_expansion(&m),
                Method::Both => {
                    let (a, b) = (tutte_delcon(&m, &cache()), tutte_subset_expansion(&m));
                    if a != b {
                        return Err(Failure::Check(format!(
                            "methods disagree:\ndeletion-contraction: {a}\nsubset expansion: {b}"
                        )));
                    }
                    a
                }
            };
            write!(out, "{}", t.matrix_text())?;
            for (x, y) in &points {
                let v = t.evaluate(x, y);
                writeln!(out, "T({}, {}) = {}", format_rational(x), format_rational(y), format_rational(&v))?;
            }
        }
        Command::Compare { first, second, grid } => {
            let (m, n) = (load_matroid(&first)?, load_matroid(&second)?);
            let grid = load_grid(&grid)?;
            let cache = cache();
            let (tm, tn) = (tutte_delcon(&m, &cache), tutte_delcon(&n, &cache));
            writeln!(out, "# isomorphic: {}", m.is_isomorphic(&n))?;
            let weak = (m.n() == n.n()).then(|| find_rp_weak_map(&m, &n).ok().flatten()).flatten();
            match weak {
                Some(phi) => writeln!(out, "# rank-preserving weak map: {:?}", phi.forward())?,
                None => writeln!(out, "# rank-preserving weak map: none")?,
            }
            writeln!(out, "# x y T(M) T(N) sign side")?;
            for p in &grid {
                let (a, b) = (tm.evaluate(p.x(), p.y()), tn.evaluate(p.x(), p.y()));
                let sign = Sign::of(&(&a - &b));
                let [x, y] = p.label();
                writeln!(out, "{x} {y} {} {} {sign} {}", format_rational(&a), format_rational(&b), p.side())?;
            }
        }
        Command::Freer { file, f, g } => {
            let m = load_matroid(&file)?;
            match freer_than(&m, f, g).map_err(|e| Failure::Usage(e.to_string()))? {
                FreerWitness::Freer => writeln!(out, "freer")?,
                FreerWitness::NotFreer(z) => writeln!(out, "not freer: cyclic flat {{{z}}} contains {f} but not {g}")?,
            }
        }
        Command::Clones { file } => {
            let m = load_matroid(&file)?;
            for (a, b) in clone_pairs(&m) {
                writeln!(out, "{a} {b}")?;
            }
        }
        Command::Examples { name } => {
            let ex = match name {
                Example::Figure2 => figure2_example(),
                Example::Counterexample => spanning_circuit_counterexample(),
            };
            writeln!(out, "# labels: {}", ex.labels_json())?;
            write!(out, "{}", write_matroid(&ex.matroid))?;
        }
        Command::Catalog { n, mode, out: path } => {
            let catalog: Catalog = match mode {
                Mode::Labeled => labeled_catalog(n),
                Mode::Repr => generate_representatives(n),
            }
            .map_err(|e| Failure::Usage(e.to_string()))?;
            match path {
                Some(p) => catalog.save(&p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
                None => write!(out, "{}", catalog.to_text())?,
            }
        }
        Command::Verify { suite, n, grid, seed, report } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse().map_err(|e: matro::verify::VerifyError| Failure::Usage(e.to_string()))?]
            };
            let grid = load_grid(&grid)?;
            let input = SuiteInput::with_cache(n, grid, seed, cache()).map_err(|e| Failure::Usage(e.to_string()))?;
            let reports: Vec<VerificationReport> = suites
                .iter()
                .map(|&s| {
                    let r = run_suite(s, &input);
                    eprintln!(
                        "{} {}: n={} instances={} failures={} ({} ms)",
                        if r.passed() { "PASS" } else { "FAIL" },
                        r.suite,
                        r.n,
                        r.instances,
                        r.failures.len(),
                        r.elapsed_ms
                    );
                    r
                })
                .collect();
            let json = if suite == "all" {
                serde_json::to_string_pretty(&reports).expect("reports serialize")
            } else {
                reports[0].to_json()
            };
            match report {
                Some(p) => fs::write(&p, json + "\n").map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
                None => writeln!(out, "{json}")?,
            }
            let failed: usize = reports.iter().map(|r| r.failures.len()).sum();
            if failed > 0 {
                return Err(Failure::Check(format!("verification failed: {failed} failing checks")));
            }
        }
    }
    Ok(())
}
