use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use rhf::algebra::{lens, LensSpec};
use rhf::analysis::suites::{self, SuiteReport};
use rhf::analysis::{count_map, path_ledger, Grid, Verdict};
use rhf::export;
use rhf::zeros::find_zeros_in;
use rhf::{CriticalStructure, RationalFn, ShiftedFunction, Tolerances};

mod parse;

/// Critical curves, caustics and zeros of f(z) = r(z) - conj(z) - eta.
#[derive(Parser, Debug)]
#[command(name = "rhf", version)]
struct Cli {
    /// Tolerance profile: `default` or `fast`.
    #[arg(long, global = true, env = "RHF_TOLERANCE_PROFILE", default_value = "default")]
    profile: String,
    /// Residual tolerance for accepting zeros.
    #[arg(long, global = true, allow_hyphen_values = true)]
    tol_res: Option<f64>,
    /// Jacobian band in which zeros count as singular.
    #[arg(long, global = true, allow_hyphen_values = true)]
    tol_singular: Option<f64>,
    /// Number of grid angles when tracing critical curves.
    #[arg(long, global = true)]
    theta_steps: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct LensArgs {
    /// Built-in lens: `mpw`, `second` or `quadratic`.
    #[arg(long)]
    lens: Option<String>,
    /// Number of masses for `mpw`.
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Ring radius for `mpw`.
    #[arg(long, default_value_t = 0.6)]
    rho: f64,
    /// JSON lens specification.
    #[arg(long, conflicts_with = "lens")]
    input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Zero census at one shift.
    Zeros {
        #[command(flatten)]
        lens: LensArgs,
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        eta: Complex64,
        /// Write the census JSON here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Critical curves with cusp markers.
    Critical {
        #[command(flatten)]
        lens: LensArgs,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Caustics with cusp markers.
    Caustics {
        #[command(flatten)]
        lens: LensArgs,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Crossings of a polygonal shift path with the caustics, with observed
    /// count changes.
    Crossing {
        #[command(flatten)]
        lens: LensArgs,
        /// Comma-separated vertices, e.g. `-1+0i,0.1+0.05i`.
        #[arg(long, value_parser = parse::complex_list, allow_hyphen_values = true)]
        path: parse::Vertices,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Zero counts over a grid of shifts.
    Sweep {
        #[command(flatten)]
        lens: LensArgs,
        /// `re_min,re_max,im_min,im_max`; defaults to the padded caustic box.
        #[arg(long, value_parser = parse::rect, allow_hyphen_values = true)]
        rect: Option<[f64; 4]>,
        #[arg(long, default_value_t = 100)]
        nx: usize,
        #[arg(long, default_value_t = 100)]
        ny: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Verification suites with pass/fail/inconclusive verdicts.
    Verify {
        #[command(flatten)]
        lens: LensArgs,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Fold points, shift pairs and circles per suite.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Shift modulus for the large-shift suite.
        #[arg(long, default_value_t = 1e3)]
        magnitude: f64,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// SVG figure of curves, caustics, poles and (optionally) zeros.
    Plot {
        #[command(flatten)]
        lens: LensArgs,
        #[arg(long, value_parser = parse::complex, allow_hyphen_values = true)]
        eta: Option<Complex64>,
        /// Shift path drawn dotted.
        #[arg(long, value_parser = parse::complex_list, allow_hyphen_values = true)]
        path: Option<parse::Vertices>,
        #[arg(long)]
        svg: PathBuf,
        /// Census JSON matching the zero markers.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Suite {
    Fold,
    Cusp,
    Asymptotic,
    Invariance,
    Argument,
    All,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Verdict(Verdict),
}

impl From<rhf::Error> for Failure {
    fn from(e: rhf::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn tolerances(cli: &Cli) -> Result<Tolerances, Failure> {
    let mut tol = Tolerances::profile(&cli.profile)?;
    if let Some(v) = cli.tol_res {
        tol.tol_res = v;
    }
    if let Some(v) = cli.tol_singular {
        tol.tol_singular = v;
    }
    if let Some(v) = cli.theta_steps {
        tol.theta_steps = v;
    }
    tol.validate()?;
    Ok(tol)
}

fn load_lens(args: &LensArgs, tol: &Tolerances) -> Result<RationalFn, Failure> {
    match (&args.input, &args.lens) {
        (Some(path), _) => {
            let spec = LensSpec::load(path).map_err(|e| Failure::Input(format!("--input {}: {e}", path.display())))?;
            Ok(spec.build(tol)?)
        }
        (None, Some(name)) => Ok(lens::preset(name, args.n, args.rho)?),
        (None, None) => Err(Failure::Input("one of --lens or --input is required".into())),
    }
}

fn emit(text: &str, target: Option<&Path>) -> Result<(), Failure> {
    match target {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn pretty(v: &Value) -> Result<String, Failure> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn verdict_exit(v: Verdict) -> Result<(), Failure> {
    match v {
        Verdict::Pass => Ok(()),
        other => Err(Failure::Verdict(other)),
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let tol = tolerances(cli)?;
    match &cli.command {
        Command::Zeros { lens, eta, json } => {
            let r = load_lens(lens, &tol)?;
            let structure = CriticalStructure::build(&r, &tol)?;
            let f = ShiftedFunction::with_tolerances(r, *eta, &tol)?;
            let census = find_zeros_in(&f, &structure.partition, &tol)?;
            emit(&pretty(&export::census_json(&census))?, json.as_deref())?;
            if json.is_some() {
                eprintln!(
                    "N = {} (N+ = {}, N- = {}, Ns = {})",
                    census.counts.n, census.counts.n_plus, census.counts.n_minus, census.counts.n_s
                );
            }
            Ok(())
        }
        Command::Critical { lens, csv } => {
            let r = load_lens(lens, &tol)?;
            let structure = CriticalStructure::build(&r, &tol)?;
            emit(&export::curves_csv(&structure.curves), csv.as_deref())
        }
        Command::Caustics { lens, csv } => {
            let r = load_lens(lens, &tol)?;
            let structure = CriticalStructure::build(&r, &tol)?;
            emit(&export::caustics_csv(&structure.caustics), csv.as_deref())
        }
        Command::Crossing { lens, path, json } => {
            let r = load_lens(lens, &tol)?;
            let structure = CriticalStructure::build(&r, &tol)?;
            let ledger = path_ledger(&structure, &path.0)?;
            emit(&pretty(&serde_json::to_value(&ledger)?)?, json.as_deref())?;
            verdict_exit(ledger.verdict)
        }
        Command::Sweep { lens, rect, nx, ny, csv } => {
            let r = load_lens(lens, &tol)?;
            let structure = CriticalStructure::build(&r, &tol)?;
            let [re_min, re_max, im_min, im_max] = match rect {
                Some(r) => *r,
                None => {
                    let (lo, hi) = suites::caustic_box(&structure);
                    [lo.re, hi.re, lo.im, hi.im]
                }
            };
            let grid = Grid { re_min, re_max, im_min, im_max, nx: *nx, ny: *ny };
            let map = count_map(&structure, &grid)?;
            emit(&export::count_map_csv(&map), csv.as_deref())?;
            let levels: Vec<String> = map.levels.iter().map(|l| l.to_string()).collect();
            eprintln!("count levels: {{{}}}", levels.join(", "));
            Ok(())
        }
        Command::Verify { lens, suite, samples, seed, magnitude, json } => {
            let r = load_lens(lens, &tol)?;
            let structure = CriticalStructure::build(&r, &tol)?;
            let wanted = |s: Suite| *suite == Suite::All || *suite == s;
            let mut reports: Vec<SuiteReport> = Vec::new();
            if wanted(Suite::Fold) {
                reports.push(suites::fold_suite(&structure, *samples)?);
            }
            if wanted(Suite::Cusp) {
                reports.push(suites::cusp_suite(&structure)?);
            }
            if wanted(Suite::Asymptotic) {
                reports.push(suites::asymptotic_suite(&structure, *magnitude, 8)?);
            }
            if wanted(Suite::Invariance) {
                reports.push(suites::invariance_suite(&structure, *samples, *seed)?);
            }
            if wanted(Suite::Argument) {
                reports.push(suites::argument_suite(&structure, *samples, *seed)?);
            }
            let verdict = Verdict::all(reports.iter().map(|r| r.verdict));
            for rep in &reports {
                eprintln!(
                    "{:<11} {:?}: {} passed, {} failed, {} inconclusive",
                    rep.suite, rep.verdict, rep.passed, rep.failed, rep.inconclusive
                );
            }
            let out = json!({ "verdict": verdict, "suites": reports });
            if let Some(path) = json {
                emit(&pretty(&out)?, Some(path))?;
            }
            verdict_exit(verdict)
        }
        Command::Plot { lens, eta, path, svg, json } => {
            let r = load_lens(lens, &tol)?;
            let structure = CriticalStructure::build(&r, &tol)?;
            let census = match eta {
                Some(eta) => {
                    let f = ShiftedFunction::with_tolerances(r.clone(), *eta, &tol)?;
                    Some(find_zeros_in(&f, &structure.partition, &tol)?)
                }
                None => None,
            };
            let mut scene = export::Scene::new(&r, &structure.curves, &structure.caustics, census.as_ref());
            if let Some(p) = path {
                scene.paths.push(p.0.clone());
            }
            emit(&export::svg(&scene), Some(svg))?;
            if let (Some(path), Some(c)) = (json, &census) {
                emit(&pretty(&export::census_json(c))?, Some(path))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verdict(Verdict::Fail)) => {
            eprintln!("verification failed");
            ExitCode::from(2)
        }
        Err(Failure::Verdict(_)) => {
            eprintln!("verification inconclusive");
            ExitCode::from(3)
        }
    }
}
