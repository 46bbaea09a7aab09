//! Command-line front end: `compute`, `curve`, `figure` and `verify`.

use std::ffi::OsString;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::bipartite::{concurrence_pure, lambda2_from_concurrence, lambda_max_bipartite};
use crate::curve::{fmt_sig, unit_grid, Curve};
use crate::error::{Error, Result};
use crate::io::{read_state, write_text, MixedFamily, StateInput};
use crate::mixed::{
    dicke_mixture_e_sin2, e_sin2_isotropic, e_sin2_two_qubit, e_sin2_werner, make_isotropic, make_werner,
    roof_upper_bound, symmetric_mixture_curve, wootters_concurrence, DensityMatrix,
};
use crate::random::{random_density_matrix, random_kraus, random_state, stream_rng};
use crate::solver::{
    brute_force_lambda, entanglement_eigenvalue, stationarity_residual, unilocal_monotonicity_gap, SolveOptions,
    UnilocalChannel,
};
use crate::states::{build, dicke, ghz, FamilySpec, ProductState, PureState};
use crate::symmetric::{lambda_dicke, max_entangled_k, ss_pure_curve, wg_curve, ww_curve, ww_lambda, ww_polynomial, ww_root};

/// Exit status for a failed `verify` run.
pub const EXIT_VERIFY: i32 = 1;
/// Exit status for unreadable input, malformed files and bad flags.
pub const EXIT_PARSE: i32 = 2;
/// Exit status for inputs outside a routine's domain.
pub const EXIT_DOMAIN: i32 = 3;

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "geoent", version, about = "Geometric measure of entanglement E_sin² = 1 − Λmax²")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate E_sin² of a state given by --input or --family; prints a JSON report.
    Compute {
        /// State file (pure amplitudes, density matrix or family spec).
        #[arg(long)]
        input: Option<PathBuf>,
        /// Also write the report here.
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Grid size for the convex-hull construction of Dicke mixtures.
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// Sampled decompositions for the roof upper bound on unsolved mixed states.
        #[arg(long, default_value_t = 2000)]
        samples: usize,
    },
    /// Write a family curve as CSV (`param,e_sin2,lambda`).
    Curve {
        /// CSV destination; stdout when absent.
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Number of grid points (at least 3).
        #[arg(long, default_value_t = 101)]
        grid: usize,
    },
    /// Write the data behind figure 1, 2 or 3 as CSV files.
    Figure {
        /// Which figure: 1 (W/W̃), 2 (W/GHZ), 3 (seven-qubit Dicke mixture).
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        /// Output directory.
        #[arg(long, default_value = ".")]
        output: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Number of grid points (at least 3).
        #[arg(long, default_value_t = 101)]
        grid: usize,
        /// Random (s, φ) points in the figure 2 scatter.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Run the built-in consistency suites; exits 1 if any fails.
    Verify {
        /// Additionally validate and cross-check this state file.
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

/// Family selection. Families: ghz (n), dicke (n, k1), w, w_tilde, ww (s, phi),
/// wg (s, phi), ss (n, k1, k2, r, phi), werner (d, f), isotropic (d, F),
/// dicke_mixture (n, k1, k2, r).
#[derive(Debug, Clone, Default, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of zeros in the first Dicke component.
    #[arg(long)]
    pub k1: Option<usize>,
    #[arg(long)]
    pub k2: Option<usize>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
    /// Relative phase in radians [default: 0].
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Local dimension of Werner and isotropic states.
    #[arg(long)]
    pub d: Option<usize>,
    /// Werner parameter Tr(ρF).
    #[arg(long, allow_negative_numbers = true)]
    pub f: Option<f64>,
    /// Isotropic fidelity with the maximally entangled state.
    #[arg(long = "F")]
    pub fidelity: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Random restarts of the alternating solver.
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    /// Convergence tolerance on Λ per sweep.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
}

impl SolverArgs {
    pub fn options(&self) -> Result<SolveOptions> {
        let opts = SolveOptions { restarts: self.restarts, tol: self.tol, seed: self.seed, ..SolveOptions::default() };
        opts.validate()?;
        Ok(opts)
    }
}

/// Failure of a command, mapped to an exit status.
#[derive(Debug)]
pub enum CliError {
    Domain(Error),
    Io(String),
    Verify(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(Error::Parse(_)) | CliError::Io(_) => EXIT_PARSE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Verify(_) => EXIT_VERIFY,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(msg) => write!(f, "I/O error: {msg}"),
            CliError::Verify(msg) => write!(f, "verification failed: {msg}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name), runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { 0 };
        }
    };
    match execute(&config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(config: &RunConfig) -> CliResult<()> {
    match &config.command {
        Command::Compute { input, output, family, solver, grid, samples } => {
            let state = load_input(input.as_deref(), family)?;
            let report = cmd_compute(&state, &solver.options()?, *grid, *samples)?;
            let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            print!("{text}");
            if let Some(path) = output {
                write_file(path, &text)?;
            }
            Ok(())
        }
        Command::Curve { output, family, solver, grid } => {
            let curve = cmd_curve(family, &solver.options()?, *grid)?;
            match output {
                Some(path) => write_file(path, &curve.to_csv()),
                None => {
                    print!("{}", curve.to_csv());
                    Ok(())
                }
            }
        }
        Command::Figure { which, output, solver, grid, samples } => {
            let files = cmd_figure(*which, *grid, *samples, &solver.options()?)?;
            for (name, csv) in files {
                let path = output.join(name);
                write_file(&path, &csv)?;
                println!("{}", path.display());
            }
            Ok(())
        }
        Command::Verify { input, solver } => {
            let summary = cmd_verify(input.as_deref(), &solver.options()?);
            println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
            if summary.passed {
                Ok(())
            } else {
                let failed: Vec<&str> = summary.suites.iter().filter(|s| !s.passed).map(|s| s.name.as_str()).collect();
                Err(CliError::Verify(failed.join(", ")))
            }
        }
    }
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    write_text(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn load_input(input: Option<&Path>, family: &FamilyArgs) -> CliResult<StateInput> {
    match (input, &family.family) {
        (Some(path), None) => Ok(read_state(path)?),
        (None, Some(_)) => Ok(family_state(family)?),
        (Some(_), Some(_)) => Err(Error::Parse("give either --input or --family, not both".into()).into()),
        (None, None) => Err(Error::Parse("one of --input or --family is required".into()).into()),
    }
}

fn need<T: Copy>(value: Option<T>, flag: &str, family: &str) -> Result<T> {
    value.ok_or_else(|| Error::Parse(format!("family {family} needs --{flag}")))
}

/// Builds the state selected by `--family` and its parameter flags.
pub fn family_state(args: &FamilyArgs) -> Result<StateInput> {
    let name = args.family.as_deref().ok_or_else(|| Error::Parse("missing --family".into()))?;
    let phase = args.phi.unwrap_or(0.0);
    let pure = |spec: FamilySpec| StateInput::from_family(spec);
    match name {
        "ghz" => pure(FamilySpec::Ghz { n: need(args.n, "n", name)? }),
        "dicke" => pure(FamilySpec::Dicke { n: need(args.n, "n", name)?, k: need(args.k1, "k1", name)? }),
        "w" => pure(FamilySpec::Dicke { n: 3, k: 2 }),
        "w_tilde" => pure(FamilySpec::Dicke { n: 3, k: 1 }),
        "ww" => pure(FamilySpec::ww(need(args.s, "s", name)?, phase)?),
        "wg" => pure(FamilySpec::wg(need(args.s, "s", name)?, phase)?),
        "ss" => pure(FamilySpec::ss(
            need(args.n, "n", name)?,
            need(args.k1, "k1", name)?,
            need(args.k2, "k2", name)?,
            need(args.r, "r", name)?,
            phase,
        )?),
        "werner" => StateInput::from_mixed_family(MixedFamily::Werner { d: need(args.d, "d", name)?, f: need(args.f, "f", name)? }),
        "isotropic" => StateInput::from_mixed_family(MixedFamily::Isotropic {
            d: need(args.d, "d", name)?,
            fidelity: need(args.fidelity, "F", name)?,
        }),
        "dicke_mixture" => StateInput::from_mixed_family(MixedFamily::DickeMixture {
            n: need(args.n, "n", name)?,
            k1: need(args.k1, "k1", name)?,
            k2: need(args.k2, "k2", name)?,
            r: need(args.r, "r", name)?,
        }),
        other => Err(Error::Parse(format!("unknown family {other:?}"))),
    }
}

/// Result of `compute`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// `null` for mixed states.
    pub lambda_max: Option<f64>,
    pub e_sin2: f64,
    /// Factors as `[[re, im], ...]` per party; `null` for mixed states.
    pub nearest_product_state: Option<Vec<Vec<[f64; 2]>>>,
    /// `schmidt`, `closed_form`, `als`, `convex_hull` or `roof_upper_bound`.
    pub method: String,
    /// Set when `e_sin2` is only an upper bound on the convex roof.
    pub upper_bound_only: bool,
    pub diagnostics: Map<String, Value>,
}

/// Rounds to 12 significant digits, the precision of every printed number.
pub fn round_sig(x: f64) -> f64 {
    fmt_sig(x).parse().unwrap_or(x)
}

fn num(x: f64) -> Value {
    json!(round_sig(x))
}

fn factors_json(phi: &ProductState) -> Vec<Vec<[f64; 2]>> {
    let clean = |x: f64| if x.abs() < 1e-15 { 0.0 } else { round_sig(x) };
    phi.factors()
        .iter()
        .map(|f| f.iter().map(|z| [clean(z.re), clean(z.im)]).collect())
        .collect()
}

fn pure_report(
    method: &str,
    lambda: f64,
    psi: &PureState,
    opts: &SolveOptions,
    mut diagnostics: Map<String, Value>,
) -> Result<Report> {
    let als = entanglement_eigenvalue(psi, opts)?;
    if method != "als" {
        diagnostics.insert(format!("{method}_vs_als"), num((lambda - als.lambda_max).abs()));
        diagnostics.insert("als_lambda_max".into(), num(als.lambda_max));
    }
    diagnostics.insert("sweeps_used".into(), json!(als.sweeps_used));
    diagnostics.insert("converged".into(), json!(als.converged));
    diagnostics.insert("restart_spread".into(), num(als.restart_spread));
    diagnostics.insert("stationarity_residual".into(), num(stationarity_residual(psi, &als.nearest)?));
    Ok(Report {
        lambda_max: Some(round_sig(lambda)),
        e_sin2: round_sig((1.0 - lambda * lambda).max(0.0)),
        nearest_product_state: Some(factors_json(&als.nearest)),
        method: method.to_string(),
        upper_bound_only: false,
        diagnostics,
    })
}

fn mixed_report(method: &str, e: f64, upper_bound_only: bool, diagnostics: Map<String, Value>) -> Report {
    Report {
        lambda_max: None,
        e_sin2: round_sig(e),
        nearest_product_state: None,
        method: method.to_string(),
        upper_bound_only,
        diagnostics,
    }
}

/// Evaluates `E_sin²`, preferring exact routes and cross-checking them against the solver.
pub fn cmd_compute(state: &StateInput, opts: &SolveOptions, grid: usize, samples: usize) -> Result<Report> {
    let mut diag = Map::new();
    match state {
        StateInput::Pure { state: psi, family } => {
            diag.insert("dims".into(), json!(psi.dims()));
            if psi.parties() == 2 {
                return pure_report("schmidt", lambda_max_bipartite(psi)?, psi, opts, diag);
            }
            match family {
                Some(FamilySpec::Dicke { n, k }) => pure_report("closed_form", lambda_dicke(*n, *k)?, psi, opts, diag),
                Some(FamilySpec::Ghz { .. }) => pure_report("closed_form", FRAC_1_SQRT_2, psi, opts, diag),
                _ => {
                    let lambda = entanglement_eigenvalue(psi, opts)?.lambda_max;
                    pure_report("als", lambda, psi, opts, diag)
                }
            }
        }
        StateInput::Mixed { rho, family } => {
            diag.insert("dims".into(), json!(rho.dims()));
            let two_qubit = rho.dims() == [2, 2];
            if two_qubit {
                let c = wootters_concurrence(rho)?;
                diag.insert("concurrence".into(), num(c));
            }
            let closed = match family {
                Some(MixedFamily::Werner { f, .. }) => Some(e_sin2_werner(*f)?),
                Some(MixedFamily::Isotropic { d, fidelity }) => Some(e_sin2_isotropic(*d, *fidelity)?),
                Some(MixedFamily::DickeMixture { n, k1, k2, r }) => {
                    diag.insert("grid".into(), json!(grid));
                    let e = dicke_mixture_e_sin2(*n, *k1, *k2, *r, grid)?;
                    return Ok(mixed_report("convex_hull", e, false, diag));
                }
                None => None,
            };
            match (closed, two_qubit) {
                (Some(e), true) => {
                    let wootters = e_sin2_two_qubit(rho)?;
                    diag.insert("closed_form_vs_wootters".into(), num((e - wootters).abs()));
                    Ok(mixed_report("closed_form", e, false, diag))
                }
                (Some(e), false) => Ok(mixed_report("closed_form", e, false, diag)),
                (None, true) => Ok(mixed_report("closed_form", e_sin2_two_qubit(rho)?, false, diag)),
                (None, false) => {
                    diag.insert("samples".into(), json!(samples));
                    diag.insert("seed".into(), json!(opts.seed));
                    let bound = roof_upper_bound(rho, samples.max(1), opts.seed, opts)?;
                    Ok(mixed_report("roof_upper_bound", bound, true, diag))
                }
            }
        }
    }
}

fn grid_on(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    Ok(unit_grid(points)?.into_iter().map(|t| lo + (hi - lo) * t).collect())
}

/// Curve of a one-parameter family; the parameter is `s`, `r`, `f` or `F`.
pub fn cmd_curve(args: &FamilyArgs, opts: &SolveOptions, points: usize) -> Result<Curve> {
    let name = args.family.as_deref().ok_or_else(|| Error::Parse("curve needs --family".into()))?;
    let phase = args.phi.unwrap_or(0.0);
    match name {
        "ww" if phase == 0.0 => ww_curve(&unit_grid(points)?),
        "ww" => pure_curve(&unit_grid(points)?, opts, |s| FamilySpec::ww(s, phase)),
        "wg" => wg_curve(phase, &unit_grid(points)?, opts),
        "ss" => {
            let (n, k1, k2) = (need(args.n, "n", name)?, need(args.k1, "k1", name)?, need(args.k2, "k2", name)?);
            ss_pure_curve(n, k1, k2, &unit_grid(points)?)
        }
        "dicke_mixture" => {
            let (n, k1, k2) = (need(args.n, "n", name)?, need(args.k1, "k1", name)?, need(args.k2, "k2", name)?);
            symmetric_mixture_curve(n, k1, k2, &unit_grid(points)?)
        }
        "werner" => {
            let grid = grid_on(-1.0, 1.0, points)?;
            let values = grid.iter().map(|&f| e_sin2_werner(f)).collect::<Result<Vec<_>>>()?;
            Curve::new(grid, values, false)
        }
        "isotropic" => {
            let d = need(args.d, "d", name)?;
            let grid = unit_grid(points)?;
            let values = grid.iter().map(|&f| e_sin2_isotropic(d, f)).collect::<Result<Vec<_>>>()?;
            Curve::new(grid, values, false)
        }
        other => Err(Error::Parse(format!("no curve for family {other:?}; use ww, wg, ss, dicke_mixture, werner or isotropic"))),
    }
}

fn pure_curve(grid: &[f64], opts: &SolveOptions, spec: impl Fn(f64) -> Result<FamilySpec> + Sync) -> Result<Curve> {
    let values = grid
        .par_iter()
        .map(|&s| Ok(entanglement_eigenvalue(&build(&spec(s)?)?, opts)?.e_sin2))
        .collect::<Result<Vec<_>>>()?;
    Curve::new(grid.to_vec(), values, false)
}

/// Seeded `(s, φ)` points with `E_sin²` of the W/GHZ superposition.
pub fn wg_scatter(samples: usize, opts: &SolveOptions) -> Result<Vec<(f64, f64, f64)>> {
    let mut rng = stream_rng(opts.seed, 2);
    let points: Vec<(f64, f64)> = (0..samples).map(|_| (rng.random::<f64>(), rng.random_range(0.0..2.0 * PI))).collect();
    points
        .par_iter()
        .map(|&(s, phase)| Ok((s, phase, entanglement_eigenvalue(&build(&FamilySpec::wg(s, phase)?)?, opts)?.e_sin2)))
        .collect()
}

fn scatter_csv(points: &[(f64, f64, f64)]) -> String {
    let mut out = String::from("s,phi,e_sin2,lambda\n");
    for &(s, phase, e) in points {
        let lambda = (1.0 - e).max(0.0).sqrt();
        out.push_str(&format!("{},{},{},{}\n", fmt_sig(s), fmt_sig(phase), fmt_sig(e), fmt_sig(lambda)));
    }
    out
}

/// `(file name, CSV)` pairs for the requested figure.
pub fn cmd_figure(which: u8, points: usize, samples: usize, opts: &SolveOptions) -> Result<Vec<(String, String)>> {
    let grid = unit_grid(points)?;
    match which {
        1 => Ok(vec![("fig1.csv".into(), ww_curve(&grid)?.to_csv())]),
        2 => Ok(vec![
            ("fig2_phi0.csv".into(), wg_curve(0.0, &grid, opts)?.to_csv()),
            ("fig2_phipi.csv".into(), wg_curve(PI, &grid, opts)?.to_csv()),
            ("fig2_scatter.csv".into(), scatter_csv(&wg_scatter(samples, opts)?)),
        ]),
        3 => Ok(vec![
            ("fig3_pure.csv".into(), ss_pure_curve(7, 2, 5, &grid)?.to_csv()),
            ("fig3_hull.csv".into(), symmetric_mixture_curve(7, 2, 5, &grid)?.to_csv()),
        ]),
        other => Err(Error::OutOfRange { name: "figure", value: other as f64 }),
    }
}

/// Outcome of one `verify` suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

fn suite(name: &str, outcome: Result<(bool, String)>) -> SuiteResult {
    match outcome {
        Ok((passed, detail)) => SuiteResult { name: name.into(), passed, detail },
        Err(e) => SuiteResult { name: name.into(), passed: false, detail: format!("error: {e}") },
    }
}

fn worst(label: &str, value: f64, bound: f64) -> (bool, String) {
    (value <= bound, format!("{label} {} (bound {})", fmt_sig(value), fmt_sig(bound)))
}

/// Runs the quick consistency suites and, with `input`, validates that file.
pub fn cmd_verify(input: Option<&Path>, opts: &SolveOptions) -> VerifySummary {
    let mut suites = vec![
        suite("named_values", verify_named_values(opts)),
        suite("dicke_closed_form", verify_dicke(opts)),
        suite("schmidt_concurrence", verify_bipartite(opts)),
        suite("brute_force_oracle", verify_brute_force(opts)),
        suite("ww_cubic", verify_ww(opts)),
        suite("werner_isotropic", verify_werner_isotropic()),
        suite("mixture_hull", verify_hull()),
        suite("unilocal_monotonicity", verify_monotonicity(opts)),
        suite("roof_bound", verify_roof(opts)),
        suite("seed_sweep", verify_seed_sweep(opts)),
    ];
    if let Some(path) = input {
        suites.push(suite("input", verify_input(path, opts)));
    }
    VerifySummary { seed: opts.seed, passed: suites.iter().all(|s| s.passed), suites }
}

fn verify_named_values(opts: &SolveOptions) -> Result<(bool, String)> {
    let mut err = (entanglement_eigenvalue(&dicke(3, 2)?, opts)?.lambda_max - 2.0 / 3.0).abs();
    for n in 2..=8 {
        err = err.max((entanglement_eigenvalue(&ghz(n)?, opts)?.lambda_max - FRAC_1_SQRT_2).abs());
    }
    Ok(worst("max |Λ − closed form| over W, GHZ(2..8):", err, 1e-9))
}

fn verify_dicke(opts: &SolveOptions) -> Result<(bool, String)> {
    let mut err: f64 = 0.0;
    let mut argmin_ok = true;
    for n in 1..=6 {
        let mut lambdas = Vec::new();
        for k in 0..=n {
            let l = entanglement_eigenvalue(&dicke(n, k)?, opts)?.lambda_max;
            err = err.max((l - lambda_dicke(n, k)?).abs());
            lambdas.push(l);
        }
        let min = lambdas.iter().copied().fold(f64::INFINITY, f64::min);
        let argmin: Vec<usize> = (0..=n).filter(|&k| lambdas[k] <= min + 1e-9).collect();
        argmin_ok &= argmin == max_entangled_k(n);
    }
    let (ok, detail) = worst("max |Λ − Λ(n,k)| for n ≤ 6:", err, 1e-8);
    Ok((ok && argmin_ok, format!("{detail}; argmin rule {}", if argmin_ok { "holds" } else { "violated" })))
}

fn verify_bipartite(opts: &SolveOptions) -> Result<(bool, String)> {
    let mut rng = stream_rng(opts.seed, 10);
    let quick = SolveOptions { restarts: 4, ..*opts };
    let (mut roundtrip, mut cross): (f64, f64) = (0.0, 0.0);
    for i in 0..200 {
        let psi = random_state(&[2, 2], &mut rng)?;
        let l = lambda_max_bipartite(&psi)?;
        roundtrip = roundtrip.max((l * l - lambda2_from_concurrence(concurrence_pure(&psi)?)?).abs());
        if i < 20 {
            cross = cross.max((l - entanglement_eigenvalue(&psi, &quick)?.lambda_max).abs());
        }
    }
    let (a, da) = worst("max |Λ² − (1+√(1−C²))/2|:", roundtrip, 1e-10);
    let (b, db) = worst("max |Schmidt − solver|:", cross, 1e-9);
    Ok((a && b, format!("{da}; {db}")))
}

fn verify_brute_force(opts: &SolveOptions) -> Result<(bool, String)> {
    let mut rng = stream_rng(opts.seed, 11);
    let mut err: f64 = 0.0;
    for dims in [[2usize, 2].as_slice(), [2, 2, 2].as_slice()] {
        for _ in 0..3 {
            let psi = random_state(dims, &mut rng)?;
            let solver = entanglement_eigenvalue(&psi, opts)?.lambda_max;
            err = err.max((solver - brute_force_lambda(&psi, 48)?).abs());
        }
    }
    Ok(worst("max |solver − brute force|:", err, 1e-4))
}

fn verify_ww(opts: &SolveOptions) -> Result<(bool, String)> {
    let grid = unit_grid(101)?;
    let mut residual: f64 = 0.0;
    for &s in &grid {
        residual = residual.max(ww_polynomial(s, ww_root(s)?).abs());
    }
    let mut err: f64 = 0.0;
    for &s in grid.iter().step_by(10) {
        let solver = entanglement_eigenvalue(&build(&FamilySpec::ww(s, 0.0)?)?, opts)?.lambda_max;
        err = err.max((solver - ww_lambda(s)?).abs());
    }
    let (a, da) = worst("max cubic residual:", residual, 1e-12);
    let (b, db) = worst("max |solver − cubic Λ|:", err, 1e-8);
    Ok((a && b, format!("{da}; {db}")))
}

fn verify_werner_isotropic() -> Result<(bool, String)> {
    let mut err: f64 = 0.0;
    for i in 0..=20 {
        let t = i as f64 / 20.0;
        let f = 2.0 * t - 1.0;
        err = err.max((e_sin2_werner(f)? - e_sin2_two_qubit(&make_werner(2, f)?)?).abs());
        err = err.max((e_sin2_isotropic(2, t)? - e_sin2_two_qubit(&make_isotropic(2, t)?)?).abs());
    }
    let exact = e_sin2_werner(-1.0)? == 0.5 && e_sin2_werner(0.5)? == 0.0 && e_sin2_isotropic(3, 1.0 / 3.0)? == 0.0;
    let (ok, detail) = worst("max |closed form − two-qubit formula| at d = 2:", err, 1e-7);
    Ok((ok && exact, detail))
}

fn verify_hull() -> Result<(bool, String)> {
    let grid = unit_grid(41)?;
    let pure = ss_pure_curve(7, 2, 5, &grid)?;
    let hull = symmetric_mixture_curve(7, 2, 5, &grid)?;
    let edge = 1.0 - lambda_dicke(7, 2)?.powi(2);
    let endpoints = (hull.values()[0] - edge).abs().max((hull.values()[40] - edge).abs());
    let below = hull.values().iter().zip(pure.values()).all(|(h, p)| h <= &(p + 1e-12));
    let dip = hull.values().iter().zip(pure.values()).map(|(h, p)| p - h).fold(0.0, f64::max);
    let ok = endpoints <= 1e-9 && below && dip > 1e-6;
    Ok((ok, format!("endpoint error {}; largest dip below pure curve {}", fmt_sig(endpoints), fmt_sig(dip))))
}

fn verify_monotonicity(opts: &SolveOptions) -> Result<(bool, String)> {
    let mut rng = stream_rng(opts.seed, 12);
    let quick = SolveOptions { restarts: 6, ..*opts };
    let mut cases = Vec::new();
    for i in 0..50 {
        let dims = if i % 2 == 0 { vec![2, 2] } else { vec![2, 2, 2] };
        let psi = random_state(&dims, &mut rng)?;
        let party = rng.random_range(0..dims.len());
        let outcomes = rng.random_range(1..=3);
        cases.push((psi, UnilocalChannel { party, kraus: random_kraus(2, outcomes, &mut rng) }));
    }
    let gaps = cases
        .par_iter()
        .map(|(psi, channel)| unilocal_monotonicity_gap(psi, channel, &quick))
        .collect::<Result<Vec<_>>>()?;
    let min = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((min >= -1e-6, format!("smallest gap {} over 50 channels (bound -1e-6)", fmt_sig(min))))
}

fn verify_roof(opts: &SolveOptions) -> Result<(bool, String)> {
    let mut rng = stream_rng(opts.seed, 13);
    let mut slack = f64::INFINITY;
    for i in 0..10 {
        let rho = DensityMatrix::new(&[2, 2], random_density_matrix(4, 1 + i % 4, &mut rng))?;
        let bound = roof_upper_bound(&rho, 500, opts.seed.wrapping_add(i as u64), opts)?;
        slack = slack.min(bound - e_sin2_two_qubit(&rho)?);
    }
    Ok((slack >= -1e-6, format!("min (bound − closed form) {} (bound -1e-6)", fmt_sig(slack))))
}

fn verify_seed_sweep(opts: &SolveOptions) -> Result<(bool, String)> {
    let psi = random_state(&[2, 2, 2], &mut stream_rng(0, 14))?;
    let mut closed = Vec::new();
    let mut solved = Vec::new();
    for offset in 0..3 {
        let o = SolveOptions { seed: opts.seed.wrapping_add(offset), ..*opts };
        closed.push((lambda_dicke(6, 3)?, ww_lambda(0.3)?, e_sin2_isotropic(3, 0.7)?));
        solved.push(entanglement_eigenvalue(&psi, &o)?.lambda_max);
    }
    let identical = closed.windows(2).all(|w| w[0] == w[1]);
    let spread = solved.iter().copied().fold(f64::NEG_INFINITY, f64::max) - solved.iter().copied().fold(f64::INFINITY, f64::min);
    let (ok, detail) = worst("solver spread across 3 seeds:", spread, 1e-8);
    Ok((ok && identical, format!("{detail}; closed forms identical: {identical}")))
}

fn verify_input(path: &Path, opts: &SolveOptions) -> Result<(bool, String)> {
    let state = read_state(path)?;
    let report = cmd_compute(&state, opts, 201, 500)?;
    let mut problems = Vec::new();
    for (key, value) in &report.diagnostics {
        let is_cross_check = key.ends_with("_vs_als") || key.ends_with("_vs_wootters");
        if is_cross_check && value.as_f64().is_some_and(|v| v > 1e-8) {
            problems.push(format!("{key} = {value}"));
        }
    }
    if !(0.0..=1.0).contains(&report.e_sin2) {
        problems.push(format!("e_sin2 = {} outside [0, 1]", report.e_sin2));
    }
    let detail = format!("{} via {}: e_sin2 = {}", path.display(), report.method, fmt_sig(report.e_sin2));
    if problems.is_empty() {
        Ok((true, detail))
    } else {
        Ok((false, format!("{detail}; {}", problems.join(", "))))
    }
}
