//! Command-line front end: input loading, configuration and report emission.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::duality::{self, SantaloConfig};
use crate::error::Error;
use crate::geometry::{PolytopeFile, VPolytope, DEFAULT_INCIDENCE_TOL};
use crate::invariants::{self, generator};
use crate::oracles::{self, default_grid_size, DirectionGrid, SearchConfig};

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_GEOMETRY: i32 = 3;
pub const EXIT_INCLUSION: i32 = 4;
pub const EXIT_BOUND: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Run-wide settings. Every field has a default; a JSON config file may set
/// any subset and command-line flags override both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub incidence_tolerance: f64,
    pub bisection_tolerance: f64,
    /// Base direction-grid size keyed by dimension.
    pub grid_size: BTreeMap<usize, usize>,
    pub santalo_residual: f64,
    pub rng_seed: u64,
    /// `None` picks the command's natural format.
    pub output_format: Option<OutputFormat>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            incidence_tolerance: DEFAULT_INCIDENCE_TOL,
            bisection_tolerance: oracles::DEFAULT_CAP_TOL,
            grid_size: (2..=4).map(|n| (n, default_grid_size(n))).collect(),
            santalo_residual: SantaloConfig::default().residual,
            rng_seed: 0,
            output_format: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("incidence_tolerance", self.incidence_tolerance),
            ("bisection_tolerance", self.bisection_tolerance),
            ("santalo_residual", self.santalo_residual),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(format!("{name} must be positive, got {v}"));
            }
        }
        if let Some((n, s)) = self.grid_size.iter().find(|(_, &s)| s < 64) {
            return Err(format!("grid size for dimension {n} must be at least 64, got {s}"));
        }
        Ok(())
    }

    pub fn grid_for(&self, dim: usize) -> usize {
        self.grid_size.get(&dim).copied().unwrap_or_else(|| default_grid_size(dim))
    }

    fn search(&self) -> SearchConfig {
        SearchConfig { cap_tol: self.bisection_tolerance, ..SearchConfig::default() }
    }

    fn santalo(&self) -> SantaloConfig {
        SantaloConfig { residual: self.santalo_residual, ..SantaloConfig::default() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "polydual", version, about = "Floating and illumination bodies of symmetric polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-vertex invariants and the closed-form limit G(P).
    Analyze(CommonArgs),
    /// Vertices of the polar body.
    Polar(CommonArgs),
    /// Convergence table of (d_P(δ) - 1)/δ^{1/n} toward G(P).
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        deltas: Vec<f64>,
    },
    /// Checks d(S_δ, S) <= 1 + G_n δ^{1/n} for a body between B_2 and sqrt(n) B_2.
    CheckBound {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        deltas: Vec<f64>,
    },
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Polytope file `{"dim": n, "vertices": [[...], ...]}`.
    pub input: Option<PathBuf>,
    /// Named generator instead of a file.
    #[arg(long = "gen", value_name = "NAME", conflicts_with = "input")]
    pub generator: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// JSON file with RunConfig fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Base grid size for the input's dimension.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long = "tol-incidence")]
    pub tol_incidence: Option<f64>,
    #[arg(long = "tol-bisection")]
    pub tol_bisection: Option<f64>,
    #[arg(long = "tol-santalo")]
    pub tol_santalo: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

/// A failure with its exit code and the name of the violated invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub invariant: String,
    pub message: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> Self {
        CliError { code: EXIT_PARSE, invariant: "input-parse".into(), message: message.into() }
    }

    fn geometry(e: Error) -> Self {
        let code = match e {
            Error::UnknownGenerator(_) | Error::BadParameter(_) => EXIT_PARSE,
            _ => EXIT_GEOMETRY,
        };
        CliError { code, invariant: e.invariant_name().into(), message: e.to_string() }
    }
}

/// What a command produced: the report text, plus an error to raise after it is written.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub failure: Option<CliError>,
}

fn load_config(args: &CommonArgs, dim_hint: Option<usize>) -> Result<RunConfig, CliError> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(t) = args.tol_incidence {
        cfg.incidence_tolerance = t;
    }
    if let Some(t) = args.tol_bisection {
        cfg.bisection_tolerance = t;
    }
    if let Some(t) = args.tol_santalo {
        cfg.santalo_residual = t;
    }
    if let Some(s) = args.seed {
        cfg.rng_seed = s;
    }
    if let Some(f) = args.format {
        cfg.output_format = Some(f);
    }
    if let Some(g) = args.grid {
        let dim = dim_hint.unwrap_or(2);
        cfg.grid_size.insert(dim, g);
    }
    cfg.validate().map_err(CliError::parse)?;
    Ok(cfg)
}

fn load_input(args: &CommonArgs, tol: f64) -> Result<VPolytope, CliError> {
    let p = match (&args.generator, &args.input) {
        (Some(name), _) => {
            let params = generator::GeneratorParams { dim: args.dim, eps: args.eps };
            generator::generator(name, params).map_err(CliError::geometry)?
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
            let file: PolytopeFile =
                serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
            return file.into_polytope_with_tolerance(tol).map_err(CliError::geometry);
        }
        (None, None) => return Err(CliError::parse("give an input file or --gen NAME")),
    };
    if tol == DEFAULT_INCIDENCE_TOL {
        Ok(p)
    } else {
        VPolytope::with_tolerance(p.vertices().to_vec(), tol).map_err(CliError::geometry)
    }
}

fn dim_hint(args: &CommonArgs) -> Option<usize> {
    match (&args.generator, &args.input) {
        (Some(name), _) => Some(if name == "hexagon" { 2 } else { args.dim.unwrap_or(2) }),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).ok()?;
            serde_json::from_str::<PolytopeFile>(&text).ok().map(|f| f.dim)
        }
        _ => None,
    }
}

fn prepare(args: &CommonArgs) -> Result<(RunConfig, VPolytope), CliError> {
    let cfg = load_config(args, dim_hint(args))?;
    let p = load_input(args, cfg.incidence_tolerance)?;
    Ok((cfg, p))
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Shortest text that still round-trips is not fixed-width; reports use 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn grid_for(cfg: &RunConfig, p: &VPolytope) -> Result<DirectionGrid, CliError> {
    oracles::polytope_grid(p, cfg.grid_for(p.dim()), cfg.rng_seed).map_err(CliError::geometry)
}

pub fn analyze(args: &CommonArgs) -> Result<Outcome, CliError> {
    let (cfg, p) = prepare(args)?;
    let report = invariants::invariant_g_with(&p, &cfg.santalo()).map_err(CliError::geometry)?;
    let text = match cfg.output_format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => json(&report),
        OutputFormat::Csv => {
            let mut s = String::from("index,vertex,cone_density,cone_density_polar,alpha,beta\n");
            for (i, v) in report.per_vertex.iter().enumerate() {
                let coords: Vec<String> = v.vertex.iter().map(|&x| num(x)).collect();
                let _ = writeln!(
                    s,
                    "{i},{},{},{},{},{}",
                    coords.join(" "),
                    num(v.cone_density),
                    num(v.cone_density_polar),
                    num(v.alpha),
                    num(v.beta)
                );
            }
            let _ = writeln!(s, "G,{},,,,", num(report.g));
            let _ = writeln!(s, "c_star,{},,,,", num(report.c_star));
            s
        }
    };
    Ok(Outcome { text, failure: None })
}

pub fn polar(args: &CommonArgs) -> Result<Outcome, CliError> {
    let (cfg, p) = prepare(args)?;
    let q = duality::polar(&p).map_err(CliError::geometry)?;
    let file = PolytopeFile::from_polytope(&q);
    let text = match cfg.output_format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => json(&file),
        OutputFormat::Csv => {
            let mut s = String::new();
            for v in &file.vertices {
                let row: Vec<String> = v.iter().map(|&x| num(x)).collect();
                let _ = writeln!(s, "{}", row.join(","));
            }
            s
        }
    };
    Ok(Outcome { text, failure: None })
}

pub fn verify(args: &CommonArgs, deltas: &[f64]) -> Result<Outcome, CliError> {
    let (cfg, p) = prepare(args)?;
    let grid = grid_for(&cfg, &p)?;
    let table = oracles::convergence_table(&p, deltas, &grid, &cfg.search()).map_err(CliError::geometry)?;
    let text = match cfg.output_format.unwrap_or(OutputFormat::Csv) {
        OutputFormat::Json => json(&table),
        OutputFormat::Csv => {
            let mut s = String::from("delta,dP,normalized,best_delta_prime,G_closed_form\n");
            for r in &table.rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    num(r.delta),
                    num(r.d_p),
                    num(r.normalized),
                    num(r.best_delta_prime),
                    num(r.g_closed_form)
                );
            }
            if let Some(g) = table.extrapolated {
                let _ = writeln!(s, "extrapolated,,{},,{}", num(g), num(table.g_closed_form));
            }
            s
        }
    };
    let failure = table.inclusion.iter().find(|r| !r.ok()).map(|r| CliError {
        code: EXIT_INCLUSION,
        invariant: "inclusion-chain".into(),
        message: format!(
            "inclusion chain failed at δ = {:e}, δ' = {:e}: {} floating, {} illumination, {} polar directions outside",
            r.delta, r.delta_prime, r.floating_outside, r.illumination_outside, r.polar_outside
        ),
    });
    Ok(Outcome { text, failure })
}

pub fn check_bound(args: &CommonArgs, deltas: &[f64]) -> Result<Outcome, CliError> {
    let (cfg, p) = prepare(args)?;
    let grid = grid_for(&cfg, &p)?;
    let report = oracles::uniform_bound_check(&p, deltas, &grid, &cfg.search()).map_err(CliError::geometry)?;
    let text = match cfg.output_format.unwrap_or(OutputFormat::Json) {
        OutputFormat::Json => json(&report),
        OutputFormat::Csv => {
            let mut s = String::from("delta,distance,bound,margin\n");
            for r in &report.rows {
                let _ = writeln!(s, "{},{},{},{}", num(r.delta), num(r.distance), num(r.bound), num(r.margin));
            }
            s
        }
    };
    let failure = (!report.passed).then(|| {
        let worst = report.rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
        CliError {
            code: EXIT_BOUND,
            invariant: "uniform-bound".into(),
            message: format!("d(S_δ, S) exceeds 1 + G_n δ^(1/n) (worst margin {worst:e})"),
        }
    });
    Ok(Outcome { text, failure })
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Polar(a) => polar(a),
        Command::Verify { common, deltas } => verify(common, deltas),
        Command::CheckBound { common, deltas } => check_bound(common, deltas),
    }
}

fn output_path(cli: &Cli) -> Option<&PathBuf> {
    match &cli.command {
        Command::Analyze(a) | Command::Polar(a) => a.output.as_ref(),
        Command::Verify { common, .. } | Command::CheckBound { common, .. } => common.output.as_ref(),
    }
}

/// Parses `args`, runs the command, writes the report and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error[{}]: {}", e.invariant, e.message);
            return e.code;
        }
    };
    match output_path(&cli) {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.text) {
                eprintln!("error[output]: {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{}", outcome.text),
    }
    match outcome.failure {
        Some(e) => {
            eprintln!("error[{}]: {}", e.invariant, e.message);
            e.code
        }
        None => 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("polydual").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg = RunConfig::default();
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.grid_for(3), 20_000);
        let bad = RunConfig { incidence_tolerance: 0.0, ..RunConfig::default() };
        assert!(bad.validate().is_err());
        let mut small = RunConfig::default();
        small.grid_size.insert(2, 10);
        assert!(small.validate().is_err());
    }

    #[test]
    fn config_file_is_partial_and_flags_win() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"rng_seed": 9, "grid_size": {"2": 128}, "output_format": "csv"}"#).unwrap();
        let cli = parse(&["analyze", "--gen", "cube", "--config", path.to_str().unwrap(), "--seed", "4"]);
        let Command::Analyze(args) = &cli.command else { panic!() };
        let cfg = load_config(args, Some(2)).unwrap();
        assert_eq!(cfg.rng_seed, 4);
        assert_eq!(cfg.grid_for(2), 128);
        assert_eq!(cfg.output_format, Some(OutputFormat::Csv));
        assert_eq!(cfg.incidence_tolerance, DEFAULT_INCIDENCE_TOL);
    }

    #[test]
    fn unknown_config_keys_are_parse_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"gridsize": 3}"#).unwrap();
        let cli = parse(&["analyze", "--gen", "cube", "--config", path.to_str().unwrap()]);
        assert_eq!(execute(&cli).unwrap_err().code, EXIT_PARSE);
    }

    #[test]
    fn analyze_reports_g() {
        let cli = parse(&["analyze", "--gen", "cube", "--dim", "2"]);
        let out = execute(&cli).unwrap();
        let report: invariants::InvariantReport = serde_json::from_str(&out.text).unwrap();
        assert!((report.g - 2f64.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn error_mapping() {
        assert_eq!(execute(&parse(&["analyze", "--gen", "prism"])).unwrap_err().code, EXIT_PARSE);
        assert_eq!(execute(&parse(&["analyze"])).unwrap_err().code, EXIT_PARSE);
        let e = CliError::geometry(Error::SymmetryRequired);
        assert_eq!((e.code, e.invariant.as_str()), (EXIT_GEOMETRY, "central-symmetry"));
    }

    #[test]
    fn empty_delta_list_gives_header_only() {
        let out = execute(&parse(&["verify", "--gen", "cube", "--grid", "128"])).unwrap();
        assert_eq!(out.text, "delta,dP,normalized,best_delta_prime,G_closed_form\n");
        assert!(out.failure.is_none());
    }
}
