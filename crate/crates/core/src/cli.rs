//! Command-line front end: argument parsing, report/CSV formatting, and
//! dispatch into the bound computations.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 unphysical state.

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{
    berta_rhs, fine_grained_bound_with_grid, game_value, joint_fine_grained_with_grid,
    key_rate_berta, key_rate_fine_grained, GameSpec, WinningRule,
};
use crate::entropy::{binary_entropy, cond_entropy_ab};
use crate::measure::{complementarity, discord_probability, MeasurementPair};
use crate::states::{parse_state_spec, StateError, TwoQubitState};
use crate::verify::run_all;
use crate::BlochDirection64;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNPHYSICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "uncq",
    about = "Entropic uncertainty bounds for two-qubit states with quantum memory",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate both sides of the memory-assisted uncertainty relation at
    /// explicit settings.
    Bound(BoundArgs),
    /// Compute the fine-grained lower bound (fixed R or jointly optimized).
    Fg(FgArgs),
    /// Sweep the second setting's polar angle and emit CSV rows.
    Sweep(SweepArgs),
    /// Evaluate or optimize a bipartite game's winning probability.
    Game(GameArgs),
    /// Compare the two key-rate lower bounds at explicit settings.
    Keyrate(KeyrateArgs),
    /// Run the seeded property suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Table,
    Csv,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// State spec: bell:phi+|phi-|psi+|psi-, belldiag:p=<real>,
    /// mmm:c1=<real>,c2=<real>,c3=<real>, werner:p=<real>, random:seed=<uint>
    #[arg(long)]
    state: String,
    /// Angular exclusion radius (radians) realizing S != R
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
    /// Sphere-optimizer grid as <n_theta>x<n_phi>
    #[arg(long, default_value = "121x240", value_parser = parse_grid)]
    grid: (usize, usize),
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// First direction: x, y, z, or <theta>,<phi> in radians
    #[arg(long, value_parser = parse_direction)]
    r: BlochDirection64,
    /// Second direction
    #[arg(long, value_parser = parse_direction)]
    s: BlochDirection64,
}

#[derive(Debug, Args)]
struct FgArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Fixed first direction (ignored with --joint)
    #[arg(long, value_parser = parse_direction, default_value = "z")]
    r: BlochDirection64,
    /// Optimize both directions instead of fixing R
    #[arg(long)]
    joint: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Fixed first direction
    #[arg(long, value_parser = parse_direction, default_value = "z")]
    r: BlochDirection64,
    /// Sweep start for theta_s (radians)
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    /// Sweep end for theta_s (radians, inclusive)
    #[arg(long, default_value_t = std::f64::consts::PI)]
    to: f64,
    /// Number of grid points (>= 2)
    #[arg(long, default_value_t = 121)]
    steps: usize,
    /// Fixed phi_s (radians)
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
}

#[derive(Debug, Args)]
struct GameArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// First (or shared, for anticorrelate) setting
    #[arg(long, value_parser = parse_direction, default_value = "z")]
    r: BlochDirection64,
    /// Second setting (CHSH rule only)
    #[arg(long, value_parser = parse_direction, default_value = "x")]
    s: BlochDirection64,
    /// Winning rule
    #[arg(long, value_enum, default_value_t = WinningArg::Chsh)]
    winning: WinningArg,
    /// Optimize the settings instead of evaluating explicit ones
    #[arg(long)]
    optimize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WinningArg {
    Chsh,
    Anticorrelate,
}

impl From<WinningArg> for WinningRule {
    fn from(w: WinningArg) -> Self {
        match w {
            WinningArg::Chsh => WinningRule::Chsh,
            WinningArg::Anticorrelate => WinningRule::Anticorrelate,
        }
    }
}

#[derive(Debug, Args)]
struct KeyrateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_parser = parse_direction)]
    r: BlochDirection64,
    #[arg(long, value_parser = parse_direction)]
    s: BlochDirection64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Trials per property suite
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Base seed for all suites
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_direction(text: &str) -> Result<BlochDirection64, String> {
    match text {
        "x" => return Ok(BlochDirection64::x_axis()),
        "y" => return Ok(BlochDirection64::y_axis()),
        "z" => return Ok(BlochDirection64::z_axis()),
        _ => {}
    }
    let (theta, phi) = text
        .split_once(',')
        .ok_or_else(|| format!("expected x, y, z, or <theta>,<phi>, got '{text}'"))?;
    let theta: f64 = theta
        .trim()
        .parse()
        .map_err(|_| format!("invalid angle '{theta}'"))?;
    let phi: f64 = phi
        .trim()
        .parse()
        .map_err(|_| format!("invalid angle '{phi}'"))?;
    BlochDirection64::new(theta, phi).map_err(|e| e.to_string())
}

fn parse_grid(text: &str) -> Result<(usize, usize), String> {
    let (n, m) = text
        .split_once('x')
        .ok_or_else(|| format!("expected <N>x<M>, got '{text}'"))?;
    let n: usize = n.parse().map_err(|_| format!("invalid grid size '{n}'"))?;
    let m: usize = m.parse().map_err(|_| format!("invalid grid size '{m}'"))?;
    if n < 2 || m < 2 {
        return Err("grid must be at least 2x2".into());
    }
    Ok((n, m))
}

/// Formats with 10 significant digits, locale-independent.
pub fn fmt_sig10(x: f64) -> String {
    if x == 0.0 {
        return "0.000000000".to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..=9).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.9e}")
    }
}

struct Report {
    fields: Vec<(&'static str, String)>,
}

impl Report {
    fn new() -> Self {
        Self { fields: Vec::new() }
    }

    fn text(&mut self, key: &'static str, value: impl Into<String>) -> &mut Self {
        self.fields.push((key, value.into()));
        self
    }

    fn number(&mut self, key: &'static str, value: f64) -> &mut Self {
        self.text(key, fmt_sig10(value))
    }

    fn print(&self, format: OutputFormat) {
        match format {
            OutputFormat::Table => {
                for (key, value) in &self.fields {
                    println!("{key:<22} {value}");
                }
            }
            OutputFormat::Csv => {
                let header: Vec<&str> = self.fields.iter().map(|(k, _)| *k).collect();
                let row: Vec<&str> = self.fields.iter().map(|(_, v)| v.as_str()).collect();
                println!("{}", header.join(","));
                println!("{}", row.join(","));
            }
        }
    }
}

enum CliError {
    Usage(String),
    Unphysical(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Unphysical(_) => EXIT_UNPHYSICAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Unphysical(m) => m,
        }
    }
}

impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::ParseError { .. } => CliError::Usage(e.to_string()),
            StateError::UnphysicalParameters { .. } | StateError::ParameterOutOfRange { .. } => {
                CliError::Unphysical(e.to_string())
            }
        }
    }
}

impl From<crate::bounds::BoundsError> for CliError {
    fn from(e: crate::bounds::BoundsError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<crate::measure::MeasureError> for CliError {
    fn from(e: crate::measure::MeasureError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<crate::entropy::EntropyError> for CliError {
    fn from(e: crate::entropy::EntropyError) -> Self {
        CliError::Unphysical(e.to_string())
    }
}

fn load_state(spec: &str) -> Result<TwoQubitState<f64>, CliError> {
    Ok(parse_state_spec::<f64>(spec)?)
}

/// Parses and runs; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Bound(args) => cmd_bound(args),
        Command::Fg(args) => cmd_fg(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Game(args) => cmd_game(args),
        Command::Keyrate(args) => cmd_keyrate(args),
        Command::Verify(args) => return cmd_verify(args),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn cmd_bound(args: BoundArgs) -> Result<(), CliError> {
    let rho = load_state(&args.common.state)?;
    MeasurementPair::new(args.r, args.s, args.common.eps)?;
    let p_d_r = discord_probability(&rho, &args.r);
    let p_d_s = discord_probability(&rho, &args.s);
    let h_r = binary_entropy(p_d_r)?.bits;
    let h_s = binary_entropy(p_d_s)?.bits;
    let c = complementarity(&args.r, &args.s);
    let s_ab = cond_entropy_ab(&rho)?.bits;
    let rhs = berta_rhs(&rho, &args.r, &args.s)?;
    let mut report = Report::new();
    report
        .text("state", rho.label().to_string())
        .number("p_d_r", p_d_r)
        .number("p_d_s", p_d_s)
        .number("h_p_d_r", h_r)
        .number("h_p_d_s", h_s)
        .number("lhs", h_r + h_s)
        .number("c", c)
        .number("s_cond_ab", s_ab)
        .number("berta_rhs", rhs)
        .number("slack", h_r + h_s - rhs);
    report.print(args.common.format);
    Ok(())
}

fn cmd_fg(args: FgArgs) -> Result<(), CliError> {
    let rho = load_state(&args.common.state)?;
    let (mode, result) = if args.joint {
        ("joint", joint_fine_grained_with_grid(&rho, args.common.eps, args.common.grid)?)
    } else {
        (
            "fixed-r",
            fine_grained_bound_with_grid(&rho, &args.r, args.common.eps, args.common.grid)?,
        )
    };
    let mut report = Report::new();
    report
        .text("state", rho.label().to_string())
        .text("mode", mode)
        .number("r_theta", result.r.theta())
        .number("r_phi", result.r.phi())
        .number("p_d_r", result.p_d_r)
        .number("h_r", result.h_r.bits)
        .number("argmin_s_theta", result.argmin_s.theta())
        .number("argmin_s_phi", result.argmin_s.phi())
        .number("p_extremal", result.p_extremal)
        .number("h_s_min", result.h_s_min.bits)
        .number("fg_bound", result.fg_bound.bits)
        .number("berta_rhs_at_argmin", result.berta_rhs_at_argmin);
    report.print(args.common.format);
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    if args.steps < 2 {
        return Err(CliError::Usage(format!(
            "sweep needs at least 2 steps, got {}",
            args.steps
        )));
    }
    let rho = load_state(&args.common.state)?;
    let fg = fine_grained_bound_with_grid(&rho, &args.r, args.common.eps, args.common.grid)?;
    let p_d_r = discord_probability(&rho, &args.r);
    let h_r = binary_entropy(p_d_r)?.bits;

    println!("theta_s,phi_s,p_d_s,h_s,lhs_pair,berta_rhs,fg_bound");
    let span = args.to - args.from;
    for i in 0..args.steps {
        let theta = args.from + span * i as f64 / (args.steps - 1) as f64;
        let s = BlochDirection64::wrapped(theta, args.phi);
        let p_d_s = discord_probability(&rho, &s);
        let h_s = binary_entropy(p_d_s)?.bits;
        let rhs = berta_rhs(&rho, &args.r, &s)?;
        println!(
            "{},{},{},{},{},{},{}",
            fmt_sig10(theta),
            fmt_sig10(args.phi),
            fmt_sig10(p_d_s),
            fmt_sig10(h_s),
            fmt_sig10(h_r + h_s),
            fmt_sig10(rhs),
            fmt_sig10(fg.fg_bound.bits)
        );
    }
    Ok(())
}

fn cmd_game(args: GameArgs) -> Result<(), CliError> {
    let rho = load_state(&args.common.state)?;
    let rule = WinningRule::from(args.winning);
    let mut report = Report::new();
    report.text("state", rho.label().to_string());
    if args.optimize {
        let (spec, value) = crate::bounds::game_max(&rho, rule)?;
        report.text(
            "winning",
            match rule {
                WinningRule::Chsh => "chsh",
                WinningRule::Anticorrelate => "anticorrelate",
            },
        );
        for (side, settings) in [("alice", &spec.alice_settings), ("bob", &spec.bob_settings)] {
            for (i, d) in settings.iter().enumerate() {
                report.text(
                    match (side, i) {
                        ("alice", 0) => "alice_0",
                        ("alice", _) => "alice_1",
                        (_, 0) => "bob_0",
                        (_, _) => "bob_1",
                    },
                    format!("{},{}", fmt_sig10(d.theta()), fmt_sig10(d.phi())),
                );
            }
        }
        report.number("game_value", value);
    } else {
        let spec = match rule {
            WinningRule::Chsh => {
                GameSpec::uniform(vec![args.r, args.s], vec![args.r, args.s], rule)?
            }
            WinningRule::Anticorrelate => GameSpec::uniform(vec![args.r], vec![args.r], rule)?,
        };
        report.number("game_value", game_value(&rho, &spec));
    }
    report.print(args.common.format);
    Ok(())
}

fn cmd_keyrate(args: KeyrateArgs) -> Result<(), CliError> {
    let rho = load_state(&args.common.state)?;
    let pair = MeasurementPair::new(args.r, args.s, args.common.eps)?;
    let berta = key_rate_berta(&rho, &pair)?;
    let fine = key_rate_fine_grained(&rho, &pair, args.common.eps)?;
    let mut report = Report::new();
    report
        .text("state", rho.label().to_string())
        .number("c", complementarity(&args.r, &args.s))
        .number("key_rate_berta", berta)
        .number("key_rate_fine_grained", fine);
    report.print(args.common.format);
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> i32 {
    if args.trials < 1 {
        eprintln!("error: verify needs at least 1 trial");
        return EXIT_USAGE;
    }
    let suites = run_all(args.trials, args.seed);
    let mut all_pass = true;
    for suite in &suites {
        println!(
            "suite {:<26} pass {:>5} fail {:>5}",
            suite.name, suite.passed, suite.failed
        );
        if suite.failed > 0 {
            all_pass = false;
            if let Some(detail) = &suite.first_failure {
                eprintln!("first failure in {}: {}", suite.name, detail);
            }
        }
    }
    if all_pass {
        println!("verify: PASS ({} trials, seed {})", args.trials, args.seed);
        EXIT_OK
    } else {
        println!("verify: FAIL ({} trials, seed {})", args.trials, args.seed);
        EXIT_VERIFY_FAILED
    }
}
