//! `netgain`: validate scenarios, evaluate expected net gains, locate best
//! responses, verify the four analytical propositions, and emit sweep
//! series.
//!
//! Exit codes: 0 success; 1 scenario validation failure; 2 proposition
//! check failure (`verify` only); 64 usage error. Data goes to `--out` or
//! stdout, diagnostics to stderr, so pipelines can gate on the codes.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use netgain_core::scenario::{
    emit_report, emit_series, render_json, ReportFormat, ValidationSummary,
};
use netgain_core::solver::{verify_proposition, Proposition, PropositionReport};
use netgain_core::{
    best_response, load_scenario, solve_extrema, sweep, CoreError, InfoMode, Player, Scenario,
    StrategyProfile, SweepAxis,
};

const EXIT_VALIDATION: u8 = 1;
const EXIT_PROPOSITION: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "netgain",
    version,
    about = "Expected net gain engine for a two-player asymmetric conflict model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlayerArg {
    Us,
    Cn,
}

impl From<PlayerArg> for Player {
    fn from(value: PlayerArg) -> Self {
        match value {
            PlayerArg::Us => Player::Us,
            PlayerArg::Cn => Player::Cn,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Perfect,
    Incomplete,
}

impl From<ModeArg> for InfoMode {
    fn from(value: ModeArg) -> Self {
        match value {
            ModeArg::Perfect => InfoMode::Perfect,
            ModeArg::Incomplete => InfoMode::Incomplete,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    OwnUtility,
    OpponentUtility,
    CapabilityRatio,
}

impl From<AxisArg> for SweepAxis {
    fn from(value: AxisArg) -> Self {
        match value {
            AxisArg::OwnUtility => SweepAxis::OwnUtility,
            AxisArg::OpponentUtility => SweepAxis::OpponentUtility,
            AxisArg::CapabilityRatio => SweepAxis::CapabilityRatio,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for ReportFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Json => ReportFormat::Json,
            FormatArg::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file (UTF-8 JSON, schema_version "1").
    #[arg(long, value_name = "PATH")]
    scenario: PathBuf,

    /// Override the scenario's integrator seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct OutputArgs {
    /// Write the result here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check every scenario invariant and print a summary.
    Validate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value = "json")]
        format: FormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a player's expected net gain at one strategy profile.
    Eval {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        player: PlayerArg,
        #[arg(long, default_value = "perfect")]
        mode: ModeArg,
        /// The player's own decision utility (defaults to c_low).
        #[arg(long)]
        own: Option<f64>,
        /// The opponent's decision utility (defaults to c_low).
        #[arg(long)]
        fixed_opponent: Option<f64>,
        #[arg(long, default_value = "json")]
        format: FormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Report whether the player's best response is attained, and where.
    BestResponse {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        player: PlayerArg,
        #[arg(long, default_value = "perfect")]
        mode: ModeArg,
        /// The opponent's decision utility (defaults to c_low).
        #[arg(long)]
        fixed_opponent: Option<f64>,
        #[arg(long, default_value = "json")]
        format: FormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify propositions P1-P4 against their closed-form oracles.
    Verify {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, default_value = "json")]
        format: FormatArg,
        /// Parallelism for the four proposition checks (default: cores).
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Emit an (x, expected net gain) series along one axis.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long)]
        player: PlayerArg,
        #[arg(long, default_value = "perfect")]
        mode: ModeArg,
        #[arg(long)]
        axis: AxisArg,
        #[arg(long, default_value_t = 50)]
        grid: usize,
        /// Value of the coordinate that is not swept (defaults to c_low).
        #[arg(long)]
        fixed_opponent: Option<f64>,
        #[arg(long, default_value = "csv")]
        format: FormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Failure carrying the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl ToString) -> Self {
        Self {
            code: EXIT_VALIDATION,
            message: message.to_string(),
        }
    }

    fn usage(message: impl ToString) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

impl From<CoreError> for Failure {
    fn from(err: CoreError) -> Self {
        match err {
            // Bad flag values (out-of-box utilities, missing noise for the
            // requested mode, degenerate grids) are usage errors.
            CoreError::Domain(_) | CoreError::OutOfBox(_) => Failure::usage(err),
            other => Failure::validation(other),
        }
    }
}

fn load(args: &ScenarioArgs) -> Result<Scenario, Failure> {
    let text = std::fs::read_to_string(&args.scenario).map_err(|e| {
        Failure::validation(format!("cannot read {}: {e}", args.scenario.display()))
    })?;
    let mut scenario = load_scenario(&text)
        .map_err(|e| Failure::validation(format!("{}: {e}", args.scenario.display())))?;
    if let Some(seed) = args.seed {
        scenario.settings.integrator.seed = seed;
    }
    Ok(scenario)
}

fn write_output(output: &OutputArgs, data: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => std::fs::write(path, data)
            .map_err(|e| Failure::validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(data.as_bytes())
                .map_err(|e| Failure::validation(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Profile from the player's own utility and the opponent's.
fn profile_of(player: Player, own: f64, opponent: f64) -> StrategyProfile {
    match player {
        Player::Us => StrategyProfile::new(own, opponent),
        Player::Cn => StrategyProfile::new(opponent, own),
    }
}

fn run_verify(scenario: &Scenario, jobs: usize) -> Result<[PropositionReport; 4], Failure> {
    let run_one = |p: Proposition| verify_proposition(scenario, p).map_err(Failure::from);
    if jobs <= 1 {
        let mut out = Vec::with_capacity(4);
        for p in Proposition::ALL {
            out.push(run_one(p)?);
        }
        Ok(out.try_into().expect("four propositions"))
    } else {
        // Fan out the four checks; results merge by proposition index so
        // scheduling cannot reorder the report.
        let results = std::thread::scope(|scope| {
            let handles: Vec<_> = Proposition::ALL
                .into_iter()
                .map(|p| scope.spawn(move || run_one(p)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("verification task panicked"))
                .collect::<Vec<_>>()
        });
        let mut out = Vec::with_capacity(4);
        for result in results {
            out.push(result?);
        }
        Ok(out.try_into().expect("four propositions"))
    }
}

fn dispatch(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Validate {
            scenario,
            format,
            output,
        } => {
            let scenario = load(&scenario)?;
            let warnings = scenario
                .validate()
                .map_err(|e| Failure::validation(format!("invalid scenario:\n{e}")))?;
            let summary = ValidationSummary::for_scenario(&scenario, warnings);
            let data = match ReportFormat::from(format) {
                ReportFormat::Json => render_json(&summary),
                ReportFormat::Csv => format!(
                    "valid,mode,win_prob_us,win_prob_cn,warnings\n{},{},{:.11e},{:.11e},{}\n",
                    summary.valid,
                    summary.mode,
                    summary.win_prob_us,
                    summary.win_prob_cn,
                    summary.warnings.len()
                ),
            };
            write_output(&output, &data)?;
            Ok(0)
        }
        Command::Eval {
            scenario,
            player,
            mode,
            own,
            fixed_opponent,
            format,
            output,
        } => {
            let scenario = load(&scenario)?;
            let player = Player::from(player);
            let mode = InfoMode::from(mode);
            let own = own.unwrap_or(scenario.bounds.c_low);
            let opponent = fixed_opponent.unwrap_or(scenario.bounds.c_low);
            let profile = profile_of(player, own, opponent);
            let value = match (player, mode) {
                (Player::Us, InfoMode::Perfect) => scenario.eval_us_perfect(&profile),
                (Player::Cn, InfoMode::Perfect) => scenario.eval_cn_perfect(&profile),
                (Player::Us, InfoMode::Incomplete) => scenario.eval_us_incomplete(&profile),
                (Player::Cn, InfoMode::Incomplete) => scenario.eval_cn_incomplete(&profile),
            }?;

            #[derive(serde::Serialize)]
            struct EvalResult {
                player: Player,
                mode: InfoMode,
                u_win_us: f64,
                u_win_cn: f64,
                value: f64,
            }
            let result = EvalResult {
                player,
                mode,
                u_win_us: profile.u_win_us,
                u_win_cn: profile.u_win_cn,
                value,
            };
            let data = match ReportFormat::from(format) {
                ReportFormat::Json => render_json(&result),
                ReportFormat::Csv => format!(
                    "player,mode,u_win_us,u_win_cn,value\n{player},{mode},{:.11e},{:.11e},{:.11e}\n",
                    profile.u_win_us, profile.u_win_cn, value
                ),
            };
            write_output(&output, &data)?;
            Ok(0)
        }
        Command::BestResponse {
            scenario,
            player,
            mode,
            fixed_opponent,
            format,
            output,
        } => {
            let scenario = load(&scenario)?;
            let player = Player::from(player);
            let mode = InfoMode::from(mode);
            let fixed = fixed_opponent.unwrap_or(scenario.bounds.c_low);
            let response = best_response(player, mode, &scenario, fixed)?;
            let (_, max) = solve_extrema(player, mode, &scenario, fixed)?;

            #[derive(serde::Serialize)]
            struct BestResponseResult {
                player: Player,
                mode: InfoMode,
                fixed_opponent: f64,
                exists: bool,
                arg: Option<f64>,
                value: f64,
                attained: bool,
            }
            let result = BestResponseResult {
                player,
                mode,
                fixed_opponent: fixed,
                exists: response.exists,
                arg: response.arg,
                value: response.value,
                attained: max.attained,
            };
            let data = match ReportFormat::from(format) {
                ReportFormat::Json => render_json(&result),
                ReportFormat::Csv => format!(
                    "player,mode,exists,arg,value\n{player},{mode},{},{},{:.11e}\n",
                    response.exists,
                    response
                        .arg
                        .map(|a| format!("{a:.11e}"))
                        .unwrap_or_default(),
                    response.value
                ),
            };
            write_output(&output, &data)?;
            Ok(0)
        }
        Command::Verify {
            scenario,
            format,
            jobs,
            output,
        } => {
            let scenario = load(&scenario)?;
            let jobs =
                jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let reports = run_verify(&scenario, jobs)?;
            write_output(&output, &emit_report(&reports, format.into()))?;
            if netgain_core::scenario::all_propositions_pass(&reports) {
                Ok(0)
            } else {
                for report in reports
                    .iter()
                    .filter(|r| r.status == netgain_core::PropositionStatus::Fail)
                {
                    eprintln!(
                        "proposition {} failed: {}",
                        report.proposition, report.notes
                    );
                }
                Ok(EXIT_PROPOSITION)
            }
        }
        Command::Sweep {
            scenario,
            player,
            mode,
            axis,
            grid,
            fixed_opponent,
            format,
            output,
        } => {
            let scenario = load(&scenario)?;
            let fixed = fixed_opponent.unwrap_or(scenario.bounds.c_low);
            let series = sweep(
                player.into(),
                mode.into(),
                &scenario,
                axis.into(),
                grid,
                fixed,
            )?;
            write_output(&output, &emit_series(&series, format.into()))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version print to stdout and succeed; everything
            // else is a usage error.
            let code = if err.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
