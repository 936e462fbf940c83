//! Command-line front end: JSON in, JSON (or a short verdict) out.
//!
//! Exit codes: 0 success, 1 verification failure (a check evaluated to
//! false or a report did not pass), 2 input error, 3 internal
//! invariant breach.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use grodef::binsys::{self, BinomialSystem};
use grodef::cohomology::{self, CohomInput};
use grodef::error::Error;
use grodef::gin;
use grodef::hilbert::QPolynomial;
use grodef::orders::{self, ExponentVec, TermOrderSpec};
use grodef::polyalg::{IdealData, IdealGB};
use grodef::sequences::{self, BoundMode, BoundSpec, ConnectingSequence};

#[derive(Parser)]
#[command(name = "grodef", version, about = "Groebner deformations of Borel-type ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order relations on exponent vectors.
    Order {
        #[command(subcommand)]
        sub: OrderCmd,
    },
    /// Binomial systems: validation, classification, bases.
    Binsys {
        #[command(subcommand)]
        sub: BinsysCmd,
    },
    /// Generic initial ideals.
    Gin {
        #[command(subcommand)]
        sub: GinCmd,
    },
    /// Connecting sequences.
    Connect {
        #[command(subcommand)]
        sub: ConnectCmd,
    },
    /// Cohomological Hilbert functions.
    Cohom {
        #[command(subcommand)]
        sub: CohomCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RelArg {
    Hlex,
    Rlex,
    Borel,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Hlex,
    Rlex,
}

impl OrderArg {
    fn to_spec(self) -> TermOrderSpec {
        match self {
            OrderArg::Hlex => TermOrderSpec::Hlex,
            OrderArg::Rlex => TermOrderSpec::Rlex,
        }
    }
}

#[derive(Args)]
struct OutArg {
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OrderCmd {
    /// Compare two exponent vectors.
    Cmp {
        /// Relation to evaluate.
        #[arg(long)]
        rel: RelArg,
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Upper triangular matrix witnessing Borel dominance.
    Witness {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum BinsysCmd {
    /// Validate the defining conditions of a system.
    Validate {
        sys: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Print the strongest class of a system.
    Classify {
        sys: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Certified reverse lexicographic Groebner basis of the ideal.
    Gb {
        sys: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Groebner basis of the saturation.
    Sat {
        sys: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Homogeneous lexicographic initial ideal (Mall systems).
    Inhlex {
        sys: PathBuf,
        /// Take the initial ideal of the saturation instead.
        #[arg(long)]
        sat: bool,
        #[command(flatten)]
        out: OutArg,
    },
    /// One ideal of the dimension filtration.
    Filtration {
        #[arg(long)]
        i: usize,
        sys: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum GinCmd {
    /// Generic initial ideal of an ideal presented by generators.
    Compute {
        #[arg(long)]
        order: OrderArg,
        #[arg(long, default_value_t = 2)]
        trials: u32,
        #[arg(long)]
        seed: u64,
        ideal: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Whether the ideal of a system is fixed by random unipotent
    /// coordinate changes.
    UnipotentCheck {
        #[arg(long, default_value_t = 5)]
        trials: u32,
        #[arg(long)]
        seed: u64,
        sys: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Equal,
    Leq,
}

#[derive(Subcommand)]
enum ConnectCmd {
    /// Build a verified connecting sequence between two ideals.
    Make {
        #[arg(long)]
        mode: ModeArg,
        #[arg(long)]
        bounds: PathBuf,
        #[arg(long, default_value_t = 2)]
        trials: u32,
        #[arg(long)]
        seed: u64,
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Re-verify a sequence against bounds with fresh randomness.
    Verify {
        #[arg(long)]
        bounds: PathBuf,
        #[arg(long, default_value_t = 2)]
        trials: u32,
        #[arg(long)]
        seed: u64,
        seq: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Subcommand)]
enum CohomCmd {
    /// Cohomological Hilbert functions of a Borel ideal or a binomial
    /// system.
    Profile {
        /// Degree window lo:hi for the tables.
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
        /// For a system input, profile the saturation instead.
        #[arg(long)]
        saturated: bool,
        input: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
    /// Monotonicity (and, under rlex, equality with the generic
    /// initial ideal) of cohomology for a binomial system.
    HsCheck {
        #[arg(long)]
        order: OrderArg,
        #[arg(long, default_value_t = 2)]
        trials: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
        window: Option<(i64, i64)>,
        sys: PathBuf,
        #[command(flatten)]
        out: OutArg,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err("window must be lo:hi".into());
    }
    let lo = parts[0].parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi = parts[1].parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err("window is empty".into());
    }
    Ok((lo, hi))
}

/// Anything the command handlers can fail with.
enum CliError {
    Input(String),
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantBreach(_)
            | Error::GinTrialsDisagree
            | Error::SequenceConstruction(_)
            | Error::StabilizationUncertified => CliError::Internal(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

type CliResult = Result<Outcome, CliError>;

/// A successful command run: the payload and whether a performed check
/// passed (checks that evaluate to false exit with code 1).
struct Outcome {
    payload: String,
    check_passed: bool,
}

impl Outcome {
    fn text(s: impl Into<String>) -> Outcome {
        Outcome {
            payload: s.into(),
            check_passed: true,
        }
    }

    fn json(v: &serde_json::Value) -> Outcome {
        Outcome {
            payload: serde_json::to_string_pretty(v).expect("serializable"),
            check_passed: true,
        }
    }

    fn check(v: &serde_json::Value, passed: bool) -> Outcome {
        Outcome {
            payload: serde_json::to_string_pretty(v).expect("serializable"),
            check_passed: passed,
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("malformed {}: {e}", path.display())))
}

fn read_ideal(path: &PathBuf) -> Result<IdealGB, CliError> {
    let data: IdealData = read_json(path)?;
    Ok(data.into_gb()?)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Order { sub } => run_order(sub),
        Command::Binsys { sub } => run_binsys(sub),
        Command::Gin { sub } => run_gin(sub),
        Command::Connect { sub } => run_connect(sub),
        Command::Cohom { sub } => run_cohom(sub),
    }
}

fn run_order(cmd: OrderCmd) -> CliResult {
    match cmd {
        OrderCmd::Cmp { rel, a, b, out } => {
            let va: ExponentVec = read_json(&a)?;
            let vb: ExponentVec = read_json(&b)?;
            let text = match rel {
                RelArg::Hlex => ordering_name(orders::cmp_hlex(&va, &vb)?),
                RelArg::Rlex => ordering_name(orders::cmp_rlex(&va, &vb)?),
                RelArg::Borel => {
                    if orders::borel_geq(&va, &vb)? {
                        "GEQ".into()
                    } else {
                        "NGEQ".into()
                    }
                }
            };
            emit(&out, Outcome::text(text))
        }
        OrderCmd::Witness { a, b, out } => {
            let va: ExponentVec = read_json(&a)?;
            let vb: ExponentVec = read_json(&b)?;
            let m = orders::borel_witness(&va, &vb)?;
            emit(&out, Outcome::json(&serde_json::to_value(&m).unwrap()))
        }
    }
}

fn ordering_name(o: std::cmp::Ordering) -> String {
    match o {
        std::cmp::Ordering::Less => "LT".into(),
        std::cmp::Ordering::Equal => "EQ".into(),
        std::cmp::Ordering::Greater => "GT".into(),
    }
}

fn run_binsys(cmd: BinsysCmd) -> CliResult {
    match cmd {
        BinsysCmd::Validate { sys, out } => {
            // Deserialization runs the full validation.
            let _: BinomialSystem = read_json(&sys)?;
            emit(&out, Outcome::text("valid"))
        }
        BinsysCmd::Classify { sys, out } => {
            let sys: BinomialSystem = read_json(&sys)?;
            let class = binsys::classify(&sys);
            emit(&out, Outcome::text(format!("{class:?}").to_lowercase()))
        }
        BinsysCmd::Gb { sys, out } => {
            let sys: BinomialSystem = read_json(&sys)?;
            let gb = binsys::gb_rlex(&sys)?;
            emit(&out, Outcome::json(&serde_json::to_value(&gb).unwrap()))
        }
        BinsysCmd::Sat { sys, out } => {
            let sys: BinomialSystem = read_json(&sys)?;
            let gb = binsys::sat_gb(&sys)?;
            emit(&out, Outcome::json(&serde_json::to_value(&gb).unwrap()))
        }
        BinsysCmd::Inhlex { sys, sat, out } => {
            let sys: BinomialSystem = read_json(&sys)?;
            let init = if sat {
                binsys::initial_hlex_sat(&sys)?
            } else {
                binsys::initial_hlex(&sys)?
            };
            emit(&out, Outcome::json(&serde_json::to_value(&init).unwrap()))
        }
        BinsysCmd::Filtration { i, sys, out } => {
            let sys: BinomialSystem = read_json(&sys)?;
            let ideal = binsys::filtration_ideal(&sys, i)?;
            emit(&out, Outcome::json(&serde_json::to_value(&ideal).unwrap()))
        }
    }
}

fn run_gin(cmd: GinCmd) -> CliResult {
    match cmd {
        GinCmd::Compute {
            order,
            trials,
            seed,
            ideal,
            out,
        } => {
            let gb = read_ideal(&ideal)?;
            let result = gin::gin_compute(&gb, &order.to_spec(), trials, seed)?;
            emit(&out, Outcome::json(&serde_json::to_value(&result).unwrap()))
        }
        GinCmd::UnipotentCheck {
            trials,
            seed,
            sys,
            out,
        } => {
            let sys: BinomialSystem = read_json(&sys)?;
            let fixed = gin::check_unipotent_fixed(&sys, trials, seed)?;
            emit(
                &out,
                Outcome::check(&serde_json::json!({ "fixed": fixed }), fixed),
            )
        }
    }
}

fn run_connect(cmd: ConnectCmd) -> CliResult {
    match cmd {
        ConnectCmd::Make {
            mode,
            bounds,
            trials,
            seed,
            a,
            b,
            out,
        } => {
            let bounds: BoundSpec = read_json(&bounds)?;
            let ia = read_ideal(&a)?;
            let ib = read_ideal(&b)?;
            let seq = match mode {
                ModeArg::Equal => {
                    if bounds.mode != BoundMode::Equal {
                        return Err(CliError::Input("bounds file is not in equal mode".into()));
                    }
                    sequences::connect_equal_hf(&ia, &ib, &bounds, trials, seed)?
                }
                ModeArg::Leq => {
                    if bounds.mode != BoundMode::Leq {
                        return Err(CliError::Input("bounds file is not in leq mode".into()));
                    }
                    // The common Hilbert polynomial is read off the
                    // first endpoint and cross-checked inside.
                    let p = ideal_polynomial(&ia)?;
                    sequences::connect_leq_hf(&ia, &ib, &p, &bounds, trials, seed)?
                }
            };
            emit(&out, Outcome::json(&seq.to_json()))
        }
        ConnectCmd::Verify {
            bounds,
            trials,
            seed,
            seq,
            out,
        } => {
            let bounds: BoundSpec = read_json(&bounds)?;
            let raw: serde_json::Value = read_json(&seq)?;
            let seq = ConnectingSequence::from_json(&raw)?;
            let report = sequences::verify_sequence(&seq, &bounds, trials, seed)?;
            let pass = report.pass;
            emit(
                &out,
                Outcome::check(&serde_json::to_value(&report).unwrap(), pass),
            )
        }
    }
}

fn ideal_polynomial(ideal: &IdealGB) -> Result<QPolynomial, CliError> {
    let n = ideal.num_vars();
    let h = grodef::hilbert::hf_monomial_ideal(
        &grodef::polyalg::initial_ideal(ideal),
        ideal.max_gen_degree() as i64 + n as i64 + 2,
    )?;
    Ok(grodef::hilbert::hilbert_polynomial(&h)?)
}

/// Profile inputs: a binomial system (recognized by its displacement
/// field) or an ideal presented by monomial generators.
fn read_cohom_input(path: &PathBuf, saturated: bool) -> Result<CohomInput, CliError> {
    let raw: serde_json::Value = read_json(path)?;
    if raw.get("rho").is_some() {
        let sys: BinomialSystem =
            serde_json::from_value(raw).map_err(|e| CliError::Input(e.to_string()))?;
        if saturated {
            Ok(CohomInput::SaturatedSystem(sys))
        } else {
            Ok(CohomInput::System(sys))
        }
    } else {
        let data: IdealData =
            serde_json::from_value(raw).map_err(|e| CliError::Input(e.to_string()))?;
        let gb = data.into_gb()?;
        let mi = gb.as_monomial_ideal()?;
        Ok(CohomInput::Borel(mi))
    }
}

fn run_cohom(cmd: CohomCmd) -> CliResult {
    match cmd {
        CohomCmd::Profile {
            window,
            saturated,
            input,
            out,
        } => {
            let input = read_cohom_input(&input, saturated)?;
            let profile = cohomology::cohom_profile(&input, window)?;
            emit(&out, Outcome::json(&profile.to_json()))
        }
        CohomCmd::HsCheck {
            order,
            trials,
            seed,
            window,
            sys,
            out,
        } => {
            let sys: BinomialSystem = read_json(&sys)?;
            let monotone = cohomology::hs_monotone_check(&sys, &order.to_spec(), window)?;
            let equality = match order {
                OrderArg::Rlex => {
                    Some(cohomology::hs_equality_check(&sys, trials, seed, window)?)
                }
                OrderArg::Hlex => None,
            };
            let pass = monotone && equality.unwrap_or(true);
            let payload = serde_json::json!({
                "monotone": monotone,
                "equality": equality,
            });
            emit(&out, Outcome::check(&payload, pass))
        }
    }
}

fn emit(out: &OutArg, outcome: Outcome) -> CliResult {
    if let Some(path) = &out.out {
        fs::write(path, format!("{}\n", outcome.payload))
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    } else {
        use std::io::Write;
        let mut stdout = std::io::stdout().lock();
        match writeln!(stdout, "{}", outcome.payload) {
            Ok(()) => {}
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            Err(e) => return Err(CliError::Input(format!("cannot write output: {e}"))),
        }
    }
    Ok(Outcome {
        payload: String::new(),
        check_passed: outcome.check_passed,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            if outcome.check_passed {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
