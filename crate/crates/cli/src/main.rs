//! `esmcert`: decide whether a scenario's payoff cone admits an equivalent
//! super-martingale measure, compute the minimal constants of the
//! characterizations, construct certifying measures, and run the bundled
//! case studies. Exit codes: 0 = affirmative, 1 = certified negative,
//! 2 = input error.

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use esmcert_core::casebook;
use esmcert_core::rational::{parse_rational, Rational};
use esmcert_core::report::{self, KminMode};
use esmcert_core::scenario::{Scenario, ScenarioFile};
use esmcert_core::space::Measure;

#[derive(Parser)]
#[command(name = "esmcert", version, about, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every criterion on the scenario and report the existence verdict
    Check { scenario: PathBuf },
    /// Construct the equivalent super-martingale measure or a certificate
    Esm { scenario: PathBuf },
    /// Compute a minimal constant (finite = affirmative)
    Kmin {
        scenario: PathBuf,
        /// Which characterization the constant belongs to
        #[arg(long, value_enum)]
        mode: Mode,
        /// Measure file replacing Q = P0: a JSON array of rationals in atom order
        #[arg(long)]
        q: Option<PathBuf>,
    },
    /// Search the band (1/(k+1))·P0 ≤ P ≤ (k+1)·P0
    Band {
        scenario: PathBuf,
        /// Band constant k ≥ 0, e.g. "1/2"
        #[arg(long)]
        k: String,
    },
    /// Equivalent coupling with the scenario's prescribed marginals
    Couple { scenario: PathBuf },
    /// Run a bundled case study
    #[command(subcommand)]
    Case(Case),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Bstar,
    B,
    Cstarstar,
}

#[derive(Subcommand)]
enum Case {
    /// Random payoff spaces: existence iff no arbitrage, plus the band bound
    FiniteDim {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        atoms: usize,
        #[arg(long, default_value_t = 2)]
        generators: usize,
    },
    /// Independent ±1 coordinates: the ess-sup identity and its constant
    Signs {
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Comma-separated P(X_m = -1), defaults to (m+1)^-2
        #[arg(long)]
        weights: Option<String>,
    },
    /// Truncated Poisson family: ε-approximation without an equivalent measure
    ApproxEsfa {
        #[arg(long, default_value = "1/10")]
        eps: String,
        #[arg(long = "N", default_value_t = 8)]
        cap: usize,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Alternating-band payoffs on a dyadic grid: the vanishing-risk gap
    VanishingRisk {
        #[arg(long, default_value_t = 6)]
        bound: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Bounded dominating density g = ψ/r for zero-mean payoffs
    BoundedDensity {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        d: usize,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok((text, affirmative)) => {
            print!("{text}");
            if affirmative {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &PathBuf) -> Result<Scenario, String> {
    ScenarioFile::from_path(path)
        .and_then(|f| f.build())
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn load_q(scenario: &Scenario, path: &Option<PathBuf>) -> Result<Measure, String> {
    let Some(path) = path else {
        return Ok(scenario.space.reference_measure());
    };
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let entries: Vec<String> =
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let weights: Vec<Rational> = entries
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<_, _>>()
        .map_err(|e| format!("{}: {e}", path.display()))?;
    Measure::new(&scenario.space, weights).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<(String, bool), String> {
    match cli.command {
        Command::Check { scenario } => {
            let s = load(&scenario)?;
            report::check_text(&s.cone).map_err(|e| e.to_string())
        }
        Command::Esm { scenario } => {
            let s = load(&scenario)?;
            report::esm_text(&s.cone).map_err(|e| e.to_string())
        }
        Command::Kmin { scenario, mode, q } => {
            let s = load(&scenario)?;
            let q = load_q(&s, &q)?;
            let mode = match mode {
                Mode::Bstar => KminMode::BStar,
                Mode::B => KminMode::B,
                Mode::Cstarstar => KminMode::CStarStar,
            };
            report::kmin_text(&s.cone, mode, &q).map_err(|e| e.to_string())
        }
        Command::Band { scenario, k } => {
            let s = load(&scenario)?;
            let k = parse_rational(&k).map_err(|e| format!("--k: {e}"))?;
            let q = s.space.reference_measure();
            report::band_text(&s.cone, &q, &k).map_err(|e| e.to_string())
        }
        Command::Couple { scenario } => {
            let s = load(&scenario)?;
            let (ps, pair) = s
                .coupling
                .as_ref()
                .ok_or_else(|| "scenario has no product block".to_string())?;
            report::couple_text(ps, pair).map_err(|e| e.to_string())
        }
        Command::Case(case) => {
            let result = match case {
                Case::FiniteDim {
                    seed,
                    atoms,
                    generators,
                } => casebook::case_finite_dim_ftap(seed, atoms, generators),
                Case::Signs { n, weights } => {
                    let weights = match weights {
                        Some(list) => Some(
                            list.split(',')
                                .map(|s| parse_rational(s.trim()))
                                .collect::<Result<Vec<_>, _>>()
                                .map_err(|e| format!("--weights: {e}"))?,
                        ),
                        None => None,
                    };
                    casebook::case_sign_sequences(n, weights)
                }
                Case::ApproxEsfa { eps, cap, n } => {
                    let eps = parse_rational(&eps).map_err(|e| format!("--eps: {e}"))?;
                    casebook::case_approx_esfa(&eps, cap, n)
                }
                Case::VanishingRisk { bound, n } => casebook::case_nflvr_gap(bound, n),
                Case::BoundedDensity { seed, d } => casebook::case_bounded_density(seed, d),
            };
            let report = result.map_err(|e| e.to_string())?;
            Ok(report::case_text(&report))
        }
    }
}
