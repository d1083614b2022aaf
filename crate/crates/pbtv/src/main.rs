//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when any certified inequality is violated,
//! 2 on usage or configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pbtv::gen::{CountSpec, GenConfig, Mode};
use pbtv::report;
use pbtv::suite::{run_oracle_check, run_suite_with, Suite, SuiteOptions};
use pbtv::{search_min_ratio, HarnessError, SearchKind};
use pbtv_core::consts::{homog_coeff, TV_LOWER_COEFF};
use pbtv_core::oracle::product_tv_bruteforce;
use pbtv_core::{certify_pair, pb_pmf, tv, ParamVec};

/// Exact Poisson-binomial laws, total-variation distances, and bound
/// certification sweeps.
#[derive(Parser)]
#[command(name = "pbtv", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_params(text: &str) -> Result<ParamVec, String> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(ParamVec::empty());
    }
    let mut values = Vec::new();
    for token in text.split(',') {
        let v: f64 = token
            .trim()
            .parse()
            .map_err(|_| format!("`{}` is not a number", token.trim()))?;
        values.push(v);
    }
    ParamVec::new(values).map_err(|e| e.to_string())
}

fn parse_count_spec(text: &str) -> Result<CountSpec, String> {
    CountSpec::parse(text).map_err(|e| e.to_string())
}

fn parse_mode(text: &str) -> Result<Mode, String> {
    Mode::parse(text).map_err(|e| e.to_string())
}

#[derive(Args)]
struct PairArgs {
    /// First parameter vector, comma-separated values in [0, 1].
    #[arg(long, value_parser = parse_params)]
    p: ParamVec,
    /// Second parameter vector, same length.
    #[arg(long, value_parser = parse_params)]
    q: ParamVec,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact law of the Bernoulli sum with the given parameters.
    Pmf {
        /// Success probabilities, comma-separated values in [0, 1].
        #[arg(long, value_parser = parse_params)]
        params: ParamVec,
        /// Emit `{"offset": ..., "mass": [...]}` instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Total variation distance between two Bernoulli-sum laws.
    Tv {
        #[command(flatten)]
        pair: PairArgs,
        /// Also evaluate the product-measure distance exactly (n <= 20).
        #[arg(long)]
        bruteforce: bool,
    },
    /// Certify every applicable bound for one pair; prints a JSON report.
    Bounds {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Run a named certification sweep over a seeded instance stream.
    Certify {
        /// One of: thm1, thm2, thm3, j-bound, pigeonhole, bcv-peak,
        /// split-lemma, mixture, homog-main, unimodality, derivative.
        #[arg(long)]
        suite: String,
        /// Coordinate count: a fixed value like `50` or a range `1..200`.
        #[arg(long, value_parser = parse_count_spec, default_value = "1..200")]
        n: CountSpec,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instance generator mode (defaults to uniform; domination-based
        /// suites coerce to dominating).
        #[arg(long, value_parser = parse_mode, default_value = "uniform")]
        mode: Mode,
        /// Mode parameter (perturbation, boundary fraction, or epsilon).
        #[arg(long)]
        epsilon: Option<f64>,
        /// Write the report to this `.json` or `.csv` path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores; 1 forces sequential).
        #[arg(long)]
        workers: Option<usize>,
        /// Override the suite's slack tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Minimize an objective over instances: multi-start plus
    /// coordinatewise golden-section refinement.
    Search {
        /// One of: homog-ratio, tv-over-phi, split-conjecture-slack.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of multi-start instances.
        #[arg(long, default_value_t = 16)]
        starts: usize,
        /// Coordinate-descent rounds per start.
        #[arg(long, default_value_t = 2)]
        refine: usize,
        #[arg(long, value_parser = parse_count_spec, default_value = "1..12")]
        n: CountSpec,
        #[arg(long, value_parser = parse_mode, default_value = "uniform")]
        mode: Mode,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Write the extremal record to this `.json` or `.csv` path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a self-check of the brute-force oracles.
    Oracle {
        /// One of: derivative, mixture, affinity, dpi.
        #[arg(long)]
        check: String,
        /// Size cap for the generated instances.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Override the check's agreement tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn run(cli: Cli) -> Result<ExitCode, HarnessError> {
    match cli.command {
        Command::Pmf { params, json } => {
            let law = pb_pmf(&params);
            if json {
                print!("{}", report::pmf_json(&law));
            } else {
                for (k, mass) in law.iter() {
                    println!("{k}\t{mass}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Tv { pair, bruteforce } => {
            let d = tv(&pb_pmf(&pair.p), &pb_pmf(&pair.q));
            println!("tv_pb\t{d}");
            if bruteforce {
                let product = product_tv_bruteforce(&pair.p, &pair.q)?;
                println!("tv_product\t{product}");
                if product < d - 1e-12 {
                    eprintln!("violation: product distance below sum distance");
                    return Ok(ExitCode::from(1));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { pair } => {
            let rep = certify_pair(&pair.p, &pair.q)?;
            print!("{}", report::bound_report_json(&rep, &pair.p, &pair.q));
            if rep.all_pass() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("violation: a certified bound failed; see flags in the report");
                Ok(ExitCode::from(1))
            }
        }
        Command::Certify {
            suite,
            n,
            count,
            seed,
            mode,
            epsilon,
            out,
            workers,
            tol,
        } => {
            let suite = Suite::parse(&suite)?;
            let mut cfg = GenConfig::new(n, mode, seed, count);
            cfg.epsilon = epsilon;
            let opts = SuiteOptions {
                workers,
                tolerance: tol,
            };
            let rep = run_suite_with(suite, &cfg, opts)?;
            eprintln!(
                "suite {} | mode {} | n {} | {} instances | {} violations | {:.3}s",
                rep.suite,
                rep.mode,
                rep.n,
                rep.instances,
                rep.violations.len(),
                rep.duration.as_secs_f64()
            );
            if let Some(r) = &rep.min_slack {
                eprintln!("min slack {} at instance {}", r.objective, r.iteration);
            }
            if let Some(r) = &rep.conjecture_min {
                eprintln!(
                    "conjecture slack minimum {} at instance {} (recorded, not asserted)",
                    r.objective, r.iteration
                );
            }
            match &out {
                Some(path) => report::emit_suite_report(&rep, path)?,
                None => print!("{}", report::suite_report_json(&rep)),
            }
            if rep.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("violation: {} instance(s) failed", rep.violations.len());
                Ok(ExitCode::from(1))
            }
        }
        Command::Search {
            kind,
            seed,
            starts,
            refine,
            n,
            mode,
            epsilon,
            out,
        } => {
            let kind = SearchKind::parse(&kind)?;
            let mut cfg = GenConfig::new(n, mode, seed, starts);
            cfg.epsilon = epsilon;
            let record = search_min_ratio(kind, &cfg, refine)?;
            eprintln!(
                "search {} | {} starts | best objective {} at start {} | {}",
                record.objective_kind, starts, record.objective, record.iteration,
                record.timestamp
            );
            match &out {
                Some(path) => report::emit_search_record(&record, path)?,
                None => print!("{}", report::search_record_json(&record)),
            }
            // Certified floors: searching below them means a broken bound.
            let floor = match kind {
                SearchKind::TvOverPhi => Some(TV_LOWER_COEFF),
                SearchKind::HomogRatio => Some(homog_coeff()),
                SearchKind::SplitConjectureSlack => None,
            };
            if let Some(floor) = floor {
                if record.objective < floor - 1e-9 {
                    eprintln!(
                        "violation: objective {} fell below the certified floor {floor}",
                        record.objective
                    );
                    return Ok(ExitCode::from(1));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle {
            check,
            n,
            seed,
            count,
            tol,
        } => {
            let outcome = run_oracle_check(&check, n, seed, count, tol)?;
            println!(
                "{}\t{}\t{}",
                outcome.check,
                if outcome.passed { "pass" } else { "FAIL" },
                outcome.detail
            );
            Ok(if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
