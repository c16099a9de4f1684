use std::net::{IpAddr, Ipv4Addr, SocketAddr};

use clap::{Args, Parser, Subcommand};
use ovaltrack::oracle::CensusMode;
use serde::Serialize;

use crate::ops;
use crate::service::{self, AppState};
use crate::wire::{ApiError, ArrangementInput, ArrangementRequest, WireArrangement};

#[derive(Debug, Parser)]
#[command(name = "ovaltrack", version, about = "Classify, solve and repair oval track puzzles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SpecArgs {
    /// Number of tiles
    #[arg(long)]
    pub n: usize,
    /// Number of tiles the turntable reverses
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct Output {
    /// Print JSON instead of text
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Name the group of the puzzle and its order
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Decide whether an arrangement can be solved (exit 2 if not)
    Member {
        #[command(flatten)]
        spec: SpecArgs,
        /// Cycle notation such as "(1 2 3)" or tiles by position such as "3 1 2"
        #[arg(long)]
        arrangement: String,
        #[command(flatten)]
        output: Output,
    },
    /// Print a verified move sequence that solves an arrangement
    Solve {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        arrangement: String,
        /// Search for a shortest word instead (small puzzles only)
        #[arg(long)]
        shortest: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Print a random solvable arrangement
    Scramble {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Check a replacement of the tiles, or generate a legal one
    Repair {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, conflicts_with = "generate", required_unless_present = "generate")]
        validate: Option<String>,
        #[arg(long)]
        generate: bool,
        #[arg(long, requires = "generate")]
        seed: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Compare the classification with an oracle for every puzzle up to nmax
    Census {
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value = "bfs")]
        mode: CensusMode,
        #[command(flatten)]
        output: Output,
    },
    /// Run the JSON service
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value_t = IpAddr::V4(Ipv4Addr::LOCALHOST))]
        host: IpAddr,
    },
}

/// What a finished command prints, and how it exits.
#[derive(Debug)]
pub struct Report {
    pub text: String,
    pub exit_code: i32,
}

impl Report {
    fn ok(text: String) -> Report {
        Report { text, exit_code: 0 }
    }

    fn with_code(text: String, exit_code: i32) -> Report {
        Report { text, exit_code }
    }
}

fn render<T: Serialize>(output: Output, value: &T, text: impl FnOnce(&T) -> String) -> Result<String, ApiError> {
    if output.json {
        serde_json::to_string_pretty(value).map_err(ApiError::internal)
    } else {
        Ok(text(value))
    }
}

fn request(spec: SpecArgs, arrangement: &str) -> Result<ArrangementRequest, ApiError> {
    let p = ovaltrack::Permutation::parse_arrangement(arrangement, spec.n).map_err(ApiError::invalid)?;
    Ok(ArrangementRequest {
        n: spec.n,
        k: spec.k,
        arrangement: ArrangementInput {
            tiles: Some(p.tiles()),
            cycles: None,
        },
    })
}

fn arrangement_text(a: &WireArrangement) -> String {
    let tiles: Vec<String> = a.tiles.iter().map(usize::to_string).collect();
    format!("tiles {}\ncycles {}", tiles.join(" "), a.cycles)
}

/// Runs every subcommand except `serve`.
pub fn execute(command: Command) -> Result<Report, ApiError> {
    match command {
        Command::Classify { spec, output } => {
            let response = ops::classify(spec.n, spec.k)?;
            Ok(Report::ok(render(output, &response, |r| {
                format!(
                    "{}\nfamily {}\norder {}\nrepair: {}",
                    r.descriptor,
                    r.descriptor.family,
                    r.descriptor.order(),
                    r.repair_rule.text
                )
            })?))
        }
        Command::Member {
            spec,
            arrangement,
            output,
        } => {
            let response = ops::member(&request(spec, &arrangement)?)?;
            let code = if response.member { 0 } else { 2 };
            let text = render(output, &response, |r| {
                format!(
                    "{}\n{}",
                    if r.member { "valid: solvable" } else { "invalid: not solvable" },
                    r.reason
                )
            })?;
            Ok(Report::with_code(text, code))
        }
        Command::Solve {
            spec,
            arrangement,
            shortest,
            output,
        } => {
            let response = ops::solve(&request(spec, &arrangement)?, shortest)?;
            Ok(Report::ok(render(output, &response, |r| {
                format!("{}\nlength {}, verified {}", r.word, r.length, r.verified)
            })?))
        }
        Command::Scramble { spec, seed, output } => {
            let response = ops::scramble(spec.n, spec.k, seed)?;
            Ok(Report::ok(render(output, &response, |r| {
                format!("{}\nseed {}", arrangement_text(&r.arrangement), r.seed)
            })?))
        }
        Command::Repair {
            spec,
            validate,
            generate,
            seed,
            output,
        } => match validate {
            Some(arrangement) if !generate => {
                let response = ops::validate(&request(spec, &arrangement)?)?;
                let code = if response.verdict.valid { 0 } else { 2 };
                let text = render(output, &response, |r| {
                    format!(
                        "{}: {}\nrule: {}",
                        if r.verdict.valid { "valid" } else { "invalid" },
                        r.verdict.explanation.text,
                        r.verdict.rule.text
                    )
                })?;
                Ok(Report::with_code(text, code))
            }
            _ => {
                let response = ops::generate(spec.n, spec.k, seed)?;
                Ok(Report::ok(render(output, &response, |r| {
                    format!("{}\nseed {}", arrangement_text(&r.arrangement), r.seed)
                })?))
            }
        },
        Command::Census { nmax, mode, output } => {
            let report = ops::census(nmax, mode)?;
            let code = if report.all_agree() { 0 } else { 3 };
            let text = if output.json {
                serde_json::to_string_pretty(&report).map_err(ApiError::internal)?
            } else {
                let mut text = report.to_csv();
                let bad = report.disagreements().len();
                text.push_str(&format!("{} specs, {bad} disagreements", report.rows.len()));
                text
            };
            Ok(Report::with_code(text, code))
        }
        Command::Serve { .. } => Err(ApiError::internal("serve is handled by run")),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Serve { port, host } => {
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(runtime) => runtime,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 3;
                }
            };
            match runtime.block_on(service::serve(SocketAddr::new(host, port), AppState::default())) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        command => {
            let json = command_wants_json(&command);
            match execute(command) {
                Ok(report) => {
                    println!("{}", report.text);
                    report.exit_code
                }
                Err(e) => {
                    if json {
                        println!("{}", e.body());
                    } else {
                        eprintln!("error: {e}");
                    }
                    e.code.exit_code()
                }
            }
        }
    }
}

fn command_wants_json(command: &Command) -> bool {
    match command {
        Command::Classify { output, .. }
        | Command::Member { output, .. }
        | Command::Solve { output, .. }
        | Command::Scramble { output, .. }
        | Command::Repair { output, .. }
        | Command::Census { output, .. } => output.json,
        Command::Serve { .. } => false,
    }
}
