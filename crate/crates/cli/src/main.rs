//! `tacsim`: run travel-market games and tournaments, verify replays,
//! solve allocation instances and host agents over TCP.

use std::fs;
use std::io::{self, Read};
use std::net::{TcpListener, TcpStream};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use tacsim::agent::{builtin, run_remote_agent};
use tacsim::allocator::{optimize_exact, optimize_greedy, Allocation, PriceVector};
use tacsim::market::{ClientPreference, Holdings};
use tacsim::server::{read_log, GameConfig, LogRecord};
use tacsim::tournament::{parse_mix, play, replay_verify, run_tournament, score_table, summary_csv, write_game_artifacts, TournamentSpec};

const DEFAULT_MIX: &str = "tota,random×7";

#[derive(Parser)]
#[command(name = "tacsim", version, about = "Travel-market trading game simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game and write its log, result and score table.
    RunGame {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated seats: tota, random, greedy, external:HOST:PORT,
        /// socket; `kind×N` (or `kind*N`) repeats a seat.
        #[arg(long, default_value = DEFAULT_MIX)]
        agents: String,
        /// Wall seconds per game second; 0 runs as fast as possible.
        #[arg(long, default_value_t = 0.0)]
        time_scale: f64,
        /// Port on which `socket` seats are accepted.
        #[arg(long)]
        port: Option<u16>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Play several seeded games and summarize scores per agent kind.
    RunTournament {
        #[arg(long, default_value_t = 5)]
        games: usize,
        /// Seed of the first game; game i uses seed + i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = DEFAULT_MIX)]
        agents: String,
        #[arg(long, default_value_t = 0.0)]
        time_scale: f64,
        #[arg(long)]
        port: Option<u16>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Re-simulate a logged game and compare transaction-log digests.
    ReplayVerify {
        /// A transactions.jsonl written by run-game.
        log: PathBuf,
        /// Defaults to the seed recorded in the log.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = DEFAULT_MIX)]
        agents: String,
    },
    /// Solve a client-allocation instance read from a JSON file (or `-`).
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Greedy)]
        method: Method,
    },
    /// Run a bundled agent against a remote server.
    Agent {
        /// tota, random or greedy.
        #[arg(long, default_value = "tota")]
        kind: String,
        /// Dial a server listening for socket seats.
        #[arg(long, conflicts_with = "listen", required_unless_present = "listen")]
        connect: Option<String>,
        /// Wait for a server to dial in (an `external:HOST:PORT` seat).
        #[arg(long)]
        listen: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Greedy,
    Exact,
}

/// Input for `solve`. Missing prices mean the good cannot be bought.
#[derive(Deserialize)]
struct Instance {
    preferences: Vec<ClientPreference>,
    #[serde(default)]
    holdings: Holdings,
    #[serde(default = "PriceVector::unobtainable")]
    prices: PriceVector,
}

#[derive(Serialize)]
struct Solution<'a> {
    method: &'a str,
    #[serde(flatten)]
    allocation: Allocation,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn listener(port: Option<u16>) -> Result<Option<TcpListener>> {
    port.map(|p| TcpListener::bind(("0.0.0.0", p)).with_context(|| format!("binding port {p}"))).transpose()
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::RunGame { seed, agents, time_scale, port, out } => {
            let mut config = GameConfig::new(seed);
            config.time_scale = time_scale;
            let kinds = match parse_mix(&agents, config.agents) {
                Ok(k) => k,
                Err(e) => return Ok(usage(e)),
            };
            if let Err(e) = config.validate() {
                return Ok(usage(e));
            }
            let listener = listener(port)?;
            let start = Instant::now();
            let record = play(&config, &kinds, listener.as_ref())?;
            write_game_artifacts(&out, &record, &kinds)?;
            print!("{}", score_table(&record.result, &kinds));
            println!("digest {}", record.digest());
            log::info!("game finished in {:?}", start.elapsed());
        }
        Command::RunTournament { games, seed, agents, time_scale, port, out } => {
            let kinds = match parse_mix(&agents, GameConfig::new(seed).agents) {
                Ok(k) => k,
                Err(e) => return Ok(usage(e)),
            };
            if time_scale < 0.0 || !time_scale.is_finite() {
                return Ok(usage("time scale must be a finite non-negative number"));
            }
            let mut spec = TournamentSpec::new(kinds, seed, out);
            spec.games = games;
            spec.time_scale = time_scale;
            let listener = listener(port)?;
            let summary = run_tournament(&spec, listener.as_ref())?;
            print!("{}", summary_csv(&summary));
        }
        Command::ReplayVerify { log, seed, agents } => {
            let bytes = fs::read(&log).with_context(|| format!("reading {}", log.display()))?;
            let seed = match seed {
                Some(s) => s,
                None => logged_seed(&bytes).context("log has no result record; pass --seed")?,
            };
            let config = GameConfig::new(seed);
            let kinds = match parse_mix(&agents, config.agents) {
                Ok(k) => k,
                Err(e) => return Ok(usage(e)),
            };
            let outcome = replay_verify(&bytes, &config, &kinds)?;
            if outcome.passed() {
                println!("PASS {}", outcome.actual);
            } else {
                println!("FAIL expected {} got {}", outcome.expected, outcome.actual);
                return Ok(ExitCode::from(2));
            }
        }
        Command::Solve { instance, method } => {
            let text = if instance.as_os_str() == "-" {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s)?;
                s
            } else {
                fs::read_to_string(&instance).with_context(|| format!("reading {}", instance.display()))?
            };
            let inst: Instance = serde_json::from_str(&text).context("parsing instance")?;
            let (name, allocation) = match method {
                Method::Greedy => ("greedy", optimize_greedy(&inst.preferences, &inst.holdings, &inst.prices)),
                Method::Exact => ("exact", optimize_exact(&inst.preferences, &inst.holdings, &inst.prices)?),
            };
            println!("{}", serde_json::to_string_pretty(&Solution { method: name, allocation })?);
        }
        Command::Agent { kind, connect, listen } => {
            let Some(mut agent) = builtin(&kind) else {
                return Ok(usage(format!("unknown agent kind `{kind}`")));
            };
            let stream = match (connect, listen) {
                (Some(addr), _) => TcpStream::connect(&addr).with_context(|| format!("connecting to {addr}"))?,
                (None, Some(addr)) => {
                    let l = TcpListener::bind(&addr).with_context(|| format!("binding {addr}"))?;
                    l.accept()?.0
                }
                (None, None) => bail!("need --connect or --listen"),
            };
            let scores = run_remote_agent(agent.as_mut(), stream)?;
            for s in scores {
                println!("{} {} {}", s.agent_id, s.name, s.score);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn logged_seed(bytes: &[u8]) -> Option<u64> {
    read_log(bytes).ok()?.into_iter().find_map(|r| match r {
        LogRecord::Result { result } => Some(result.seed),
        LogRecord::Transaction(_) => None,
    })
}
