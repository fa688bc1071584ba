//! Seating agents, running seeded games and tournaments, and checking
//! that a saved log replays exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agent::builtin;
use crate::auction::AgentId;
use crate::server::{digest, run_game, GameConfig, GameError, GameRecord, GameResult, LocalSession, Session, SessionError, TcpSession};

#[derive(Debug, Error)]
pub enum TournamentError {
    #[error("bad agent mix: {0}")]
    Mix(String),
    #[error("socket seats need a listening port")]
    NoPort,
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("cannot write {}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> TournamentError + '_ {
    move |source| TournamentError::Io { path: path.to_path_buf(), source }
}

/// What sits in one seat.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AgentKind {
    Tota,
    Random,
    Greedy,
    /// A remote agent listening at `HOST:PORT`; the server dials it.
    External(String),
    /// A remote agent that dials in on the server's `--port`.
    Socket,
}

impl AgentKind {
    pub fn is_remote(&self) -> bool {
        matches!(self, AgentKind::External(_) | AgentKind::Socket)
    }

    /// Label used to group scores in summaries.
    pub fn label(&self) -> String {
        match self {
            AgentKind::External(_) => "external".into(),
            other => other.to_string(),
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentKind::Tota => f.write_str("tota"),
            AgentKind::Random => f.write_str("random"),
            AgentKind::Greedy => f.write_str("greedy"),
            AgentKind::External(addr) => write!(f, "external:{addr}"),
            AgentKind::Socket => f.write_str("socket"),
        }
    }
}

impl FromStr for AgentKind {
    type Err = TournamentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tota" => Ok(AgentKind::Tota),
            "random" => Ok(AgentKind::Random),
            "greedy" => Ok(AgentKind::Greedy),
            "socket" => Ok(AgentKind::Socket),
            _ => match s.strip_prefix("external:") {
                Some(addr) if addr.rsplit_once(':').is_some_and(|(h, p)| !h.is_empty() && p.parse::<u16>().is_ok()) => {
                    Ok(AgentKind::External(addr.to_string()))
                }
                _ => Err(TournamentError::Mix(format!("unknown agent kind `{s}`"))),
            },
        }
    }
}

/// Parses a comma-separated mix such as `tota,random×7` (also `random*7`
/// or `randomx7`) into exactly `seats` kinds.
pub fn parse_mix(s: &str, seats: usize) -> Result<Vec<AgentKind>, TournamentError> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, count) = split_count(part)?;
        let kind: AgentKind = name.parse()?;
        out.extend(std::iter::repeat_n(kind, count));
    }
    if out.len() != seats {
        return Err(TournamentError::Mix(format!("`{s}` fills {} seats, need {seats}", out.len())));
    }
    Ok(out)
}

fn split_count(part: &str) -> Result<(&str, usize), TournamentError> {
    for sep in ['×', '*', 'x'] {
        if let Some((name, n)) = part.rsplit_once(sep) {
            if let Ok(n) = n.parse::<usize>() {
                return Ok((name, n));
            }
            if sep != 'x' {
                return Err(TournamentError::Mix(format!("bad repeat count in `{part}`")));
            }
        }
    }
    Ok((part, 1))
}

/// Connects or builds a session for every seat. Socket seats accept
/// connections on `listener` in seat order.
pub fn seat_agents(
    kinds: &[AgentKind],
    listener: Option<&TcpListener>,
    grace: Duration,
) -> Result<Vec<Box<dyn Session>>, TournamentError> {
    kinds
        .iter()
        .enumerate()
        .map(|(seat, kind)| -> Result<Box<dyn Session>, TournamentError> {
            let seat = seat as AgentId;
            Ok(match kind {
                AgentKind::External(addr) => Box::new(TcpSession::connect(addr, seat, grace)?),
                AgentKind::Socket => Box::new(TcpSession::accept(listener.ok_or(TournamentError::NoPort)?, seat, grace)?),
                builtin_kind => Box::new(LocalSession::new(builtin(&builtin_kind.to_string()).expect("builtin kind"))),
            })
        })
        .collect()
}

/// Runs one game with in-process or remote agents.
pub fn play(config: &GameConfig, kinds: &[AgentKind], listener: Option<&TcpListener>) -> Result<GameRecord, TournamentError> {
    let sessions = seat_agents(kinds, listener, Duration::from_millis(config.agent_grace_ms))?;
    Ok(run_game(config, sessions)?)
}

/// Writes `transactions.jsonl`, `result.json` and `scores.txt` into `dir`.
pub fn write_game_artifacts(dir: &Path, record: &GameRecord, kinds: &[AgentKind]) -> Result<(), TournamentError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let log = dir.join("transactions.jsonl");
    fs::write(&log, record.log_bytes()).map_err(io_err(&log))?;
    let result = dir.join("result.json");
    let json = serde_json::to_string_pretty(&record.result).expect("result serializes");
    fs::write(&result, json + "\n").map_err(io_err(&result))?;
    let table = dir.join("scores.txt");
    fs::write(&table, score_table(&record.result, kinds)).map_err(io_err(&table))?;
    Ok(())
}

pub fn score_table(result: &GameResult, kinds: &[AgentKind]) -> String {
    let mut s = format!("seed {}\n", result.seed);
    s.push_str(&format!(
        "{:>4}  {:<12} {:<10} {:>8} {:>7} {:>7} {:>8}\n",
        "seat", "kind", "name", "utility", "spend", "revenue", "score"
    ));
    for a in &result.agents {
        let kind = kinds.get(a.agent_id as usize).map(|k| k.label()).unwrap_or_default();
        s.push_str(&format!(
            "{:>4}  {:<12} {:<10} {:>8} {:>7} {:>7} {:>8}\n",
            a.agent_id, kind, a.name, a.utility_total, a.spend, a.revenue, a.score
        ));
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TournamentSpec {
    pub games: usize,
    pub agents: Vec<AgentKind>,
    pub base_seed: u64,
    pub out: PathBuf,
    pub time_scale: f64,
}

impl TournamentSpec {
    pub fn new(agents: Vec<AgentKind>, base_seed: u64, out: PathBuf) -> Self {
        TournamentSpec { games: 5, agents, base_seed, out, time_scale: 0.0 }
    }

    pub fn seed(&self, game: usize) -> u64 {
        self.base_seed.wrapping_add(game as u64)
    }

    pub fn config(&self, game: usize) -> GameConfig {
        let mut c = GameConfig::new(self.seed(game));
        c.agents = self.agents.len();
        c.time_scale = self.time_scale;
        c
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KindSummary {
    pub kind: String,
    /// Seat-games contributing to the statistics.
    pub samples: usize,
    pub mean: f64,
    pub min: i64,
    pub max: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub games: usize,
    pub base_seed: u64,
    pub kinds: Vec<KindSummary>,
}

/// Aggregates scores by agent kind over all seats of all games.
pub fn summarize(results: &[GameResult], kinds: &[AgentKind], base_seed: u64) -> Summary {
    let mut by_kind: BTreeMap<String, Vec<i64>> = BTreeMap::new();
    for r in results {
        for a in &r.agents {
            if let Some(k) = kinds.get(a.agent_id as usize) {
                by_kind.entry(k.label()).or_default().push(a.score);
            }
        }
    }
    let kinds = by_kind
        .into_iter()
        .map(|(kind, scores)| KindSummary {
            kind,
            samples: scores.len(),
            mean: scores.iter().sum::<i64>() as f64 / scores.len() as f64,
            min: *scores.iter().min().expect("non-empty"),
            max: *scores.iter().max().expect("non-empty"),
        })
        .collect();
    Summary { games: results.len(), base_seed, kinds }
}

pub fn summary_csv(summary: &Summary) -> String {
    let mut s = String::from("kind,samples,mean,min,max\n");
    for k in &summary.kinds {
        s.push_str(&format!("{},{},{:.3},{},{}\n", k.kind, k.samples, k.mean, k.min, k.max));
    }
    s
}

/// Runs every game, writes per-game artifacts under `out/game-NNN/` plus
/// `summary.csv` and `summary.json`. Games with only in-process agents run
/// in parallel.
pub fn run_tournament(spec: &TournamentSpec, listener: Option<&TcpListener>) -> Result<Summary, TournamentError> {
    fs::create_dir_all(&spec.out).map_err(io_err(&spec.out))?;
    let run_one = |i: usize| -> Result<GameResult, TournamentError> {
        let record = play(&spec.config(i), &spec.agents, listener)?;
        write_game_artifacts(&spec.out.join(format!("game-{i:03}")), &record, &spec.agents)?;
        Ok(record.result)
    };
    let results: Vec<GameResult> = if spec.agents.iter().any(AgentKind::is_remote) {
        (0..spec.games).map(run_one).collect::<Result<_, _>>()?
    } else {
        (0..spec.games).into_par_iter().map(run_one).collect::<Result<_, _>>()?
    };
    let summary = summarize(&results, &spec.agents, spec.base_seed);
    let csv = spec.out.join("summary.csv");
    fs::write(&csv, summary_csv(&summary)).map_err(io_err(&csv))?;
    let json = spec.out.join("summary.json");
    fs::write(&json, serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n").map_err(io_err(&json))?;
    Ok(summary)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayOutcome {
    pub expected: String,
    pub actual: String,
}

impl ReplayOutcome {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

/// Re-simulates `seed` with in-process agents and compares the log digest
/// with `log`'s.
pub fn replay_verify(log: &[u8], config: &GameConfig, kinds: &[AgentKind]) -> Result<ReplayOutcome, TournamentError> {
    if kinds.iter().any(AgentKind::is_remote) {
        return Err(TournamentError::Mix("replay needs in-process agents only".into()));
    }
    let record = play(config, kinds, None)?;
    Ok(ReplayOutcome { expected: digest(log), actual: record.digest() })
}
