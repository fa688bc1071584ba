//! Game lifecycle: scenario generation, the lockstep game loop, agent
//! sessions, scoring and the transaction log.

mod config;
mod game;
mod log;
pub mod protocol;
mod scenario;
mod scoring;
mod session;

pub use config::{GameConfig, DEFAULT_GAME_LENGTH, HOTEL_AUCTIONS, LAST_HOTEL_CLOSE};
pub use game::{run_game, GameRecord};
pub use log::{digest, read_log, write_log, LogRecord};
pub use protocol::{decode_message, encode_message, BidPoint, Malformed, Message};
pub use scenario::{generate_scenario, Scenario};
pub use scoring::{score_game, AgentScore, Closing, GameResult};
pub use session::{LocalSession, Session, SessionError, TcpSession};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GameError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("expected {expected} agent sessions, got {got}")]
    SeatCount { expected: usize, got: usize },
    #[error(transparent)]
    Session(#[from] SessionError),
}
