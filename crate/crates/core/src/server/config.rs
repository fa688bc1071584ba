use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::GameError;
use crate::auction::{GameTime, Price, FLIGHT_INCREMENT_RANGE, FLIGHT_TICK_SECONDS};
use crate::market::GoodId;
use crate::rng::{substream, Stream};

pub const DEFAULT_GAME_LENGTH: GameTime = 540;
/// Latest hotel closing; TOTA's flight gate sits at the same instant.
pub const LAST_HOTEL_CLOSE: GameTime = 480;
pub const HOTEL_AUCTIONS: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub seed: u64,
    pub game_length: GameTime,
    pub flight_tick: GameTime,
    pub flight_increment: (Price, Price),
    pub hotel_quote_interval: GameTime,
    /// Closing minute (1..=8) of each hotel auction, in auction-index order
    /// (better nights 1..4, then alternative nights 1..4).
    pub hotel_close_minutes: Vec<u32>,
    pub clients_per_agent: usize,
    pub agents: usize,
    pub endowment_per_agent: u32,
    /// Wall seconds per game second; 0 runs as fast as possible.
    pub time_scale: f64,
    /// How long a socket agent may take to answer one tick.
    pub agent_grace_ms: u64,
}

impl GameConfig {
    /// Default configuration with a hotel closing schedule drawn from `seed`.
    pub fn new(seed: u64) -> Self {
        let mut minutes: Vec<u32> = (1..=HOTEL_AUCTIONS as u32).collect();
        minutes.shuffle(&mut substream(seed, Stream::HotelSchedule));
        GameConfig {
            seed,
            game_length: DEFAULT_GAME_LENGTH,
            flight_tick: FLIGHT_TICK_SECONDS,
            flight_increment: FLIGHT_INCREMENT_RANGE,
            hotel_quote_interval: 60,
            hotel_close_minutes: minutes,
            clients_per_agent: 8,
            agents: 8,
            endowment_per_agent: 12,
            time_scale: 0.0,
            agent_grace_ms: 5_000,
        }
    }

    pub fn validate(&self) -> Result<(), GameError> {
        let bad = |msg: String| Err(GameError::Config(msg));
        if self.game_length < LAST_HOTEL_CLOSE {
            return bad(format!("game_length {} < {LAST_HOTEL_CLOSE}", self.game_length));
        }
        if self.flight_tick == 0 || !self.game_length.is_multiple_of(self.flight_tick) || 60 % self.flight_tick != 0 {
            return bad(format!("flight_tick {} must divide 60 and the game length", self.flight_tick));
        }
        if self.hotel_quote_interval == 0 || !self.hotel_quote_interval.is_multiple_of(self.flight_tick) {
            return bad(format!("hotel_quote_interval {} must be a multiple of the tick", self.hotel_quote_interval));
        }
        let (lo, hi) = self.flight_increment;
        if lo <= 0 || lo > hi {
            return bad(format!("flight increment range ({lo}, {hi}) must be positive and ordered"));
        }
        let mut sorted = self.hotel_close_minutes.clone();
        sorted.sort_unstable();
        if sorted != (1..=HOTEL_AUCTIONS as u32).collect::<Vec<_>>() {
            return bad(format!("hotel_close_minutes {:?} is not a permutation of 1..=8", self.hotel_close_minutes));
        }
        if !(1..=8).contains(&self.agents) {
            return bad(format!("agents = {} outside 1..=8", self.agents));
        }
        if self.clients_per_agent == 0 {
            return bad("clients_per_agent must be positive".into());
        }
        if !(self.time_scale >= 0.0 && self.time_scale.is_finite()) {
            return bad(format!("time_scale {} must be a finite non-negative number", self.time_scale));
        }
        Ok(())
    }

    /// The hotel auction closing at `minute`, if any.
    pub fn hotel_closing_at(&self, minute: u32) -> Option<GoodId> {
        self.hotel_close_minutes
            .iter()
            .position(|&m| m == minute)
            .map(|i| GoodId::ALL[8 + i])
    }
}
