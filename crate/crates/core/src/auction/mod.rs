//! The three market mechanisms behind the 28 auctions.
//!
//! * [`FlightAuction`]: posted price that only rises; buys fill instantly.
//! * [`HotelAuction`]: ascending multi-unit auction with beat-the-quote and
//!   uniform clearing at the 16th-highest unit bid.
//! * [`OrderBook`]: continuous double auction for entertainment tickets.
//!
//! Each auction is a single-writer state machine. The game loop owns them
//! and serializes every mutation.

mod cda;
mod flight;
mod hotel;

pub use cda::{Fill, Order, OrderBook, OrderId};
pub use flight::{FlightAuction, FLIGHT_INCREMENT_RANGE, FLIGHT_TICK_SECONDS};
pub use hotel::{HotelAuction, UnitBid, HOTEL_CAPACITY};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::market::{GoodId, Points};

pub type Price = Points;
pub type AgentId = u8;
/// Game time in seconds since the start of the game.
pub type GameTime = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuctionError {
    #[error("auction {0} is closed")]
    Closed(GoodId),
    #[error("auction {0} is already closed")]
    AlreadyClosed(GoodId),
    #[error("bid {price} does not beat ask {ask}")]
    BidTooLow { price: Price, ask: Price },
    #[error("selling {wanted} tickets but only {available} unreserved")]
    InsufficientTickets { available: u32, wanted: u32 },
    #[error("unknown order {0}")]
    UnknownOrder(OrderId),
    #[error("quantity must be at least 1")]
    BadQuantity,
    #[error("negative price {0}")]
    NegativePrice(Price),
    #[error("{0} does not support this request")]
    Unsupported(GoodId),
}

impl AuctionError {
    /// Stable reason code used in `rejected` protocol messages.
    pub fn code(&self) -> &'static str {
        match self {
            AuctionError::Closed(_) => "CLOSED",
            AuctionError::AlreadyClosed(_) => "ALREADY_CLOSED",
            AuctionError::BidTooLow { .. } => "BID_TOO_LOW",
            AuctionError::InsufficientTickets { .. } => "INSUFFICIENT_TICKETS",
            AuctionError::UnknownOrder(_) => "UNKNOWN_ORDER",
            AuctionError::BadQuantity => "BAD_QUANTITY",
            AuctionError::NegativePrice(_) => "BAD_PRICE",
            AuctionError::Unsupported(_) => "UNSUPPORTED",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Buy,
    Sell,
}

/// A trade counterparty. Flights and hotels are always sold by the market.
///
/// Serialized as the agent id, or the string `"MARKET"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    Market,
    Agent(AgentId),
}

impl Party {
    pub fn agent(self) -> Option<AgentId> {
        match self {
            Party::Agent(a) => Some(a),
            Party::Market => None,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Market => f.write_str("MARKET"),
            Party::Agent(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PartyRepr {
    Agent(AgentId),
    Tag(String),
}

impl Serialize for Party {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Party::Market => PartyRepr::Tag("MARKET".into()),
            Party::Agent(a) => PartyRepr::Agent(*a),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Party {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match PartyRepr::deserialize(d)? {
            PartyRepr::Agent(a) => Ok(Party::Agent(a)),
            PartyRepr::Tag(t) if t == "MARKET" => Ok(Party::Market),
            PartyRepr::Tag(t) => Err(serde::de::Error::custom(format!("unknown party `{t}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Transaction {
    pub auction: GoodId,
    pub buyer: Party,
    pub seller: Party,
    pub qty: u32,
    pub price: Price,
    pub time: GameTime,
}

impl Transaction {
    pub fn value(&self) -> Points {
        self.price * self.qty as Points
    }
}

/// A snapshot of one auction's prices.
///
/// `ask` is the price to pay (flights), to beat (hotels), or the best
/// resting sell (tickets; `None` when no seller is resting). `bid` is the
/// best resting buy and is only set for tickets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quote {
    pub auction: GoodId,
    pub ask: Option<Price>,
    pub bid: Option<Price>,
    pub time: GameTime,
    pub closed: bool,
}
