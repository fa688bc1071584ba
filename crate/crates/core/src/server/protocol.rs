//! Newline-delimited JSON wire protocol.
//!
//! One JSON object per line, UTF-8, discriminated by a `type` field.
//! Unknown fields are ignored on decode so newer peers can add fields.
//!
//! A game runs in lockstep. Every 10 game-seconds the server sends each
//! agent what changed (quotes, transactions, closings, replies to its last
//! requests) followed by a `tick`. The agent answers with any number of
//! requests followed by `end_turn` carrying the same time. The final tick
//! has `game_over: true`; that is the moment to send an `allocation`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AgentScore, GameConfig};
use crate::auction::{AgentId, GameTime, OrderId, Price, Side};
use crate::market::{ClientPreference, GoodId, Holdings, TravelPackage};

#[derive(Debug, Error)]
#[error("malformed message: {0}")]
pub struct Malformed(#[from] serde_json::Error);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BidPoint {
    pub qty: u32,
    pub price: Price,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Message {
    // agent -> server
    Join {
        agent_name: String,
    },
    Submit {
        auction: GoodId,
        side: Side,
        points: Vec<BidPoint>,
    },
    Replace {
        order_id: OrderId,
        price: Price,
    },
    Cancel {
        order_id: OrderId,
    },
    Allocation {
        packages: Vec<Option<TravelPackage>>,
    },
    EndTurn {
        time: GameTime,
    },

    // server -> agent
    Joined {
        agent_id: AgentId,
    },
    GameStart {
        agent_id: AgentId,
        config: GameConfig,
        preferences: Vec<ClientPreference>,
        endowment: Holdings,
    },
    Quote {
        auction: GoodId,
        ask: Option<Price>,
        bid: Option<Price>,
        time: GameTime,
        closed: bool,
        /// Hotel rooms this agent would win if the auction closed now.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hqw: Option<u32>,
    },
    Accepted {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        auction: Option<GoodId>,
        /// Ids of ticket orders left resting in the book.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        order_ids: Vec<OrderId>,
    },
    Rejected {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        auction: Option<GoodId>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order_id: Option<OrderId>,
        reason: String,
    },
    Transaction {
        auction: GoodId,
        side: Side,
        qty: u32,
        price: Price,
        time: GameTime,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        order_id: Option<OrderId>,
    },
    AuctionClosed {
        auction: GoodId,
        time: GameTime,
    },
    Tick {
        time: GameTime,
        #[serde(default)]
        game_over: bool,
    },
    GameEnd {
        scores: Vec<AgentScore>,
    },
}

/// One line of JSON, without the trailing newline.
pub fn encode_message(msg: &Message) -> String {
    serde_json::to_string(msg).expect("messages always serialize")
}

pub fn decode_message(line: &str) -> Result<Message, Malformed> {
    Ok(serde_json::from_str(line.trim_end_matches(['\r', '\n']))?)
}
