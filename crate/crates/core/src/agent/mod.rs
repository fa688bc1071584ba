//! Trading agents: the TOTA strategy and two baseline opponents.
//!
//! An agent is a message handler. Each turn it receives the server's
//! messages for that turn, ending with a `tick`, and returns its requests.
//! The same agent runs in-process ([`crate::server::LocalSession`]) or
//! behind a socket ([`run_remote_agent`]).

mod baseline;
mod remote;
mod tota;
mod view;

pub use baseline::{GreedyAgent, RandomAgent};
pub use remote::run_remote_agent;
pub use tota::{hotel_bid_price, sell_price, AgentClock, HotelBidHistory, TotaAgent};
pub use view::{MarketView, RestingOrder};

use crate::server::protocol::Message;

pub trait Agent: Send {
    fn name(&self) -> &str;
    fn handle(&mut self, batch: &[Message]) -> Vec<Message>;
}

/// Builds one of the bundled strategies by name: `tota`, `random` or `greedy`.
pub fn builtin(name: &str) -> Option<Box<dyn Agent>> {
    match name {
        "tota" => Some(Box::new(TotaAgent::new())),
        "random" => Some(Box::new(RandomAgent::new())),
        "greedy" => Some(Box::new(GreedyAgent::new())),
        _ => None,
    }
}
