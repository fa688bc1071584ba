use rand::Rng;

use super::{AgentId, AuctionError, GameTime, Party, Price, Quote, Transaction};
use crate::market::GoodId;

pub const FLIGHT_TICK_SECONDS: GameTime = 10;
/// Inclusive bounds of the per-tick price increment.
pub const FLIGHT_INCREMENT_RANGE: (Price, Price) = (3, 10);

/// Posted-price flight auction. The price starts at zero and rises by a
/// random integer increment every tick until the auction closes.
#[derive(Clone, Debug)]
pub struct FlightAuction {
    auction: GoodId,
    price: Price,
    increment_range: (Price, Price),
    closed: bool,
}

impl FlightAuction {
    pub fn new(auction: GoodId, increment_range: (Price, Price)) -> Self {
        assert!(auction.is_flight(), "{auction} is not a flight");
        assert!(0 < increment_range.0 && increment_range.0 <= increment_range.1);
        FlightAuction { auction, price: 0, increment_range, closed: false }
    }

    pub fn auction(&self) -> GoodId {
        self.auction
    }

    pub fn price(&self) -> Price {
        self.price
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn tick<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Price, AuctionError> {
        if self.closed {
            return Err(AuctionError::Closed(self.auction));
        }
        let (lo, hi) = self.increment_range;
        self.price += rng.gen_range(lo..=hi);
        Ok(self.price)
    }

    /// Fills `qty` units immediately at the posted price.
    pub fn buy(&mut self, agent: AgentId, qty: u32, time: GameTime) -> Result<Transaction, AuctionError> {
        if self.closed {
            return Err(AuctionError::Closed(self.auction));
        }
        if qty == 0 {
            return Err(AuctionError::BadQuantity);
        }
        Ok(Transaction {
            auction: self.auction,
            buyer: Party::Agent(agent),
            seller: Party::Market,
            qty,
            price: self.price,
            time,
        })
    }

    pub fn quote(&self, time: GameTime) -> Quote {
        Quote { auction: self.auction, ask: Some(self.price), bid: None, time, closed: self.closed }
    }

    pub fn close(&mut self) -> Result<(), AuctionError> {
        if self.closed {
            return Err(AuctionError::AlreadyClosed(self.auction));
        }
        self.closed = true;
        Ok(())
    }
}
