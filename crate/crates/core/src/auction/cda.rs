use serde::{Deserialize, Serialize};

use super::{AgentId, AuctionError, GameTime, Party, Price, Quote, Side, Transaction};
use crate::market::GoodId;

pub type OrderId = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Order {
    pub id: OrderId,
    pub agent: AgentId,
    pub side: Side,
    pub price: Price,
    pub qty: u32,
    pub seq: u64,
}

/// One execution: the transaction plus the two orders it consumed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fill {
    pub transaction: Transaction,
    pub buy_order: OrderId,
    pub sell_order: OrderId,
}

/// Continuous double auction with price-time priority.
///
/// Incoming orders match greedily against the opposite side while they
/// cross and always trade at the resting order's limit. Whatever is left
/// rests at its own limit. Sells are capped by the seller's unreserved
/// ticket count; there is no short selling.
#[derive(Clone, Debug)]
pub struct OrderBook {
    auction: GoodId,
    /// Best (highest) first.
    buys: Vec<Order>,
    /// Best (lowest) first.
    sells: Vec<Order>,
    closed: bool,
    next_seq: u64,
}

impl OrderBook {
    pub fn new(auction: GoodId) -> Self {
        assert!(auction.is_event(), "{auction} is not an event ticket");
        OrderBook { auction, buys: Vec::new(), sells: Vec::new(), closed: false, next_seq: 0 }
    }

    pub fn auction(&self) -> GoodId {
        self.auction
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn best_bid(&self) -> Option<Price> {
        self.buys.first().map(|o| o.price)
    }

    pub fn best_ask(&self) -> Option<Price> {
        self.sells.first().map(|o| o.price)
    }

    pub fn buys(&self) -> &[Order] {
        &self.buys
    }

    pub fn sells(&self) -> &[Order] {
        &self.sells
    }

    pub fn order(&self, id: OrderId) -> Option<&Order> {
        self.buys.iter().chain(self.sells.iter()).find(|o| o.id == id)
    }

    pub fn quote(&self, time: GameTime) -> Quote {
        Quote { auction: self.auction, ask: self.best_ask(), bid: self.best_bid(), time, closed: self.closed }
    }

    /// Tickets `agent` has committed to resting sells.
    pub fn reserved(&self, agent: AgentId) -> u32 {
        self.sells.iter().filter(|o| o.agent == agent).map(|o| o.qty).sum()
    }

    /// Submits a limit order. `held` is the agent's current ticket count,
    /// used to reject naked sells. Returns the executions and the id if a
    /// remainder now rests in the book.
    #[allow(clippy::too_many_arguments)]
    pub fn submit(
        &mut self,
        id: OrderId,
        agent: AgentId,
        side: Side,
        price: Price,
        qty: u32,
        held: u32,
        time: GameTime,
    ) -> Result<(Vec<Fill>, Option<OrderId>), AuctionError> {
        if self.closed {
            return Err(AuctionError::Closed(self.auction));
        }
        if qty == 0 {
            return Err(AuctionError::BadQuantity);
        }
        if price < 0 {
            return Err(AuctionError::NegativePrice(price));
        }
        if side == Side::Sell {
            let available = held.saturating_sub(self.reserved(agent));
            if available < qty {
                return Err(AuctionError::InsufficientTickets { available, wanted: qty });
            }
        }
        let order = Order { id, agent, side, price, qty, seq: self.next_seq };
        self.next_seq += 1;
        Ok(self.match_and_rest(order, time))
    }

    /// Re-prices a resting order. It loses time priority and trades if it
    /// now crosses.
    pub fn replace(
        &mut self,
        agent: AgentId,
        id: OrderId,
        price: Price,
        time: GameTime,
    ) -> Result<(Vec<Fill>, Option<OrderId>), AuctionError> {
        if self.closed {
            return Err(AuctionError::Closed(self.auction));
        }
        if price < 0 {
            return Err(AuctionError::NegativePrice(price));
        }
        let mut order = self.take(agent, id)?;
        order.price = price;
        order.seq = self.next_seq;
        self.next_seq += 1;
        Ok(self.match_and_rest(order, time))
    }

    pub fn cancel(&mut self, agent: AgentId, id: OrderId) -> Result<Order, AuctionError> {
        if self.closed {
            return Err(AuctionError::Closed(self.auction));
        }
        self.take(agent, id)
    }

    fn take(&mut self, agent: AgentId, id: OrderId) -> Result<Order, AuctionError> {
        for list in [&mut self.buys, &mut self.sells] {
            if let Some(pos) = list.iter().position(|o| o.id == id && o.agent == agent) {
                return Ok(list.remove(pos));
            }
        }
        Err(AuctionError::UnknownOrder(id))
    }

    fn match_and_rest(&mut self, mut order: Order, time: GameTime) -> (Vec<Fill>, Option<OrderId>) {
        let mut fills = Vec::new();
        let opposite = match order.side {
            Side::Buy => &mut self.sells,
            Side::Sell => &mut self.buys,
        };
        while order.qty > 0 {
            let Some(best) = opposite.first_mut() else { break };
            let crosses = match order.side {
                Side::Buy => order.price >= best.price,
                Side::Sell => order.price <= best.price,
            };
            if !crosses {
                break;
            }
            let qty = order.qty.min(best.qty);
            let (buyer, seller, buy_order, sell_order) = match order.side {
                Side::Buy => (order.agent, best.agent, order.id, best.id),
                Side::Sell => (best.agent, order.agent, best.id, order.id),
            };
            fills.push(Fill {
                transaction: Transaction {
                    auction: self.auction,
                    buyer: Party::Agent(buyer),
                    seller: Party::Agent(seller),
                    qty,
                    price: best.price,
                    time,
                },
                buy_order,
                sell_order,
            });
            order.qty -= qty;
            best.qty -= qty;
            if best.qty == 0 {
                opposite.remove(0);
            }
        }
        if order.qty == 0 {
            return (fills, None);
        }
        let id = order.id;
        match order.side {
            Side::Buy => {
                let pos = self.buys.partition_point(|o| o.price >= order.price);
                self.buys.insert(pos, order);
            }
            Side::Sell => {
                let pos = self.sells.partition_point(|o| o.price <= order.price);
                self.sells.insert(pos, order);
            }
        }
        (fills, Some(id))
    }

    /// Closes the book; resting orders are discarded.
    pub fn close(&mut self) -> Result<Vec<Order>, AuctionError> {
        if self.closed {
            return Err(AuctionError::AlreadyClosed(self.auction));
        }
        self.closed = true;
        let mut dropped = std::mem::take(&mut self.buys);
        dropped.append(&mut self.sells);
        Ok(dropped)
    }
}
