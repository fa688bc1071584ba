use std::collections::{BTreeMap, VecDeque};

use crate::allocator::PriceVector;
use crate::auction::{AgentId, GameTime, OrderId, Price, Quote, Side};
use crate::market::{ClientPreference, GoodClass, GoodId, Holdings, GOOD_COUNT};
use crate::server::protocol::{BidPoint, Message};
use crate::server::GameConfig;

/// A ticket order of ours that is resting in a book.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RestingOrder {
    pub auction: GoodId,
    pub side: Side,
    pub price: Price,
    pub qty: u32,
}

/// What a request is waiting to hear back about. The server answers every
/// request except `allocation` with exactly one `accepted` or `rejected`,
/// in order, so replies are matched first-in first-out.
#[derive(Clone, Copy, Debug)]
enum Pending {
    NewOrder { auction: GoodId, side: Side, price: Price, qty: u32 },
    Replace { id: OrderId, price: Price },
    Cancel { id: OrderId },
    Other,
}

/// An agent's picture of the game, rebuilt from server messages.
#[derive(Clone, Debug, Default)]
pub struct MarketView {
    pub agent_id: AgentId,
    pub config: Option<GameConfig>,
    pub preferences: Vec<ClientPreference>,
    pub holdings: Holdings,
    pub quotes: BTreeMap<GoodId, Quote>,
    /// Hotel rooms we would win right now, per hotel auction.
    pub hqw: BTreeMap<GoodId, u32>,
    pub time: GameTime,
    pub game_over: bool,
    pub orders: BTreeMap<OrderId, RestingOrder>,
    pub closed_this_turn: Vec<GoodId>,
    pub rejections: Vec<String>,
    closed: Vec<bool>,
    pending: VecDeque<Pending>,
}

impl MarketView {
    pub fn new() -> Self {
        MarketView { closed: vec![false; GOOD_COUNT], ..Default::default() }
    }

    pub fn game_length(&self) -> GameTime {
        self.config.as_ref().map_or(crate::server::DEFAULT_GAME_LENGTH, |c| c.game_length)
    }

    pub fn seed(&self) -> u64 {
        self.config.as_ref().map_or(0, |c| c.seed)
    }

    pub fn is_closed(&self, g: GoodId) -> bool {
        self.closed[g.index()]
    }

    pub fn ask(&self, g: GoodId) -> Option<Price> {
        self.quotes.get(&g).and_then(|q| q.ask)
    }

    pub fn bid(&self, g: GoodId) -> Option<Price> {
        self.quotes.get(&g).and_then(|q| q.bid)
    }

    pub fn hqw(&self, g: GoodId) -> u32 {
        self.hqw.get(&g).copied().unwrap_or(0)
    }

    /// Current acquisition prices: posted flight prices, hotel asks, best
    /// ticket sells; closed auctions and empty ticket books are unobtainable.
    pub fn prices(&self) -> PriceVector {
        let mut pv = PriceVector::unobtainable();
        for g in GoodId::ALL {
            if self.is_closed(g) {
                continue;
            }
            let p = match g.class() {
                GoodClass::Flight | GoodClass::Event => self.ask(g),
                GoodClass::Hotel => Some(self.ask(g).unwrap_or(0)),
            };
            pv.set(g, p);
        }
        pv
    }

    /// Owned goods plus hotel rooms we are currently winning.
    pub fn planning_holdings(&self) -> Holdings {
        let mut h = self.holdings;
        for g in GoodId::ALL.into_iter().filter(|g| g.is_hotel() && !self.is_closed(*g)) {
            h.add(g, self.hqw(g));
        }
        h
    }

    pub fn resting(&self, auction: GoodId, side: Side) -> Vec<(OrderId, RestingOrder)> {
        self.orders.iter().filter(|(_, o)| o.auction == auction && o.side == side).map(|(i, o)| (*i, *o)).collect()
    }

    pub fn submit(&mut self, auction: GoodId, side: Side, points: Vec<BidPoint>) -> Message {
        if auction.is_event() {
            for p in &points {
                self.pending.push_back(Pending::NewOrder { auction, side, price: p.price, qty: p.qty });
            }
        } else {
            self.pending.push_back(Pending::Other);
        }
        Message::Submit { auction, side, points }
    }

    pub fn replace(&mut self, order_id: OrderId, price: Price) -> Message {
        self.pending.push_back(Pending::Replace { id: order_id, price });
        Message::Replace { order_id, price }
    }

    pub fn cancel(&mut self, order_id: OrderId) -> Message {
        self.pending.push_back(Pending::Cancel { id: order_id });
        Message::Cancel { order_id }
    }

    pub fn absorb(&mut self, batch: &[Message]) {
        if self.closed.is_empty() {
            self.closed = vec![false; GOOD_COUNT];
        }
        self.closed_this_turn.clear();
        self.rejections.clear();
        for m in batch {
            self.absorb_one(m);
        }
    }

    fn absorb_one(&mut self, m: &Message) {
        match m {
            Message::Joined { agent_id } => self.agent_id = *agent_id,
            Message::GameStart { agent_id, config, preferences, endowment } => {
                self.agent_id = *agent_id;
                self.config = Some(config.clone());
                self.preferences = preferences.clone();
                self.holdings = *endowment;
            }
            Message::Quote { auction, ask, bid, time, closed, hqw } => {
                self.quotes.insert(*auction, Quote { auction: *auction, ask: *ask, bid: *bid, time: *time, closed: *closed });
                if let Some(h) = hqw {
                    self.hqw.insert(*auction, *h);
                }
                if *closed {
                    self.closed[auction.index()] = true;
                }
            }
            Message::Transaction { auction, side, qty, order_id, .. } => {
                match side {
                    Side::Buy => self.holdings.add(*auction, *qty),
                    Side::Sell => {
                        let have = self.holdings.get(*auction);
                        self.holdings.set(*auction, have.saturating_sub(*qty));
                    }
                }
                if let Some(id) = order_id {
                    if let Some(o) = self.orders.get_mut(id) {
                        o.qty = o.qty.saturating_sub(*qty);
                        if o.qty == 0 {
                            self.orders.remove(id);
                        }
                    }
                }
            }
            Message::AuctionClosed { auction, .. } => {
                self.closed[auction.index()] = true;
                self.closed_this_turn.push(*auction);
                self.orders.retain(|_, o| o.auction != *auction);
            }
            Message::Accepted { order_ids, .. } => match self.pending.pop_front() {
                Some(Pending::NewOrder { auction, side, price, qty }) => {
                    for id in order_ids {
                        self.orders.insert(*id, RestingOrder { auction, side, price, qty });
                    }
                }
                Some(Pending::Replace { id, price }) => {
                    if order_ids.contains(&id) {
                        if let Some(o) = self.orders.get_mut(&id) {
                            o.price = price;
                        }
                    } else {
                        self.orders.remove(&id);
                    }
                }
                Some(Pending::Cancel { id }) => {
                    self.orders.remove(&id);
                }
                Some(Pending::Other) | None => {}
            },
            Message::Rejected { reason, .. } => {
                self.rejections.push(reason.clone());
                match self.pending.pop_front() {
                    Some(Pending::Replace { id, .. }) | Some(Pending::Cancel { id }) => {
                        self.orders.remove(&id);
                    }
                    _ => {}
                }
            }
            Message::Tick { time, game_over } => {
                self.time = *time;
                self.game_over = *game_over;
            }
            _ => {}
        }
    }
}
