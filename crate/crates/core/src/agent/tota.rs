//! TOTA: replan every minute, bid on hotels with quote momentum, commit to
//! flights late, and sell surplus tickets on a falling price curve.

use std::collections::BTreeMap;

use super::{Agent, MarketView};
use crate::allocator::{optimize_greedy, Allocation, PriceVector};
use crate::auction::{GameTime, Price, Side};
use crate::market::{GoodId, Holdings, Points};
use crate::server::protocol::{BidPoint, Message};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AgentClock {
    pub allocation_interval: GameTime,
    pub flight_review_interval: GameTime,
    /// No flight is bought before this game time.
    pub flight_commit_time: GameTime,
}

impl Default for AgentClock {
    fn default() -> Self {
        AgentClock { allocation_interval: 60, flight_review_interval: 30, flight_commit_time: 480 }
    }
}

/// The current ask of one hotel auction and the two asks quoted before it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HotelBidHistory {
    /// Most recent previous ask.
    pub ask1: Option<Price>,
    /// The ask before that.
    pub ask2: Option<Price>,
    pub current: Option<Price>,
    last_time: Option<GameTime>,
}

impl HotelBidHistory {
    pub fn observe(&mut self, time: GameTime, ask: Price) {
        if self.last_time.is_some_and(|t| t >= time) {
            return;
        }
        if let Some(c) = self.current {
            self.ask2 = self.ask1;
            self.ask1 = Some(c);
        }
        self.current = Some(ask);
        self.last_time = Some(time);
    }

    pub fn bid_price(&self, ask: Price) -> Price {
        hotel_bid_price(self.ask1, self.ask2, ask)
    }
}

/// Momentum bid: the last change in the quoted ask added on top of the
/// current ask, never less than the minimum beating bid `ask + 1`.
pub fn hotel_bid_price(ask1: Option<Price>, ask2: Option<Price>, ask: Price) -> Price {
    let raw = match (ask1, ask2) {
        (Some(a1), Some(a2)) => (a1 - a2) + ask,
        _ => ask,
    };
    raw.max(ask + 1)
}

/// Asking price for a surplus ticket: 200 at the start of the game,
/// falling logarithmically to exactly 0 at the end.
///
/// `p(τ) = 200 · (1 − ln(1 + (e − 1)·τ))` with `τ = elapsed / total`.
pub fn sell_price(elapsed: GameTime, total: GameTime) -> f64 {
    let tau = (elapsed as f64 / total as f64).clamp(0.0, 1.0);
    200.0 * (1.0 - (1.0 + (std::f64::consts::E - 1.0) * tau).ln())
}

pub struct TotaAgent {
    name: String,
    view: MarketView,
    clock: AgentClock,
    history: BTreeMap<GoodId, HotelBidHistory>,
    plan: Allocation,
    /// Flights the current plan would buy, tracked before the commit time.
    intended_flights: Holdings,
}

impl Default for TotaAgent {
    fn default() -> Self {
        Self::new()
    }
}

impl TotaAgent {
    pub fn new() -> Self {
        Self::with_clock(AgentClock::default())
    }

    pub fn with_clock(clock: AgentClock) -> Self {
        TotaAgent {
            name: "tota".into(),
            view: MarketView::new(),
            clock,
            history: BTreeMap::new(),
            plan: Allocation::empty(0),
            intended_flights: Holdings::new(),
        }
    }

    pub fn view(&self) -> &MarketView {
        &self.view
    }

    pub fn plan(&self) -> &Allocation {
        &self.plan
    }

    pub fn intended_flights(&self) -> &Holdings {
        &self.intended_flights
    }

    pub fn history(&self, hotel: GoodId) -> HotelBidHistory {
        self.history.get(&hotel).copied().unwrap_or_default()
    }

    fn replan(&mut self) {
        let v = &self.view;
        self.plan = optimize_greedy(&v.preferences, &v.planning_holdings(), &v.prices());
    }

    /// Bids for every planned hotel room we are neither holding nor winning.
    fn hotel_bids(&mut self) -> Vec<Message> {
        let demand = self.plan.demand();
        let mut out = Vec::new();
        for g in GoodId::ALL.into_iter().filter(|g| g.is_hotel()) {
            if self.view.is_closed(g) {
                continue;
            }
            let covered = self.view.holdings.get(g) + self.view.hqw(g);
            let need = demand.get(g).saturating_sub(covered);
            if need == 0 {
                continue;
            }
            let ask = self.view.ask(g).unwrap_or(0);
            let price = self.history(g).bid_price(ask);
            out.push(self.view.submit(g, Side::Buy, vec![BidPoint { qty: need, price }]));
        }
        out
    }

    fn flight_review(&mut self, now: GameTime) -> Vec<Message> {
        let demand = self.plan.demand();
        let mut needs = Holdings::new();
        for g in GoodId::ALL.into_iter().filter(|g| g.is_flight() && !self.view.is_closed(*g)) {
            needs.set(g, demand.get(g).saturating_sub(self.view.holdings.get(g)));
        }
        self.intended_flights = needs;
        if now < self.clock.flight_commit_time {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (g, qty) in needs.iter() {
            if let Some(ask) = self.view.ask(g) {
                out.push(self.view.submit(g, Side::Buy, vec![BidPoint { qty, price: ask }]));
            }
        }
        out
    }

    /// Keeps one resting sell per surplus ticket at the current curve
    /// price, and bids for planned tickets we don't own when the client's
    /// premium beats the ask.
    fn entertainment_actions(&mut self, now: GameTime) -> Vec<Message> {
        let demand = self.plan.demand();
        let price = sell_price(now, self.view.game_length()).round() as Price;
        let mut out = Vec::new();
        for g in GoodId::ALL.into_iter().filter(|g| g.is_event()) {
            if self.view.is_closed(g) {
                continue;
            }
            let owned = self.view.holdings.get(g);
            let wanted = demand.get(g);
            let redundant = owned.saturating_sub(wanted) as usize;

            let sells = self.view.resting(g, Side::Sell);
            if sells.len() > redundant {
                for (id, _) in sells.iter().rev().take(sells.len() - redundant) {
                    out.push(self.view.cancel(*id));
                }
            }
            for (id, o) in sells.iter().take(redundant) {
                if o.price != price {
                    out.push(self.view.replace(*id, price));
                }
            }
            for _ in sells.len()..redundant {
                out.push(self.view.submit(g, Side::Sell, vec![BidPoint { qty: 1, price }]));
            }

            for (id, _) in self.view.resting(g, Side::Buy) {
                out.push(self.view.cancel(id));
            }
            let shortfall = wanted.saturating_sub(owned) as usize;
            if shortfall == 0 {
                continue;
            }
            let Some(ask) = self.view.ask(g) else { continue };
            // Owned tickets serve the highest premiums; buy for the rest.
            let mut gains = self.ticket_gains(g);
            gains.sort_unstable_by(|a, b| b.cmp(a));
            let uncovered = &gains[gains.len().saturating_sub(shortfall)..];
            let worth: Vec<Points> = uncovered.iter().copied().filter(|&gain| gain > ask).collect();
            if let Some(&lowest) = worth.iter().min() {
                let qty = worth.len() as u32;
                out.push(self.view.submit(g, Side::Buy, vec![BidPoint { qty, price: lowest - 1 }]));
            }
        }
        out
    }

    /// Premiums of the planned clients attending the ticket's event.
    fn ticket_gains(&self, ticket: GoodId) -> Vec<Points> {
        let GoodId::EventTicket(kind, night) = ticket else { return Vec::new() };
        self.plan
            .packages
            .iter()
            .zip(&self.view.preferences)
            .filter_map(|(pkg, pref)| {
                let pkg = pkg.as_ref()?;
                (pkg.events[kind.index()] == Some(night)).then(|| pref.event_premium(kind))
            })
            .collect()
    }

    fn final_allocation(&self) -> Message {
        let a = optimize_greedy(&self.view.preferences, &self.view.holdings, &PriceVector::unobtainable());
        Message::Allocation { packages: a.packages }
    }
}

impl Agent for TotaAgent {
    fn name(&self) -> &str {
        &self.name
    }

    fn handle(&mut self, batch: &[Message]) -> Vec<Message> {
        self.view.absorb(batch);
        for m in batch {
            if let Message::Quote { auction, ask: Some(ask), time, .. } = m {
                if auction.is_hotel() {
                    self.history.entry(*auction).or_default().observe(*time, *ask);
                }
            }
        }
        if self.view.game_over {
            return vec![self.final_allocation()];
        }
        let now = self.view.time;
        let minute = now.is_multiple_of(self.clock.allocation_interval);
        if minute || !self.view.closed_this_turn.is_empty() {
            self.replan();
        }
        let mut out = Vec::new();
        if minute {
            out.extend(self.hotel_bids());
            out.extend(self.entertainment_actions(now));
        }
        if now.is_multiple_of(self.clock.flight_review_interval) {
            out.extend(self.flight_review(now));
        }
        out
    }
}

