//! Opponents for filling tournament seats.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Agent, MarketView};
use crate::auction::Side;
use crate::market::{ClientPreference, EventKind, GoodClass, GoodId, Holdings, HotelKind};
use crate::rng::{substream, Stream};
use crate::server::protocol::{BidPoint, Message};

/// Goods touched by any client's preferred dates: both flights, both
/// hotel kinds and every ticket for the preferred nights.
fn preferred_goods(prefs: &[ClientPreference]) -> BTreeSet<GoodId> {
    let mut out = BTreeSet::new();
    for p in prefs {
        out.insert(GoodId::FlightIn(p.preferred_arrival.value()));
        out.insert(GoodId::FlightOut(p.preferred_departure.value()));
        for n in p.preferred_arrival.value()..p.preferred_departure.value() {
            for h in HotelKind::ALL {
                out.insert(GoodId::HotelNight(h, n));
            }
            for k in EventKind::ALL {
                out.insert(GoodId::EventTicket(k, n));
            }
        }
    }
    out
}

/// Each minute, for each good class, flips a coin and on heads bids the
/// ask plus 1..=50 for one unit on a random open auction its clients could use.
pub struct RandomAgent {
    view: MarketView,
    rng: Option<ChaCha8Rng>,
}

impl Default for RandomAgent {
    fn default() -> Self {
        Self::new()
    }
}

impl RandomAgent {
    pub fn new() -> Self {
        RandomAgent { view: MarketView::new(), rng: None }
    }
}

impl Agent for RandomAgent {
    fn name(&self) -> &str {
        "random"
    }

    fn handle(&mut self, batch: &[Message]) -> Vec<Message> {
        self.view.absorb(batch);
        let rng = self
            .rng
            .get_or_insert_with(|| substream(self.view.seed(), Stream::Agent(self.view.agent_id)));
        let v = &mut self.view;
        if v.game_over || !v.time.is_multiple_of(60) {
            return Vec::new();
        }
        let needed = preferred_goods(&v.preferences);
        let mut out = Vec::new();
        for class in [GoodClass::Flight, GoodClass::Hotel, GoodClass::Event] {
            if !rng.gen_bool(0.5) {
                continue;
            }
            let open: Vec<GoodId> =
                needed.iter().copied().filter(|g| g.class() == class && !v.is_closed(*g)).collect();
            let Some(&g) = open.choose(rng) else { continue };
            let base = match class {
                GoodClass::Event => v.ask(g).or(v.bid(g)).unwrap_or(0),
                _ => v.ask(g).unwrap_or(0),
            };
            let price = base + rng.gen_range(1..=50);
            out.push(v.submit(g, Side::Buy, vec![BidPoint { qty: 1, price }]));
        }
        out
    }
}

/// Plans nothing: buys every client's preferred flights at the first
/// opportunity after the start and keeps bidding ask + 10 for the better
/// hotel on the preferred nights. Never touches entertainment.
pub struct GreedyAgent {
    view: MarketView,
    flights_bought: bool,
}

impl Default for GreedyAgent {
    fn default() -> Self {
        Self::new()
    }
}

impl GreedyAgent {
    pub const FLIGHT_TIME: u32 = 10;
    pub const HOTEL_MARKUP: i64 = 10;

    pub fn new() -> Self {
        GreedyAgent { view: MarketView::new(), flights_bought: false }
    }

    fn preferred_demand(&self) -> Holdings {
        let mut h = Holdings::new();
        for p in &self.view.preferences {
            for (g, n) in crate::market::required_goods(&p.preferred_package()).iter() {
                h.add(g, n);
            }
        }
        h
    }
}

impl Agent for GreedyAgent {
    fn name(&self) -> &str {
        "greedy"
    }

    fn handle(&mut self, batch: &[Message]) -> Vec<Message> {
        self.view.absorb(batch);
        if self.view.game_over {
            return Vec::new();
        }
        let demand = self.preferred_demand();
        let mut out = Vec::new();
        if !self.flights_bought && self.view.time >= Self::FLIGHT_TIME {
            self.flights_bought = true;
            for (g, qty) in demand.iter().filter(|(g, _)| g.is_flight()) {
                if let Some(ask) = self.view.ask(g) {
                    out.push(self.view.submit(g, Side::Buy, vec![BidPoint { qty, price: ask }]));
                }
            }
        }
        if self.view.time.is_multiple_of(60) {
            for (g, qty) in demand.iter().filter(|(g, _)| g.is_hotel()) {
                if self.view.is_closed(g) {
                    continue;
                }
                let need = qty.saturating_sub(self.view.holdings.get(g) + self.view.hqw(g));
                if need > 0 {
                    let price = self.view.ask(g).unwrap_or(0) + Self::HOTEL_MARKUP;
                    out.push(self.view.submit(g, Side::Buy, vec![BidPoint { qty: need, price }]));
                }
            }
        }
        out
    }
}
