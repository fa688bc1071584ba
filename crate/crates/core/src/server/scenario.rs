use rand::Rng;
use serde::{Deserialize, Serialize};

use super::GameConfig;
use crate::market::{ClientPreference, EventKind, GoodId, Holdings, EVENT_PREMIUM_RANGE, HOTEL_PREMIUM_RANGE};

/// Everything the seed decides before trading starts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    /// `preferences[agent][client]`.
    pub preferences: Vec<Vec<ClientPreference>>,
    pub endowments: Vec<Holdings>,
}

fn random_preference<R: Rng + ?Sized>(rng: &mut R) -> ClientPreference {
    let arrival = rng.gen_range(1..=4u8);
    let departure = rng.gen_range(arrival + 1..=5u8);
    let hotel = rng.gen_range(HOTEL_PREMIUM_RANGE.0..=HOTEL_PREMIUM_RANGE.1);
    let mut events = [0; 3];
    for e in events.iter_mut() {
        *e = rng.gen_range(EVENT_PREMIUM_RANGE.0..=EVENT_PREMIUM_RANGE.1);
    }
    ClientPreference::new(arrival, departure, hotel, events).expect("generated within ranges")
}

pub fn generate_scenario<R: Rng + ?Sized>(config: &GameConfig, rng: &mut R) -> Scenario {
    let tickets: Vec<GoodId> = GoodId::ALL.iter().copied().filter(|g| g.is_event()).collect();
    debug_assert_eq!(tickets.len(), 4 * EventKind::ALL.len());
    let mut preferences = Vec::with_capacity(config.agents);
    let mut endowments = Vec::with_capacity(config.agents);
    for _ in 0..config.agents {
        preferences.push((0..config.clients_per_agent).map(|_| random_preference(rng)).collect());
        let mut h = Holdings::new();
        for _ in 0..config.endowment_per_agent {
            h.add(tickets[rng.gen_range(0..tickets.len())], 1);
        }
        endowments.push(h);
    }
    Scenario { preferences, endowments }
}
