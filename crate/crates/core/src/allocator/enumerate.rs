use super::{obtainable, PriceVector};
use crate::auction::Price;
use crate::market::{ClientPreference, EventKind, GoodId, Holdings, HotelKind, Points, TravelPackage};

/// Every way to attend each event kind at most once on distinct nights of
/// `nights`, in a fixed order starting with "no events".
pub fn event_assignments(nights: std::ops::Range<u8>) -> Vec<[Option<u8>; 3]> {
    let choices: Vec<Option<u8>> = std::iter::once(None).chain(nights.map(Some)).collect();
    let mut out = Vec::new();
    for &a in &choices {
        for &b in &choices {
            for &c in &choices {
                let picked = [a, b, c];
                let mut nights: Vec<u8> = picked.iter().flatten().copied().collect();
                let n = nights.len();
                nights.sort_unstable();
                nights.dedup();
                if nights.len() == n {
                    out.push(picked);
                }
            }
        }
    }
    out
}

fn ticket_cost(kind: EventKind, night: u8, holdings: &Holdings, prices: &PriceVector) -> Option<Price> {
    let g = GoodId::EventTicket(kind, night);
    if holdings.get(g) > 0 {
        Some(0)
    } else {
        prices.get(g)
    }
}

/// The event assignment within `stay`'s window that maximizes premium
/// minus ticket cost, considering `holdings` owned outright.
pub fn best_events(pref: &ClientPreference, stay: &TravelPackage, holdings: &Holdings, prices: &PriceVector) -> [Option<u8>; 3] {
    let mut best = [None; 3];
    let mut best_gain: Points = 0;
    'outer: for events in event_assignments(stay.nights()) {
        let mut gain = 0;
        for kind in EventKind::ALL {
            if let Some(n) = events[kind.index()] {
                match ticket_cost(kind, n, holdings, prices) {
                    Some(c) => gain += pref.event_premium(kind) - c,
                    None => continue 'outer,
                }
            }
        }
        if gain > best_gain {
            best_gain = gain;
            best = events;
        }
    }
    best
}

/// Candidate packages for one client: every obtainable (arrival,
/// departure, hotel) triple, each with its best event assignment.
///
/// Order: earlier arrival, then shorter stay, then the better hotel first.
pub fn enumerate_packages(pref: &ClientPreference, prices: &PriceVector, holdings: &Holdings) -> Vec<TravelPackage> {
    let mut out = Vec::new();
    for arrival in 1..=4u8 {
        for departure in arrival + 1..=5u8 {
            for hotel in HotelKind::ALL {
                let stay = TravelPackage::stay(arrival, departure, hotel).expect("valid dates");
                let flights_ok = obtainable(GoodId::FlightIn(arrival), 1, holdings, prices)
                    && obtainable(GoodId::FlightOut(departure), 1, holdings, prices);
                let rooms_ok = stay.nights().all(|n| obtainable(GoodId::HotelNight(hotel, n), 1, holdings, prices));
                if flights_ok && rooms_ok {
                    let events = best_events(pref, &stay, holdings, prices);
                    out.push(TravelPackage { events, ..stay });
                }
            }
        }
    }
    out
}
