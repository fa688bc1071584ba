//! Goods, client preferences, travel packages and the client scoring rules.
//!
//! Everything here is pure: no clocks, no randomness, no I/O.

mod goods;

pub use goods::{Day, EventKind, GoodClass, GoodId, Holdings, HotelKind, GOOD_COUNT};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Utility points and prices share one integer unit.
pub type Points = i64;

/// Base utility of a served client before penalties and bonuses.
pub const BASE_UTILITY: Points = 1000;
/// Penalty per day of deviation from a preferred date.
pub const PENALTY_PER_DAY: Points = 100;
pub const HOTEL_PREMIUM_RANGE: (Points, Points) = (50, 150);
pub const EVENT_PREMIUM_RANGE: (Points, Points) = (0, 200);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarketError {
    #[error("day {0} outside 1..=5")]
    DayOutOfRange(u8),
    #[error("unknown good `{0}`")]
    BadGood(String),
    #[error("arrival day {arrival} must precede departure day {departure}")]
    DatesOutOfOrder { arrival: u8, departure: u8 },
    #[error("{field} = {value} outside {lo}..={hi}")]
    PremiumOutOfRange { field: &'static str, value: Points, lo: Points, hi: Points },
    #[error("event night {night} not inside stay {arrival}..{departure}")]
    EventOutsideStay { night: u8, arrival: u8, departure: u8 },
    #[error("two events assigned to night {0}")]
    EventNightTaken(u8),
    #[error("holding {held} of {good}, cannot remove {wanted}")]
    Insufficient { good: GoodId, held: u32, wanted: u32 },
}

/// One client's travel preferences.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPreference")]
pub struct ClientPreference {
    pub preferred_arrival: Day,
    pub preferred_departure: Day,
    pub hotel_premium: Points,
    /// Indexed by [`EventKind::index`].
    pub event_premiums: [Points; 3],
}

#[derive(Deserialize)]
struct RawPreference {
    preferred_arrival: Day,
    preferred_departure: Day,
    hotel_premium: Points,
    event_premiums: [Points; 3],
}

impl TryFrom<RawPreference> for ClientPreference {
    type Error = MarketError;

    fn try_from(r: RawPreference) -> Result<Self, Self::Error> {
        ClientPreference::new(
            r.preferred_arrival.value(),
            r.preferred_departure.value(),
            r.hotel_premium,
            r.event_premiums,
        )
    }
}

fn check_range(field: &'static str, value: Points, (lo, hi): (Points, Points)) -> Result<(), MarketError> {
    if (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(MarketError::PremiumOutOfRange { field, value, lo, hi })
    }
}

fn check_dates(arrival: u8, departure: u8) -> Result<(Day, Day), MarketError> {
    let a = Day::new(arrival)?;
    let d = Day::new(departure)?;
    if arrival >= departure {
        return Err(MarketError::DatesOutOfOrder { arrival, departure });
    }
    Ok((a, d))
}

impl ClientPreference {
    pub fn new(
        arrival: u8,
        departure: u8,
        hotel_premium: Points,
        event_premiums: [Points; 3],
    ) -> Result<Self, MarketError> {
        let (preferred_arrival, preferred_departure) = check_dates(arrival, departure)?;
        check_range("hotel_premium", hotel_premium, HOTEL_PREMIUM_RANGE)?;
        for p in event_premiums {
            check_range("event_premium", p, EVENT_PREMIUM_RANGE)?;
        }
        Ok(ClientPreference { preferred_arrival, preferred_departure, hotel_premium, event_premiums })
    }

    pub fn event_premium(&self, kind: EventKind) -> Points {
        self.event_premiums[kind.index()]
    }

    /// The package that matches both preferred dates in the better hotel,
    /// with no entertainment.
    pub fn preferred_package(&self) -> TravelPackage {
        TravelPackage {
            arrival: self.preferred_arrival,
            departure: self.preferred_departure,
            hotel: HotelKind::Better,
            events: [None; 3],
        }
    }
}

/// An arrival/departure/hotel/entertainment assignment for one client.
///
/// `events[k]` is the night on which event kind `k` is attended, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawPackage")]
pub struct TravelPackage {
    pub arrival: Day,
    pub departure: Day,
    pub hotel: HotelKind,
    pub events: [Option<u8>; 3],
}

#[derive(Deserialize)]
struct RawPackage {
    arrival: Day,
    departure: Day,
    hotel: HotelKind,
    #[serde(default)]
    events: [Option<u8>; 3],
}

impl TryFrom<RawPackage> for TravelPackage {
    type Error = MarketError;

    fn try_from(r: RawPackage) -> Result<Self, Self::Error> {
        TravelPackage::new(r.arrival.value(), r.departure.value(), r.hotel, r.events)
    }
}

impl TravelPackage {
    pub fn new(arrival: u8, departure: u8, hotel: HotelKind, events: [Option<u8>; 3]) -> Result<Self, MarketError> {
        let (a, d) = check_dates(arrival, departure)?;
        let pkg = TravelPackage { arrival: a, departure: d, hotel, events };
        pkg.check_events()?;
        Ok(pkg)
    }

    /// A package with no entertainment.
    pub fn stay(arrival: u8, departure: u8, hotel: HotelKind) -> Result<Self, MarketError> {
        Self::new(arrival, departure, hotel, [None; 3])
    }

    pub fn with_event(mut self, kind: EventKind, night: u8) -> Result<Self, MarketError> {
        self.events[kind.index()] = Some(night);
        self.check_events()?;
        Ok(self)
    }

    fn check_events(&self) -> Result<(), MarketError> {
        let (a, d) = (self.arrival.value(), self.departure.value());
        let mut used = [false; 6];
        for night in self.events.iter().flatten().copied() {
            if night < a || night >= d {
                return Err(MarketError::EventOutsideStay { night, arrival: a, departure: d });
            }
            if used[night as usize] {
                return Err(MarketError::EventNightTaken(night));
            }
            used[night as usize] = true;
        }
        Ok(())
    }

    /// Hotel nights covered by the stay.
    pub fn nights(&self) -> std::ops::Range<u8> {
        self.arrival.value()..self.departure.value()
    }

    pub fn night_count(&self) -> u8 {
        self.departure.value() - self.arrival.value()
    }

    pub fn event_count(&self) -> usize {
        self.events.iter().flatten().count()
    }

    pub fn is_night_free(&self, night: u8) -> bool {
        !self.events.contains(&Some(night))
    }
}

/// 100 points per day of deviation, summed over arrival and departure.
pub fn travel_penalty(pref: &ClientPreference, pkg: &TravelPackage) -> Points {
    let da = (pkg.arrival.value() as Points - pref.preferred_arrival.value() as Points).abs();
    let dd = (pkg.departure.value() as Points - pref.preferred_departure.value() as Points).abs();
    PENALTY_PER_DAY * (da + dd)
}

/// The client's whole-stay premium when the package uses the better hotel.
pub fn hotel_bonus(pref: &ClientPreference, pkg: &TravelPackage) -> Points {
    match pkg.hotel {
        HotelKind::Better => pref.hotel_premium,
        HotelKind::Alt => 0,
    }
}

pub fn fun_bonus(pref: &ClientPreference, pkg: &TravelPackage) -> Points {
    EventKind::ALL
        .iter()
        .filter(|k| pkg.events[k.index()].is_some())
        .map(|k| pref.event_premium(*k))
        .sum()
}

/// Utility of serving a client with `pkg`; an unserved client scores zero.
pub fn client_utility(pref: &ClientPreference, pkg: Option<&TravelPackage>) -> Points {
    match pkg {
        None => 0,
        Some(p) => BASE_UTILITY - travel_penalty(pref, p) + hotel_bonus(pref, p) + fun_bonus(pref, p),
    }
}

/// Goods a package consumes: two flights, one hotel room per night, one
/// ticket per assigned event.
pub fn required_goods(pkg: &TravelPackage) -> Holdings {
    let mut h = Holdings::new();
    h.add(GoodId::FlightIn(pkg.arrival.value()), 1);
    h.add(GoodId::FlightOut(pkg.departure.value()), 1);
    for n in pkg.nights() {
        h.add(GoodId::HotelNight(pkg.hotel, n), 1);
    }
    for kind in EventKind::ALL {
        if let Some(n) = pkg.events[kind.index()] {
            h.add(GoodId::EventTicket(kind, n), 1);
        }
    }
    h
}

/// A package is feasible when every required good is held and the client
/// would gain positive utility from it.
pub fn is_feasible(pref: &ClientPreference, pkg: &TravelPackage, holdings: &Holdings) -> bool {
    required_goods(pkg).is_subset_of(holdings) && client_utility(pref, Some(pkg)) > 0
}
