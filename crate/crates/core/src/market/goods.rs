use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::MarketError;

/// Number of distinct goods, one auction each.
pub const GOOD_COUNT: usize = 28;

/// A day of the travel week, 1 through 5.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct Day(u8);

impl Day {
    pub const FIRST: u8 = 1;
    pub const LAST: u8 = 5;

    pub fn new(value: u8) -> Result<Self, MarketError> {
        if (Self::FIRST..=Self::LAST).contains(&value) {
            Ok(Day(value))
        } else {
            Err(MarketError::DayOutOfRange(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for Day {
    type Error = MarketError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        Day::new(value)
    }
}

impl From<Day> for u8 {
    fn from(d: Day) -> u8 {
        d.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HotelKind {
    /// Tampa Towers.
    Better,
    /// Shoreline Shanties.
    Alt,
}

impl HotelKind {
    pub const ALL: [HotelKind; 2] = [HotelKind::Better, HotelKind::Alt];

    pub fn other(self) -> HotelKind {
        match self {
            HotelKind::Better => HotelKind::Alt,
            HotelKind::Alt => HotelKind::Better,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            HotelKind::Better => "better",
            HotelKind::Alt => "alt",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    E1,
    E2,
    E3,
}

impl EventKind {
    pub const ALL: [EventKind; 3] = [EventKind::E1, EventKind::E2, EventKind::E3];

    pub fn index(self) -> usize {
        self as usize
    }

    fn tag(self) -> &'static str {
        match self {
            EventKind::E1 => "e1",
            EventKind::E2 => "e2",
            EventKind::E3 => "e3",
        }
    }
}

/// One tradeable good. Nights are numbered 1..=4; night `n` runs from day
/// `n` to day `n + 1`.
///
/// On the wire a good is a short string: `flight_in:2`, `flight_out:5`,
/// `hotel:better:3`, `event:e2:1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GoodId {
    FlightIn(u8),
    FlightOut(u8),
    HotelNight(HotelKind, u8),
    EventTicket(EventKind, u8),
}

/// Goods of each class, grouped the way the auctions are laid out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoodClass {
    Flight,
    Hotel,
    Event,
}

impl GoodId {
    /// All 28 goods in auction-index order.
    pub const ALL: [GoodId; GOOD_COUNT] = {
        use EventKind::*;
        use GoodId::*;
        use HotelKind::*;
        [
            FlightIn(1),
            FlightIn(2),
            FlightIn(3),
            FlightIn(4),
            FlightOut(2),
            FlightOut(3),
            FlightOut(4),
            FlightOut(5),
            HotelNight(Better, 1),
            HotelNight(Better, 2),
            HotelNight(Better, 3),
            HotelNight(Better, 4),
            HotelNight(Alt, 1),
            HotelNight(Alt, 2),
            HotelNight(Alt, 3),
            HotelNight(Alt, 4),
            EventTicket(E1, 1),
            EventTicket(E1, 2),
            EventTicket(E1, 3),
            EventTicket(E1, 4),
            EventTicket(E2, 1),
            EventTicket(E2, 2),
            EventTicket(E2, 3),
            EventTicket(E2, 4),
            EventTicket(E3, 1),
            EventTicket(E3, 2),
            EventTicket(E3, 3),
            EventTicket(E3, 4),
        ]
    };

    /// Dense index into [`GoodId::ALL`].
    pub fn index(self) -> usize {
        match self {
            GoodId::FlightIn(d) => {
                debug_assert!((1..=4).contains(&d));
                (d - 1) as usize
            }
            GoodId::FlightOut(d) => {
                debug_assert!((2..=5).contains(&d));
                4 + (d - 2) as usize
            }
            GoodId::HotelNight(kind, n) => {
                debug_assert!((1..=4).contains(&n));
                8 + 4 * (kind as usize) + (n - 1) as usize
            }
            GoodId::EventTicket(kind, n) => {
                debug_assert!((1..=4).contains(&n));
                16 + 4 * kind.index() + (n - 1) as usize
            }
        }
    }

    pub fn from_index(index: usize) -> Option<GoodId> {
        GoodId::ALL.get(index).copied()
    }

    pub fn class(self) -> GoodClass {
        match self {
            GoodId::FlightIn(_) | GoodId::FlightOut(_) => GoodClass::Flight,
            GoodId::HotelNight(..) => GoodClass::Hotel,
            GoodId::EventTicket(..) => GoodClass::Event,
        }
    }

    pub fn is_flight(self) -> bool {
        self.class() == GoodClass::Flight
    }

    pub fn is_hotel(self) -> bool {
        self.class() == GoodClass::Hotel
    }

    pub fn is_event(self) -> bool {
        self.class() == GoodClass::Event
    }

    fn validate(self) -> Result<GoodId, MarketError> {
        let ok = match self {
            GoodId::FlightIn(d) => (1..=4).contains(&d),
            GoodId::FlightOut(d) => (2..=5).contains(&d),
            GoodId::HotelNight(_, n) | GoodId::EventTicket(_, n) => (1..=4).contains(&n),
        };
        if ok {
            Ok(self)
        } else {
            Err(MarketError::BadGood(self.to_string()))
        }
    }
}

impl fmt::Display for GoodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoodId::FlightIn(d) => write!(f, "flight_in:{d}"),
            GoodId::FlightOut(d) => write!(f, "flight_out:{d}"),
            GoodId::HotelNight(k, n) => write!(f, "hotel:{}:{n}", k.tag()),
            GoodId::EventTicket(k, n) => write!(f, "event:{}:{n}", k.tag()),
        }
    }
}

impl FromStr for GoodId {
    type Err = MarketError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MarketError::BadGood(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.parse::<u8>().map_err(|_| bad());
        let good = match parts.as_slice() {
            ["flight_in", d] => GoodId::FlightIn(num(d)?),
            ["flight_out", d] => GoodId::FlightOut(num(d)?),
            ["hotel", k, n] => {
                let kind = match *k {
                    "better" => HotelKind::Better,
                    "alt" => HotelKind::Alt,
                    _ => return Err(bad()),
                };
                GoodId::HotelNight(kind, num(n)?)
            }
            ["event", k, n] => {
                let kind = match *k {
                    "e1" => EventKind::E1,
                    "e2" => EventKind::E2,
                    "e3" => EventKind::E3,
                    _ => return Err(bad()),
                };
                GoodId::EventTicket(kind, num(n)?)
            }
            _ => return Err(bad()),
        };
        good.validate()
    }
}

impl Serialize for GoodId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GoodId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A multiset of goods.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Holdings {
    counts: [u32; GOOD_COUNT],
}

impl Holdings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, good: GoodId) -> u32 {
        self.counts[good.index()]
    }

    pub fn set(&mut self, good: GoodId, count: u32) {
        self.counts[good.index()] = count;
    }

    pub fn add(&mut self, good: GoodId, qty: u32) {
        self.counts[good.index()] += qty;
    }

    /// Removes `qty` units; fails without modifying anything if fewer are held.
    pub fn remove(&mut self, good: GoodId, qty: u32) -> Result<(), MarketError> {
        let slot = &mut self.counts[good.index()];
        if *slot < qty {
            return Err(MarketError::Insufficient { good, held: *slot, wanted: qty });
        }
        *slot -= qty;
        Ok(())
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// Multiset inclusion: every count in `self` is at most the count in `other`.
    pub fn is_subset_of(&self, other: &Holdings) -> bool {
        self.counts.iter().zip(other.counts.iter()).all(|(a, b)| a <= b)
    }

    /// Non-zero entries in auction-index order.
    pub fn iter(&self) -> impl Iterator<Item = (GoodId, u32)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (GoodId::ALL[i], c))
    }

    pub fn merge(&mut self, other: &Holdings) {
        for (a, b) in self.counts.iter_mut().zip(other.counts.iter()) {
            *a += b;
        }
    }
}

impl FromIterator<GoodId> for Holdings {
    fn from_iter<I: IntoIterator<Item = GoodId>>(iter: I) -> Self {
        let mut h = Holdings::new();
        for g in iter {
            h.add(g, 1);
        }
        h
    }
}

impl fmt::Debug for Holdings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter().map(|(g, c)| (g.to_string(), c))).finish()
    }
}

impl Serialize for Holdings {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(self.iter())
    }
}

impl<'de> Deserialize<'de> for Holdings {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map = std::collections::BTreeMap::<GoodId, u32>::deserialize(d)?;
        let mut h = Holdings::new();
        for (g, c) in map {
            h.set(g, c);
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_eight_distinct_goods() {
        let mut seen = std::collections::HashSet::new();
        for (i, g) in GoodId::ALL.iter().enumerate() {
            assert_eq!(g.index(), i);
            assert!(seen.insert(*g));
        }
        assert_eq!(seen.len(), 28);
        let flights = GoodId::ALL.iter().filter(|g| g.is_flight()).count();
        let hotels = GoodId::ALL.iter().filter(|g| g.is_hotel()).count();
        let events = GoodId::ALL.iter().filter(|g| g.is_event()).count();
        assert_eq!((flights, hotels, events), (8, 8, 12));
    }

    #[test]
    fn good_string_round_trip() {
        for g in GoodId::ALL {
            let s = g.to_string();
            assert_eq!(s.parse::<GoodId>().unwrap(), g);
        }
        assert!("flight_in:5".parse::<GoodId>().is_err());
        assert!("flight_out:1".parse::<GoodId>().is_err());
        assert!("hotel:fancy:1".parse::<GoodId>().is_err());
        assert!("event:e4:2".parse::<GoodId>().is_err());
        assert!("".parse::<GoodId>().is_err());
    }

    #[test]
    fn day_bounds() {
        assert!(Day::new(0).is_err());
        assert!(Day::new(6).is_err());
        assert_eq!(Day::new(3).unwrap().value(), 3);
        assert!(serde_json::from_str::<Day>("7").is_err());
    }

    #[test]
    fn holdings_remove_checks_count() {
        let mut h = Holdings::new();
        h.add(GoodId::FlightIn(2), 1);
        assert!(h.remove(GoodId::FlightIn(2), 2).is_err());
        assert_eq!(h.get(GoodId::FlightIn(2)), 1);
        h.remove(GoodId::FlightIn(2), 1).unwrap();
        assert!(h.is_empty());
    }

    #[test]
    fn holdings_json_is_a_map() {
        let h: Holdings = [GoodId::EventTicket(EventKind::E2, 3), GoodId::EventTicket(EventKind::E2, 3)]
            .into_iter()
            .collect();
        let json = serde_json::to_string(&h).unwrap();
        assert_eq!(json, r#"{"event:e2:3":2}"#);
        assert_eq!(serde_json::from_str::<Holdings>(&json).unwrap(), h);
    }
}
