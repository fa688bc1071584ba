use super::{enumerate_packages, marginal_cost, objective, Allocation, PriceVector};
use crate::market::{client_utility, ClientPreference, Day, EventKind, Holdings, Points, TravelPackage};

/// Objective after the greedy seed and after each accepted move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyTrace {
    pub seed: Points,
    pub steps: Vec<Points>,
}

/// Greedy seed followed by hill climbing; suitable for a full set of clients.
pub fn optimize_greedy(prefs: &[ClientPreference], holdings: &Holdings, prices: &PriceVector) -> Allocation {
    optimize_greedy_traced(prefs, holdings, prices).0
}

pub fn optimize_greedy_traced(
    prefs: &[ClientPreference],
    holdings: &Holdings,
    prices: &PriceVector,
) -> (Allocation, GreedyTrace) {
    let cands: Vec<Vec<TravelPackage>> = prefs.iter().map(|p| enumerate_packages(p, prices, holdings)).collect();

    let net = |i: usize, pkg: &TravelPackage, avail: &Holdings| -> Option<Points> {
        marginal_cost(pkg, avail, prices).map(|c| client_utility(&prefs[i], Some(pkg)) - c)
    };

    // Highest standalone value picks first.
    let mut order: Vec<(usize, Points)> = (0..prefs.len())
        .map(|i| (i, cands[i].iter().filter_map(|p| net(i, p, holdings)).max().unwrap_or(0)))
        .collect();
    order.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut packages: Vec<Option<TravelPackage>> = vec![None; prefs.len()];
    let mut remaining = *holdings;
    for (i, _) in order {
        let mut best: Option<(Points, TravelPackage)> = None;
        for pkg in &cands[i] {
            if let Some(v) = net(i, pkg, &remaining) {
                if v > 0 && best.is_none_or(|(bv, _)| v > bv) {
                    best = Some((v, *pkg));
                }
            }
        }
        if let Some((_, pkg)) = best {
            for (g, n) in crate::market::required_goods(&pkg).iter() {
                let take = n.min(remaining.get(g));
                remaining.set(g, remaining.get(g) - take);
            }
            packages[i] = Some(pkg);
        }
    }

    let eval = |pk: &[Option<TravelPackage>]| objective(prefs, pk, holdings, prices);
    let mut current = eval(&packages).expect("seed only uses obtainable goods");
    let trace_seed = current;
    let mut steps = Vec::new();

    loop {
        let mut best_move: Option<(Points, usize, Option<TravelPackage>)> = None;
        for i in 0..prefs.len() {
            for candidate in neighbours(packages[i], &cands[i]) {
                let saved = packages[i];
                packages[i] = candidate;
                let v = eval(&packages);
                packages[i] = saved;
                if let Some(v) = v {
                    if v > current && best_move.is_none_or(|(bv, ..)| v > bv) {
                        best_move = Some((v, i, candidate));
                    }
                }
            }
        }
        match best_move {
            Some((v, i, candidate)) => {
                packages[i] = candidate;
                current = v;
                steps.push(v);
            }
            None => break,
        }
    }

    (Allocation { packages, objective: current }, GreedyTrace { seed: trace_seed, steps })
}

/// Single-client moves: switch hotel, shift a date by one day, add, drop
/// or move an event, drop the package, or take another candidate.
fn neighbours(current: Option<TravelPackage>, cands: &[TravelPackage]) -> Vec<Option<TravelPackage>> {
    let mut out: Vec<Option<TravelPackage>> = Vec::new();
    let Some(pkg) = current else {
        out.extend(cands.iter().copied().map(Some));
        return out;
    };

    out.push(Some(TravelPackage { hotel: pkg.hotel.other(), ..pkg }));

    let a = pkg.arrival.value() as i16;
    let d = pkg.departure.value() as i16;
    for (na, nd) in [(a - 1, d), (a + 1, d), (a, d - 1), (a, d + 1)] {
        if let Some(p) = reshape(&pkg, na, nd) {
            out.push(Some(p));
        }
    }

    for kind in EventKind::ALL {
        let k = kind.index();
        match pkg.events[k] {
            None => {
                for n in pkg.nights().filter(|n| pkg.is_night_free(*n)) {
                    let mut p = pkg;
                    p.events[k] = Some(n);
                    out.push(Some(p));
                }
            }
            Some(cur) => {
                let mut dropped = pkg;
                dropped.events[k] = None;
                out.push(Some(dropped));
                for n in pkg.nights().filter(|n| *n != cur && pkg.is_night_free(*n)) {
                    let mut p = pkg;
                    p.events[k] = Some(n);
                    out.push(Some(p));
                }
            }
        }
    }

    out.push(None);
    out.extend(cands.iter().filter(|c| **c != pkg).copied().map(Some));
    out
}

/// The package with new dates, dropping events that fall outside the stay.
fn reshape(pkg: &TravelPackage, arrival: i16, departure: i16) -> Option<TravelPackage> {
    if !(1..=4).contains(&arrival) || !(2..=5).contains(&departure) || arrival >= departure {
        return None;
    }
    let (a, d) = (arrival as u8, departure as u8);
    let mut events = pkg.events;
    for e in events.iter_mut() {
        if let Some(n) = *e {
            if n < a || n >= d {
                *e = None;
            }
        }
    }
    Some(TravelPackage {
        arrival: Day::new(a).ok()?,
        departure: Day::new(d).ok()?,
        hotel: pkg.hotel,
        events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::allocator::optimize_exact;
    use crate::market::{required_goods, GoodId, HotelKind};

    #[test]
    fn matches_exact_on_single_client_example() {
        let pref = ClientPreference::new(2, 3, 100, [0, 0, 0]).unwrap();
        let prices = PriceVector::unobtainable()
            .with(GoodId::FlightIn(2), Some(300))
            .with(GoodId::FlightOut(3), Some(300))
            .with(GoodId::HotelNight(HotelKind::Better, 2), Some(100))
            .with(GoodId::HotelNight(HotelKind::Alt, 2), Some(50));
        let g = optimize_greedy(&[pref], &Holdings::new(), &prices);
        let e = optimize_exact(&[pref], &Holdings::new(), &prices).unwrap();
        assert_eq!(g, e);
    }

    #[test]
    fn preferred_packages_when_everything_is_owned_and_free() {
        let prefs: Vec<ClientPreference> = (0..8)
            .map(|i| {
                let a = 1 + (i % 4) as u8;
                ClientPreference::new(a, (a + 1 + (i % 2) as u8).min(5), 50 + 10 * i as Points, [0, 0, 0]).unwrap()
            })
            .collect();
        let mut owned = Holdings::new();
        for p in &prefs {
            owned.merge(&required_goods(&p.preferred_package()));
        }
        let a = optimize_greedy(&prefs, &owned, &PriceVector::zero());
        for (p, pkg) in prefs.iter().zip(&a.packages) {
            let pkg = pkg.unwrap();
            assert_eq!((pkg.arrival, pkg.departure), (p.preferred_arrival, p.preferred_departure));
        }
    }

    #[test]
    fn switches_hotel_when_better_becomes_unobtainable() {
        let pref = ClientPreference::new(1, 3, 120, [0, 0, 0]).unwrap();
        let mut owned = Holdings::new();
        owned.add(GoodId::FlightIn(1), 1);
        owned.add(GoodId::FlightOut(3), 1);
        let mut open = PriceVector::zero();
        for g in GoodId::ALL.into_iter().filter(|g| g.is_flight()) {
            open.set(g, Some(200));
        }
        let before = optimize_greedy(&[pref], &owned, &open);
        assert_eq!(before.packages[0].unwrap().hotel, HotelKind::Better);

        let closed = open.with(GoodId::HotelNight(HotelKind::Better, 2), None);
        let after = optimize_greedy(&[pref], &owned, &closed);
        let pkg = after.packages[0].unwrap();
        assert_eq!(pkg.hotel, HotelKind::Alt);
        assert_eq!((pkg.arrival.value(), pkg.departure.value()), (1, 3));
    }

    #[test]
    fn trace_is_strictly_increasing() {
        let prefs = [
            ClientPreference::new(1, 4, 80, [120, 30, 10]).unwrap(),
            ClientPreference::new(2, 4, 150, [0, 190, 60]).unwrap(),
            ClientPreference::new(3, 5, 60, [70, 70, 70]).unwrap(),
        ];
        let mut owned = Holdings::new();
        owned.add(GoodId::EventTicket(EventKind::E2, 2), 1);
        owned.add(GoodId::HotelNight(HotelKind::Alt, 3), 2);
        let prices = PriceVector::zero()
            .with(GoodId::FlightIn(1), Some(250))
            .with(GoodId::HotelNight(HotelKind::Better, 3), Some(400))
            .with(GoodId::EventTicket(EventKind::E1, 1), None);
        let (a, t) = optimize_greedy_traced(&prefs, &owned, &prices);
        let mut prev = t.seed;
        for s in &t.steps {
            assert!(*s > prev);
            prev = *s;
        }
        assert_eq!(a.objective, prev);
    }
}
