use proptest::prelude::*;

use tacsim::allocator::{objective, optimize_greedy, shortfall, PriceVector};
use tacsim::auction::{HotelAuction, OrderBook, Side, HOTEL_CAPACITY};
use tacsim::market::{ClientPreference, EventKind, GoodId, Holdings, HotelKind};

fn pref() -> impl Strategy<Value = ClientPreference> {
    (1u8..=4, 1u8..=4, 50i64..=150, [0i64..=200, 0i64..=200, 0i64..=200])
        .prop_map(|(a, len, h, e)| ClientPreference::new(a, (a + len).min(5), h, e).unwrap())
}

fn prices() -> impl Strategy<Value = PriceVector> {
    proptest::collection::vec(proptest::option::weighted(0.8, 0i64..300), 28).prop_map(|v| {
        let mut pv = PriceVector::unobtainable();
        for (i, p) in v.into_iter().enumerate() {
            pv.set(GoodId::from_index(i).unwrap(), p);
        }
        pv
    })
}

fn holdings() -> impl Strategy<Value = Holdings> {
    proptest::collection::vec(0u32..3, 28).prop_map(|v| {
        let mut h = Holdings::new();
        for (i, n) in v.into_iter().enumerate() {
            h.set(GoodId::from_index(i).unwrap(), n);
        }
        h
    })
}

proptest! {
    #[test]
    fn hotel_ask_never_falls_and_clearing_is_uniform(
        bids in proptest::collection::vec((0u8..8, 1u32..5, 0i64..400), 0..60)
    ) {
        let mut h = HotelAuction::new(GoodId::HotelNight(HotelKind::Alt, 3));
        let mut last = h.ask();
        for (t, (agent, qty, price)) in bids.into_iter().enumerate() {
            let before = h.ask();
            let res = h.submit(agent, &[(qty, price)], t as u32);
            prop_assert_eq!(res.is_ok(), price > before);
            prop_assert!(h.ask() >= last);
            last = h.ask();
        }
        let ask = h.ask();
        let txs = h.close(480).unwrap();
        prop_assert!(txs.len() <= HOTEL_CAPACITY);
        prop_assert!(txs.iter().all(|t| t.price == ask && t.qty == 1));
        prop_assert!(h.submit(0, &[(1, 10_000)], 490).is_err());
    }

    #[test]
    fn book_never_crosses_at_rest(
        orders in proptest::collection::vec((0u8..4, any::<bool>(), 0i64..200, 1u32..4), 0..80)
    ) {
        let mut book = OrderBook::new(GoodId::EventTicket(EventKind::E3, 1));
        let mut held = [5u32; 4];
        for (i, (agent, buy, price, qty)) in orders.into_iter().enumerate() {
            let side = if buy { Side::Buy } else { Side::Sell };
            if let Ok((fills, _)) = book.submit(i as u64, agent, side, price, qty, held[agent as usize], i as u32) {
                for f in fills {
                    let t = f.transaction;
                    held[t.seller.agent().unwrap() as usize] -= t.qty;
                    held[t.buyer.agent().unwrap() as usize] += t.qty;
                }
            }
            if let (Some(b), Some(a)) = (book.best_bid(), book.best_ask()) {
                prop_assert!(b < a, "book left crossed: bid {} ask {}", b, a);
            }
            prop_assert_eq!(held.iter().sum::<u32>(), 20);
            for a in 0..4u8 {
                prop_assert!(book.reserved(a) <= held[a as usize]);
            }
        }
    }

    #[test]
    fn greedy_plans_are_obtainable_and_scored_honestly(
        prefs in proptest::collection::vec(pref(), 1..9),
        h in holdings(),
        pv in prices(),
    ) {
        let a = optimize_greedy(&prefs, &h, &pv);
        prop_assert_eq!(a.packages.len(), prefs.len());
        prop_assert!(a.objective >= 0);
        prop_assert_eq!(objective(&prefs, &a.packages, &h, &pv), Some(a.objective));
        for (g, n) in shortfall(&a.packages, &h).iter() {
            prop_assert!(n == 0 || pv.get(g).is_some(), "needs unobtainable {}", g);
        }
    }

    #[test]
    fn owned_goods_alone_never_cost_anything(prefs in proptest::collection::vec(pref(), 1..9), h in holdings()) {
        let a = optimize_greedy(&prefs, &h, &PriceVector::unobtainable());
        prop_assert!(a.demand().is_subset_of(&h));
    }
}

#[test]
fn cheap_prices_cannot_hurt() {
    // Lowering a price never lowers the achievable objective; spot-check
    // the greedy solver on a fixed instance.
    let prefs = vec![ClientPreference::new(2, 4, 90, [10, 120, 40]).unwrap(); 3];
    let dear = PriceVector::zero().with(GoodId::FlightIn(2), Some(500));
    let cheap = PriceVector::zero().with(GoodId::FlightIn(2), Some(5));
    let h = Holdings::new();
    assert!(optimize_greedy(&prefs, &h, &cheap).objective >= optimize_greedy(&prefs, &h, &dear).objective);
}
