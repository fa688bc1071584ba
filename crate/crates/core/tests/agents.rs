use tacsim::agent::{hotel_bid_price, sell_price, Agent, GreedyAgent, HotelBidHistory, RandomAgent, TotaAgent};
use tacsim::auction::{GameTime, Price, Side};
use tacsim::market::{ClientPreference, EventKind, GoodId, Holdings, HotelKind};
use tacsim::server::protocol::{BidPoint, Message};
use tacsim::server::GameConfig;

const FIN2: GoodId = GoodId::FlightIn(2);
const FOUT4: GoodId = GoodId::FlightOut(4);

fn start(prefs: Vec<ClientPreference>, endowment: Holdings) -> Message {
    Message::GameStart { agent_id: 0, config: GameConfig::new(1), preferences: prefs, endowment }
}

fn quote(g: GoodId, ask: Option<Price>, time: GameTime) -> Message {
    Message::Quote { auction: g, ask, bid: None, time, closed: false, hqw: g.is_hotel().then_some(0) }
}

/// Quotes for every good: flights at `flight`, hotels at `hotel`, empty books.
fn turn(time: GameTime, flight: Price, hotel: Price) -> Vec<Message> {
    let mut v: Vec<Message> = GoodId::ALL
        .into_iter()
        .filter(|g| !g.is_hotel() || time.is_multiple_of(60))
        .map(|g| match g {
            g if g.is_flight() => quote(g, Some(flight), time),
            g if g.is_hotel() => quote(g, Some(hotel), time),
            g => quote(g, None, time),
        })
        .collect();
    v.push(Message::Tick { time, game_over: false });
    v
}

fn submits(out: &[Message]) -> Vec<(GoodId, Side, Vec<BidPoint>)> {
    out.iter()
        .filter_map(|m| match m {
            Message::Submit { auction, side, points } => Some((*auction, *side, points.clone())),
            _ => None,
        })
        .collect()
}

fn flight_submits(out: &[Message]) -> Vec<(GoodId, u32, Price)> {
    submits(out).into_iter().filter(|(g, ..)| g.is_flight()).map(|(g, _, p)| (g, p[0].qty, p[0].price)).collect()
}

fn pref(a: u8, d: u8, hotel: i64, events: [i64; 3]) -> ClientPreference {
    ClientPreference::new(a, d, hotel, events).unwrap()
}

fn run_to(agent: &mut TotaAgent, from: GameTime, to: GameTime, mut extra: impl FnMut(GameTime) -> Vec<Message>) -> Vec<Vec<Message>> {
    let mut outs = Vec::new();
    for t in (from..=to).step_by(10) {
        let mut batch = extra(t);
        batch.extend(turn(t, 100, 0));
        outs.push(agent.handle(&batch));
    }
    outs
}

#[test]
fn hotel_bid_examples() {
    assert_eq!(hotel_bid_price(Some(150), Some(120), 200), 230);
    assert_eq!(hotel_bid_price(Some(70), Some(70), 90), 91);
    assert_eq!(hotel_bid_price(Some(100), Some(130), 50), 51);
    assert_eq!(hotel_bid_price(None, None, 40), 41);
    assert_eq!(hotel_bid_price(Some(10), None, 40), 41);

    let mut h = HotelBidHistory::default();
    for (t, ask) in [(60, 0), (120, 20), (180, 50)] {
        h.observe(t, ask);
    }
    h.observe(180, 999); // same quote time seen twice
    assert_eq!((h.ask1, h.ask2, h.current), (Some(20), Some(0), Some(50)));
    assert_eq!(h.bid_price(50), 70);
}

#[test]
fn sell_curve_examples() {
    assert_eq!(sell_price(0, 540), 200.0);
    assert!(sell_price(540, 540).abs() < 1e-9);
    assert!((sell_price(270, 540) - 75.98).abs() < 0.01);
}

#[test]
fn flights_wait_for_the_eight_minute_gate() {
    let mut tota = TotaAgent::new();
    let prefs = vec![pref(2, 4, 100, [0; 3]); 3];
    let mut outs = run_to(&mut tota, 0, 470, |t| if t == 0 { vec![start(prefs.clone(), Holdings::new())] } else { vec![] });
    assert!(outs.iter().all(|o| flight_submits(o).is_empty()), "no flight bought before 480 s");
    assert_eq!(tota.intended_flights().get(FIN2), 3);
    assert_eq!(tota.intended_flights().get(FOUT4), 3);

    outs = run_to(&mut tota, 480, 480, |_| vec![]);
    let mut bought = flight_submits(&outs[0]);
    bought.sort_by_key(|(g, ..)| g.index());
    assert_eq!(bought, vec![(FIN2, 3, 100), (FOUT4, 3, 100)]);

    // The inbound flights arrive; the outbound purchase is turned away.
    let fill = Message::Transaction { auction: FIN2, side: Side::Buy, qty: 3, price: 100, time: 480, order_id: None };
    let accepted = Message::Accepted { auction: Some(FIN2), order_ids: vec![] };
    let rejected = Message::Rejected { auction: Some(FOUT4), order_id: None, reason: "BID_TOO_LOW".into() };
    outs = run_to(&mut tota, 490, 510, |t| if t == 490 { vec![accepted.clone(), rejected.clone(), fill.clone()] } else { vec![] });
    assert!(flight_submits(&outs[0]).is_empty() && flight_submits(&outs[1]).is_empty());
    assert_eq!(flight_submits(&outs[2]), vec![(FOUT4, 3, 100)]);
}

#[test]
fn hotel_bids_follow_quote_momentum() {
    let mut tota = TotaAgent::new();
    let better2 = GoodId::HotelNight(HotelKind::Better, 2);
    let mut last = Vec::new();
    for (t, ask) in [(0, 0), (60, 20), (120, 50)] {
        let mut batch = if t == 0 { vec![start(vec![pref(2, 3, 150, [0; 3])], Holdings::new())] } else { vec![] };
        batch.extend(turn(t, 10, ask));
        last = submits(&tota.handle(&batch));
    }
    let bid = last.iter().find(|(g, ..)| *g == better2).expect("bids for the better hotel");
    assert_eq!(bid.2, vec![BidPoint { qty: 1, price: 70 }]);
}

#[test]
fn closed_hotel_moves_the_plan() {
    let mut tota = TotaAgent::new();
    let better2 = GoodId::HotelNight(HotelKind::Better, 2);
    let mut batch = vec![start(vec![pref(2, 3, 150, [0; 3])], Holdings::new())];
    batch.extend(turn(0, 10, 0));
    tota.handle(&batch);
    assert_eq!(tota.plan().demand().get(better2), 1);

    // Better night 2 closes without us; hqw was 0.
    let mut batch = vec![Message::AuctionClosed { auction: better2, time: 60 }];
    batch.extend(turn(60, 10, 0));
    let out = tota.handle(&batch);
    assert_eq!(tota.plan().demand().get(better2), 0);
    assert_eq!(tota.plan().demand().get(GoodId::HotelNight(HotelKind::Alt, 2)), 1);
    assert!(submits(&out).iter().all(|(g, ..)| *g != better2));
}

#[test]
fn surplus_tickets_are_offered_one_order_each() {
    let e1n3 = GoodId::EventTicket(EventKind::E1, 3);
    let mut endowment = Holdings::new();
    endowment.set(e1n3, 3);
    let mut tota = TotaAgent::new();
    let mut batch = vec![start(vec![pref(3, 4, 100, [150, 0, 0])], endowment)];
    batch.extend(turn(0, 10, 0));
    let first = submits(&tota.handle(&batch));
    let sells: Vec<_> = first.iter().filter(|(g, s, _)| *g == e1n3 && *s == Side::Sell).collect();
    assert_eq!(sells.len(), 2);
    assert!(sells.iter().all(|(.., p)| *p == vec![BidPoint { qty: 1, price: 200 }]));

    // Everything is accepted and both sells rest; at the next minute they
    // are repriced down the curve.
    let mut ids = 7..;
    let mut batch: Vec<Message> = first
        .iter()
        .map(|(g, ..)| Message::Accepted {
            auction: Some(*g),
            order_ids: if g.is_event() { vec![ids.next().unwrap()] } else { vec![] },
        })
        .collect();
    for t in (10..60).step_by(10) {
        batch.extend(turn(t, 10, 0));
        tota.handle(&batch);
        batch.clear();
    }
    assert_eq!(tota.view().resting(e1n3, Side::Sell).len(), 2);
    let out = tota.handle(&turn(60, 10, 0));
    let expected = sell_price(60, 540).round() as Price;
    let replaces: Vec<_> = out
        .iter()
        .filter_map(|m| match m {
            Message::Replace { order_id, price } => Some((*order_id, *price)),
            _ => None,
        })
        .collect();
    assert_eq!(replaces, vec![(7, expected), (8, expected)]);
}

#[test]
fn tickets_are_bought_below_their_premium() {
    let e2n2 = GoodId::EventTicket(EventKind::E2, 2);
    let with_ask = |premium| {
        let mut tota = TotaAgent::new();
        let mut batch = vec![start(vec![pref(2, 3, 100, [0, premium, 0])], Holdings::new())];
        batch.extend(turn(0, 10, 0));
        batch.retain(|m| !matches!(m, Message::Quote { auction, .. } if *auction == e2n2));
        batch.insert(1, quote(e2n2, Some(80), 0));
        submits(&tota.handle(&batch)).into_iter().filter(|(g, ..)| *g == e2n2).collect::<Vec<_>>()
    };
    assert_eq!(with_ask(120), vec![(e2n2, Side::Buy, vec![BidPoint { qty: 1, price: 119 }])]);
    assert!(with_ask(60).is_empty());
}

#[test]
fn game_over_reports_an_allocation_of_owned_goods() {
    let mut owned = Holdings::new();
    owned.set(FIN2, 1);
    owned.set(FOUT4, 1);
    owned.set(GoodId::HotelNight(HotelKind::Alt, 2), 1);
    owned.set(GoodId::HotelNight(HotelKind::Alt, 3), 1);
    let mut tota = TotaAgent::new();
    tota.handle(&[start(vec![pref(2, 4, 100, [0; 3]), pref(1, 2, 100, [0; 3])], owned), Message::Tick { time: 0, game_over: false }]);
    let out = tota.handle(&[Message::Tick { time: 540, game_over: true }]);
    let [Message::Allocation { packages }] = out.as_slice() else { panic!("{out:?}") };
    assert_eq!(packages.len(), 2);
    assert!(packages[0].is_some() && packages[1].is_none());
}

fn drive(agent: &mut dyn Agent, seed: u64) -> Vec<Message> {
    let prefs: Vec<_> = (0..8).map(|i| pref(1 + i % 4, 5, 100, [50, 60, 70])).collect();
    let mut all = Vec::new();
    let cfg = GameConfig::new(seed);
    let mut batch = vec![Message::GameStart { agent_id: 2, config: cfg, preferences: prefs, endowment: Holdings::new() }];
    for t in (0..=540).step_by(10) {
        batch.extend(turn(t, 50, 10));
        *batch.last_mut().unwrap() = Message::Tick { time: t, game_over: t == 540 };
        all.extend(agent.handle(&batch));
        batch.clear();
    }
    all
}

#[test]
fn random_agent_is_reproducible() {
    let a = drive(&mut RandomAgent::new(), 3);
    assert_eq!(a, drive(&mut RandomAgent::new(), 3));
    assert_ne!(a, drive(&mut RandomAgent::new(), 4));
    for (g, side, points) in submits(&a) {
        assert_eq!(side, Side::Buy);
        let base = if g.is_flight() { 50 } else if g.is_hotel() { 10 } else { 0 };
        assert!((base + 1..=base + 50).contains(&points[0].price), "{g} {points:?}");
    }
}

#[test]
fn greedy_agent_buys_preferred_flights_at_ten_seconds_and_skips_tickets() {
    let mut g = GreedyAgent::new();
    let out = drive(&mut g, 1);
    let subs = submits(&out);
    assert!(subs.iter().all(|(g, ..)| !g.is_event()));
    let flights: Vec<_> = subs.iter().filter(|(g, ..)| g.is_flight()).collect();
    assert_eq!(flights.iter().map(|(.., p)| p[0].qty).sum::<u32>(), 16);
    assert!(flights.iter().all(|(.., p)| p[0].price == 50));
    assert!(subs.iter().filter(|(g, ..)| g.is_hotel()).all(|(g, _, p)| matches!(g, GoodId::HotelNight(HotelKind::Better, _)) && p[0].price == 20));
}
