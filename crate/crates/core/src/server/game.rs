use std::collections::HashMap;
use std::time::Duration;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;

use super::protocol::{BidPoint, Message};
use super::{digest, generate_scenario, score_game, write_log, Closing, GameConfig, GameError, GameResult, Scenario, Session};
use crate::auction::{
    AgentId, AuctionError, FlightAuction, GameTime, HotelAuction, OrderBook, OrderId, Party, Side, Transaction,
};
use crate::market::{GoodClass, GoodId, Holdings, TravelPackage};
use crate::rng::{substream, Stream};

/// Everything a finished game leaves behind.
#[derive(Clone, Debug)]
pub struct GameRecord {
    pub scenario: Scenario,
    pub transactions: Vec<Transaction>,
    pub result: GameResult,
}

impl GameRecord {
    /// The `transactions.jsonl` contents.
    pub fn log_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        write_log(&mut buf, &self.transactions, &self.result).expect("writing to memory");
        buf
    }

    pub fn digest(&self) -> String {
        digest(&self.log_bytes())
    }
}

struct Market {
    flights: Vec<FlightAuction>,
    hotels: Vec<HotelAuction>,
    books: Vec<OrderBook>,
    holdings: Vec<Holdings>,
    order_auction: HashMap<OrderId, GoodId>,
    next_order: OrderId,
    reported: Vec<Option<Vec<Option<TravelPackage>>>>,
    log: Vec<Transaction>,
    closings: Vec<Closing>,
    outbox: Vec<Vec<Message>>,
}

impl Market {
    fn new(config: &GameConfig, scenario: &Scenario) -> Self {
        let goods = |class| GoodId::ALL.into_iter().filter(move |g: &GoodId| g.class() == class);
        Market {
            flights: goods(GoodClass::Flight).map(|g| FlightAuction::new(g, config.flight_increment)).collect(),
            hotels: goods(GoodClass::Hotel).map(HotelAuction::new).collect(),
            books: goods(GoodClass::Event).map(OrderBook::new).collect(),
            holdings: scenario.endowments.clone(),
            order_auction: HashMap::new(),
            next_order: 1,
            reported: vec![None; config.agents],
            log: Vec::new(),
            closings: Vec::new(),
            outbox: vec![Vec::new(); config.agents],
        }
    }

    fn flight(&mut self, g: GoodId) -> &mut FlightAuction {
        &mut self.flights[g.index()]
    }

    fn hotel(&mut self, g: GoodId) -> &mut HotelAuction {
        &mut self.hotels[g.index() - 8]
    }

    fn book(&mut self, g: GoodId) -> &mut OrderBook {
        &mut self.books[g.index() - 16]
    }

    fn tell(&mut self, agent: AgentId, msg: Message) {
        if let Some(q) = self.outbox.get_mut(agent as usize) {
            q.push(msg);
        }
    }

    fn broadcast(&mut self, msg: Message) {
        for q in self.outbox.iter_mut() {
            q.push(msg.clone());
        }
    }

    /// Moves goods, records the trade, and notifies both agent parties.
    fn settle(&mut self, tx: Transaction, buy_order: Option<OrderId>, sell_order: Option<OrderId>) {
        if let Party::Agent(b) = tx.buyer {
            self.holdings[b as usize].add(tx.auction, tx.qty);
            self.tell(b, notice(&tx, Side::Buy, buy_order));
        }
        if let Party::Agent(s) = tx.seller {
            self.holdings[s as usize]
                .remove(tx.auction, tx.qty)
                .expect("sells are backed by reserved tickets");
            self.tell(s, notice(&tx, Side::Sell, sell_order));
        }
        self.log.push(tx);
    }

    fn close_hotel(&mut self, g: GoodId, time: GameTime) {
        let txs = self.hotel(g).close(time).expect("each hotel closes once");
        for tx in txs {
            self.settle(tx, None, None);
        }
        self.record_close(g, time);
    }

    fn record_close(&mut self, auction: GoodId, time: GameTime) {
        self.closings.push(Closing { auction, time });
        self.broadcast(Message::AuctionClosed { auction, time });
    }

    fn close_remaining(&mut self, time: GameTime) {
        for g in GoodId::ALL {
            let open = match g.class() {
                GoodClass::Flight => !self.flight(g).is_closed(),
                GoodClass::Hotel => !self.hotel(g).is_closed(),
                GoodClass::Event => !self.book(g).is_closed(),
            };
            if !open {
                continue;
            }
            match g.class() {
                GoodClass::Flight => self.flight(g).close().expect("open"),
                GoodClass::Hotel => {
                    self.close_hotel(g, time);
                    continue;
                }
                GoodClass::Event => {
                    self.book(g).close().expect("open");
                }
            }
            self.record_close(g, time);
        }
    }

    fn publish_quotes(&mut self, time: GameTime, hotels: bool) {
        let mut common = Vec::new();
        for f in &self.flights {
            common.push(quote_msg(f.quote(time), None));
        }
        for b in &self.books {
            common.push(quote_msg(b.quote(time), None));
        }
        for agent in 0..self.outbox.len() {
            let mut msgs = common.clone();
            if hotels {
                for h in &self.hotels {
                    msgs.push(quote_msg(h.quote(time), Some(h.hypothetical_quantity_won(agent as AgentId))));
                }
            }
            self.outbox[agent].extend(msgs);
        }
    }

    fn reject(&mut self, agent: AgentId, auction: Option<GoodId>, order_id: Option<OrderId>, err: &AuctionError) {
        self.tell(agent, Message::Rejected { auction, order_id, reason: err.code().to_string() });
    }

    fn apply(&mut self, agent: AgentId, msg: Message, time: GameTime) {
        match msg {
            Message::Submit { auction, side, points } => self.submit(agent, auction, side, &points, time),
            Message::Replace { order_id, price } => {
                let Some(&g) = self.order_auction.get(&order_id) else {
                    return self.reject(agent, None, Some(order_id), &AuctionError::UnknownOrder(order_id));
                };
                match self.book(g).replace(agent, order_id, price, time) {
                    Ok((fills, rest)) => {
                        self.tell(agent, Message::Accepted { auction: Some(g), order_ids: rest.into_iter().collect() });
                        for f in fills {
                            self.settle(f.transaction, Some(f.buy_order), Some(f.sell_order));
                        }
                    }
                    Err(e) => self.reject(agent, Some(g), Some(order_id), &e),
                }
            }
            Message::Cancel { order_id } => {
                let Some(&g) = self.order_auction.get(&order_id) else {
                    return self.reject(agent, None, Some(order_id), &AuctionError::UnknownOrder(order_id));
                };
                match self.book(g).cancel(agent, order_id) {
                    Ok(_) => self.tell(agent, Message::Accepted { auction: Some(g), order_ids: vec![] }),
                    Err(e) => self.reject(agent, Some(g), Some(order_id), &e),
                }
            }
            Message::Allocation { packages } => self.reported[agent as usize] = Some(packages),
            Message::EndTurn { .. } | Message::Join { .. } => {}
            other => self.tell(
                agent,
                Message::Rejected { auction: None, order_id: None, reason: format!("UNEXPECTED: {}", kind_of(&other)) },
            ),
        }
    }

    fn submit(&mut self, agent: AgentId, auction: GoodId, side: Side, points: &[BidPoint], time: GameTime) {
        if points.is_empty() {
            return self.reject(agent, Some(auction), None, &AuctionError::BadQuantity);
        }
        match auction.class() {
            GoodClass::Flight => {
                if side != Side::Buy {
                    return self.reject(agent, Some(auction), None, &AuctionError::Unsupported(auction));
                }
                let f = self.flight(auction);
                let ask = f.price();
                let check = if f.is_closed() {
                    Err(AuctionError::Closed(auction))
                } else if points.iter().any(|p| p.qty == 0) {
                    Err(AuctionError::BadQuantity)
                } else if let Some(p) = points.iter().find(|p| p.price < ask) {
                    Err(AuctionError::BidTooLow { price: p.price, ask })
                } else {
                    Ok(())
                };
                if let Err(e) = check {
                    return self.reject(agent, Some(auction), None, &e);
                }
                let qty = points.iter().map(|p| p.qty).sum();
                let tx = self.flight(auction).buy(agent, qty, time).expect("checked above");
                self.tell(agent, Message::Accepted { auction: Some(auction), order_ids: vec![] });
                self.settle(tx, None, None);
            }
            GoodClass::Hotel => {
                if side != Side::Buy {
                    return self.reject(agent, Some(auction), None, &AuctionError::Unsupported(auction));
                }
                let pts: Vec<(u32, i64)> = points.iter().map(|p| (p.qty, p.price)).collect();
                match self.hotel(auction).submit(agent, &pts, time) {
                    Ok(()) => self.tell(agent, Message::Accepted { auction: Some(auction), order_ids: vec![] }),
                    Err(e) => self.reject(agent, Some(auction), None, &e),
                }
            }
            GoodClass::Event => {
                for p in points {
                    let id = self.next_order;
                    let held = self.holdings[agent as usize].get(auction);
                    match self.book(auction).submit(id, agent, side, p.price, p.qty, held, time) {
                        Ok((fills, rest)) => {
                            self.next_order += 1;
                            self.order_auction.insert(id, auction);
                            self.tell(agent, Message::Accepted { auction: Some(auction), order_ids: rest.into_iter().collect() });
                            for f in fills {
                                self.settle(f.transaction, Some(f.buy_order), Some(f.sell_order));
                            }
                        }
                        Err(e) => self.reject(agent, Some(auction), None, &e),
                    }
                }
            }
        }
    }
}

fn notice(tx: &Transaction, side: Side, order_id: Option<OrderId>) -> Message {
    Message::Transaction { auction: tx.auction, side, qty: tx.qty, price: tx.price, time: tx.time, order_id }
}

fn quote_msg(q: crate::auction::Quote, hqw: Option<u32>) -> Message {
    Message::Quote { auction: q.auction, ask: q.ask, bid: q.bid, time: q.time, closed: q.closed, hqw }
}

fn kind_of(m: &Message) -> String {
    serde_json::to_value(m)
        .ok()
        .and_then(|v| v.get("type").and_then(|t| t.as_str()).map(str::to_string))
        .unwrap_or_default()
}

/// Runs one complete game with the given seated agents (seat `i` is agent
/// id `i`).
///
/// The loop advances in flight ticks. At each tick it moves flight
/// prices, closes the scheduled hotel auction on minute boundaries,
/// publishes quotes, hands every agent its messages, then applies the
/// agents' requests in a seeded random order. At the end all remaining
/// auctions close and the game is scored.
pub fn run_game(config: &GameConfig, mut sessions: Vec<Box<dyn Session>>) -> Result<GameRecord, GameError> {
    config.validate()?;
    if sessions.len() != config.agents {
        return Err(GameError::SeatCount { expected: config.agents, got: sessions.len() });
    }
    let scenario = generate_scenario(config, &mut substream(config.seed, Stream::Scenario));
    let mut flight_rng = substream(config.seed, Stream::Flights);
    let mut turn_rng: ChaCha8Rng = substream(config.seed, Stream::TurnOrder);
    let mut market = Market::new(config, &scenario);
    let names: Vec<String> = sessions.iter().map(|s| s.name().to_string()).collect();
    let mut live = vec![true; sessions.len()];
    let mut silenced: Vec<AgentId> = Vec::new();
    let mut silence = |seat: usize, err: &dyn std::fmt::Display, live: &mut Vec<bool>| {
        ::log::warn!("agent {seat} ({}) silenced: {err}", names[seat]);
        live[seat] = false;
        silenced.push(seat as AgentId);
    };

    for (seat, prefs) in scenario.preferences.iter().enumerate() {
        market.outbox[seat].push(Message::GameStart {
            agent_id: seat as AgentId,
            config: config.clone(),
            preferences: prefs.clone(),
            endowment: scenario.endowments[seat],
        });
    }

    let tick = config.flight_tick;
    let mut seats: Vec<usize> = (0..sessions.len()).collect();
    for t in (0..=config.game_length).step_by(tick as usize) {
        let over = t == config.game_length;
        if t > 0 && !over {
            for f in market.flights.iter_mut() {
                f.tick(&mut flight_rng).expect("flights open until game end");
            }
        }
        if t % 60 == 0 {
            if let Some(g) = config.hotel_closing_at(t / 60) {
                market.close_hotel(g, t);
            }
        }
        if over {
            market.close_remaining(t);
        }
        market.publish_quotes(t, t % config.hotel_quote_interval == 0 || over);
        market.broadcast(Message::Tick { time: t, game_over: over });

        for seat in 0..sessions.len() {
            let batch = std::mem::take(&mut market.outbox[seat]);
            if live[seat] {
                if let Err(e) = sessions[seat].send(batch) {
                    silence(seat, &e, &mut live);
                }
            }
        }
        seats.shuffle(&mut turn_rng);
        for &seat in &seats {
            if !live[seat] {
                continue;
            }
            match sessions[seat].receive(t) {
                Ok(msgs) => {
                    for m in msgs {
                        market.apply(seat as AgentId, m, t);
                    }
                }
                Err(e) => silence(seat, &e, &mut live),
            }
        }
        if config.time_scale > 0.0 && !over {
            std::thread::sleep(Duration::from_secs_f64(config.time_scale * tick as f64));
        }
    }

    let agents = score_game(&scenario, &names, &market.holdings, &market.reported, &market.log);
    let result = GameResult { seed: config.seed, agents, closings: market.closings, silenced };
    for (seat, session) in sessions.iter_mut().enumerate() {
        if live[seat] {
            // The game is already decided; a vanished agent is only worth a log line.
            if let Err(e) = session.send(vec![Message::GameEnd { scores: result.agents.clone() }]) {
                ::log::warn!("could not send game_end to agent {seat}: {e}");
            }
        }
    }
    Ok(GameRecord { scenario, transactions: market.log, result })
}
