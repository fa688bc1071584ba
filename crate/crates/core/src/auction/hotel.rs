use super::{AgentId, AuctionError, GameTime, Party, Price, Quote, Transaction};
use crate::market::GoodId;

/// Rooms sold per hotel auction.
pub const HOTEL_CAPACITY: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnitBid {
    pub agent: AgentId,
    pub price: Price,
    pub time: GameTime,
    /// Submission order within the auction; breaks price ties.
    pub seq: u64,
}

/// Ascending multi-unit hotel auction.
///
/// Bids are never withdrawn. A new bid must beat the current ask by at
/// least one, and at close the top `capacity` unit bids each win a room at
/// the uniform clearing price (the `capacity`-th highest unit price, or 0
/// when fewer units were bid).
#[derive(Clone, Debug)]
pub struct HotelAuction {
    auction: GoodId,
    unit_bids: Vec<UnitBid>,
    capacity: usize,
    closed: bool,
    next_seq: u64,
}

impl HotelAuction {
    pub fn new(auction: GoodId) -> Self {
        Self::with_capacity(auction, HOTEL_CAPACITY)
    }

    pub fn with_capacity(auction: GoodId, capacity: usize) -> Self {
        assert!(auction.is_hotel(), "{auction} is not a hotel night");
        assert!(capacity > 0);
        HotelAuction { auction, unit_bids: Vec::new(), capacity, closed: false, next_seq: 0 }
    }

    pub fn auction(&self) -> GoodId {
        self.auction
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn unit_bids(&self) -> &[UnitBid] {
        &self.unit_bids
    }

    /// Unit bids in winning order: price descending, then earliest first.
    fn ranked(&self) -> Vec<UnitBid> {
        let mut v = self.unit_bids.clone();
        v.sort_by(|a, b| b.price.cmp(&a.price).then(a.seq.cmp(&b.seq)));
        v
    }

    pub fn ask(&self) -> Price {
        if self.unit_bids.len() < self.capacity {
            0
        } else {
            self.ranked()[self.capacity - 1].price
        }
    }

    pub fn quote(&self, time: GameTime) -> Quote {
        Quote { auction: self.auction, ask: Some(self.ask()), bid: None, time, closed: self.closed }
    }

    /// Units `agent` would win if the auction closed now.
    pub fn hypothetical_quantity_won(&self, agent: AgentId) -> u32 {
        self.ranked().iter().take(self.capacity).filter(|b| b.agent == agent).count() as u32
    }

    /// Adds every `(qty, price)` point as unit bids, or nothing if any
    /// point fails to beat the current ask.
    pub fn submit(&mut self, agent: AgentId, points: &[(u32, Price)], time: GameTime) -> Result<(), AuctionError> {
        if self.closed {
            return Err(AuctionError::Closed(self.auction));
        }
        let ask = self.ask();
        for &(qty, price) in points {
            if qty == 0 {
                return Err(AuctionError::BadQuantity);
            }
            if price < ask + 1 {
                return Err(AuctionError::BidTooLow { price, ask });
            }
        }
        for &(qty, price) in points {
            for _ in 0..qty {
                self.unit_bids.push(UnitBid { agent, price, time, seq: self.next_seq });
                self.next_seq += 1;
            }
        }
        Ok(())
    }

    /// Clears the auction: one transaction per winning unit.
    pub fn close(&mut self, time: GameTime) -> Result<Vec<Transaction>, AuctionError> {
        if self.closed {
            return Err(AuctionError::AlreadyClosed(self.auction));
        }
        let price = self.ask();
        self.closed = true;
        Ok(self
            .ranked()
            .into_iter()
            .take(self.capacity)
            .map(|b| Transaction {
                auction: self.auction,
                buyer: Party::Agent(b.agent),
                seller: Party::Market,
                qty: 1,
                price,
                time,
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::market::HotelKind;

    const H: GoodId = GoodId::HotelNight(HotelKind::Better, 2);

    fn filled(prices: &[Price]) -> HotelAuction {
        let mut h = HotelAuction::new(H);
        for (i, &p) in prices.iter().enumerate() {
            h.unit_bids.push(UnitBid { agent: (i % 8) as AgentId, price: p, time: 0, seq: i as u64 });
        }
        h.next_seq = prices.len() as u64;
        h
    }

    #[test]
    fn quote_examples() {
        assert_eq!(HotelAuction::new(H).ask(), 0);
        assert_eq!(filled(&[10, 20, 30, 40, 50]).ask(), 0);
        // 20 bids: 200, 190, ..., 10. Sixteenth highest is 50.
        let prices: Vec<Price> = (1..=20).rev().map(|k| k * 10).collect();
        assert_eq!(filled(&prices).ask(), 50);
    }

    #[test]
    fn beat_the_quote() {
        let mut h = filled(&[100; 16]);
        assert_eq!(h.ask(), 100);
        assert_eq!(h.submit(1, &[(1, 100)], 60), Err(AuctionError::BidTooLow { price: 100, ask: 100 }));
        h.submit(1, &[(1, 101)], 60).unwrap();
        assert_eq!(h.ask(), 100);
        assert_eq!(h.submit(1, &[(0, 500)], 60), Err(AuctionError::BadQuantity));
        // A rejected multi-point bid adds nothing.
        let n = h.unit_bids().len();
        assert!(h.submit(2, &[(1, 300), (1, 50)], 60).is_err());
        assert_eq!(h.unit_bids().len(), n);
    }

    #[test]
    fn submit_recomputes_ask() {
        let mut prices = vec![95; 14];
        prices.extend([90, 80, 70]);
        let mut h = filled(&prices);
        assert_eq!(h.ask(), 80);
        h.submit(5, &[(3, 120)], 120).unwrap();
        assert_eq!(h.ask(), 95);
    }

    #[test]
    fn under_capacity_clears_at_zero() {
        let mut h = HotelAuction::new(H);
        h.submit(4, &[(1, 50)], 10).unwrap();
        let txs = h.close(60).unwrap();
        assert_eq!(txs.len(), 1);
        assert_eq!((txs[0].buyer, txs[0].price), (Party::Agent(4), 0));
        assert!(h.submit(4, &[(1, 500)], 61).is_err());
        assert_eq!(h.close(61), Err(AuctionError::AlreadyClosed(H)));
    }

    #[test]
    fn ties_at_cutoff_go_to_earlier_bid() {
        let mut h = HotelAuction::new(H);
        h.submit(0, &[(15, 200)], 0).unwrap();
        h.submit(1, &[(1, 90)], 10).unwrap();
        h.submit(2, &[(1, 95)], 20).unwrap();
        // Agent 3 must now beat 95 but agent 2 already sits at the cutoff.
        assert!(h.submit(3, &[(1, 95)], 30).is_err());
        let txs = h.close(60).unwrap();
        assert_eq!(txs.len(), 16);
        assert!(txs.iter().all(|t| t.price == 95));
        assert!(txs.iter().any(|t| t.buyer == Party::Agent(2)));
        assert!(!txs.iter().any(|t| t.buyer == Party::Agent(1)));

        // Equal prices at the boundary: earlier submission wins.
        let mut h = HotelAuction::new(H);
        h.unit_bids = (0..17)
            .map(|i| UnitBid { agent: if i == 16 { 7 } else { 1 }, price: if i < 15 { 300 } else { 95 }, time: i as u32, seq: i })
            .collect();
        assert_eq!(h.hypothetical_quantity_won(7), 0);
        let txs = h.close(60).unwrap();
        assert!(txs.iter().all(|t| t.buyer == Party::Agent(1) && t.price == 95));
    }
}
