//! Simulator for the classic travel-market trading game: goods and client
//! utility, the three auction mechanisms, client allocation, the TOTA
//! trading agent with baseline opponents, and a deterministic game server.

pub mod agent;
pub mod allocator;
pub mod auction;
pub mod market;
pub mod rng;
pub mod server;
pub mod tournament;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scoring.md")]
    mod scoring {}
    #[doc = include_str!("../../../book/src/auctions.md")]
    mod auctions {}
    #[doc = include_str!("../../../book/src/allocation.md")]
    mod allocation {}
    #[doc = include_str!("../../../book/src/tota.md")]
    mod tota {}
    #[doc = include_str!("../../../book/src/running.md")]
    mod running {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
