//! Named random substreams derived from one game seed.
//!
//! Every consumer of randomness gets its own ChaCha stream so that adding
//! draws in one place never shifts the values seen elsewhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Scenario,
    Flights,
    HotelSchedule,
    TurnOrder,
    /// Private stream for the agent in the given seat.
    Agent(u8),
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::Scenario => 1,
            Stream::Flights => 2,
            Stream::HotelSchedule => 3,
            Stream::TurnOrder => 4,
            Stream::Agent(seat) => 0x100 + seat as u64,
        }
    }
}

pub fn substream(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.id());
    rng
}
