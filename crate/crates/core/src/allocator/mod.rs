//! Assigning goods to clients.
//!
//! The objective everywhere is total client utility minus the cost of
//! buying whatever the owned goods don't cover, at current prices:
//!
//! ```text
//! objective = Σ client_utility − Σ_g price(g) · max(0, demand(g) − owned(g))
//! ```
//!
//! A good whose price is `None` cannot be bought, so any allocation that
//! needs more of it than is owned is infeasible.

mod enumerate;
mod exact;
mod greedy;

pub use enumerate::{best_events, enumerate_packages, event_assignments};
pub use exact::{optimize_exact, optimize_exact_with_limit, DEFAULT_EXACT_LIMIT};
pub use greedy::{optimize_greedy, optimize_greedy_traced, GreedyTrace};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::auction::Price;
use crate::market::{client_utility, required_goods, ClientPreference, GoodId, Holdings, Points, TravelPackage, GOOD_COUNT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AllocError {
    #[error("{clients} clients exceed the exhaustive search limit of {limit}")]
    InstanceTooLarge { clients: usize, limit: usize },
}

/// Acquisition price per good; `None` marks a good that can no longer be bought.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PriceVector {
    prices: [Option<Price>; GOOD_COUNT],
}

impl PriceVector {
    /// Every good purchasable for free.
    pub fn zero() -> Self {
        PriceVector { prices: [Some(0); GOOD_COUNT] }
    }

    /// Nothing purchasable: only owned goods can be allocated.
    pub fn unobtainable() -> Self {
        PriceVector { prices: [None; GOOD_COUNT] }
    }

    pub fn get(&self, good: GoodId) -> Option<Price> {
        self.prices[good.index()]
    }

    pub fn set(&mut self, good: GoodId, price: Option<Price>) {
        debug_assert!(price.is_none_or(|p| p >= 0));
        self.prices[good.index()] = price;
    }

    pub fn with(mut self, good: GoodId, price: Option<Price>) -> Self {
        self.set(good, price);
        self
    }
}

impl std::fmt::Debug for PriceVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(GoodId::ALL.iter().map(|g| (g.to_string(), self.get(*g)))).finish()
    }
}

impl Serialize for PriceVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_map(GoodId::ALL.iter().filter_map(|g| self.get(*g).map(|p| (*g, p))))
    }
}

/// Deserializes from a map of good to price; goods not listed are unobtainable.
impl<'de> Deserialize<'de> for PriceVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map = std::collections::BTreeMap::<GoodId, Option<Price>>::deserialize(d)?;
        let mut pv = PriceVector::unobtainable();
        for (g, p) in map {
            if let Some(p) = p {
                if p < 0 {
                    return Err(serde::de::Error::custom(format!("negative price for {g}")));
                }
            }
            pv.set(g, p);
        }
        Ok(pv)
    }
}

/// One optional package per client, with the objective it achieves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Allocation {
    pub packages: Vec<Option<TravelPackage>>,
    pub objective: Points,
}

impl Allocation {
    pub fn empty(clients: usize) -> Self {
        Allocation { packages: vec![None; clients], objective: 0 }
    }

    /// Total goods required by all packages.
    pub fn demand(&self) -> Holdings {
        demand(&self.packages)
    }

    pub fn served(&self) -> usize {
        self.packages.iter().flatten().count()
    }
}

pub fn demand(packages: &[Option<TravelPackage>]) -> Holdings {
    let mut h = Holdings::new();
    for p in packages.iter().flatten() {
        h.merge(&required_goods(p));
    }
    h
}

/// Cost of the part of `pkg` that `available` does not cover.
pub fn marginal_cost(pkg: &TravelPackage, available: &Holdings, prices: &PriceVector) -> Option<Price> {
    shortfall_cost(&required_goods(pkg), available, prices)
}

/// Cost of buying `needed − available` (clamped at zero per good).
pub fn shortfall_cost(needed: &Holdings, available: &Holdings, prices: &PriceVector) -> Option<Price> {
    let mut total = 0;
    for (g, n) in needed.iter() {
        let missing = n.saturating_sub(available.get(g));
        if missing > 0 {
            total += prices.get(g)? * missing as Price;
        }
    }
    Some(total)
}

/// Joint objective of an allocation, `None` when it needs an unobtainable good.
pub fn objective(
    prefs: &[ClientPreference],
    packages: &[Option<TravelPackage>],
    holdings: &Holdings,
    prices: &PriceVector,
) -> Option<Points> {
    let utility: Points = prefs.iter().zip(packages).map(|(p, k)| client_utility(p, k.as_ref())).sum();
    let cost = shortfall_cost(&demand(packages), holdings, prices)?;
    Some(utility - cost)
}

/// Goods the allocation needs beyond what is held.
pub fn shortfall(packages: &[Option<TravelPackage>], holdings: &Holdings) -> Holdings {
    let need = demand(packages);
    let mut out = Holdings::new();
    for (g, n) in need.iter() {
        out.set(g, n.saturating_sub(holdings.get(g)));
    }
    out
}

pub(crate) fn obtainable(good: GoodId, qty: u32, holdings: &Holdings, prices: &PriceVector) -> bool {
    holdings.get(good) >= qty || prices.get(good).is_some()
}
