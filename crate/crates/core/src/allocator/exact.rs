use super::{event_assignments, obtainable, shortfall_cost, AllocError, Allocation, PriceVector};
use crate::market::{client_utility, required_goods, ClientPreference, Holdings, HotelKind, Points, TravelPackage};

/// Largest instance [`optimize_exact`] accepts.
pub const DEFAULT_EXACT_LIMIT: usize = 3;

struct Candidate {
    package: Option<TravelPackage>,
    utility: Points,
    needs: Holdings,
}

/// Every package the client could be given, with all event subsets, plus
/// the option of not serving them.
fn candidates(pref: &ClientPreference, holdings: &Holdings, prices: &PriceVector) -> Vec<Candidate> {
    let mut out = Vec::new();
    for arrival in 1..=4u8 {
        for departure in arrival + 1..=5u8 {
            for hotel in HotelKind::ALL {
                let stay = TravelPackage::stay(arrival, departure, hotel).expect("valid dates");
                for events in event_assignments(stay.nights()) {
                    let pkg = TravelPackage { events, ..stay };
                    let needs = required_goods(&pkg);
                    if needs.iter().all(|(g, n)| obtainable(g, n, holdings, prices)) {
                        out.push(Candidate { package: Some(pkg), utility: client_utility(pref, Some(&pkg)), needs });
                    }
                }
            }
        }
    }
    out.push(Candidate { package: None, utility: 0, needs: Holdings::new() });
    out
}

struct Search<'a> {
    cands: Vec<Vec<Candidate>>,
    prices: &'a PriceVector,
    /// `suffix_bound[i]` bounds what clients `i..` can still add.
    suffix_bound: Vec<Points>,
    best: Points,
    best_choice: Vec<usize>,
    choice: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, client: usize, remaining: &Holdings, value: Points) {
        if client == self.cands.len() {
            if value > self.best {
                self.best = value;
                self.best_choice.clone_from(&self.choice);
            }
            return;
        }
        if value + self.suffix_bound[client] <= self.best {
            return;
        }
        for i in 0..self.cands[client].len() {
            let c = &self.cands[client][i];
            let Some(cost) = shortfall_cost(&c.needs, remaining, self.prices) else { continue };
            let mut next = *remaining;
            for (g, n) in c.needs.iter() {
                let take = n.min(next.get(g));
                next.set(g, next.get(g) - take);
            }
            let gain = c.utility - cost;
            self.choice[client] = i;
            self.run(client + 1, &next, value + gain);
        }
    }
}

/// Provably optimal allocation by exhaustive search; only for small
/// instances (see [`DEFAULT_EXACT_LIMIT`]).
pub fn optimize_exact(prefs: &[ClientPreference], holdings: &Holdings, prices: &PriceVector) -> Result<Allocation, AllocError> {
    optimize_exact_with_limit(prefs, holdings, prices, DEFAULT_EXACT_LIMIT)
}

pub fn optimize_exact_with_limit(
    prefs: &[ClientPreference],
    holdings: &Holdings,
    prices: &PriceVector,
    limit: usize,
) -> Result<Allocation, AllocError> {
    if prefs.len() > limit {
        return Err(AllocError::InstanceTooLarge { clients: prefs.len(), limit });
    }
    let cands: Vec<Vec<Candidate>> = prefs.iter().map(|p| candidates(p, holdings, prices)).collect();

    // Serving a client alone against all holdings is never worse than
    // serving them alongside others.
    let standalone: Vec<Points> = cands
        .iter()
        .map(|cs| {
            cs.iter()
                .filter_map(|c| shortfall_cost(&c.needs, holdings, prices).map(|cost| c.utility - cost))
                .max()
                .unwrap_or(0)
                .max(0)
        })
        .collect();
    let mut suffix_bound = vec![0; prefs.len() + 1];
    for i in (0..prefs.len()).rev() {
        suffix_bound[i] = suffix_bound[i + 1] + standalone[i];
    }

    let none_choice: Vec<usize> = cands.iter().map(|cs| cs.len() - 1).collect();
    let mut search = Search {
        prices,
        suffix_bound,
        best: 0,
        best_choice: none_choice.clone(),
        choice: none_choice,
        cands,
    };
    search.run(0, holdings, 0);

    let packages = search.best_choice.iter().zip(&search.cands).map(|(&i, cs)| cs[i].package).collect();
    Ok(Allocation { packages, objective: search.best })
}
