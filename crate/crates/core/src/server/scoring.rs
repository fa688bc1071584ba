use serde::{Deserialize, Serialize};

use super::Scenario;
use crate::allocator::{optimize_greedy, PriceVector};
use crate::auction::{AgentId, GameTime, Party, Transaction};
use crate::market::{client_utility, is_feasible, required_goods, GoodId, Holdings, Points, TravelPackage};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentScore {
    pub agent_id: AgentId,
    pub name: String,
    pub utility_total: Points,
    pub spend: Points,
    pub revenue: Points,
    pub score: Points,
    /// Scored package per client after server-side validation.
    pub packages: Vec<Option<TravelPackage>>,
    pub client_utilities: Vec<Points>,
    /// False when the server had to allocate on the agent's behalf.
    pub reported_allocation: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Closing {
    pub auction: GoodId,
    pub time: GameTime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameResult {
    pub seed: u64,
    pub agents: Vec<AgentScore>,
    /// Every auction closing in the order it happened.
    pub closings: Vec<Closing>,
    /// Seats that stopped answering and were ignored from then on.
    pub silenced: Vec<AgentId>,
}

impl GameResult {
    pub fn agent(&self, id: AgentId) -> Option<&AgentScore> {
        self.agents.iter().find(|a| a.agent_id == id)
    }
}

/// Keeps reported packages, in client order, while the remaining holdings
/// cover them; anything else scores as unserved.
fn validate_packages(
    prefs: &[crate::market::ClientPreference],
    reported: &[Option<TravelPackage>],
    holdings: &Holdings,
) -> Vec<Option<TravelPackage>> {
    let mut remaining = *holdings;
    prefs
        .iter()
        .enumerate()
        .map(|(i, pref)| {
            let pkg = reported.get(i).copied().flatten()?;
            if !is_feasible(pref, &pkg, &remaining) {
                return None;
            }
            for (g, n) in required_goods(&pkg).iter() {
                remaining.remove(g, n).expect("checked by is_feasible");
            }
            Some(pkg)
        })
        .collect()
}

/// Final scores: client utility under the (validated or fallback)
/// allocation, minus purchases, plus ticket sales.
pub fn score_game(
    scenario: &Scenario,
    names: &[String],
    holdings: &[Holdings],
    reported: &[Option<Vec<Option<TravelPackage>>>],
    ledger: &[Transaction],
) -> Vec<AgentScore> {
    let mut out = Vec::with_capacity(holdings.len());
    for (idx, prefs) in scenario.preferences.iter().enumerate() {
        let id = idx as AgentId;
        let held = &holdings[idx];
        let report = reported.get(idx).cloned().flatten();
        let reported_allocation = report.is_some();
        let packages = match report {
            Some(r) => validate_packages(prefs, &r, held),
            None => optimize_greedy(prefs, held, &PriceVector::unobtainable()).packages,
        };
        let client_utilities: Vec<Points> =
            prefs.iter().zip(&packages).map(|(p, k)| client_utility(p, k.as_ref())).collect();
        let utility_total = client_utilities.iter().sum();
        let spend = ledger.iter().filter(|t| t.buyer == Party::Agent(id)).map(Transaction::value).sum();
        let revenue = ledger.iter().filter(|t| t.seller == Party::Agent(id)).map(Transaction::value).sum();
        out.push(AgentScore {
            agent_id: id,
            name: names.get(idx).cloned().unwrap_or_default(),
            utility_total,
            spend,
            revenue,
            score: utility_total - spend + revenue,
            packages,
            client_utilities,
            reported_allocation,
        });
    }
    out
}
