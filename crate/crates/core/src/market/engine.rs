//! The three-phase price adjustment loop shared by both arithmetic
//! backends.
//!
//! The loop keeps a price vector under which every agent only holds
//! chores maximizing their payment-per-unit-of-disutility (bang per
//! buck). Starting from the utilitarian assignment it repeatedly either
//! transfers a chore one step along an alternating reachability path
//! toward the best-off agent, or uniformly lowers the prices of the
//! chores reachable from that agent until a new bang-per-buck tie opens
//! up. It terminates when no agent is an approximate equity violator
//! against the best-off agent.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::instance::Rational;
use crate::market::power::PowerCtx;
use crate::market::{DeltaRecord, MarketError, TieBreak, TraceAction, TraceStep};

/// Snapshot of one agent's utility, comparable across steps within a
/// single backend.
pub(crate) enum UtilKey {
    Exps(Vec<i64>),
    Int(i64),
}

/// Arithmetic backend for the price adjustment loop.
pub(crate) trait Market {
    fn num_agents(&self) -> usize;
    fn num_chores(&self) -> usize;
    /// Agent with the highest value for the chore, under the tie rule.
    fn phase1_owner(&self, chore: usize, tiebreak: TieBreak) -> usize;
    /// Prices each chore at its owner's disutility for it.
    fn set_initial_prices(&mut self, owners: &[usize]);
    /// Chores attaining the agent's best bang per buck, ascending.
    fn mbb_chores(&self, agent: usize) -> Vec<usize>;
    /// Orders two agents by bundle utility.
    fn cmp_utilities(&self, bundles: &[Vec<usize>], a: usize, b: usize) -> Ordering;
    fn utility_key(&self, bundles: &[Vec<usize>], agent: usize) -> UtilKey;
    fn cmp_keys(&self, a: &UtilKey, b: &UtilKey) -> Ordering;
    /// Whether dropping the agent's best removable chore still leaves it
    /// strictly worse than the reference agent, beyond the eps margin.
    fn is_eps_violator(&self, bundles: &[Vec<usize>], agent: usize, reference: usize) -> bool;
    /// Same check with a prescribed chore to remove.
    fn is_eps_path_violator(
        &self,
        bundles: &[Vec<usize>],
        agent: usize,
        chore: usize,
        reference: usize,
    ) -> bool;
    /// Divides the prices of chores held by reachable agents by the
    /// smallest factor that creates a new bang-per-buck tie into the
    /// non-reachable chores.
    fn price_drop(&mut self, reachable: &[bool], owners: &[usize]) -> Result<DeltaRecord, MarketError>;
    /// Whether every assigned chore attains its owner's best bang per buck.
    fn mbb_consistent(&self, owners: &[usize]) -> bool;
    fn utility_string(&self, bundles: &[Vec<usize>], agent: usize) -> String;
    fn price_string(&self, chore: usize) -> String;
}

pub(crate) struct EngineOutcome {
    pub owners: Vec<usize>,
    pub steps: u64,
    pub trace: Vec<TraceStep>,
    pub deltas: Vec<DeltaRecord>,
    pub consistency_checks: u64,
}

pub(crate) fn run<M: Market>(
    model: &mut M,
    tiebreak: TieBreak,
    max_steps: u64,
) -> Result<EngineOutcome, MarketError> {
    let n = model.num_agents();
    let m = model.num_chores();
    let mut owners: Vec<usize> = (0..m).map(|j| model.phase1_owner(j, tiebreak)).collect();
    model.set_initial_prices(&owners);
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (j, &o) in owners.iter().enumerate() {
        bundles[o].push(j);
    }
    let mut steps: u64 = 1;
    let mut deltas = Vec::new();
    let mut consistency_checks = 0u64;
    let mut trace = Vec::new();

    let reference = best_agent(model, &bundles);
    trace.push(make_step(model, &bundles, m, steps, 1, reference, TraceAction::Init));
    require_consistent(model, &owners, &mut consistency_checks, "initial assignment")?;

    let mut last_key: Option<UtilKey> = None;
    loop {
        let reference = best_agent(model, &bundles);
        let key = model.utility_key(&bundles, reference);
        if let Some(prev) = &last_key {
            if model.cmp_keys(&key, prev) == Ordering::Greater {
                return Err(MarketError::Internal(
                    "reference utility increased across a step".into(),
                ));
            }
        }
        last_key = Some(key);

        let has_violator = (0..n).any(|k| {
            k != reference
                && !bundles[k].is_empty()
                && model.is_eps_violator(&bundles, k, reference)
        });
        if !has_violator {
            break;
        }
        if steps >= max_steps {
            return Err(MarketError::StepCap { limit: max_steps });
        }

        let (levels, parents, reachable) = reachability(model, &owners, reference, n);
        let mut swapped = false;
        'scan: for level in levels.iter().skip(1) {
            for &h in level {
                let (parent_agent, parent_chore) = parents[h].expect("reached agent has a parent");
                if model.is_eps_path_violator(&bundles, h, parent_chore, reference) {
                    let pos = bundles[h].iter().position(|&c| c == parent_chore).unwrap();
                    bundles[h].remove(pos);
                    bundles[parent_agent].push(parent_chore);
                    bundles[parent_agent].sort_unstable();
                    owners[parent_chore] = parent_agent;
                    steps += 1;
                    trace.push(make_step(
                        model,
                        &bundles,
                        m,
                        steps,
                        2,
                        reference,
                        TraceAction::Move { chore: parent_chore, from: h, to: parent_agent },
                    ));
                    require_consistent(model, &owners, &mut consistency_checks, "chore transfer")?;
                    swapped = true;
                    break 'scan;
                }
            }
        }
        if swapped {
            continue;
        }

        // No reachable agent can give up a chore, so make more of the
        // market reachable by lowering prices. An unreachable violator
        // guarantees there is something to reach.
        if !owners.iter().any(|&o| !reachable[o]) {
            return Err(MarketError::Internal("no candidate chore for a price drop".into()));
        }
        let delta = model.price_drop(&reachable, &owners)?;
        steps += 1;
        trace.push(make_step(
            model,
            &bundles,
            m,
            steps,
            3,
            reference,
            TraceAction::Drop { delta: delta.to_string() },
        ));
        deltas.push(delta);
        require_consistent(model, &owners, &mut consistency_checks, "price drop")?;
    }

    Ok(EngineOutcome { owners, steps, trace, deltas, consistency_checks })
}

fn require_consistent<M: Market>(
    model: &M,
    owners: &[usize],
    checks: &mut u64,
    context: &str,
) -> Result<(), MarketError> {
    *checks += 1;
    if model.mbb_consistent(owners) {
        Ok(())
    } else {
        Err(MarketError::Internal(format!(
            "allocation lost bang-per-buck consistency after {context}"
        )))
    }
}

fn best_agent<M: Market>(model: &M, bundles: &[Vec<usize>]) -> usize {
    let mut best = 0;
    for i in 1..bundles.len() {
        if model.cmp_utilities(bundles, i, best) == Ordering::Greater {
            best = i;
        }
    }
    best
}

fn make_step<M: Market>(
    model: &M,
    bundles: &[Vec<usize>],
    m: usize,
    step: u64,
    phase: u8,
    reference: usize,
    action: TraceAction,
) -> TraceStep {
    TraceStep {
        step,
        phase,
        reference,
        action,
        utilities: (0..bundles.len()).map(|i| model.utility_string(bundles, i)).collect(),
        prices: (0..m).map(|j| model.price_string(j)).collect(),
    }
}

/// Breadth-first layering of agents along alternating bang-per-buck and
/// ownership edges from the reference agent. Returns the layers, each
/// agent's discovery edge, and the reachability mask.
fn reachability<M: Market>(
    model: &M,
    owners: &[usize],
    reference: usize,
    n: usize,
) -> (Vec<Vec<usize>>, Vec<Option<(usize, usize)>>, Vec<bool>) {
    let mut level_of = vec![usize::MAX; n];
    level_of[reference] = 0;
    let mut parents: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut levels = vec![vec![reference]];
    loop {
        let mut next = Vec::new();
        for &agent in levels.last().unwrap() {
            for chore in model.mbb_chores(agent) {
                let owner = owners[chore];
                if level_of[owner] == usize::MAX {
                    level_of[owner] = levels.len();
                    parents[owner] = Some((agent, chore));
                    next.push(owner);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort_unstable();
        levels.push(next);
    }
    let reachable = level_of.iter().map(|&l| l != usize::MAX).collect();
    (levels, parents, reachable)
}

/// Backend over exponent-space values w = -(1+eps)^t with integer prices
/// of the same form.
pub(crate) struct PowerModel {
    ctx: PowerCtx,
    values: Vec<Vec<i64>>,
    prices: Vec<i64>,
}

impl PowerModel {
    pub fn new(ctx: PowerCtx, value_exponents: Vec<Vec<i64>>) -> Self {
        let m = value_exponents.first().map_or(0, Vec::len);
        PowerModel { ctx, values: value_exponents, prices: vec![0; m] }
    }

    pub fn price_exponents(&self) -> &[i64] {
        &self.prices
    }

    fn bundle_exps(&self, bundles: &[Vec<usize>], agent: usize) -> Vec<i64> {
        bundles[agent].iter().map(|&j| self.values[agent][j]).collect()
    }

    /// Exponent of the agent's best (least negative) value-to-price
    /// ratio; smaller is better because the ratio is -(1+eps)^gap.
    fn best_gap(&self, agent: usize) -> i64 {
        (0..self.prices.len())
            .map(|j| self.values[agent][j] - self.prices[j])
            .min()
            .expect("market has at least one chore")
    }

    fn violates(&self, mut remaining: Vec<i64>, reference_exps: &[i64]) -> bool {
        // Worse off than the reference even after the removal and even
        // after inflating the reference's disutility by one power.
        let inflated: Vec<i64> = reference_exps.iter().map(|&e| e + 1).collect();
        remaining.sort_unstable();
        self.ctx.cmp_sums(&remaining, &inflated) == Ordering::Greater
    }
}

impl Market for PowerModel {
    fn num_agents(&self) -> usize {
        self.values.len()
    }

    fn num_chores(&self) -> usize {
        self.prices.len()
    }

    fn phase1_owner(&self, chore: usize, tiebreak: TieBreak) -> usize {
        let mut best = 0;
        for i in 1..self.values.len() {
            let better = match tiebreak {
                TieBreak::LowestAgent => self.values[i][chore] < self.values[best][chore],
                TieBreak::HighestAgent => self.values[i][chore] <= self.values[best][chore],
            };
            if better {
                best = i;
            }
        }
        best
    }

    fn set_initial_prices(&mut self, owners: &[usize]) {
        for (j, &o) in owners.iter().enumerate() {
            self.prices[j] = self.values[o][j];
        }
    }

    fn mbb_chores(&self, agent: usize) -> Vec<usize> {
        let best = self.best_gap(agent);
        (0..self.prices.len())
            .filter(|&j| self.values[agent][j] - self.prices[j] == best)
            .collect()
    }

    fn cmp_utilities(&self, bundles: &[Vec<usize>], a: usize, b: usize) -> Ordering {
        let ea = self.bundle_exps(bundles, a);
        let eb = self.bundle_exps(bundles, b);
        // Larger power sum means larger disutility, so lower utility.
        self.ctx.cmp_sums(&ea, &eb).reverse()
    }

    fn utility_key(&self, bundles: &[Vec<usize>], agent: usize) -> UtilKey {
        let mut exps = self.bundle_exps(bundles, agent);
        exps.sort_unstable();
        UtilKey::Exps(exps)
    }

    fn cmp_keys(&self, a: &UtilKey, b: &UtilKey) -> Ordering {
        match (a, b) {
            (UtilKey::Exps(x), UtilKey::Exps(y)) => self.ctx.cmp_sums(x, y).reverse(),
            _ => unreachable!("mismatched utility keys"),
        }
    }

    fn is_eps_violator(&self, bundles: &[Vec<usize>], agent: usize, reference: usize) -> bool {
        let exps = self.bundle_exps(bundles, agent);
        if exps.is_empty() {
            return false;
        }
        // Removing the largest exponent keeps the most utility.
        let max_pos = exps
            .iter()
            .enumerate()
            .max_by_key(|&(_, &e)| e)
            .map(|(pos, _)| pos)
            .unwrap();
        let mut remaining = exps;
        remaining.swap_remove(max_pos);
        self.violates(remaining, &self.bundle_exps(bundles, reference))
    }

    fn is_eps_path_violator(
        &self,
        bundles: &[Vec<usize>],
        agent: usize,
        chore: usize,
        reference: usize,
    ) -> bool {
        let mut remaining = self.bundle_exps(bundles, agent);
        let target = self.values[agent][chore];
        let pos = remaining.iter().position(|&e| e == target).unwrap();
        remaining.swap_remove(pos);
        self.violates(remaining, &self.bundle_exps(bundles, reference))
    }

    fn price_drop(&mut self, reachable: &[bool], owners: &[usize]) -> Result<DeltaRecord, MarketError> {
        let m = self.prices.len();
        let mut best: Option<i64> = None;
        for (h, _) in reachable.iter().enumerate().filter(|&(_, &r)| r) {
            let gap_h = self.best_gap(h);
            for j in (0..m).filter(|&j| !reachable[owners[j]]) {
                let slack = (self.values[h][j] - self.prices[j]) - gap_h;
                best = Some(best.map_or(slack, |b| b.min(slack)));
            }
        }
        let delta = best.ok_or_else(|| MarketError::Internal("empty price drop search".into()))?;
        if delta < 1 {
            return Err(MarketError::Internal("price drop factor below one power".into()));
        }
        for j in (0..m).filter(|&j| reachable[owners[j]]) {
            self.prices[j] -= delta;
        }
        Ok(DeltaRecord::Exponent(delta))
    }

    fn mbb_consistent(&self, owners: &[usize]) -> bool {
        (0..self.values.len()).all(|i| {
            let best = self.best_gap(i);
            owners
                .iter()
                .enumerate()
                .filter(|&(_, &o)| o == i)
                .all(|(j, _)| self.values[i][j] - self.prices[j] == best)
        })
    }

    fn utility_string(&self, bundles: &[Vec<usize>], agent: usize) -> String {
        let total: f64 = bundles[agent].iter().map(|&j| self.ctx.pow_f64(self.values[agent][j])).sum();
        format!("{:.4}", -total)
    }

    fn price_string(&self, chore: usize) -> String {
        format!("x^{}", self.prices[chore])
    }
}

/// Backend over the unrounded integer values with exact rational prices.
pub(crate) struct DirectModel {
    values: Vec<Vec<i64>>,
    prices: Vec<Rational>,
    one_plus_eps: Rational,
}

impl DirectModel {
    pub fn new(values: Vec<Vec<i64>>, eps: &Rational) -> Self {
        let m = values.first().map_or(0, Vec::len);
        DirectModel {
            values,
            prices: vec![Rational::one(); m],
            one_plus_eps: eps + Rational::one(),
        }
    }

    pub fn prices(&self) -> &[Rational] {
        &self.prices
    }

    fn ratio(&self, agent: usize, chore: usize) -> Rational {
        Rational::from_integer(BigInt::from(self.values[agent][chore])) / &self.prices[chore]
    }

    fn best_ratio(&self, agent: usize) -> Rational {
        (0..self.prices.len())
            .map(|j| self.ratio(agent, j))
            .max()
            .expect("market has at least one chore")
    }

    fn utility(&self, bundles: &[Vec<usize>], agent: usize) -> i64 {
        bundles[agent].iter().map(|&j| self.values[agent][j]).sum()
    }

    fn violates(&self, remaining: i64, reference_utility: i64) -> bool {
        Rational::from_integer(BigInt::from(remaining))
            < &self.one_plus_eps * Rational::from_integer(BigInt::from(reference_utility))
    }
}

impl Market for DirectModel {
    fn num_agents(&self) -> usize {
        self.values.len()
    }

    fn num_chores(&self) -> usize {
        self.prices.len()
    }

    fn phase1_owner(&self, chore: usize, tiebreak: TieBreak) -> usize {
        let mut best = 0;
        for i in 1..self.values.len() {
            let better = match tiebreak {
                TieBreak::LowestAgent => self.values[i][chore] > self.values[best][chore],
                TieBreak::HighestAgent => self.values[i][chore] >= self.values[best][chore],
            };
            if better {
                best = i;
            }
        }
        best
    }

    fn set_initial_prices(&mut self, owners: &[usize]) {
        for (j, &o) in owners.iter().enumerate() {
            self.prices[j] = Rational::from_integer(BigInt::from(self.values[o][j].unsigned_abs()));
        }
    }

    fn mbb_chores(&self, agent: usize) -> Vec<usize> {
        let best = self.best_ratio(agent);
        (0..self.prices.len()).filter(|&j| self.ratio(agent, j) == best).collect()
    }

    fn cmp_utilities(&self, bundles: &[Vec<usize>], a: usize, b: usize) -> Ordering {
        self.utility(bundles, a).cmp(&self.utility(bundles, b))
    }

    fn utility_key(&self, bundles: &[Vec<usize>], agent: usize) -> UtilKey {
        UtilKey::Int(self.utility(bundles, agent))
    }

    fn cmp_keys(&self, a: &UtilKey, b: &UtilKey) -> Ordering {
        match (a, b) {
            (UtilKey::Int(x), UtilKey::Int(y)) => x.cmp(y),
            _ => unreachable!("mismatched utility keys"),
        }
    }

    fn is_eps_violator(&self, bundles: &[Vec<usize>], agent: usize, reference: usize) -> bool {
        if bundles[agent].is_empty() {
            return false;
        }
        let worst = bundles[agent].iter().map(|&j| self.values[agent][j]).min().unwrap();
        let remaining = self.utility(bundles, agent) - worst;
        self.violates(remaining, self.utility(bundles, reference))
    }

    fn is_eps_path_violator(
        &self,
        bundles: &[Vec<usize>],
        agent: usize,
        chore: usize,
        reference: usize,
    ) -> bool {
        let remaining = self.utility(bundles, agent) - self.values[agent][chore];
        self.violates(remaining, self.utility(bundles, reference))
    }

    fn price_drop(&mut self, reachable: &[bool], owners: &[usize]) -> Result<DeltaRecord, MarketError> {
        let m = self.prices.len();
        let mut best: Option<Rational> = None;
        for (h, _) in reachable.iter().enumerate().filter(|&(_, &r)| r) {
            let beta = self.best_ratio(h);
            for j in (0..m).filter(|&j| !reachable[owners[j]]) {
                let factor = self.ratio(h, j) / &beta;
                best = Some(match best.take() {
                    Some(b) if b <= factor => b,
                    _ => factor,
                });
            }
        }
        let delta = best.ok_or_else(|| MarketError::Internal("empty price drop search".into()))?;
        if delta <= Rational::one() {
            return Err(MarketError::Internal("price drop factor not above one".into()));
        }
        for j in (0..m).filter(|&j| reachable[owners[j]]) {
            self.prices[j] /= &delta;
            if !self.prices[j].is_positive() {
                return Err(MarketError::Internal("price dropped to a non-positive value".into()));
            }
        }
        Ok(DeltaRecord::Ratio(delta))
    }

    fn mbb_consistent(&self, owners: &[usize]) -> bool {
        (0..self.values.len()).all(|i| {
            let best = self.best_ratio(i);
            owners
                .iter()
                .enumerate()
                .filter(|&(_, &o)| o == i)
                .all(|(j, _)| self.ratio(i, j) == best)
        })
    }

    fn utility_string(&self, bundles: &[Vec<usize>], agent: usize) -> String {
        self.utility(bundles, agent).to_string()
    }

    fn price_string(&self, chore: usize) -> String {
        self.prices[chore].to_string()
    }
}
