//! Approximately equitable and Pareto optimal chore allocation through a
//! price adjustment market.
//!
//! The solver works on a rounded copy of the instance in which every
//! value is a negative integral power of x = 1 + eps, so all prices and
//! price drops stay integral powers of x as well. With the default eps
//! the approximation is fine enough that the result is exactly equitable
//! up to one chore, and Pareto optimal, on the original instance.
//!
//! A direct mode runs the same loop on the unrounded integer values with
//! exact rational prices. It is useful for inspecting traces on small
//! instances, where the rounded exponents would obscure what happens.

mod engine;
mod power;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

use crate::instance::{Allocation, Instance, Rational};
use engine::{DirectModel, PowerModel};
use power::PowerCtx;

/// Default bound on market steps (transfers plus price drops).
pub const DEFAULT_MAX_STEPS: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum MarketError {
    #[error("eps must be positive (non-negative in direct mode)")]
    InvalidEps,
    #[error("valuations are too large for the requested eps")]
    ValueRange,
    #[error("market exceeded the step limit of {limit}")]
    StepCap { limit: u64 },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Arithmetic used by the solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Power-of-(1+eps) rounding; the standard mode.
    Rounded,
    /// Unrounded integer values with exact rational prices.
    Direct,
}

/// Rule for breaking ties when the initial assignment has several
/// equally good takers for a chore.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    LowestAgent,
    HighestAgent,
}

#[derive(Debug, Clone)]
pub struct MarketOptions {
    /// Approximation parameter; `None` selects the instance-derived
    /// default that makes the result exactly equitable up to one chore.
    pub eps: Option<Rational>,
    pub mode: Mode,
    pub tiebreak: TieBreak,
    pub max_steps: u64,
}

impl Default for MarketOptions {
    fn default() -> Self {
        MarketOptions {
            eps: None,
            mode: Mode::Rounded,
            tiebreak: TieBreak::LowestAgent,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

/// Factor by which a price drop divides the reachable prices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaRecord {
    /// Rounded mode: the drop is x^k for this integer k >= 1.
    Exponent(i64),
    /// Direct mode: the exact rational factor, always > 1.
    Ratio(Rational),
}

impl fmt::Display for DeltaRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaRecord::Exponent(k) => write!(f, "x^{k}"),
            DeltaRecord::Ratio(r) => write!(f, "{r}"),
        }
    }
}

/// Price of a single chore at termination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PriceRepr {
    Exact(Rational),
    /// x^k in rounded mode.
    Power(i64),
}

impl fmt::Display for PriceRepr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PriceRepr::Exact(r) => write!(f, "{r}"),
            PriceRepr::Power(k) => write!(f, "x^{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceAction {
    Init,
    Move { chore: usize, from: usize, to: usize },
    Drop { delta: String },
}

impl fmt::Display for TraceAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceAction::Init => write!(f, "init"),
            TraceAction::Move { chore, from, to } => write!(f, "move c{chore}:{from}->{to}"),
            TraceAction::Drop { delta } => write!(f, "drop {delta}"),
        }
    }
}

/// One recorded market step. Chore and agent indices refer to the market
/// subinstance, i.e. the chores nobody values at zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub step: u64,
    pub phase: u8,
    pub reference: usize,
    pub action: TraceAction,
    pub utilities: Vec<String>,
    pub prices: Vec<String>,
}

impl TraceStep {
    /// Tab-separated rendering: step, phase, reference agent, action,
    /// utility profile, prices.
    pub fn line(&self) -> String {
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}",
            self.step,
            self.phase,
            self.reference,
            self.action,
            self.utilities.join(","),
            self.prices.join(",")
        )
    }
}

#[derive(Debug)]
pub struct MarketResult {
    pub allocation: Allocation,
    pub eps: Rational,
    pub mode: Mode,
    /// Transfers plus price drops, counting the initial assignment as one.
    pub steps: u64,
    pub trace: Vec<TraceStep>,
    /// Original indices of the chores the market actually traded,
    /// in subinstance order.
    pub market_chores: Vec<usize>,
    /// Chores someone values at zero, assigned up front to the
    /// lowest-index such agent.
    pub preassigned: Vec<(usize, usize)>,
    /// Final prices, parallel to `market_chores`.
    pub prices: Vec<PriceRepr>,
    pub deltas: Vec<DeltaRecord>,
    /// Number of bang-per-buck consistency audits that passed.
    pub consistency_checks: u64,
}

/// The default approximation parameter 1 / (6 m |v_min|^3). At this
/// resolution an approximately equitable outcome on the rounded values is
/// exactly equitable up to one chore on the originals.
pub fn default_eps(instance: &Instance) -> Rational {
    let magnitude = instance.min_value().unsigned_abs().max(1);
    let cube = Pow::pow(&BigInt::from(magnitude), 3u32);
    let denom = BigInt::from(6u32) * BigInt::from(instance.num_chores().max(1)) * cube;
    Rational::new(BigInt::one(), denom)
}

/// The instance with every value pushed down to a negative integral
/// power of x = 1 + eps. Zero values stay zero.
pub struct RoundedInstance {
    eps: Rational,
    exponents: Vec<Vec<Option<i64>>>,
}

impl RoundedInstance {
    pub fn eps(&self) -> &Rational {
        &self.eps
    }

    /// Exponent t with rounded value -(1+eps)^t, or `None` for a zero
    /// value.
    pub fn exponent(&self, agent: usize, chore: usize) -> Option<i64> {
        self.exponents[agent][chore]
    }

    /// The rounded value as an exact rational, when it is small enough to
    /// materialize. Zero values give zero.
    pub fn rounded_value(&self, agent: usize, chore: usize) -> Option<Rational> {
        match self.exponents[agent][chore] {
            None => Some(Rational::zero()),
            Some(t) if t <= 4096 => {
                let x = &self.eps + Rational::one();
                let t = u32::try_from(t).expect("small exponent");
                let num = Pow::pow(x.numer(), t);
                let den = Pow::pow(x.denom(), t);
                Some(-Rational::new(num, den))
            }
            Some(_) => None,
        }
    }
}

/// Rounds every value of the instance down to a power of 1 + eps, so
/// that v >= w >= (1+eps) v holds entrywise.
pub fn round_instance(instance: &Instance, eps: &Rational) -> Result<RoundedInstance, MarketError> {
    let ctx = PowerCtx::new(eps)?;
    let mut exponents = Vec::with_capacity(instance.num_agents());
    for i in 0..instance.num_agents() {
        let mut row = Vec::with_capacity(instance.num_chores());
        for j in 0..instance.num_chores() {
            let v = instance.value(i, j);
            row.push(if v == 0 { None } else { Some(ctx.ceil_log(v.unsigned_abs())?) });
        }
        exponents.push(row);
    }
    Ok(RoundedInstance { eps: eps.clone(), exponents })
}

/// Exact check that rounding keeps the value within its guaranteed band:
/// v >= -(1+eps)^t >= (1+eps) v.
pub fn rounding_within_band(value: i64, eps: &Rational) -> Result<bool, MarketError> {
    if value == 0 {
        return Ok(true);
    }
    let ctx = PowerCtx::new(eps)?;
    let mag = value.unsigned_abs();
    let t = ctx.ceil_log(mag)?;
    // v >= w means the rounded magnitude covers |v|.
    let covers = ctx.cmp_pow_int(t, mag) != std::cmp::Ordering::Less;
    // w >= (1+eps) v means one power less does not cover |v|.
    let tight = t == 0 || ctx.cmp_pow_int(t - 1, mag) != std::cmp::Ordering::Greater;
    Ok(covers && tight)
}

/// Split of an instance into chores someone values at zero, handed to
/// the lowest-index such agent, and the strictly negative remainder the
/// market trades.
pub struct ZeroSplit {
    pub preassigned: Vec<(usize, usize)>,
    pub market_chores: Vec<usize>,
    pub subinstance: Option<Instance>,
}

pub fn preassign_zero_chores(instance: &Instance) -> ZeroSplit {
    let n = instance.num_agents();
    let mut preassigned = Vec::new();
    let mut market_chores = Vec::new();
    for j in 0..instance.num_chores() {
        match (0..n).find(|&i| instance.value(i, j) == 0) {
            Some(i) => preassigned.push((j, i)),
            None => market_chores.push(j),
        }
    }
    let subinstance = if market_chores.is_empty() {
        None
    } else {
        let rows = (0..n)
            .map(|i| market_chores.iter().map(|&j| instance.value(i, j)).collect())
            .collect();
        Some(Instance::new(rows).expect("strictly negative subinstance"))
    };
    ZeroSplit { preassigned, market_chores, subinstance }
}

/// Computes an allocation that is equitable up to one chore and Pareto
/// optimal, by simulating a price adjustment market on the rounded
/// instance.
pub fn solve_eq1_po(instance: &Instance, options: &MarketOptions) -> Result<MarketResult, MarketError> {
    let n = instance.num_agents();
    let m = instance.num_chores();
    let eps = options.eps.clone().unwrap_or_else(|| default_eps(instance));
    match options.mode {
        Mode::Rounded if !eps.is_positive() => return Err(MarketError::InvalidEps),
        Mode::Direct if eps.is_negative() => return Err(MarketError::InvalidEps),
        _ => {}
    }

    let split = preassign_zero_chores(instance);
    let mut owners = vec![0usize; m];
    for &(j, i) in &split.preassigned {
        owners[j] = i;
    }

    let Some(sub) = &split.subinstance else {
        return Ok(MarketResult {
            allocation: Allocation::from_owners(&owners, n).unwrap(),
            eps,
            mode: options.mode,
            steps: 0,
            trace: Vec::new(),
            market_chores: split.market_chores,
            preassigned: split.preassigned,
            prices: Vec::new(),
            deltas: Vec::new(),
            consistency_checks: 0,
        });
    };

    let (outcome, prices) = match options.mode {
        Mode::Rounded => {
            let ctx = PowerCtx::new(&eps)?;
            let mut exponents = Vec::with_capacity(n);
            for i in 0..n {
                let mut row = Vec::with_capacity(sub.num_chores());
                for j in 0..sub.num_chores() {
                    row.push(ctx.ceil_log(sub.value(i, j).unsigned_abs())?);
                }
                exponents.push(row);
            }
            let mut model = PowerModel::new(ctx, exponents);
            let outcome = engine::run(&mut model, options.tiebreak, options.max_steps)?;
            let prices = model.price_exponents().iter().map(|&e| PriceRepr::Power(e)).collect();
            (outcome, prices)
        }
        Mode::Direct => {
            let values = (0..n)
                .map(|i| (0..sub.num_chores()).map(|j| sub.value(i, j)).collect())
                .collect();
            let mut model = DirectModel::new(values, &eps);
            let outcome = engine::run(&mut model, options.tiebreak, options.max_steps)?;
            let prices = model.prices().iter().map(|p| PriceRepr::Exact(p.clone())).collect();
            (outcome, prices)
        }
    };

    for (sub_j, &orig_j) in split.market_chores.iter().enumerate() {
        owners[orig_j] = outcome.owners[sub_j];
    }
    Ok(MarketResult {
        allocation: Allocation::from_owners(&owners, n).unwrap(),
        eps,
        mode: options.mode,
        steps: outcome.steps,
        trace: outcome.trace,
        market_chores: split.market_chores,
        preassigned: split.preassigned,
        prices,
        deltas: outcome.deltas,
        consistency_checks: outcome.consistency_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{fixtures, properties};

    fn rat(num: i64, den: i64) -> Rational {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    #[test]
    fn default_eps_values() {
        // 6 * 4 * 11^3 = 31944
        assert_eq!(default_eps(&fixtures::example_2()), rat(1, 31944));
        // 6 * 3 * 97^3 = 16428114
        assert_eq!(default_eps(&fixtures::example_1()), rat(1, 16428114));
        let unit = Instance::new(vec![vec![-1; 5]; 2]).unwrap();
        assert_eq!(default_eps(&unit), rat(1, 30));
    }

    #[test]
    fn rounding_examples() {
        let inst = Instance::new_allow_zero(vec![vec![-1, -11, 0]]).unwrap();
        let rounded = round_instance(&inst, &rat(1, 2)).unwrap();
        assert_eq!(rounded.exponent(0, 0), Some(0));
        assert_eq!(rounded.rounded_value(0, 0).unwrap(), rat(-1, 1));
        // 1.5^6 = 729/64 = 11.390625 is the first power covering 11.
        assert_eq!(rounded.exponent(0, 1), Some(6));
        assert_eq!(rounded.rounded_value(0, 1).unwrap(), rat(-729, 64));
        assert_eq!(rounded.exponent(0, 2), None);
        assert_eq!(rounded.rounded_value(0, 2).unwrap(), Rational::zero());
    }

    #[test]
    fn rounding_band_holds() {
        for &v in &[-1i64, -2, -7, -11, -97, -1000] {
            for eps in [rat(1, 2), rat(1, 3), rat(1, 31944)] {
                assert!(rounding_within_band(v, &eps).unwrap(), "v = {v}");
            }
        }
        assert!(rounding_within_band(0, &rat(1, 2)).unwrap());
    }

    #[test]
    fn zero_chore_preassignment() {
        let (inst, _) = fixtures::zero_chore_gap();
        let split = preassign_zero_chores(&inst);
        assert_eq!(split.preassigned, vec![(0, 0)]);
        assert_eq!(split.market_chores, vec![1]);
        let sub = split.subinstance.unwrap();
        assert_eq!(sub.valuations(), &vec![vec![-1], vec![-2]]);
    }

    #[test]
    fn direct_mode_reproduces_the_worked_trace() {
        let inst = fixtures::example_2();
        let options = MarketOptions {
            mode: Mode::Direct,
            tiebreak: TieBreak::HighestAgent,
            ..MarketOptions::default()
        };
        let result = solve_eq1_po(&inst, &options).unwrap();

        // Initial assignment: chores priced at their takers' disutility.
        assert_eq!(result.trace[0].prices, vec!["1", "2", "2", "2"]);
        assert_eq!(result.trace[0].utilities, vec!["0", "-5", "-2"]);

        // One transfer, then the single price drop by 5/2.
        assert_eq!(
            result.trace[1].action,
            TraceAction::Move { chore: 0, from: 1, to: 0 }
        );
        assert_eq!(result.trace[2].action, TraceAction::Drop { delta: "5/2".into() });
        assert_eq!(result.trace[2].prices, vec!["2/5", "2", "2", "2"]);
        assert_eq!(result.deltas, vec![DeltaRecord::Ratio(rat(5, 2))]);

        // A second transfer settles the final profile.
        assert_eq!(
            result.trace[3].action,
            TraceAction::Move { chore: 1, from: 1, to: 0 }
        );
        assert_eq!(result.trace[3].utilities, vec!["-6", "-2", "-2"]);
        assert_eq!(result.steps, 4);
        assert_eq!(result.allocation.bundles(), &[vec![0, 1], vec![2], vec![3]]);

        // The final prices support the allocation as a best response.
        let prices: Vec<Rational> = result
            .prices
            .iter()
            .map(|p| match p {
                PriceRepr::Exact(r) => r.clone(),
                PriceRepr::Power(_) => unreachable!(),
            })
            .collect();
        let valuations: Vec<Vec<Rational>> = inst
            .valuations()
            .iter()
            .map(|row| row.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
            .collect();
        assert!(properties::verify_market_certificate(&valuations, &result.allocation, &prices));
    }

    #[test]
    fn rounded_mode_is_eq1_and_po_on_example_2() {
        let inst = fixtures::example_2();
        let result = solve_eq1_po(&inst, &MarketOptions::default()).unwrap();
        assert_eq!(result.eps, rat(1, 31944));
        assert!(properties::is_eq1(&inst, &result.allocation).holds);
        assert!(properties::is_po_brute(&inst, &result.allocation, 1_000_000).unwrap().holds);
        assert!(result.deltas.iter().all(|d| matches!(d, DeltaRecord::Exponent(k) if *k >= 1)));
        assert!(result.consistency_checks >= result.steps);
    }

    #[test]
    fn rounded_mode_on_example_1() {
        let inst = fixtures::example_1();
        let result = solve_eq1_po(&inst, &MarketOptions::default()).unwrap();
        assert!(properties::is_eq1(&inst, &result.allocation).holds);
        assert!(properties::is_po_brute(&inst, &result.allocation, 1_000_000).unwrap().holds);
    }

    #[test]
    fn single_agent_market() {
        let inst = Instance::new(vec![vec![-3, -1]]).unwrap();
        let result = solve_eq1_po(&inst, &MarketOptions::default()).unwrap();
        assert_eq!(result.allocation.bundle(0), &[0, 1]);
        assert_eq!(result.steps, 1);
    }

    #[test]
    fn all_zero_chores_skip_the_market() {
        let inst = Instance::new_allow_zero(vec![vec![0, 0], vec![-1, -1]]).unwrap();
        let result = solve_eq1_po(&inst, &MarketOptions::default()).unwrap();
        assert_eq!(result.allocation.bundle(0), &[0, 1]);
        assert_eq!(result.steps, 0);
        assert!(result.trace.is_empty());
    }

    #[test]
    fn zero_chore_merge_stays_eq1() {
        let (inst, _) = fixtures::zero_chore_gap();
        let result = solve_eq1_po(&inst, &MarketOptions::default()).unwrap();
        assert!(properties::is_eq1(&inst, &result.allocation).holds);
        assert!(properties::is_po_brute(&inst, &result.allocation, 1_000_000).unwrap().holds);
    }

    #[test]
    fn step_cap_is_enforced() {
        let inst = fixtures::example_2();
        let options = MarketOptions { max_steps: 1, ..MarketOptions::default() };
        assert!(matches!(
            solve_eq1_po(&inst, &options),
            Err(MarketError::StepCap { limit: 1 })
        ));
    }

    #[test]
    fn invalid_eps_is_rejected() {
        let inst = fixtures::example_2();
        let options = MarketOptions { eps: Some(rat(0, 1)), ..MarketOptions::default() };
        assert!(matches!(solve_eq1_po(&inst, &options), Err(MarketError::InvalidEps)));
        let options = MarketOptions {
            eps: Some(rat(-1, 2)),
            mode: Mode::Direct,
            ..MarketOptions::default()
        };
        assert!(matches!(solve_eq1_po(&inst, &options), Err(MarketError::InvalidEps)));
    }

    #[test]
    fn trace_lines_are_tab_separated() {
        let inst = fixtures::example_2();
        let options = MarketOptions {
            mode: Mode::Direct,
            tiebreak: TieBreak::HighestAgent,
            ..MarketOptions::default()
        };
        let result = solve_eq1_po(&inst, &options).unwrap();
        let line = result.trace[0].line();
        assert_eq!(line, "1\t1\t0\tinit\t0,-5,-2\t1,2,2,2");
    }
}
