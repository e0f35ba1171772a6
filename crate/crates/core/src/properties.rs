//! Decision procedures for fairness and efficiency properties.
//!
//! Every checker returns a [`PropertyReport`] carrying a verdict and, when
//! the property fails, a witness that can be replayed against the raw
//! definition. Witnesses are chosen as the lexicographically smallest
//! violating tuple so that golden tests are deterministic.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{utility, Allocation, Instance, Rational};
use crate::oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Property {
    Eq,
    Eq1,
    Eqx,
    Eqx0,
    Deq1,
    Deqx,
    Deqx0,
    Ef,
    Ef1,
    Efx,
    Efx0,
    Eq1Eps,
    PoBrute,
    PoEps,
}

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Eq => "EQ",
            Property::Eq1 => "EQ1",
            Property::Eqx => "EQX",
            Property::Eqx0 => "EQX0",
            Property::Deq1 => "DEQ1",
            Property::Deqx => "DEQX",
            Property::Deqx0 => "DEQX0",
            Property::Ef => "EF",
            Property::Ef1 => "EF1",
            Property::Efx => "EFX",
            Property::Efx0 => "EFX0",
            Property::Eq1Eps => "EQ1-EPS",
            Property::PoBrute => "PO",
            Property::PoEps => "PO-EPS",
        }
    }

    /// Parses the names accepted on the command line and in combo strings.
    pub fn parse(s: &str) -> Option<Property> {
        match s.to_ascii_uppercase().as_str() {
            "EQ" => Some(Property::Eq),
            "EQ1" => Some(Property::Eq1),
            "EQX" => Some(Property::Eqx),
            "EQX0" => Some(Property::Eqx0),
            "DEQ1" => Some(Property::Deq1),
            "DEQX" => Some(Property::Deqx),
            "DEQX0" => Some(Property::Deqx0),
            "EF" => Some(Property::Ef),
            "EF1" => Some(Property::Ef1),
            "EFX" => Some(Property::Efx),
            "EFX0" => Some(Property::Efx0),
            "PO" => Some(Property::PoBrute),
            _ => None,
        }
    }
}

/// Evidence that a property fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    /// A violating ordered pair of agents, optionally pinning the chore
    /// whose removal (or duplication) breaks the condition.
    Pair {
        agent: usize,
        other: usize,
        chore: Option<usize>,
    },
    /// An allocation that Pareto dominates the checked one.
    Dominator(Allocation),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl PropertyReport {
    fn ok(property: Property) -> Self {
        PropertyReport { property, holds: true, witness: None }
    }

    fn fail(property: Property, witness: Witness) -> Self {
        PropertyReport { property, holds: false, witness: Some(witness) }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PropertyError {
    #[error("instance has {space} allocations, exceeding the enumeration limit {limit}")]
    TooLarge { space: u128, limit: u128 },
    #[error("epsilon must be non-negative")]
    NegativeEps,
}

fn utilities(instance: &Instance, allocation: &Allocation) -> Vec<i64> {
    (0..instance.num_agents()).map(|i| utility(instance, allocation, i)).collect()
}

/// Exact equitability: all utilities equal.
pub fn is_eq(instance: &Instance, allocation: &Allocation) -> PropertyReport {
    let u = utilities(instance, allocation);
    for i in 0..u.len() {
        for k in 0..u.len() {
            if i != k && u[i] < u[k] {
                return PropertyReport::fail(Property::Eq, Witness::Pair { agent: i, other: k, chore: None });
            }
        }
    }
    PropertyReport::ok(Property::Eq)
}

/// Shared core of the removal-based relaxations. `for_all` selects the
/// any-chore (EQX-style) quantifier over the exists-chore (EQ1-style) one;
/// `negative_only` keeps the check restricted to chores the owner values
/// strictly negatively; `against_own` compares against the evaluator's
/// value for the other bundle (envy) instead of the other agent's utility
/// (equity).
fn removal_check(
    instance: &Instance,
    allocation: &Allocation,
    property: Property,
    for_all: bool,
    negative_only: bool,
    against_own: bool,
) -> PropertyReport {
    let n = instance.num_agents();
    let u = utilities(instance, allocation);
    for i in 0..n {
        let bundle = allocation.bundle(i);
        if bundle.is_empty() {
            continue;
        }
        for k in 0..n {
            if i == k {
                continue;
            }
            let target = if against_own {
                instance.bundle_value(i, allocation.bundle(k))
            } else {
                u[k]
            };
            if for_all {
                // Every qualifying chore's removal must restore the bound.
                for &j in bundle {
                    let v = instance.value(i, j);
                    if negative_only && v >= 0 {
                        continue;
                    }
                    if u[i] - v < target {
                        return PropertyReport::fail(property, Witness::Pair { agent: i, other: k, chore: Some(j) });
                    }
                }
            } else {
                // Some chore's removal must restore the bound; removing the
                // most disliked chore is the best candidate.
                let best = bundle.iter().map(|&j| u[i] - instance.value(i, j)).max().unwrap();
                if best < target {
                    return PropertyReport::fail(property, Witness::Pair { agent: i, other: k, chore: None });
                }
            }
        }
    }
    PropertyReport::ok(property)
}

/// Equitability up to one chore.
pub fn is_eq1(instance: &Instance, allocation: &Allocation) -> PropertyReport {
    removal_check(instance, allocation, Property::Eq1, false, false, false)
}

/// Equitability up to any negatively-valued chore.
pub fn is_eqx(instance: &Instance, allocation: &Allocation) -> PropertyReport {
    removal_check(instance, allocation, Property::Eqx, true, true, false)
}

/// Equitability up to any chore, zero-valued ones included.
pub fn is_eqx0(instance: &Instance, allocation: &Allocation) -> PropertyReport {
    removal_check(instance, allocation, Property::Eqx0, true, false, false)
}

/// Envy-freeness.
pub fn is_ef(instance: &Instance, allocation: &Allocation) -> PropertyReport {
    let n = instance.num_agents();
    for i in 0..n {
        let own = utility(instance, allocation, i);
        for k in 0..n {
            if i != k && own < instance.bundle_value(i, allocation.bundle(k)) {
                return PropertyReport::fail(Property::Ef, Witness::Pair { agent: i, other: k, chore: None });
            }
        }
    }
    PropertyReport::ok(Property::Ef)
}

/// Envy-freeness up to one chore.
pub fn is_ef1(instance: &Instance, allocation: &Allocation) -> PropertyReport {
    removal_check(instance, allocation, Property::Ef1, false, false, true)
}

/// Envy-freeness up to any negatively-valued chore.
pub fn is_efx(instance: &Instance, allocation: &Allocation) -> PropertyReport {
    removal_check(instance, allocation, Property::Efx, true, true, true)
}

/// Envy-freeness up to any chore, zero-valued ones included.
pub fn is_efx0(instance: &Instance, allocation: &Allocation) -> PropertyReport {
    removal_check(instance, allocation, Property::Efx0, true, false, true)
}

/// Shared core of the duplication-based relaxations: instead of removing a
/// chore from the less happy agent's bundle, a copy of one of its chores is
/// hypothetically added to the happier agent's bundle.
fn duplication_check(
    instance: &Instance,
    allocation: &Allocation,
    property: Property,
    for_all: bool,
    negative_only: bool,
) -> PropertyReport {
    let n = instance.num_agents();
    let u = utilities(instance, allocation);
    for i in 0..n {
        let bundle = allocation.bundle(i);
        if bundle.is_empty() {
            continue;
        }
        for k in 0..n {
            if i == k {
                continue;
            }
            if for_all {
                for &j in bundle {
                    if negative_only && instance.value(i, j) >= 0 {
                        continue;
                    }
                    if u[i] < u[k] + instance.value(k, j) {
                        return PropertyReport::fail(property, Witness::Pair { agent: i, other: k, chore: Some(j) });
                    }
                }
            } else {
                // The duplicated chore enters k's bundle, so the best
                // candidate is the one k dislikes most.
                let best = bundle.iter().map(|&j| u[k] + instance.value(k, j)).min().unwrap();
                if u[i] < best {
                    return PropertyReport::fail(property, Witness::Pair { agent: i, other: k, chore: None });
                }
            }
        }
    }
    PropertyReport::ok(property)
}

/// Equitability up to one duplicated chore.
pub fn is_deq1(instance: &Instance, allocation: &Allocation) -> PropertyReport {
    duplication_check(instance, allocation, Property::Deq1, false, false)
}

/// Equitability up to any duplicated negatively-valued chore.
pub fn is_deqx(instance: &Instance, allocation: &Allocation) -> PropertyReport {
    duplication_check(instance, allocation, Property::Deqx, true, true)
}

/// Equitability up to any duplicated chore, zero-valued ones included.
pub fn is_deqx0(instance: &Instance, allocation: &Allocation) -> PropertyReport {
    duplication_check(instance, allocation, Property::Deqx0, true, false)
}

/// Relaxed EQ1 with a multiplicative (1+eps) slack on the removal side.
/// With `eps = 0` this coincides with [`is_eq1`].
pub fn is_eps_eq1(
    instance: &Instance,
    allocation: &Allocation,
    eps: &Rational,
) -> Result<PropertyReport, PropertyError> {
    if eps < &Rational::zero() {
        return Err(PropertyError::NegativeEps);
    }
    let n = instance.num_agents();
    let u = utilities(instance, allocation);
    let scale = Rational::one() + eps.clone();
    for i in 0..n {
        let bundle = allocation.bundle(i);
        if bundle.is_empty() {
            continue;
        }
        let best = bundle.iter().map(|&j| u[i] - instance.value(i, j)).max().unwrap();
        // best <= 0, so dividing by (1+eps) moves it toward zero.
        let relaxed = Rational::from_integer(best.into()) / scale.clone();
        for k in 0..n {
            if i != k && relaxed < Rational::from_integer(u[k].into()) {
                return Ok(PropertyReport::fail(Property::Eq1Eps, Witness::Pair { agent: i, other: k, chore: None }));
            }
        }
    }
    Ok(PropertyReport::ok(Property::Eq1Eps))
}

/// Default cap on the enumeration size for the brute-force Pareto check.
pub const DEFAULT_PO_LIMIT: u128 = 10_000_000;

/// Pareto optimality by full enumeration. Errors out instead of attempting
/// an infeasible enumeration; the general decision problem has no known
/// efficient algorithm.
pub fn is_po_brute(
    instance: &Instance,
    allocation: &Allocation,
    limit: u128,
) -> Result<PropertyReport, PropertyError> {
    let space = oracle::allocation_count(instance);
    if space > limit {
        return Err(PropertyError::TooLarge { space, limit });
    }
    let u = utilities(instance, allocation);
    let mut dominator: Option<Vec<usize>> = None;
    oracle::enumerate_allocations_raw(instance, |owners, profile| {
        if dominator.is_some() {
            return;
        }
        let mut some_strict = false;
        for i in 0..u.len() {
            if profile[i] < u[i] {
                return;
            }
            if profile[i] > u[i] {
                some_strict = true;
            }
        }
        if some_strict {
            dominator = Some(owners.to_vec());
        }
    });
    match dominator {
        Some(owners) => {
            let b = Allocation::from_owners(&owners, instance.num_agents()).unwrap();
            Ok(PropertyReport::fail(Property::PoBrute, Witness::Dominator(b)))
        }
        None => Ok(PropertyReport::ok(Property::PoBrute)),
    }
}

/// Pareto optimality up to a (1+eps) utility factor, by full enumeration.
pub fn is_po_eps_brute(
    instance: &Instance,
    allocation: &Allocation,
    eps: &Rational,
    limit: u128,
) -> Result<PropertyReport, PropertyError> {
    if eps < &Rational::zero() {
        return Err(PropertyError::NegativeEps);
    }
    let space = oracle::allocation_count(instance);
    if space > limit {
        return Err(PropertyError::TooLarge { space, limit });
    }
    let u = utilities(instance, allocation);
    let scale = Rational::one() + eps.clone();
    let bounds: Vec<Rational> = u
        .iter()
        .map(|&ui| Rational::from_integer(ui.into()) / scale.clone())
        .collect();
    let mut dominator: Option<Vec<usize>> = None;
    oracle::enumerate_allocations_raw(instance, |owners, profile| {
        if dominator.is_some() {
            return;
        }
        let mut some_strict = false;
        for i in 0..u.len() {
            let p = Rational::from_integer(profile[i].into());
            if p < bounds[i] {
                return;
            }
            if profile[i] > u[i] {
                some_strict = true;
            }
        }
        if some_strict {
            dominator = Some(owners.to_vec());
        }
    });
    match dominator {
        Some(owners) => {
            let b = Allocation::from_owners(&owners, instance.num_agents()).unwrap();
            Ok(PropertyReport::fail(Property::PoEps, Witness::Dominator(b)))
        }
        None => Ok(PropertyReport::ok(Property::PoEps)),
    }
}

/// Checks that an allocation together with a price vector forms a market
/// certificate: every assigned chore attains its owner's maximum
/// bang-per-buck ratio exactly. A valid certificate implies the allocation
/// is fractionally Pareto optimal for the given valuations, hence Pareto
/// optimal.
pub fn verify_market_certificate(
    valuations: &[Vec<Rational>],
    allocation: &Allocation,
    prices: &[Rational],
) -> bool {
    let n = valuations.len();
    let m = prices.len();
    for i in 0..n {
        let ratios: Vec<Rational> = (0..m).map(|j| valuations[i][j].clone() / prices[j].clone()).collect();
        let best = ratios.iter().max().cloned().expect("at least one chore");
        for &j in allocation.bundle(i) {
            if ratios[j] != best {
                return false;
            }
        }
    }
    true
}

/// Dispatches a single property check; PO uses the brute-force path with
/// the default size guard.
pub fn check(
    instance: &Instance,
    allocation: &Allocation,
    property: Property,
) -> Result<PropertyReport, PropertyError> {
    Ok(match property {
        Property::Eq => is_eq(instance, allocation),
        Property::Eq1 => is_eq1(instance, allocation),
        Property::Eqx => is_eqx(instance, allocation),
        Property::Eqx0 => is_eqx0(instance, allocation),
        Property::Deq1 => is_deq1(instance, allocation),
        Property::Deqx => is_deqx(instance, allocation),
        Property::Deqx0 => is_deqx0(instance, allocation),
        Property::Ef => is_ef(instance, allocation),
        Property::Ef1 => is_ef1(instance, allocation),
        Property::Efx => is_efx(instance, allocation),
        Property::Efx0 => is_efx0(instance, allocation),
        Property::Eq1Eps => is_eps_eq1(instance, allocation, &Rational::zero())?,
        Property::PoBrute => is_po_brute(instance, allocation, DEFAULT_PO_LIMIT)?,
        Property::PoEps => is_po_eps_brute(instance, allocation, &Rational::zero(), DEFAULT_PO_LIMIT)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn eq_on_leximin_allocation_of_example_2() {
        let inst = fixtures::example_2();
        let alloc = fixtures::example_2_leximin_allocation();
        let report = is_eq(&inst, &alloc);
        assert!(!report.holds);
        // The witness names the worse-off agent first.
        assert_eq!(report.witness, Some(Witness::Pair { agent: 1, other: 0, chore: None }));
    }

    #[test]
    fn eq_on_flat_profiles() {
        let (inst, alloc) = fixtures::partition_witness();
        assert!(is_eq(&inst, &alloc).holds);
        let ident = Instance::new(vec![vec![-1, -1], vec![-1, -1]]).unwrap();
        let split = Allocation::new(vec![vec![0], vec![1]], 2, 2).unwrap();
        assert!(is_eq(&ident, &split).holds);
    }

    #[test]
    fn eq1_on_example_2_allocations() {
        let inst = fixtures::example_2();
        let leximin = fixtures::example_2_leximin_allocation();
        let report = is_eq1(&inst, &leximin);
        assert!(!report.holds);
        assert_eq!(report.witness, Some(Witness::Pair { agent: 1, other: 0, chore: None }));

        let market = Allocation::new(vec![vec![0, 1], vec![2], vec![3]], 3, 4).unwrap();
        assert!(is_eq1(&inst, &market).holds);
    }

    #[test]
    fn eq1_ignores_empty_bundles() {
        // The empty-handed agent is exempt from the removal requirement,
        // so the tie at zero utility stands.
        let inst = Instance::new_allow_zero(vec![vec![-1], vec![0]]).unwrap();
        let alloc = Allocation::new(vec![vec![], vec![0]], 2, 1).unwrap();
        assert!(is_eq1(&inst, &alloc).holds);

        // With both agents loaded, the same shape fails.
        let dense = Instance::new(vec![vec![-1, -1], vec![-1, -1]]).unwrap();
        let lopsided = Allocation::new(vec![vec![0, 1], vec![]], 2, 2).unwrap();
        assert!(!is_eq1(&dense, &lopsided).holds);
    }

    #[test]
    fn eqx_on_example_1() {
        let inst = fixtures::example_1();
        assert!(is_eqx(&inst, &fixtures::example_1_a7()).holds);
        assert!(!is_eqx(&inst, &fixtures::example_1_a3()).holds);
        let all_to_one = Allocation::new(vec![vec![0, 1, 2], vec![]], 2, 3).unwrap();
        assert!(!is_eqx(&inst, &all_to_one).holds);
    }

    #[test]
    fn zero_filter_separates_eqx_from_eqx0() {
        let (inst, alloc) = fixtures::zero_chore_gap();
        assert!(is_eqx(&inst, &alloc).holds);
        let report = is_eqx0(&inst, &alloc);
        assert!(!report.holds);
        assert_eq!(report.witness, Some(Witness::Pair { agent: 0, other: 1, chore: Some(0) }));
    }

    #[test]
    fn eqx0_matches_eqx_on_strictly_negative_instances() {
        let inst = fixtures::example_2();
        let alloc = fixtures::example_2_leximin_allocation();
        assert_eq!(is_eqx(&inst, &alloc).holds, is_eqx0(&inst, &alloc).holds);
        let single = Instance::new(vec![vec![-3]]).unwrap();
        let a = Allocation::new(vec![vec![0]], 1, 1).unwrap();
        assert!(is_eqx0(&single, &a).holds);
    }

    #[test]
    fn deq1_direct_check() {
        let inst = Instance::new(vec![vec![-5], vec![-1]]).unwrap();
        let alloc = Allocation::new(vec![vec![0], vec![]], 2, 1).unwrap();
        // Duplicating the only chore into agent 1's bundle still leaves
        // agent 1 at -1 > -5, so the pair (0, 1) violates the condition.
        let report = is_deq1(&inst, &alloc);
        assert!(!report.holds);
        assert_eq!(report.witness, Some(Witness::Pair { agent: 0, other: 1, chore: None }));
    }

    #[test]
    fn deq1_empty_instance_is_vacuous() {
        let inst = Instance::new_allow_zero(vec![vec![], vec![]]).unwrap();
        let alloc = Allocation::new(vec![vec![], vec![]], 2, 0).unwrap();
        assert!(is_deq1(&inst, &alloc).holds);
    }

    #[test]
    fn deqx_counterexample_and_single_agent() {
        let single = Instance::new(vec![vec![-2, -3]]).unwrap();
        let a = Allocation::new(vec![vec![0, 1]], 1, 2).unwrap();
        assert!(is_deqx(&single, &a).holds);

        // Both chores on agent 0 while agent 1 would barely notice a copy.
        let inst = Instance::new(vec![vec![-2, -2], vec![-1, -1]]).unwrap();
        let lopsided = Allocation::new(vec![vec![0, 1], vec![]], 2, 2).unwrap();
        assert!(!is_deqx(&inst, &lopsided).holds);
    }

    #[test]
    fn deqx_holds_on_example_2_leximin() {
        let inst = fixtures::example_2();
        let alloc = fixtures::example_2_leximin_allocation();
        assert!(is_deqx(&inst, &alloc).holds);
    }

    #[test]
    fn envy_checks_on_fixtures() {
        let inst = fixtures::example_2();
        let leximin = fixtures::example_2_leximin_allocation();
        assert!(!is_ef1(&inst, &leximin).holds);

        let (winst, walloc) = fixtures::partition_witness();
        assert!(is_ef(&winst, &walloc).holds);
    }

    #[test]
    fn identical_valuations_align_envy_and_equity() {
        let inst = Instance::new(vec![vec![-3, -1, -4], vec![-3, -1, -4]]).unwrap();
        for owners in [[0, 0, 0], [0, 0, 1], [0, 1, 1], [1, 0, 1]] {
            let alloc = Allocation::from_owners(&owners, 2).unwrap();
            assert_eq!(is_ef(&inst, &alloc).holds, is_eq(&inst, &alloc).holds);
            assert_eq!(is_ef1(&inst, &alloc).holds, is_eq1(&inst, &alloc).holds);
            assert_eq!(is_efx(&inst, &alloc).holds, is_eqx(&inst, &alloc).holds);
        }
    }

    #[test]
    fn eps_eq1_reduces_to_eq1_at_zero() {
        let inst = fixtures::example_2();
        let leximin = fixtures::example_2_leximin_allocation();
        let zero = Rational::zero();
        assert!(!is_eps_eq1(&inst, &leximin, &zero).unwrap().holds);
        let huge = rat(1_000_000, 1);
        assert!(is_eps_eq1(&inst, &leximin, &huge).unwrap().holds);
        assert!(is_eps_eq1(&inst, &leximin, &rat(-1, 2)).is_err());
    }

    #[test]
    fn po_brute_on_example_1() {
        let inst = fixtures::example_1();
        let report = is_po_brute(&inst, &fixtures::example_1_a7(), DEFAULT_PO_LIMIT).unwrap();
        assert!(!report.holds);
        match report.witness {
            Some(Witness::Dominator(b)) => {
                // The dominating allocation must actually dominate.
                assert!(utility(&inst, &b, 0) >= -100 && utility(&inst, &b, 1) >= -97);
            }
            other => panic!("expected a dominator, got {other:?}"),
        }
        assert!(is_po_brute(&inst, &fixtures::example_1_a3(), DEFAULT_PO_LIMIT).unwrap().holds);
    }

    #[test]
    fn po_brute_utilitarian_and_single_agent() {
        let inst = fixtures::example_2();
        // Assign each chore to an agent that values it most.
        let owners: Vec<usize> = (0..4)
            .map(|j| (0..3).max_by_key(|&i| inst.value(i, j)).unwrap())
            .collect();
        let alloc = Allocation::from_owners(&owners, 3).unwrap();
        assert!(is_po_brute(&inst, &alloc, DEFAULT_PO_LIMIT).unwrap().holds);

        let single = Instance::new(vec![vec![-1, -2]]).unwrap();
        let a = Allocation::new(vec![vec![0, 1]], 1, 2).unwrap();
        assert!(is_po_brute(&single, &a, DEFAULT_PO_LIMIT).unwrap().holds);
    }

    #[test]
    fn po_brute_size_guard() {
        let inst = Instance::new(vec![vec![-1; 30]; 4]).unwrap();
        let alloc = Allocation::from_owners(&vec![0; 30], 4).unwrap();
        assert!(matches!(
            is_po_brute(&inst, &alloc, DEFAULT_PO_LIMIT),
            Err(PropertyError::TooLarge { .. })
        ));
    }

    #[test]
    fn market_certificate_on_figure_prices() {
        // Rounded valuations coincide with the originals here; the initial
        // market state of example 2 prices every chore at its owner's
        // disutility.
        let inst = fixtures::example_2();
        let w: Vec<Vec<Rational>> = (0..3)
            .map(|i| (0..4).map(|j| Rational::from_integer(inst.value(i, j).into())).collect())
            .collect();
        let alloc = Allocation::new(vec![vec![], vec![0, 1, 2], vec![3]], 3, 4).unwrap();
        let prices: Vec<Rational> = [1, 2, 2, 2].iter().map(|&p| rat(p, 1)).collect();
        assert!(verify_market_certificate(&w, &alloc, &prices));

        let perturbed: Vec<Rational> = [1, 3, 2, 2].iter().map(|&p| rat(p, 1)).collect();
        assert!(!verify_market_certificate(&w, &alloc, &perturbed));

        let w1 = vec![vec![rat(-2, 1)]];
        let a1 = Allocation::new(vec![vec![0]], 1, 1).unwrap();
        assert!(verify_market_certificate(&w1, &a1, &[rat(2, 1)]));
    }
}
