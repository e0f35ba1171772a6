//! Exact leximin-optimal allocation via depth-first branch and bound.
//!
//! Chores are branched on in descending value-spread order. Because adding
//! a chore can only lower utilities, the sorted profile of a partial
//! allocation bounds every completion from above in the leximin order,
//! which makes pruning against the incumbent safe.

use thiserror::Error;

use crate::greedy;
use crate::instance::{Allocation, Instance, UtilityProfile};
use crate::properties::{self, PropertyReport};

/// Default cap on explored search nodes.
pub const DEFAULT_NODE_LIMIT: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LeximinError {
    #[error("search exceeded the node limit of {limit}")]
    NodeLimit { limit: u64 },
}

struct Search<'a> {
    instance: &'a Instance,
    order: Vec<usize>,
    owners: Vec<usize>,
    utilities: Vec<i64>,
    nodes: u64,
    limit: u64,
    best_profile: Vec<i64>,
    best_owners: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) -> Result<(), LeximinError> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(LeximinError::NodeLimit { limit: self.limit });
        }
        let mut bound = self.utilities.clone();
        bound.sort_unstable();
        // Completions can only be leximin-worse than the current partial
        // profile, so anything not beating the incumbent is dead.
        if bound <= self.best_profile {
            return Ok(());
        }
        if depth == self.order.len() {
            self.best_profile = bound;
            self.best_owners = self.owners.clone();
            return Ok(());
        }
        let chore = self.order[depth];
        // Visit the least painful assignments first to tighten the
        // incumbent early.
        let mut agents: Vec<usize> = (0..self.instance.num_agents()).collect();
        agents.sort_by_key(|&i| -(self.utilities[i] + self.instance.value(i, chore)));
        for i in agents {
            self.owners[chore] = i;
            self.utilities[i] += self.instance.value(i, chore);
            self.run(depth + 1)?;
            self.utilities[i] -= self.instance.value(i, chore);
        }
        Ok(())
    }
}

/// Computes a leximin-optimal allocation and its utility profile. The
/// sorted profile is unique; the allocation is the first optimum found in
/// deterministic search order.
pub fn solve_leximin(instance: &Instance, node_limit: u64) -> Result<(Allocation, UtilityProfile), LeximinError> {
    let n = instance.num_agents();
    let m = instance.num_chores();

    // Seed the incumbent with the best of the cheap constructive rules so
    // pruning has traction from the start.
    let mut seeds = vec![greedy::greedy_eqx(instance)];
    if let Ok(a) = greedy::greedy_deq1(instance, None) {
        seeds.push(a);
    }
    if let Ok(a) = greedy::round_robin(instance, None) {
        seeds.push(a);
    }
    let mut best_owners = vec![0usize; m];
    let mut best_profile = vec![i64::MIN; n];
    for seed in &seeds {
        let profile = UtilityProfile::of(instance, seed).sorted();
        if best_profile[0] == i64::MIN || profile > best_profile {
            best_profile = profile;
            for (j, owner) in owners_of(seed, m).into_iter().enumerate() {
                best_owners[j] = owner;
            }
        }
    }
    // Make the incumbent strictly beatable by any true optimum that ties
    // it: keep it as-is; ties are already optimal, so pruning on <= is
    // fine because the tied incumbent is retained as the answer.

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&j| {
        let lo = (0..n).map(|i| instance.value(i, j)).min().unwrap();
        let hi = (0..n).map(|i| instance.value(i, j)).max().unwrap();
        (lo - hi, lo)
    });

    let mut search = Search {
        instance,
        order,
        owners: vec![0; m],
        utilities: vec![0; n],
        nodes: 0,
        limit: node_limit,
        best_profile,
        best_owners,
    };
    search.run(0)?;
    let allocation = Allocation::from_owners(&search.best_owners, n).unwrap();
    let profile = UtilityProfile::of(instance, &allocation);
    debug_assert_eq!(profile.sorted(), search.best_profile);
    Ok((allocation, profile))
}

fn owners_of(allocation: &Allocation, m: usize) -> Vec<usize> {
    let mut owners = vec![0usize; m];
    for (i, bundle) in allocation.bundles().iter().enumerate() {
        for &j in bundle {
            owners[j] = i;
        }
    }
    owners
}

/// Property verdicts for the leximin allocation of an instance: the
/// duplicate-equitability and efficiency guarantees plus the relaxations
/// it does not always satisfy.
pub struct LeximinReport {
    pub allocation: Allocation,
    pub profile: UtilityProfile,
    pub deqx: PropertyReport,
    pub po: Option<PropertyReport>,
    pub eq1: PropertyReport,
    pub eqx: PropertyReport,
    pub ef1: PropertyReport,
    pub efx: PropertyReport,
}

/// Solves for leximin and evaluates the standard property bundle. The
/// Pareto verdict is present only when the instance is small enough to
/// enumerate.
pub fn leximin_report(instance: &Instance, node_limit: u64) -> Result<LeximinReport, LeximinError> {
    let (allocation, profile) = solve_leximin(instance, node_limit)?;
    let po = properties::is_po_brute(instance, &allocation, properties::DEFAULT_PO_LIMIT).ok();
    Ok(LeximinReport {
        deqx: properties::is_deqx(instance, &allocation),
        po,
        eq1: properties::is_eq1(instance, &allocation),
        eqx: properties::is_eqx(instance, &allocation),
        ef1: properties::is_ef1(instance, &allocation),
        efx: properties::is_efx(instance, &allocation),
        allocation,
        profile,
    })
}
