//! Polynomial-time constructive allocation rules: the EQX greedy, the
//! duplicate-equitability greedy, a special-purpose rule for binary
//! valuations, and a round-robin baseline.
//!
//! Tie-breaking is uniform across the module: the lowest agent index wins
//! "happiest agent" ties and the lowest chore index wins "most disliked
//! chore" ties, so every rule is deterministic.

use thiserror::Error;

use crate::instance::{Allocation, Instance};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GreedyError {
    #[error("chore order must be a permutation of 0..{expected}")]
    InvalidOrder { expected: usize },
    #[error("agent order must be a permutation of 0..{expected}")]
    InvalidAgentOrder { expected: usize },
    #[error("instance is not binary: v[{agent}][{chore}] = {value}")]
    NotBinary { agent: usize, chore: usize, value: i64 },
}

fn check_permutation(order: &[usize], len: usize) -> bool {
    if order.len() != len {
        return false;
    }
    let mut seen = vec![false; len];
    for &x in order {
        if x >= len || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// Iteratively lets the currently happiest agent pick the available chore
/// it dislikes most. The returned allocation is equitable up to any
/// negatively-valued chore.
pub fn greedy_eqx(instance: &Instance) -> Allocation {
    let n = instance.num_agents();
    let m = instance.num_chores();
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut utilities = vec![0i64; n];
    let mut available = vec![true; m];
    for _ in 0..m {
        let picker = (0..n).max_by_key(|&i| (utilities[i], std::cmp::Reverse(i))).unwrap();
        let chore = (0..m)
            .filter(|&j| available[j])
            .min_by_key(|&j| (instance.value(picker, j), j))
            .unwrap();
        available[chore] = false;
        bundles[picker].push(chore);
        utilities[picker] += instance.value(picker, chore);
        #[cfg(debug_assertions)]
        debug_assert!(partial_is_eqx(instance, &bundles), "partial allocation lost EQX");
    }
    Allocation::new(bundles, n, m).unwrap()
}

#[cfg(debug_assertions)]
fn partial_is_eqx(instance: &Instance, bundles: &[Vec<usize>]) -> bool {
    let n = bundles.len();
    let utilities: Vec<i64> = bundles.iter().enumerate().map(|(i, b)| instance.bundle_value(i, b)).collect();
    for i in 0..n {
        if bundles[i].is_empty() {
            continue;
        }
        for k in 0..n {
            if i == k {
                continue;
            }
            for &j in &bundles[i] {
                if instance.value(i, j) < 0 && utilities[i] - instance.value(i, j) < utilities[k] {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(debug_assertions)]
fn partial_is_deq1(instance: &Instance, bundles: &[Vec<usize>]) -> bool {
    let n = bundles.len();
    let utilities: Vec<i64> = bundles.iter().enumerate().map(|(i, b)| instance.bundle_value(i, b)).collect();
    for i in 0..n {
        if bundles[i].is_empty() {
            continue;
        }
        for k in 0..n {
            if i == k {
                continue;
            }
            let best = bundles[i].iter().map(|&j| utilities[k] + instance.value(k, j)).min().unwrap();
            if utilities[i] < best {
                return false;
            }
        }
    }
    true
}

/// Assigns chores in the given order; each chore goes to the agent whose
/// utility would be highest after (hypothetically) receiving it. Every
/// prefix of the run is equitable up to one duplicated chore.
pub fn greedy_deq1(instance: &Instance, chore_order: Option<&[usize]>) -> Result<Allocation, GreedyError> {
    let n = instance.num_agents();
    let m = instance.num_chores();
    let default_order: Vec<usize> = (0..m).collect();
    let order = chore_order.unwrap_or(&default_order);
    if !check_permutation(order, m) {
        return Err(GreedyError::InvalidOrder { expected: m });
    }
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut utilities = vec![0i64; n];
    for &j in order {
        let taker = (0..n)
            .max_by_key(|&i| (utilities[i] + instance.value(i, j), std::cmp::Reverse(i)))
            .unwrap();
        bundles[taker].push(j);
        utilities[taker] += instance.value(taker, j);
        #[cfg(debug_assertions)]
        debug_assert!(partial_is_deq1(instance, &bundles), "partial allocation lost DEQ1");
    }
    Ok(Allocation::new(bundles, n, m).unwrap())
}

/// Special rule for valuations in {-1, 0}: chores someone values at zero
/// go to the lowest-index such agent; the chores everyone dislikes are
/// dealt round-robin. The result is EQX, DEQX, EFX, and Pareto optimal.
pub fn binary_allocate(instance: &Instance) -> Result<Allocation, GreedyError> {
    let n = instance.num_agents();
    let m = instance.num_chores();
    for i in 0..n {
        for j in 0..m {
            let v = instance.value(i, j);
            if v != 0 && v != -1 {
                return Err(GreedyError::NotBinary { agent: i, chore: j, value: v });
            }
        }
    }
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut leftover = Vec::new();
    for j in 0..m {
        match (0..n).find(|&i| instance.value(i, j) == 0) {
            Some(i) => bundles[i].push(j),
            None => leftover.push(j),
        }
    }
    for (round, &j) in leftover.iter().enumerate() {
        bundles[round % n].push(j);
    }
    Ok(Allocation::new(bundles, n, m).unwrap())
}

/// Baseline: chores in index order, agents cyclically in the given order.
pub fn round_robin(instance: &Instance, agent_order: Option<&[usize]>) -> Result<Allocation, GreedyError> {
    let n = instance.num_agents();
    let m = instance.num_chores();
    let default_order: Vec<usize> = (0..n).collect();
    let order = agent_order.unwrap_or(&default_order);
    if !check_permutation(order, n) {
        return Err(GreedyError::InvalidAgentOrder { expected: n });
    }
    let mut bundles: Vec<Vec<usize>> = vec![Vec::new(); n];
    for j in 0..m {
        bundles[order[j % n]].push(j);
    }
    Ok(Allocation::new(bundles, n, m).unwrap())
}
