//! Brute-force enumeration over all allocations of an instance.
//!
//! Everything here is exponential in the number of chores and guarded by an
//! explicit size limit; it provides ground truth for the polynomial
//! algorithms on small instances.

use std::collections::HashMap;

use thiserror::Error;

use crate::instance::{Allocation, Instance, UtilityProfile};
use crate::properties::{self, Property};

/// Default bound on the number of allocations an oracle call may visit.
pub const DEFAULT_ENUM_LIMIT: u128 = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {space} allocations, exceeding the enumeration limit {limit}")]
    TooLarge { space: u128, limit: u128 },
    #[error("empty property combination")]
    EmptyCombo,
}

/// Number of allocations, n^m, saturating at `u128::MAX`.
pub fn allocation_count(instance: &Instance) -> u128 {
    let n = instance.num_agents() as u128;
    let mut total: u128 = 1;
    for _ in 0..instance.num_chores() {
        total = total.saturating_mul(n);
    }
    total
}

/// Visits every allocation exactly once as a mixed-radix counter over
/// per-chore owners (chore 0 varies fastest), passing the owner vector and
/// the utility profile. No size guard; callers are expected to check first.
pub(crate) fn enumerate_allocations_raw<F>(instance: &Instance, mut visitor: F)
where
    F: FnMut(&[usize], &[i64]),
{
    let n = instance.num_agents();
    let m = instance.num_chores();
    let mut owners = vec![0usize; m];
    let mut profile = vec![0i64; n];
    // Start with every chore on agent 0.
    for j in 0..m {
        profile[0] += instance.value(0, j);
    }
    loop {
        visitor(&owners, &profile);
        // Increment the counter, updating the profile one chore at a time.
        let mut j = 0;
        loop {
            if j == m {
                return;
            }
            let old = owners[j];
            profile[old] -= instance.value(old, j);
            if old + 1 < n {
                owners[j] = old + 1;
                profile[old + 1] += instance.value(old + 1, j);
                break;
            }
            owners[j] = 0;
            profile[0] += instance.value(0, j);
            j += 1;
        }
    }
}

/// Guarded enumeration; returns the number of allocations visited.
pub fn enumerate_allocations<F>(instance: &Instance, limit: u128, mut visitor: F) -> Result<u64, OracleError>
where
    F: FnMut(&[usize], &[i64]),
{
    let space = allocation_count(instance);
    if space > limit {
        return Err(OracleError::TooLarge { space, limit });
    }
    let mut count = 0u64;
    enumerate_allocations_raw(instance, |owners, profile| {
        count += 1;
        visitor(owners, profile);
    });
    Ok(count)
}

/// Searches for an allocation satisfying every property in `combo`,
/// returning the first witness in enumeration order, or `None` if the
/// combination is unsatisfiable on this instance.
///
/// Pareto optimality inside a combination is decided against the set of
/// Pareto-maximal distinct utility profiles, computed once up front.
pub fn exists_allocation(
    instance: &Instance,
    combo: &[Property],
    limit: u128,
) -> Result<Option<Allocation>, OracleError> {
    if combo.is_empty() {
        return Err(OracleError::EmptyCombo);
    }
    let space = allocation_count(instance);
    if space > limit {
        return Err(OracleError::TooLarge { space, limit });
    }
    let wants_po = combo.iter().any(|&p| p == Property::PoBrute);
    let simple: Vec<Property> = combo.iter().copied().filter(|&p| p != Property::PoBrute).collect();

    let frontier = if wants_po { Some(pareto_front(instance)) } else { None };

    let n = instance.num_agents();
    let mut found: Option<Vec<usize>> = None;
    enumerate_allocations_raw(instance, |owners, profile| {
        if found.is_some() {
            return;
        }
        if let Some(front) = &frontier {
            if !front.contains(profile) {
                return;
            }
        }
        if simple.is_empty() {
            found = Some(owners.to_vec());
            return;
        }
        let allocation = Allocation::from_owners(owners, n).unwrap();
        for &p in &simple {
            // The simple properties never hit a size guard.
            if !properties::check(instance, &allocation, p).unwrap().holds {
                return;
            }
        }
        found = Some(owners.to_vec());
    });
    Ok(found.map(|owners| Allocation::from_owners(&owners, n).unwrap()))
}

/// The set of utility profiles not Pareto dominated by any allocation.
fn pareto_front(instance: &Instance) -> std::collections::HashSet<Vec<i64>> {
    let mut distinct: HashMap<Vec<i64>, ()> = HashMap::new();
    enumerate_allocations_raw(instance, |_, profile| {
        distinct.entry(profile.to_vec()).or_insert(());
    });
    let profiles: Vec<Vec<i64>> = distinct.into_keys().collect();
    let mut front = std::collections::HashSet::new();
    'outer: for a in &profiles {
        for b in &profiles {
            if a != b
                && b.iter().zip(a).all(|(x, y)| x >= y)
                && b.iter().zip(a).any(|(x, y)| x > y)
            {
                continue 'outer;
            }
        }
        front.insert(a.clone());
    }
    front
}

/// Leximin-maximal sorted utility profile by exhaustive comparison.
pub fn leximin_brute(instance: &Instance, limit: u128) -> Result<UtilityProfile, OracleError> {
    let space = allocation_count(instance);
    if space > limit {
        return Err(OracleError::TooLarge { space, limit });
    }
    let mut best: Option<Vec<i64>> = None;
    enumerate_allocations_raw(instance, |_, profile| {
        let mut sorted = profile.to_vec();
        sorted.sort_unstable();
        match &best {
            Some(b) if *b >= sorted => {}
            _ => best = Some(sorted),
        }
    });
    Ok(UtilityProfile { utilities: best.expect("at least one allocation") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn enumeration_counts() {
        let ex1 = fixtures::example_1();
        assert_eq!(enumerate_allocations(&ex1, DEFAULT_ENUM_LIMIT, |_, _| {}).unwrap(), 8);
        let single = Instance::new(vec![vec![-1, -2]]).unwrap();
        assert_eq!(enumerate_allocations(&single, DEFAULT_ENUM_LIMIT, |_, _| {}).unwrap(), 1);
        assert_eq!(allocation_count(&fixtures::prop4_instance()), 65536);
    }

    #[test]
    fn enumeration_profiles_are_consistent() {
        let inst = fixtures::example_2();
        let mut seen = 0u64;
        enumerate_allocations(&inst, DEFAULT_ENUM_LIMIT, |owners, profile| {
            seen += 1;
            let alloc = Allocation::from_owners(owners, 3).unwrap();
            let expected = UtilityProfile::of(&inst, &alloc);
            assert_eq!(profile, expected.utilities.as_slice());
        })
        .unwrap();
        assert_eq!(seen, 81);
    }

    #[test]
    fn example_1_existence_queries() {
        let inst = fixtures::example_1();
        let eqx_po = exists_allocation(&inst, &[Property::Eqx, Property::PoBrute], DEFAULT_ENUM_LIMIT).unwrap();
        assert!(eqx_po.is_none());
        let eq1_po = exists_allocation(&inst, &[Property::Eq1, Property::PoBrute], DEFAULT_ENUM_LIMIT).unwrap();
        let witness = eq1_po.expect("EQ1+PO allocation must exist");
        assert!(properties::is_eq1(&inst, &witness).holds);
        assert!(properties::is_po_brute(&inst, &witness, DEFAULT_ENUM_LIMIT as u128).unwrap().holds);
        let eqx = exists_allocation(&inst, &[Property::Eqx], DEFAULT_ENUM_LIMIT).unwrap();
        assert_eq!(eqx, Some(fixtures::example_1_a7()));
    }

    #[test]
    fn leximin_brute_examples() {
        let ex2 = fixtures::example_2();
        let profile = leximin_brute(&ex2, DEFAULT_ENUM_LIMIT).unwrap();
        assert_eq!(profile.utilities, vec![-4, -2, -1]);

        let single = Instance::new(vec![vec![-1, -2]]).unwrap();
        assert_eq!(leximin_brute(&single, DEFAULT_ENUM_LIMIT).unwrap().utilities, vec![-3]);
    }

    #[test]
    fn size_guard_trips() {
        let inst = Instance::new(vec![vec![-1; 40]; 3]).unwrap();
        assert!(matches!(
            leximin_brute(&inst, DEFAULT_ENUM_LIMIT),
            Err(OracleError::TooLarge { .. })
        ));
    }
}
