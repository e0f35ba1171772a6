//! Small hand-built instances used throughout the test suite and docs.
//!
//! Each fixture pins down a scenario with a known ground truth: existence
//! counterexamples, a leximin allocation that fails the one-chore
//! equitability relaxations, and instances exercising zero-valued chores.

use crate::instance::{Allocation, Instance};

/// Two agents, three chores. No allocation is both EQX and Pareto optimal.
pub fn example_1() -> Instance {
    Instance::new(vec![
        vec![-2, -50, -50],
        vec![-97, -4, -1],
    ])
    .unwrap()
}

/// The unique EQX allocation of [`example_1`]: agent 0 takes the last two
/// chores, agent 1 the first. It is Pareto dominated by [`example_1_a3`].
pub fn example_1_a7() -> Allocation {
    Allocation::new(vec![vec![1, 2], vec![0]], 2, 3).unwrap()
}

/// The allocation of [`example_1`] that dominates [`example_1_a7`].
pub fn example_1_a3() -> Allocation {
    Allocation::new(vec![vec![0], vec![1, 2]], 2, 3).unwrap()
}

/// Three agents, four chores. The leximin allocation here fails both EQ1
/// and EF1.
pub fn example_2() -> Instance {
    Instance::new(vec![
        vec![-1, -5, -5, -5],
        vec![-1, -2, -2, -11],
        vec![-6, -5, -3, -2],
    ])
    .unwrap()
}

/// The leximin-optimal allocation of [`example_2`], with utility profile
/// (-1, -4, -2).
pub fn example_2_leximin_allocation() -> Allocation {
    Allocation::new(vec![vec![0], vec![1, 2], vec![3]], 3, 4).unwrap()
}

/// Four agents, eight chores. No allocation is simultaneously EQ1, EF1,
/// and Pareto optimal.
pub fn prop4_instance() -> Instance {
    Instance::new(vec![
        vec![-10; 8],
        vec![-10; 8],
        vec![-73, -1, -1, -1, -1, -1, -1, -1],
        vec![-73, -1, -1, -1, -1, -1, -1, -1],
    ])
    .unwrap()
}

/// Three agents, three chores. The egalitarian-equivalent fractional
/// solution splits the first chore between agents 0 and 1 and gives both
/// small chores to agent 2; every integral rounding of it violates EQ1.
pub fn footnote_instance() -> Instance {
    let x = -100;
    Instance::new(vec![
        vec![-4, x, x],
        vec![-4, x, x],
        vec![x, -1, -1],
    ])
    .unwrap()
}

/// A partition-style instance (three main agents plus a dummy) together
/// with an allocation giving every agent utility -7. The allocation is
/// equitable and envy-free.
pub fn partition_witness() -> (Instance, Allocation) {
    // Main agents value the nine "number" chores at -2 each, their own
    // signature chore at -1, everything else at -21. The dummy agent
    // values the two dummy chores at -1 and -6, everything else at -8.
    // All rows sum to -103.
    let l = -21;
    let lp = -8;
    let mut rows = Vec::new();
    for i in 0..3usize {
        let mut row = vec![-2i64; 9];
        for s in 0..3 {
            row.push(if s == i { -1 } else { l });
        }
        row.push(l);
        row.push(l);
        rows.push(row);
    }
    let mut dummy = vec![lp; 12];
    dummy.push(-1);
    dummy.push(-6);
    rows.push(dummy);
    let instance = Instance::new(rows).unwrap();
    let allocation = Allocation::new(
        vec![
            vec![0, 1, 2, 9],
            vec![3, 4, 5, 10],
            vec![6, 7, 8, 11],
            vec![12, 13],
        ],
        4,
        14,
    )
    .unwrap();
    (instance, allocation)
}

/// Two agents, two chores, one of them zero-valued for agent 0. With both
/// chores given to agent 0, the allocation is EQX but not EQX0.
pub fn zero_chore_gap() -> (Instance, Allocation) {
    let instance = Instance::new(vec![vec![0, -1], vec![-1, -2]]).unwrap();
    let allocation = Allocation::new(vec![vec![0, 1], vec![]], 2, 2).unwrap();
    (instance, allocation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{utility, UtilityProfile};

    #[test]
    fn fixtures_are_normalized_where_expected() {
        assert!(example_1().is_normalized());
        assert!(example_2().is_normalized());
        assert!(prop4_instance().is_normalized());
        let (inst, _) = partition_witness();
        assert!(inst.is_normalized());
    }

    #[test]
    fn partition_witness_profile_is_flat() {
        let (inst, alloc) = partition_witness();
        let profile = UtilityProfile::of(&inst, &alloc);
        assert_eq!(profile.utilities, vec![-7, -7, -7, -7]);
    }

    #[test]
    fn example_1_a7_dominated_by_a3() {
        let inst = example_1();
        let a7 = example_1_a7();
        let a3 = example_1_a3();
        assert_eq!(utility(&inst, &a7, 0), -100);
        assert_eq!(utility(&inst, &a7, 1), -97);
        assert_eq!(utility(&inst, &a3, 0), -2);
        assert_eq!(utility(&inst, &a3, 1), -5);
    }
}
