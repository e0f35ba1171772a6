//! Egalitarian-equivalent randomized allocation.
//!
//! A linear program finds the fractional allocation in which every agent
//! has the same expected utility t, with t as high as possible. Peeling
//! the fractional solution yields a lottery over integral allocations
//! whose per-chore marginals match the fractional optimum exactly, so
//! each agent's expected utility under the lottery is exactly t.

mod simplex;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::instance::{Allocation, FractionalAllocation, Instance, Rational};
use simplex::SimplexError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EgalitarianError {
    #[error("the equal-utility program is infeasible")]
    Infeasible,
    #[error("the equal-utility program is unbounded")]
    Unbounded,
}

/// Maximizes t subject to every agent's fractional utility being exactly
/// t. Returns the fractional optimum and t.
pub fn solve_egalitarian_lp(
    instance: &Instance,
) -> Result<(FractionalAllocation, Rational), EgalitarianError> {
    let n = instance.num_agents();
    let m = instance.num_chores();
    if m == 0 {
        let matrix = vec![Vec::new(); n];
        return Ok((FractionalAllocation::new(matrix).unwrap(), Rational::zero()));
    }
    // Variables: x[i][j] at column i*m + j, then s = -t. Utilities are
    // never positive, so maximizing t is minimizing s >= 0.
    let cols = n * m + 1;
    let mut a = Vec::with_capacity(n + m);
    let mut b = Vec::with_capacity(n + m);
    for i in 0..n {
        let mut row = vec![Rational::zero(); cols];
        for j in 0..m {
            row[i * m + j] = Rational::from_integer(instance.value(i, j).into());
        }
        row[n * m] = Rational::one();
        a.push(row);
        b.push(Rational::zero());
    }
    for j in 0..m {
        let mut row = vec![Rational::zero(); cols];
        for i in 0..n {
            row[i * m + j] = Rational::one();
        }
        a.push(row);
        b.push(Rational::one());
    }
    let mut c = vec![Rational::zero(); cols];
    c[n * m] = Rational::one();

    let (objective, solution) = simplex::solve_min(&a, &b, &c).map_err(|e| match e {
        SimplexError::Infeasible => EgalitarianError::Infeasible,
        SimplexError::Unbounded => EgalitarianError::Unbounded,
    })?;
    let matrix: Vec<Vec<Rational>> =
        (0..n).map(|i| solution[i * m..(i + 1) * m].to_vec()).collect();
    let fractional = FractionalAllocation::new(matrix).expect("simplex respects the constraints");
    Ok((fractional, -objective))
}

/// A probability distribution over integral allocations.
#[derive(Debug, Clone)]
pub struct Lottery {
    pub outcomes: Vec<(Rational, Allocation)>,
}

impl Lottery {
    /// Exact per-chore probability that `agent` receives `chore`.
    pub fn marginal(&self, agent: usize, chore: usize) -> Rational {
        self.outcomes
            .iter()
            .filter(|(_, alloc)| alloc.owner_of(chore) == Some(agent))
            .map(|(w, _)| w.clone())
            .sum()
    }

    /// Exact expected utility of an agent under the lottery.
    pub fn expected_utility(&self, instance: &Instance, agent: usize) -> Rational {
        self.outcomes
            .iter()
            .map(|(w, alloc)| {
                w * Rational::from_integer(instance.bundle_value(agent, alloc.bundle(agent)).into())
            })
            .sum()
    }

    /// Draws one outcome with the exact lottery probabilities, using a
    /// seeded deterministic generator.
    pub fn sample(&self, seed: u64) -> &Allocation {
        let denom = self
            .outcomes
            .iter()
            .fold(num_bigint::BigInt::one(), |acc, (w, _)| acc.lcm(w.denom()));
        let scaled: Vec<BigUint> = self
            .outcomes
            .iter()
            .map(|(w, _)| {
                let scaled = w * Rational::from_integer(denom.clone());
                scaled.to_integer().to_biguint().expect("non-negative weight")
            })
            .collect();
        let total: BigUint = scaled.iter().sum();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = rng.gen_biguint_below(&total);
        for ((_, alloc), width) in self.outcomes.iter().zip(&scaled) {
            if draw < *width {
                return alloc;
            }
            draw -= width;
        }
        unreachable!("draw is below the total weight")
    }
}

/// Peels a fractional allocation into a lottery with matching marginals:
/// repeatedly take, for each chore, the lowest-index agent still holding
/// a positive fraction of it, and assign that integral allocation the
/// largest weight the fractions allow. Each round zeroes at least one
/// entry, so there are at most (agents x chores) outcomes.
pub fn decompose(fractional: &FractionalAllocation) -> Lottery {
    let n = fractional.num_agents();
    let m = fractional.num_chores();
    let mut remaining: Vec<Vec<Rational>> = fractional.matrix().clone();
    let mut budget = Rational::one();
    let mut outcomes = Vec::new();
    while budget.is_positive() {
        let owners: Vec<usize> = (0..m)
            .map(|j| {
                (0..n)
                    .find(|&i| remaining[i][j].is_positive())
                    .expect("column fractions sum to the remaining budget")
            })
            .collect();
        let weight = owners
            .iter()
            .enumerate()
            .map(|(j, &i)| remaining[i][j].clone())
            .min()
            .unwrap_or_else(|| budget.clone());
        for (j, &i) in owners.iter().enumerate() {
            remaining[i][j] -= &weight;
        }
        budget -= &weight;
        outcomes.push((weight, Allocation::from_owners(&owners, n).unwrap()));
    }
    Lottery { outcomes }
}
