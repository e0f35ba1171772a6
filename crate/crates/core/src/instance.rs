//! Core data model: instances, allocations, utility profiles, and the
//! leximin order on profiles.

use std::cmp::Ordering;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Exact rational scalar used for prices, MBB ratios, and LP arithmetic.
///
/// `BigRational` keeps values in lowest terms with a positive denominator,
/// which is exactly the contract the market and LP code rely on.
pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("instance must have at least one agent and one chore")]
    Empty,
    #[error("valuation matrix has {rows} rows, expected {agents}")]
    RowCountMismatch { rows: usize, agents: usize },
    #[error("row {row} has {cols} entries, expected {chores}")]
    RowLengthMismatch { row: usize, cols: usize, chores: usize },
    #[error("valuation v[{agent}][{chore}] = {value} is positive; chores must have non-positive value")]
    PositiveValuation { agent: usize, chore: usize, value: i64 },
    #[error("chore {chore} is valued 0 by every agent")]
    ZeroColumn { chore: usize },
    #[error("agent {agent} values every chore at 0")]
    ZeroRow { agent: usize },
    #[error("label list length does not match instance dimensions")]
    LabelMismatch,
}

/// Optional display names for agents and chores (1-indexed in output).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labels {
    pub agents: Vec<String>,
    pub chores: Vec<String>,
}

/// A chore division instance: `n` agents, `m` chores, additive integral
/// valuations `v[i][j] <= 0`.
///
/// Immutable after construction; cheap to clone (the matrix is shared).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    num_agents: usize,
    num_chores: usize,
    valuations: Arc<Vec<Vec<i64>>>,
    labels: Option<Arc<Labels>>,
}

impl Instance {
    /// Builds an instance, rejecting positive entries and degenerate
    /// zero rows/columns (every chore must be disliked by someone, every
    /// agent must dislike something).
    pub fn new(valuations: Vec<Vec<i64>>) -> Result<Self, InstanceError> {
        Self::build(valuations, None, false)
    }

    /// Like [`Instance::new`] but keeps zero rows/columns. Used by the
    /// zero-chore preassignment path and by tests that need degenerate
    /// shapes; positive entries are still rejected.
    pub fn new_allow_zero(valuations: Vec<Vec<i64>>) -> Result<Self, InstanceError> {
        Self::build(valuations, None, true)
    }

    pub fn with_labels(valuations: Vec<Vec<i64>>, labels: Labels) -> Result<Self, InstanceError> {
        Self::build(valuations, Some(labels), false)
    }

    /// Labeled construction without the zero row/column checks, for data
    /// imported from external sources.
    pub fn with_labels_allow_zero(
        valuations: Vec<Vec<i64>>,
        labels: Labels,
    ) -> Result<Self, InstanceError> {
        Self::build(valuations, Some(labels), true)
    }

    fn build(
        valuations: Vec<Vec<i64>>,
        labels: Option<Labels>,
        allow_zero: bool,
    ) -> Result<Self, InstanceError> {
        let n = valuations.len();
        if n == 0 {
            return Err(InstanceError::Empty);
        }
        let m = valuations[0].len();
        if m == 0 && !allow_zero {
            return Err(InstanceError::Empty);
        }
        for (i, row) in valuations.iter().enumerate() {
            if row.len() != m {
                return Err(InstanceError::RowLengthMismatch { row: i, cols: row.len(), chores: m });
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 0 {
                    return Err(InstanceError::PositiveValuation { agent: i, chore: j, value: v });
                }
            }
        }
        if !allow_zero {
            for (i, row) in valuations.iter().enumerate() {
                if row.iter().all(|&v| v == 0) {
                    return Err(InstanceError::ZeroRow { agent: i });
                }
            }
            for j in 0..m {
                if (0..n).all(|i| valuations[i][j] == 0) {
                    return Err(InstanceError::ZeroColumn { chore: j });
                }
            }
        }
        if let Some(ref l) = labels {
            if l.agents.len() != n || l.chores.len() != m {
                return Err(InstanceError::LabelMismatch);
            }
        }
        Ok(Instance {
            num_agents: n,
            num_chores: m,
            valuations: Arc::new(valuations),
            labels: labels.map(Arc::new),
        })
    }

    pub fn num_agents(&self) -> usize {
        self.num_agents
    }

    pub fn num_chores(&self) -> usize {
        self.num_chores
    }

    pub fn value(&self, agent: usize, chore: usize) -> i64 {
        self.valuations[agent][chore]
    }

    pub fn valuations(&self) -> &Vec<Vec<i64>> {
        &self.valuations
    }

    pub fn labels(&self) -> Option<&Labels> {
        self.labels.as_deref()
    }

    /// `v_i(S)` for an arbitrary set of chores.
    pub fn bundle_value(&self, agent: usize, bundle: &[usize]) -> i64 {
        bundle.iter().map(|&j| self.valuations[agent][j]).sum()
    }

    /// Most negative valuation in the instance (0 for an all-zero instance).
    pub fn min_value(&self) -> i64 {
        self.valuations.iter().flatten().copied().min().unwrap_or(0)
    }

    /// True iff all entries are strictly negative.
    pub fn strictly_negative(&self) -> bool {
        self.valuations.iter().flatten().all(|&v| v < 0)
    }

    /// True iff all entries are in {-1, 0}.
    pub fn is_binary(&self) -> bool {
        self.valuations.iter().flatten().all(|&v| v == 0 || v == -1)
    }

    /// True iff every agent assigns the same value to the grand bundle.
    pub fn is_normalized(&self) -> bool {
        let mut sums = self.valuations.iter().map(|row| row.iter().sum::<i64>());
        match sums.next() {
            Some(first) => sums.all(|s| s == first),
            None => true,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AllocationError {
    #[error("allocation has {bundles} bundles, expected {agents}")]
    BundleCountMismatch { bundles: usize, agents: usize },
    #[error("chore {chore} appears in more than one bundle")]
    DuplicateChore { chore: usize },
    #[error("chore {chore} is not assigned to any bundle")]
    UnassignedChore { chore: usize },
    #[error("chore index {chore} out of range for {chores} chores")]
    ChoreOutOfRange { chore: usize, chores: usize },
    #[error("agent index {agent} out of range for {agents} agents")]
    AgentOutOfRange { agent: usize, agents: usize },
}

/// An n-partition of the chores. Bundles may be empty; each bundle is kept
/// sorted so allocations have a canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Allocation {
    bundles: Vec<Vec<usize>>,
}

impl Allocation {
    /// Validates that `bundles` partition `{0..m-1}`.
    pub fn new(bundles: Vec<Vec<usize>>, num_agents: usize, num_chores: usize) -> Result<Self, AllocationError> {
        if bundles.len() != num_agents {
            return Err(AllocationError::BundleCountMismatch { bundles: bundles.len(), agents: num_agents });
        }
        let mut seen = vec![false; num_chores];
        for bundle in &bundles {
            for &j in bundle {
                if j >= num_chores {
                    return Err(AllocationError::ChoreOutOfRange { chore: j, chores: num_chores });
                }
                if seen[j] {
                    return Err(AllocationError::DuplicateChore { chore: j });
                }
                seen[j] = true;
            }
        }
        if let Some(j) = seen.iter().position(|&s| !s) {
            return Err(AllocationError::UnassignedChore { chore: j });
        }
        let mut bundles = bundles;
        for b in &mut bundles {
            b.sort_unstable();
        }
        Ok(Allocation { bundles })
    }

    /// Builds an allocation from an owner-per-chore vector.
    pub fn from_owners(owners: &[usize], num_agents: usize) -> Result<Self, AllocationError> {
        let mut bundles = vec![Vec::new(); num_agents];
        for (j, &i) in owners.iter().enumerate() {
            if i >= num_agents {
                return Err(AllocationError::AgentOutOfRange { agent: i, agents: num_agents });
            }
            bundles[i].push(j);
        }
        Ok(Allocation { bundles })
    }

    pub fn num_agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundle(&self, agent: usize) -> &[usize] {
        &self.bundles[agent]
    }

    pub fn bundles(&self) -> &[Vec<usize>] {
        &self.bundles
    }

    pub fn owner_of(&self, chore: usize) -> Option<usize> {
        self.bundles.iter().position(|b| b.contains(&chore))
    }
}

/// Additive utility of `agent` under `allocation`.
pub fn utility(instance: &Instance, allocation: &Allocation, agent: usize) -> i64 {
    instance.bundle_value(agent, allocation.bundle(agent))
}

/// Per-agent utilities induced by an allocation; all entries are <= 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UtilityProfile {
    pub utilities: Vec<i64>,
}

impl UtilityProfile {
    pub fn of(instance: &Instance, allocation: &Allocation) -> Self {
        let utilities = (0..instance.num_agents())
            .map(|i| utility(instance, allocation, i))
            .collect();
        UtilityProfile { utilities }
    }

    /// Utilities sorted ascending (worst-off agent first).
    pub fn sorted(&self) -> Vec<i64> {
        let mut s = self.utilities.clone();
        s.sort_unstable();
        s
    }
}

/// Compares two utility profiles in the leximin order: sort both ascending
/// and compare lexicographically. `Greater` means `a` is leximin-better.
///
/// Panics if the profiles have different lengths.
pub fn leximin_compare(a: &[i64], b: &[i64]) -> Ordering {
    assert_eq!(a.len(), b.len(), "leximin_compare: length mismatch");
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_unstable();
    sb.sort_unstable();
    sa.cmp(&sb)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FractionalError {
    #[error("fraction x[{agent}][{chore}] outside [0,1]")]
    OutOfRange { agent: usize, chore: usize },
    #[error("column {chore} sums to {sum}, expected 1")]
    ColumnSum { chore: usize, sum: String },
    #[error("empty fractional allocation")]
    Empty,
}

/// An n-by-m matrix of exact assignment fractions with unit column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalAllocation {
    x: Vec<Vec<Rational>>,
}

impl FractionalAllocation {
    pub fn new(x: Vec<Vec<Rational>>) -> Result<Self, FractionalError> {
        use num_traits::{One, Zero};
        let n = x.len();
        if n == 0 || x[0].is_empty() {
            return Err(FractionalError::Empty);
        }
        let m = x[0].len();
        for (i, row) in x.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                if f < &Rational::zero() || f > &Rational::one() {
                    return Err(FractionalError::OutOfRange { agent: i, chore: j });
                }
            }
        }
        for j in 0..m {
            let sum: Rational = x.iter().map(|row| row[j].clone()).sum();
            if !sum.is_one() {
                return Err(FractionalError::ColumnSum { chore: j, sum: sum.to_string() });
            }
        }
        Ok(FractionalAllocation { x })
    }

    pub fn num_agents(&self) -> usize {
        self.x.len()
    }

    pub fn num_chores(&self) -> usize {
        self.x[0].len()
    }

    pub fn fraction(&self, agent: usize, chore: usize) -> &Rational {
        &self.x[agent][chore]
    }

    pub fn matrix(&self) -> &Vec<Vec<Rational>> {
        &self.x
    }

    /// Exact expected utility of `agent` under the fractional assignment.
    pub fn expected_utility(&self, instance: &Instance, agent: usize) -> Rational {
        use num_traits::Zero;
        let mut total = Rational::zero();
        for j in 0..self.num_chores() {
            total += self.x[agent][j].clone() * Rational::from_integer(instance.value(agent, j).into());
        }
        total
    }
}
