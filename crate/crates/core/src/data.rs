//! Instance serialization, synthetic instance generation, and import of
//! crowd-sourced chore division data.
//!
//! The JSON format is canonical: fields in alphabetical order, compact
//! whitespace, so that byte equality of files means equality of
//! instances. Chores may carry a copy count; copies are expanded into
//! separate chores at parse time.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::instance::{Instance, InstanceError, Labels};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("declared {declared} agents but found {found} valuation rows")]
    AgentCount { declared: usize, found: usize },
    #[error("declared {declared} chores but row {row} has {found} values")]
    ChoreCount { declared: usize, row: usize, found: usize },
    #[error("copies list has {found} entries for {chores} chores")]
    CopiesLength { chores: usize, found: usize },
    #[error("chore {chore} has zero copies")]
    ZeroCopies { chore: usize },
    #[error("invalid instance: {0}")]
    Invalid(#[from] InstanceError),
    #[error("invalid generator parameters: {0}")]
    BadParams(String),
    #[error("line {line}: {reason}")]
    Csv { line: usize, reason: String },
    #[error("agent {agent} has no positive multiplier")]
    EmptyAgent { agent: u64 },
    #[error("chore {chore} declared with {copies} copies, above the limit of 1000")]
    TooManyCopies { chore: u64, copies: u64 },
    #[error("instance has {chores} chores after expansion, fewer than its {agents} agents")]
    TooFewChores { chores: usize, agents: usize },
    #[error("duplicate entry for agent {agent}, chore {chore}")]
    DuplicateEntry { agent: u64, chore: u64 },
}

/// On-disk instance representation. Field order is the canonical output
/// order.
#[derive(Debug, Serialize, Deserialize)]
struct InstanceFile {
    agents: usize,
    chores: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    copies: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Labels>,
    valuations: Vec<Vec<i64>>,
}

/// Parses the canonical JSON format, expanding chore copies.
pub fn parse_instance(text: &str) -> Result<Instance, DataError> {
    let file: InstanceFile = serde_json::from_str(text)?;
    if file.valuations.len() != file.agents {
        return Err(DataError::AgentCount { declared: file.agents, found: file.valuations.len() });
    }
    for (row, values) in file.valuations.iter().enumerate() {
        if values.len() != file.chores {
            return Err(DataError::ChoreCount {
                declared: file.chores,
                row,
                found: values.len(),
            });
        }
    }
    let copies = match &file.copies {
        Some(c) => {
            if c.len() != file.chores {
                return Err(DataError::CopiesLength { chores: file.chores, found: c.len() });
            }
            if let Some(j) = c.iter().position(|&k| k == 0) {
                return Err(DataError::ZeroCopies { chore: j });
            }
            c.clone()
        }
        None => vec![1; file.chores],
    };
    let expand = |row: &Vec<i64>| -> Vec<i64> {
        row.iter()
            .zip(&copies)
            .flat_map(|(&v, &k)| std::iter::repeat(v).take(k as usize))
            .collect()
    };
    let valuations: Vec<Vec<i64>> = file.valuations.iter().map(expand).collect();
    let instance = match file.labels {
        Some(labels) => {
            let chores = labels
                .chores
                .iter()
                .zip(&copies)
                .flat_map(|(name, &k)| {
                    (1..=k).map(move |c| {
                        if k == 1 {
                            name.clone()
                        } else {
                            format!("{name}#{c}")
                        }
                    })
                })
                .collect();
            Instance::with_labels_allow_zero(
                valuations,
                Labels { agents: labels.agents, chores },
            )?
        }
        None => Instance::new_allow_zero(valuations)?,
    };
    Ok(instance)
}

/// Serializes an instance in the canonical compact form. Copies are
/// already expanded, so none are emitted.
pub fn serialize_instance(instance: &Instance) -> String {
    let file = InstanceFile {
        agents: instance.num_agents(),
        chores: instance.num_chores(),
        copies: None,
        labels: instance.labels().cloned(),
        valuations: instance.valuations().clone(),
    };
    serde_json::to_string(&file).expect("instance serialization cannot fail")
}

/// Parameters for the synthetic generator.
#[derive(Debug, Clone)]
pub struct SynthParams {
    pub num_agents: usize,
    pub num_chores: usize,
    /// Total disutility per agent; every row sums to exactly -budget.
    pub budget: u64,
    /// Gamma shape controlling how even the per-chore split is; larger
    /// values give more uniform chore weights.
    pub concentration: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams { num_agents: 5, num_chores: 20, budget: 1000, concentration: 10.0 }
    }
}

/// Generates a normalized instance: each agent's magnitudes are a random
/// proportional split of the budget, rounded to integers of at least one.
pub fn gen_synthetic(params: &SynthParams, seed: u64) -> Result<Instance, DataError> {
    let n = params.num_agents;
    let m = params.num_chores;
    if n == 0 || m == 0 {
        return Err(DataError::BadParams("need at least one agent and one chore".into()));
    }
    if (m as u64) > params.budget {
        return Err(DataError::BadParams(format!(
            "budget {} cannot cover {m} chores at one unit each",
            params.budget
        )));
    }
    if !(params.concentration.is_finite() && params.concentration > 0.0) {
        return Err(DataError::BadParams("concentration must be positive".into()));
    }
    let gamma = Gamma::new(params.concentration, 1.0)
        .map_err(|e| DataError::BadParams(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut valuations = Vec::with_capacity(n);
    for _ in 0..n {
        let draws: Vec<f64> = (0..m).map(|_| gamma.sample(&mut rng).max(f64::MIN_POSITIVE)).collect();
        let total: f64 = draws.iter().sum();
        let mut magnitudes: Vec<u64> = draws
            .iter()
            .map(|d| ((d / total) * params.budget as f64).ceil().max(1.0) as u64)
            .collect();
        // Ceiling overshoots the budget; walk it back one unit at a time
        // on randomly chosen chores, never below one.
        let mut excess = magnitudes.iter().sum::<u64>() as i64 - params.budget as i64;
        while excess > 0 {
            let j = rng.gen_range(0..m);
            if magnitudes[j] > 1 {
                magnitudes[j] -= 1;
                excess -= 1;
            }
        }
        valuations.push(magnitudes.into_iter().map(|u| -(u as i64)).collect());
    }
    Ok(Instance::new(valuations)?)
}

/// Derives a stream of independent seeds from a master seed
/// (splitmix-style mixing).
pub fn child_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(index.wrapping_mul(0x9e3779b97f4a7c15))
        .wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// One survey row: how strongly an agent wants to avoid a chore,
/// relative to that agent's other multipliers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplidditRecord {
    pub agent: u64,
    pub chore: u64,
    pub copies: u64,
    pub multiplier: u64,
}

/// Parses the survey CSV: a header line, then
/// `agent_id,chore_id,copies,multiplier` rows.
pub fn parse_spliddit_csv(text: &str) -> Result<Vec<SplidditRecord>, DataError> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(DataError::Csv { line: 1, reason: "empty input".into() });
    };
    if header.trim() != "agent_id,chore_id,copies,multiplier" {
        return Err(DataError::Csv { line: 1, reason: format!("unexpected header: {header}") });
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(DataError::Csv {
                line: idx + 1,
                reason: format!("expected 4 fields, found {}", fields.len()),
            });
        }
        let parse = |s: &str| -> Result<u64, DataError> {
            s.trim().parse().map_err(|_| DataError::Csv {
                line: idx + 1,
                reason: format!("not a non-negative integer: {s}"),
            })
        };
        records.push(SplidditRecord {
            agent: parse(fields[0])?,
            chore: parse(fields[1])?,
            copies: parse(fields[2])?,
            multiplier: parse(fields[3])?,
        });
    }
    Ok(records)
}

/// Builds an instance from survey records. Each agent's per-copy value
/// for a chore is -100 * multiplier / (sum over copies of multipliers),
/// rounded away from zero, so every agent's magnitudes total roughly 100.
/// Degenerate inputs are rejected: a chore with more than 1000 copies, or
/// fewer expanded chores than agents.
pub fn ingest_spliddit(records: &[SplidditRecord]) -> Result<Instance, DataError> {
    let mut agents: Vec<u64> = records.iter().map(|r| r.agent).collect();
    agents.sort_unstable();
    agents.dedup();
    let mut chores: Vec<u64> = records.iter().map(|r| r.chore).collect();
    chores.sort_unstable();
    chores.dedup();
    let n = agents.len();
    let base = chores.len();
    if n == 0 || base == 0 {
        return Err(DataError::Csv { line: 0, reason: "no records".into() });
    }

    let agent_index = |id: u64| agents.binary_search(&id).unwrap();
    let chore_index = |id: u64| chores.binary_search(&id).unwrap();

    let mut copies = vec![0u64; base];
    let mut multipliers = vec![vec![None::<u64>; base]; n];
    for r in records {
        let c = chore_index(r.chore);
        if copies[c] == 0 {
            copies[c] = r.copies;
        } else if copies[c] != r.copies {
            return Err(DataError::Csv {
                line: 0,
                reason: format!("chore {} declared with conflicting copy counts", r.chore),
            });
        }
        if copies[c] == 0 {
            return Err(DataError::Csv {
                line: 0,
                reason: format!("chore {} has zero copies", r.chore),
            });
        }
        if copies[c] > 1000 {
            return Err(DataError::TooManyCopies { chore: r.chore, copies: copies[c] });
        }
        let slot = &mut multipliers[agent_index(r.agent)][c];
        if slot.is_some() {
            return Err(DataError::DuplicateEntry { agent: r.agent, chore: r.chore });
        }
        *slot = Some(r.multiplier);
    }
    let expanded: usize = copies.iter().map(|&k| k as usize).sum();
    if expanded < n {
        return Err(DataError::TooFewChores { chores: expanded, agents: n });
    }

    let mut valuations = Vec::with_capacity(n);
    for (i, row) in multipliers.iter().enumerate() {
        let total: u64 = row
            .iter()
            .zip(&copies)
            .map(|(mult, &k)| mult.unwrap_or(0) * k)
            .sum();
        if total == 0 {
            return Err(DataError::EmptyAgent { agent: agents[i] });
        }
        let mut values = Vec::with_capacity(expanded);
        for (mult, &k) in row.iter().zip(&copies) {
            let mult = mult.unwrap_or(0);
            // Round the magnitude up (away from zero for a negative
            // value).
            let magnitude = Integer::div_ceil(&(100 * mult), &total) as i64;
            for _ in 0..k {
                values.push(-magnitude);
            }
        }
        valuations.push(values);
    }
    let labels = Labels {
        agents: agents.iter().map(|id| format!("agent {id}")).collect(),
        chores: chores
            .iter()
            .zip(&copies)
            .flat_map(|(id, &k)| {
                (1..=k).map(move |c| {
                    if k == 1 {
                        format!("chore {id}")
                    } else {
                        format!("chore {id}#{c}")
                    }
                })
            })
            .collect(),
    };
    Ok(Instance::with_labels_allow_zero(valuations, labels)?)
}
