//! Exhaustive search for experiments with several maximal ancillaries.
//!
//! Density tables with entries in `{0, 1/d, …, d/d}` are enumerated row by
//! row. Rows are taken in nondecreasing order because permuting parameters
//! gives an isomorphic experiment. Each table is screened with integer
//! arithmetic; survivors are converted to exact experiments and compared
//! against earlier finds to drop isomorphic duplicates.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::ancillarity::ConstantMassSubsets;
use crate::error::{Error, Result};
use crate::isomorphism::{experiments_isomorphic, isomorphism_invariant};
use crate::model::{Experiment, StatisticPartition};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub x_size: usize,
    pub theta_size: usize,
    pub denominator: u32,
    pub limit: Option<usize>,
    /// Lifts the default bounds (`x_size ≤ 6`, `theta_size ≤ 3`,
    /// `denominator ≤ 24`). The hard limit `x_size ≤ 12` still applies.
    pub allow_large: bool,
}

impl SearchConfig {
    pub fn new(x_size: usize, theta_size: usize, denominator: u32) -> Self {
        SearchConfig {
            x_size,
            theta_size,
            denominator,
            limit: None,
            allow_large: false,
        }
    }

    fn check(&self) -> Result<()> {
        if self.x_size == 0 || self.theta_size == 0 || self.denominator == 0 {
            return Err(Error::SearchBounds("sizes and denominator must be positive".into()));
        }
        if self.x_size > 12 {
            return Err(Error::SearchBounds(format!("x_size {} exceeds 12", self.x_size)));
        }
        if !self.allow_large && (self.x_size > 6 || self.theta_size > 3 || self.denominator > 24) {
            return Err(Error::SearchBounds(format!(
                "x_size={} theta_size={} denominator={} exceeds the default bounds 6/3/24; enable allow_large (--allow-large) to continue",
                self.x_size, self.theta_size, self.denominator
            )));
        }
        Ok(())
    }
}

/// An experiment found by the search, with its maximal ancillaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalHit {
    pub experiment: Experiment,
    pub maximal: Vec<StatisticPartition>,
}

// Compositions of `total` into `parts` nonnegative integers, lexicographic.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            go(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, &mut Vec::new(), &mut out);
    out
}

// Nondecreasing index tuples of length `len` over `0..n` whose first entry
// is `first`.
fn tuples_from(first: usize, n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![first]];
    for _ in 1..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                let last = *t.last().expect("nonempty");
                (last..n).map(move |j| {
                    let mut t = t.clone();
                    t.push(j);
                    t
                })
            })
            .collect();
    }
    out
}

// A table that passed the integer screen.
struct Screened {
    // Rows restricted to the columns that carry mass.
    table: Vec<Vec<u32>>,
    // Original positions of those columns.
    live: Vec<usize>,
    // Maximal partitions as bit masks over the live columns.
    maximal: Vec<Vec<u32>>,
}

// Keeps tables with at least two maximal partitions.
fn screen(rows: &[&Vec<u32>]) -> Option<Screened> {
    let width = rows[0].len();
    let live: Vec<usize> = (0..width).filter(|&x| rows.iter().any(|r| r[x] != 0)).collect();
    let table: Vec<Vec<u32>> = rows.iter().map(|r| live.iter().map(|&x| r[x]).collect()).collect();
    let lattice = ConstantMassSubsets::from_integer_rows(&table);
    let maximal: Vec<Vec<u32>> = lattice
        .partitions()
        .into_iter()
        .filter(|p| lattice.is_maximal(p))
        .collect();
    (maximal.len() >= 2).then_some(Screened { table, live, maximal })
}

fn to_hit(Screened { table, live, maximal }: Screened, d: u32) -> MaximalHit {
    let labels: Vec<String> = live.iter().map(|x| format!("x{}", x + 1)).collect();
    let params: Vec<String> = (1..=table.len()).map(|t| t.to_string()).collect();
    let densities = table
        .iter()
        .map(|r| r.iter().map(|&k| Rational::new(k as u64, d as u64)).collect())
        .collect();
    let raw = Experiment::new(labels, params, densities).expect("rows sum to d");
    let maximal = maximal
        .iter()
        .map(|cells| {
            let cells: Vec<Vec<usize>> = cells
                .iter()
                .map(|&m| (0..live.len()).filter(|i| m & (1 << i) != 0).collect())
                .collect();
            StatisticPartition::from_index_cells(&raw, &cells)
        })
        .collect();
    MaximalHit {
        experiment: raw.canonicalize(),
        maximal,
    }
}

/// Streams each new (non-isomorphic) hit to `sink` in enumeration order.
/// Returns the number of hits emitted.
pub fn search_maximal_with(config: &SearchConfig, mut sink: impl FnMut(&MaximalHit)) -> Result<usize> {
    config.check()?;
    let limit = config.limit.unwrap_or(usize::MAX);
    if config.theta_size < 2 || limit == 0 {
        return Ok(0);
    }
    let rows = compositions(config.denominator, config.x_size);
    let mut seen: HashMap<Vec<Vec<Rational>>, Vec<Experiment>> = HashMap::new();
    let mut emitted = 0;
    for first in 0..rows.len() {
        let hits: Vec<MaximalHit> = tuples_from(first, rows.len(), config.theta_size)
            .par_iter()
            .filter_map(|t| {
                let chosen: Vec<&Vec<u32>> = t.iter().map(|&i| &rows[i]).collect();
                screen(&chosen).map(|s| to_hit(s, config.denominator))
            })
            .collect();
        for hit in hits {
            let bucket = seen.entry(isomorphism_invariant(&hit.experiment)).or_default();
            if bucket
                .iter()
                .any(|e| experiments_isomorphic(e, &hit.experiment, false).is_ok())
            {
                continue;
            }
            bucket.push(hit.experiment.clone());
            sink(&hit);
            emitted += 1;
            if emitted >= limit {
                return Ok(emitted);
            }
        }
    }
    Ok(emitted)
}

pub fn search_maximal(config: &SearchConfig) -> Result<Vec<MaximalHit>> {
    let mut out = Vec::new();
    search_maximal_with(config, |h| out.push(h.clone()))?;
    Ok(out)
}
