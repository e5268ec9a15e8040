//! Seeded generators for random inference bases and related pairs.
//!
//! All entries are exact multiples of `1/denominator` unless a
//! transformation (splitting a point, mixing) introduces new factors.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{Experiment, InferenceBase};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusConfig {
    pub min_points: usize,
    pub max_points: usize,
    pub max_parameters: usize,
    pub denominator: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            min_points: 2,
            max_points: 5,
            max_parameters: 3,
            denominator: 60,
        }
    }
}

/// Sign of `log c` for a generated likelihood pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantCase {
    Above,
    Below,
    Equal,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn parameter_labels(count: usize) -> Vec<String> {
    (1..=count).map(|i| format!("t{i}")).collect()
}

// Uniform composition of `total` into `parts` nonnegative integers.
fn composition(rng: &mut impl Rng, total: u64, parts: usize) -> Vec<u64> {
    let mut cuts: Vec<u64> = (0..parts - 1).map(|_| rng.gen_range(0..=total)).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(total - prev);
    out
}

// Experiment whose point `data` has numerators `column`, with the rest of
// each row spread at random over the other points.
fn experiment_with_column(
    rng: &mut impl Rng,
    prefix: &str,
    points: usize,
    data: usize,
    parameters: &[String],
    column: &[u64],
    denominator: u64,
) -> Experiment {
    let labels: Vec<String> = (0..points).map(|i| format!("{prefix}{i}")).collect();
    let densities = column
        .iter()
        .map(|&k| {
            let rest = composition(rng, denominator - k, points - 1);
            let mut row = Vec::with_capacity(points);
            let mut others = rest.into_iter();
            for x in 0..points {
                let numerator = if x == data {
                    k
                } else {
                    others.next().expect("points - 1 parts")
                };
                row.push(Rational::new(numerator, denominator));
            }
            row
        })
        .collect();
    Experiment::new(labels, parameters.to_vec(), densities).expect("rows sum to the denominator")
}

/// A likelihood-related pair with the requested sign of `log c`.
///
/// The observed columns are `k·u/d` and `m·u/d` for a shared positive
/// integer vector `u`, so `c = k/m`.
pub fn likelihood_pair(
    rng: &mut impl Rng,
    config: &CorpusConfig,
    case: ConstantCase,
) -> (InferenceBase, InferenceBase) {
    let d = config.denominator;
    let params = parameter_labels(rng.gen_range(1..=config.max_parameters));
    let top = (d / 6).clamp(1, 10);
    let u: Vec<u64> = params.iter().map(|_| rng.gen_range(1..=top)).collect();
    let umax = *u.iter().max().expect("at least one parameter");
    let scale_max = (d / umax).max(1);
    let (k, m) = loop {
        let k = rng.gen_range(1..=scale_max);
        let m = rng.gen_range(1..=scale_max);
        let fits = match case {
            ConstantCase::Above => k > m,
            ConstantCase::Below => k < m,
            ConstantCase::Equal => k == m,
        };
        if fits || scale_max == 1 {
            break (k, m);
        }
    };
    let n1 = rng.gen_range(config.min_points..=config.max_points);
    let n2 = rng.gen_range(config.min_points..=config.max_points);
    let x1 = rng.gen_range(0..n1);
    let x2 = rng.gen_range(0..n2);
    let col1: Vec<u64> = u.iter().map(|v| k * v).collect();
    let col2: Vec<u64> = u.iter().map(|v| m * v).collect();
    let e1 = experiment_with_column(rng, "a", n1, x1, &params, &col1, d);
    let e2 = experiment_with_column(rng, "b", n2, x2, &params, &col2, d);
    (
        InferenceBase::new(e1, format!("a{x1}")).expect("positive column"),
        InferenceBase::new(e2, format!("b{x2}")).expect("positive column"),
    )
}

/// `count` likelihood-related pairs cycling through `c > 1`, `c < 1`, `c = 1`.
pub fn likelihood_corpus(seed: u64, count: usize, config: &CorpusConfig) -> Vec<(InferenceBase, InferenceBase)> {
    let mut rng = rng(seed);
    let cases = [ConstantCase::Above, ConstantCase::Below, ConstantCase::Equal];
    (0..count)
        .map(|i| likelihood_pair(&mut rng, config, cases[i % 3]))
        .collect()
}

/// A random experiment over the given parameters.
pub fn random_experiment(rng: &mut impl Rng, config: &CorpusConfig, parameters: &[String]) -> Experiment {
    let d = config.denominator;
    let n = rng.gen_range(config.min_points..=config.max_points);
    let labels: Vec<String> = (0..n).map(|i| format!("r{i}")).collect();
    let densities: Vec<Vec<Rational>> = parameters
        .iter()
        .map(|_| {
            composition(rng, d, n)
                .into_iter()
                .map(|k| Rational::new(k, d))
                .collect()
        })
        .collect();
    Experiment::new(labels, parameters.to_vec(), densities).expect("compositions sum to d")
}

/// A random base over `parameters` parameters; the observed point is drawn
/// among possible points.
pub fn random_base(rng: &mut impl Rng, config: &CorpusConfig, parameters: usize) -> InferenceBase {
    let e = random_experiment(rng, config, &parameter_labels(parameters));
    let possible: Vec<usize> = (0..e.num_points()).filter(|&x| !e.is_null_point(x)).collect();
    let x = *possible.choose(rng).expect("rows have mass");
    let data = e.sample_space()[x].clone();
    InferenceBase::new(e, data).expect("possible point")
}

/// Splits one point into two pieces in a fixed ratio. The result is
/// sufficiency-related to the input: merging the pieces recovers it.
pub fn split_point(rng: &mut impl Rng, base: &InferenceBase) -> InferenceBase {
    let e = base.experiment();
    let target = rng.gen_range(0..e.num_points());
    let den = rng.gen_range(2..=5u64);
    let num = rng.gen_range(1..den);
    let share = Rational::new(num, den);
    let rest = Rational::new(den - num, den);
    let mut labels = Vec::new();
    let mut densities: Vec<Vec<Rational>> = vec![Vec::new(); e.num_parameters()];
    for (x, label) in e.sample_space().iter().enumerate() {
        if x == target {
            labels.push(format!("{label}.1"));
            labels.push(format!("{label}.2"));
        } else {
            labels.push(label.clone());
        }
        for (t, row) in densities.iter_mut().enumerate() {
            let f = e.density(t, x);
            if x == target {
                row.push(f * &share);
                row.push(f * &rest);
            } else {
                row.push(f.clone());
            }
        }
    }
    let split = Experiment::new(labels, e.parameters().to_vec(), densities).expect("split preserves mass");
    let data = if base.data_position() == target {
        format!("{}.{}", base.data(), rng.gen_range(1..=2))
    } else {
        base.data().to_string()
    };
    InferenceBase::new(split, data).expect("data keeps positive mass")
}

/// Renames and reorders sample points and, optionally, parameters.
/// The result is invariance-related to the input.
pub fn relabel(rng: &mut impl Rng, base: &InferenceBase, tag: &str, rename_parameters: bool) -> InferenceBase {
    let e = base.experiment();
    let mut points: Vec<usize> = (0..e.num_points()).collect();
    points.shuffle(rng);
    let mut params: Vec<usize> = (0..e.num_parameters()).collect();
    if rename_parameters {
        params.shuffle(rng);
    }
    let sample_name = |x: usize| format!("{tag}{}", e.sample_space()[x]);
    let param_name = |t: usize| {
        if rename_parameters {
            format!("{tag}{}", e.parameters()[t])
        } else {
            e.parameters()[t].clone()
        }
    };
    let densities = params
        .iter()
        .map(|&t| points.iter().map(|&x| e.density(t, x).clone()).collect())
        .collect();
    let relabelled = Experiment::new(
        points.iter().map(|&x| sample_name(x)).collect(),
        params.iter().map(|&t| param_name(t)).collect(),
        densities,
    )
    .expect("permutation keeps rows normalized");
    InferenceBase::new(relabelled, sample_name(base.data_position())).expect("data survives")
}

/// Mixture with weight `w` on `first` and `1 − w` on `second`; the
/// component is ancillary, so the mixture observed at `A:x` is
/// conditionality-related to `first`.
pub fn ancillary_mixture(first: &InferenceBase, second: &Experiment, w: &Rational) -> InferenceBase {
    let e1 = first.experiment();
    let rest = Rational::one().checked_sub(w).expect("w ≤ 1");
    let mut labels: Vec<String> = e1.sample_space().iter().map(|x| format!("A:{x}")).collect();
    labels.extend(second.sample_space().iter().map(|x| format!("B:{x}")));
    let densities = e1
        .densities()
        .iter()
        .zip(second.densities())
        .map(|(r1, r2)| r1.iter().map(|f| f * w).chain(r2.iter().map(|f| f * &rest)).collect())
        .collect();
    let mixed = Experiment::new(labels, e1.parameters().to_vec(), densities).expect("weights sum to one");
    InferenceBase::new(mixed, format!("A:{}", first.data())).expect("positive weight")
}
