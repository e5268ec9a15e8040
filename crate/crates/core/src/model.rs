//! Finite experiments, inference bases, statistics as partitions, and
//! label bijections between models.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Unvalidated experiment as it appears on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawExperiment {
    pub sample_space: Vec<String>,
    pub parameters: Vec<String>,
    pub densities: Vec<Vec<String>>,
}

/// Unvalidated inference base as it appears on disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawInferenceBase {
    pub sample_space: Vec<String>,
    pub parameters: Vec<String>,
    pub densities: Vec<Vec<String>>,
    pub data: String,
}

/// A finite statistical model: sample points, parameters, and an exact
/// density table indexed `[parameter][sample_point]`.
///
/// Construction validates that every row is a probability function, so an
/// `Experiment` value is always well formed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawExperiment", into = "RawExperiment")]
pub struct Experiment {
    sample_space: Vec<String>,
    parameters: Vec<String>,
    densities: Vec<Vec<Rational>>,
}

fn check_distinct(labels: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for label in labels {
        if !seen.insert(label.as_str()) {
            return Err(Error::DuplicateLabel(label.clone()));
        }
    }
    Ok(())
}

/// Parses and validates a raw density table.
pub fn validate_experiment(raw: RawExperiment) -> Result<Experiment> {
    let RawExperiment {
        sample_space,
        parameters,
        densities,
    } = raw;
    if densities.len() != parameters.len() || densities.iter().any(|r| r.len() != sample_space.len()) {
        return Err(Error::Shape {
            rows: densities.len(),
            cols: densities.iter().map(Vec::len).max().unwrap_or(0),
            expected_rows: parameters.len(),
            expected_cols: sample_space.len(),
        });
    }
    let mut table = Vec::with_capacity(densities.len());
    for (theta, row) in parameters.iter().zip(&densities) {
        let mut parsed = Vec::with_capacity(row.len());
        for (x, entry) in sample_space.iter().zip(row) {
            let value = entry.parse::<Rational>().map_err(|e| Error::NegativeDensity {
                parameter: theta.clone(),
                sample: x.clone(),
                detail: e.to_string(),
            })?;
            parsed.push(value);
        }
        table.push(parsed);
    }
    Experiment::new(sample_space, parameters, table)
}

impl TryFrom<RawExperiment> for Experiment {
    type Error = Error;

    fn try_from(raw: RawExperiment) -> Result<Self> {
        validate_experiment(raw)
    }
}

impl From<Experiment> for RawExperiment {
    fn from(e: Experiment) -> Self {
        RawExperiment {
            densities: e
                .densities
                .iter()
                .map(|row| row.iter().map(ToString::to_string).collect())
                .collect(),
            sample_space: e.sample_space,
            parameters: e.parameters,
        }
    }
}

impl Experiment {
    pub fn new(sample_space: Vec<String>, parameters: Vec<String>, densities: Vec<Vec<Rational>>) -> Result<Self> {
        if sample_space.is_empty() || parameters.is_empty() {
            return Err(Error::EmptySpace);
        }
        check_distinct(&sample_space)?;
        check_distinct(&parameters)?;
        if densities.len() != parameters.len() || densities.iter().any(|r| r.len() != sample_space.len()) {
            return Err(Error::Shape {
                rows: densities.len(),
                cols: densities.iter().map(Vec::len).max().unwrap_or(0),
                expected_rows: parameters.len(),
                expected_cols: sample_space.len(),
            });
        }
        for (theta, row) in parameters.iter().zip(&densities) {
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::RowSum {
                    parameter: theta.clone(),
                    sum,
                });
            }
        }
        Ok(Experiment {
            sample_space,
            parameters,
            densities,
        })
    }

    /// Builds an experiment from string literals. Mostly useful for fixtures
    /// and tests.
    pub fn from_literals(sample_space: &[&str], parameters: &[&str], rows: &[&[&str]]) -> Result<Self> {
        validate_experiment(RawExperiment {
            sample_space: sample_space.iter().map(|s| s.to_string()).collect(),
            parameters: parameters.iter().map(|s| s.to_string()).collect(),
            densities: rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect(),
        })
    }

    pub fn sample_space(&self) -> &[String] {
        &self.sample_space
    }

    pub fn parameters(&self) -> &[String] {
        &self.parameters
    }

    pub fn densities(&self) -> &[Vec<Rational>] {
        &self.densities
    }

    pub fn num_points(&self) -> usize {
        self.sample_space.len()
    }

    pub fn num_parameters(&self) -> usize {
        self.parameters.len()
    }

    pub fn density(&self, parameter: usize, point: usize) -> &Rational {
        &self.densities[parameter][point]
    }

    /// Densities of one sample point across all parameters.
    pub fn column(&self, point: usize) -> Vec<Rational> {
        self.densities.iter().map(|row| row[point].clone()).collect()
    }

    pub fn sample_position(&self, label: &str) -> Option<usize> {
        self.sample_space.iter().position(|s| s == label)
    }

    pub fn parameter_position(&self, label: &str) -> Option<usize> {
        self.parameters.iter().position(|s| s == label)
    }

    /// True when the point has zero probability under every parameter.
    pub fn is_null_point(&self, point: usize) -> bool {
        self.densities.iter().all(|row| row[point].is_zero())
    }

    /// Drops points that are impossible under every parameter and sorts the
    /// sample labels. Parameter order is left untouched.
    pub fn canonicalize(&self) -> Experiment {
        let mut keep: Vec<usize> = (0..self.num_points()).filter(|&x| !self.is_null_point(x)).collect();
        keep.sort_by(|&a, &b| self.sample_space[a].cmp(&self.sample_space[b]));
        self.select_points(&keep)
    }

    pub fn is_canonical(&self) -> bool {
        (0..self.num_points()).all(|x| !self.is_null_point(x)) && self.sample_space.windows(2).all(|w| w[0] < w[1])
    }

    // Keeps the given columns in the given order. Callers guarantee the
    // dropped columns carry no mass.
    fn select_points(&self, points: &[usize]) -> Experiment {
        Experiment {
            sample_space: points.iter().map(|&x| self.sample_space[x].clone()).collect(),
            parameters: self.parameters.clone(),
            densities: self
                .densities
                .iter()
                .map(|row| points.iter().map(|&x| row[x].clone()).collect())
                .collect(),
        }
    }

    /// Total probability of a set of points under each parameter.
    pub fn masses(&self, points: &[usize]) -> Vec<Rational> {
        self.densities
            .iter()
            .map(|row| points.iter().map(|&x| &row[x]).sum())
            .collect()
    }

    /// Renames sample points; `rename` must be injective.
    pub fn relabel_samples(&self, rename: impl Fn(&str) -> String) -> Result<Experiment> {
        Experiment::new(
            self.sample_space.iter().map(|s| rename(s)).collect(),
            self.parameters.clone(),
            self.densities.clone(),
        )
    }
}

/// An experiment together with one observed sample point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInferenceBase", into = "RawInferenceBase")]
pub struct InferenceBase {
    experiment: Experiment,
    data: String,
}

impl TryFrom<RawInferenceBase> for InferenceBase {
    type Error = Error;

    fn try_from(raw: RawInferenceBase) -> Result<Self> {
        let experiment = validate_experiment(RawExperiment {
            sample_space: raw.sample_space,
            parameters: raw.parameters,
            densities: raw.densities,
        })?;
        InferenceBase::new(experiment, raw.data)
    }
}

impl From<InferenceBase> for RawInferenceBase {
    fn from(base: InferenceBase) -> Self {
        let raw = RawExperiment::from(base.experiment);
        RawInferenceBase {
            sample_space: raw.sample_space,
            parameters: raw.parameters,
            densities: raw.densities,
            data: base.data,
        }
    }
}

impl InferenceBase {
    pub fn new(experiment: Experiment, data: impl Into<String>) -> Result<Self> {
        let data = data.into();
        let x = experiment
            .sample_position(&data)
            .ok_or_else(|| Error::UnknownDataPoint(data.clone()))?;
        if experiment.is_null_point(x) {
            return Err(Error::ImpossibleData(data));
        }
        Ok(InferenceBase { experiment, data })
    }

    pub fn experiment(&self) -> &Experiment {
        &self.experiment
    }

    pub fn data(&self) -> &str {
        &self.data
    }

    pub fn data_position(&self) -> usize {
        self.experiment
            .sample_position(&self.data)
            .expect("validated data point")
    }

    pub fn parameters(&self) -> &[String] {
        self.experiment.parameters()
    }

    /// Likelihood at the observed point, aligned with `parameters()`.
    pub fn likelihood(&self) -> Vec<Rational> {
        self.experiment.column(self.data_position())
    }

    /// Canonicalizes the experiment; the observed point always survives
    /// because it has positive probability somewhere.
    pub fn canonicalize(&self) -> InferenceBase {
        InferenceBase {
            experiment: self.experiment.canonicalize(),
            data: self.data.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("inference bases always serialize")
    }
}

/// A statistic up to relabelling: a partition of the sample space.
///
/// Cells are kept sorted and each cell's labels are sorted, so two
/// partitions are equal exactly when they induce the same grouping.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<String>>", into = "Vec<Vec<String>>")]
pub struct StatisticPartition {
    cells: Vec<Vec<String>>,
}

impl TryFrom<Vec<Vec<String>>> for StatisticPartition {
    type Error = Error;

    fn try_from(cells: Vec<Vec<String>>) -> Result<Self> {
        StatisticPartition::new(cells)
    }
}

impl From<StatisticPartition> for Vec<Vec<String>> {
    fn from(p: StatisticPartition) -> Self {
        p.cells
    }
}

impl StatisticPartition {
    /// Rejects empty cells and labels that appear twice.
    pub fn new(cells: Vec<Vec<String>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut cells: Vec<Vec<String>> = cells
            .into_iter()
            .map(|mut cell| {
                cell.sort();
                cell
            })
            .collect();
        for cell in &cells {
            if cell.is_empty() {
                return Err(Error::PartitionMismatch("empty cell".into()));
            }
            for label in cell {
                if !seen.insert(label.clone()) {
                    return Err(Error::PartitionMismatch(format!(
                        "label {label:?} appears in more than one cell"
                    )));
                }
            }
        }
        cells.sort();
        Ok(StatisticPartition { cells })
    }

    /// Groups the sample points of `e` by the value of `statistic`.
    pub fn from_statistic<K: Eq + Hash>(e: &Experiment, statistic: impl Fn(&str) -> K) -> Self {
        let mut groups: HashMap<K, Vec<String>> = HashMap::new();
        for x in e.sample_space() {
            groups.entry(statistic(x)).or_default().push(x.clone());
        }
        StatisticPartition::new(groups.into_values().collect()).expect("groups are disjoint")
    }

    pub(crate) fn from_index_cells(e: &Experiment, cells: &[Vec<usize>]) -> Self {
        let cells = cells
            .iter()
            .map(|c| c.iter().map(|&x| e.sample_space()[x].clone()).collect())
            .collect();
        StatisticPartition::new(cells).expect("index cells are disjoint")
    }

    /// The constant statistic.
    pub fn trivial(e: &Experiment) -> Self {
        StatisticPartition::new(vec![e.sample_space().to_vec()]).expect("one cell")
    }

    /// The identity statistic.
    pub fn discrete(e: &Experiment) -> Self {
        StatisticPartition::new(e.sample_space().iter().map(|x| vec![x.clone()]).collect()).expect("singletons")
    }

    pub fn cells(&self) -> &[Vec<String>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.cells.len() == 1
    }

    pub fn cell_of(&self, label: &str) -> Option<usize> {
        self.cells
            .iter()
            .position(|c| c.binary_search_by(|l| l.as_str().cmp(label)).is_ok())
    }

    /// Checks that the cells cover exactly the sample space of `e`.
    pub fn check_covers(&self, e: &Experiment) -> Result<()> {
        let labels: BTreeSet<&str> = self.cells.iter().flatten().map(String::as_str).collect();
        let space: BTreeSet<&str> = e.sample_space().iter().map(String::as_str).collect();
        if labels != space {
            let missing: Vec<_> = space.difference(&labels).collect();
            let extra: Vec<_> = labels.difference(&space).collect();
            return Err(Error::PartitionMismatch(format!(
                "missing {missing:?}, unexpected {extra:?}"
            )));
        }
        Ok(())
    }

    /// Cells as sample-point indices of `e`. Assumes `check_covers` passed.
    pub fn index_cells(&self, e: &Experiment) -> Vec<Vec<usize>> {
        self.cells
            .iter()
            .map(|c| c.iter().map(|l| e.sample_position(l).expect("covered label")).collect())
            .collect()
    }

    /// True when every cell of `self` lies inside a cell of `coarser`.
    pub fn refines(&self, coarser: &StatisticPartition) -> bool {
        self.cells.iter().all(|cell| {
            let Some(target) = coarser.cell_of(&cell[0]) else {
                return false;
            };
            cell.iter().all(|l| coarser.cell_of(l) == Some(target))
        })
    }

    /// Label used for a cell when it becomes a point of a reduced experiment.
    pub fn cell_label(cell: &[String]) -> String {
        serde_json::to_string(cell).expect("string lists serialize")
    }
}

/// A pair of label bijections, one on sample points and one on parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelBijection {
    pub sample_map: BTreeMap<String, String>,
    pub parameter_map: BTreeMap<String, String>,
}

fn invert(map: &BTreeMap<String, String>) -> BTreeMap<String, String> {
    map.iter().map(|(k, v)| (v.clone(), k.clone())).collect()
}

fn compose(first: &BTreeMap<String, String>, second: &BTreeMap<String, String>) -> Option<BTreeMap<String, String>> {
    first
        .iter()
        .map(|(k, v)| second.get(v).map(|w| (k.clone(), w.clone())))
        .collect()
}

/// True when `map` is a bijection from `domain` onto `codomain`.
pub fn is_bijection(map: &BTreeMap<String, String>, domain: &[String], codomain: &[String]) -> bool {
    if map.len() != domain.len() || domain.len() != codomain.len() {
        return false;
    }
    if !domain.iter().all(|d| map.contains_key(d)) {
        return false;
    }
    let image: BTreeSet<&String> = map.values().collect();
    image.len() == codomain.len() && codomain.iter().all(|c| image.contains(c))
}

impl ModelBijection {
    pub fn identity(e: &Experiment) -> Self {
        ModelBijection {
            sample_map: e.sample_space().iter().map(|x| (x.clone(), x.clone())).collect(),
            parameter_map: e.parameters().iter().map(|t| (t.clone(), t.clone())).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        ModelBijection {
            sample_map: invert(&self.sample_map),
            parameter_map: invert(&self.parameter_map),
        }
    }

    /// `self` followed by `next`; `None` if the codomain of `self` is not the
    /// domain of `next`.
    pub fn then(&self, next: &ModelBijection) -> Option<Self> {
        Some(ModelBijection {
            sample_map: compose(&self.sample_map, &next.sample_map)?,
            parameter_map: compose(&self.parameter_map, &next.parameter_map)?,
        })
    }

    pub fn fixes_parameters(&self) -> bool {
        self.parameter_map.iter().all(|(k, v)| k == v)
    }

    /// Checks bijectivity and exact density transport from `from` to `to`.
    pub fn transports(&self, from: &Experiment, to: &Experiment) -> bool {
        if !is_bijection(&self.sample_map, from.sample_space(), to.sample_space())
            || !is_bijection(&self.parameter_map, from.parameters(), to.parameters())
        {
            return false;
        }
        for (t, theta) in from.parameters().iter().enumerate() {
            let t2 = to.parameter_position(&self.parameter_map[theta]).expect("bijection");
            for (x, label) in from.sample_space().iter().enumerate() {
                let x2 = to.sample_position(&self.sample_map[label]).expect("bijection");
                if from.density(t, x) != to.density(t2, x2) {
                    return false;
                }
            }
        }
        true
    }
}
