//! Decision procedures for the likelihood, sufficiency and invariance
//! relations, with the minimal sufficient reduction they rely on.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isomorphism::find_isomorphism;
use crate::model::{Experiment, InferenceBase, ModelBijection, StatisticPartition};
use crate::rational::Rational;

/// Why two inference bases were found unrelated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unrelated {
    ParameterMismatch,
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    NotProportional,
    ReducedSizeMismatch {
        left: usize,
        right: usize,
    },
    NoBijection,
    NoConditioning,
}

impl fmt::Display for Unrelated {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unrelated::ParameterMismatch => write!(f, "ParameterMismatch: parameter lists differ"),
            Unrelated::DimensionMismatch { left, right } => write!(
                f,
                "DimensionMismatch: {}x{} table vs {}x{} table",
                left.0, left.1, right.0, right.1
            ),
            Unrelated::NotProportional => write!(f, "NotProportional: likelihoods are not proportional"),
            Unrelated::ReducedSizeMismatch { left, right } => write!(
                f,
                "ReducedSizeMismatch: minimal sufficient reductions have {left} and {right} points"
            ),
            Unrelated::NoBijection => write!(
                f,
                "NoBijection: no density-preserving bijection carries one base to the other"
            ),
            Unrelated::NoConditioning => {
                write!(f, "NoConditioning: no ancillary conditions either base into the other")
            }
        }
    }
}

/// Outcome of a relation check: a witness, or the reason there is none.
pub type Verdict<W> = std::result::Result<W, Unrelated>;

/// `f1(θ, x1) = c · f2(θ, x2)` for every parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LikelihoodWitness {
    pub c: Rational,
}

impl LikelihoodWitness {
    pub fn inverse(&self) -> Self {
        LikelihoodWitness {
            c: self.c.recip().expect("likelihood constants are positive"),
        }
    }

    pub fn then(&self, next: &LikelihoodWitness) -> Self {
        LikelihoodWitness { c: &self.c * &next.c }
    }
}

/// Parameter-fixing bijection between the two minimal sufficient
/// reductions, and the reduced points holding the two observations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SufficiencyWitness {
    pub bijection: ModelBijection,
    pub cells: [String; 2],
}

impl SufficiencyWitness {
    pub fn inverse(&self) -> Self {
        SufficiencyWitness {
            bijection: self.bijection.inverse(),
            cells: [self.cells[1].clone(), self.cells[0].clone()],
        }
    }

    pub fn then(&self, next: &SufficiencyWitness) -> Option<Self> {
        if self.cells[1] != next.cells[0] {
            return None;
        }
        Some(SufficiencyWitness {
            bijection: self.bijection.then(&next.bijection)?,
            cells: [self.cells[0].clone(), next.cells[1].clone()],
        })
    }
}

/// Returns the unique positive `c` with `f1(θ, x1) = c · f2(θ, x2)`.
pub fn related_l(i1: &InferenceBase, i2: &InferenceBase) -> Verdict<LikelihoodWitness> {
    if i1.parameters() != i2.parameters() {
        return Err(Unrelated::ParameterMismatch);
    }
    let l1 = i1.likelihood();
    let l2 = i2.likelihood();
    let t = l2
        .iter()
        .position(|v| !v.is_zero())
        .expect("observed points have positive likelihood somewhere");
    let c = &l1[t] / &l2[t];
    if c.is_zero() {
        return Err(Unrelated::NotProportional);
    }
    if l1.iter().zip(&l2).all(|(a, b)| *a == &c * b) {
        Ok(LikelihoodWitness { c })
    } else {
        Err(Unrelated::NotProportional)
    }
}

// Column scaled so its first nonzero entry is 1.
fn normalized_column(e: &Experiment, x: usize) -> Vec<Rational> {
    let col = e.column(x);
    match col.iter().find(|v| !v.is_zero()) {
        Some(lead) => {
            let lead = lead.clone();
            col.iter().map(|v| v / &lead).collect()
        }
        None => col,
    }
}

/// Finest sufficient partition: points share a cell exactly when their
/// likelihood columns are proportional.
pub fn minimal_sufficient_partition(e: &Experiment) -> StatisticPartition {
    let mut keys: Vec<Vec<Rational>> = Vec::new();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for x in 0..e.num_points() {
        let key = normalized_column(e, x);
        match keys.iter().position(|k| *k == key) {
            Some(i) => cells[i].push(x),
            None => {
                keys.push(key);
                cells.push(vec![x]);
            }
        }
    }
    StatisticPartition::from_index_cells(e, &cells)
}

/// Marginal model of the statistic `p`. Reduced points are labelled by
/// [`StatisticPartition::cell_label`]; the map sends each original point to
/// its cell's label.
pub fn reduce_experiment(e: &Experiment, p: &StatisticPartition) -> Result<(Experiment, BTreeMap<String, String>)> {
    p.check_covers(e)?;
    let cells = p.index_cells(e);
    let labels: Vec<String> = p.cells().iter().map(|c| StatisticPartition::cell_label(c)).collect();
    let densities = e
        .densities()
        .iter()
        .map(|row| cells.iter().map(|c| c.iter().map(|&x| &row[x]).sum()).collect())
        .collect();
    let mut projection = BTreeMap::new();
    for (cell, label) in p.cells().iter().zip(&labels) {
        for x in cell {
            projection.insert(x.clone(), label.clone());
        }
    }
    let reduced = Experiment::new(labels, e.parameters().to_vec(), densities)?;
    Ok((reduced, projection))
}

/// Minimal sufficient reduction of a base's canonical experiment, with the
/// reduced observation.
pub fn sufficient_reduction(base: &InferenceBase) -> (Experiment, String) {
    let canonical = base.experiment().canonicalize();
    let partition = minimal_sufficient_partition(&canonical);
    let (reduced, projection) =
        reduce_experiment(&canonical, &partition).expect("msuf partition covers its experiment");
    (reduced, projection[base.data()].clone())
}

pub fn related_s(i1: &InferenceBase, i2: &InferenceBase) -> Verdict<SufficiencyWitness> {
    if i1.parameters() != i2.parameters() {
        return Err(Unrelated::ParameterMismatch);
    }
    let (r1, y1) = sufficient_reduction(i1);
    let (r2, y2) = sufficient_reduction(i2);
    if r1.num_points() != r2.num_points() {
        return Err(Unrelated::ReducedSizeMismatch {
            left: r1.num_points(),
            right: r2.num_points(),
        });
    }
    let bijection = find_isomorphism(&r1, &r2, true, Some((&y1, &y2)))?;
    Ok(SufficiencyWitness {
        bijection,
        cells: [y1, y2],
    })
}

/// Sample and parameter bijections carrying one base onto the other.
pub fn related_g(i1: &InferenceBase, i2: &InferenceBase) -> Verdict<ModelBijection> {
    find_isomorphism(i1.experiment(), i2.experiment(), false, Some((i1.data(), i2.data())))
}

/// Convenience for callers holding an index-level error context.
pub(crate) fn require_l(i1: &InferenceBase, i2: &InferenceBase) -> Result<LikelihoodWitness> {
    related_l(i1, i2).map_err(Error::NotLikelihoodRelated)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(space: &[&str], params: &[&str], rows: &[&[&str]], data: &str) -> InferenceBase {
        InferenceBase::new(Experiment::from_literals(space, params, rows).unwrap(), data).unwrap()
    }

    fn table2(data: &str) -> InferenceBase {
        base(
            &["(1,1)", "(1,2)", "(2,1)", "(2,2)"],
            &["1", "2"],
            &[&["1/2", "1/2", "0", "0"], &["1/4", "3/4", "0", "0"]],
            data,
        )
    }

    fn table3() -> InferenceBase {
        base(
            &["(1,1)", "(1,2)", "(2,1)", "(2,2)"],
            &["1", "2"],
            &[&["1/3", "0", "2/3", "0"], &["1/6", "0", "5/6", "0"]],
            "(1,1)",
        )
    }

    fn two_tosses() -> Experiment {
        // θ ∈ {1/4, 1/2}; f(00) = (1-θ)², f(01) = f(10) = θ(1-θ), f(11) = θ².
        Experiment::from_literals(
            &["00", "01", "10", "11"],
            &["1/4", "1/2"],
            &[&["9/16", "3/16", "3/16", "1/16"], &["1/4", "1/4", "1/4", "1/4"]],
        )
        .unwrap()
    }

    #[test]
    fn likelihood_constant() {
        assert_eq!(related_l(&table2("(1,1)"), &table3()).unwrap().c, Rational::new(3, 2));
        assert_eq!(related_l(&table3(), &table3()).unwrap().c, Rational::one());
        assert_eq!(
            related_l(&table2("(1,1)"), &table2("(1,2)")),
            Err(Unrelated::NotProportional)
        );
    }

    #[test]
    fn likelihood_requires_same_parameters() {
        let other = base(&["a", "b"], &["1", "3"], &[&["1/2", "1/2"], &["1/2", "1/2"]], "a");
        assert_eq!(related_l(&table3(), &other), Err(Unrelated::ParameterMismatch));
    }

    #[test]
    fn msuf_examples() {
        let table1 = Experiment::from_literals(
            &["(1,1)", "(1,2)", "(2,1)", "(2,2)"],
            &["1", "2"],
            &[&["1/6", "1/6", "2/6", "2/6"], &["1/12", "3/12", "5/12", "3/12"]],
        )
        .unwrap();
        assert_eq!(
            minimal_sufficient_partition(&table1),
            StatisticPartition::discrete(&table1)
        );

        let tosses = two_tosses();
        let m = minimal_sufficient_partition(&tosses);
        assert_eq!(
            m.cells(),
            &[
                vec!["00".to_string()],
                vec!["01".into(), "10".into()],
                vec!["11".into()]
            ]
        );

        let single = Experiment::from_literals(&["a", "b", "c"], &["t"], &[&["1/2", "1/4", "1/4"]]).unwrap();
        assert!(minimal_sufficient_partition(&single).is_trivial());
    }

    #[test]
    fn reduction_sums_cells() {
        let tosses = two_tosses();
        let m = minimal_sufficient_partition(&tosses);
        let (reduced, projection) = reduce_experiment(&tosses, &m).unwrap();
        assert_eq!(reduced.num_points(), 3);
        let middle = projection["01"].clone();
        assert_eq!(projection["10"], middle);
        let at = |label: &str| reduced.sample_position(label).unwrap();
        assert_eq!(reduced.density(0, at(&projection["00"])), &Rational::new(9, 16));
        assert_eq!(reduced.density(0, at(&middle)), &Rational::new(6, 16));
        assert_eq!(reduced.density(0, at(&projection["11"])), &Rational::new(1, 16));
        assert_eq!(reduced.density(1, at(&projection["00"])), &Rational::new(1, 4));
        assert_eq!(reduced.density(1, at(&middle)), &Rational::new(1, 2));

        let (trivial, _) = reduce_experiment(&tosses, &StatisticPartition::trivial(&tosses)).unwrap();
        assert_eq!(trivial.num_points(), 1);
        assert!(trivial.density(0, 0).is_one());

        let (discrete, _) = reduce_experiment(&tosses, &StatisticPartition::discrete(&tosses)).unwrap();
        assert!(crate::isomorphism::experiments_isomorphic(&discrete, &tosses, true).is_ok());
    }

    #[test]
    fn reduction_checks_partition() {
        let tosses = two_tosses();
        let p = StatisticPartition::new(vec![vec!["00".into(), "01".into()]]).unwrap();
        assert!(matches!(
            reduce_experiment(&tosses, &p),
            Err(Error::PartitionMismatch(_))
        ));
    }

    #[test]
    fn reduced_experiment_is_its_own_msuf() {
        let tosses = two_tosses();
        let (reduced, _) = reduce_experiment(&tosses, &minimal_sufficient_partition(&tosses)).unwrap();
        let again = minimal_sufficient_partition(&reduced);
        assert_eq!(again, StatisticPartition::discrete(&reduced));
    }

    #[test]
    fn sufficiency_examples() {
        let tosses = two_tosses();
        let a = InferenceBase::new(tosses.clone(), "01").unwrap();
        let b = InferenceBase::new(tosses, "10").unwrap();
        let w = related_s(&a, &b).unwrap();
        assert_eq!(w.cells[0], w.cells[1]);

        let bernoulli = base(&["0", "1"], &["1/4", "1/2"], &[&["3/4", "1/4"], &["1/2", "1/2"]], "1");
        let truncated = base(
            &["0", "1", "2"],
            &["1/4", "1/2"],
            &[&["1/4", "3/16", "9/16"], &["1/2", "1/4", "1/4"]],
            "0",
        );
        assert_eq!(
            related_s(&bernoulli, &truncated),
            Err(Unrelated::ReducedSizeMismatch { left: 2, right: 3 })
        );
        assert!(related_l(&bernoulli, &truncated).is_ok());
    }

    #[test]
    fn invariance_examples() {
        let i3 = table3();
        let w = related_g(&i3, &i3).unwrap();
        assert_eq!(w.sample_map["(1,1)"], "(1,1)");
        assert_eq!(related_g(&table2("(1,1)"), &i3), Err(Unrelated::NoBijection));
    }

    #[test]
    fn witness_algebra() {
        let w = LikelihoodWitness { c: Rational::new(3, 2) };
        assert_eq!(w.inverse().c, Rational::new(2, 3));
        assert!(w.then(&w.inverse()).c.is_one());
    }
}
