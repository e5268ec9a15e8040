//! Ancillary partitions, conditioning, and the conditionality relation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isomorphism::find_isomorphism;
use crate::model::{Experiment, InferenceBase, StatisticPartition};
use crate::rational::Rational;
use crate::relations::{minimal_sufficient_partition, Unrelated, Verdict};

/// Default bound on the sample-space size for ancillary enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 12;

/// Hard ceiling; subset masks are `u32` and the lattice table is `2^n`.
pub const MAX_ENUMERATION_LIMIT: usize = 24;

/// Which side of a conditionality pair is the conditioned (larger) model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    LeftConditions,
    RightConditions,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::LeftConditions => Direction::RightConditions,
            Direction::RightConditions => Direction::LeftConditions,
        }
    }
}

/// The conditioned base's ancillary (on its canonical support) and the
/// sample relabelling from the observed cell onto the other base's
/// canonical support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionalityWitness {
    pub direction: Direction,
    pub ancillary: StatisticPartition,
    pub relabel: BTreeMap<String, String>,
}

impl ConditionalityWitness {
    /// The same witness read for the swapped pair.
    pub fn reversed(&self) -> Self {
        ConditionalityWitness {
            direction: self.direction.flipped(),
            ..self.clone()
        }
    }
}

/// Subsets of a sample space whose probability does not depend on the
/// parameter, tabulated over all `2^n` bit masks.
pub(crate) struct ConstantMassSubsets {
    n: usize,
    constant: Vec<bool>,
}

impl ConstantMassSubsets {
    pub(crate) fn from_experiment(e: &Experiment) -> Self {
        let n = e.num_points();
        let size = 1usize << n;
        let subset_masses = |row: &[Rational]| -> Vec<Rational> {
            let mut mass = vec![Rational::zero(); size];
            for mask in 1..size {
                let low = mask.trailing_zeros() as usize;
                mass[mask] = &mass[mask & (mask - 1)] + &row[low];
            }
            mass
        };
        let first = subset_masses(&e.densities()[0]);
        let mut constant = vec![true; size];
        for row in &e.densities()[1..] {
            let other = subset_masses(row);
            for (flag, (a, b)) in constant.iter_mut().zip(first.iter().zip(&other)) {
                *flag &= a == b;
            }
        }
        ConstantMassSubsets { n, constant }
    }

    /// Same table from integer numerators over a common denominator.
    pub(crate) fn from_integer_rows(rows: &[Vec<u32>]) -> Self {
        let n = rows[0].len();
        let size = 1usize << n;
        let subset_masses = |row: &[u32]| -> Vec<u32> {
            let mut mass = vec![0u32; size];
            for mask in 1..size {
                let low = mask.trailing_zeros() as usize;
                mass[mask] = mass[mask & (mask - 1)] + row[low];
            }
            mass
        };
        let first = subset_masses(&rows[0]);
        let mut constant = vec![true; size];
        for row in &rows[1..] {
            let other = subset_masses(row);
            for (flag, (a, b)) in constant.iter_mut().zip(first.iter().zip(&other)) {
                *flag &= a == b;
            }
        }
        ConstantMassSubsets { n, constant }
    }

    pub(crate) fn full(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    pub(crate) fn is_constant(&self, mask: u32) -> bool {
        self.constant[mask as usize]
    }

    /// Every ancillary partition as a list of cell masks, largest first
    /// cell first, so the trivial partition leads.
    pub(crate) fn partitions(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.assemble(self.full(), &mut stack, &mut out);
        out
    }

    fn assemble(&self, remaining: u32, cells: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if remaining == 0 {
            out.push(cells.clone());
            return;
        }
        let low = remaining & remaining.wrapping_neg();
        let rest = remaining & !low;
        let mut sub = rest;
        loop {
            let cell = sub | low;
            if self.is_constant(cell) {
                cells.push(cell);
                self.assemble(remaining & !cell, cells, out);
                cells.pop();
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }

    /// True when some nonempty proper subset of `cell` has constant mass.
    /// A partition is maximal exactly when none of its cells splits this way:
    /// any strictly finer ancillary splits some cell into constant pieces.
    pub(crate) fn splits(&self, cell: u32) -> bool {
        let mut sub = (cell - 1) & cell;
        while sub != 0 {
            if self.is_constant(sub) {
                return true;
            }
            sub = (sub - 1) & cell;
        }
        false
    }

    pub(crate) fn is_maximal(&self, cells: &[u32]) -> bool {
        cells.iter().all(|&c| !self.splits(c))
    }
}

fn mask_to_points(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

fn check_limit(e: &Experiment, limit: usize) -> Result<()> {
    let limit = limit.min(MAX_ENUMERATION_LIMIT);
    if e.num_points() > limit {
        return Err(Error::SpaceTooLarge {
            points: e.num_points(),
            limit,
        });
    }
    Ok(())
}

/// True when every cell has the same probability under every parameter.
pub fn is_ancillary(e: &Experiment, p: &StatisticPartition) -> Result<bool> {
    p.check_covers(e)?;
    Ok(p.index_cells(e).iter().all(|cell| {
        let masses = e.masses(cell);
        masses.windows(2).all(|w| w[0] == w[1])
    }))
}

pub fn enumerate_ancillaries(e: &Experiment) -> Result<Vec<StatisticPartition>> {
    enumerate_ancillaries_with_limit(e, DEFAULT_ENUMERATION_LIMIT)
}

pub fn enumerate_ancillaries_with_limit(e: &Experiment, limit: usize) -> Result<Vec<StatisticPartition>> {
    check_limit(e, limit)?;
    let lattice = ConstantMassSubsets::from_experiment(e);
    Ok(lattice
        .partitions()
        .iter()
        .map(|cells| mask_partition(e, cells))
        .collect())
}

fn mask_partition(e: &Experiment, cells: &[u32]) -> StatisticPartition {
    let cells: Vec<Vec<usize>> = cells.iter().map(|&m| mask_to_points(m)).collect();
    StatisticPartition::from_index_cells(e, &cells)
}

/// Ancillary partitions with no strictly finer ancillary partition.
pub fn maximal_ancillaries(e: &Experiment) -> Result<Vec<StatisticPartition>> {
    maximal_ancillaries_with_limit(e, DEFAULT_ENUMERATION_LIMIT)
}

pub fn maximal_ancillaries_with_limit(e: &Experiment, limit: usize) -> Result<Vec<StatisticPartition>> {
    check_limit(e, limit)?;
    let lattice = ConstantMassSubsets::from_experiment(e);
    Ok(lattice
        .partitions()
        .iter()
        .filter(|cells| lattice.is_maximal(cells))
        .map(|cells| mask_partition(e, cells))
        .collect())
}

// Restriction of `e` to `points`, renormalized by their common mass.
fn conditional_model(e: &Experiment, points: &[usize], mass: &Rational) -> Experiment {
    let densities = e
        .densities()
        .iter()
        .map(|row| points.iter().map(|&x| &row[x] / mass).collect())
        .collect();
    Experiment::new(
        points.iter().map(|&x| e.sample_space()[x].clone()).collect(),
        e.parameters().to_vec(),
        densities,
    )
    .expect("conditioning on a positive constant-mass cell keeps rows normalized")
}

/// Conditions on the observed cell of an ancillary partition. The result
/// is canonical and keeps the observed label.
pub fn condition_on_cell(base: &InferenceBase, ancillary: &StatisticPartition) -> Result<InferenceBase> {
    let e = base.experiment();
    if !is_ancillary(e, ancillary)? {
        return Err(Error::NotAncillary);
    }
    let cell = ancillary.cell_of(base.data()).expect("partition covers the data point");
    let points: Vec<usize> = ancillary.index_cells(e)[cell].clone();
    let mass = e.masses(&points).swap_remove(0);
    let conditioned = conditional_model(e, &points, &mass).canonicalize();
    InferenceBase::new(conditioned, base.data())
}

/// Decides the conditionality relation.
///
/// Only the observed cell of an ancillary matters, and any constant-mass
/// subset `A` completes to the ancillary `{A, X∖A}`, so the search runs over
/// constant-mass subsets containing the observation. Witness ancillaries
/// therefore have at most two cells.
pub fn related_c(i1: &InferenceBase, i2: &InferenceBase) -> Result<Verdict<ConditionalityWitness>> {
    search_conditionality(i1, i2, false, DEFAULT_ENUMERATION_LIMIT)
}

/// Conditionality restricted to ancillaries that are functions of the
/// minimal sufficient statistic.
pub fn related_c_durbin(i1: &InferenceBase, i2: &InferenceBase) -> Result<Verdict<ConditionalityWitness>> {
    search_conditionality(i1, i2, true, DEFAULT_ENUMERATION_LIMIT)
}

pub fn search_conditionality(
    i1: &InferenceBase,
    i2: &InferenceBase,
    durbin: bool,
    limit: usize,
) -> Result<Verdict<ConditionalityWitness>> {
    if i1.parameters() != i2.parameters() {
        return Ok(Err(Unrelated::ParameterMismatch));
    }
    let c1 = i1.canonicalize();
    let c2 = i2.canonicalize();
    for direction in [Direction::LeftConditions, Direction::RightConditions] {
        let (cond, other) = match direction {
            Direction::LeftConditions => (&c1, &c2),
            Direction::RightConditions => (&c2, &c1),
        };
        if let Some((ancillary, relabel)) = condition_into(cond, other, durbin, limit)? {
            return Ok(Ok(ConditionalityWitness {
                direction,
                ancillary,
                relabel,
            }));
        }
    }
    Ok(Err(Unrelated::NoConditioning))
}

// Both bases canonical.
fn condition_into(
    cond: &InferenceBase,
    other: &InferenceBase,
    durbin: bool,
    limit: usize,
) -> Result<Option<(StatisticPartition, BTreeMap<String, String>)>> {
    let e = cond.experiment();
    let target = other.experiment().num_points();
    if target > e.num_points() {
        return Ok(None);
    }
    check_limit(e, limit)?;
    let lattice = ConstantMassSubsets::from_experiment(e);
    let msuf_masks: Vec<u32> = if durbin {
        minimal_sufficient_partition(e)
            .index_cells(e)
            .iter()
            .map(|c| c.iter().fold(0u32, |m, &x| m | (1 << x)))
            .collect()
    } else {
        Vec::new()
    };
    let x = cond.data_position() as u32;
    let full = lattice.full();
    let rest = full & !(1 << x);
    let mut sub = rest;
    loop {
        let cell = sub | (1 << x);
        if cell.count_ones() as usize == target
            && lattice.is_constant(cell)
            && (!durbin || msuf_masks.iter().all(|&m| m & cell == 0 || m & cell == m))
        {
            let points = mask_to_points(cell);
            let mass = e.masses(&points).swap_remove(0);
            let conditional = conditional_model(e, &points, &mass);
            if let Ok(b) = find_isomorphism(
                &conditional,
                other.experiment(),
                true,
                Some((cond.data(), other.data())),
            ) {
                let mut cells = vec![points];
                if cell != full {
                    cells.push(mask_to_points(full & !cell));
                }
                return Ok(Some((StatisticPartition::from_index_cells(e, &cells), b.sample_map)));
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest;
    }
    Ok(None)
}

/// True when the minimal sufficient partition refines `p`, i.e. the
/// statistic `p` is a function of the minimal sufficient statistic.
pub fn is_function_of_minimal_sufficient(e: &Experiment, p: &StatisticPartition) -> Result<bool> {
    p.check_covers(e)?;
    Ok(minimal_sufficient_partition(e).refines(p))
}

/// Maximum likelihood estimate; ties go to the earliest parameter.
pub fn mle(base: &InferenceBase) -> String {
    mle_at(base.experiment(), base.data_position())
}

fn mle_at(e: &Experiment, x: usize) -> String {
    let col = e.column(x);
    let mut best = 0;
    for (t, v) in col.iter().enumerate() {
        if *v > col[best] {
            best = t;
        }
    }
    e.parameters()[best].clone()
}

/// Conditional probabilities, given the observed ancillary cell, that the
/// MLE picks each parameter when that parameter is true.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AccuracyReport {
    pub cell: Vec<String>,
    pub estimates: BTreeMap<String, String>,
    pub correct_selection: Vec<(String, Rational)>,
}

impl AccuracyReport {
    pub fn probability_correct(&self, parameter: &str) -> Option<&Rational> {
        self.correct_selection
            .iter()
            .find(|(t, _)| t == parameter)
            .map(|(_, p)| p)
    }
}

pub fn conditional_accuracy(base: &InferenceBase, ancillary: &StatisticPartition) -> Result<AccuracyReport> {
    let e = base.experiment();
    if !is_ancillary(e, ancillary)? {
        return Err(Error::NotAncillary);
    }
    let cell_index = ancillary.cell_of(base.data()).expect("covered");
    let points = ancillary.index_cells(e)[cell_index].clone();
    let mass = e.masses(&points).swap_remove(0);
    let estimates: Vec<(usize, String)> = points.iter().map(|&x| (x, mle_at(e, x))).collect();
    let correct_selection = e
        .parameters()
        .iter()
        .enumerate()
        .map(|(t, theta)| {
            let hit: Rational = estimates
                .iter()
                .filter(|(_, est)| est == theta)
                .map(|(x, _)| e.density(t, *x))
                .sum();
            (theta.clone(), &hit / &mass)
        })
        .collect();
    Ok(AccuracyReport {
        cell: ancillary.cells()[cell_index].clone(),
        estimates: estimates
            .into_iter()
            .map(|(x, est)| (e.sample_space()[x].clone(), est))
            .collect(),
        correct_selection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table1() -> Experiment {
        Experiment::from_literals(
            &["(1,1)", "(1,2)", "(2,1)", "(2,2)"],
            &["1", "2"],
            &[&["1/6", "1/6", "2/6", "2/6"], &["1/12", "3/12", "5/12", "3/12"]],
        )
        .unwrap()
    }

    fn partition(cells: &[&[&str]]) -> StatisticPartition {
        StatisticPartition::new(
            cells
                .iter()
                .map(|c| c.iter().map(|s| s.to_string()).collect())
                .collect(),
        )
        .unwrap()
    }

    fn u() -> StatisticPartition {
        partition(&[&["(1,1)", "(1,2)"], &["(2,1)", "(2,2)"]])
    }

    fn v() -> StatisticPartition {
        partition(&[&["(1,1)", "(2,1)"], &["(1,2)", "(2,2)"]])
    }

    // Brute force over every set partition, independent of the lattice.
    fn all_partitions(items: &[String]) -> Vec<Vec<Vec<String>>> {
        if items.is_empty() {
            return vec![vec![]];
        }
        let (head, tail) = items.split_first().unwrap();
        let mut out = Vec::new();
        for p in all_partitions(tail) {
            for i in 0..p.len() {
                let mut q = p.clone();
                q[i].push(head.clone());
                out.push(q);
            }
            let mut q = p.clone();
            q.push(vec![head.clone()]);
            out.push(q);
        }
        out
    }

    #[test]
    fn ancillarity_checks() {
        let e = table1();
        assert!(is_ancillary(&e, &u()).unwrap());
        assert!(is_ancillary(&e, &v()).unwrap());
        assert!(!is_ancillary(&e, &partition(&[&["(1,1)", "(2,2)"], &["(1,2)", "(2,1)"]])).unwrap());
        assert!(is_ancillary(&e, &StatisticPartition::trivial(&e)).unwrap());
        assert!(matches!(
            is_ancillary(&e, &partition(&[&["(1,1)"]])),
            Err(Error::PartitionMismatch(_))
        ));
    }

    #[test]
    fn table1_ancillaries() {
        let e = table1();
        let mut found = enumerate_ancillaries(&e).unwrap();
        found.sort();
        let mut expected = vec![StatisticPartition::trivial(&e), u(), v()];
        expected.sort();
        assert_eq!(found, expected);
        assert_eq!(enumerate_ancillaries(&e).unwrap()[0], StatisticPartition::trivial(&e));

        let mut brute: Vec<StatisticPartition> = all_partitions(e.sample_space())
            .into_iter()
            .map(|p| StatisticPartition::new(p).unwrap())
            .filter(|p| is_ancillary(&e, p).unwrap())
            .collect();
        brute.sort();
        assert_eq!(brute, expected);

        let mut maximal = maximal_ancillaries(&e).unwrap();
        maximal.sort();
        let mut uv = vec![u(), v()];
        uv.sort();
        assert_eq!(maximal, uv);
    }

    #[test]
    fn conditional_models_have_trivial_ancillaries() {
        let t2 =
            Experiment::from_literals(&["(1,1)", "(1,2)"], &["1", "2"], &[&["1/2", "1/2"], &["1/4", "3/4"]]).unwrap();
        assert_eq!(
            enumerate_ancillaries(&t2).unwrap(),
            vec![StatisticPartition::trivial(&t2)]
        );
        assert_eq!(
            maximal_ancillaries(&t2).unwrap(),
            vec![StatisticPartition::trivial(&t2)]
        );
    }

    #[test]
    fn single_parameter_everything_is_ancillary() {
        let e = Experiment::from_literals(&["a", "b", "c", "d"], &["t"], &[&["1/4", "1/4", "1/4", "1/4"]]).unwrap();
        assert_eq!(enumerate_ancillaries(&e).unwrap().len(), 15);
        assert_eq!(maximal_ancillaries(&e).unwrap(), vec![StatisticPartition::discrete(&e)]);
    }

    #[test]
    fn enumeration_bound() {
        let labels: Vec<String> = (0..13).map(|i| format!("x{i}")).collect();
        let mut row = vec![Rational::zero(); 13];
        row[0] = Rational::one();
        let e = Experiment::new(labels, vec!["t".into()], vec![row]).unwrap();
        assert!(matches!(
            enumerate_ancillaries(&e),
            Err(Error::SpaceTooLarge { points: 13, limit: 12 })
        ));
    }

    #[test]
    fn conditioning_reproduces_tables() {
        let base = InferenceBase::new(table1(), "(1,1)").unwrap();
        let on_u = condition_on_cell(&base, &u()).unwrap();
        let e = on_u.experiment();
        assert_eq!(e.sample_space(), &["(1,1)", "(1,2)"]);
        assert_eq!(e.densities()[0], vec![Rational::new(1, 2), Rational::new(1, 2)]);
        assert_eq!(e.densities()[1], vec![Rational::new(1, 4), Rational::new(3, 4)]);

        let on_v = condition_on_cell(&base, &v()).unwrap();
        let e = on_v.experiment();
        assert_eq!(e.sample_space(), &["(1,1)", "(2,1)"]);
        assert_eq!(e.densities()[0], vec![Rational::new(1, 3), Rational::new(2, 3)]);
        assert_eq!(e.densities()[1], vec![Rational::new(1, 6), Rational::new(5, 6)]);

        let same = condition_on_cell(&base, &StatisticPartition::trivial(base.experiment())).unwrap();
        assert_eq!(same, base.canonicalize());

        let diagonal = partition(&[&["(1,1)", "(2,2)"], &["(1,2)", "(2,1)"]]);
        assert!(matches!(condition_on_cell(&base, &diagonal), Err(Error::NotAncillary)));
    }

    #[test]
    fn conditionality_examples() {
        let i1 = InferenceBase::new(table1(), "(1,1)").unwrap();
        let i2 = condition_on_cell(&i1, &u()).unwrap();
        let i3 = condition_on_cell(&i1, &v()).unwrap();
        let w = related_c(&i1, &i2).unwrap().unwrap();
        assert_eq!(w.direction, Direction::LeftConditions);
        assert_eq!(w.ancillary, u());
        assert_eq!(
            related_c(&i2, &i1).unwrap().unwrap().direction,
            Direction::RightConditions
        );
        assert!(related_c(&i1, &i3).unwrap().is_ok());
        assert_eq!(related_c(&i2, &i3).unwrap(), Err(Unrelated::NoConditioning));
        let refl = related_c(&i2, &i2).unwrap().unwrap();
        assert!(refl.ancillary.is_trivial());
    }

    #[test]
    fn durbin_allows_everything_when_msuf_is_discrete() {
        let i1 = InferenceBase::new(table1(), "(1,1)").unwrap();
        let i2 = condition_on_cell(&i1, &u()).unwrap();
        assert!(related_c_durbin(&i1, &i2).unwrap().is_ok());
        assert!(related_c_durbin(&i2, &i2).unwrap().is_ok());
    }

    #[test]
    fn mle_and_ties() {
        let t2 =
            Experiment::from_literals(&["(1,1)", "(1,2)"], &["1", "2"], &[&["1/2", "1/2"], &["1/4", "3/4"]]).unwrap();
        assert_eq!(mle(&InferenceBase::new(t2.clone(), "(1,1)").unwrap()), "1");
        assert_eq!(mle(&InferenceBase::new(t2, "(1,2)").unwrap()), "2");
        let tie = Experiment::from_literals(&["a", "b"], &["p", "q"], &[&["1/2", "1/2"], &["1/2", "1/2"]]).unwrap();
        assert_eq!(mle(&InferenceBase::new(tie, "a").unwrap()), "p");
    }

    #[test]
    fn accuracy_display() {
        let base = InferenceBase::new(table1(), "(1,1)").unwrap();
        let on_u = conditional_accuracy(&base, &u()).unwrap();
        assert_eq!(on_u.probability_correct("1"), Some(&Rational::new(1, 2)));
        assert_eq!(on_u.probability_correct("2"), Some(&Rational::new(3, 4)));
        let on_v = conditional_accuracy(&base, &v()).unwrap();
        assert_eq!(on_v.probability_correct("1"), Some(&Rational::new(1, 3)));
        assert_eq!(on_v.probability_correct("2"), Some(&Rational::new(5, 6)));

        let single = Experiment::from_literals(&["a", "b"], &["t"], &[&["1/3", "2/3"]]).unwrap();
        let sb = InferenceBase::new(single.clone(), "a").unwrap();
        let r = conditional_accuracy(&sb, &StatisticPartition::trivial(&single)).unwrap();
        assert!(r.probability_correct("t").unwrap().is_one());
    }

    #[test]
    fn maximality_shortcut_matches_pairwise_definition() {
        let e = table1();
        let all = enumerate_ancillaries(&e).unwrap();
        let pairwise: Vec<_> = all
            .iter()
            .filter(|p| !all.iter().any(|q| q != *p && q.refines(p)))
            .cloned()
            .collect();
        let mut shortcut = maximal_ancillaries(&e).unwrap();
        let mut pairwise = pairwise;
        shortcut.sort();
        pairwise.sort();
        assert_eq!(shortcut, pairwise);
    }
}
