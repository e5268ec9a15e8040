//! Independent certificate checker.
//!
//! Nothing here calls the search procedures in `relations` or
//! `ancillarity`. Each witness is checked directly against the two bases
//! it joins: the likelihood constant by multiplication, bijections by
//! exhaustive transport, ancillaries by summing cells, and minimal
//! sufficiency by pairwise cross-multiplication of likelihood columns.

use std::fmt;

use serde::Serialize;

use crate::ancillarity::{ConditionalityWitness, Direction};
use crate::certificate::ChainCertificate;
use crate::model::{is_bijection, Experiment, InferenceBase, StatisticPartition};
use crate::rational::Rational;
use crate::relations::{LikelihoodWitness, SufficiencyWitness};
use crate::witness::Witness;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "at", rename_all = "kebab-case")]
pub enum Failure {
    Shape { reason: String },
    Base { index: usize, reason: String },
    Link { index: usize, reason: String },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Shape { reason } => write!(f, "malformed chain: {reason}"),
            Failure::Base { index, reason } => write!(f, "base {index}: {reason}"),
            Failure::Link { index, reason } => write!(f, "link {index}: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub bases: usize,
    pub links_checked: usize,
    pub failure: Option<Failure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn failed_link(&self) -> Option<usize> {
        match &self.failure {
            Some(Failure::Link { index, .. }) => Some(*index),
            _ => None,
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "ok: {} bases, {} links verified", self.bases, self.links_checked),
            Some(failure) => write!(f, "FAILED after {} links: {failure}", self.links_checked),
        }
    }
}

fn revalidate(base: &InferenceBase) -> Result<(), String> {
    let e = base.experiment();
    let rebuilt = Experiment::new(
        e.sample_space().to_vec(),
        e.parameters().to_vec(),
        e.densities().to_vec(),
    )
    .map_err(|err| err.to_string())?;
    InferenceBase::new(rebuilt, base.data()).map_err(|err| err.to_string())?;
    Ok(())
}

/// Re-validates every base, then checks every link's witness directly.
/// Stops at the first failure.
pub fn verify_chain(cert: &ChainCertificate) -> VerificationReport {
    let mut report = VerificationReport {
        bases: cert.bases.len(),
        links_checked: 0,
        failure: None,
    };
    if let Err(e) = crate::certificate::check_shape(cert) {
        report.failure = Some(Failure::Shape { reason: e.to_string() });
        return report;
    }
    for (index, base) in cert.bases.iter().enumerate() {
        if let Err(reason) = revalidate(base) {
            report.failure = Some(Failure::Base { index, reason });
            return report;
        }
    }
    for (index, link) in cert.links.iter().enumerate() {
        let outcome = if link.kind != link.witness.kind() {
            Err(format!(
                "link kind {} carries a {} witness",
                link.kind,
                link.witness.kind()
            ))
        } else if link.orientation != link.witness.orientation() {
            Err("orientation disagrees with the witness direction".to_string())
        } else {
            verify_witness(&cert.bases[index], &cert.bases[index + 1], &link.witness)
        };
        if let Err(reason) = outcome {
            report.failure = Some(Failure::Link { index, reason });
            return report;
        }
        report.links_checked += 1;
    }
    report
}

/// Checks one witness for the ordered pair `(left, right)`.
pub fn verify_witness(left: &InferenceBase, right: &InferenceBase, witness: &Witness) -> Result<(), String> {
    match witness {
        Witness::L(w) => check_likelihood(left, right, w),
        Witness::S(w) => check_sufficiency(left, right, w),
        Witness::C(w) => check_conditionality(left, right, w, false),
        Witness::CDurbin(w) => check_conditionality(left, right, w, true),
        Witness::G(w) => {
            if !w.transports(left.experiment(), right.experiment()) {
                return Err("bijection does not carry the densities exactly".into());
            }
            if w.sample_map.get(left.data()).map(String::as_str) != Some(right.data()) {
                return Err("sample map does not send data to data".into());
            }
            Ok(())
        }
    }
}

fn same_parameters(left: &InferenceBase, right: &InferenceBase) -> Result<(), String> {
    if left.parameters() != right.parameters() {
        return Err("parameter lists differ".into());
    }
    Ok(())
}

fn check_likelihood(left: &InferenceBase, right: &InferenceBase, w: &LikelihoodWitness) -> Result<(), String> {
    same_parameters(left, right)?;
    if w.c.is_zero() {
        return Err("likelihood constant must be positive".into());
    }
    let x1 = left
        .experiment()
        .sample_position(left.data())
        .ok_or("left data missing")?;
    let x2 = right
        .experiment()
        .sample_position(right.data())
        .ok_or("right data missing")?;
    for t in 0..left.parameters().len() {
        let lhs = left.experiment().density(t, x1);
        let rhs = &w.c * right.experiment().density(t, x2);
        if *lhs != rhs {
            return Err(format!(
                "f1 = {lhs} but c * f2 = {rhs} at parameter {:?}",
                left.parameters()[t]
            ));
        }
    }
    Ok(())
}

fn proportional(a: &[Rational], b: &[Rational]) -> bool {
    if a.iter().zip(b).any(|(x, y)| x.is_zero() != y.is_zero()) {
        return false;
    }
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

// Minimal sufficient cells of a canonical experiment, grouped greedily by
// pairwise proportionality.
fn proportional_cells(e: &Experiment) -> Vec<Vec<usize>> {
    let cols: Vec<Vec<Rational>> = (0..e.num_points()).map(|x| e.column(x)).collect();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for x in 0..cols.len() {
        match cells.iter_mut().find(|c| proportional(&cols[c[0]], &cols[x])) {
            Some(cell) => cell.push(x),
            None => cells.push(vec![x]),
        }
    }
    cells
}

// Reduced experiment under the cells, labelled like the production
// reduction, plus the reduced label of `data`.
fn reduce_independently(base: &InferenceBase) -> Result<(Experiment, String), String> {
    let e = base.experiment().canonicalize();
    let cells = proportional_cells(&e);
    let mut labels = Vec::new();
    let mut data_label = None;
    for cell in &cells {
        let mut names: Vec<String> = cell.iter().map(|&x| e.sample_space()[x].clone()).collect();
        names.sort();
        let label = StatisticPartition::cell_label(&names);
        if names.iter().any(|n| n == base.data()) {
            data_label = Some(label.clone());
        }
        labels.push(label);
    }
    let densities = e
        .densities()
        .iter()
        .map(|row| cells.iter().map(|c| c.iter().map(|&x| row[x].clone()).sum()).collect())
        .collect();
    let reduced = Experiment::new(labels, e.parameters().to_vec(), densities).map_err(|err| err.to_string())?;
    Ok((reduced, data_label.ok_or("data point vanished under reduction")?))
}

fn check_sufficiency(left: &InferenceBase, right: &InferenceBase, w: &SufficiencyWitness) -> Result<(), String> {
    same_parameters(left, right)?;
    let (r1, y1) = reduce_independently(left)?;
    let (r2, y2) = reduce_independently(right)?;
    if w.cells[0] != y1 || w.cells[1] != y2 {
        return Err("witness cells are not the cells of the observations".into());
    }
    if !w.bijection.fixes_parameters() {
        return Err("sufficiency requires the identity parameter map".into());
    }
    if !w.bijection.transports(&r1, &r2) {
        return Err("reduced models are not carried onto each other".into());
    }
    if w.bijection.sample_map.get(&y1) != Some(&y2) {
        return Err("bijection does not match the observed cells".into());
    }
    Ok(())
}

fn check_conditionality(
    left: &InferenceBase,
    right: &InferenceBase,
    w: &ConditionalityWitness,
    durbin: bool,
) -> Result<(), String> {
    same_parameters(left, right)?;
    let (cond, other) = match w.direction {
        Direction::LeftConditions => (left, right),
        Direction::RightConditions => (right, left),
    };
    let e = cond.experiment().canonicalize();
    let target = other.experiment().canonicalize();
    w.ancillary.check_covers(&e).map_err(|err| err.to_string())?;
    let cells = w.ancillary.index_cells(&e);
    for (cell, names) in cells.iter().zip(w.ancillary.cells()) {
        let first: Rational = cell.iter().map(|&x| e.density(0, x).clone()).sum();
        for t in 1..e.num_parameters() {
            let mass: Rational = cell.iter().map(|&x| e.density(t, x).clone()).sum();
            if mass != first {
                return Err(format!("ancillary cell {names:?} has parameter-dependent mass"));
            }
        }
    }
    if durbin {
        let msuf = proportional_cells(&e);
        let owner = |x: usize| cells.iter().position(|c| c.contains(&x));
        if !msuf.iter().all(|m| m.iter().all(|&x| owner(x) == owner(m[0]))) {
            return Err("ancillary is not a function of the minimal sufficient statistic".into());
        }
    }
    let data_cell = w
        .ancillary
        .cell_of(cond.data())
        .ok_or("observed point outside the ancillary")?;
    let cell = &cells[data_cell];
    let mass: Rational = cell.iter().map(|&x| e.density(0, x).clone()).sum();
    if mass.is_zero() {
        return Err("observed cell has zero mass".into());
    }
    let domain: Vec<String> = cell.iter().map(|&x| e.sample_space()[x].clone()).collect();
    if !is_bijection(&w.relabel, &domain, target.sample_space()) {
        return Err("relabel is not a bijection from the observed cell onto the other support".into());
    }
    if w.relabel.get(cond.data()).map(String::as_str) != Some(other.data()) {
        return Err("relabel does not send data to data".into());
    }
    for t in 0..e.num_parameters() {
        for &x in cell {
            let y = target
                .sample_position(&w.relabel[&e.sample_space()[x]])
                .expect("bijection onto target");
            if e.density(t, x) / &mass != *target.density(t, y) {
                return Err(format!(
                    "conditional density at {:?} does not match the other model",
                    e.sample_space()[x]
                ));
            }
        }
    }
    Ok(())
}
