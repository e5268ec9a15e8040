//! Constructive chains between likelihood-related inference bases.
//!
//! * [`conditionality_chain`] joins any two likelihood-related bases by four
//!   conditionality links through auxiliary two-ancillary models.
//! * [`mixture_chain`] joins them by conditionality, sufficiency,
//!   conditionality through the equal-weight mixture of the two models.
//! * [`separation_pair`] is a likelihood-related pair that no single
//!   sufficiency or conditionality step joins.
//! * [`rewrite_lg_to_cg`] expands every likelihood link of a chain into
//!   conditionality links.
//!
//! Auxiliary sample points are labelled `"<i>:<x>"` where `x` is the
//! original label.

use std::collections::BTreeMap;

use crate::ancillarity::{enumerate_ancillaries, related_c, ConditionalityWitness, Direction};
use crate::certificate::ChainCertificate;
use crate::error::{Error, Result};
use crate::model::{Experiment, InferenceBase, StatisticPartition};
use crate::rational::Rational;
use crate::relations::{related_l, related_s, require_l, LikelihoodWitness, SufficiencyWitness, Unrelated, Verdict};
use crate::verify::{verify_chain, verify_witness, VerificationReport};
use crate::witness::{RelationKind, Witness};

fn tagged(tag: &str, label: &str) -> String {
    format!("{tag}:{label}")
}

/// The auxiliary model built on `{0,1} × X` from an observed base and a
/// likelihood constant, with its two ancillaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoLayerModel {
    pub experiment: Experiment,
    /// Partition by the first coordinate.
    pub u: StatisticPartition,
    /// Partition by whether the second coordinate is the observed point.
    pub v: StatisticPartition,
    /// Weight of the `i = 1` layer, `p = 1 / (1 + c)`.
    pub p: Rational,
    /// The point that receives the `i = 0` copy of the observed mass.
    pub companion: String,
}

impl TwoLayerModel {
    pub fn base(&self, observed: &str) -> InferenceBase {
        InferenceBase::new(self.experiment.clone(), tagged("1", observed)).expect("observed point keeps positive mass")
    }
}

/// Builds the two-layer model for `base` and constant `c ≥ 1`.
///
/// Layer `i = 1` carries `p · f(θ, x)`. Layer `i = 0` carries
/// `1 − p − p · f(θ, x1)` at the observed point `x1`, `p · f(θ, x1)` at the
/// first other point, and zero elsewhere. Both layers have
/// parameter-free mass, as do the two classes of "is `x1`".
pub fn two_layer_experiment(base: &InferenceBase, c: &Rational) -> Result<TwoLayerModel> {
    if *c < Rational::one() {
        return Err(Error::ConstantOutOfRange(c.clone()));
    }
    let e = base.experiment();
    if e.num_points() < 2 {
        return Err(Error::DegenerateSampleSpace(base.data().to_string()));
    }
    let p = Rational::one() / (Rational::one() + c);
    let x1 = base.data_position();
    let companion = (0..e.num_points()).find(|&x| x != x1).expect("two points");

    let mut labels: Vec<String> = e.sample_space().iter().map(|x| tagged("1", x)).collect();
    labels.extend(e.sample_space().iter().map(|x| tagged("0", x)));
    let mut densities = Vec::with_capacity(e.num_parameters());
    for row in e.densities() {
        let observed = &p * &row[x1];
        let remainder = (Rational::one().checked_sub(&p))
            .and_then(|r| r.checked_sub(&observed))
            .ok_or_else(|| Error::ConstantOutOfRange(c.clone()))?;
        let mut out: Vec<Rational> = row.iter().map(|f| &p * f).collect();
        let mut lower = vec![Rational::zero(); e.num_points()];
        lower[x1] = remainder;
        lower[companion] = observed;
        out.extend(lower);
        densities.push(out);
    }
    let experiment = Experiment::new(labels, e.parameters().to_vec(), densities)?;
    let observed_label = base.data().to_string();
    let u = StatisticPartition::from_statistic(&experiment, |l| l.starts_with("1:"));
    let v = StatisticPartition::from_statistic(&experiment, |l| l[2..] == observed_label);
    Ok(TwoLayerModel {
        experiment,
        u,
        v,
        p,
        companion: e.sample_space()[companion].clone(),
    })
}

// Ancillary cut down to the canonical support of `e`.
fn on_support(p: &StatisticPartition, e: &Experiment) -> StatisticPartition {
    let support = e.canonicalize();
    let cells = p
        .cells()
        .iter()
        .map(|c| {
            c.iter()
                .filter(|l| support.sample_position(l).is_some())
                .cloned()
                .collect::<Vec<_>>()
        })
        .filter(|c| !c.is_empty())
        .collect();
    StatisticPartition::new(cells).expect("sub-cells stay disjoint")
}

// Witness for "`cond` conditioned on `ancillary` is `other`", with the
// relabelling given pointwise on the observed cell's support.
fn conditioning_witness(
    direction: Direction,
    cond: &InferenceBase,
    ancillary: &StatisticPartition,
    relabel: impl Fn(&str) -> String,
) -> ConditionalityWitness {
    let ancillary = on_support(ancillary, cond.experiment());
    let cell = &ancillary.cells()[ancillary.cell_of(cond.data()).expect("data in support")];
    let relabel: BTreeMap<String, String> = cell.iter().map(|l| (l.clone(), relabel(l))).collect();
    ConditionalityWitness {
        direction,
        ancillary,
        relabel,
    }
}

fn checked_push(cert: &mut ChainCertificate, witness: Witness, next: InferenceBase) -> Result<()> {
    let index = cert.links.len();
    let last = cert.last().expect("chains start with a base");
    verify_witness(last, &next, &witness).map_err(|reason| Error::LinkVerificationFailed { index, reason })?;
    cert.push(witness, next);
    Ok(())
}

/// Bernoulli base with success probability `f(θ)` per parameter, observed
/// at `"1"`.
pub fn bernoulli_base(parameters: &[String], success: &[Rational]) -> Result<InferenceBase> {
    let densities = success
        .iter()
        .map(|s| {
            let failure = Rational::one()
                .checked_sub(s)
                .ok_or_else(|| Error::ConstantOutOfRange(s.clone()))?;
            Ok(vec![failure, s.clone()])
        })
        .collect::<Result<Vec<_>>>()?;
    let e = Experiment::new(vec!["0".into(), "1".into()], parameters.to_vec(), densities)?;
    InferenceBase::new(e, "1")
}

/// Four conditionality links joining two likelihood-related bases.
///
/// With constant `c ≥ 1` the chain runs `I1 — I1* — I — I2* — I2`, where
/// `I1*` is [`two_layer_experiment`] at `c`, `I` is Bernoulli with success
/// probability `f1(θ, x1) / c` observed at success, and `I2*` is the same
/// construction for `I2` with `c = 1`. For `c < 1` the chain is built from
/// `I2` and read backwards.
pub fn conditionality_chain(i1: &InferenceBase, i2: &InferenceBase) -> Result<ChainCertificate> {
    let w = require_l(i1, i2)?;
    if w.c < Rational::one() {
        Ok(conditionality_chain_forward(i2, i1, &w.inverse())?.reversed())
    } else {
        conditionality_chain_forward(i1, i2, &w)
    }
}

fn conditionality_chain_forward(
    i1: &InferenceBase,
    i2: &InferenceBase,
    w: &LikelihoodWitness,
) -> Result<ChainCertificate> {
    let outer = two_layer_experiment(i1, &w.c)?;
    let inner = two_layer_experiment(i2, &Rational::one())?;
    let i1_star = outer.base(i1.data());
    let i2_star = inner.base(i2.data());
    let success: Vec<Rational> = i1.likelihood().iter().map(|f| f / &w.c).collect();
    let bernoulli = bernoulli_base(i1.parameters(), &success)?;

    let strip = |l: &str| l[2..].to_string();
    let layer = |l: &str| l[..1].to_string();

    let mut cert = ChainCertificate::single(i1.clone());
    let link = conditioning_witness(Direction::RightConditions, &i1_star, &outer.u, strip);
    checked_push(&mut cert, Witness::C(link), i1_star.clone())?;
    let link = conditioning_witness(Direction::LeftConditions, &i1_star, &outer.v, layer);
    checked_push(&mut cert, Witness::C(link), bernoulli)?;
    let link = conditioning_witness(Direction::RightConditions, &i2_star, &inner.v, layer);
    checked_push(&mut cert, Witness::C(link), i2_star.clone())?;
    let link = conditioning_witness(Direction::LeftConditions, &i2_star, &inner.u, strip);
    checked_push(&mut cert, Witness::C(link), i2.clone())?;
    Ok(cert)
}

/// Equal-weight mixture of two experiments over the same parameters, on
/// the sample space `{1:x} ∪ {2:y}`.
pub fn mixture_experiment(e1: &Experiment, e2: &Experiment) -> Result<Experiment> {
    if e1.parameters() != e2.parameters() {
        return Err(Error::NotLikelihoodRelated(Unrelated::ParameterMismatch));
    }
    let half = Rational::new(1, 2);
    let mut labels: Vec<String> = e1.sample_space().iter().map(|x| tagged("1", x)).collect();
    labels.extend(e2.sample_space().iter().map(|x| tagged("2", x)));
    let densities = e1
        .densities()
        .iter()
        .zip(e2.densities())
        .map(|(r1, r2)| r1.iter().chain(r2).map(|f| &half * f).collect())
        .collect();
    Experiment::new(labels, e1.parameters().to_vec(), densities)
}

/// The mixture chain `(E1,x1) —C— (E,1:x1) —S— (E,2:x2) —C— (E2,x2)`.
///
/// Both conditionality links use the ancillary "which component", which
/// separates `1:x1` from `2:x2` even though the mixture's minimal
/// sufficient statistic joins them.
pub fn mixture_chain(i1: &InferenceBase, i2: &InferenceBase) -> Result<ChainCertificate> {
    require_l(i1, i2)?;
    let mixture = mixture_experiment(i1.experiment(), i2.experiment())?;
    let left = InferenceBase::new(mixture.clone(), tagged("1", i1.data()))?;
    let right = InferenceBase::new(mixture.clone(), tagged("2", i2.data()))?;
    let component = component_ancillary(&mixture);
    let strip = |l: &str| l[2..].to_string();

    let mut cert = ChainCertificate::single(i1.clone());
    let link = conditioning_witness(Direction::RightConditions, &left, &component, strip);
    checked_push(&mut cert, Witness::C(link), left.clone())?;
    let sufficiency = related_s(&left, &right).map_err(|reason| Error::LinkVerificationFailed {
        index: 1,
        reason: reason.to_string(),
    })?;
    checked_push(&mut cert, Witness::S(sufficiency), right.clone())?;
    let link = conditioning_witness(Direction::LeftConditions, &right, &component, strip);
    checked_push(&mut cert, Witness::C(link), i2.clone())?;
    Ok(cert)
}

/// Partition of a mixture's sample space by component.
pub fn component_ancillary(mixture: &Experiment) -> StatisticPartition {
    StatisticPartition::from_statistic(mixture, |l| l[..1].to_string())
}

/// Verdicts for the separation pair.
#[derive(Debug, Clone)]
pub struct SeparationReport {
    pub likelihood: Verdict<LikelihoodWitness>,
    pub sufficiency: Verdict<SufficiencyWitness>,
    pub conditionality: Verdict<ConditionalityWitness>,
    pub left_ancillaries: Vec<StatisticPartition>,
    pub right_ancillaries: Vec<StatisticPartition>,
    pub chain: ChainCertificate,
    pub verification: VerificationReport,
}

impl SeparationReport {
    /// Likelihood holds with `c = 1`, neither sufficiency nor
    /// conditionality does, and the conditionality chain verifies.
    pub fn separates(&self) -> bool {
        matches!(&self.likelihood, Ok(w) if w.c.is_one())
            && self.sufficiency.is_err()
            && self.conditionality.is_err()
            && self.verification.passed()
            && self.chain.kinds().iter().all(|k| *k == RelationKind::C)
    }
}

/// Bernoulli(θ) observed at 1, and the three-point truncated geometric
/// `(θ, θ(1−θ), (1−θ)²)` observed at 0, over `Θ = {1/4, 1/2}`.
pub fn separation_bases() -> (InferenceBase, InferenceBase) {
    let thetas = [Rational::new(1, 4), Rational::new(1, 2)];
    let parameters: Vec<String> = thetas.iter().map(ToString::to_string).collect();
    let bernoulli = Experiment::new(
        vec!["0".into(), "1".into()],
        parameters.clone(),
        thetas
            .iter()
            .map(|t| vec![Rational::one().checked_sub(t).expect("θ ≤ 1"), t.clone()])
            .collect(),
    )
    .expect("valid Bernoulli");
    let geometric = Experiment::new(
        vec!["0".into(), "1".into(), "2".into()],
        parameters,
        thetas
            .iter()
            .map(|t| {
                let q = Rational::one().checked_sub(t).expect("θ ≤ 1");
                vec![t.clone(), t * &q, &q * &q]
            })
            .collect(),
    )
    .expect("valid truncated geometric");
    (
        InferenceBase::new(bernoulli, "1").expect("observed"),
        InferenceBase::new(geometric, "0").expect("observed"),
    )
}

/// The separation pair with every verdict recomputed.
pub fn separation_pair() -> Result<(InferenceBase, InferenceBase, SeparationReport)> {
    let (i1, i2) = separation_bases();
    let chain = conditionality_chain(&i1, &i2)?;
    let report = SeparationReport {
        likelihood: related_l(&i1, &i2),
        sufficiency: related_s(&i1, &i2),
        conditionality: related_c(&i1, &i2)?,
        left_ancillaries: enumerate_ancillaries(i1.experiment())?,
        right_ancillaries: enumerate_ancillaries(i2.experiment())?,
        verification: verify_chain(&chain),
        chain,
    };
    Ok((i1, i2, report))
}

/// Replaces every likelihood link by its four-link conditionality
/// expansion. Invariance links are kept; other kinds are rejected.
pub fn rewrite_lg_to_cg(chain: &ChainCertificate) -> Result<ChainCertificate> {
    crate::certificate::check_shape(chain)?;
    let Some(first) = chain.first() else {
        return Ok(chain.clone());
    };
    let mut out = ChainCertificate::single(first.clone());
    for (index, link) in chain.links.iter().enumerate() {
        let (left, right) = (&chain.bases[index], &chain.bases[index + 1]);
        verify_witness(left, right, &link.witness).map_err(|reason| Error::LinkVerificationFailed { index, reason })?;
        match link.witness {
            Witness::G(_) => out.push(link.witness.clone(), right.clone()),
            Witness::L(_) => out.extend(conditionality_chain(left, right)?),
            _ => {
                return Err(Error::UnsupportedLinkKind {
                    index,
                    kind: link.kind.to_string(),
                })
            }
        }
    }
    Ok(out)
}
