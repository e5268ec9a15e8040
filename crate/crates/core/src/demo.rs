//! Scripted demonstrations. Each demo recomputes a set of values with the
//! engine and reports them next to the values they are expected to take.

use std::fmt;
use std::str::FromStr;

use crate::ancillarity::{
    condition_on_cell, conditional_accuracy, enumerate_ancillaries, is_function_of_minimal_sufficient,
    maximal_ancillaries, related_c, Direction,
};
use crate::certificate::ChainCertificate;
use crate::constructions::{
    conditionality_chain, mixture_chain, rewrite_lg_to_cg, separation_pair, two_layer_experiment,
};
use crate::error::Result;
use crate::fixtures;
use crate::model::{Experiment, InferenceBase, ModelBijection, StatisticPartition};
use crate::rational::Rational;
use crate::relations::{related_g, related_l, Verdict};
use crate::verify::verify_chain;
use crate::witness::{RelationKind, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DemoName {
    Lemma5,
    Theorem6,
    Theorem7,
    Theorem8,
    Lemma10,
    Accuracy,
}

impl DemoName {
    pub const ALL: [DemoName; 6] = [
        DemoName::Lemma5,
        DemoName::Theorem6,
        DemoName::Theorem7,
        DemoName::Theorem8,
        DemoName::Lemma10,
        DemoName::Accuracy,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DemoName::Lemma5 => "lemma5",
            DemoName::Theorem6 => "theorem6",
            DemoName::Theorem7 => "theorem7",
            DemoName::Theorem8 => "theorem8",
            DemoName::Lemma10 => "lemma10",
            DemoName::Accuracy => "accuracy",
        }
    }
}

impl fmt::Display for DemoName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DemoName {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        DemoName::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| format!("unknown demo {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoCheck {
    pub label: String,
    pub expected: String,
    pub actual: String,
}

impl DemoCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoReport {
    pub name: DemoName,
    pub checks: Vec<DemoCheck>,
}

impl DemoReport {
    fn new(name: DemoName) -> Self {
        DemoReport {
            name,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, label: &str, expected: &str, actual: impl Into<String>) {
        self.checks.push(DemoCheck {
            label: label.to_string(),
            expected: expected.to_string(),
            actual: actual.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(DemoCheck::ok)
    }
}

impl fmt::Display for DemoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "demo {}", self.name)?;
        for c in &self.checks {
            let status = if c.ok() { "ok" } else { "MISMATCH" };
            writeln!(f, "  [{status}] {}: expected {}, got {}", c.label, c.expected, c.actual)?;
        }
        write!(
            f,
            "{}",
            if self.passed() {
                "all checks passed"
            } else {
                "some checks FAILED"
            }
        )
    }
}

pub fn run(name: DemoName) -> Result<DemoReport> {
    match name {
        DemoName::Lemma5 => lemma5(),
        DemoName::Theorem6 => theorem6(),
        DemoName::Theorem7 => theorem7(),
        DemoName::Theorem8 => theorem8(),
        DemoName::Lemma10 => lemma10(),
        DemoName::Accuracy => accuracy(),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

fn row(e: &Experiment, t: usize) -> String {
    join(&e.densities()[t])
}

fn verdict<W>(v: &Verdict<W>) -> String {
    if v.is_ok() { "Some" } else { "None" }.to_string()
}

fn kinds(cert: &ChainCertificate) -> String {
    join(&cert.kinds())
}

fn verification(cert: &ChainCertificate) -> String {
    let report = verify_chain(cert);
    if report.passed() {
        "ok".into()
    } else {
        report.to_string()
    }
}

// Names partitions of the lemma 5 space as trivial, U or V.
fn partition_names(e: &Experiment, found: &[StatisticPartition]) -> String {
    let (u, v) = (fixtures::u_partition(e), fixtures::v_partition(e));
    let mut names: Vec<String> = found
        .iter()
        .map(|p| {
            if p.is_trivial() {
                "trivial".to_string()
            } else if *p == u {
                "U".to_string()
            } else if *p == v {
                "V".to_string()
            } else {
                format!("{:?}", p.cells())
            }
        })
        .collect();
    names.sort();
    names.join(", ")
}

fn lemma5() -> Result<DemoReport> {
    let mut r = DemoReport::new(DemoName::Lemma5);
    let (i1, i2, i3) = fixtures::lemma5_triple();
    let e1 = i1.experiment();
    let on_u = condition_on_cell(&i1, &fixtures::u_partition(e1))?;
    let on_v = condition_on_cell(&i1, &fixtures::v_partition(e1))?;
    r.check("given U=1, theta=1", "1/2, 1/2", row(on_u.experiment(), 0));
    r.check("given U=1, theta=2", "1/4, 3/4", row(on_u.experiment(), 1));
    r.check("given V=1, theta=1", "1/3, 2/3", row(on_v.experiment(), 0));
    r.check("given V=1, theta=2", "1/6, 5/6", row(on_v.experiment(), 1));
    let same = |a: &InferenceBase, b: &InferenceBase| {
        if a.canonicalize() == b.canonicalize() {
            "equal"
        } else {
            "different"
        }
    };
    r.check("I2 fixture vs conditioning on U", "equal", same(&on_u, &i2));
    r.check("I3 fixture vs conditioning on V", "equal", same(&on_v, &i3));
    r.check(
        "ancillaries",
        "U, V, trivial",
        partition_names(e1, &enumerate_ancillaries(e1)?),
    );
    r.check(
        "maximal ancillaries",
        "U, V",
        partition_names(e1, &maximal_ancillaries(e1)?),
    );
    r.check("C(I1, I2)", "Some", verdict(&related_c(&i1, &i2)?));
    r.check("C(I1, I3)", "Some", verdict(&related_c(&i1, &i3)?));
    r.check("C(I2, I3)", "None", verdict(&related_c(&i2, &i3)?));
    r.check("G(I2, I3)", "None", verdict(&related_g(&i2, &i3)));
    let l = related_l(&i2, &i3)
        .map(|w| w.c.to_string())
        .unwrap_or_else(|e| e.to_string());
    r.check("L(I2, I3) constant", "3/2", l);
    Ok(r)
}

fn accuracy() -> Result<DemoReport> {
    let mut r = DemoReport::new(DemoName::Accuracy);
    let i1 = fixtures::lemma5_i1();
    let e = i1.experiment();
    let on_u = conditional_accuracy(&i1, &fixtures::u_partition(e))?;
    let on_v = conditional_accuracy(&i1, &fixtures::v_partition(e))?;
    let show = |p: Option<&Rational>| p.map(ToString::to_string).unwrap_or_else(|| "missing".into());
    r.check("P_1(mle=1 | U=1)", "1/2", show(on_u.probability_correct("1")));
    r.check("P_2(mle=2 | U=1)", "3/4", show(on_u.probability_correct("2")));
    r.check("P_1(mle=1 | V=1)", "1/3", show(on_v.probability_correct("1")));
    r.check("P_2(mle=2 | V=1)", "5/6", show(on_v.probability_correct("2")));
    Ok(r)
}

fn theorem6() -> Result<DemoReport> {
    let mut r = DemoReport::new(DemoName::Theorem6);
    let (_, i2, i3) = fixtures::lemma5_triple();
    let c = related_l(&i2, &i3)
        .map(|w| w.c)
        .map_err(crate::error::Error::NotLikelihoodRelated)?;
    r.check("likelihood constant", "3/2", c.to_string());
    r.check(
        "two-layer weight p",
        "2/5",
        two_layer_experiment(&i2, &c)?.p.to_string(),
    );
    let chain = conditionality_chain(&i2, &i3)?;
    r.check("chain kinds", "C, C, C, C", kinds(&chain));
    r.check("verification", "ok", verification(&chain));
    let reverse = conditionality_chain(&i3, &i2)?;
    r.check("reverse chain kinds", "C, C, C, C", kinds(&reverse));
    r.check("reverse verification", "ok", verification(&reverse));
    Ok(r)
}

fn theorem7() -> Result<DemoReport> {
    let mut r = DemoReport::new(DemoName::Theorem7);
    let (_, i2, i3) = fixtures::lemma5_triple();
    let chain = mixture_chain(&i2, &i3)?;
    r.check("chain kinds", "C, S, C", kinds(&chain));
    r.check("verification", "ok", verification(&chain));
    let mut durbin = Vec::new();
    for (i, link) in chain.links.iter().enumerate() {
        if let Witness::C(w) = &link.witness {
            let cond = match w.direction {
                Direction::LeftConditions => &chain.bases[i],
                Direction::RightConditions => &chain.bases[i + 1],
            };
            let allowed = is_function_of_minimal_sufficient(&cond.experiment().canonicalize(), &w.ancillary)?;
            durbin.push(if allowed { "allowed" } else { "rejected" });
        }
    }
    r.check("Durbin restriction on C links", "rejected, rejected", durbin.join(", "));
    Ok(r)
}

fn theorem8() -> Result<DemoReport> {
    let mut r = DemoReport::new(DemoName::Theorem8);
    let (i1, i2, report) = separation_pair()?;
    r.check(
        "fixtures match construction",
        "equal",
        if (i1, i2) == fixtures::theorem8_pair() {
            "equal"
        } else {
            "different"
        },
    );
    let l = match &report.likelihood {
        Ok(w) => format!("Some({})", w.c),
        Err(_) => "None".into(),
    };
    r.check("L", "Some(1)", l);
    r.check("S", "None", verdict(&report.sufficiency));
    r.check("C", "None", verdict(&report.conditionality));
    r.check("left ancillaries", "1", report.left_ancillaries.len().to_string());
    r.check("right ancillaries", "1", report.right_ancillaries.len().to_string());
    r.check("chain kinds", "C, C, C, C", kinds(&report.chain));
    r.check(
        "verification",
        "ok",
        report.verification.to_string().split(':').next().unwrap_or(""),
    );
    Ok(r)
}

// Renames every parameter through `map` and every sample point with `tag`.
fn relabelled(base: &InferenceBase, tag: &str, map: &[(&str, &str)]) -> (InferenceBase, ModelBijection) {
    let e = base.experiment();
    let rename = |t: &String| {
        map.iter()
            .find(|(from, _)| from == t)
            .map(|(_, to)| to.to_string())
            .unwrap_or_else(|| t.clone())
    };
    let samples: Vec<String> = e.sample_space().iter().map(|x| format!("{tag}{x}")).collect();
    let params: Vec<String> = e.parameters().iter().map(rename).collect();
    let image = Experiment::new(samples.clone(), params.clone(), e.densities().to_vec()).expect("same table");
    let bijection = ModelBijection {
        sample_map: e.sample_space().iter().cloned().zip(samples).collect(),
        parameter_map: e.parameters().iter().cloned().zip(params).collect(),
    };
    (
        InferenceBase::new(image, format!("{tag}{}", base.data())).expect("same data"),
        bijection,
    )
}

fn lemma10() -> Result<DemoReport> {
    let mut r = DemoReport::new(DemoName::Lemma10);
    let (_, i2, i3) = fixtures::lemma5_triple();
    let names = [("1", "a"), ("2", "b")];
    let (b1, g1) = relabelled(&i2, "p", &names);
    let (b2, _) = relabelled(&i3, "", &names);
    let (b3, g2) = relabelled(&b2, "q", &[]);
    let l = related_l(&b1, &b2).map_err(crate::error::Error::NotLikelihoodRelated)?;
    let mut chain = ChainCertificate::single(i2.clone());
    chain.push(Witness::G(g1), b1);
    chain.push(Witness::L(l), b2);
    chain.push(Witness::G(g2), b3);
    r.check("input kinds", "G, L, G", kinds(&chain));
    r.check("input verification", "ok", verification(&chain));
    let rewritten = rewrite_lg_to_cg(&chain)?;
    r.check("rewritten kinds", "G, C, C, C, C, G", kinds(&rewritten));
    r.check("rewritten verification", "ok", verification(&rewritten));
    let only_cg = rewritten
        .kinds()
        .iter()
        .all(|k| matches!(k, RelationKind::C | RelationKind::G));
    r.check("uses only C and G", "true", only_cg.to_string());
    Ok(r)
}
