//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::result::Result;
use std::time::{Duration, Instant};

use rand::Rng;
use statrel::ancillarity::{is_function_of_minimal_sufficient, ConditionalityWitness, DEFAULT_ENUMERATION_LIMIT};
use statrel::closure::{closure_pairs, components_by_reachability};
use statrel::corpus::{self, CorpusConfig};
use statrel::fixtures;
use statrel::search::{search_maximal, SearchConfig};
use statrel::verify::verify_witness;
use statrel::*;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, format!("{what} took {elapsed:?}, limit {limit:?}"))
}

fn table(e: &Experiment) -> Vec<Vec<String>> {
    e.densities()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

fn strings(rows: &[&[&str]]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
}

fn sorted(mut v: Vec<StatisticPartition>) -> Vec<StatisticPartition> {
    v.sort();
    v
}

// The conditioned side of a conditionality link.
fn conditioned<'a>(w: &ConditionalityWitness, left: &'a InferenceBase, right: &'a InferenceBase) -> &'a InferenceBase {
    match w.direction {
        Direction::LeftConditions => left,
        Direction::RightConditions => right,
    }
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let (i1, i2, i3) = fixtures::lemma5_triple();
    let e = i1.experiment();
    let (u, v) = (fixtures::u_partition(e), fixtures::v_partition(e));
    let on_u = condition_on_cell(&i1, &u).map_err(|e| e.to_string())?;
    let on_v = condition_on_cell(&i1, &v).map_err(|e| e.to_string())?;
    ensure(
        table(on_u.experiment()) == strings(&[&["1/2", "1/2"], &["1/4", "3/4"]]),
        "conditioning on U does not give Table 2",
    )?;
    ensure(
        table(on_v.experiment()) == strings(&[&["1/3", "2/3"], &["1/6", "5/6"]]),
        "conditioning on V does not give Table 3",
    )?;
    let all = enumerate_ancillaries(e).map_err(|e| e.to_string())?;
    ensure(
        sorted(all) == sorted(vec![StatisticPartition::trivial(e), u.clone(), v.clone()]),
        "ancillaries are not {trivial, U, V}",
    )?;
    let maximal = maximal_ancillaries(e).map_err(|e| e.to_string())?;
    ensure(
        sorted(maximal) == sorted(vec![u, v]),
        "maximal ancillaries are not {U, V}",
    )?;
    let c = |a: &InferenceBase, b: &InferenceBase| related_c(a, b).map(|v| v.is_ok()).unwrap_or(false);
    ensure(
        c(&i1, &i2) && c(&i1, &i3) && !c(&i2, &i3),
        "C verdicts differ from (Some, Some, None)",
    )?;
    ensure(related_g(&i2, &i3).is_err(), "G(I2, I3) holds")?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1), "lemma 5 reproduction")?;
    Ok(format!("tables, ancillaries and verdicts match in {elapsed:?}"))
}

fn criterion_2() -> Check {
    let i1 = fixtures::lemma5_i1();
    let e = i1.experiment();
    let on_u = conditional_accuracy(&i1, &fixtures::u_partition(e)).map_err(|e| e.to_string())?;
    let on_v = conditional_accuracy(&i1, &fixtures::v_partition(e)).map_err(|e| e.to_string())?;
    let got = [
        on_u.probability_correct("1"),
        on_u.probability_correct("2"),
        on_v.probability_correct("1"),
        on_v.probability_correct("2"),
    ];
    let expected = [
        Rational::new(1, 2),
        Rational::new(3, 4),
        Rational::new(1, 3),
        Rational::new(5, 6),
    ];
    for (g, x) in got.iter().zip(&expected) {
        ensure(*g == Some(x), format!("expected {x}, got {g:?}"))?;
    }
    Ok("1/2, 3/4, 1/3, 5/6".into())
}

const CORPUS_SEED: u64 = 20_240_601;
const CORPUS_SIZE: usize = 240;

fn corpus() -> Vec<(InferenceBase, InferenceBase)> {
    corpus::likelihood_corpus(CORPUS_SEED, CORPUS_SIZE, &CorpusConfig::default())
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let pairs = corpus();
    let (mut above, mut below, mut equal) = (0, 0, 0);
    for (i, (a, b)) in pairs.iter().enumerate() {
        let c = related_l(a, b).map_err(|e| format!("pair {i} not L-related: {e}"))?.c;
        match c.cmp(&Rational::one()) {
            std::cmp::Ordering::Greater => above += 1,
            std::cmp::Ordering::Less => below += 1,
            std::cmp::Ordering::Equal => equal += 1,
        }
        let chain = conditionality_chain(a, b).map_err(|e| format!("pair {i}: {e}"))?;
        let report = verify_chain(&chain);
        ensure(report.passed(), format!("pair {i}: {report}"))?;
        ensure(
            chain.kinds() == vec![RelationKind::C; 4],
            format!("pair {i}: kinds {:?}", chain.kinds()),
        )?;
    }
    ensure(above > 0 && below > 0 && equal > 0, "corpus lacks one of the c cases")?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(10), "corpus")?;
    Ok(format!(
        "{} pairs (c>1: {above}, c<1: {below}, c=1: {equal}) verified as 4-link C chains in {elapsed:?}",
        pairs.len()
    ))
}

fn criterion_4() -> Check {
    let pairs = corpus();
    for (i, (a, b)) in pairs.iter().enumerate() {
        let chain = mixture_chain(a, b).map_err(|e| format!("pair {i}: {e}"))?;
        let report = verify_chain(&chain);
        ensure(report.passed(), format!("pair {i}: {report}"))?;
        ensure(
            chain.kinds() == [RelationKind::C, RelationKind::S, RelationKind::C],
            format!("pair {i}: kinds {:?}", chain.kinds()),
        )?;
        for (k, link) in chain.links.iter().enumerate() {
            if let Witness::C(w) = &link.witness {
                let cond = conditioned(w, &chain.bases[k], &chain.bases[k + 1]);
                let durbin = is_function_of_minimal_sufficient(&cond.experiment().canonicalize(), &w.ancillary)
                    .map_err(|e| e.to_string())?;
                ensure(
                    !durbin,
                    format!("pair {i}, link {k}: ancillary passes the Durbin restriction"),
                )?;
            }
        }
    }
    Ok(format!(
        "{} mixture chains [C,S,C] verified; every C ancillary fails Durbin",
        pairs.len()
    ))
}

fn criterion_5() -> Check {
    let (_, _, report) = separation_pair().map_err(|e| e.to_string())?;
    ensure(matches!(&report.likelihood, Ok(w) if w.c.is_one()), "L is not Some(1)")?;
    ensure(report.sufficiency.is_err(), "S holds")?;
    ensure(report.conditionality.is_err(), "C holds")?;
    ensure(report.verification.passed(), report.verification.to_string())?;
    ensure(report.separates(), "report does not separate")?;
    Ok("L = Some(1), S = None, C = None, 4-link C chain verifies".into())
}

fn random_pairs(rng: &mut impl Rng, n: usize) -> Vec<(usize, usize)> {
    let count = rng.gen_range(0..=n);
    (0..count).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
}

fn criterion_6() -> Check {
    let mut rng = corpus::rng(6);
    for trial in 0..100 {
        let n = rng.gen_range(1..=8);
        let (r1, r2) = (random_pairs(&mut rng, n), random_pairs(&mut rng, n));
        let union: Vec<_> = r1.iter().chain(&r2).copied().collect();
        let mut closed: BTreeSet<(usize, usize)> = closure_pairs(n, &r1).map_err(|e| e.to_string())?;
        closed.extend(closure_pairs(n, &r2).map_err(|e| e.to_string())?);
        let closed: Vec<_> = closed.into_iter().collect();
        let direct = components(n, &union).map_err(|e| e.to_string())?;
        let via_closures = components(n, &closed).map_err(|e| e.to_string())?;
        ensure(direct == via_closures, format!("trial {trial}: Lemma 1 fails"))?;
        for pairs in [&union, &closed, &r1, &r2] {
            ensure(
                components(n, pairs).map_err(|e| e.to_string())?
                    == components_by_reachability(n, pairs).map_err(|e| e.to_string())?,
                format!("trial {trial}: union-find and BFS disagree"),
            )?;
        }
    }
    Ok("100 trials: closures commute with unions; union-find = BFS".into())
}

// A random base with one to three parameters.
fn any_base(rng: &mut impl Rng) -> InferenceBase {
    let parameters = rng.gen_range(1..=3);
    corpus::random_base(rng, &CorpusConfig::default(), parameters)
}

fn link_ok(a: &InferenceBase, b: &InferenceBase, w: Witness) -> Result<(), String> {
    verify_witness(a, b, &w)
}

fn criterion_7() -> Check {
    let cfg = CorpusConfig::default();
    let mut rng = corpus::rng(7);
    const N: usize = 100;
    for i in 0..N {
        // L: a nontrivial pair, then a split, composing constants.
        let (a, b) = corpus::likelihood_pair(&mut rng, &cfg, corpus::ConstantCase::Above);
        let c = corpus::split_point(&mut rng, &b);
        let ab = related_l(&a, &b).map_err(|e| format!("L {i}: {e}"))?;
        let bc = related_l(&b, &c).map_err(|e| format!("L {i}: {e}"))?;
        ensure(
            related_l(&a, &a).map(|w| w.c.is_one()) == Ok(true),
            format!("L {i}: not reflexive"),
        )?;
        ensure(related_l(&b, &a) == Ok(ab.inverse()), format!("L {i}: not symmetric"))?;
        ensure(related_l(&a, &c) == Ok(ab.then(&bc)), format!("L {i}: not transitive"))?;
        link_ok(&a, &c, Witness::L(ab.then(&bc)))?;

        // S: two successive splits and a relabelling with fixed parameters.
        let a = any_base(&mut rng);
        let b = corpus::split_point(&mut rng, &a);
        let split = corpus::split_point(&mut rng, &b);
        let c = corpus::relabel(&mut rng, &split, "s", false);
        ensure(related_s(&a, &a).is_ok(), format!("S {i}: not reflexive"))?;
        let ab = related_s(&a, &b).map_err(|e| format!("S {i}: {e}"))?;
        link_ok(&b, &a, Witness::S(ab.inverse())).map_err(|e| format!("S {i}: inverse {e}"))?;
        ensure(related_s(&b, &a).is_ok(), format!("S {i}: not symmetric"))?;
        let bc = related_s(&b, &c).map_err(|e| format!("S {i}: {e}"))?;
        ensure(related_s(&a, &c).is_ok(), format!("S {i}: not transitive"))?;
        let ac = ab.then(&bc).ok_or(format!("S {i}: witnesses do not compose"))?;
        link_ok(&a, &c, Witness::S(ac)).map_err(|e| format!("S {i}: composed {e}"))?;

        // G: two relabellings that also rename parameters.
        let b = corpus::relabel(&mut rng, &a, "g", true);
        let c = corpus::relabel(&mut rng, &b, "h", true);
        ensure(related_g(&a, &a).is_ok(), format!("G {i}: not reflexive"))?;
        let ab = related_g(&a, &b).map_err(|e| format!("G {i}: {e}"))?;
        let bc = related_g(&b, &c).map_err(|e| format!("G {i}: {e}"))?;
        link_ok(&b, &a, Witness::G(ab.inverse())).map_err(|e| format!("G {i}: inverse {e}"))?;
        ensure(related_g(&a, &c).is_ok(), format!("G {i}: not transitive"))?;
        let ac = ab.then(&bc).ok_or(format!("G {i}: witnesses do not compose"))?;
        link_ok(&a, &c, Witness::G(ac)).map_err(|e| format!("G {i}: composed {e}"))?;

        // C: reflexive, and symmetric on an ancillary mixture.
        let other = corpus::random_experiment(&mut rng, &cfg, a.parameters());
        let mix = corpus::ancillary_mixture(&a, &other, &Rational::new(rng.gen_range(1..5), 5));
        let c = |x: &InferenceBase, y: &InferenceBase| related_c(x, y).map(|v| v.is_ok()).unwrap_or(false);
        ensure(c(&a, &a), format!("C {i}: not reflexive"))?;
        ensure(c(&mix, &a) && c(&a, &mix), format!("C {i}: not symmetric"))?;
    }
    let (i1, i2, i3) = fixtures::lemma5_triple();
    let c = |x: &InferenceBase, y: &InferenceBase| related_c(x, y).map(|v| v.is_ok()).unwrap_or(false);
    ensure(c(&i2, &i1) && c(&i1, &i3), "Lemma 5 premises fail")?;
    ensure(!c(&i2, &i3), "C is transitive on the Lemma 5 triple")?;
    Ok(format!(
        "L, S, G laws hold on {N} instances each; C reflexive and symmetric, not transitive on Lemma 5"
    ))
}

fn criterion_8() -> Check {
    let cfg = CorpusConfig::default();
    let mut rng = corpus::rng(8);
    let (mut s_hits, mut c_hits) = (0, 0);
    const PAIRS: usize = 600;
    for i in 0..PAIRS {
        let a = any_base(&mut rng);
        let b = match i % 5 {
            0 => corpus::split_point(&mut rng, &a),
            1 => {
                let other = corpus::random_experiment(&mut rng, &cfg, a.parameters());
                corpus::ancillary_mixture(&a, &other, &Rational::new(rng.gen_range(1..4), 4))
            }
            2 => corpus::relabel(&mut rng, &a, "r", false),
            3 => corpus::random_base(&mut rng, &cfg, a.parameters().len()),
            _ => corpus::likelihood_pair(&mut rng, &cfg, corpus::ConstantCase::Equal).0,
        };
        let (a, b) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        let l = related_l(&a, &b);
        if related_s(&a, &b).is_ok() {
            s_hits += 1;
            ensure(l.is_ok(), format!("pair {i}: S without L"))?;
        }
        if let Ok(w) = related_c(&a, &b).map_err(|e| e.to_string())? {
            c_hits += 1;
            let l = l.as_ref().map_err(|_| format!("pair {i}: C without L"))?;
            let cond = conditioned(&w, &a, &b).experiment().canonicalize();
            let cell = &w.ancillary.index_cells(&cond)[w.ancillary.cell_of(conditioned(&w, &a, &b).data()).unwrap()];
            let mass = &cond.masses(cell)[0];
            let expected = match w.direction {
                Direction::LeftConditions => mass.clone(),
                Direction::RightConditions => mass.recip().unwrap(),
            };
            ensure(l.c == expected, format!("pair {i}: L constant is not the cell mass"))?;
        }
    }
    ensure(
        s_hits >= 100 && c_hits >= 100,
        format!("too few positives: S {s_hits}, C {c_hits}"),
    )?;

    const CHAINS: usize = 100;
    for i in 0..CHAINS {
        let mut cur = any_base(&mut rng);
        let mut chain = ChainCertificate::single(cur.clone());
        for step in 0..rng.gen_range(2..=5) {
            // Mixing doubles the space; keep it within the enumeration bound.
            let room = cur.experiment().num_points() + cfg.max_points <= DEFAULT_ENUMERATION_LIMIT;
            let kind = if room && rng.gen_bool(0.5) {
                RelationKind::C
            } else {
                RelationKind::S
            };
            let next = match kind {
                RelationKind::S if rng.gen_bool(0.5) => corpus::split_point(&mut rng, &cur),
                RelationKind::S => corpus::relabel(&mut rng, &cur, &format!("{step}"), false),
                _ => {
                    let other = corpus::random_experiment(&mut rng, &cfg, cur.parameters());
                    corpus::ancillary_mixture(&cur, &other, &Rational::new(rng.gen_range(1..3), 3))
                }
            };
            let (from, to) = if rng.gen_bool(0.5) {
                (&cur, &next)
            } else {
                (&next, &cur)
            };
            let witness = relate(kind, from, to)
                .map_err(|e| e.to_string())?
                .map_err(|e| format!("chain {i} step {step}: {e}"))?;
            let witness = if from == &cur { witness } else { witness.reversed() };
            chain.push(witness, next.clone());
            cur = next;
        }
        let report = verify_chain(&chain);
        ensure(report.passed(), format!("chain {i}: {report}"))?;
        for k in 0..chain.links.len() {
            ensure(
                related_l(&chain.bases[k], &chain.bases[k + 1]).is_ok(),
                format!("chain {i}: link {k} is not L-related"),
            )?;
        }
    }
    Ok(format!(
        "{PAIRS} pairs (S: {s_hits}, C: {c_hits}) imply L; {CHAINS} verified {{S,C}} chains are L-linked"
    ))
}

fn criterion_9() -> Check {
    let start = Instant::now();
    let target = fixtures::lemma5_i1().experiment().clone();
    let hits = search_maximal(&SearchConfig::new(4, 2, 12)).map_err(|e| e.to_string())?;
    let found = hits
        .iter()
        .find(|h| experiments_isomorphic(&h.experiment, &target, false).is_ok())
        .ok_or("no isomorph of Table 1 in the output")?;
    ensure(
        found.maximal.len() == 2,
        "isomorph does not have exactly two maximal ancillaries",
    )?;
    ensure(
        !found.maximal[0].refines(&found.maximal[1]) && !found.maximal[1].refines(&found.maximal[0]),
        "maximal ancillaries are comparable",
    )?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(300), "search")?;
    Ok(format!(
        "Table 1 isomorph among {} experiments in {elapsed:?}",
        hits.len()
    ))
}

fn criterion_10() -> Check {
    let cfg = CorpusConfig::default();
    let mut rng = corpus::rng(10);
    let mut rewritten_links = 0;
    for i in 0..50 {
        let mut cur = any_base(&mut rng);
        let mut chain = ChainCertificate::single(cur.clone());
        for step in 0..rng.gen_range(1..=4) {
            let (witness, next) = if rng.gen_bool(0.4) {
                let next = corpus::relabel(&mut rng, &cur, &format!("g{step}"), true);
                (
                    Witness::G(related_g(&cur, &next).map_err(|e| format!("chain {i}: {e}"))?),
                    next,
                )
            } else {
                let next = match rng.gen_range(0..3) {
                    0 => corpus::split_point(&mut rng, &cur),
                    _ => {
                        let other = corpus::random_experiment(&mut rng, &cfg, cur.parameters());
                        corpus::ancillary_mixture(&cur, &other, &Rational::new(rng.gen_range(1..6), 6))
                    }
                };
                (
                    Witness::L(related_l(&cur, &next).map_err(|e| format!("chain {i}: {e}"))?),
                    next,
                )
            };
            chain.push(witness, next.clone());
            cur = next;
        }
        // Reading every other chain backwards gives constants below one.
        let chain = if i % 2 == 0 { chain } else { chain.reversed() };
        ensure(
            verify_chain(&chain).passed(),
            format!("chain {i}: input does not verify"),
        )?;
        let out = rewrite_lg_to_cg(&chain).map_err(|e| format!("chain {i}: {e}"))?;
        let report = verify_chain(&out);
        ensure(report.passed(), format!("chain {i}: {report}"))?;
        ensure(
            out.kinds()
                .iter()
                .all(|k| matches!(k, RelationKind::C | RelationKind::G)),
            format!("chain {i}: rewritten kinds {:?}", out.kinds()),
        )?;
        ensure(
            out.first() == chain.first() && out.last() == chain.last(),
            "endpoints changed",
        )?;
        rewritten_links += out.links.len();
    }
    Ok(format!(
        "50 {{L,G}} chains rewritten into {rewritten_links} verified C/G links"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Lemma 5 reproduction", criterion_1),
        ("conditional accuracy", criterion_2),
        ("likelihood via conditionality chains", criterion_3),
        ("likelihood via mixture chains", criterion_4),
        ("separation pair", criterion_5),
        ("closure of unions", criterion_6),
        ("equivalence laws", criterion_7),
        ("containments in L", criterion_8),
        ("maximal-ancillary search", criterion_9),
        ("L/G to C/G rewriting", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {reason}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
