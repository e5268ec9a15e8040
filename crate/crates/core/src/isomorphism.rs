//! Exact isomorphism search between finite experiments.
//!
//! Two experiments are isomorphic when a sample bijection `g` and a
//! parameter bijection `h` carry one density table exactly onto the other:
//! `f1(θ, x) = f2(h(θ), g(x))`. The search enumerates parameter maps whose
//! rows agree as multisets, then matches columns by value. The parameter
//! step is factorial in `|Θ|` in the worst case; the models this crate
//! targets have at most a dozen parameters and far fewer in practice.

use std::collections::{BTreeMap, HashMap};

use crate::model::{Experiment, ModelBijection};
use crate::rational::Rational;
use crate::relations::Unrelated;

/// Finds a bijection pair carrying `e1` onto `e2`.
///
/// With `fix_parameters` the parameter lists must be identical and the
/// parameter map is the identity. When `data` is given, the sample map must
/// send `data.0` to `data.1`.
pub fn find_isomorphism(
    e1: &Experiment,
    e2: &Experiment,
    fix_parameters: bool,
    data: Option<(&str, &str)>,
) -> Result<ModelBijection, Unrelated> {
    if fix_parameters && e1.parameters() != e2.parameters() {
        return Err(Unrelated::ParameterMismatch);
    }
    if e1.num_points() != e2.num_points() || e1.num_parameters() != e2.num_parameters() {
        return Err(Unrelated::DimensionMismatch {
            left: (e1.num_parameters(), e1.num_points()),
            right: (e2.num_parameters(), e2.num_points()),
        });
    }
    let data = match data {
        Some((a, b)) => {
            let (Some(x1), Some(x2)) = (e1.sample_position(a), e2.sample_position(b)) else {
                return Err(Unrelated::NoBijection);
            };
            Some((x1, x2))
        }
        None => None,
    };

    let n_params = e1.num_parameters();
    if fix_parameters {
        let identity: Vec<usize> = (0..n_params).collect();
        return match_columns(e1, e2, &identity, data)
            .map(|g| bijection(e1, e2, &identity, &g))
            .ok_or(Unrelated::NoBijection);
    }

    let sorted_rows = |e: &Experiment| -> Vec<Vec<Rational>> {
        e.densities()
            .iter()
            .map(|row| {
                let mut r = row.clone();
                r.sort();
                r
            })
            .collect()
    };
    let rows1 = sorted_rows(e1);
    let rows2 = sorted_rows(e2);
    let candidates: Vec<Vec<usize>> = rows1
        .iter()
        .map(|r1| (0..n_params).filter(|&j| rows2[j] == *r1).collect())
        .collect();

    let mut assignment = vec![usize::MAX; n_params];
    let mut used = vec![false; n_params];
    let mut found = None;
    search_parameters(e1, e2, data, &candidates, 0, &mut assignment, &mut used, &mut found);
    found.ok_or(Unrelated::NoBijection)
}

#[allow(clippy::too_many_arguments)]
fn search_parameters(
    e1: &Experiment,
    e2: &Experiment,
    data: Option<(usize, usize)>,
    candidates: &[Vec<usize>],
    depth: usize,
    assignment: &mut Vec<usize>,
    used: &mut Vec<bool>,
    found: &mut Option<ModelBijection>,
) {
    if found.is_some() {
        return;
    }
    if depth == candidates.len() {
        if let Some(g) = match_columns(e1, e2, assignment, data) {
            *found = Some(bijection(e1, e2, assignment, &g));
        }
        return;
    }
    for &j in &candidates[depth] {
        if used[j] {
            continue;
        }
        used[j] = true;
        assignment[depth] = j;
        search_parameters(e1, e2, data, candidates, depth + 1, assignment, used, found);
        used[j] = false;
        if found.is_some() {
            return;
        }
    }
}

// Column of e1 at x, rewritten in e2's parameter order under `h`.
fn transported_column(e1: &Experiment, h: &[usize], x: usize) -> Vec<Rational> {
    let mut col = vec![Rational::zero(); h.len()];
    for (t, &t2) in h.iter().enumerate() {
        col[t2] = e1.density(t, x).clone();
    }
    col
}

fn match_columns(e1: &Experiment, e2: &Experiment, h: &[usize], data: Option<(usize, usize)>) -> Option<Vec<usize>> {
    let n = e1.num_points();
    let mut g = vec![usize::MAX; n];
    let mut pool: HashMap<Vec<Rational>, Vec<usize>> = HashMap::new();
    for y in (0..n).rev() {
        if data.map(|(_, x2)| x2) == Some(y) {
            continue;
        }
        pool.entry(e2.column(y)).or_default().push(y);
    }
    if let Some((x1, x2)) = data {
        if transported_column(e1, h, x1) != e2.column(x2) {
            return None;
        }
        g[x1] = x2;
    }
    for (x, target) in g.iter_mut().enumerate() {
        if data.map(|(x1, _)| x1) == Some(x) {
            continue;
        }
        let slot = pool.get_mut(&transported_column(e1, h, x))?;
        *target = slot.pop()?;
    }
    Some(g)
}

fn bijection(e1: &Experiment, e2: &Experiment, h: &[usize], g: &[usize]) -> ModelBijection {
    let sample_map: BTreeMap<String, String> = g
        .iter()
        .enumerate()
        .map(|(x, &y)| (e1.sample_space()[x].clone(), e2.sample_space()[y].clone()))
        .collect();
    let parameter_map = h
        .iter()
        .enumerate()
        .map(|(t, &u)| (e1.parameters()[t].clone(), e2.parameters()[u].clone()))
        .collect();
    ModelBijection {
        sample_map,
        parameter_map,
    }
}

/// Isomorphism test on canonical experiments.
pub fn experiments_isomorphic(
    e1: &Experiment,
    e2: &Experiment,
    fix_parameters: bool,
) -> Result<ModelBijection, Unrelated> {
    find_isomorphism(e1, e2, fix_parameters, None)
}

/// Label-free summary that agrees on isomorphic experiments: the sorted
/// list of sorted rows. Used to bucket candidates before the exact search.
pub fn isomorphism_invariant(e: &Experiment) -> Vec<Vec<Rational>> {
    let mut rows: Vec<Vec<Rational>> = e
        .densities()
        .iter()
        .map(|r| {
            let mut r = r.clone();
            r.sort();
            r
        })
        .collect();
    rows.sort();
    rows
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

    #[test]
    fn identity_is_found() {
        let e = table1();
        let w = experiments_isomorphic(&e, &e, true).unwrap();
        assert_eq!(w, ModelBijection::identity(&e));
    }

    #[test]
    fn finds_relabelling() {
        let e = table1();
        let permuted = Experiment::from_literals(
            &["d", "c", "b", "a"],
            &["1", "2"],
            &[&["2/6", "2/6", "1/6", "1/6"], &["3/12", "5/12", "3/12", "1/12"]],
        )
        .unwrap();
        let w = experiments_isomorphic(&e, &permuted, true).unwrap();
        assert_eq!(w.sample_map["(1,1)"], "a");
        assert_eq!(w.sample_map["(2,1)"], "c");
        assert!(w.transports(&e, &permuted));
        assert!(w.inverse().transports(&permuted, &e));
    }

    #[test]
    fn parameter_swap_needs_free_parameters() {
        let e = table1();
        let swapped = Experiment::from_literals(
            &["(1,1)", "(1,2)", "(2,1)", "(2,2)"],
            &["1", "2"],
            &[&["1/12", "3/12", "5/12", "3/12"], &["1/6", "1/6", "2/6", "2/6"]],
        )
        .unwrap();
        assert_eq!(experiments_isomorphic(&e, &swapped, true), Err(Unrelated::NoBijection));
        let w = experiments_isomorphic(&e, &swapped, false).unwrap();
        assert_eq!(w.parameter_map["1"], "2");
        assert!(w.transports(&e, &swapped));
    }

    #[test]
    fn conditional_tables_are_not_isomorphic() {
        let t2 =
            Experiment::from_literals(&["(1,1)", "(1,2)"], &["1", "2"], &[&["1/2", "1/2"], &["1/4", "3/4"]]).unwrap();
        let t3 =
            Experiment::from_literals(&["(1,1)", "(2,1)"], &["1", "2"], &[&["1/3", "2/3"], &["1/6", "5/6"]]).unwrap();
        assert_eq!(experiments_isomorphic(&t2, &t3, true), Err(Unrelated::NoBijection));
        assert_eq!(experiments_isomorphic(&t2, &t3, false), Err(Unrelated::NoBijection));
    }

    #[test]
    fn size_mismatch_is_reported() {
        let e = table1();
        let small = Experiment::from_literals(&["a"], &["1", "2"], &[&["1"], &["1"]]).unwrap();
        assert!(matches!(
            experiments_isomorphic(&e, &small, false),
            Err(Unrelated::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn data_constraint_is_honoured() {
        let coin = Experiment::from_literals(&["h", "t"], &["p"], &[&["1/2", "1/2"]]).unwrap();
        let w = find_isomorphism(&coin, &coin, true, Some(("h", "t"))).unwrap();
        assert_eq!(w.sample_map["h"], "t");
        let biased = Experiment::from_literals(&["h", "t"], &["p"], &[&["1/3", "2/3"]]).unwrap();
        assert!(find_isomorphism(&biased, &biased, true, Some(("h", "t"))).is_err());
    }
}
