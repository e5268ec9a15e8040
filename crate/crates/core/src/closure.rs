//! Equivalence closure of relation edge sets over a finite universe of
//! inference bases, and shortest-chain search.
//!
//! A finite universe only sees the part of a closure whose chains stay
//! inside it, so components here are a lower bound on the closure over all
//! inference bases. Chains through auxiliary bases come from
//! [`crate::constructions`].

use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::ChainCertificate;
use crate::error::{Error, Result};
use crate::model::InferenceBase;
use crate::witness::{relate, RelationKind, Witness};

/// Disjoint sets with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

fn check_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<()> {
    for &(a, b) in pairs {
        for index in [a, b] {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, len: n });
            }
        }
    }
    Ok(())
}

fn sorted_classes(mut classes: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort();
    classes
}

/// Classes of the smallest equivalence relation on `0..n` containing
/// `pairs`, sorted by least member.
pub fn components(n: usize, pairs: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    check_pairs(n, pairs)?;
    let mut uf = UnionFind::new(n);
    for &(a, b) in pairs {
        uf.union(a, b);
    }
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        let root = uf.find(x);
        classes[root].push(x);
    }
    Ok(sorted_classes(classes.into_iter().filter(|c| !c.is_empty()).collect()))
}

/// Same classes computed by breadth-first reachability over the
/// symmetrized pairs, i.e. straight from the chain characterization.
pub fn components_by_reachability(n: usize, pairs: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    check_pairs(n, pairs)?;
    let adjacency = adjacency(n, pairs);
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut class = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &adjacency[x] {
                if !seen[y] {
                    seen[y] = true;
                    class.push(y);
                    queue.push_back(y);
                }
            }
        }
        classes.push(class);
    }
    Ok(sorted_classes(classes))
}

// Neighbours with the index of the pair that joins them.
fn adjacency(n: usize, pairs: &[(usize, usize)]) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(a, b)) in pairs.iter().enumerate() {
        adj[a].push((b, i));
        adj[b].push((a, i));
    }
    adj
}

/// Every ordered pair in the generated equivalence relation, reflexive
/// pairs included.
pub fn closure_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<BTreeSet<(usize, usize)>> {
    let mut out = BTreeSet::new();
    for class in components(n, pairs)? {
        for &a in &class {
            for &b in &class {
                out.insert((a, b));
            }
        }
    }
    Ok(out)
}

/// A witnessed pair of universe members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationEdge {
    pub left: usize,
    pub right: usize,
    pub kind: RelationKind,
    pub witness: Witness,
}

fn edge_pairs(edges: &[RelationEdge]) -> Vec<(usize, usize)> {
    edges.iter().map(|e| (e.left, e.right)).collect()
}

pub fn equivalence_classes(universe: &[InferenceBase], edges: &[RelationEdge]) -> Result<Vec<Vec<usize>>> {
    components(universe.len(), &edge_pairs(edges))
}

/// Shortest chain from `from` to `to` over the undirected edges. Edges
/// walked against their direction contribute reversed witnesses.
pub fn find_chain(
    universe: &[InferenceBase],
    edges: &[RelationEdge],
    from: usize,
    to: usize,
) -> Result<Option<ChainCertificate>> {
    let n = universe.len();
    let pairs = edge_pairs(edges);
    check_pairs(n, &pairs)?;
    check_pairs(n, &[(from, to)])?;
    let adjacency = adjacency(n, &pairs);
    let mut previous: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &(y, edge) in &adjacency[x] {
            if !seen[y] {
                seen[y] = true;
                previous[y] = Some((x, edge));
                queue.push_back(y);
            }
        }
    }
    if !seen[to] {
        return Ok(None);
    }
    let mut path = vec![to];
    let mut steps = Vec::new();
    let mut cursor = to;
    while let Some((prev, edge)) = previous[cursor] {
        steps.push((prev, edge));
        path.push(prev);
        cursor = prev;
    }
    path.reverse();
    steps.reverse();
    let mut cert = ChainCertificate::single(universe[from].clone());
    for (&(prev, edge), &next) in steps.iter().zip(&path[1..]) {
        let e = &edges[edge];
        let witness = if e.left == prev && e.right == next {
            e.witness.clone()
        } else {
            e.witness.reversed()
        };
        cert.push(witness, universe[next].clone());
    }
    Ok(Some(cert))
}

/// Runs each selected decision procedure on every unordered pair `i < j`.
/// Pairs are checked in parallel; the result is ordered by `(i, j, kind)`.
pub fn build_relation_graph(universe: &[InferenceBase], kinds: &[RelationKind]) -> Result<Vec<RelationEdge>> {
    let kinds: BTreeSet<RelationKind> = kinds.iter().copied().collect();
    let pairs: Vec<(usize, usize)> = (0..universe.len())
        .flat_map(|i| ((i + 1)..universe.len()).map(move |j| (i, j)))
        .collect();
    let per_pair: Vec<Result<Vec<RelationEdge>>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut found = Vec::new();
            for &kind in &kinds {
                if let Ok(witness) = relate(kind, &universe[i], &universe[j])? {
                    found.push(RelationEdge {
                        left: i,
                        right: j,
                        kind,
                        witness,
                    });
                }
            }
            Ok(found)
        })
        .collect();
    let mut edges = Vec::new();
    for found in per_pair {
        edges.extend(found?);
    }
    Ok(edges)
}
