//! Relation graph, equivalence classes and a shortest chain over a small
//! universe of bases.

use statrel::closure::equivalence_classes;
use statrel::fixtures;
use statrel::{build_relation_graph, find_chain, verify_chain, RelationKind};

fn main() -> statrel::Result<()> {
    let (i1, i2, i3) = fixtures::lemma5_triple();
    let universe = vec![i1, i2, i3];
    let edges = build_relation_graph(&universe, &[RelationKind::C])?;
    for e in &edges {
        println!("I{} --{}-- I{}", e.left + 1, e.kind, e.right + 1);
    }
    println!("classes: {:?}", equivalence_classes(&universe, &edges)?);
    let chain = find_chain(&universe, &edges, 1, 2)?.expect("same class");
    println!("I2 to I3: {:?}, {}", chain.kinds(), verify_chain(&chain));
    Ok(())
}
