//! Builds and checks a chain of four conditionality steps between two
//! bases that only share a likelihood function.

use statrel::fixtures;
use statrel::{conditionality_chain, verify_chain};

fn main() -> statrel::Result<()> {
    let (_, i2, i3) = fixtures::lemma5_triple();
    let chain = conditionality_chain(&i2, &i3)?;
    for (i, base) in chain.bases.iter().enumerate() {
        println!(
            "base {i}: {} points, observed {}",
            base.experiment().num_points(),
            base.data()
        );
        if let Some(link) = chain.links.get(i) {
            println!("  --{}/{:?}-->", link.kind, link.orientation);
        }
    }
    println!("{}", verify_chain(&chain));
    Ok(())
}
