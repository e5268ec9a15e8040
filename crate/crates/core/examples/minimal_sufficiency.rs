//! Minimal sufficient reduction of two tosses of a coin.

use statrel::relations::reduce_experiment;
use statrel::{minimal_sufficient_partition, Experiment};

fn main() -> statrel::Result<()> {
    let e = Experiment::from_literals(
        &["HH", "HT", "TH", "TT"],
        &["3/4", "1/2"],
        &[&["9/16", "3/16", "3/16", "1/16"], &["1/4", "1/4", "1/4", "1/4"]],
    )?;
    let p = minimal_sufficient_partition(&e);
    println!("minimal sufficient partition: {:?}", p.cells());
    let (reduced, _) = reduce_experiment(&e, &p)?;
    println!("reduced experiment: {}", serde_json::to_string(&reduced)?);
    Ok(())
}
