//! Joins two likelihood-related bases through the equal-weight mixture of
//! their experiments, and shows why the Durbin restriction blocks it.

use statrel::ancillarity::is_function_of_minimal_sufficient;
use statrel::constructions::component_ancillary;
use statrel::fixtures;
use statrel::{mixture_chain, verify_chain};

fn main() -> statrel::Result<()> {
    let (_, i2, i3) = fixtures::lemma5_triple();
    let chain = mixture_chain(&i2, &i3)?;
    println!("kinds: {:?}", chain.kinds());
    println!("{}", verify_chain(&chain));
    let mixture = chain.bases[1].experiment().canonicalize();
    let component = component_ancillary(&mixture);
    println!(
        "component ancillary is a function of the minimal sufficient statistic: {}",
        is_function_of_minimal_sufficient(&mixture, &component)?
    );
    Ok(())
}
