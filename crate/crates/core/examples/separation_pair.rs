//! A Bernoulli and a truncated geometric observation with identical
//! likelihoods, related by neither sufficiency nor conditionality.

use statrel::separation_pair;

fn main() -> statrel::Result<()> {
    let (i1, i2, report) = separation_pair()?;
    println!("I1 = {}", i1.to_json());
    println!("I2 = {}", i2.to_json());
    println!("L: {:?}", report.likelihood.as_ref().map(|w| w.c.to_string()));
    println!(
        "S: {}",
        if report.sufficiency.is_ok() {
            "related"
        } else {
            "not related"
        }
    );
    println!(
        "C: {}",
        if report.conditionality.is_ok() {
            "related"
        } else {
            "not related"
        }
    );
    println!(
        "ancillaries: {} and {}",
        report.left_ancillaries.len(),
        report.right_ancillaries.len()
    );
    println!("chain {:?}: {}", report.chain.kinds(), report.verification);
    Ok(())
}
