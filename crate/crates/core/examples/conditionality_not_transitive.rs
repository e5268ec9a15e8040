//! Conditioning one model on two different maximal ancillaries gives two
//! models that no single conditioning step relates.

use statrel::ancillarity::maximal_ancillaries;
use statrel::fixtures;
use statrel::{related_c, related_l, InferenceBase};

fn main() -> statrel::Result<()> {
    let (i1, i2, i3) = fixtures::lemma5_triple();
    println!("maximal ancillaries of I1:");
    for p in maximal_ancillaries(i1.experiment())? {
        println!("  {:?}", p.cells());
    }
    let show = |a: &InferenceBase, b: &InferenceBase, name: &str| -> statrel::Result<()> {
        match related_c(a, b)? {
            Ok(w) => println!("C({name}): related via {:?}", w.ancillary.cells()),
            Err(reason) => println!("C({name}): not related ({reason})"),
        }
        Ok(())
    };
    show(&i1, &i2, "I1, I2")?;
    show(&i1, &i3, "I1, I3")?;
    show(&i2, &i3, "I2, I3")?;
    let c = related_l(&i2, &i3).expect("conditioning preserves likelihood").c;
    println!("yet I2 and I3 have proportional likelihoods, c = {c}");
    Ok(())
}
