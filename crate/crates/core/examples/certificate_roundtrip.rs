//! Certificates survive a JSON round trip and are rechecked from scratch.

use statrel::fixtures;
use statrel::{conditionality_chain, verify_chain, ChainCertificate};

fn main() -> statrel::Result<()> {
    let (i1, i2, _) = fixtures::lemma5_triple();
    let chain = conditionality_chain(&i1, &i2)?;
    let text = chain.to_json();
    let parsed = ChainCertificate::from_json(&text).expect("own output parses");
    assert_eq!(parsed.to_json(), text);
    println!("{} bytes, {}", text.len(), verify_chain(&parsed));
    Ok(())
}
