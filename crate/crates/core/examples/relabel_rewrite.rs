//! Rewrites a chain of likelihood and relabelling steps into
//! conditionality and relabelling steps.

use statrel::corpus::{self, CorpusConfig};
use statrel::{related_g, related_l, rewrite_lg_to_cg, verify_chain, ChainCertificate, Witness};

fn main() -> statrel::Result<()> {
    let mut rng = corpus::rng(42);
    let cfg = CorpusConfig::default();
    let (a, b) = corpus::likelihood_pair(&mut rng, &cfg, corpus::ConstantCase::Below);
    let c = corpus::relabel(&mut rng, &b, "new-", true);
    let mut chain = ChainCertificate::single(a.clone());
    chain.push(Witness::L(related_l(&a, &b).expect("generated as a pair")), b.clone());
    chain.push(Witness::G(related_g(&b, &c).expect("relabelled copy")), c);
    println!("input {:?}: {}", chain.kinds(), verify_chain(&chain));
    let rewritten = rewrite_lg_to_cg(&chain)?;
    println!("output {:?}: {}", rewritten.kinds(), verify_chain(&rewritten));
    Ok(())
}
