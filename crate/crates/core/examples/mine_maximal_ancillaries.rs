//! Searches small density tables for experiments with more than one
//! maximal ancillary.

use statrel::search::{search_maximal, SearchConfig};

fn main() -> statrel::Result<()> {
    let mut config = SearchConfig::new(4, 2, 12);
    config.limit = Some(5);
    for hit in search_maximal(&config)? {
        println!("{}", serde_json::to_string(&hit.experiment)?);
        for p in &hit.maximal {
            println!("  maximal: {:?}", p.cells());
        }
    }
    Ok(())
}
