//! How accurate the maximum likelihood estimate looks depends on which
//! ancillary one conditions on.

use statrel::fixtures;
use statrel::{conditional_accuracy, StatisticPartition};

fn main() -> statrel::Result<()> {
    let base = fixtures::lemma5_i1();
    let e = base.experiment();
    let ancillaries: [(&str, StatisticPartition); 2] =
        [("U", fixtures::u_partition(e)), ("V", fixtures::v_partition(e))];
    for (name, ancillary) in ancillaries {
        let report = conditional_accuracy(&base, &ancillary)?;
        println!("given {name} = {:?}:", report.cell);
        for (theta, p) in &report.correct_selection {
            println!("  P_{theta}(mle = {theta}) = {p}");
        }
    }
    Ok(())
}
