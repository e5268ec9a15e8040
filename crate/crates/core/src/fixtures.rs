//! Built-in example bases, shipped as JSON so that loading them also
//! exercises the parser.
//!
//! * `lemma5_I1`: the four-point model on `{1,2} × {1,2}` with two
//!   incomparable maximal ancillaries, observed at `(1,1)`.
//! * `lemma5_I2`, `lemma5_I3`: its conditional models given the first and
//!   second coordinate, written on the full four-point space.
//! * `theorem8_I1`, `theorem8_I2`: a Bernoulli and a truncated geometric
//!   base with proportional likelihoods but only trivial ancillaries.

use crate::model::{Experiment, InferenceBase, StatisticPartition};

pub const LEMMA5_I1: &str = include_str!("../fixtures/lemma5_I1.json");
pub const LEMMA5_I2: &str = include_str!("../fixtures/lemma5_I2.json");
pub const LEMMA5_I3: &str = include_str!("../fixtures/lemma5_I3.json");
pub const THEOREM8_I1: &str = include_str!("../fixtures/theorem8_I1.json");
pub const THEOREM8_I2: &str = include_str!("../fixtures/theorem8_I2.json");

/// Every fixture by file stem.
pub const ALL: [(&str, &str); 5] = [
    ("lemma5_I1", LEMMA5_I1),
    ("lemma5_I2", LEMMA5_I2),
    ("lemma5_I3", LEMMA5_I3),
    ("theorem8_I1", THEOREM8_I1),
    ("theorem8_I2", THEOREM8_I2),
];

fn load(text: &str) -> InferenceBase {
    serde_json::from_str(text).expect("built-in fixture is valid")
}

pub fn lemma5_i1() -> InferenceBase {
    load(LEMMA5_I1)
}

pub fn lemma5_i2() -> InferenceBase {
    load(LEMMA5_I2)
}

pub fn lemma5_i3() -> InferenceBase {
    load(LEMMA5_I3)
}

pub fn lemma5_triple() -> (InferenceBase, InferenceBase, InferenceBase) {
    (lemma5_i1(), lemma5_i2(), lemma5_i3())
}

pub fn theorem8_pair() -> (InferenceBase, InferenceBase) {
    (load(THEOREM8_I1), load(THEOREM8_I2))
}

// Labels look like "(i,j)".
fn coordinate(label: &str, which: usize) -> String {
    label[1..label.len() - 1]
        .split(',')
        .nth(which)
        .expect("label of the form (i,j)")
        .to_string()
}

/// Partition of the lemma 5 space by the first coordinate.
pub fn u_partition(e: &Experiment) -> StatisticPartition {
    StatisticPartition::from_statistic(e, |l| coordinate(l, 0))
}

/// Partition of the lemma 5 space by the second coordinate.
pub fn v_partition(e: &Experiment) -> StatisticPartition {
    StatisticPartition::from_statistic(e, |l| coordinate(l, 1))
}
