//! Relation kinds and the tagged witness values that certify them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ancillarity::{related_c, related_c_durbin, ConditionalityWitness, Direction};
use crate::error::Result;
use crate::model::{InferenceBase, ModelBijection};
use crate::relations::{related_g, related_l, related_s, LikelihoodWitness, SufficiencyWitness, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationKind {
    L,
    S,
    C,
    #[serde(rename = "C_durbin")]
    CDurbin,
    G,
}

impl RelationKind {
    pub const ALL: [RelationKind; 5] = [
        RelationKind::L,
        RelationKind::S,
        RelationKind::C,
        RelationKind::CDurbin,
        RelationKind::G,
    ];
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::L => "L",
            RelationKind::S => "S",
            RelationKind::C => "C",
            RelationKind::CDurbin => "C_durbin",
            RelationKind::G => "G",
        })
    }
}

impl FromStr for RelationKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "L" | "l" => Ok(RelationKind::L),
            "S" | "s" => Ok(RelationKind::S),
            "C" | "c" => Ok(RelationKind::C),
            "C_durbin" | "C-durbin" | "c-durbin" | "c_durbin" => Ok(RelationKind::CDurbin),
            "G" | "g" => Ok(RelationKind::G),
            other => Err(format!("unknown relation kind {other:?}")),
        }
    }
}

/// Certificate for one related pair `(left, right)`, tagged by kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Witness {
    L(LikelihoodWitness),
    S(SufficiencyWitness),
    C(ConditionalityWitness),
    #[serde(rename = "C_durbin")]
    CDurbin(ConditionalityWitness),
    G(ModelBijection),
}

impl Witness {
    pub fn kind(&self) -> RelationKind {
        match self {
            Witness::L(_) => RelationKind::L,
            Witness::S(_) => RelationKind::S,
            Witness::C(_) => RelationKind::C,
            Witness::CDurbin(_) => RelationKind::CDurbin,
            Witness::G(_) => RelationKind::G,
        }
    }

    /// Witness for the swapped pair `(right, left)`.
    pub fn reversed(&self) -> Witness {
        match self {
            Witness::L(w) => Witness::L(w.inverse()),
            Witness::S(w) => Witness::S(w.inverse()),
            Witness::C(w) => Witness::C(w.reversed()),
            Witness::CDurbin(w) => Witness::CDurbin(w.reversed()),
            Witness::G(w) => Witness::G(w.inverse()),
        }
    }

    pub fn orientation(&self) -> Orientation {
        match self {
            Witness::C(w) | Witness::CDurbin(w) => match w.direction {
                Direction::LeftConditions => Orientation::LeftConditions,
                Direction::RightConditions => Orientation::RightConditions,
            },
            _ => Orientation::Forward,
        }
    }
}

/// Which side of a link is conditioned; `Forward` for the symmetric kinds,
/// whose witnesses always read from the left base to the right one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    Forward,
    LeftConditions,
    RightConditions,
}

/// Runs the decision procedure for `kind` on the ordered pair.
pub fn relate(kind: RelationKind, i1: &InferenceBase, i2: &InferenceBase) -> Result<Verdict<Witness>> {
    Ok(match kind {
        RelationKind::L => related_l(i1, i2).map(Witness::L),
        RelationKind::S => related_s(i1, i2).map(Witness::S),
        RelationKind::C => related_c(i1, i2)?.map(Witness::C),
        RelationKind::CDurbin => related_c_durbin(i1, i2)?.map(Witness::CDurbin),
        RelationKind::G => related_g(i1, i2).map(Witness::G),
    })
}
