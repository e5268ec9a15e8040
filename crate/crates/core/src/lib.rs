//! Exact decision procedures for the likelihood, sufficiency,
//! conditionality and invariance relations between finite inference
//! bases, with checkable chain certificates for their equivalence
//! closures.
//!
//! All probabilities are exact nonnegative rationals ([`Rational`]).

pub mod ancillarity;
pub mod certificate;
pub mod closure;
pub mod constructions;
pub mod corpus;
pub mod demo;
pub mod error;
pub mod fixtures;
pub mod isomorphism;
pub mod model;
pub mod rational;
pub mod relations;
pub mod search;
pub mod verify;
pub mod witness;

pub use ancillarity::{
    condition_on_cell, conditional_accuracy, enumerate_ancillaries, is_ancillary, maximal_ancillaries, related_c,
    related_c_durbin, AccuracyReport, ConditionalityWitness, Direction,
};
pub use certificate::{ChainCertificate, ChainLink};
pub use closure::{build_relation_graph, components, find_chain, RelationEdge, UnionFind};
pub use constructions::{conditionality_chain, mixture_chain, rewrite_lg_to_cg, separation_pair};
pub use error::{Error, Result};
pub use isomorphism::{experiments_isomorphic, find_isomorphism};
pub use model::{Experiment, InferenceBase, ModelBijection, StatisticPartition};
pub use rational::Rational;
pub use relations::{
    minimal_sufficient_partition, related_g, related_l, related_s, LikelihoodWitness, SufficiencyWitness, Unrelated,
    Verdict,
};
pub use verify::{verify_chain, VerificationReport};
pub use witness::{relate, Orientation, RelationKind, Witness};
