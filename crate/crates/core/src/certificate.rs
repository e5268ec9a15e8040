//! Chain certificates: explicit sequences of inference bases with one
//! witness per adjacent pair.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{InferenceBase, RawInferenceBase};
use crate::witness::{Orientation, RelationKind, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLink {
    pub kind: RelationKind,
    pub witness: Witness,
    pub orientation: Orientation,
}

impl ChainLink {
    pub fn new(witness: Witness) -> Self {
        ChainLink {
            kind: witness.kind(),
            orientation: witness.orientation(),
            witness,
        }
    }
}

/// Link `i` relates `bases[i]` to `bases[i + 1]`; its witness reads in that
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainCertificate {
    pub bases: Vec<InferenceBase>,
    pub links: Vec<ChainLink>,
}

#[derive(Deserialize)]
struct RawCertificate {
    bases: Vec<RawInferenceBase>,
    links: Vec<ChainLink>,
}

/// Why a certificate file could not be turned into a [`ChainCertificate`].
#[derive(Debug, thiserror::Error)]
pub enum CertificateParseError {
    #[error("malformed certificate: {0}")]
    Json(#[from] serde_json::Error),
    #[error("base {index} is invalid: {source}")]
    Base { index: usize, source: Error },
}

impl ChainCertificate {
    /// A chain of one base and no links.
    pub fn single(base: InferenceBase) -> Self {
        ChainCertificate {
            bases: vec![base],
            links: Vec::new(),
        }
    }

    pub fn first(&self) -> Option<&InferenceBase> {
        self.bases.first()
    }

    pub fn last(&self) -> Option<&InferenceBase> {
        self.bases.last()
    }

    pub fn kinds(&self) -> Vec<RelationKind> {
        self.links.iter().map(|l| l.kind).collect()
    }

    pub fn push(&mut self, witness: Witness, next: InferenceBase) {
        self.links.push(ChainLink::new(witness));
        self.bases.push(next);
    }

    /// Appends `other`, whose first base must equal this chain's last base.
    pub fn extend(&mut self, other: ChainCertificate) {
        let mut bases = other.bases.into_iter();
        if let Some(first) = bases.next() {
            debug_assert_eq!(self.bases.last(), Some(&first));
        }
        self.bases.extend(bases);
        self.links.extend(other.links);
    }

    /// The same chain read from the other end.
    pub fn reversed(&self) -> Self {
        ChainCertificate {
            bases: self.bases.iter().rev().cloned().collect(),
            links: self
                .links
                .iter()
                .rev()
                .map(|l| ChainLink::new(l.witness.reversed()))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificates always serialize")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates always serialize")
    }

    /// Parses a certificate, reporting which inlined base fails validation.
    pub fn from_json(text: &str) -> std::result::Result<Self, CertificateParseError> {
        let raw: RawCertificate = serde_json::from_str(text)?;
        let bases = raw
            .bases
            .into_iter()
            .enumerate()
            .map(|(index, b)| {
                InferenceBase::try_from(b).map_err(|source| CertificateParseError::Base { index, source })
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(ChainCertificate {
            bases,
            links: raw.links,
        })
    }
}

pub(crate) fn check_shape(cert: &ChainCertificate) -> Result<()> {
    if cert.bases.is_empty() && !cert.links.is_empty() {
        return Err(Error::LinkVerificationFailed {
            index: 0,
            reason: "links without bases".into(),
        });
    }
    if !cert.bases.is_empty() && cert.links.len() + 1 != cert.bases.len() {
        return Err(Error::LinkVerificationFailed {
            index: cert.links.len().min(cert.bases.len()),
            reason: format!("{} links for {} bases", cert.links.len(), cert.bases.len()),
        });
    }
    Ok(())
}
