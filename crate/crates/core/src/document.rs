//! Versioned JSON input: a homogeneous space, a colored fan and a `B`-stable divisor.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::arith::{Rat, RatVec};
use crate::horospherical::{BDivisor, ColoredFan, ConeSpec, HoroError, HoroSpace, PolarizedEmbedding};
use crate::roots::{RootKind, RootSystem};

pub const INPUT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Syntax(String),
    #[error("unsupported schema_version {found}, expected {expected}")]
    Version { found: u32, expected: u32 },
    #[error("{location}: {source}")]
    Invalid {
        location: String,
        #[source]
        source: HoroError,
    },
}

impl DocumentError {
    fn at(location: impl Into<String>) -> impl FnOnce(HoroError) -> DocumentError {
        let location = location.into();
        move |source| DocumentError::Invalid { location, source }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootSystemDoc {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDoc {
    /// 0-based indices into `rays`.
    pub rays: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub colors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorDoc {
    pub g_stable: Vec<Rat>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub colors: BTreeMap<String, Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub root_system: RootSystemDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_names: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parabolic: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_basis: Option<Vec<Vec<Rat>>>,
    pub rays: Vec<Vec<Rat>>,
    pub cones: Vec<ConeDoc>,
    pub divisor: DivisorDoc,
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc: InputDocument = serde_json::from_str(text).map_err(|e| DocumentError::Syntax(e.to_string()))?;
        if doc.schema_version != INPUT_SCHEMA_VERSION {
            return Err(DocumentError::Version { found: doc.schema_version, expected: INPUT_SCHEMA_VERSION });
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    pub fn to_embedding(&self) -> Result<PolarizedEmbedding, DocumentError> {
        let kind: RootKind = self.root_system.kind.parse().map_err(|e| DocumentError::Invalid {
            location: "root_system.type".into(),
            source: HoroError::Roots(e),
        })?;
        let roots = RootSystem::new(kind, self.root_system.rank).map_err(|e| DocumentError::Invalid {
            location: "root_system".into(),
            source: HoroError::Roots(e),
        })?;
        let basis: Vec<RatVec> = match (&self.m_basis, kind) {
            (Some(b), _) => b.iter().map(|r| RatVec(r.clone())).collect(),
            (None, RootKind::Torus) => (0..self.root_system.rank).map(|i| RatVec::unit(self.root_system.rank, i)).collect(),
            (None, _) => {
                return Err(DocumentError::Invalid {
                    location: "m_basis".into(),
                    source: HoroError::Basis("required unless the group is a torus".into()),
                })
            }
        };
        let names = self.root_names.clone().or_else(|| default_names(&roots));
        let probe = HoroSpace::new(roots.clone(), BTreeSet::new(), Vec::new(), names.clone())
            .map_err(DocumentError::at("root_names"))?;
        let parabolic = self
            .parabolic
            .iter()
            .map(|n| probe.root_index(n))
            .collect::<Result<BTreeSet<_>, _>>()
            .map_err(DocumentError::at("parabolic"))?;
        let space = HoroSpace::new(roots, parabolic, basis, names).map_err(DocumentError::at("m_basis"))?;
        let rays: Vec<RatVec> = self.rays.iter().map(|r| RatVec(r.clone())).collect();
        let specs = self
            .cones
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let colors = c
                    .colors
                    .iter()
                    .map(|n| space.root_index(n))
                    .collect::<Result<BTreeSet<_>, _>>()
                    .map_err(DocumentError::at(format!("cones[{k}].colors")))?;
                Ok(ConeSpec { rays: c.rays.clone(), colors })
            })
            .collect::<Result<Vec<_>, DocumentError>>()?;
        let fan = ColoredFan::from_specs(&space, &rays, &specs).map_err(DocumentError::at("cones"))?;
        let colors = self
            .divisor
            .colors
            .iter()
            .map(|(n, a)| Ok((space.root_index(n)?, a.clone())))
            .collect::<Result<BTreeMap<_, _>, HoroError>>()
            .map_err(DocumentError::at("divisor.colors"))?;
        let divisor = BDivisor { g_stable: self.divisor.g_stable.clone(), colors };
        PolarizedEmbedding::new(space, rays, fan, divisor).map_err(DocumentError::at("divisor"))
    }

    /// Canonical document of an embedding; cones are listed in fan order.
    pub fn from_embedding(e: &PolarizedEmbedding, name: Option<String>) -> Self {
        let space = &e.space;
        let roots = space.roots();
        let names = space.names().to_vec();
        let index_of = |r: &RatVec| e.rays.iter().position(|x| x == r);
        let cones = e
            .fan
            .cones
            .iter()
            .map(|c| ConeDoc {
                rays: {
                    let mut idx: Vec<usize> = c.rays.iter().filter_map(index_of).collect();
                    idx.sort_unstable();
                    idx
                },
                colors: c.colors.iter().map(|&a| names[a].clone()).collect(),
            })
            .collect();
        InputDocument {
            schema_version: INPUT_SCHEMA_VERSION,
            name,
            notes: None,
            root_system: RootSystemDoc { kind: roots.kind().to_string(), rank: roots.rank() },
            root_names: (default_names(roots).as_ref() != Some(&names)).then_some(names.clone()),
            parabolic: space.parabolic().iter().map(|&a| names[a].clone()).collect(),
            m_basis: Some(space.m_basis().iter().map(|b| b.0.clone()).collect()),
            rays: e.rays.iter().map(|r| r.0.clone()).collect(),
            cones,
            divisor: DivisorDoc {
                g_stable: e.divisor.g_stable.clone(),
                colors: e.divisor.colors.iter().map(|(&a, v)| (names[a].clone(), v.clone())).collect(),
            },
        }
    }
}

fn default_names(roots: &RootSystem) -> Option<Vec<String>> {
    Some((1..=roots.simple_roots()).map(|i| format!("a{i}")).collect())
}

/// SHA-256 of the canonical document, independent of formatting, naming and cone order.
pub fn fingerprint(e: &PolarizedEmbedding) -> String {
    let canonical = InputDocument::from_embedding(e, None);
    let bytes = serde_json::to_vec(&canonical).expect("documents serialize");
    hex::encode(Sha256::digest(bytes))
}
