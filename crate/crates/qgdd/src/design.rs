//! JSON interchange for design instances.
//!
//! One file holds one design: its parameters, the spread, the sorted block
//! list, and optionally the group and orbit generators it was built from.
//! All subspaces are stored as arrays of flattened row encodings, and
//! serialization is canonical so that write -> read -> write is
//! byte-identical.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gdd::GddInstance;
use crate::linalg::Subspace;
use crate::spread::Spread;

/// Current schema version written by this crate.
pub const SCHEMA_VERSION: u32 = 1;

/// The group a searched design was prescribed under.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSection {
    /// Generator matrices, one row-encoding vector per matrix.
    pub generators: Vec<Vec<u64>>,
    pub order: u64,
}

/// On-disk form of a design. Field order is serialization order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignFile {
    pub schema_version: u32,
    pub q: u32,
    pub v: u16,
    pub g: u16,
    pub k: u16,
    pub lambda: u64,
    /// True when subspace rows are flattened integer encodings; the only
    /// representation this crate reads or writes.
    pub flattened: bool,
    /// Spread elements, each as canonical basis row encodings.
    pub spread: Vec<Vec<u64>>,
    /// Blocks, sorted by canonical encoding.
    pub blocks: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSection>,
    /// One representative per block orbit, when the design came from a
    /// group search; `blocks` always stores the full expansion regardless.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbit_generators: Option<Vec<Vec<u64>>>,
}

impl DesignFile {
    /// Snapshot of an in-memory instance, without group metadata.
    pub fn from_instance(instance: &GddInstance) -> DesignFile {
        let p = instance.params();
        DesignFile {
            schema_version: SCHEMA_VERSION,
            q: p.q,
            v: p.v,
            g: p.g,
            k: p.k,
            lambda: p.lambda,
            flattened: true,
            spread: instance
                .spread()
                .elements()
                .iter()
                .map(|e| e.row_encodings().to_vec())
                .collect(),
            blocks: instance.blocks().iter().map(|b| b.row_encodings().to_vec()).collect(),
            group: None,
            orbit_generators: None,
        }
    }

    /// Decodes and revalidates: the spread must partition the points, block
    /// dimensions must match the header, and the header parameters must
    /// agree with the decoded geometry.
    pub fn to_instance(&self) -> Result<GddInstance> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::DecodeError(format!(
                "schema version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if !self.flattened {
            return Err(Error::DecodeError(
                "only flattened row encodings are supported".into(),
            ));
        }
        let elements = self
            .spread
            .iter()
            .map(|rows| Subspace::from_rows(self.q, self.v, rows))
            .collect::<Result<Vec<_>>>()?;
        let spread = Spread::from_elements(elements)?;
        if spread.group_dim() != self.g {
            return Err(Error::DecodeError(format!(
                "header says g = {} but the spread elements have dimension {}",
                self.g,
                spread.group_dim()
            )));
        }
        let blocks = self
            .blocks
            .iter()
            .map(|rows| Subspace::from_rows(self.q, self.v, rows))
            .collect::<Result<Vec<_>>>()?;
        GddInstance::new(spread, self.k, self.lambda, blocks)
    }

    /// Canonical pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("design serialization");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<DesignFile> {
        serde_json::from_str(text).map_err(|e| Error::DecodeError(e.to_string()))
    }
}
