//! Versioned JSON document for a constructed map.
//!
//! The map is fully determined by its parameters; the document freezes the
//! derived construction data (correspondence segments, profile lengths, the
//! validation report) together with a content hash so downstream runs can
//! verify they are working with the exact same construction.

use super::correspondence::Segment;
use super::g1::MorphConfig;
use super::validate::ValidationReport;
use super::DeformationMap;
use crate::error::{CoreError, Result};
use crate::geometry::WormholeParams;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MAP_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MapPayload {
    pub version: u32,
    pub params: WormholeParams,
    pub morph: MorphConfig,
    pub lambda: f64,
    pub source_profile_len: f64,
    pub target_profile_len: f64,
    pub correspondence: Vec<Segment>,
    pub validation: ValidationReport,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MapDocument {
    pub payload: MapPayload,
    pub hash: String,
}

pub fn payload_hash(payload: &MapPayload) -> Result<String> {
    let bytes = serde_json::to_vec(payload)?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    Ok(format!("{:x}", hasher.finalize()))
}

impl MapDocument {
    pub fn from_map(map: &DeformationMap, validation: ValidationReport) -> Result<Self> {
        let payload = MapPayload {
            version: MAP_FORMAT_VERSION,
            params: map.params,
            morph: map.morph.cfg,
            lambda: map.lambda(),
            source_profile_len: map.morph.source.total(),
            target_profile_len: map.morph.target.total(),
            correspondence: map.morph.corr.segments.clone(),
            validation,
        };
        let hash = payload_hash(&payload)?;
        Ok(MapDocument { payload, hash })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: MapDocument = serde_json::from_str(text)?;
        let expect = payload_hash(&doc.payload)?;
        if expect != doc.hash {
            return Err(CoreError::Construction(format!(
                "map document hash mismatch: stored {}, recomputed {}",
                doc.hash, expect
            )));
        }
        if doc.payload.version != MAP_FORMAT_VERSION {
            return Err(CoreError::Construction(format!(
                "unsupported map document version {}",
                doc.payload.version
            )));
        }
        Ok(doc)
    }

    /// Rebuild the map and check it reproduces the frozen construction data.
    pub fn instantiate(&self) -> Result<DeformationMap> {
        let map = DeformationMap::new(self.payload.params)?;
        if map.morph.cfg != self.payload.morph {
            return Err(CoreError::Construction(
                "map document was built with different morph configuration".into(),
            ));
        }
        if map.morph.corr.segments.len() != self.payload.correspondence.len()
            || map
                .morph
                .corr
                .segments
                .iter()
                .zip(&self.payload.correspondence)
                .any(|(a, b)| {
                    (a.a0 - b.a0).abs() > 1e-12
                        || (a.b0 - b.b0).abs() > 1e-12
                        || (a.m - b.m).abs() > 1e-12
                })
        {
            return Err(CoreError::Construction(
                "rebuilt correspondence deviates from the stored document".into(),
            ));
        }
        Ok(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::validate::{validate, ValidationLevel};

    #[test]
    fn document_round_trip_and_tamper_detection() {
        let map = DeformationMap::new(WormholeParams::default()).unwrap();
        let report = validate(&map, ValidationLevel::Quick).unwrap();
        let doc = MapDocument::from_map(&map, report).unwrap();
        let json = doc.to_json().unwrap();
        let doc2 = MapDocument::from_json(&json).unwrap();
        assert_eq!(doc, doc2);
        doc2.instantiate().unwrap();

        // One-byte corruption must be caught by the hash.
        let pos = json.find("\"lambda\"").unwrap() + 12;
        let mut bad = json.into_bytes();
        bad[pos] = if bad[pos] == b'5' { b'6' } else { b'5' };
        let res = MapDocument::from_json(std::str::from_utf8(&bad).unwrap());
        assert!(res.is_err());
    }
}
