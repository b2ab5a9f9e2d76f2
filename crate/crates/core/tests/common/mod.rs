//! Test-only oracles, independent of the crate's implementation paths.
#![allow(dead_code)]

pub mod corpus;
pub mod fips_oracle;
pub mod sha256;

use siderand::conditioner::{Digest32, Sha256Hasher};

/// Plugs the reference SHA-256 into the conditioner.
pub struct ReferenceSha256;

impl Sha256Hasher for ReferenceSha256 {
    fn hash(&self, parts: &[&[u8]]) -> Digest32 {
        sha256::digest(&parts.concat())
    }
}

/// Parse big-endian u64 deltas back out of a serialized trace.
pub fn parse_trace_bytes(bytes: &[u8]) -> Option<Vec<u64>> {
    if !bytes.len().is_multiple_of(8) {
        return None;
    }
    Some(
        bytes
            .chunks(8)
            .map(|c| c.iter().fold(0u64, |acc, &b| (acc << 8) | u64::from(b)))
            .collect(),
    )
}
