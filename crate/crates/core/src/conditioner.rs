//! Trace serialization and the SHA-256 conditioning chain.
//!
//! A trace is serialized as big-endian `u64` deltas in collection order.
//! The first digest is `H(trace)`; every following digest is
//! `H(previous ‖ trace)`, for `stretch` rounds.

use std::io::{self, Write};

use sha2::{Digest, Sha256};

use crate::collector::TimingTrace;
use crate::error::{Error, Result};

/// Minimum number of distinct runtimes a trace needs before any seed bytes
/// are emitted.
pub const DEFAULT_QUALITY_FLOOR: usize = 20;

pub const DIGEST_LEN: usize = 32;

pub type Digest32 = [u8; DIGEST_LEN];

/// SHA-256 over the concatenation of `parts`.
///
/// Abstracted so a second, independent implementation can be swapped in
/// when checking the chain.
pub trait Sha256Hasher {
    fn hash(&self, parts: &[&[u8]]) -> Digest32;
}

/// The `sha2` crate implementation.
#[derive(Debug, Default, Clone, Copy)]
pub struct RustCryptoSha256;

impl Sha256Hasher for RustCryptoSha256 {
    fn hash(&self, parts: &[&[u8]]) -> Digest32 {
        let mut h = Sha256::new();
        for p in parts {
            h.update(p);
        }
        h.finalize().into()
    }
}

/// Conditioned seed material.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedOutput {
    digests: Vec<Digest32>,
    source_fingerprint: Digest32,
}

impl SeedOutput {
    pub fn digests(&self) -> &[Digest32] {
        &self.digests
    }

    pub fn total_bytes(&self) -> usize {
        self.digests.len() * DIGEST_LEN
    }

    /// Hash of the trace's config and timer spec. Not part of the seed.
    pub fn source_fingerprint(&self) -> &Digest32 {
        &self.source_fingerprint
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.digests.concat()
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.to_bytes())
    }

    pub fn write_raw<W: Write>(&self, mut out: W) -> io::Result<()> {
        for d in &self.digests {
            out.write_all(d)?;
        }
        out.flush()
    }

    pub fn write_hex<W: Write>(&self, mut out: W) -> io::Result<()> {
        for d in &self.digests {
            out.write_all(hex::encode(d).as_bytes())?;
        }
        out.flush()
    }
}

/// Big-endian 8-byte encoding of every delta, in order.
pub fn serialize_trace(trace: &TimingTrace) -> Result<Vec<u8>> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(trace.samples().iter().flat_map(|d| d.to_be_bytes()).collect())
}

/// Condition `trace` into `stretch + 1` chained digests, where `stretch`
/// comes from the trace's config.
///
/// Fails with [`Error::InsufficientEntropy`] before hashing anything if the
/// trace has fewer than `quality_floor` distinct deltas.
pub fn condition(trace: &TimingTrace, quality_floor: usize) -> Result<SeedOutput> {
    condition_with(&RustCryptoSha256, trace, quality_floor)
}

pub fn condition_with<H: Sha256Hasher>(
    hasher: &H,
    trace: &TimingTrace,
    quality_floor: usize,
) -> Result<SeedOutput> {
    let bytes = serialize_trace(trace)?;
    let distinct = trace.distinct_count();
    if distinct < quality_floor {
        return Err(Error::InsufficientEntropy {
            distinct,
            floor: quality_floor,
        });
    }

    let stretch = trace.config().stretch;
    let mut digests = Vec::with_capacity(stretch + 1);
    let mut digest = hasher.hash(&[&bytes]);
    digests.push(digest);
    for _ in 0..stretch {
        digest = hasher.hash(&[&digest, &bytes]);
        digests.push(digest);
    }

    Ok(SeedOutput {
        digests,
        source_fingerprint: fingerprint(hasher, trace)?,
    })
}

fn fingerprint<H: Sha256Hasher>(hasher: &H, trace: &TimingTrace) -> Result<Digest32> {
    let provenance = serde_json::to_vec(&(trace.config(), trace.timer()))?;
    Ok(hasher.hash(&[&provenance]))
}

/// Condition and then write raw bytes to `sink`. Nothing is written unless
/// conditioning succeeds.
pub fn condition_into<W: Write>(
    trace: &TimingTrace,
    quality_floor: usize,
    sink: W,
) -> Result<SeedOutput> {
    let seed = condition(trace, quality_floor)?;
    seed.write_raw(sink)?;
    Ok(seed)
}

/// The counter-hash reference stream: a running SHA-256 state is primed
/// with `"0"`, then for each `i` in `1..=count` it absorbs the decimal text
/// of `i` and the digest so far is emitted. Its output is a known-good
/// input for the FIPS battery.
pub fn mk0_stream(count: u64) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(usize::try_from(count).unwrap_or(0) * DIGEST_LEN);
    write_mk0(count, &mut out)?;
    Ok(out)
}

pub fn write_mk0<W: Write>(count: u64, mut out: W) -> Result<()> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let mut h = Sha256::new();
    h.update(b"0");
    let mut text = itoa_buf();
    for i in 1..=count {
        h.update(format_decimal(i, &mut text));
        out.write_all(&h.clone().finalize())?;
    }
    out.flush()?;
    Ok(())
}

fn itoa_buf() -> [u8; 20] {
    [0; 20]
}

fn format_decimal(mut n: u64, buf: &mut [u8; 20]) -> &[u8] {
    let mut pos = buf.len();
    loop {
        pos -= 1;
        buf[pos] = b'0' + (n % 10) as u8;
        n /= 10;
        if n == 0 {
            break;
        }
    }
    &buf[pos..]
}
