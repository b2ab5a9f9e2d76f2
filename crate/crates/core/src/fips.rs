//! FIPS 140-2 statistical battery over 20 000-bit blocks.
//!
//! Acceptance bounds are those of the FIPS 140-2 change notice, as used by
//! `rngtest` from rng-tools. Bits are read most significant first within
//! each byte, bytes in stream order.

use std::io::{self, Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BLOCK_BITS: usize = 20_000;
pub const BLOCK_BYTES: usize = BLOCK_BITS / 8;

/// Exclusive bounds on the number of ones.
const MONOBIT_LOW: u32 = 9_725;
const MONOBIT_HIGH: u32 = 10_275;

/// Inclusive bounds on the sum of squared nibble counts. With
/// X = 16/5000 * sum - 5000 these are exactly 2.16 < X < 46.17.
const POKER_SUM_LOW: u64 = 1_563_176;
const POKER_SUM_HIGH: u64 = 1_576_928;

/// Inclusive bounds for runs of length 1, 2, 3, 4, 5 and 6+.
const RUN_BOUNDS: [(u32, u32); 6] = [
    (2_315, 2_685),
    (1_114, 1_386),
    (527, 723),
    (240, 384),
    (103, 209),
    (103, 209),
];

/// A run this long or longer fails the block.
const LONG_RUN: u32 = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonobitResult {
    pub ones: u32,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PokerResult {
    pub statistic: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunsResult {
    /// Runs of zeros by length 1..=5, then 6+.
    pub zeros: [u32; 6],
    pub ones: [u32; 6],
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongRunResult {
    pub max_run: u32,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FipsBlockResult {
    pub block_index: u64,
    pub monobit: MonobitResult,
    pub poker: PokerResult,
    pub runs: RunsResult,
    pub long_run: LongRunResult,
    /// Repeated 32-bit word check; `None` unless enabled.
    pub continuous: Option<bool>,
}

impl FipsBlockResult {
    pub fn passed(&self) -> bool {
        self.monobit.pass
            && self.poker.pass
            && self.runs.pass
            && self.long_run.pass
            && self.continuous.unwrap_or(true)
    }

    pub fn csv_header() -> &'static str {
        "block,monobit,poker,runs,longrun,pass"
    }

    pub fn csv_row(&self) -> String {
        let b = |p: bool| u8::from(p);
        format!(
            "{},{},{},{},{},{}",
            self.block_index,
            b(self.monobit.pass),
            b(self.poker.pass),
            b(self.runs.pass),
            b(self.long_run.pass),
            b(self.passed())
        )
    }
}

/// Run the four sub-tests on one 2500-byte block.
pub fn fips_block_tests(block: &[u8], block_index: u64) -> Result<FipsBlockResult> {
    if block.len() != BLOCK_BYTES {
        return Err(Error::WrongBlockSize(block.len()));
    }

    let ones: u32 = block.iter().map(|b| b.count_ones()).sum();
    let monobit = MonobitResult {
        ones,
        pass: ones > MONOBIT_LOW && ones < MONOBIT_HIGH,
    };

    let mut nibbles = [0u64; 16];
    for &b in block {
        nibbles[usize::from(b >> 4)] += 1;
        nibbles[usize::from(b & 0x0f)] += 1;
    }
    let sum_sq: u64 = nibbles.iter().map(|f| f * f).sum();
    let poker = PokerResult {
        statistic: 16.0 / 5000.0 * sum_sq as f64 - 5000.0,
        pass: (POKER_SUM_LOW..=POKER_SUM_HIGH).contains(&sum_sq),
    };

    let mut counts = [[0u32; 6]; 2];
    let mut max_run = 0u32;
    let mut record = |bit: u8, len: u32| {
        counts[usize::from(bit)][(len.min(6) - 1) as usize] += 1;
        max_run = max_run.max(len);
    };
    let mut current = block[0] >> 7;
    let mut len = 0u32;
    for &byte in block {
        for shift in (0..8).rev() {
            let bit = (byte >> shift) & 1;
            if bit == current {
                len += 1;
            } else {
                record(current, len);
                current = bit;
                len = 1;
            }
        }
    }
    record(current, len);

    let within = |c: &[u32; 6]| {
        c.iter()
            .zip(RUN_BOUNDS)
            .all(|(&n, (lo, hi))| (lo..=hi).contains(&n))
    };
    let runs = RunsResult {
        zeros: counts[0],
        ones: counts[1],
        pass: within(&counts[0]) && within(&counts[1]),
    };
    let long_run = LongRunResult {
        max_run,
        pass: max_run < LONG_RUN,
    };

    Ok(FipsBlockResult {
        block_index,
        monobit,
        poker,
        runs,
        long_run,
        continuous: None,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FipsRateReport {
    pub blocks_tested: u64,
    pub blocks_passed: u64,
    pub pass_rate: f64,
    pub monobit_failures: u64,
    pub poker_failures: u64,
    pub runs_failures: u64,
    pub long_run_failures: u64,
    pub continuous_failures: u64,
}

impl FipsRateReport {
    fn add(&mut self, r: &FipsBlockResult) {
        self.blocks_tested += 1;
        self.blocks_passed += u64::from(r.passed());
        self.monobit_failures += u64::from(!r.monobit.pass);
        self.poker_failures += u64::from(!r.poker.pass);
        self.runs_failures += u64::from(!r.runs.pass);
        self.long_run_failures += u64::from(!r.long_run.pass);
        self.continuous_failures += u64::from(r.continuous == Some(false));
        self.pass_rate = self.blocks_passed as f64 / self.blocks_tested as f64;
    }

    /// `blocks=N passed=M rate=R`
    pub fn summary_line(&self) -> String {
        format!(
            "blocks={} passed={} rate={:.6}",
            self.blocks_tested, self.blocks_passed, self.pass_rate
        )
    }
}

/// Stream-level options for the battery.
#[derive(Debug, Clone, Copy, Default)]
pub struct FipsBattery {
    /// Fail any block containing a 32-bit word equal to the word before
    /// it (the previous word may come from the preceding block).
    pub continuous_run: bool,
}

impl FipsBattery {
    pub fn run<R, F>(&self, mut stream: R, blocks: u64, mut on_block: F) -> Result<FipsRateReport>
    where
        R: Read,
        F: FnMut(&FipsBlockResult),
    {
        if blocks == 0 {
            return Err(Error::InvalidArgument("blocks must be at least 1".into()));
        }
        let mut report = FipsRateReport::default();
        let mut buf = [0u8; BLOCK_BYTES];
        let mut last_word: Option<u32> = None;
        for index in 0..blocks {
            if !read_block(&mut stream, &mut buf)? {
                return Err(Error::ShortStream {
                    requested: blocks,
                    partial: report,
                });
            }
            let mut result = fips_block_tests(&buf, index)?;
            if self.continuous_run {
                let mut ok = true;
                for chunk in buf.chunks_exact(4) {
                    let word = u32::from_be_bytes([chunk[0], chunk[1], chunk[2], chunk[3]]);
                    ok &= last_word != Some(word);
                    last_word = Some(word);
                }
                result.continuous = Some(ok);
            }
            on_block(&result);
            report.add(&result);
        }
        Ok(report)
    }
}

/// Fill `buf` completely; `false` if the stream ended first.
fn read_block<R: Read>(stream: &mut R, buf: &mut [u8]) -> io::Result<bool> {
    let mut filled = 0;
    while filled < buf.len() {
        match stream.read(&mut buf[filled..]) {
            Ok(0) => return Ok(false),
            Ok(n) => filled += n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(true)
}

/// Test `blocks` consecutive blocks from `stream` with default options.
pub fn fips_pass_rate<R: Read>(stream: R, blocks: u64) -> Result<FipsRateReport> {
    FipsBattery::default().run(stream, blocks, |_| {})
}

/// Same as [`FipsBattery::run`], also writing a per-block CSV.
pub fn fips_pass_rate_csv<R: Read, W: Write>(
    battery: &FipsBattery,
    stream: R,
    blocks: u64,
    mut csv: W,
) -> Result<FipsRateReport> {
    writeln!(csv, "{}", FipsBlockResult::csv_header())?;
    let mut write_err = None;
    let report = battery.run(stream, blocks, |r| {
        if write_err.is_none() {
            if let Err(e) = writeln!(csv, "{}", r.csv_row()) {
                write_err = Some(e);
            }
        }
    });
    if let Some(e) = write_err {
        return Err(e.into());
    }
    csv.flush()?;
    report
}
