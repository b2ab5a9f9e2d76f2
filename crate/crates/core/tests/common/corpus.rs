//! Deterministic byte corpus for battery equivalence checks. Blocks
//! cycle through generators tuned to land near each sub-test's bounds so
//! that verdicts are mixed.

pub const BLOCKS: usize = 120;

pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// True with probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        ((self.next_u64() >> 11) as f64) / ((1u64 << 53) as f64) < p
    }
}

fn bits_to_bytes(bits: &[u8]) -> Vec<u8> {
    bits.chunks(8)
        .map(|c| c.iter().fold(0u8, |acc, &b| (acc << 1) | b))
        .collect()
}

pub fn block(index: usize) -> Vec<u8> {
    let mut rng = SplitMix64(0x5EED_0000 + index as u64);
    let step = (index / 6) as f64;
    let mut bits = vec![0u8; 20_000];
    match index % 6 {
        // Unbiased.
        0 => bits.iter_mut().for_each(|b| *b = rng.chance(0.5) as u8),
        // Ones bias straddling the monobit bound.
        1 => {
            let p = 0.505 + 0.0008 * step;
            bits.iter_mut().for_each(|b| *b = rng.chance(p) as u8);
        }
        // Sticky bits: runs get longer.
        2 => {
            let stay = 0.5 + 0.004 * step;
            let mut cur = rng.chance(0.5) as u8;
            for b in bits.iter_mut() {
                if !rng.chance(stay) {
                    cur ^= 1;
                }
                *b = cur;
            }
        }
        // Nibble bias for poker.
        3 => {
            let favour = 0.0625 + 0.0012 * step;
            for nib in bits.chunks_mut(4) {
                let v = if rng.chance(favour) { 0xA } else { rng.next_u64() & 0xF };
                for (k, b) in nib.iter_mut().enumerate() {
                    *b = ((v >> (3 - k)) & 1) as u8;
                }
            }
        }
        // Random data with an inserted run of 23..=30.
        4 => {
            bits.iter_mut().for_each(|b| *b = rng.chance(0.5) as u8);
            let len = 23 + (index / 6) % 8;
            let start = (rng.next_u64() % (20_000 - 40) as u64) as usize + 1;
            let v = rng.chance(0.5) as u8;
            bits[start - 1] = v ^ 1;
            bits[start..start + len].iter_mut().for_each(|b| *b = v);
            bits[start + len] = v ^ 1;
        }
        // Anti-sticky: too many short runs.
        _ => {
            let stay = 0.5 - 0.003 * step;
            let mut cur = 0u8;
            for b in bits.iter_mut() {
                if !rng.chance(stay) {
                    cur ^= 1;
                }
                *b = cur;
            }
        }
    }
    bits_to_bytes(&bits)
}

pub fn all_blocks() -> Vec<u8> {
    (0..BLOCKS).flat_map(block).collect()
}
