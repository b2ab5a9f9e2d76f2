//! rngtest-style FIPS 140-2 block check, written the way rng-tools does
//! it: table-driven popcount, poker from nibble counters, and a runs
//! counter that holds `length - 1`. Shares no code with the crate.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub monobit: bool,
    pub poker: bool,
    pub runs: bool,
    pub long_run: bool,
}

impl Verdict {
    pub fn pass(&self) -> bool {
        self.monobit && self.poker && self.runs && self.long_run
    }

    pub fn csv_row(&self, block: usize) -> String {
        let b = |p: bool| if p { "1" } else { "0" };
        format!(
            "{block},{},{},{},{},{}",
            b(self.monobit),
            b(self.poker),
            b(self.runs),
            b(self.long_run),
            b(self.pass())
        )
    }
}

fn popcount_table() -> [u8; 256] {
    let mut t = [0u8; 256];
    for i in 1..256 {
        t[i] = (i & 1) as u8 + t[i >> 1];
    }
    t
}

/// Run lengths 1..6+ bounds from the FIPS 140-2 change notice.
const RUNS_LOW: [u32; 6] = [2315, 1114, 527, 240, 103, 103];
const RUNS_HIGH: [u32; 6] = [2685, 1386, 723, 384, 209, 209];

pub fn check_block(buf: &[u8]) -> Verdict {
    assert_eq!(buf.len(), 2500);
    let pop = popcount_table();
    let mut ones = 0u32;
    let mut poker = [0i64; 16];
    // runs[0..6] zeros, runs[6..12] ones
    let mut runs = [0u32; 12];
    let mut rlength: i32 = -1;
    let mut last_bit: u8 = 0;
    let mut longrun = false;

    for &c in buf {
        ones += u32::from(pop[c as usize]);
        poker[(c >> 4) as usize] += 1;
        poker[(c & 0xf) as usize] += 1;
        for j in (0..8).rev() {
            let bit = (c >> j) & 1;
            if rlength >= 0 && bit != last_bit {
                let bucket = rlength.min(5) as usize + 6 * last_bit as usize;
                runs[bucket] += 1;
                if rlength >= 25 {
                    longrun = true;
                }
                rlength = 0;
            } else {
                rlength += 1;
            }
            last_bit = bit;
        }
    }
    let bucket = rlength.min(5) as usize + 6 * last_bit as usize;
    runs[bucket] += 1;
    if rlength >= 25 {
        longrun = true;
    }

    let sum: i64 = poker.iter().map(|p| p * p).sum();
    // 2.16 < 16/5000 * sum - 5000 < 46.17, scaled by 5000/16 and kept exact
    // by comparing 16 * sum against 5000 * (5000 + X), X in hundredths.
    let scaled = 16 * sum * 100;
    let poker_ok = scaled > 5000 * (500_000 + 216) && scaled < 5000 * (500_000 + 4617);

    let runs_ok = (0..12).all(|i| runs[i] >= RUNS_LOW[i % 6] && runs[i] <= RUNS_HIGH[i % 6]);

    Verdict {
        monobit: ones > 9725 && ones < 10275,
        poker: poker_ok,
        runs: runs_ok,
        long_run: !longrun,
    }
}
