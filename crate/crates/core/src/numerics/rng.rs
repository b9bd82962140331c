// SPDX-License-Identifier: Apache-2.0

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const UNIT: f64 = 1.0 / (1u64 << 53) as f64;

/// splitmix64 state. The output stream depends only on the seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngState {
    state: u64,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        RngState { state: seed }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in the open interval (0, 1): the top 53 bits scaled by
    /// 2^-53, with an exact zero replaced by 2^-53.
    pub fn next_uniform(&mut self) -> f64 {
        let u = (self.next_u64() >> 11) as f64 * UNIT;
        if u == 0.0 {
            UNIT
        } else {
            u
        }
    }
}
