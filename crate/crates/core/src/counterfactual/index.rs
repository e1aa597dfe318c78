use std::fmt;

use super::CounterfactualError;

/// Number of LP columns: `x`, four potential outcomes and `z`, all binary.
pub const NUM_COLUMNS: usize = 64;

/// Cell `(x, y00, y01, y10, y11 | z)` of the joint counterfactual
/// distribution, where `yab` is the potential outcome `Y(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CounterfactualIndex {
    pub x: u8,
    pub y00: u8,
    pub y01: u8,
    pub y10: u8,
    pub y11: u8,
    pub z: u8,
}

impl CounterfactualIndex {
    /// Column `x·32 + y00·16 + y01·8 + y10·4 + y11·2 + z`.
    pub fn encode(&self) -> usize {
        debug_assert!([self.x, self.y00, self.y01, self.y10, self.y11, self.z].iter().all(|&b| b < 2));
        (self.x as usize) << 5
            | (self.y00 as usize) << 4
            | (self.y01 as usize) << 3
            | (self.y10 as usize) << 2
            | (self.y11 as usize) << 1
            | self.z as usize
    }

    pub fn decode(column: usize) -> Result<Self, CounterfactualError> {
        if column >= NUM_COLUMNS {
            return Err(CounterfactualError::ColumnOutOfRange(column));
        }
        let bit = |k: usize| ((column >> k) & 1) as u8;
        Ok(Self { x: bit(5), y00: bit(4), y01: bit(3), y10: bit(2), y11: bit(1), z: bit(0) })
    }

    /// `Y(x', z')` for the given arm.
    pub fn outcome(&self, x: u8, z: u8) -> u8 {
        match (x, z) {
            (0, 0) => self.y00,
            (0, 1) => self.y01,
            (1, 0) => self.y10,
            (1, 1) => self.y11,
            _ => panic!("binary arm expected, got ({x}, {z})"),
        }
    }

    /// The outcome revealed by the observed `(X, Z)`.
    pub fn observed_outcome(&self) -> u8 {
        self.outcome(self.x, self.z)
    }

    /// Whether `Y(x, 0) = Y(x, 1)` for both `x`.
    pub fn satisfies_exclusion(&self) -> bool {
        self.y00 == self.y01 && self.y10 == self.y11
    }

    /// All 64 cells in column order.
    pub fn all() -> impl Iterator<Item = Self> {
        (0..NUM_COLUMNS).map(|c| Self::decode(c).expect("in range"))
    }
}

impl fmt::Display for CounterfactualIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q({},{}{}{}{}|{})", self.x, self.y00, self.y01, self.y10, self.y11, self.z)
    }
}

pub fn encode_index(idx: CounterfactualIndex) -> usize {
    idx.encode()
}

pub fn decode_index(column: usize) -> Result<CounterfactualIndex, CounterfactualError> {
    CounterfactualIndex::decode(column)
}
