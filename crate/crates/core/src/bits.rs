//! Fixed-length bit vectors.
//!
//! The same type backs two roles: the 0/1 labeling of a hypothesis over the
//! domain, and a subset of a class's hypothesis list (a version space). Both
//! roles want cheap intersection, popcount, and hashing.

use std::fmt;

const BLOCK: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    blocks: Vec<u64>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            len,
            blocks: vec![0; len.div_ceil(BLOCK)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Bits {
            len,
            blocks: vec![!0u64; len.div_ceil(BLOCK)],
        };
        b.trim();
        b
    }

    pub fn from_bools(values: &[bool]) -> Self {
        let mut b = Bits::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            if v {
                b.set(i, true);
            }
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.blocks[i / BLOCK] >> (i % BLOCK)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        if v {
            self.blocks[i / BLOCK] |= 1 << (i % BLOCK);
        } else {
            self.blocks[i / BLOCK] &= !(1 << (i % BLOCK));
        }
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// True when no bit is set.
    pub fn none(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn and(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn and_not(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    pub fn or(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    /// Complement within the fixed length.
    pub fn not(&self) -> Bits {
        let mut b = Bits {
            len: self.len,
            blocks: self.blocks.iter().map(|x| !x).collect(),
        };
        b.trim();
        b
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &b) in self.blocks.iter().enumerate() {
            if b != 0 {
                return Some(k * BLOCK + b.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(k, &b)| {
            let mut rest = b;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let i = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(k * BLOCK + i)
                }
            })
        })
    }

    pub fn to_u8_vec(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    fn trim(&mut self) {
        let spare = self.blocks.len() * BLOCK - self.len;
        if spare > 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= !0u64 >> spare;
            }
        }
    }
}

// Lexicographic order on the bit string read from position 0, which is the
// canonical order for hypotheses (so `100` sorts after `011`). Reversing each
// block makes the numeric comparison agree with the string comparison.
impl Ord for Bits {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            let ord = a.reverse_bits().cmp(&b.reverse_bits());
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}
