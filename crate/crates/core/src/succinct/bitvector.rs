//! Plain bitvector with a two-level rank directory and sampled select.
//!
//! Positions are 1-based throughout: `rank(i, b)` counts occurrences of `b`
//! in positions `1..=i` and `select(j, b)` returns the position of the
//! `j`-th occurrence. The raw payload is kept as little-endian 64-bit limbs
//! so it can be written out verbatim; the directories are rebuilt on load.

use super::SuccinctError;

const WORD_BITS: usize = 64;
const SUPERBLOCK_BITS: usize = 512;
const WORDS_PER_SUPERBLOCK: usize = SUPERBLOCK_BITS / WORD_BITS;
/// One select sample is kept per this many occurrences of a bit value.
const SELECT_SAMPLE: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedBitvector {
    limbs: Vec<u64>,
    len: usize,
    ones: usize,
    /// `superblocks[s]` = number of ones before superblock `s`; one extra
    /// trailing entry holds the total.
    superblocks: Vec<u64>,
    /// Superblock index holding the `(t * SELECT_SAMPLE + 1)`-th one.
    select1_samples: Vec<u64>,
    select0_samples: Vec<u64>,
}

impl Default for IndexedBitvector {
    fn default() -> Self {
        Self::from_limbs(Vec::new(), 0)
    }
}

impl IndexedBitvector {
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut limbs = Vec::new();
        let mut len = 0usize;
        for bit in bits {
            if len.is_multiple_of(WORD_BITS) {
                limbs.push(0);
            }
            if bit {
                *limbs.last_mut().unwrap() |= 1u64 << (len % WORD_BITS);
            }
            len += 1;
        }
        Self::from_limbs(limbs, len)
    }

    /// Wraps raw limbs. Bits at or beyond `len` are cleared.
    ///
    /// Panics if `limbs` has fewer than `ceil(len / 64)` entries.
    pub fn from_limbs(mut limbs: Vec<u64>, len: usize) -> Self {
        let needed = len.div_ceil(WORD_BITS);
        assert!(limbs.len() >= needed, "bit payload shorter than its length");
        limbs.truncate(needed);
        if !len.is_multiple_of(WORD_BITS) {
            let last = limbs.last_mut().unwrap();
            *last &= (1u64 << (len % WORD_BITS)) - 1;
        }

        let n_super = needed.div_ceil(WORDS_PER_SUPERBLOCK);
        let mut superblocks = Vec::with_capacity(n_super + 1);
        let mut acc = 0u64;
        for chunk in limbs.chunks(WORDS_PER_SUPERBLOCK) {
            superblocks.push(acc);
            acc += chunk.iter().map(|w| u64::from(w.count_ones())).sum::<u64>();
        }
        superblocks.push(acc);
        let ones = acc as usize;

        let mut bv = Self {
            limbs,
            len,
            ones,
            superblocks,
            select1_samples: Vec::new(),
            select0_samples: Vec::new(),
        };
        bv.select1_samples = bv.sample_select(true);
        bv.select0_samples = bv.sample_select(false);
        bv
    }

    fn sample_select(&self, bit: bool) -> Vec<u64> {
        let total = self.count(bit);
        let mut samples = Vec::with_capacity(total.div_ceil(SELECT_SAMPLE));
        let mut next = 1usize;
        let n_super = self.superblocks.len() - 1;
        for s in 0..n_super {
            let upto = self.count_before_superblock(s + 1, bit);
            while next <= total && next <= upto {
                samples.push(s as u64);
                next += SELECT_SAMPLE;
            }
        }
        samples
    }

    fn count_before_superblock(&self, s: usize, bit: bool) -> usize {
        let ones = self.superblocks[s] as usize;
        if bit {
            ones
        } else {
            (s * SUPERBLOCK_BITS).min(self.len) - ones
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of positions holding `bit`.
    pub fn count(&self, bit: bool) -> usize {
        if bit {
            self.ones
        } else {
            self.len - self.ones
        }
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    #[inline]
    fn get0(&self, i: usize) -> bool {
        (self.limbs[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    /// Bit at 1-based position `i`.
    pub fn access(&self, i: usize) -> Result<bool, SuccinctError> {
        if i == 0 || i > self.len {
            return Err(SuccinctError::IndexOutOfRange {
                index: i,
                len: self.len,
            });
        }
        Ok(self.get0(i - 1))
    }

    #[inline]
    fn rank1_prefix(&self, i: usize) -> usize {
        let word = i / WORD_BITS;
        let s = i / SUPERBLOCK_BITS;
        let mut r = self.superblocks[s] as usize;
        for w in &self.limbs[s * WORDS_PER_SUPERBLOCK..word] {
            r += w.count_ones() as usize;
        }
        let rem = i % WORD_BITS;
        if rem != 0 {
            r += (self.limbs[word] & ((1u64 << rem) - 1)).count_ones() as usize;
        }
        r
    }

    /// Occurrences of `bit` among positions `1..=i`.
    pub fn rank(&self, i: usize, bit: bool) -> Result<usize, SuccinctError> {
        if i > self.len {
            return Err(SuccinctError::IndexOutOfRange {
                index: i,
                len: self.len,
            });
        }
        let ones = self.rank1_prefix(i);
        Ok(if bit { ones } else { i - ones })
    }

    /// Position of the `j`-th occurrence of `bit`.
    pub fn select(&self, j: usize, bit: bool) -> Result<usize, SuccinctError> {
        let total = self.count(bit);
        if j == 0 || j > total {
            return Err(SuccinctError::OrdinalOutOfRange {
                ordinal: j,
                count: total,
            });
        }
        let samples = if bit {
            &self.select1_samples
        } else {
            &self.select0_samples
        };
        let t = (j - 1) / SELECT_SAMPLE;
        let lo = samples[t] as usize;
        let hi = samples.get(t + 1).map_or(self.superblocks.len() - 2, |&s| s as usize);
        // last superblock in [lo, hi] whose prefix count is < j
        let mut a = lo;
        let mut b = hi;
        while a < b {
            let mid = (a + b).div_ceil(2);
            if self.count_before_superblock(mid, bit) < j {
                a = mid;
            } else {
                b = mid - 1;
            }
        }
        let mut remaining = j - self.count_before_superblock(a, bit);
        let first_word = a * WORDS_PER_SUPERBLOCK;
        for (w_idx, &raw) in self.limbs.iter().enumerate().skip(first_word) {
            let w = if bit { raw } else { !raw };
            let c = w.count_ones() as usize;
            if remaining <= c {
                return Ok(w_idx * WORD_BITS + select_in_word(w, remaining - 1) + 1);
            }
            remaining -= c;
        }
        unreachable!("select directory inconsistent with payload")
    }

    /// Bits spent on rank/select directories, excluding the payload.
    pub fn directory_bits(&self) -> u64 {
        64 * (self.superblocks.len() + self.select1_samples.len() + self.select0_samples.len()) as u64
    }

    /// Payload bits (the logical length) plus directory bits.
    pub fn space_bits(&self) -> u64 {
        self.len as u64 + self.directory_bits()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get0(i))
    }
}

/// 0-based offset of the `r`-th (0-based) set bit of `w`.
#[inline]
fn select_in_word(mut w: u64, r: usize) -> usize {
    for _ in 0..r {
        w &= w - 1;
    }
    w.trailing_zeros() as usize
}
