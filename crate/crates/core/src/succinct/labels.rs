//! Sequence over the alphabet `[0, 2^p)` with access, partial rank and
//! select, stored as a wavelet matrix of `p` bit levels (most significant
//! bit first), so the payload is `m * p` bits.

use super::{IndexedBitvector, SuccinctError};

/// Largest supported label width. The cumulative table has `2^p + 1` entries.
pub const MAX_LABEL_BITS: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedLabelString {
    len: usize,
    bits: u32,
    levels: Vec<IndexedBitvector>,
    /// zeros per level
    zeros: Vec<usize>,
    /// `cumulative[l]` = number of labels `< l`; `2^p + 1` entries.
    cumulative: Vec<usize>,
}

impl PackedLabelString {
    pub fn new(labels: &[u32], bits: u32) -> Result<Self, SuccinctError> {
        if bits == 0 || bits > MAX_LABEL_BITS {
            return Err(SuccinctError::LabelWidth { bits });
        }
        let sigma = 1usize << bits;
        let mut counts = vec![0usize; sigma + 1];
        for &label in labels {
            if label as usize >= sigma {
                return Err(SuccinctError::LabelOutOfRange { label, bits });
            }
            counts[label as usize + 1] += 1;
        }
        for l in 1..=sigma {
            counts[l] += counts[l - 1];
        }

        let mut levels = Vec::with_capacity(bits as usize);
        let mut zeros = Vec::with_capacity(bits as usize);
        let mut current: Vec<u32> = labels.to_vec();
        let mut next = Vec::with_capacity(current.len());
        for level in 0..bits {
            let shift = bits - 1 - level;
            let bv = IndexedBitvector::from_bits(current.iter().map(|&v| (v >> shift) & 1 == 1));
            zeros.push(bv.count(false));
            levels.push(bv);
            next.clear();
            next.extend(current.iter().filter(|&&v| (v >> shift) & 1 == 0));
            next.extend(current.iter().filter(|&&v| (v >> shift) & 1 == 1));
            std::mem::swap(&mut current, &mut next);
        }

        Ok(Self {
            len: labels.len(),
            bits,
            levels,
            zeros,
            cumulative: counts,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `C[l]` for `l` in `0..=2^p`.
    pub fn cumulative(&self) -> &[usize] {
        &self.cumulative
    }

    fn check_index(&self, i: usize) -> Result<(), SuccinctError> {
        if i == 0 || i > self.len {
            Err(SuccinctError::IndexOutOfRange {
                index: i,
                len: self.len,
            })
        } else {
            Ok(())
        }
    }

    /// Label at 1-based position `i`.
    pub fn access(&self, i: usize) -> Result<u32, SuccinctError> {
        self.check_index(i)?;
        let mut pos = i - 1;
        let mut value = 0u32;
        for (level, bv) in self.levels.iter().enumerate() {
            // pos is 0-based; rank over 1..=pos counts positions before it
            let bit = bv.access(pos + 1)?;
            value = (value << 1) | u32::from(bit);
            pos = if bit {
                self.zeros[level] + bv.rank(pos, true)?
            } else {
                bv.rank(pos, false)?
            };
        }
        Ok(value)
    }

    /// Occurrences of `label` among positions `1..=i`.
    pub fn rank(&self, label: u32, i: usize) -> Result<usize, SuccinctError> {
        self.check_label(label)?;
        if i > self.len {
            return Err(SuccinctError::IndexOutOfRange {
                index: i,
                len: self.len,
            });
        }
        let (mut start, mut end) = (0usize, i);
        for (level, bv) in self.levels.iter().enumerate() {
            let shift = self.bits - 1 - level as u32;
            if (label >> shift) & 1 == 1 {
                start = self.zeros[level] + bv.rank(start, true)?;
                end = self.zeros[level] + bv.rank(end, true)?;
            } else {
                start = bv.rank(start, false)?;
                end = bv.rank(end, false)?;
            }
        }
        Ok(end - start)
    }

    /// Number of positions `i' <= i` carrying the same label as position `i`.
    pub fn partial_rank(&self, i: usize) -> Result<usize, SuccinctError> {
        let label = self.access(i)?;
        self.rank(label, i)
    }

    /// 1-based position of the `j`-th occurrence of `label`.
    pub fn select(&self, label: u32, j: usize) -> Result<usize, SuccinctError> {
        self.check_label(label)?;
        let l = label as usize;
        let count = self.cumulative[l + 1] - self.cumulative[l];
        if j == 0 || j > count {
            return Err(SuccinctError::OrdinalOutOfRange { ordinal: j, count });
        }
        // start of the label's run at the bottom level
        let mut start = 0usize;
        for (level, bv) in self.levels.iter().enumerate() {
            let shift = self.bits - 1 - level as u32;
            start = if (label >> shift) & 1 == 1 {
                self.zeros[level] + bv.rank(start, true)?
            } else {
                bv.rank(start, false)?
            };
        }
        // 0-based position, walked back up
        let mut pos = start + j - 1;
        for (level, bv) in self.levels.iter().enumerate().rev() {
            let shift = self.bits - 1 - level as u32;
            pos = if (label >> shift) & 1 == 1 {
                bv.select(pos - self.zeros[level] + 1, true)? - 1
            } else {
                bv.select(pos + 1, false)? - 1
            };
        }
        Ok(pos + 1)
    }

    fn check_label(&self, label: u32) -> Result<(), SuccinctError> {
        if (label as u64) >> self.bits != 0 {
            Err(SuccinctError::LabelOutOfRange { label, bits: self.bits })
        } else {
            Ok(())
        }
    }

    /// All labels in order. O(m p).
    pub fn to_vec(&self) -> Vec<u32> {
        (1..=self.len).map(|i| self.access(i).unwrap()).collect()
    }

    /// Label payload (`m * p`) in bits.
    pub fn payload_bits(&self) -> u64 {
        self.len as u64 * u64::from(self.bits)
    }

    /// Level directories plus the cumulative table at `ceil(log2(m + 1))`
    /// bits per entry.
    pub fn overhead_bits(&self) -> u64 {
        let width = u64::from(usize::BITS - self.len.leading_zeros()).max(1);
        self.levels.iter().map(|b| b.directory_bits()).sum::<u64>() + self.cumulative.len() as u64 * width
    }
}
