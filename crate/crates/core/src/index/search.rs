//! Pattern counting and location by binary search over `sa_access`.

use std::cmp::Ordering;
use std::ops::Range;

use super::{CompressedSA, IndexError};
use crate::model::SENTINEL;

impl CompressedSA {
    /// Ordinals of the pattern, or `None` when some character is outside the
    /// alphabet (and so cannot occur).
    fn pattern_ordinals(&self, pattern: &[u8]) -> Result<Option<Vec<u8>>, IndexError> {
        if pattern.is_empty() {
            return Err(IndexError::EmptyPattern);
        }
        if let Some(&c) = pattern.iter().find(|&&c| c == SENTINEL) {
            return Err(IndexError::InvalidPatternCharacter(c as char));
        }
        Ok(pattern.iter().map(|&c| self.text.schema().ordinal(c)).collect())
    }

    /// Compares the suffix at `pos`, truncated to the pattern's length.
    fn cmp_suffix(&self, pos: usize, pattern: &[u8]) -> Result<Ordering, IndexError> {
        for (t, &p) in pattern.iter().enumerate() {
            if pos + t > self.len() {
                return Ok(Ordering::Less);
            }
            match self.text.text_ordinal(pos + t)?.cmp(&p) {
                Ordering::Equal => {}
                other => return Ok(other),
            }
        }
        Ok(Ordering::Equal)
    }

    /// First rank in `1..=N+1` whose suffix is not `before` the pattern.
    fn partition(&self, pattern: &[u8], before: impl Fn(Ordering) -> bool) -> Result<usize, IndexError> {
        let (mut lo, mut hi) = (1usize, self.len() + 1);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if before(self.cmp_suffix(self.sa_access(mid)?, pattern)?) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// Half-open rank interval of suffixes prefixed by `pattern`.
    pub fn sa_range(&self, pattern: &[u8]) -> Result<Range<usize>, IndexError> {
        let Some(ords) = self.pattern_ordinals(pattern)? else {
            return Ok(1..1);
        };
        let lo = self.partition(&ords, |o| o == Ordering::Less)?;
        let hi = self.partition(&ords, |o| o != Ordering::Greater)?;
        Ok(lo..hi)
    }

    pub fn count(&self, pattern: &[u8]) -> Result<usize, IndexError> {
        Ok(self.sa_range(pattern)?.len())
    }

    /// Sorted 1-based start positions of every occurrence.
    pub fn locate(&self, pattern: &[u8]) -> Result<Vec<usize>, IndexError> {
        let mut out = self
            .sa_range(pattern)?
            .map(|r| self.sa_access(r))
            .collect::<Result<Vec<_>, _>>()?;
        out.sort_unstable();
        Ok(out)
    }
}
