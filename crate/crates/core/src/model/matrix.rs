use super::ModelError;

/// `m x k` allele choices, row-major, bit-packed. Bit 0 selects the low allele.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenotypeMatrix {
    m: usize,
    k: usize,
    bits: Vec<u64>,
}

impl GenotypeMatrix {
    pub fn zeroed(m: usize, k: usize) -> Self {
        Self {
            m,
            k,
            bits: vec![0; (m * k).div_ceil(64)],
        }
    }

    pub fn from_rows<R: AsRef<[bool]>>(rows: &[R], k: usize) -> Result<Self, ModelError> {
        let mut matrix = Self::zeroed(rows.len(), k);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != k {
                return Err(ModelError::DimensionMismatch {
                    row: r + 1,
                    expected: k,
                    found: row.len(),
                });
            }
            for (j, &bit) in row.iter().enumerate() {
                matrix.set(r + 1, j + 1, bit);
            }
        }
        Ok(matrix)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Allele bit of `row` (1..=m) at `site` (1..=k).
    #[inline]
    pub fn get(&self, row: usize, site: usize) -> bool {
        debug_assert!((1..=self.m).contains(&row) && (1..=self.k).contains(&site));
        let idx = (row - 1) * self.k + (site - 1);
        (self.bits[idx / 64] >> (idx % 64)) & 1 == 1
    }

    pub fn set(&mut self, row: usize, site: usize, bit: bool) {
        assert!((1..=self.m).contains(&row) && (1..=self.k).contains(&site));
        let idx = (row - 1) * self.k + (site - 1);
        if bit {
            self.bits[idx / 64] |= 1 << (idx % 64);
        } else {
            self.bits[idx / 64] &= !(1 << (idx % 64));
        }
    }

    pub fn row(&self, row: usize) -> Vec<bool> {
        (1..=self.k).map(|j| self.get(row, j)).collect()
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        (1..=self.m).map(|r| self.row(r)).collect()
    }

    /// Rows carrying the low allele at `site`.
    pub fn count_zeros(&self, site: usize) -> usize {
        (1..=self.m).filter(|&r| !self.get(r, site)).count()
    }

    /// Row-major bits packed LSB-first into `ceil(m k / 8)` bytes.
    pub fn to_packed_bytes(&self) -> Vec<u8> {
        let nbytes = (self.m * self.k).div_ceil(8);
        self.bits.iter().flat_map(|w| w.to_le_bytes()).take(nbytes).collect()
    }

    pub fn from_packed_bytes(m: usize, k: usize, bytes: &[u8]) -> Result<Self, ModelError> {
        let nbytes = (m * k).div_ceil(8);
        if bytes.len() != nbytes {
            return Err(ModelError::MalformedInput(format!(
                "matrix payload has {} bytes, expected {nbytes}",
                bytes.len()
            )));
        }
        let mut bits = vec![0u64; (m * k).div_ceil(64)];
        for (i, &b) in bytes.iter().enumerate() {
            bits[i / 8] |= u64::from(b) << (8 * (i % 8));
        }
        if !(m * k).is_multiple_of(64) {
            if let Some(last) = bits.last_mut() {
                *last &= (1u64 << ((m * k) % 64)) - 1;
            }
        }
        Ok(Self { m, k, bits })
    }
}
