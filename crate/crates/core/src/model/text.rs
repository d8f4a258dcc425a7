use super::{validate, GenotypeMatrix, ModelError, SsnpSchema, ValidationReport, SENTINEL};

/// The database `w_1 # w_2 # ... w_m #` described by a schema and a genotype
/// matrix; characters are computed on demand, never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualText {
    schema: SsnpSchema,
    matrix: GenotypeMatrix,
}

impl VirtualText {
    pub fn new(schema: SsnpSchema, matrix: GenotypeMatrix) -> Result<Self, ModelError> {
        if schema.k() != matrix.k() {
            return Err(ModelError::DimensionMismatch {
                row: 0,
                expected: schema.k(),
                found: matrix.k(),
            });
        }
        Ok(Self { schema, matrix })
    }

    pub fn schema(&self) -> &SsnpSchema {
        &self.schema
    }

    pub fn matrix(&self) -> &GenotypeMatrix {
        &self.matrix
    }

    pub fn into_parts(self) -> (SsnpSchema, GenotypeMatrix) {
        (self.schema, self.matrix)
    }

    pub fn n(&self) -> usize {
        self.schema.n()
    }

    pub fn k(&self) -> usize {
        self.schema.k()
    }

    pub fn m(&self) -> usize {
        self.matrix.m()
    }

    /// Total length `m (n + 1)`.
    pub fn len(&self) -> usize {
        self.m() * (self.n() + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pos_of(&self, row: usize, col: usize) -> Result<usize, ModelError> {
        if row == 0 || row > self.m() {
            return Err(ModelError::IndexOutOfRange {
                what: "row",
                index: row,
                max: self.m(),
            });
        }
        if col == 0 || col > self.n() + 1 {
            return Err(ModelError::IndexOutOfRange {
                what: "column",
                index: col,
                max: self.n() + 1,
            });
        }
        Ok((row - 1) * (self.n() + 1) + col)
    }

    pub fn row_col_of(&self, pos: usize) -> Result<(usize, usize), ModelError> {
        if pos == 0 || pos > self.len() {
            return Err(ModelError::IndexOutOfRange {
                what: "position",
                index: pos,
                max: self.len(),
            });
        }
        Ok(split_pos(self.n(), pos))
    }

    /// Character at `(row, col)` without range checks.
    #[inline]
    pub(crate) fn char_at(&self, row: usize, col: usize) -> u8 {
        if col == self.n() + 1 {
            SENTINEL
        } else if let Some(j) = self.schema.site_at_column(col) {
            self.schema.site(j).allele(self.matrix.get(row, j))
        } else {
            self.schema.reference()[col - 1]
        }
    }

    #[inline]
    pub(crate) fn ordinal_at(&self, row: usize, col: usize) -> u8 {
        // every character produced by char_at is the sentinel or in the alphabet
        self.schema.ordinal(self.char_at(row, col)).unwrap()
    }

    /// Character at 1-based position `pos`.
    pub fn text_char(&self, pos: usize) -> Result<u8, ModelError> {
        let (row, col) = self.row_col_of(pos)?;
        Ok(self.char_at(row, col))
    }

    /// Collation ordinal at `pos` (0 for the sentinel).
    pub fn text_ordinal(&self, pos: usize) -> Result<u8, ModelError> {
        let (row, col) = self.row_col_of(pos)?;
        Ok(self.ordinal_at(row, col))
    }

    /// Word `row` (1..=m) without its sentinel.
    pub fn word(&self, row: usize) -> Vec<u8> {
        self.schema.realize(self.matrix.row(row))
    }

    /// The full database as display characters.
    pub fn expand(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len());
        for row in 1..=self.m() {
            out.extend(self.word(row));
            out.push(SENTINEL);
        }
        out
    }

    /// The full database as collation ordinals.
    pub fn expand_ordinals(&self) -> Vec<u8> {
        self.expand()
            .into_iter()
            .map(|c| self.schema.ordinal(c).unwrap())
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate_stored(self)
    }
}

/// `(row, col)` of a 1-based position for word length `n`.
#[inline]
pub(crate) fn split_pos(n: usize, pos: usize) -> (usize, usize) {
    let p = pos - 1;
    (p / (n + 1) + 1, p % (n + 1) + 1)
}
