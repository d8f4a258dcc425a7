//! The compressed suffix array.
//!
//! Suffix-array ranks are split into blocks keyed by `(column, side)`, where
//! `side` is the allele a row carries at the first SNP site at or after the
//! column. Every block is one contiguous rank interval whose members appear
//! in the same order as the rows do at that site. Only a few *anchor*
//! columns (every `g`-th site and the sentinel column) store positions
//! explicitly; the order at any other site is reached through one length-`m`
//! bitvector per site, and runs of non-anchor sites additionally carry their
//! composed permutation as a packed label string.

mod build;
mod io;
mod query;
mod search;
mod space;

use serde::Serialize;

use crate::model::{ModelError, ValidationReport, VirtualText};
use crate::succinct::{IndexedBitvector, PackedLabelString, SuccinctError, MAX_LABEL_BITS};

pub use build::build;
pub use io::{FORMAT_VERSION, MAGIC};
pub use query::Access;
pub use space::SpaceReport;

/// Largest accepted stride; a group then holds at most `MAX_STRIDE - 1` sites.
pub const MAX_STRIDE: usize = MAX_LABEL_BITS as usize;

#[derive(Debug, thiserror::Error)]
pub enum IndexError {
    #[error("database has no words")]
    EmptyDatabase,
    #[error("instance fails validation: {0}")]
    Invalid(ValidationReport),
    #[error("spaced-SNP precondition violated: {0}")]
    SsnpViolation(String),
    #[error("stride {0} not in 1..={MAX_STRIDE}")]
    InvalidStride(usize),
    #[error("{what} {index} out of range 1..={max}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },
    #[error("site {0} does not start a packed group")]
    NotGroupStart(usize),
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("pattern contains the reserved character {0:?}")]
    InvalidPatternCharacter(char),
    #[error("not an index file (bad magic)")]
    BadMagic,
    #[error("unsupported index format version {0}")]
    VersionMismatch(u32),
    #[error("checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    ChecksumMismatch { stored: u32, computed: u32 },
    #[error("index file truncated")]
    Truncated,
    #[error("malformed index file: {0}")]
    Malformed(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Succinct(#[from] SuccinctError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Anchor-spacing choice. `Auto` picks `round(sqrt(log2 n))`, at least 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Stride {
    #[default]
    Auto,
    Fixed(usize),
}

impl Stride {
    pub fn resolve(self, n: usize) -> Result<usize, IndexError> {
        let g = match self {
            Stride::Auto => ((n.max(1) as f64).log2().sqrt().round() as usize).max(1),
            Stride::Fixed(g) => g,
        };
        if g == 0 || g > MAX_STRIDE {
            return Err(IndexError::InvalidStride(g));
        }
        Ok(g)
    }
}

impl std::str::FromStr for Stride {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Stride::Auto);
        }
        s.parse::<usize>()
            .map(Stride::Fixed)
            .map_err(|_| format!("stride must be a positive integer or `auto`, got {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildConfig {
    pub stride: Stride,
    /// Run stored-word validation before building.
    pub validate: bool,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self {
            stride: Stride::Auto,
            validate: true,
        }
    }
}

impl BuildConfig {
    pub fn with_stride(stride: Stride) -> Self {
        Self {
            stride,
            ..Self::default()
        }
    }
}

/// A SNP site (1-based) or the sentinel column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SiteRef {
    Site(usize),
    Terminal,
}

impl SiteRef {
    /// 0 for the terminal, the site number otherwise.
    pub fn id(self) -> usize {
        match self {
            SiteRef::Site(j) => j,
            SiteRef::Terminal => 0,
        }
    }

    pub fn from_id(id: usize) -> Self {
        if id == 0 {
            SiteRef::Terminal
        } else {
            SiteRef::Site(id)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Low,
    High,
    All,
}

impl Side {
    pub fn code(self) -> u8 {
        match self {
            Side::Low => 0,
            Side::High => 1,
            Side::All => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Side::Low),
            1 => Some(Side::High),
            2 => Some(Side::All),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockMeta {
    /// Column shared by every position in the block, 1..=n+1.
    pub column: usize,
    /// First site at or after `column`.
    pub site: SiteRef,
    pub side: Side,
    /// 0-based start of this side within the site's full row order.
    pub side_offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDirectory {
    starts: IndexedBitvector,
    meta: Vec<BlockMeta>,
}

impl BlockDirectory {
    pub fn starts(&self) -> &IndexedBitvector {
        &self.starts
    }

    pub fn meta(&self) -> &[BlockMeta] {
        &self.meta
    }

    /// Block containing `rank` and the 0-based offset inside it.
    pub fn locate_rank(&self, rank: usize) -> Result<(&BlockMeta, usize), IndexError> {
        let block = self.starts.rank(rank, true)?;
        let start = self.starts.select(block, true)?;
        Ok((&self.meta[block - 1], rank - start))
    }
}

/// `B_j` for every site: indexed by the downstream order (site `j + 1`, or
/// the terminal order for `j = k`), holding site `j`'s allele bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationChain {
    bits: Vec<IndexedBitvector>,
    zeros: Vec<usize>,
}

impl PermutationChain {
    fn new(bits: Vec<IndexedBitvector>) -> Self {
        let zeros = bits.iter().map(|b| b.count(false)).collect();
        Self { bits, zeros }
    }

    pub fn k(&self) -> usize {
        self.bits.len()
    }

    /// `B_j`, 1-based.
    pub fn bitvector(&self, j: usize) -> &IndexedBitvector {
        &self.bits[j - 1]
    }

    /// Rows on the low allele at site `j`.
    pub fn zeros(&self, j: usize) -> usize {
        self.zeros[j - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Anchor {
    pub site: SiteRef,
    pub column: usize,
    /// Suffix-start positions at `column` listed in this anchor's row order.
    pub positions: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnchorSet {
    stride: usize,
    k: usize,
    /// Site anchors `g, 2g, ...` in order, then the terminal.
    anchors: Vec<Anchor>,
}

impl AnchorSet {
    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn anchors(&self) -> &[Anchor] {
        &self.anchors
    }

    pub fn get(&self, id: usize) -> &Anchor {
        &self.anchors[id]
    }

    pub fn terminal(&self) -> &Anchor {
        self.anchors.last().unwrap()
    }

    /// Index of the first anchor at or after site `j`.
    pub fn anchor_for_site(&self, j: usize) -> usize {
        site_anchor_index(self.k, self.stride, j)
    }

    pub fn is_anchor(&self, j: usize) -> bool {
        j.is_multiple_of(self.stride)
    }
}

fn site_anchor_index(k: usize, stride: usize, j: usize) -> usize {
    let site_anchors = k / stride;
    if j <= site_anchors * stride {
        (j - 1) / stride
    } else {
        site_anchors
    }
}

/// Composed permutation of a run of non-anchor sites ending right before an
/// anchor. Labels are indexed by the anchor's row order; each label holds the
/// row's allele bits at `first_site..first_site + len`, first site most
/// significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedGroup {
    pub first_site: usize,
    pub len: usize,
    pub anchor: usize,
    pub labels: PackedLabelString,
}

/// Group layout for `k` sites at stride `g`: `(first_site, len, anchor index)`.
fn group_layout(k: usize, stride: usize) -> Vec<(usize, usize, usize)> {
    let site_anchors = k / stride;
    let mut out = Vec::new();
    for a in 0..=site_anchors {
        let first = a * stride + 1;
        let last = if a < site_anchors { (a + 1) * stride - 1 } else { k };
        if first <= last {
            out.push((first, last - first + 1, a));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompressedSA {
    text: VirtualText,
    stride: usize,
    directory: BlockDirectory,
    chain: PermutationChain,
    anchors: AnchorSet,
    groups: Vec<PackedGroup>,
    /// per site: group id when the site starts a group
    group_at: Vec<Option<usize>>,
}

impl CompressedSA {
    fn assemble(
        text: VirtualText,
        stride: usize,
        directory: BlockDirectory,
        chain: PermutationChain,
        anchors: AnchorSet,
        groups: Vec<PackedGroup>,
    ) -> Self {
        let mut group_at = vec![None; text.k()];
        for (id, g) in groups.iter().enumerate() {
            group_at[g.first_site - 1] = Some(id);
        }
        Self {
            text,
            stride,
            directory,
            chain,
            anchors,
            groups,
            group_at,
        }
    }

    pub fn text(&self) -> &VirtualText {
        &self.text
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn n(&self) -> usize {
        self.text.n()
    }

    pub fn k(&self) -> usize {
        self.text.k()
    }

    pub fn m(&self) -> usize {
        self.text.m()
    }

    /// Database length `m (n + 1)`.
    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn directory(&self) -> &BlockDirectory {
        &self.directory
    }

    pub fn chain(&self) -> &PermutationChain {
        &self.chain
    }

    pub fn anchors(&self) -> &AnchorSet {
        &self.anchors
    }

    pub fn groups(&self) -> &[PackedGroup] {
        &self.groups
    }

    /// Group starting at site `j`, if any.
    pub fn group_starting_at(&self, j: usize) -> Option<usize> {
        self.group_at.get(j.wrapping_sub(1)).copied().flatten()
    }

    /// Flips one bit of `B_site` (1-based `i`). For fault-injection tests.
    #[doc(hidden)]
    pub fn corrupt_chain_bit(&mut self, site: usize, i: usize) {
        let bv = &self.chain.bits[site - 1];
        let bits: Vec<bool> = bv
            .iter()
            .enumerate()
            .map(|(p, b)| if p + 1 == i { !b } else { b })
            .collect();
        self.chain.bits[site - 1] = IndexedBitvector::from_bits(bits);
    }
}
