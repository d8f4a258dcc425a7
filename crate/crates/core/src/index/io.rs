//! Binary index file, little-endian throughout:
//!
//! ```text
//! magic "SSNPSA01" | u32 version | u64 n, k, m, g
//! u64 len + schema text (UTF-8)
//! matrix: ceil(m k / 8) bytes, row-major, LSB first
//! starts: u64 bit length + limbs
//! meta: u64 count + count x (u32 column, u32 site [0 = terminal], u8 side, u32 side offset)
//! chain: k x ceil(m / 64) limbs
//! anchors: u64 count + count x (u32 site id, m x u64 positions)
//! groups: u64 count + count x (u32 first site, u32 p, ceil(m p / 64) limbs of p-bit labels)
//! u32 CRC-32C of everything above
//! ```
//!
//! Rank/select directories are rebuilt on load.

use std::io::{Read, Write};

use super::{
    group_layout, Anchor, AnchorSet, BlockDirectory, BlockMeta, CompressedSA, IndexError, PackedGroup,
    PermutationChain, Side, SiteRef,
};
use crate::model::{parse_schema, serialize_schema, GenotypeMatrix, VirtualText};
use crate::succinct::{IndexedBitvector, PackedLabelString};

pub const MAGIC: &[u8; 8] = b"SSNPSA01";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 4 * 8;

struct Sink(Vec<u8>);

impl Sink {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u32(&mut self, v: usize) {
        self.0.extend_from_slice(&(v as u32).to_le_bytes());
    }
    fn u64(&mut self, v: usize) {
        self.0.extend_from_slice(&(v as u64).to_le_bytes());
    }
    fn limbs(&mut self, limbs: &[u64]) {
        for l in limbs {
            self.0.extend_from_slice(&l.to_le_bytes());
        }
    }
}

struct Source<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Source<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8], IndexError> {
        let end = self.at.checked_add(len).ok_or(IndexError::Truncated)?;
        let out = self.bytes.get(self.at..end).ok_or(IndexError::Truncated)?;
        self.at = end;
        Ok(out)
    }
    fn u8(&mut self) -> Result<u8, IndexError> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> Result<usize, IndexError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()) as usize)
    }
    fn u64(&mut self) -> Result<usize, IndexError> {
        let v = u64::from_le_bytes(self.take(8)?.try_into().unwrap());
        usize::try_from(v).map_err(|_| IndexError::Malformed(format!("value {v} does not fit in memory")))
    }
    fn limbs(&mut self, count: usize) -> Result<Vec<u64>, IndexError> {
        let raw = self.take(count.checked_mul(8).ok_or(IndexError::Truncated)?)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }
    /// Guards allocation sizes against the bytes actually left.
    fn expect_room(&self, items: usize, item_bytes: usize) -> Result<(), IndexError> {
        match items.checked_mul(item_bytes) {
            Some(b) if b <= self.bytes.len() - self.at => Ok(()),
            _ => Err(IndexError::Truncated),
        }
    }
}

fn malformed(msg: impl Into<String>) -> IndexError {
    IndexError::Malformed(msg.into())
}

fn pack_labels(labels: &[u32], bits: usize) -> Vec<u64> {
    let mut limbs = vec![0u64; (labels.len() * bits).div_ceil(64)];
    for (i, &l) in labels.iter().enumerate() {
        for b in 0..bits {
            if (l >> b) & 1 == 1 {
                let at = i * bits + b;
                limbs[at / 64] |= 1 << (at % 64);
            }
        }
    }
    limbs
}

fn unpack_labels(limbs: &[u64], count: usize, bits: usize) -> Vec<u32> {
    (0..count)
        .map(|i| {
            (0..bits).fold(0u32, |acc, b| {
                let at = i * bits + b;
                acc | (((limbs[at / 64] >> (at % 64)) & 1) as u32) << b
            })
        })
        .collect()
}

impl CompressedSA {
    pub fn to_bytes(&self) -> Vec<u8> {
        let (n, k, m) = (self.n(), self.k(), self.m());
        let mut out = Sink(Vec::new());
        out.0.extend_from_slice(MAGIC);
        out.0.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        for v in [n, k, m, self.stride] {
            out.u64(v);
        }
        let schema = serialize_schema(self.text.schema());
        out.u64(schema.len());
        out.0.extend_from_slice(schema.as_bytes());
        out.0.extend_from_slice(&self.text.matrix().to_packed_bytes());

        out.u64(self.directory.starts.len());
        out.limbs(self.directory.starts.limbs());
        out.u64(self.directory.meta.len());
        for b in &self.directory.meta {
            out.u32(b.column);
            out.u32(b.site.id());
            out.u8(b.side.code());
            out.u32(b.side_offset);
        }

        for bv in &self.chain.bits {
            out.limbs(bv.limbs());
        }

        out.u64(self.anchors.anchors.len());
        for a in &self.anchors.anchors {
            out.u32(a.site.id());
            for &p in &a.positions {
                out.u64(p);
            }
        }

        out.u64(self.groups.len());
        for g in &self.groups {
            out.u32(g.first_site);
            out.u32(g.len);
            out.limbs(&pack_labels(&g.labels.to_vec(), g.len));
        }

        let crc = crc32c::crc32c(&out.0);
        out.0.extend_from_slice(&crc.to_le_bytes());
        out.0
    }

    pub fn save<W: Write>(&self, mut sink: W) -> Result<(), IndexError> {
        sink.write_all(&self.to_bytes())?;
        sink.flush()?;
        Ok(())
    }

    pub fn load<R: Read>(mut source: R) -> Result<Self, IndexError> {
        let mut bytes = Vec::new();
        source.read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    /// Decodes an index file. The checksum is verified before anything else.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, IndexError> {
        if bytes.len() < HEADER_LEN + 4 {
            return Err(IndexError::Truncated);
        }
        let (body, tail) = bytes.split_at(bytes.len() - 4);
        let stored = u32::from_le_bytes(tail.try_into().unwrap());
        let computed = crc32c::crc32c(body);
        if stored != computed {
            return Err(IndexError::ChecksumMismatch { stored, computed });
        }

        let mut src = Source { bytes: body, at: 0 };
        if src.take(8)? != MAGIC {
            return Err(IndexError::BadMagic);
        }
        let version = src.u32()? as u32;
        if version != FORMAT_VERSION {
            return Err(IndexError::VersionMismatch(version));
        }
        let (n, k, m, stride) = (src.u64()?, src.u64()?, src.u64()?, src.u64()?);

        let schema_len = src.u64()?;
        let schema_text =
            std::str::from_utf8(src.take(schema_len)?).map_err(|e| malformed(format!("schema is not UTF-8: {e}")))?;
        let schema = parse_schema(schema_text)?;
        if schema.n() != n || schema.k() != k {
            return Err(malformed("header dimensions disagree with the schema"));
        }
        let mk = m.checked_mul(k).ok_or_else(|| malformed("matrix too large"))?;
        let matrix = GenotypeMatrix::from_packed_bytes(m, k, src.take(mk.div_ceil(8))?)?;
        let text = VirtualText::new(schema, matrix)?;
        let total = text.len();
        if m == 0 {
            return Err(IndexError::EmptyDatabase);
        }
        if stride == 0 || stride > super::MAX_STRIDE {
            return Err(IndexError::InvalidStride(stride));
        }

        let starts_len = src.u64()?;
        if starts_len != total {
            return Err(malformed(format!(
                "block-start bitvector has {starts_len} bits, expected {total}"
            )));
        }
        let starts = IndexedBitvector::from_limbs(src.limbs(starts_len.div_ceil(64))?, starts_len);
        let meta_count = src.u64()?;
        if meta_count != starts.count(true) {
            return Err(malformed("block count disagrees with the block-start bitvector"));
        }
        src.expect_room(meta_count, 13)?;
        let mut meta = Vec::with_capacity(meta_count);
        for _ in 0..meta_count {
            let column = src.u32()?;
            let site = src.u32()?;
            let side = Side::from_code(src.u8()?).ok_or_else(|| malformed("unknown block side"))?;
            let side_offset = src.u32()?;
            if column == 0 || column > n + 1 || site > k || side_offset >= m {
                return Err(malformed("block metadata out of range"));
            }
            let site = SiteRef::from_id(site);
            if (site == SiteRef::Terminal) != (side == Side::All) {
                return Err(malformed("terminal blocks must have side `all`"));
            }
            meta.push(BlockMeta {
                column,
                site,
                side,
                side_offset,
            });
        }

        src.expect_room(k, m.div_ceil(64) * 8)?;
        let mut chain_bits = Vec::with_capacity(k);
        for _ in 0..k {
            chain_bits.push(IndexedBitvector::from_limbs(src.limbs(m.div_ceil(64))?, m));
        }
        let chain = PermutationChain::new(chain_bits);

        let anchor_count = src.u64()?;
        if anchor_count != k / stride + 1 {
            return Err(malformed(format!(
                "expected {} anchors, found {anchor_count}",
                k / stride + 1
            )));
        }
        let mut anchors = Vec::with_capacity(anchor_count);
        for a in 0..anchor_count {
            let site = SiteRef::from_id(src.u32()?);
            let expected = if a + 1 == anchor_count {
                SiteRef::Terminal
            } else {
                SiteRef::Site((a + 1) * stride)
            };
            if site != expected {
                return Err(malformed("anchor sites out of order"));
            }
            let column = match site {
                SiteRef::Site(j) => text.schema().site_column(j),
                SiteRef::Terminal => n + 1,
            };
            src.expect_room(m, 8)?;
            let positions = (0..m).map(|_| src.u64()).collect::<Result<Vec<_>, _>>()?;
            if positions
                .iter()
                .any(|&p| p == 0 || p > total || (p - 1) % (n + 1) + 1 != column)
            {
                return Err(malformed("anchor position not in its column"));
            }
            anchors.push(Anchor {
                site,
                column,
                positions,
            });
        }
        let anchors = AnchorSet { stride, k, anchors };

        let layout = group_layout(k, stride);
        let group_count = src.u64()?;
        if group_count != layout.len() {
            return Err(malformed("group count disagrees with the stride"));
        }
        let mut groups = Vec::with_capacity(group_count);
        for (first_site, len, anchor) in layout {
            if src.u32()? != first_site || src.u32()? != len {
                return Err(malformed("group layout disagrees with the stride"));
            }
            let limbs = src.limbs((m * len).div_ceil(64))?;
            let labels = PackedLabelString::new(&unpack_labels(&limbs, m, len), len as u32)?;
            groups.push(PackedGroup {
                first_site,
                len,
                anchor,
                labels,
            });
        }
        if src.at != body.len() {
            return Err(malformed("trailing bytes before checksum"));
        }

        Ok(CompressedSA::assemble(
            text,
            stride,
            BlockDirectory { starts, meta },
            chain,
            anchors,
            groups,
        ))
    }
}
