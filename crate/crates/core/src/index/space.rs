use serde::Serialize;

use super::CompressedSA;
use crate::model::serialize_schema;

/// Bits needed to store values in `0..=max` (at least 1).
fn width(max: usize) -> u64 {
    u64::from(usize::BITS - max.leading_zeros()).max(1)
}

/// `ceil(log2 x)`, at least 1.
fn ceil_log2(x: usize) -> u64 {
    if x <= 2 {
        1
    } else {
        u64::from(usize::BITS - (x - 1).leading_zeros())
    }
}

/// Exact bit counts per component. Integer arrays are charged at their
/// payload width, not the 64-bit width used on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceReport {
    /// Block-start bitvector payload plus its rank/select directory.
    pub directory_bits: u64,
    pub meta_entries: u64,
    pub meta_entry_width: u64,
    pub meta_bits: u64,
    /// Explicitly stored positions: `m` per anchor.
    pub anchor_ints: u64,
    pub anchor_int_width: u64,
    pub anchor_bits: u64,
    /// `k * m`.
    pub chain_payload_bits: u64,
    /// Payload plus directories and zero counts.
    pub chain_bits: u64,
    pub group_payload_bits: u64,
    pub group_bits: u64,
    pub schema_bits: u64,
    pub matrix_bits: u64,
    pub total_bits: u64,
    /// `N * ceil(log2 N)`.
    pub plain_sa_bits: u64,
}

impl CompressedSA {
    pub fn space_report(&self) -> SpaceReport {
        let (n, k, m, total) = (self.n(), self.k(), self.m(), self.len());

        let directory_bits = self.directory.starts.space_bits();
        let meta_entries = self.directory.meta.len() as u64;
        let meta_entry_width = width(n + 1) + width(k) + 2 + width(m);
        let meta_bits = meta_entries * meta_entry_width;

        let anchor_ints = self
            .anchors
            .anchors
            .iter()
            .map(|a| a.positions.len() as u64)
            .sum::<u64>();
        let anchor_int_width = ceil_log2(total);
        let anchor_bits = anchor_ints * anchor_int_width + self.anchors.anchors.len() as u64 * width(k);

        let chain_payload_bits = self.chain.bits.iter().map(|b| b.len() as u64).sum::<u64>();
        let chain_bits = self.chain.bits.iter().map(|b| b.space_bits()).sum::<u64>() + k as u64 * width(m);

        let group_payload_bits = self.groups.iter().map(|g| g.labels.payload_bits()).sum::<u64>();
        let group_bits = group_payload_bits
            + self
                .groups
                .iter()
                .map(|g| g.labels.overhead_bits() + 2 * width(k))
                .sum::<u64>();

        let schema_bits = 8 * serialize_schema(self.text.schema()).len() as u64;
        let matrix_bits = (m * k) as u64;

        let total_bits = directory_bits + meta_bits + anchor_bits + chain_bits + group_bits + schema_bits + matrix_bits;
        SpaceReport {
            directory_bits,
            meta_entries,
            meta_entry_width,
            meta_bits,
            anchor_ints,
            anchor_int_width,
            anchor_bits,
            chain_payload_bits,
            chain_bits,
            group_payload_bits,
            group_bits,
            schema_bits,
            matrix_bits,
            total_bits,
            plain_sa_bits: total as u64 * ceil_log2(total),
        }
    }
}
