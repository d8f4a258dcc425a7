//! Bit-level building blocks: rank/select bitvectors and packed label strings.

mod bitvector;
mod labels;

pub use bitvector::IndexedBitvector;
pub use labels::{PackedLabelString, MAX_LABEL_BITS};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SuccinctError {
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("ordinal {ordinal} out of range (only {count} occurrences)")]
    OrdinalOutOfRange { ordinal: usize, count: usize },
    #[error("label {label} does not fit in {bits} bits")]
    LabelOutOfRange { label: u32, bits: u32 },
    #[error("label width {bits} not in 1..={MAX_LABEL_BITS}")]
    LabelWidth { bits: u32 },
}
