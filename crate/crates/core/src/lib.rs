//! Compressed suffix arrays for databases of equal-length genomes that
//! differ only at spaced two-allele SNP sites.
//!
//! ```
//! use ssnpsa::index::{build, BuildConfig};
//! use ssnpsa::model::{infer_from_alignment, VirtualText};
//!
//! let (schema, matrix) = infer_from_alignment(&["gtaca", "gtcca"]).unwrap();
//! let csa = build(VirtualText::new(schema, matrix).unwrap(), &BuildConfig::default()).unwrap();
//! let sa: Vec<usize> = (1..=csa.len()).map(|r| csa.sa_access(r).unwrap()).collect();
//! assert_eq!(sa, [12, 6, 11, 5, 3, 10, 4, 9, 1, 7, 2, 8]);
//! assert_eq!(csa.locate(b"ca").unwrap(), [4, 10]);
//! ```

pub mod cli;
pub mod index;
pub mod model;
pub mod oracle;
pub mod succinct;
