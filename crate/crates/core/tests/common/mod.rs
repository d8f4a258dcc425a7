#![allow(dead_code)]

use ssnpsa::model::{generate, GenParams, GenotypeMatrix, Site, SsnpSchema, VirtualText};
use ssnpsa::oracle::naive_sa;

/// `gtaca#gtcca#`: n = 5, one site at column 3 with alleles (a, c).
pub fn running_instance() -> VirtualText {
    let schema = SsnpSchema::new(
        5,
        b"acgt".to_vec(),
        b"gt?ca".to_vec(),
        vec![Site {
            column: 3,
            low: b'a',
            high: b'c',
        }],
        b'?',
    )
    .unwrap();
    let matrix = GenotypeMatrix::from_rows(&[vec![false], vec![true]], 1).unwrap();
    VirtualText::new(schema, matrix).unwrap()
}

pub const RUNNING_SA: [usize; 12] = [12, 6, 11, 5, 3, 10, 4, 9, 1, 7, 2, 8];

pub fn generated(n: usize, k: usize, m: usize, alphabet: &[u8], min_gap: usize, seed: u64) -> VirtualText {
    let (s, mtx) = generate(&GenParams::new(n, k, m, alphabet, min_gap, seed)).unwrap();
    VirtualText::new(s, mtx).unwrap()
}

/// Naive suffix array of the database.
pub fn oracle_sa(vt: &VirtualText) -> Vec<usize> {
    naive_sa(&vt.expand_ordinals()).unwrap().sa
}

/// Rows in suffix order at column `col`, read off the oracle suffix array.
pub fn oracle_column_order(vt: &VirtualText, sa: &[usize], col: usize) -> Vec<usize> {
    let n = vt.n();
    sa.iter()
        .filter(|&&p| (p - 1) % (n + 1) + 1 == col)
        .map(|&p| (p - 1) / (n + 1) + 1)
        .collect()
}

/// Whether every `(column, side)` key occupies one contiguous rank interval.
pub fn oracle_blocks_contiguous(vt: &VirtualText, sa: &[usize]) -> bool {
    let n = vt.n();
    let mut ranks: std::collections::BTreeMap<(usize, u8), Vec<usize>> = Default::default();
    for (i, &p) in sa.iter().enumerate() {
        let row = (p - 1) / (n + 1) + 1;
        let col = (p - 1) % (n + 1) + 1;
        let side = match vt.schema().next_site(col) {
            Some(j) => u8::from(vt.matrix().get(row, j)),
            None => 2,
        };
        ranks.entry((col, side)).or_default().push(i + 1);
    }
    ranks.values().all(|r| r.last().unwrap() - r[0] + 1 == r.len())
}

/// `(alphabet, min_gap)` pairs that the generator satisfies quickly.
pub const ALPHABETS: [(&[u8], usize); 3] = [(b"ab", 24), (b"acgt", 10), (b"abcdefghijklmnopqrst", 3)];

/// Random valid instance sized for oracle comparison.
pub fn random_instance(seed: u64, alphabet: usize, k: usize, m: usize, extra: usize) -> VirtualText {
    let (sigma, min_gap) = ALPHABETS[alphabet % ALPHABETS.len()];
    let n = (k * (min_gap + 1) + 2 + extra).min(512).max(k * (min_gap + 1) + 2);
    generated(n, k, m, sigma, min_gap, seed)
}
