//! Seeded random instances for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GenotypeMatrix, ModelError, Site, SsnpSchema, VirtualText, DEFAULT_PLACEHOLDER};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub alphabet: Vec<u8>,
    pub min_gap: usize,
    pub seed: u64,
    pub max_retries: usize,
}

impl GenParams {
    pub fn new(n: usize, k: usize, m: usize, alphabet: &[u8], min_gap: usize, seed: u64) -> Self {
        Self {
            n,
            k,
            m,
            alphabet: alphabet.to_vec(),
            min_gap,
            seed,
            max_retries: 1000,
        }
    }
}

/// Draws a reference, site layout, allele pairs and uniform genotype bits,
/// resampling until every stored word passes validation.
pub fn generate(params: &GenParams) -> Result<(SsnpSchema, GenotypeMatrix), ModelError> {
    let GenParams { n, k, m, min_gap, .. } = *params;
    let mut alphabet = params.alphabet.clone();
    alphabet.sort_unstable();
    alphabet.dedup();
    if alphabet.len() < 2 {
        return Err(ModelError::InvalidParams("alphabet needs at least 2 characters".into()));
    }
    if min_gap < 2 {
        return Err(ModelError::InvalidParams("min_gap must be at least 2".into()));
    }
    if n < k * (min_gap + 1) + 2 {
        return Err(ModelError::InvalidParams(format!(
            "n = {n} too small for k = {k} sites with min_gap = {min_gap}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for _ in 0..params.max_retries.max(1) {
        let columns = sample_columns(&mut rng, n, k, min_gap);
        let mut reference: Vec<u8> = (0..n).map(|_| *alphabet.choose(&mut rng).unwrap()).collect();
        let mut sites = Vec::with_capacity(k);
        for &column in &columns {
            let mut pair: Vec<u8> = alphabet.choose_multiple(&mut rng, 2).copied().collect();
            pair.sort_unstable();
            reference[column - 1] = DEFAULT_PLACEHOLDER;
            sites.push(Site {
                column,
                low: pair[0],
                high: pair[1],
            });
        }
        let schema = SsnpSchema::new(n, alphabet.clone(), reference, sites, DEFAULT_PLACEHOLDER)?;
        let mut matrix = GenotypeMatrix::zeroed(m, k);
        for r in 1..=m {
            for j in 1..=k {
                matrix.set(r, j, rng.gen());
            }
        }
        let vt = VirtualText::new(schema, matrix)?;
        if vt.validate().ok() {
            return Ok(vt.into_parts());
        }
    }
    Err(ModelError::GenerationFailed {
        attempts: params.max_retries.max(1),
    })
}

/// Site columns with interior segments of at least `min_gap - 1` characters.
/// The two outer segments get up to the same minimum when room allows.
fn sample_columns(rng: &mut impl Rng, n: usize, k: usize, min_gap: usize) -> Vec<usize> {
    if k == 0 {
        return Vec::new();
    }
    let inner = min_gap - 1;
    // characters not taken by sites or interior minimums
    let room = n - k - (k - 1) * inner;
    let edge = inner.min(room / 2).max(1);
    let slack = room - 2 * edge;
    let mut cuts: Vec<usize> = (0..k).map(|_| rng.gen_range(0..=slack)).collect();
    cuts.sort_unstable();
    cuts.iter()
        .enumerate()
        .map(|(j, &x)| edge + 1 + j * min_gap + x)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        let p = GenParams::new(200, 5, 8, b"acgt", 16, 1);
        let a = generate(&p).unwrap();
        let b = generate(&p).unwrap();
        assert_eq!(a, b);
        let vt = VirtualText::new(a.0, a.1).unwrap();
        assert!(vt.validate().ok());
        assert_eq!(vt.k(), 5);
        assert_eq!(vt.m(), 8);
    }

    #[test]
    fn k_zero() {
        let (s, m) = generate(&GenParams::new(5, 0, 1, b"ab", 2, 7)).unwrap();
        assert_eq!(s.reference().len(), 5);
        assert_eq!(m.m(), 1);
        assert!(VirtualText::new(s, m).unwrap().validate().ok());
    }

    #[test]
    fn spacing_respected() {
        for seed in 0..50 {
            let (s, _) = generate(&GenParams::new(120, 6, 2, b"acgt", 9, seed)).unwrap();
            let cols: Vec<usize> = s.sites().iter().map(|x| x.column).collect();
            assert!(cols[0] >= 2 && *cols.last().unwrap() <= 119);
            assert!(cols.windows(2).all(|w| w[1] - w[0] >= 9), "{cols:?}");
        }
    }

    #[test]
    fn bad_params() {
        assert!(matches!(
            generate(&GenParams::new(10, 5, 1, b"ab", 2, 0)),
            Err(ModelError::InvalidParams(_))
        ));
        assert!(generate(&GenParams::new(100, 1, 1, b"a", 2, 0)).is_err());
        assert!(generate(&GenParams::new(100, 1, 1, b"ab", 1, 0)).is_err());
    }

    #[test]
    fn unreachable_uniqueness_fails() {
        // a binary alphabet with 1-character segments essentially never validates
        let mut p = GenParams::new(40, 12, 4, b"ab", 2, 3);
        p.max_retries = 5;
        assert!(matches!(
            generate(&p),
            Err(ModelError::GenerationFailed { attempts: 5 })
        ));
    }
}
