//! Brute-force reference implementations and the index-vs-oracle harness.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::index::{build, BuildConfig, CompressedSA, IndexError, SiteRef};
use crate::model::{VirtualText, SENTINEL};

/// Oracle inputs are capped; sorting is quadratic in the worst case.
pub const MAX_ORACLE_LEN: usize = 1 << 20;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("text is empty")]
    EmptyText,
    #[error("text of length {len} exceeds the oracle limit {max}")]
    TextTooLarge { len: usize, max: usize },
    #[error("pattern is empty")]
    EmptyPattern,
    #[error(transparent)]
    Index(#[from] IndexError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaiveSa {
    /// 1-based suffix start positions in lexicographic order.
    pub sa: Vec<usize>,
}

/// Suffix array by direct comparison sort of all suffixes.
pub fn naive_sa<T: Ord>(text: &[T]) -> Result<NaiveSa, OracleError> {
    if text.is_empty() {
        return Err(OracleError::EmptyText);
    }
    if text.len() > MAX_ORACLE_LEN {
        return Err(OracleError::TextTooLarge {
            len: text.len(),
            max: MAX_ORACLE_LEN,
        });
    }
    let mut sa: Vec<usize> = (1..=text.len()).collect();
    sa.sort_by(|&a, &b| text[a - 1..].cmp(&text[b - 1..]));
    Ok(NaiveSa { sa })
}

/// 1-based start positions of every (possibly overlapping) occurrence.
pub fn naive_locate<T: PartialEq>(text: &[T], pattern: &[T]) -> Result<Vec<usize>, OracleError> {
    if pattern.is_empty() {
        return Err(OracleError::EmptyPattern);
    }
    if pattern.len() > text.len() {
        return Ok(Vec::new());
    }
    Ok(text
        .windows(pattern.len())
        .enumerate()
        .filter(|(_, w)| *w == pattern)
        .map(|(i, _)| i + 1)
        .collect())
}

pub fn naive_count<T: PartialEq>(text: &[T], pattern: &[T]) -> Result<usize, OracleError> {
    naive_locate(text, pattern).map(|v| v.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub rank: usize,
    pub expected: usize,
    /// `None` when the index returned an error.
    pub actual: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub ranks_checked: usize,
    pub ranks_equal: usize,
    pub first_divergence: Option<Divergence>,
    /// Site ranks whose stepped and fast chain evaluations were both checked.
    pub chain_checked: usize,
    pub chain_divergence: Option<String>,
    pub patterns_checked: usize,
    pub pattern_divergence: Option<String>,
    pub build_time: Duration,
    pub query_time: Duration,
    pub max_steps: usize,
    pub mean_steps: f64,
}

impl CompareReport {
    pub fn success(&self) -> bool {
        self.first_divergence.is_none()
            && self.ranks_equal == self.ranks_checked
            && self.chain_divergence.is_none()
            && self.pattern_divergence.is_none()
    }
}

/// Builds the index, then compares it against the oracle.
pub fn full_compare(
    vt: &VirtualText,
    config: &BuildConfig,
    patterns: usize,
    seed: u64,
) -> Result<CompareReport, OracleError> {
    let started = Instant::now();
    let csa = build(vt.clone(), config)?;
    let build_time = started.elapsed();
    let mut report = compare_index(&csa, patterns, seed)?;
    report.build_time = build_time;
    Ok(report)
}

/// Compares every rank, every site's chain evaluation, and `patterns`
/// sampled patterns of an existing index against brute force.
pub fn compare_index(csa: &CompressedSA, patterns: usize, seed: u64) -> Result<CompareReport, OracleError> {
    let vt = csa.text();
    let ordinals = vt.expand_ordinals();
    let naive = naive_sa(&ordinals)?;

    let started = Instant::now();
    let mut first_divergence = None;
    let mut ranks_equal = 0;
    let mut max_steps = 0;
    let mut total_steps = 0usize;
    for (i, &expected) in naive.sa.iter().enumerate() {
        let rank = i + 1;
        match csa.sa_access_traced(rank) {
            Ok(a) if a.position == expected => {
                ranks_equal += 1;
                max_steps = max_steps.max(a.steps);
                total_steps += a.steps;
            }
            other => {
                if first_divergence.is_none() {
                    first_divergence = Some(Divergence {
                        rank,
                        expected,
                        actual: other.ok().map(|a| a.position),
                    });
                }
            }
        }
    }
    let query_time = started.elapsed();

    let (chain_checked, chain_divergence) = compare_chain(csa, &naive);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let expanded = vt.expand();
    let mut pattern_divergence = None;
    for t in 0..patterns {
        let pattern = sample_pattern(&mut rng, &expanded, vt.schema().alphabet(), t % 2 == 0);
        let expected = naive_locate(&expanded, &pattern)?;
        let located = csa.locate(&pattern);
        let counted = csa.count(&pattern);
        if located.as_ref().ok() != Some(&expected) || counted.as_ref().ok() != Some(&expected.len()) {
            pattern_divergence = Some(format!(
                "pattern {:?}: expected {:?}, located {:?}, counted {:?}",
                String::from_utf8_lossy(&pattern),
                expected,
                located.ok(),
                counted.ok()
            ));
            break;
        }
    }

    Ok(CompareReport {
        ranks_checked: naive.sa.len(),
        ranks_equal,
        first_divergence,
        chain_checked,
        chain_divergence,
        patterns_checked: patterns,
        pattern_divergence,
        build_time: Duration::ZERO,
        query_time,
        max_steps,
        mean_steps: if ranks_equal == 0 {
            0.0
        } else {
            total_steps as f64 / ranks_equal as f64
        },
    })
}

/// For every site `j` and rank `q`, the row reached through the chain must
/// be the row the oracle places at rank `q` of column `c_j`.
fn compare_chain(csa: &CompressedSA, naive: &NaiveSa) -> (usize, Option<String>) {
    let vt = csa.text();
    let n = vt.n();
    let mut by_column: Vec<Vec<usize>> = vec![Vec::new(); n + 2];
    for &p in &naive.sa {
        let row = (p - 1) / (n + 1) + 1;
        by_column[(p - 1) % (n + 1) + 1].push(row);
    }
    let mut checked = 0;
    for j in 1..=csa.k() {
        let rows = &by_column[vt.schema().site_column(j)];
        for (i, &row) in rows.iter().enumerate() {
            let q = i + 1;
            for (how, result) in [
                ("stepped", csa.chain_eval_stepped(j, q)),
                ("fast", csa.chain_eval(j, q)),
            ] {
                let reached = result.ok().and_then(|(site, r)| {
                    let anchor = csa.anchors().anchors().iter().find(|a| a.site == site)?;
                    anchor.positions.get(r.checked_sub(1)?).map(|&p| (p - 1) / (n + 1) + 1)
                });
                if reached != Some(row) {
                    return (
                        checked,
                        Some(format!(
                            "{how} chain from site {j} rank {q}: expected row {row}, got {reached:?}"
                        )),
                    );
                }
            }
            checked += 1;
        }
    }
    debug_assert!(csa.anchors().terminal().site == SiteRef::Terminal);
    (checked, None)
}

/// Either a substring of the text that avoids the sentinel, or a random
/// string over the alphabet.
fn sample_pattern(rng: &mut impl Rng, text: &[u8], alphabet: &[u8], from_text: bool) -> Vec<u8> {
    if from_text {
        let start = rng.gen_range(0..text.len());
        let len = rng.gen_range(1..=12);
        let pattern: Vec<u8> = text[start..]
            .iter()
            .take(len)
            .take_while(|&&c| c != SENTINEL)
            .copied()
            .collect();
        if !pattern.is_empty() {
            return pattern;
        }
    }
    let len = rng.gen_range(1..=6);
    (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
}
