//! Uniqueness of the fixed segments: each segment must occur exactly once
//! in every word (at its own place).

use aho_corasick::AhoCorasick;
use serde::Serialize;

use super::{ModelError, SsnpSchema, VirtualText};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// A segment occurs more than once in one of the stored words.
    RepeatedInStoredWord,
    /// A segment occurs more than once in one of the `2^k` realizations.
    RepeatedInRealization,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    /// Stored row (1-based) or realization number (the allele bits read as
    /// an integer, site 1 least significant).
    pub word: u64,
    /// Segment index, 1..=k+1.
    pub segment: usize,
    /// 1-based start columns of every occurrence in the word.
    pub positions: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ok() {
            return write!(f, "ok");
        }
        writeln!(f, "{} violation(s)", self.violations.len())?;
        for v in &self.violations {
            let kind = match v.kind {
                ViolationKind::RepeatedInStoredWord => "word",
                ViolationKind::RepeatedInRealization => "realization",
            };
            writeln!(
                f,
                "  {kind} {}: segment {} occurs {} times at columns {:?}",
                v.word,
                v.segment,
                v.positions.len(),
                v.positions
            )?;
        }
        Ok(())
    }
}

/// Multi-pattern scanner for the segments of one schema.
struct SegmentScanner {
    automaton: AhoCorasick,
    /// distinct pattern -> segments equal to it
    owners: Vec<Vec<usize>>,
}

impl SegmentScanner {
    fn new(schema: &SsnpSchema) -> Self {
        let mut patterns: Vec<&[u8]> = Vec::new();
        let mut owners: Vec<Vec<usize>> = Vec::new();
        for i in 1..=schema.k() + 1 {
            let seg = schema.segment(i);
            match patterns.iter().position(|p| *p == seg) {
                Some(id) => owners[id].push(i),
                None => {
                    patterns.push(seg);
                    owners.push(vec![i]);
                }
            }
        }
        let automaton = AhoCorasick::new(&patterns).expect("segment automaton");
        Self { automaton, owners }
    }

    fn scan(&self, word: &[u8], kind: ViolationKind, word_id: u64, out: &mut Vec<Violation>) {
        let mut hits: Vec<Vec<usize>> = vec![Vec::new(); self.owners.len()];
        for m in self.automaton.find_overlapping_iter(word) {
            hits[m.pattern().as_usize()].push(m.start() + 1);
        }
        for (id, positions) in hits.into_iter().enumerate() {
            if positions.len() > 1 {
                for &segment in &self.owners[id] {
                    out.push(Violation {
                        kind,
                        word: word_id,
                        segment,
                        positions: positions.clone(),
                    });
                }
            }
        }
    }
}

pub(crate) fn validate_stored(vt: &VirtualText) -> ValidationReport {
    let scanner = SegmentScanner::new(vt.schema());
    let mut violations = Vec::new();
    for row in 1..=vt.m() {
        scanner.scan(
            &vt.word(row),
            ViolationKind::RepeatedInStoredWord,
            row as u64,
            &mut violations,
        );
    }
    ValidationReport { violations }
}

/// Default limit for [`language_check_exhaustive`].
pub const DEFAULT_MAX_EXHAUSTIVE_SITES: usize = 16;

/// Checks all `2^k` allele assignments of the schema, not just stored words.
pub fn language_check_exhaustive(schema: &SsnpSchema, max_k: usize) -> Result<ValidationReport, ModelError> {
    let k = schema.k();
    if k > max_k || k >= 64 {
        return Err(ModelError::TooManySites { k, max: max_k });
    }
    let scanner = SegmentScanner::new(schema);
    let mut violations = Vec::new();
    for assignment in 0u64..(1u64 << k) {
        let word = schema.realize((0..k).map(|j| (assignment >> j) & 1 == 1));
        scanner.scan(&word, ViolationKind::RepeatedInRealization, assignment, &mut violations);
    }
    Ok(ValidationReport { violations })
}

#[cfg(test)]
mod tests {
    use super::super::{GenotypeMatrix, Site};
    use super::*;

    fn schema(n: usize, reference: &[u8], sites: Vec<Site>) -> SsnpSchema {
        SsnpSchema::new(n, b"acgt".to_vec(), reference.to_vec(), sites, b'?').unwrap()
    }

    #[test]
    fn running_instance_is_valid() {
        let s = schema(
            5,
            b"gt?ca",
            vec![Site {
                column: 3,
                low: b'a',
                high: b'c',
            }],
        );
        let vt = VirtualText::new(
            s.clone(),
            GenotypeMatrix::from_rows(&[vec![false], vec![true]], 1).unwrap(),
        )
        .unwrap();
        assert!(vt.validate().ok());
        assert!(language_check_exhaustive(&s, DEFAULT_MAX_EXHAUSTIVE_SITES)
            .unwrap()
            .ok());
    }

    #[test]
    fn repeated_single_character_segment() {
        // word "acaaa": segment 1 "a" appears at columns 1, 3, 4, 5
        let s = schema(
            5,
            b"a?aaa",
            vec![Site {
                column: 2,
                low: b'c',
                high: b't',
            }],
        );
        let vt = VirtualText::new(s, GenotypeMatrix::from_rows(&[vec![false]], 1).unwrap()).unwrap();
        let report = vt.validate();
        assert!(!report.ok());
        let v = report.violations.iter().find(|v| v.segment == 1).unwrap();
        assert_eq!(v.word, 1);
        assert_eq!(v.positions, vec![1, 3, 4, 5]);
        assert_eq!(v.kind, ViolationKind::RepeatedInStoredWord);
    }

    #[test]
    fn k_zero_words_always_pass() {
        let s = SsnpSchema::new(2, b"ab".to_vec(), b"ab".to_vec(), vec![], b'?').unwrap();
        let vt = VirtualText::new(s.clone(), GenotypeMatrix::zeroed(2, 0)).unwrap();
        assert!(vt.validate().ok());
        assert!(language_check_exhaustive(&s, 16).unwrap().ok());
    }

    #[test]
    fn high_allele_realization_repeats_segment() {
        // "ca?aa" with alleles (c, g): the c-realization "cacaa" repeats "ca"
        let s = schema(
            5,
            b"ca?aa",
            vec![Site {
                column: 3,
                low: b'c',
                high: b'g',
            }],
        );
        let report = language_check_exhaustive(&s, 16).unwrap();
        assert!(!report.ok());
        assert!(report
            .violations
            .iter()
            .any(|v| v.word == 0 && v.segment == 1 && v.positions == vec![1, 3]));
        // only the stored word matters for validate
        let vt = VirtualText::new(s, GenotypeMatrix::from_rows(&[vec![true]], 1).unwrap()).unwrap();
        assert!(vt.validate().ok());
    }

    #[test]
    fn identical_segments_are_both_reported() {
        let s = SsnpSchema::new(
            5,
            b"gt".to_vec(),
            b"gt?gt".to_vec(),
            vec![Site {
                column: 3,
                low: b'g',
                high: b't',
            }],
            b'?',
        )
        .unwrap();
        let vt = VirtualText::new(s, GenotypeMatrix::zeroed(1, 1)).unwrap();
        let report = vt.validate();
        let segments: Vec<usize> = report.violations.iter().map(|v| v.segment).collect();
        assert_eq!(segments, vec![1, 2]);
    }

    #[test]
    fn too_many_sites_for_exhaustive_check() {
        let s = schema(
            5,
            b"gt?ca",
            vec![Site {
                column: 3,
                low: b'a',
                high: b'c',
            }],
        );
        assert!(matches!(
            language_check_exhaustive(&s, 0),
            Err(ModelError::TooManySites { k: 1, max: 0 })
        ));
    }
}
