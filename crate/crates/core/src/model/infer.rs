use super::{GenotypeMatrix, ModelError, Site, SsnpSchema, VirtualText, DEFAULT_PLACEHOLDER, SENTINEL};

/// Recovers a schema and genotype matrix from equal-length aligned words.
/// Every column with two distinct characters becomes a site, its smaller
/// character the low allele. The result must pass validation.
pub fn infer_from_alignment<W: AsRef<[u8]>>(words: &[W]) -> Result<(SsnpSchema, GenotypeMatrix), ModelError> {
    let first = words
        .first()
        .ok_or_else(|| ModelError::MalformedInput("no words given".into()))?
        .as_ref();
    let n = first.len();
    if n == 0 {
        return Err(ModelError::MalformedInput("words must be non-empty".into()));
    }
    let mut seen = [false; 256];
    for (r, w) in words.iter().enumerate() {
        let w = w.as_ref();
        if w.len() != n {
            return Err(ModelError::LengthMismatch {
                word: r + 1,
                expected: n,
                found: w.len(),
            });
        }
        for &c in w {
            if c == SENTINEL || c == DEFAULT_PLACEHOLDER || !c.is_ascii_graphic() {
                return Err(ModelError::MalformedInput(format!(
                    "word {} contains reserved or non-printable character {:?}",
                    r + 1,
                    c as char
                )));
            }
            seen[c as usize] = true;
        }
    }
    let alphabet: Vec<u8> = (0u8..=255).filter(|&c| seen[c as usize]).collect();

    let mut reference = first.to_vec();
    let mut sites = Vec::new();
    for col in 1..=n {
        let mut chars: Vec<u8> = words.iter().map(|w| w.as_ref()[col - 1]).collect();
        chars.sort_unstable();
        chars.dedup();
        match chars.len() {
            1 => {}
            2 => {
                if col < 2 || col > n - 1 {
                    return Err(ModelError::SitePlacementViolation {
                        column: col,
                        reason: format!("polymorphic columns must lie in [2, {}]", n.saturating_sub(1)),
                    });
                }
                if let Some(prev) = sites.last().map(|s: &Site| s.column) {
                    if col < prev + 2 {
                        return Err(ModelError::SitePlacementViolation {
                            column: col,
                            reason: format!("polymorphic column adjacent to column {prev}"),
                        });
                    }
                }
                reference[col - 1] = DEFAULT_PLACEHOLDER;
                sites.push(Site {
                    column: col,
                    low: chars[0],
                    high: chars[1],
                });
            }
            _ => {
                return Err(ModelError::TooManyAllelesInColumn {
                    column: col,
                    alleles: String::from_utf8_lossy(&chars).into_owned(),
                })
            }
        }
    }

    let k = sites.len();
    let mut matrix = GenotypeMatrix::zeroed(words.len(), k);
    for (r, w) in words.iter().enumerate() {
        let w = w.as_ref();
        for (j, site) in sites.iter().enumerate() {
            matrix.set(r + 1, j + 1, w[site.column - 1] == site.high);
        }
    }
    let schema = SsnpSchema::new(n, alphabet, reference, sites, DEFAULT_PLACEHOLDER)?;
    let vt = VirtualText::new(schema, matrix)?;
    let report = vt.validate();
    if !report.ok() {
        return Err(ModelError::UniquenessViolation(report));
    }
    Ok(vt.into_parts())
}
