//! Line-oriented schema and matrix files, and alignment ingestion.
//!
//! Schema file:
//!
//! ```text
//! SSNP 1
//! n=5 k=1 alphabet=acgt
//! ref=gt?ca
//! site 3 a c
//! ```
//!
//! Lines starting with `#` are comments. Line 2 may carry an optional
//! `placeholder=<c>` key when the reference uses something other than `?`.

use std::fmt::Write as _;

use super::{GenotypeMatrix, ModelError, Site, SsnpSchema, DEFAULT_PLACEHOLDER};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty())
}

fn malformed(line: usize, msg: impl std::fmt::Display) -> ModelError {
    ModelError::MalformedInput(format!("line {line}: {msg}"))
}

fn single_byte(line: usize, what: &str, s: &str) -> Result<u8, ModelError> {
    match s.as_bytes() {
        [b] if b.is_ascii() => Ok(*b),
        _ => Err(malformed(
            line,
            format!("{what} must be a single ASCII character, got {s:?}"),
        )),
    }
}

pub fn parse_schema(text: &str) -> Result<SsnpSchema, ModelError> {
    let mut lines = content_lines(text);
    let eof = || ModelError::MalformedInput("unexpected end of schema".into());

    let (ln, header) = lines.next().ok_or_else(eof)?;
    if header.trim() != "SSNP 1" {
        return Err(malformed(ln, format!("expected header `SSNP 1`, got {header:?}")));
    }

    let (ln, dims) = lines.next().ok_or_else(eof)?;
    let mut n = None;
    let mut k = None;
    let mut alphabet = None;
    let mut placeholder = DEFAULT_PLACEHOLDER;
    for token in dims.split_whitespace() {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| malformed(ln, format!("expected key=value, got {token:?}")))?;
        match key {
            "n" => n = Some(value.parse::<usize>().map_err(|e| malformed(ln, format!("n: {e}")))?),
            "k" => k = Some(value.parse::<usize>().map_err(|e| malformed(ln, format!("k: {e}")))?),
            "alphabet" => alphabet = Some(value.as_bytes().to_vec()),
            "placeholder" => placeholder = single_byte(ln, "placeholder", value)?,
            other => return Err(malformed(ln, format!("unknown key {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| malformed(ln, "missing n"))?;
    let k = k.ok_or_else(|| malformed(ln, "missing k"))?;
    let alphabet = alphabet.ok_or_else(|| malformed(ln, "missing alphabet"))?;

    let (ln, ref_line) = lines.next().ok_or_else(eof)?;
    let reference = ref_line
        .strip_prefix("ref=")
        .ok_or_else(|| malformed(ln, "expected ref=<reference>"))?
        .as_bytes()
        .to_vec();

    let mut sites = Vec::with_capacity(k);
    for _ in 0..k {
        let (ln, line) = lines.next().ok_or_else(eof)?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["site", col, low, high] => {
                let column = col
                    .parse::<usize>()
                    .map_err(|e| malformed(ln, format!("site column: {e}")))?;
                sites.push(Site {
                    column,
                    low: single_byte(ln, "allele", low)?,
                    high: single_byte(ln, "allele", high)?,
                });
            }
            _ => {
                return Err(malformed(
                    ln,
                    format!("expected `site <col> <low> <high>`, got {line:?}"),
                ))
            }
        }
    }
    if let Some((ln, extra)) = lines.next() {
        return Err(malformed(ln, format!("unexpected trailing line {extra:?}")));
    }

    SsnpSchema::new(n, alphabet, reference, sites, placeholder)
}

pub fn serialize_schema(schema: &SsnpSchema) -> String {
    let mut out = String::from("SSNP 1\n");
    let alphabet = String::from_utf8_lossy(schema.alphabet());
    write!(out, "n={} k={} alphabet={}", schema.n(), schema.k(), alphabet).unwrap();
    if schema.placeholder() != DEFAULT_PLACEHOLDER {
        write!(out, " placeholder={}", schema.placeholder() as char).unwrap();
    }
    out.push('\n');
    writeln!(out, "ref={}", String::from_utf8_lossy(schema.reference())).unwrap();
    for s in schema.sites() {
        writeln!(out, "site {} {} {}", s.column, s.low as char, s.high as char).unwrap();
    }
    out
}

/// Parses `m` lines of `k` binary digits. Blank lines are skipped, so a
/// `k = 0` matrix needs `rows` to say how many (empty) rows there are. When
/// `rows` is given the row count must match it.
pub fn parse_matrix(text: &str, schema: &SsnpSchema, rows: Option<usize>) -> Result<GenotypeMatrix, ModelError> {
    let k = schema.k();
    let mut parsed: Vec<Vec<bool>> = Vec::new();
    for (ln, line) in content_lines(text) {
        let line = line.trim();
        let row: Vec<bool> = line
            .bytes()
            .map(|b| match b {
                b'0' => Ok(false),
                b'1' => Ok(true),
                _ => Err(malformed(ln, format!("unexpected character {:?} in matrix", b as char))),
            })
            .collect::<Result<_, _>>()?;
        if row.len() != k {
            return Err(ModelError::DimensionMismatch {
                row: parsed.len() + 1,
                expected: k,
                found: row.len(),
            });
        }
        parsed.push(row);
    }
    match rows {
        Some(m) if k == 0 && parsed.is_empty() => Ok(GenotypeMatrix::zeroed(m, 0)),
        Some(m) if m != parsed.len() => Err(ModelError::MalformedInput(format!(
            "matrix has {} rows, expected {m}",
            parsed.len()
        ))),
        _ => GenotypeMatrix::from_rows(&parsed, k),
    }
}

/// One line of `k` digits per row; `k = 0` gives `m` empty lines.
pub fn serialize_matrix(matrix: &GenotypeMatrix) -> String {
    let mut out = String::with_capacity(matrix.m() * (matrix.k() + 1));
    for r in 1..=matrix.m() {
        for j in 1..=matrix.k() {
            out.push(if matrix.get(r, j) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

/// Reads sequences from plain text (one per line) or FASTA (records start
/// with `>`, sequence lines are concatenated).
pub fn read_alignment(text: &str) -> Result<Vec<String>, ModelError> {
    let fasta = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with('>'));
    let mut words = Vec::new();
    if fasta {
        let mut current: Option<String> = None;
        for line in text.lines().map(str::trim) {
            if line.starts_with('>') {
                words.extend(current.take());
                current = Some(String::new());
            } else if !line.is_empty() {
                match current.as_mut() {
                    Some(seq) => seq.push_str(line),
                    None => return Err(ModelError::MalformedInput("FASTA sequence before header".into())),
                }
            }
        }
        words.extend(current);
        if words.iter().any(String::is_empty) {
            return Err(ModelError::MalformedInput("empty FASTA record".into()));
        }
    } else {
        words.extend(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from));
    }
    if words.is_empty() {
        return Err(ModelError::MalformedInput("alignment contains no sequences".into()));
    }
    Ok(words)
}
