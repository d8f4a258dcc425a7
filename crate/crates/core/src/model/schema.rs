use std::ops::Range;

use super::ModelError;

/// Terminator appended to every word; collates below every alphabet character.
pub const SENTINEL: u8 = b'#';
/// Default marker for SNP-site columns in a schema's reference line.
pub const DEFAULT_PLACEHOLDER: u8 = b'?';

/// A two-allele SNP site. `low < high` in byte order; genotype bit 0 picks `low`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Site {
    pub column: usize,
    pub low: u8,
    pub high: u8,
}

impl Site {
    pub fn allele(&self, bit: bool) -> u8 {
        if bit {
            self.high
        } else {
            self.low
        }
    }
}

/// Reference text plus `k` SNP sites. Every word generated by the schema has
/// length `n`: fixed segments separated by one allele at each site column.
///
/// Columns are 1-based. Column `n + 1` denotes the sentinel in the database
/// layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SsnpSchema {
    n: usize,
    alphabet: Vec<u8>,
    reference: Vec<u8>,
    sites: Vec<Site>,
    placeholder: u8,
    /// byte -> ordinal (1-based alphabet rank), 0 when not in the alphabet
    ordinals: [u8; 256],
    /// column -> site index (1-based), 0 when the column is not a site
    site_at: Vec<u32>,
    /// column -> first site whose column is >= it, 0 when there is none
    next_site: Vec<u32>,
}

impl SsnpSchema {
    /// Checks every structural invariant: alphabet excludes the sentinel and
    /// placeholder; sites start at column 2 or later, end by `n - 1`, are at
    /// least two columns apart; alleles are distinct alphabet characters in
    /// ascending order; the reference holds the placeholder exactly at sites.
    pub fn new(
        n: usize,
        alphabet: Vec<u8>,
        reference: Vec<u8>,
        sites: Vec<Site>,
        placeholder: u8,
    ) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::InvalidReference("word length n must be at least 1".into()));
        }
        if alphabet.is_empty() {
            return Err(ModelError::InvalidAlphabet("alphabet is empty".into()));
        }
        if !placeholder.is_ascii_graphic() || placeholder == SENTINEL {
            return Err(ModelError::InvalidAlphabet(format!(
                "placeholder {:?} must be a printable ASCII character other than '#'",
                placeholder as char
            )));
        }
        if alphabet.len() > 254 {
            return Err(ModelError::InvalidAlphabet(
                "alphabet larger than 254 characters".into(),
            ));
        }
        let mut ordinals = [0u8; 256];
        for (i, &c) in alphabet.iter().enumerate() {
            if !c.is_ascii_graphic() {
                return Err(ModelError::InvalidAlphabet(format!(
                    "character {c:#04x} is not printable ASCII"
                )));
            }
            if c == SENTINEL || c == placeholder {
                return Err(ModelError::InvalidAlphabet(format!(
                    "alphabet must not contain {:?}",
                    c as char
                )));
            }
            if i > 0 && alphabet[i - 1] >= c {
                return Err(ModelError::InvalidAlphabet(
                    "alphabet must be strictly increasing in byte order".into(),
                ));
            }
            ordinals[c as usize] = (i + 1) as u8;
        }

        if reference.len() != n {
            return Err(ModelError::InvalidReference(format!(
                "reference has length {}, expected {n}",
                reference.len()
            )));
        }

        let mut site_at = vec![0u32; n + 2];
        for (idx, site) in sites.iter().enumerate() {
            let j = idx + 1;
            if site.column < 2 || site.column > n.saturating_sub(1) {
                return Err(ModelError::SitePlacementViolation {
                    column: site.column,
                    reason: format!("site columns must lie in [2, {}]", n.saturating_sub(1)),
                });
            }
            if idx > 0 && site.column < sites[idx - 1].column + 2 {
                return Err(ModelError::SitePlacementViolation {
                    column: site.column,
                    reason: format!(
                        "site follows column {} too closely (needs a gap of at least 2)",
                        sites[idx - 1].column
                    ),
                });
            }
            for c in [site.low, site.high] {
                if ordinals[c as usize] == 0 {
                    return Err(ModelError::InvalidAlleles {
                        site: j,
                        reason: format!("allele {:?} not in alphabet", c as char),
                    });
                }
            }
            if site.low >= site.high {
                return Err(ModelError::InvalidAlleles {
                    site: j,
                    reason: "alleles must be distinct with low < high".into(),
                });
            }
            site_at[site.column] = j as u32;
        }

        for (i, &c) in reference.iter().enumerate() {
            let col = i + 1;
            if site_at[col] != 0 {
                if c != placeholder {
                    return Err(ModelError::InvalidReference(format!(
                        "column {col} is a site but holds {:?} instead of the placeholder",
                        c as char
                    )));
                }
            } else if ordinals[c as usize] == 0 {
                return Err(ModelError::InvalidReference(format!(
                    "column {col} holds {:?}, which is not in the alphabet",
                    c as char
                )));
            }
        }

        let mut next_site = vec![0u32; n + 2];
        let mut upcoming = 0u32;
        for col in (1..=n + 1).rev() {
            if site_at[col] != 0 {
                upcoming = site_at[col];
            }
            next_site[col] = upcoming;
        }

        Ok(Self {
            n,
            alphabet,
            reference,
            sites,
            placeholder,
            ordinals,
            site_at,
            next_site,
        })
    }

    /// Word length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of SNP sites.
    pub fn k(&self) -> usize {
        self.sites.len()
    }

    pub fn alphabet(&self) -> &[u8] {
        &self.alphabet
    }

    pub fn reference(&self) -> &[u8] {
        &self.reference
    }

    pub fn placeholder(&self) -> u8 {
        self.placeholder
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    /// Site `j`, 1-based.
    pub fn site(&self, j: usize) -> &Site {
        &self.sites[j - 1]
    }

    pub fn site_column(&self, j: usize) -> usize {
        self.sites[j - 1].column
    }

    /// Site index at `col`, if the column is a SNP site.
    pub fn site_at_column(&self, col: usize) -> Option<usize> {
        match self.site_at.get(col) {
            Some(&j) if j != 0 => Some(j as usize),
            _ => None,
        }
    }

    /// First site whose column is `>= col`; `None` past the last site
    /// (including the sentinel column `n + 1`).
    pub fn next_site(&self, col: usize) -> Option<usize> {
        match self.next_site.get(col) {
            Some(&j) if j != 0 => Some(j as usize),
            _ => None,
        }
    }

    /// Collation ordinal: 0 for the sentinel, `1..` for alphabet characters.
    pub fn ordinal(&self, c: u8) -> Option<u8> {
        if c == SENTINEL {
            return Some(0);
        }
        match self.ordinals[c as usize] {
            0 => None,
            o => Some(o),
        }
    }

    /// 0-based byte range of segment `i` (1..=k+1) within a word.
    pub fn segment_range(&self, i: usize) -> Range<usize> {
        let k = self.k();
        assert!((1..=k + 1).contains(&i), "segment index {i} out of range");
        let start = if i == 1 { 0 } else { self.sites[i - 2].column };
        let end = if i == k + 1 {
            self.n
        } else {
            self.sites[i - 1].column - 1
        };
        start..end
    }

    /// Fixed segment `i` (1..=k+1) between consecutive sites.
    pub fn segment(&self, i: usize) -> &[u8] {
        &self.reference[self.segment_range(i)]
    }

    /// The word realized by one allele choice per site.
    pub fn realize(&self, bits: impl IntoIterator<Item = bool>) -> Vec<u8> {
        let mut word = self.reference.clone();
        for (site, bit) in self.sites.iter().zip(bits) {
            word[site.column - 1] = site.allele(bit);
        }
        word
    }
}
