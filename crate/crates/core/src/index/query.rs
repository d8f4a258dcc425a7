use super::{CompressedSA, IndexError, SiteRef};

/// Result of an instrumented suffix-array access.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Access {
    pub position: usize,
    /// sigma_step evaluations performed
    pub steps: usize,
}

impl CompressedSA {
    fn check_site(&self, j: usize) -> Result<(), IndexError> {
        if j == 0 || j > self.k() {
            return Err(IndexError::IndexOutOfRange {
                what: "site",
                index: j,
                max: self.k(),
            });
        }
        Ok(())
    }

    fn check_row_rank(&self, q: usize) -> Result<(), IndexError> {
        if q == 0 || q > self.m() {
            return Err(IndexError::IndexOutOfRange {
                what: "row rank",
                index: q,
                max: self.m(),
            });
        }
        Ok(())
    }

    /// `SA[rank]`.
    pub fn sa_access(&self, rank: usize) -> Result<usize, IndexError> {
        self.sa_access_traced(rank).map(|a| a.position)
    }

    pub fn sa_access_traced(&self, rank: usize) -> Result<Access, IndexError> {
        if rank == 0 || rank > self.len() {
            return Err(IndexError::IndexOutOfRange {
                what: "rank",
                index: rank,
                max: self.len(),
            });
        }
        let (block, offset) = self.directory.locate_rank(rank)?;
        let row_rank = block.side_offset + offset + 1;
        let (anchor, anchor_rank, steps) = match block.site {
            SiteRef::Terminal => (self.anchors.anchors.len() - 1, row_rank, 0),
            SiteRef::Site(j) => self.chain_eval_traced(j, row_rank)?,
        };
        let anchor = self.anchors.get(anchor);
        let position = anchor.positions[anchor_rank - 1] - (anchor.column - block.column);
        Ok(Access { position, steps })
    }

    /// Maps a rank in site `j`'s order to the downstream order.
    pub fn sigma_step(&self, j: usize, site_rank: usize) -> Result<usize, IndexError> {
        self.check_site(j)?;
        self.check_row_rank(site_rank)?;
        let zeros = self.chain.zeros(j);
        let bv = self.chain.bitvector(j);
        Ok(if site_rank <= zeros {
            bv.select(site_rank, false)?
        } else {
            bv.select(site_rank - zeros, true)?
        })
    }

    /// Carries a rank in site `j`'s order to the first anchor at or after
    /// `j`, using the packed group when `j` starts one.
    pub fn chain_eval(&self, j: usize, site_rank: usize) -> Result<(SiteRef, usize), IndexError> {
        let (a, r, _) = self.chain_eval_traced(j, site_rank)?;
        Ok((self.anchors.get(a).site, r))
    }

    /// Same as [`chain_eval`](Self::chain_eval) but always walks one
    /// `sigma_step` per site.
    pub fn chain_eval_stepped(&self, j: usize, site_rank: usize) -> Result<(SiteRef, usize), IndexError> {
        self.check_site(j)?;
        self.check_row_rank(site_rank)?;
        let a = self.anchors.anchor_for_site(j);
        let (r, _) = self.walk(j, a, site_rank)?;
        Ok((self.anchors.get(a).site, r))
    }

    fn walk(&self, j: usize, anchor: usize, mut q: usize) -> Result<(usize, usize), IndexError> {
        let end = match self.anchors.get(anchor).site {
            SiteRef::Site(s) => s,
            SiteRef::Terminal => self.k() + 1,
        };
        for s in j..end {
            q = self.sigma_step(s, q)?;
        }
        Ok((q, end - j))
    }

    pub(crate) fn chain_eval_traced(&self, j: usize, site_rank: usize) -> Result<(usize, usize, usize), IndexError> {
        self.check_site(j)?;
        self.check_row_rank(site_rank)?;
        let a = self.anchors.anchor_for_site(j);
        if self.anchors.is_anchor(j) {
            return Ok((a, site_rank, 0));
        }
        if let Some(g) = self.group_starting_at(j) {
            return Ok((a, self.packed_forward(g, site_rank)?, 0));
        }
        let (r, steps) = self.walk(j, a, site_rank)?;
        Ok((a, r, steps))
    }

    fn check_group(&self, group: usize) -> Result<&super::PackedGroup, IndexError> {
        self.groups.get(group).ok_or(IndexError::IndexOutOfRange {
            what: "group",
            index: group,
            max: self.groups.len().saturating_sub(1),
        })
    }

    /// Rank at the group's first site -> rank at its anchor, in one label
    /// select.
    pub fn packed_forward(&self, group: usize, first_rank: usize) -> Result<usize, IndexError> {
        let g = self.check_group(group)?;
        self.check_row_rank(first_rank)?;
        let c = g.labels.cumulative();
        let label = c[1..].partition_point(|&x| x < first_rank);
        Ok(g.labels.select(label as u32, first_rank - c[label])?)
    }

    /// Anchor rank -> rank at the group's first site.
    pub fn packed_backward(&self, group: usize, anchor_rank: usize) -> Result<usize, IndexError> {
        let g = self.check_group(group)?;
        self.check_row_rank(anchor_rank)?;
        let label = g.labels.access(anchor_rank)?;
        Ok(g.labels.cumulative()[label as usize] + g.labels.partial_rank(anchor_rank)?)
    }

    /// [`packed_forward`](Self::packed_forward) addressed by site.
    pub fn packed_forward_at_site(&self, j: usize, first_rank: usize) -> Result<usize, IndexError> {
        self.check_site(j)?;
        let group = self.group_starting_at(j).ok_or(IndexError::NotGroupStart(j))?;
        self.packed_forward(group, first_rank)
    }
}
