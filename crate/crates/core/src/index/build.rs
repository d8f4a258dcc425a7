use log::debug;

use super::{
    group_layout, Anchor, AnchorSet, BlockDirectory, BlockMeta, BuildConfig, CompressedSA, IndexError, PackedGroup,
    PermutationChain, Side, SiteRef,
};
use crate::model::{split_pos, VirtualText};
use crate::succinct::{IndexedBitvector, PackedLabelString};

/// Suffix array (1-based positions) of an ordinal text.
fn suffix_array(text: &[u8]) -> Result<Vec<u32>, IndexError> {
    if text.len() >= i32::MAX as usize {
        return Err(IndexError::Malformed(format!(
            "database of {} characters is too large",
            text.len()
        )));
    }
    let mut sa = vec![0i32; text.len()];
    divsufsort::sort_in_place(text, &mut sa);
    Ok(sa.into_iter().map(|p| p as u32 + 1).collect())
}

fn violation(msg: String) -> IndexError {
    IndexError::SsnpViolation(msg)
}

/// Builds the index. Materializes the database text and its suffix array,
/// derives every site's row order from it, and checks the two structural
/// facts the representation relies on (two-run site permutations and
/// contiguous, order-preserving blocks) before dropping the suffix array.
pub fn build(text: VirtualText, config: &BuildConfig) -> Result<CompressedSA, IndexError> {
    let (n, k, m) = (text.n(), text.k(), text.m());
    if m == 0 {
        return Err(IndexError::EmptyDatabase);
    }
    let stride = config.stride.resolve(n)?;
    if config.validate {
        let report = text.validate();
        if !report.ok() {
            return Err(IndexError::Invalid(report));
        }
    }
    let schema = text.schema();
    let matrix = text.matrix();
    let total = text.len();

    let sa = suffix_array(&text.expand_ordinals())?;
    let mut rank_of = vec![0u32; total + 1];
    for (i, &p) in sa.iter().enumerate() {
        rank_of[p as usize] = i as u32 + 1;
    }
    let pos = |row: usize, col: usize| (row - 1) * (n + 1) + col;

    // the m sentinel suffixes occupy the first m ranks
    let mut terminal_order = Vec::with_capacity(m);
    for &p in &sa[..m] {
        let (row, col) = split_pos(n, p as usize);
        if col != n + 1 {
            return Err(violation(format!(
                "rank {} is not a sentinel suffix",
                terminal_order.len() + 1
            )));
        }
        terminal_order.push(row as u32);
    }

    // site orders, right to left
    let mut site_orders: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut chain_bits: Vec<IndexedBitvector> = vec![IndexedBitvector::default(); k];
    for j in (1..=k).rev() {
        let col = schema.site_column(j);
        let downstream = if j == k { &terminal_order } else { &site_orders[j] };
        let mut order: Vec<u32> = (1..=m as u32).collect();
        order.sort_unstable_by_key(|&r| rank_of[pos(r as usize, col)]);

        let bit = |r: u32| matrix.get(r as usize, j);
        let merged = downstream
            .iter()
            .copied()
            .filter(|&r| !bit(r))
            .chain(downstream.iter().copied().filter(|&r| bit(r)));
        if !order.iter().copied().eq(merged) {
            return Err(violation(format!(
                "site {j}: row order is not a two-run merge of the downstream order"
            )));
        }
        chain_bits[j - 1] = IndexedBitvector::from_bits(downstream.iter().map(|&r| bit(r)));
        site_orders[j - 1] = order;
    }
    let chain = PermutationChain::new(chain_bits);

    // block directory
    let side_slot = |s: Side| s.code() as usize;
    let mut seen = vec![false; (n + 2) * 3];
    let mut starts = Vec::with_capacity(total);
    let mut meta: Vec<BlockMeta> = Vec::new();
    let mut current: Option<(usize, Side)> = None;
    let mut offset = 0usize;
    for (i, &p) in sa.iter().enumerate() {
        let (row, col) = split_pos(n, p as usize);
        let site = schema.next_site(col);
        let side = match site {
            Some(j) if matrix.get(row, j) => Side::High,
            Some(_) => Side::Low,
            None => Side::All,
        };
        if current != Some((col, side)) {
            let slot = col * 3 + side_slot(side);
            if seen[slot] {
                return Err(violation(format!(
                    "block (column {col}, {side:?}) is split around rank {}",
                    i + 1
                )));
            }
            seen[slot] = true;
            let side_offset = match (side, site) {
                (Side::High, Some(j)) => chain.zeros(j),
                _ => 0,
            };
            meta.push(BlockMeta {
                column: col,
                site: site.map_or(SiteRef::Terminal, SiteRef::Site),
                side,
                side_offset,
            });
            current = Some((col, side));
            offset = 0;
            starts.push(true);
        } else {
            offset += 1;
            starts.push(false);
        }
        let block = meta.last().unwrap();
        let order = match site {
            Some(j) => &site_orders[j - 1],
            None => &terminal_order,
        };
        if order.get(block.side_offset + offset).map(|&r| r as usize) != Some(row) {
            return Err(violation(format!(
                "rank {}: block (column {col}, {side:?}) does not follow its site order",
                i + 1
            )));
        }
    }
    let directory = BlockDirectory {
        starts: IndexedBitvector::from_bits(starts),
        meta,
    };

    // explicit anchors
    let order_positions =
        |order: &[u32], col: usize| -> Vec<usize> { order.iter().map(|&r| pos(r as usize, col)).collect() };
    let mut anchors = Vec::with_capacity(k / stride + 1);
    for j in (stride..=k).step_by(stride) {
        let col = schema.site_column(j);
        anchors.push(Anchor {
            site: SiteRef::Site(j),
            column: col,
            positions: order_positions(&site_orders[j - 1], col),
        });
    }
    anchors.push(Anchor {
        site: SiteRef::Terminal,
        column: n + 1,
        positions: sa[..m].iter().map(|&p| p as usize).collect(),
    });
    let anchors = AnchorSet { stride, k, anchors };
    drop(rank_of);
    drop(sa);

    // packed groups
    let mut groups = Vec::new();
    for (first_site, len, anchor) in group_layout(k, stride) {
        let anchor_order = match anchors.get(anchor).site {
            SiteRef::Site(j) => &site_orders[j - 1],
            SiteRef::Terminal => &terminal_order,
        };
        let labels: Vec<u32> = anchor_order
            .iter()
            .map(|&r| {
                (first_site..first_site + len).fold(0u32, |acc, j| (acc << 1) | u32::from(matrix.get(r as usize, j)))
            })
            .collect();
        let labels = PackedLabelString::new(&labels, len as u32)?;
        groups.push(PackedGroup {
            first_site,
            len,
            anchor,
            labels,
        });
    }

    debug!(
        "built index: n={n} k={k} m={m} g={stride} blocks={} anchors={} groups={}",
        directory.meta.len(),
        anchors.anchors.len(),
        groups.len()
    );
    Ok(CompressedSA::assemble(text, stride, directory, chain, anchors, groups))
}
