//! A-sets, the bottom/top window sets, and the block-covering exposure
//! criterion for rotation-product codes and their relabelings.
//!
//! For a block with anchor `a`, the A-set of the mapping `i → j` records
//! `g⁻¹(a)` for each codeword `g` that r-exposes `i → j`. Since a block's
//! rotations are in bijection with the positions of its anchor, the union of
//! the A-sets over a block equals the whole block exactly when every rotation
//! of that block exposes `f` somewhere inside it. For a direct product of
//! rotations this is equivalent to `d(f, C) > r`.
//!
//! The criterion for more than two factors follows from the same
//! product argument; the two-factor case is the tested base case.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Block, CodeDescriptor, GroupCode};
use crate::perm::Permutation;

/// Bottom `B = [1, n−r−1]` and top `T = [r+2, n]` value windows. Only values
/// in `B ∪ T` can differ from any other value in `[n]` by more than `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowSets {
    pub n: usize,
    pub r: usize,
    pub bottom: Vec<usize>,
    pub top: Vec<usize>,
}

impl WindowSets {
    /// `B ∩ T ≠ ∅`, which happens iff `r ≤ (n−3)/2`.
    pub fn overlapping(&self) -> bool {
        match (self.bottom.last(), self.top.first()) {
            (Some(&b), Some(&t)) => b >= t,
            _ => false,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bottom.is_empty() && self.top.is_empty()
    }

    /// Sorted, deduplicated `B ∪ T`.
    pub fn union(&self) -> Vec<usize> {
        let mut u: Vec<usize> = self.bottom.iter().chain(&self.top).copied().collect();
        u.sort_unstable();
        u.dedup();
        u
    }

    pub fn in_bottom(&self, j: usize) -> bool {
        j >= 1 && j + self.r < self.n
    }

    pub fn in_top(&self, j: usize) -> bool {
        j >= self.r + 2 && j <= self.n
    }
}

/// Window sets for radius `r` on `[n]`, `0 ≤ r ≤ n−1`.
pub fn window_sets(n: usize, r: usize) -> Result<WindowSets> {
    if n == 0 || r >= n {
        return Err(Error::InvalidParameter(format!(
            "window radius r={r} must satisfy 0 <= r <= n-1 (n={n})"
        )));
    }
    Ok(WindowSets {
        n,
        r,
        bottom: (1..n - r).collect(),
        top: (r + 2..=n).collect(),
    })
}

/// `A^C_{i→j}` at radius `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ASet {
    pub position: usize,
    pub target: usize,
    pub anchor: usize,
    pub members: Vec<usize>,
}

impl ASet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn block_of(code: &GroupCode, i: usize) -> Option<&Block> {
    code.block_structure()?.iter().find(|b| b.contains(i))
}

/// Scans `C` for the codewords r-exposing `i → j` and records where each puts
/// the anchor of `i`'s block. Codes without rotation blocks use anchor 1.
pub fn aset(code: &GroupCode, i: usize, j: usize, r: usize) -> Result<ASet> {
    let n = code.degree();
    if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
        return Err(Error::InvalidParameter(format!(
            "mapping {i}->{j} outside 1..={n}"
        )));
    }
    let anchor = block_of(code, i).map_or(1, Block::anchor);
    let mut members: Vec<usize> = code
        .elements()
        .iter()
        .filter(|g| g.get(i).abs_diff(j) > r)
        .map(|g| g.position_of(anchor))
        .collect();
    members.sort_unstable();
    members.dedup();
    Ok(ASet {
        position: i,
        target: j,
        anchor,
        members,
    })
}

fn require_blocks<'a>(code: &'a GroupCode, op: &'static str) -> Result<&'a [Block]> {
    code.block_structure().ok_or_else(|| Error::WrongKind {
        op,
        kind: code.descriptor().to_string(),
    })
}

/// True iff some block equals the union of its positions' A-sets under `f`.
pub fn exposure_by_asets(f: &Permutation, code: &GroupCode, r: usize) -> Result<bool> {
    Ok(explain(f, code, r)?.exposed)
}

/// Per-block A-set table behind [`exposure_by_asets`].
#[derive(Clone, Debug, Serialize)]
pub struct ExposureReport {
    pub permutation: Permutation,
    pub r: usize,
    pub blocks: Vec<BlockReport>,
    pub exposed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    pub locations: Vec<usize>,
    pub anchor: usize,
    pub asets: Vec<ASet>,
    pub union: Vec<usize>,
    pub covered: bool,
}

pub fn explain(f: &Permutation, code: &GroupCode, r: usize) -> Result<ExposureReport> {
    if f.degree() != code.degree() {
        return Err(Error::DegreeMismatch {
            left: f.degree(),
            right: code.degree(),
        });
    }
    let blocks = require_blocks(code, "exposure_by_asets")?;
    let mut reports = Vec::with_capacity(blocks.len());
    for block in blocks {
        let asets = block
            .locations
            .iter()
            .map(|&i| aset(code, i, f.get(i), r))
            .collect::<Result<Vec<_>>>()?;
        let mut union: Vec<usize> = asets.iter().flat_map(|a| a.members.iter().copied()).collect();
        union.sort_unstable();
        union.dedup();
        let covered = union == block.sorted();
        reports.push(BlockReport {
            locations: block.locations.clone(),
            anchor: block.anchor(),
            asets,
            union,
            covered,
        });
    }
    let exposed = reports.iter().any(|b| b.covered);
    Ok(ExposureReport {
        permutation: f.clone(),
        r,
        blocks: reports,
        exposed,
    })
}

/// Size bound on `|A^{C}_{i→j}|` for a (relabeled) `(p,q)`-type code.
///
/// For the natural `G_{p,q}` with `r ∈ [p, p+q]` the value is the exact count
/// (it depends on which block holds `i`). For a relabeling it is the
/// block-independent bound, valid for `(p+q)/2 − 1 < r < p+q`; other radii are
/// refused.
pub fn counting_bound(code: &GroupCode, i: usize, j: usize, r: usize) -> Result<usize> {
    let (p, q) = code.pq_type().ok_or_else(|| Error::WrongKind {
        op: "counting_bound",
        kind: code.descriptor().to_string(),
    })?;
    let n = p + q;
    if !(1..=n).contains(&i) || !(1..=n).contains(&j) {
        return Err(Error::InvalidParameter(format!(
            "mapping {i}->{j} outside 1..={n}"
        )));
    }
    let natural = matches!(code.descriptor(), CodeDescriptor::Product { .. });
    let in_b = j + r < n;
    let in_t = j >= r + 2;
    if natural {
        if !(p..=n).contains(&r) {
            return Err(Error::InvalidParameter(format!(
                "exact count needs p <= r <= p+q, got r={r}"
            )));
        }
        Ok(if i > p && in_b {
            n - r - j
        } else if i <= p && in_t {
            j - r - 1
        } else {
            0
        })
    } else {
        if 2 * r + 2 <= n || r >= n {
            return Err(Error::InvalidParameter(format!(
                "relabeled bound needs (p+q)/2 - 1 < r < p+q, got r={r}"
            )));
        }
        Ok(if in_b {
            n - r - j
        } else if in_t {
            j - r - 1
        } else {
            0
        })
    }
}
