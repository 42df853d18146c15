//! Block decomposition used in the inductive proof of the higher-dimensional
//! Marcus-Tardos bound.
//!
//! `M` is cut into blocks of side `s` (the last block on an axis is shorter
//! when `s` does not divide the side). A block is `i`-wide when its
//! projection along axis `i` contains the projection of the forbidden
//! permutation matrix along the same axis, and thin when it is wide along no
//! axis. The coarse matrix `M'` marks the thin blocks that hold at least one 1.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use super::{contains, BoxCells, HyperMatrix};
use crate::arith::binomial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    /// 1-based block coordinates.
    pub index: Vec<usize>,
    pub ones: usize,
    /// Axes (1-based) along which the block is wide.
    pub wide_axes: Vec<usize>,
}

impl Block {
    pub fn is_thin(&self) -> bool {
        self.wide_axes.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockColumnCount {
    /// Block coordinates with the column's own axis removed.
    pub column: Vec<usize>,
    pub wide: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockReport {
    pub side: usize,
    /// Number of blocks along each axis.
    pub grid: Vec<usize>,
    /// Every block, in lex order of its index.
    pub blocks: Vec<Block>,
    /// `wide_counts[i - 1]` lists, for every `i`-blockcolumn, how many of its
    /// blocks are `i`-wide.
    pub wide_counts: Vec<Vec<BlockColumnCount>>,
    /// Thin, nonempty blocks.
    pub coarse: HyperMatrix,
}

impl BlockReport {
    pub fn thin_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.is_thin()).count()
    }

    /// Largest number of `axis`-wide blocks in a single `axis`-blockcolumn.
    pub fn max_wide_per_column(&self, axis: usize) -> usize {
        self.wide_counts[axis - 1]
            .iter()
            .map(|c| c.wide)
            .max()
            .unwrap_or(0)
    }
}

/// `(k-1) * binom(s^(d-1), k)`, the most `i`-wide blocks an `i`-blockcolumn of
/// an `A`-free matrix can hold.
pub fn wide_block_bound(k: usize, s: usize, d: usize) -> BigUint {
    let cells = BigUint::from(s).pow(d as u32 - 1);
    let cells: u64 = cells.try_into().unwrap_or(u64::MAX);
    binomial(cells, k as u64) * (k.saturating_sub(1))
}

pub fn block_analyze(m: &HyperMatrix, a: &HyperMatrix, s: usize) -> Result<BlockReport> {
    if m.d() != a.d() {
        return Err(Error::DimensionMismatch {
            expected: m.d(),
            got: a.d(),
        });
    }
    if m.d() < 2 {
        return Err(Error::InvalidArgument(
            "block analysis needs dimension at least 2".into(),
        ));
    }
    if s == 0 {
        return Err(Error::InvalidArgument("block side must be positive".into()));
    }
    if !a.is_permutation_matrix().unwrap_or(false) {
        return Err(Error::NotPermutation);
    }
    let d = m.d();
    let grid: Vec<usize> = m.dims().iter().map(|n| n.div_ceil(s)).collect();
    let projected: Vec<HyperMatrix> = (1..=d)
        .map(|i| a.projection(i))
        .collect::<Result<_>>()?;

    let mut buckets: BTreeMap<Vec<usize>, Vec<Vec<usize>>> = BTreeMap::new();
    for one in m.ones() {
        let b: Vec<usize> = one.iter().map(|c| (c - 1) / s + 1).collect();
        let local: Vec<usize> = one.iter().map(|c| (c - 1) % s + 1).collect();
        buckets.entry(b).or_default().push(local);
    }

    let indices: Vec<Vec<usize>> = BoxCells::new(&grid).collect();
    let blocks: Vec<Block> = indices
        .into_par_iter()
        .map(|index| {
            let Some(local) = buckets.get(&index) else {
                return Ok(Block {
                    index,
                    ones: 0,
                    wide_axes: Vec::new(),
                });
            };
            let sides: Vec<usize> = index
                .iter()
                .zip(m.dims())
                .map(|(b, n)| (b * s).min(*n) - (b - 1) * s)
                .collect();
            let block = HyperMatrix::new(sides, local)?;
            let mut wide_axes = Vec::new();
            for (i, proj_a) in projected.iter().enumerate() {
                if contains(&block.projection(i + 1)?, proj_a)? {
                    wide_axes.push(i + 1);
                }
            }
            Ok(Block {
                index,
                ones: block.len(),
                wide_axes,
            })
        })
        .collect::<Result<_>>()?;

    let mut wide_counts = Vec::with_capacity(d);
    for axis in 1..=d {
        let mut reduced = grid.clone();
        reduced.remove(axis - 1);
        let mut counts: BTreeMap<Vec<usize>, usize> =
            BoxCells::new(&reduced).map(|c| (c, 0)).collect();
        for b in blocks.iter().filter(|b| b.wide_axes.contains(&axis)) {
            let mut key = b.index.clone();
            key.remove(axis - 1);
            *counts.get_mut(&key).expect("blockcolumn key") += 1;
        }
        wide_counts.push(
            counts
                .into_iter()
                .map(|(column, wide)| BlockColumnCount { column, wide })
                .collect(),
        );
    }

    let coarse_ones: Vec<usize> = blocks
        .iter()
        .filter(|b| b.is_thin() && b.ones > 0)
        .flat_map(|b| b.index.iter().copied())
        .collect();
    let coarse = HyperMatrix::from_sorted_flat(grid.clone(), coarse_ones);

    Ok(BlockReport {
        side: s,
        grid,
        blocks,
        wide_counts,
        coarse,
    })
}
