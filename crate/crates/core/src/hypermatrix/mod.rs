//! d-dimensional 0-1 hypermatrices.
//!
//! A [`HyperMatrix`] is stored sparsely: its side lengths and the sorted list
//! of coordinates holding a 1. Coordinates are 1-based, so the entry `M(i)`
//! has `1 <= i_j <= dims[j]`. A dense bitmap is built on first use when the
//! box is small enough and serves membership queries during matching.

mod blocks;
mod contain;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use blocks::{block_analyze, wide_block_bound, Block, BlockReport};
pub use contain::{contains, find_embedding};
pub(crate) use contain::Embedder;

/// Largest box (in cells) that gets a dense membership bitmap.
const DENSE_LIMIT: u128 = 1 << 20;

/// Row-major bitmap over a box; axis 1 varies slowest.
#[derive(Debug, Clone)]
pub(crate) struct DenseGrid {
    strides: Vec<usize>,
    bits: Vec<u64>,
}

impl DenseGrid {
    pub(crate) fn new(dims: &[usize]) -> Self {
        let mut strides = vec![1; dims.len()];
        for j in (0..dims.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * dims[j + 1];
        }
        let cells: usize = dims.iter().product();
        DenseGrid {
            strides,
            bits: vec![0; cells.div_ceil(64)],
        }
    }

    #[inline]
    pub(crate) fn index(&self, coord: &[usize]) -> usize {
        coord
            .iter()
            .zip(&self.strides)
            .map(|(c, s)| (c - 1) * s)
            .sum()
    }

    #[inline]
    pub(crate) fn get(&self, coord: &[usize]) -> bool {
        let i = self.index(coord);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, coord: &[usize], on: bool) {
        let i = self.index(coord);
        if on {
            self.bits[i / 64] |= 1 << (i % 64);
        } else {
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }
}

pub struct HyperMatrix {
    dims: Vec<usize>,
    /// Flattened coordinates, `d` per 1-entry, strictly increasing in lex order.
    coords: Vec<usize>,
    dense: OnceLock<Option<DenseGrid>>,
}

impl HyperMatrix {
    /// Builds a matrix from its side lengths and the coordinates of its ones.
    ///
    /// Ones may be given in any order; duplicates and out-of-range
    /// coordinates are rejected.
    pub fn new<I, C>(dims: Vec<usize>, ones: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: AsRef<[usize]>,
    {
        if dims.is_empty() {
            return Err(Error::InvalidMatrix("dimension must be at least 1".into()));
        }
        if dims.len() > contain::MAX_STACK_DIM {
            return Err(Error::InvalidMatrix(format!(
                "dimension {} above the supported maximum of {}",
                dims.len(),
                contain::MAX_STACK_DIM
            )));
        }
        if let Some(j) = dims.iter().position(|&n| n == 0) {
            return Err(Error::InvalidMatrix(format!(
                "side length on axis {} must be positive",
                j + 1
            )));
        }
        let d = dims.len();
        let mut entries: Vec<Vec<usize>> = Vec::new();
        for one in ones {
            let one = one.as_ref();
            if one.len() != d {
                return Err(Error::InvalidMatrix(format!(
                    "coordinate {one:?} has {} components, expected {d}",
                    one.len()
                )));
            }
            for (j, (&c, &n)) in one.iter().zip(&dims).enumerate() {
                if c < 1 || c > n {
                    return Err(Error::InvalidMatrix(format!(
                        "coordinate {one:?} is outside [1, {n}] on axis {}",
                        j + 1
                    )));
                }
            }
            entries.push(one.to_vec());
        }
        entries.sort_unstable();
        if let Some(w) = entries.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidMatrix(format!(
                "duplicate coordinate {:?}",
                w[0]
            )));
        }
        Ok(Self::from_sorted_flat(dims, entries.concat()))
    }

    /// Caller guarantees the coordinates are in range and strictly lex-increasing.
    pub(crate) fn from_sorted_flat(dims: Vec<usize>, coords: Vec<usize>) -> Self {
        debug_assert_eq!(coords.len() % dims.len(), 0);
        HyperMatrix {
            dims,
            coords,
            dense: OnceLock::new(),
        }
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims, std::iter::empty::<Vec<usize>>())
    }

    /// The all-ones matrix of the given shape.
    pub fn full(dims: Vec<usize>) -> Result<Self> {
        let zero = Self::zeros(dims)?;
        let coords: Vec<usize> = BoxCells::new(zero.dims()).flatten().collect();
        Ok(Self::from_sorted_flat(zero.dims, coords))
    }

    /// The k^d permutation matrix with ones on the main diagonal.
    pub fn identity(k: usize, d: usize) -> Result<Self> {
        if k == 0 || d == 0 || d > contain::MAX_STACK_DIM {
            return Err(Error::InvalidArgument(
                "identity pattern needs k >= 1 and d >= 1".into(),
            ));
        }
        let coords = (1..=k).flat_map(|i| std::iter::repeat_n(i, d)).collect();
        Ok(Self::from_sorted_flat(vec![k; d], coords))
    }

    pub fn d(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// |M|, the number of ones.
    pub fn len(&self) -> usize {
        self.coords.len() / self.d()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn cell_count(&self) -> u128 {
        self.dims.iter().map(|&n| n as u128).product()
    }

    pub fn one(&self, i: usize) -> &[usize] {
        let d = self.d();
        &self.coords[i * d..(i + 1) * d]
    }

    /// Coordinates of the ones in lexicographic order.
    pub fn ones(&self) -> std::slice::ChunksExact<'_, usize> {
        self.coords.chunks_exact(self.d())
    }

    pub(crate) fn flat(&self) -> &[usize] {
        &self.coords
    }

    pub(crate) fn dense(&self) -> Option<&DenseGrid> {
        self.dense
            .get_or_init(|| {
                (self.cell_count() <= DENSE_LIMIT).then(|| {
                    let mut grid = DenseGrid::new(&self.dims);
                    for one in self.ones() {
                        grid.set(one, true);
                    }
                    grid
                })
            })
            .as_ref()
    }

    /// Whether `M(coord) = 1`. Out-of-range coordinates read as 0.
    pub fn get(&self, coord: &[usize]) -> bool {
        if coord.len() != self.d()
            || coord.iter().zip(&self.dims).any(|(&c, &n)| c < 1 || c > n)
        {
            return false;
        }
        match self.dense() {
            Some(grid) => grid.get(coord),
            None => self.position(coord).is_some(),
        }
    }

    pub(crate) fn position(&self, coord: &[usize]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.one(mid).cmp(coord) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// A copy with the extra ones switched on.
    pub fn with_ones<I, C>(&self, extra: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: AsRef<[usize]>,
    {
        let mut all: Vec<Vec<usize>> = self.ones().map(<[usize]>::to_vec).collect();
        for c in extra {
            let c = c.as_ref();
            if !self.get(c) {
                all.push(c.to_vec());
            }
        }
        Self::new(self.dims.clone(), all)
    }

    /// Mirror image along `axis` (1-based): index `i` becomes `n + 1 - i`.
    pub fn reverse_axis(&self, axis: usize) -> Result<Self> {
        self.check_axis(axis)?;
        let n = self.dims[axis - 1];
        let ones = self.ones().map(|c| {
            let mut c = c.to_vec();
            c[axis - 1] = n + 1 - c[axis - 1];
            c
        });
        Self::new(self.dims.clone(), ones)
    }

    /// The sub-box `lo <= i <= hi` (inclusive, 1-based), re-indexed from 1.
    pub fn sub_box(&self, lo: &[usize], hi: &[usize]) -> Result<Self> {
        let d = self.d();
        if lo.len() != d || hi.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: lo.len().max(hi.len()),
            });
        }
        for j in 0..d {
            if lo[j] < 1 || lo[j] > hi[j] || hi[j] > self.dims[j] {
                return Err(Error::InvalidArgument(format!(
                    "sub-box [{}, {}] invalid on axis {}",
                    lo[j],
                    hi[j],
                    j + 1
                )));
            }
        }
        let dims: Vec<usize> = (0..d).map(|j| hi[j] - lo[j] + 1).collect();
        let mut coords = Vec::new();
        for one in self.ones() {
            if one.iter().zip(lo.iter().zip(hi)).all(|(c, (l, h))| l <= c && c <= h) {
                coords.extend(one.iter().zip(lo).map(|(c, l)| c - l + 1));
            }
        }
        Ok(Self::from_sorted_flat(dims, coords))
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis < 1 || axis > self.d() {
            return Err(Error::InvalidArgument(format!(
                "axis {axis} out of range 1..={}",
                self.d()
            )));
        }
        Ok(())
    }

    /// Orthogonal projection onto the hyperplane normal to `axis` (1-based).
    pub fn projection(&self, axis: usize) -> Result<Self> {
        if self.d() < 2 {
            return Err(Error::InvalidArgument(
                "projection needs a matrix of dimension at least 2".into(),
            ));
        }
        self.check_axis(axis)?;
        let a = axis - 1;
        let mut dims = self.dims.clone();
        dims.remove(a);
        let mut ones: Vec<Vec<usize>> = self
            .ones()
            .map(|c| {
                let mut c = c.to_vec();
                c.remove(a);
                c
            })
            .collect();
        ones.sort_unstable();
        ones.dedup();
        Ok(Self::from_sorted_flat(dims, ones.concat()))
    }

    /// Exactly one 1 in every axis-parallel hyperplane of a cubic matrix.
    pub fn is_permutation_matrix(&self) -> Result<bool> {
        let k = self.dims[0];
        if self.dims.iter().any(|&n| n != k) {
            return Err(Error::InvalidMatrix(format!(
                "permutation test needs equal sides, got {:?}",
                self.dims
            )));
        }
        if self.len() != k {
            return Ok(false);
        }
        for j in 0..self.d() {
            let mut seen = vec![false; k + 1];
            for one in self.ones() {
                if std::mem::replace(&mut seen[one[j]], true) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Checks `|M|^(d-1) <= prod_i |Proj_i M|`.
    ///
    /// The inequality always holds; this exists to exercise [`Self::projection`].
    pub fn loomis_whitney_holds(&self) -> Result<bool> {
        if self.d() < 2 {
            return Err(Error::InvalidArgument(
                "Loomis-Whitney needs dimension at least 2".into(),
            ));
        }
        let lhs = BigUint::from(self.len()).pow(self.d() as u32 - 1);
        let mut rhs = BigUint::one();
        for axis in 1..=self.d() {
            rhs *= self.projection(axis)?.len();
        }
        Ok(lhs <= rhs)
    }

    pub fn to_file(&self) -> MatrixFile {
        MatrixFile {
            dims: self.dims.clone(),
            ones: self.ones().map(<[usize]>::to_vec).collect(),
        }
    }
}

impl Clone for HyperMatrix {
    fn clone(&self) -> Self {
        Self::from_sorted_flat(self.dims.clone(), self.coords.clone())
    }
}

impl PartialEq for HyperMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.coords == other.coords
    }
}

impl Eq for HyperMatrix {}

impl Hash for HyperMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.dims.hash(state);
        self.coords.hash(state);
    }
}

impl PartialOrd for HyperMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HyperMatrix {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.dims, &self.coords).cmp(&(&other.dims, &other.coords))
    }
}

impl fmt::Debug for HyperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HyperMatrix")
            .field("dims", &self.dims)
            .field("ones", &self.ones().collect::<Vec<_>>())
            .finish()
    }
}

/// 2-dimensional matrices print as rows of `1` and `.`; others as JSON.
impl fmt::Display for HyperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d() != 2 {
            return write!(f, "{}", serde_json::to_string(&self.to_file()).unwrap());
        }
        for r in 1..=self.dims[0] {
            let row: String = (1..=self.dims[1])
                .map(|c| if self.get(&[r, c]) { '1' } else { '.' })
                .collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// On-disk JSON shape: `{"dims":[4,4],"ones":[[1,1],[2,3]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dims: Vec<usize>,
    pub ones: Vec<Vec<usize>>,
}

impl TryFrom<MatrixFile> for HyperMatrix {
    type Error = Error;

    fn try_from(file: MatrixFile) -> Result<Self> {
        HyperMatrix::new(file.dims, file.ones)
    }
}

impl Serialize for HyperMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HyperMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = MatrixFile::deserialize(d)?;
        HyperMatrix::try_from(file).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for HyperMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let file: MatrixFile = serde_json::from_str(s)?;
        file.try_into()
    }
}

/// Iterates every coordinate of a box in lex order.
pub(crate) struct BoxCells<'a> {
    dims: &'a [usize],
    next: Option<Vec<usize>>,
}

impl<'a> BoxCells<'a> {
    pub(crate) fn new(dims: &'a [usize]) -> Self {
        let next = (!dims.is_empty() && dims.iter().all(|&n| n > 0)).then(|| vec![1; dims.len()]);
        BoxCells { dims, next }
    }
}

impl Iterator for BoxCells<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        for j in (0..succ.len()).rev() {
            if succ[j] < self.dims[j] {
                succ[j] += 1;
                self.next = Some(succ);
                break;
            }
            succ[j] = 1;
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(dims: &[usize], ones: &[&[usize]]) -> HyperMatrix {
        HyperMatrix::new(dims.to_vec(), ones.iter().copied()).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(HyperMatrix::new(vec![2, 2], [[1, 1], [1, 1]]).is_err());
        assert!(HyperMatrix::new(vec![2, 2], [[3, 1]]).is_err());
        assert!(HyperMatrix::new(vec![2, 2], [[0, 1]]).is_err());
        assert!(HyperMatrix::new(vec![2, 2], [vec![1]]).is_err());
        assert!(HyperMatrix::zeros(vec![]).is_err());
        assert!(HyperMatrix::zeros(vec![3, 0]).is_err());
    }

    #[test]
    fn canonical_order() {
        let a = m(&[3, 3], &[&[3, 1], &[1, 2], &[2, 2]]);
        let ones: Vec<_> = a.ones().collect();
        assert_eq!(ones, vec![&[1, 2][..], &[2, 2], &[3, 1]]);
        assert_eq!(a.len(), 3);
        assert!(a.get(&[2, 2]));
        assert!(!a.get(&[2, 3]));
        assert!(!a.get(&[4, 1]));
    }

    #[test]
    fn permutation_predicate() {
        assert!(m(&[1, 1, 1], &[&[1, 1, 1]]).is_permutation_matrix().unwrap());
        assert!(m(&[2, 2], &[&[1, 1], &[2, 2]]).is_permutation_matrix().unwrap());
        assert!(!m(&[2, 2], &[&[1, 1], &[1, 2]]).is_permutation_matrix().unwrap());
        assert!(!m(&[2, 2], &[&[1, 1]]).is_permutation_matrix().unwrap());
        assert!(m(&[2, 3], &[]).is_permutation_matrix().is_err());
    }

    #[test]
    fn projections() {
        let p = m(&[2, 2], &[&[1, 1], &[2, 1]]).projection(1).unwrap();
        assert_eq!(p, m(&[2], &[&[1]]));
        let p = m(&[2, 2, 2], &[&[1, 1, 1], &[2, 2, 1]]).projection(3).unwrap();
        assert_eq!(p, m(&[2, 2], &[&[1, 1], &[2, 2]]));
        assert!(m(&[3], &[&[1]]).projection(1).is_err());
        assert!(m(&[3, 3], &[&[1, 1]]).projection(3).is_err());
    }

    #[test]
    fn projection_of_permutation_is_permutation() {
        let a = m(&[3, 3, 3], &[&[1, 2, 3], &[2, 3, 1], &[3, 1, 2]]);
        for axis in 1..=3 {
            let p = a.projection(axis).unwrap();
            assert_eq!(p.dims(), &[3, 3]);
            assert!(p.is_permutation_matrix().unwrap());
        }
    }

    #[test]
    fn loomis_whitney_cases() {
        assert!(m(&[3, 3, 3], &[&[2, 2, 2]]).loomis_whitney_holds().unwrap());
        let full = HyperMatrix::full(vec![3, 3, 3]).unwrap();
        assert_eq!(full.len(), 27);
        // equality case: 27^2 == 9^3
        let prod: usize = (1..=3).map(|i| full.projection(i).unwrap().len()).product();
        assert_eq!(full.len().pow(2), prod);
        assert!(full.loomis_whitney_holds().unwrap());
        assert!(m(&[3], &[&[1]]).loomis_whitney_holds().is_err());
    }

    #[test]
    fn sub_box_and_reverse() {
        let a = m(&[4, 4], &[&[1, 1], &[2, 3], &[4, 4]]);
        let b = a.sub_box(&[2, 2], &[4, 4]).unwrap();
        assert_eq!(b, m(&[3, 3], &[&[1, 2], &[3, 3]]));
        let r = a.reverse_axis(1).unwrap();
        assert_eq!(r, m(&[4, 4], &[&[4, 1], &[3, 3], &[1, 4]]));
    }

    #[test]
    fn json_round_trip() {
        let a: HyperMatrix = r#"{"dims":[4,4],"ones":[[1,1],[2,3],[3,2],[4,4]]}"#.parse().unwrap();
        assert_eq!(a.len(), 4);
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, r#"{"dims":[4,4],"ones":[[1,1],[2,3],[3,2],[4,4]]}"#);
        assert!(r#"{"dims":[2,2],"ones":[[1,1],[1,1]]}"#.parse::<HyperMatrix>().is_err());
    }

    #[test]
    fn box_cells_order() {
        let cells: Vec<_> = BoxCells::new(&[2, 3]).collect();
        assert_eq!(cells.len(), 6);
        assert_eq!(cells[0], vec![1, 1]);
        assert_eq!(cells[1], vec![1, 2]);
        assert_eq!(cells[5], vec![2, 3]);
    }
}
