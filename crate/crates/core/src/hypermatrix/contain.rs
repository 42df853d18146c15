use super::{DenseGrid, HyperMatrix};
use crate::error::{Error, Result};

/// Membership oracle for the matrix being searched.
pub(crate) trait Occupancy {
    fn occupied(&self, coord: &[usize]) -> bool;
}

impl Occupancy for DenseGrid {
    fn occupied(&self, coord: &[usize]) -> bool {
        self.get(coord)
    }
}

impl Occupancy for HyperMatrix {
    fn occupied(&self, coord: &[usize]) -> bool {
        self.get(coord)
    }
}

/// Whether `m` contains `a`: some order-preserving sub-grid of `m` has a 1
/// wherever `a` has one.
pub fn contains(m: &HyperMatrix, a: &HyperMatrix) -> Result<bool> {
    Ok(find_embedding(m, a)?.is_some())
}

/// Finds a copy of `a` in `m`, returning the image of each 1 of `a` (in the
/// lex order of `a`'s ones).
pub fn find_embedding(m: &HyperMatrix, a: &HyperMatrix) -> Result<Option<Vec<Vec<usize>>>> {
    if m.d() != a.d() {
        return Err(Error::DimensionMismatch {
            expected: m.d(),
            got: a.d(),
        });
    }
    if !fits(m, a) {
        return Ok(None);
    }
    let mut emb = Embedder::new(a);
    let found = match m.dense() {
        Some(grid) => emb.find(m.dims(), m.flat(), grid, None),
        None => emb.find(m.dims(), m.flat(), m, None),
    };
    Ok(found.then(|| emb.image().chunks_exact(a.d()).map(<[usize]>::to_vec).collect()))
}

/// Cheap necessary conditions: sides, number of ones, and on every axis the
/// number of distinct occupied hyperplanes.
fn fits(m: &HyperMatrix, a: &HyperMatrix) -> bool {
    if m.dims().iter().zip(a.dims()).any(|(n, k)| k > n) || m.len() < a.len() {
        return false;
    }
    (0..m.d()).all(|j| distinct_on_axis(a, j) <= distinct_on_axis(m, j))
}

fn distinct_on_axis(m: &HyperMatrix, j: usize) -> usize {
    let mut seen = vec![false; m.dims()[j] + 1];
    m.ones().filter(|c| !std::mem::replace(&mut seen[c[j]], true)).count()
}

/// Backtracking matcher for one pattern, reusable across targets.
///
/// Ones of the pattern are mapped in lex order. Each axis keeps a partial
/// strictly increasing map from pattern indices to target indices; a new
/// assignment must leave room for the unassigned indices in between, which
/// makes every consistent partial map extendable to a full sub-grid.
pub(crate) struct Embedder<'p> {
    a: &'p HyperMatrix,
    /// `maps[j][v]` is the target index for pattern index `v` on axis `j`, 0 if unset.
    maps: Vec<Vec<usize>>,
    image: Vec<usize>,
}

impl<'p> Embedder<'p> {
    pub(crate) fn new(a: &'p HyperMatrix) -> Self {
        Embedder {
            a,
            maps: a.dims().iter().map(|&k| vec![0; k + 1]).collect(),
            image: vec![0; a.flat().len()],
        }
    }

    pub(crate) fn image(&self) -> &[usize] {
        &self.image
    }

    /// Searches the target given by its sides, sorted flat coordinates and a
    /// membership oracle. With `anchor`, only copies whose lex-last 1 lands on
    /// that cell are considered.
    pub(crate) fn find<O: Occupancy + ?Sized>(
        &mut self,
        m_dims: &[usize],
        m_coords: &[usize],
        occ: &O,
        anchor: Option<&[usize]>,
    ) -> bool {
        let a = self.a;
        if a.dims().iter().zip(m_dims).any(|(k, n)| k > n) {
            return false;
        }
        for map in &mut self.maps {
            map.fill(0);
        }
        if a.is_empty() {
            return anchor.is_none();
        }
        let last = a.len() - 1;
        let mut skip = None;
        if let Some(cell) = anchor {
            let e = a.one(last);
            for j in 0..a.d() {
                let (lo, hi) = self.bounds(j, e[j], m_dims[j]);
                if cell[j] < lo || cell[j] > hi {
                    return false;
                }
                self.maps[j][e[j]] = cell[j];
            }
            let d = a.d();
            self.image[last * d..].copy_from_slice(cell);
            skip = Some(last);
        }
        let mut ctx = Ctx {
            m_dims,
            m_coords,
            occ,
            skip,
        };
        self.step(0, &mut ctx)
    }

    /// Feasible target range for pattern index `v` on axis `j`.
    #[inline]
    fn bounds(&self, j: usize, v: usize, n: usize) -> (usize, usize) {
        let map = &self.maps[j];
        if map[v] != 0 {
            return (map[v], map[v]);
        }
        let k = map.len() - 1;
        let mut lo = v;
        let mut hi = n - (k - v);
        if let Some(u) = (1..v).rev().find(|&u| map[u] != 0) {
            lo = lo.max(map[u] + (v - u));
        }
        if let Some(u) = (v + 1..=k).find(|&u| map[u] != 0) {
            hi = hi.min(map[u] - (u - v));
        }
        (lo, hi)
    }

    fn step<O: Occupancy + ?Sized>(&mut self, t: usize, ctx: &mut Ctx<'_, O>) -> bool {
        let a = self.a;
        let d = a.d();
        if Some(t) == ctx.skip {
            return self.step(t + 1, ctx);
        }
        if t == a.len() {
            return true;
        }
        let e = a.one(t);
        let mut lo = [0usize; MAX_STACK_DIM];
        let mut hi = [0usize; MAX_STACK_DIM];
        let mut pinned = true;
        for j in 0..d {
            let (l, h) = self.bounds(j, e[j], ctx.m_dims[j]);
            if l > h {
                return false;
            }
            pinned &= l == h;
            lo[j] = l;
            hi[j] = h;
        }
        if pinned {
            let target = &lo[..d];
            if !ctx.occ.occupied(target) {
                return false;
            }
            self.image[t * d..(t + 1) * d].copy_from_slice(target);
            return self.step(t + 1, ctx);
        }
        let count = ctx.m_coords.len() / d;
        let mut i = partition_first(ctx.m_coords, d, lo[0]);
        let mut fresh = [false; MAX_STACK_DIM];
        while i < count {
            let f = &ctx.m_coords[i * d..(i + 1) * d];
            i += 1;
            if f[0] > hi[0] {
                break;
            }
            if (1..d).any(|j| f[j] < lo[j] || f[j] > hi[j]) {
                continue;
            }
            for j in 0..d {
                fresh[j] = self.maps[j][e[j]] == 0;
                if fresh[j] {
                    self.maps[j][e[j]] = f[j];
                }
            }
            self.image[t * d..(t + 1) * d].copy_from_slice(f);
            if self.step(t + 1, ctx) {
                return true;
            }
            for j in 0..d {
                if fresh[j] {
                    self.maps[j][e[j]] = 0;
                }
            }
        }
        false
    }
}

/// Matrices of higher dimension than this are not supported by the matcher.
pub(crate) const MAX_STACK_DIM: usize = 16;

struct Ctx<'m, O: ?Sized> {
    m_dims: &'m [usize],
    m_coords: &'m [usize],
    occ: &'m O,
    skip: Option<usize>,
}

/// Index of the first 1 whose axis-1 coordinate is at least `lo`.
fn partition_first(coords: &[usize], d: usize, lo: usize) -> usize {
    let (mut a, mut b) = (0, coords.len() / d);
    while a < b {
        let mid = (a + b) / 2;
        if coords[mid * d] < lo {
            a = mid + 1;
        } else {
            b = mid;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(dims: &[usize], ones: &[&[usize]]) -> HyperMatrix {
        HyperMatrix::new(dims.to_vec(), ones.iter().copied()).unwrap()
    }

    #[test]
    fn contains_itself() {
        let a = m(&[3, 4], &[&[1, 2], &[2, 4], &[3, 1]]);
        assert!(contains(&a, &a).unwrap());
    }

    #[test]
    fn diagonal_contains_identity() {
        let big = m(&[3, 3], &[&[1, 1], &[2, 2], &[3, 3]]);
        let id2 = HyperMatrix::identity(2, 2).unwrap();
        assert!(contains(&big, &id2).unwrap());
        let anti = m(&[3, 3], &[&[1, 3], &[2, 2], &[3, 1]]);
        assert!(!contains(&anti, &id2).unwrap());
    }

    #[test]
    fn too_few_ones() {
        let id3 = HyperMatrix::identity(3, 2).unwrap();
        let two = m(&[5, 5], &[&[1, 1], &[5, 5]]);
        assert!(!contains(&two, &id3).unwrap());
    }

    #[test]
    fn empty_rows_need_room() {
        // pattern 1.1 across three columns needs a gap between the ones
        let a = m(&[1, 3], &[&[1, 1], &[1, 3]]);
        assert!(!contains(&m(&[1, 3], &[&[1, 1], &[1, 2]]), &a).unwrap());
        assert!(contains(&m(&[1, 3], &[&[1, 1], &[1, 3]]), &a).unwrap());
        assert!(!contains(&m(&[1, 2], &[&[1, 1], &[1, 2]]), &a).unwrap());
    }

    #[test]
    fn shared_rows_must_stay_shared() {
        // two ones in one row of the pattern must land in one row of the target
        let a = m(&[1, 2], &[&[1, 1], &[1, 2]]);
        let diag = m(&[2, 2], &[&[1, 1], &[2, 2]]);
        assert!(!contains(&diag, &a).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let a = HyperMatrix::identity(2, 2).unwrap();
        let b = HyperMatrix::identity(2, 3).unwrap();
        assert!(matches!(contains(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn embedding_images_are_ones() {
        let big = m(&[4, 4, 4], &[&[1, 1, 2], &[2, 3, 3], &[3, 2, 1], &[4, 4, 4]]);
        let a = HyperMatrix::identity(2, 3).unwrap();
        let img = find_embedding(&big, &a).unwrap().unwrap();
        assert_eq!(img.len(), 2);
        for c in &img {
            assert!(big.get(c));
        }
        assert!(img[0].iter().zip(&img[1]).all(|(x, y)| x < y));
    }

    #[test]
    fn anchored_search() {
        let big = m(&[3, 3], &[&[1, 1], &[2, 2], &[3, 3]]);
        let a = HyperMatrix::identity(2, 2).unwrap();
        let grid = big.dense().unwrap();
        let mut emb = Embedder::new(&a);
        assert!(emb.find(big.dims(), big.flat(), grid, Some(&[3, 3])));
        assert!(emb.find(big.dims(), big.flat(), grid, Some(&[2, 2])));
        assert!(!emb.find(big.dims(), big.flat(), grid, Some(&[1, 1])));
    }
}
