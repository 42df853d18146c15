//! Exact `ex_d(n_1 x ... x n_d, A)` by branch and bound.
//!
//! Cells are decided in lex order, trying 1 before 0. Since every new 1 is
//! the lex-largest so far, only copies that map the pattern's lex-last 1 onto
//! it need checking. A slab is the set of cells sharing the first coordinate;
//! the remaining slabs form a smaller box whose exact value bounds what they
//! can still contribute, and those smaller values are solved first.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::rational_string;
use crate::error::{Error, Result};
use crate::hypermatrix::{contains, BoxCells, DenseGrid, Embedder, HyperMatrix};
use crate::poset::{enumerate_patterns, Poset};

/// Default cap on the number of cells searched exhaustively.
pub const DEFAULT_CELL_CAP: u128 = 36;

#[derive(Debug, Clone, Copy)]
pub struct ExOptions {
    pub cell_cap: u128,
    pub cap_override: bool,
}

impl Default for ExOptions {
    fn default() -> Self {
        ExOptions {
            cell_cap: DEFAULT_CELL_CAP,
            cap_override: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExResult {
    pub value: usize,
    /// Lex-least optimal matrix: its sorted list of ones is smallest.
    pub witness: HyperMatrix,
}

/// Maximum number of ones in an `a`-free matrix of shape `dims`.
pub fn ex_exact(dims: &[usize], a: &HyperMatrix, opts: ExOptions) -> Result<ExResult> {
    ex_exact_set(dims, std::slice::from_ref(a), opts)
}

/// Maximum number of ones in a matrix of shape `dims` avoiding every pattern
/// in `patterns` simultaneously.
pub fn ex_exact_set(dims: &[usize], patterns: &[HyperMatrix], opts: ExOptions) -> Result<ExResult> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidArgument(format!("bad matrix shape {dims:?}")));
    }
    if patterns.is_empty() {
        return Err(Error::InvalidArgument("no forbidden pattern given".into()));
    }
    if let Some(p) = patterns.iter().find(|p| p.d() != dims.len()) {
        return Err(Error::DimensionMismatch {
            expected: dims.len(),
            got: p.d(),
        });
    }
    let cells: u128 = dims.iter().map(|&n| n as u128).product();
    if cells > opts.cell_cap && !opts.cap_override {
        return Err(Error::CapExceeded {
            what: "cell count for exhaustive ex search",
            got: cells,
            cap: opts.cell_cap,
        });
    }
    let mut engine = Engine {
        patterns: patterns.to_vec(),
        memo: HashMap::new(),
    };
    let (value, coords) = engine.solve(dims);
    let witness = HyperMatrix::from_sorted_flat(dims.to_vec(), coords);
    for p in patterns {
        if contains(&witness, p)? {
            return Err(Error::InvalidArgument(format!(
                "internal error: ex witness {witness:?} contains a forbidden pattern"
            )));
        }
    }
    debug_assert_eq!(witness.len(), value);
    Ok(ExResult { value, witness })
}

struct Engine {
    patterns: Vec<HyperMatrix>,
    memo: HashMap<Vec<usize>, (usize, Vec<usize>)>,
}

impl Engine {
    fn solve(&mut self, dims: &[usize]) -> (usize, Vec<usize>) {
        if let Some(hit) = self.memo.get(dims) {
            return hit.clone();
        }
        let out = self.solve_uncached(dims);
        self.memo.insert(dims.to_vec(), out.clone());
        out
    }

    fn solve_uncached(&mut self, dims: &[usize]) -> (usize, Vec<usize>) {
        let active: Vec<HyperMatrix> = self
            .patterns
            .iter()
            .filter(|p| p.dims().iter().zip(dims).all(|(k, n)| k <= n))
            .cloned()
            .collect();
        if active.is_empty() {
            let all: Vec<usize> = BoxCells::new(dims).flatten().collect();
            return (all.len() / dims.len(), all);
        }
        let d = dims.len();
        if d > 1 && dims[0] == 1 {
            // every active pattern has a single slab too; drop the axis
            let reduced: Vec<HyperMatrix> = active
                .iter()
                .map(|p| {
                    let coords = p.ones().flat_map(|c| c[1..].to_vec()).collect();
                    HyperMatrix::from_sorted_flat(p.dims()[1..].to_vec(), coords)
                })
                .collect();
            let mut sub = Engine {
                patterns: reduced,
                memo: HashMap::new(),
            };
            let (value, coords) = sub.solve(&dims[1..]);
            let lifted = coords
                .chunks_exact(d - 1)
                .flat_map(|c| std::iter::once(1).chain(c.iter().copied()))
                .collect();
            return (value, lifted);
        }

        let n1 = dims[0];
        let mut sub = vec![0usize; n1];
        for (r, slot) in sub.iter_mut().enumerate().skip(1) {
            let mut smaller = dims.to_vec();
            smaller[0] = r;
            *slot = self.solve(&smaller).0;
        }

        let cells: Vec<usize> = BoxCells::new(dims).flatten().collect();
        let total = cells.len() / d;
        let slab = total / n1;
        let mut dfs = Dfs {
            dims,
            d,
            cells: &cells,
            total,
            slab,
            n1,
            sub: &sub,
            embedders: active.iter().map(Embedder::new).collect(),
            grid: DenseGrid::new(dims),
            coords: Vec::with_capacity(cells.len()),
            slab_start: vec![0; n1],
            best: 0,
            best_coords: Vec::new(),
        };
        dfs.go(0);
        (dfs.best, dfs.best_coords)
    }
}

struct Dfs<'a> {
    dims: &'a [usize],
    d: usize,
    cells: &'a [usize],
    total: usize,
    slab: usize,
    n1: usize,
    /// `sub[r]` is the exact value for the first `r` slabs alone, `r < n1`.
    sub: &'a [usize],
    embedders: Vec<Embedder<'a>>,
    grid: DenseGrid,
    coords: Vec<usize>,
    /// Number of ones placed before entering each slab on the current path.
    slab_start: Vec<usize>,
    best: usize,
    best_coords: Vec<usize>,
}

impl Dfs<'_> {
    fn slabs_bound(&self, r: usize) -> usize {
        if r < self.n1 {
            self.sub[r]
        } else {
            r * self.slab
        }
    }

    fn go(&mut self, c: usize) {
        let count = self.coords.len() / self.d;
        if c == self.total {
            if count > self.best || self.best_coords.is_empty() && count == self.best {
                self.best = count;
                self.best_coords = self.coords.clone();
            }
            return;
        }
        let (r, pos) = (c / self.slab, c % self.slab);
        if pos == 0 {
            self.slab_start[r] = count;
        }
        let in_slab = count - self.slab_start[r];
        let after = self.n1 - r - 1;
        let mut ub = (self.slab - pos).min(self.slabs_bound(1) - in_slab) + self.slabs_bound(after);
        if r > 0 {
            ub = ub.min(self.slabs_bound(after + 1) - in_slab);
        }
        if count + ub <= self.best && !(self.best_coords.is_empty() && count + ub == 0) {
            return;
        }

        let cell = &self.cells[c * self.d..(c + 1) * self.d];
        self.grid.set(cell, true);
        self.coords.extend_from_slice(cell);
        let free = {
            let (dims, coords, grid) = (self.dims, &self.coords, &self.grid);
            self.embedders
                .iter_mut()
                .all(|e| !e.find(dims, coords, grid, Some(cell)))
        };
        if free {
            self.go(c + 1);
        }
        self.coords.truncate(self.coords.len() - self.d);
        self.grid.set(cell, false);

        self.go(c + 1);
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicityCheck {
    pub small: Vec<usize>,
    pub big: Vec<usize>,
    pub ex_small: usize,
    pub ex_big: usize,
    /// `prod(n_i / m_i) * ex(small)`.
    pub bound: String,
    pub holds: bool,
}

/// Checks `ex(big) <= prod(n_i / m_i) * ex(small)` with two exact searches.
pub fn ex_monotonicity_check(
    patterns: &[HyperMatrix],
    small: &[usize],
    big: &[usize],
    opts: ExOptions,
) -> Result<MonotonicityCheck> {
    if small.len() != big.len() || small.iter().zip(big).any(|(m, n)| m > n) {
        return Err(Error::InvalidArgument(format!(
            "small shape {small:?} must be componentwise at most {big:?}"
        )));
    }
    let ex_small = ex_exact_set(small, patterns, opts)?.value;
    let ex_big = ex_exact_set(big, patterns, opts)?.value;
    let ratio = big
        .iter()
        .zip(small)
        .fold(BigRational::from_integer(1.into()), |acc, (&n, &m)| {
            acc * BigRational::new(n.into(), m.into())
        });
    let bound = ratio * BigRational::from_integer(ex_small.into());
    let holds = BigRational::from_integer(ex_big.into()) <= bound;
    Ok(MonotonicityCheck {
        small: small.to_vec(),
        big: big.to_vec(),
        ex_small,
        ex_big,
        bound: rational_string(&bound),
        holds,
    })
}

/// The square-to-rectangle specialization: compares `dims` against the cube
/// of side `min(dims)`, i.e. `ex(dims) <= K * prod(n_i) / min(n_i)` with
/// `K = ex(m^d) / m^(d-1)`.
pub fn ex_rectangle_check(
    patterns: &[HyperMatrix],
    dims: &[usize],
    opts: ExOptions,
) -> Result<MonotonicityCheck> {
    let m = *dims
        .iter()
        .min()
        .ok_or_else(|| Error::InvalidArgument("empty shape".into()))?;
    ex_monotonicity_check(patterns, &vec![m; dims.len()], dims, opts)
}

#[derive(Debug, Clone, Serialize)]
pub struct TardosDiamondCheck {
    pub n: usize,
    pub patterns: usize,
    pub value: usize,
    pub bound: usize,
    pub holds: bool,
    pub witness: HyperMatrix,
}

/// Exact maximum for `n x n` matrices avoiding all diamond patterns at once,
/// against the `4n` bound.
pub fn tardos_diamond_check(n: usize, opts: ExOptions) -> Result<TardosDiamondCheck> {
    let patterns = enumerate_patterns(&Poset::diamond(), 2)?;
    let res = ex_exact_set(&[n, n], &patterns, opts)?;
    Ok(TardosDiamondCheck {
        n,
        patterns: patterns.len(),
        value: res.value,
        bound: 4 * n,
        holds: res.value <= 4 * n,
        witness: res.witness,
    })
}

/// `ex_2(n, A) <= 2 k^4 binom(k^2, k) n` for a `k x k` permutation matrix.
pub fn marcus_tardos_slack(value: usize, k: u64, n: usize) -> bool {
    BigUint::from(value) <= crate::bounds::marcus_tardos_constant(k) * n
}
