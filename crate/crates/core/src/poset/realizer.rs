use serde::Serialize;

use super::Poset;
use crate::error::{Error, Result};
use crate::hypermatrix::HyperMatrix;

/// All linear extensions in lex order of their element-index sequences.
pub fn linear_extensions(p: &Poset) -> Vec<Vec<usize>> {
    fn go(p: &Poset, placed: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = p.len();
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in 0..n {
            if placed[x] || (0..n).any(|y| !placed[y] && p.lt(y, x)) {
                continue;
            }
            placed[x] = true;
            cur.push(x);
            go(p, placed, cur, out);
            cur.pop();
            placed[x] = false;
        }
    }
    let mut out = Vec::new();
    go(p, &mut vec![false; p.len()], &mut Vec::new(), &mut out);
    out
}

/// Linear extensions whose intersection is the poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realizer {
    extensions: Vec<Vec<usize>>,
}

impl Realizer {
    /// Validates that every order is a linear extension of `p` and that
    /// `x < y` in `p` exactly when `x` precedes `y` in all of them.
    pub fn new(p: &Poset, extensions: Vec<Vec<usize>>) -> Result<Self> {
        if extensions.is_empty() && !p.is_empty() {
            return Err(Error::InvalidRealizer("no linear orders given".into()));
        }
        let n = p.len();
        let mut ranks = Vec::with_capacity(extensions.len());
        for (i, ext) in extensions.iter().enumerate() {
            let mut rank = vec![usize::MAX; n];
            for (pos, &x) in ext.iter().enumerate() {
                if x >= n || rank[x] != usize::MAX {
                    return Err(Error::InvalidRealizer(format!(
                        "order {} is not a permutation of the elements",
                        i + 1
                    )));
                }
                rank[x] = pos;
            }
            if ext.len() != n {
                return Err(Error::InvalidRealizer(format!(
                    "order {} has {} elements, expected {n}",
                    i + 1,
                    ext.len()
                )));
            }
            for x in 0..n {
                for y in 0..n {
                    if p.lt(x, y) && rank[x] > rank[y] {
                        return Err(Error::InvalidRealizer(format!(
                            "order {} puts {:?} after {:?}",
                            i + 1,
                            p.label(x),
                            p.label(y)
                        )));
                    }
                }
            }
            ranks.push(rank);
        }
        for (x, y) in p.incomparable_pairs() {
            let xy = ranks.iter().any(|r| r[x] < r[y]);
            let yx = ranks.iter().any(|r| r[y] < r[x]);
            if !(xy && yx) {
                return Err(Error::InvalidRealizer(format!(
                    "{:?} and {:?} are incomparable but ordered the same way in every order",
                    p.label(x),
                    p.label(y)
                )));
            }
        }
        Ok(Realizer { extensions })
    }

    /// Builds from orders given by element label.
    pub fn from_labels<S: AsRef<str>>(p: &Poset, orders: &[Vec<S>]) -> Result<Self> {
        let exts = orders
            .iter()
            .map(|o| {
                o.iter()
                    .map(|l| {
                        p.index_of(l.as_ref()).ok_or_else(|| {
                            Error::InvalidRealizer(format!("unknown element {:?}", l.as_ref()))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, exts)
    }

    pub fn len(&self) -> usize {
        self.extensions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.extensions.is_empty()
    }

    pub fn extensions(&self) -> &[Vec<usize>] {
        &self.extensions
    }

    pub fn labelled(&self, p: &Poset) -> Vec<Vec<String>> {
        self.extensions
            .iter()
            .map(|e| e.iter().map(|&x| p.label(x).to_string()).collect())
            .collect()
    }

    /// 1-based rank of every element in every order: `ranks()[j][x]`.
    pub fn ranks(&self) -> Vec<Vec<usize>> {
        self.extensions
            .iter()
            .map(|ext| {
                let mut r = vec![0; ext.len()];
                for (pos, &x) in ext.iter().enumerate() {
                    r[x] = pos + 1;
                }
                r
            })
            .collect()
    }
}

impl Serialize for Realizer {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.extensions.serialize(s)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DimensionLimits {
    pub max_elements: usize,
    pub max_dimension: usize,
}

impl Default for DimensionLimits {
    fn default() -> Self {
        // Every poset on at most 8 elements has dimension at most 4.
        DimensionLimits {
            max_elements: 8,
            max_dimension: 4,
        }
    }
}

/// Least number of linear extensions realizing `p`, with the lex-least
/// realizer under the [`linear_extensions`] order.
///
/// Iterative deepening on the dimension; at each depth, strictly increasing
/// tuples of extension indices are tried in lex order. A tuple realizes `p`
/// when every incomparable pair appears in both orders somewhere in it.
pub fn dimension(p: &Poset, limits: DimensionLimits) -> Result<(usize, Realizer)> {
    let n = p.len();
    if n == 0 {
        return Err(Error::InvalidPoset("dimension of the empty poset".into()));
    }
    // incomparable pairs are tracked in a u128 bitmask
    let hard_cap = 16;
    if n > limits.max_elements.min(hard_cap) {
        return Err(Error::CapExceeded {
            what: "poset size for dimension search",
            got: n as u128,
            cap: limits.max_elements.min(hard_cap) as u128,
        });
    }
    let pairs = p.incomparable_pairs();
    let full: u128 = if pairs.len() == 128 {
        u128::MAX
    } else {
        (1u128 << pairs.len()) - 1
    };
    let exts = linear_extensions(p);
    // bit q set when the extension puts the smaller-index element of pair q first
    let forward: Vec<u128> = exts
        .iter()
        .map(|ext| {
            let mut rank = vec![0; n];
            for (pos, &x) in ext.iter().enumerate() {
                rank[x] = pos;
            }
            pairs
                .iter()
                .enumerate()
                .filter(|(_, &(x, y))| rank[x] < rank[y])
                .fold(0u128, |acc, (q, _)| acc | 1 << q)
        })
        .collect();

    struct Ctx<'a> {
        forward: &'a [u128],
        full: u128,
        chosen: Vec<usize>,
    }
    fn search(ctx: &mut Ctx, start: usize, left: usize, fwd: u128, bwd: u128) -> bool {
        if left == 0 {
            return fwd == ctx.full && bwd == ctx.full;
        }
        if left == 1 && (fwd | bwd) != ctx.full {
            // a pair seen in neither direction needs two more orders
            return false;
        }
        for i in start..ctx.forward.len() {
            let f = ctx.forward[i];
            ctx.chosen.push(i);
            if search(ctx, i + 1, left - 1, fwd | f, bwd | (!f & ctx.full)) {
                return true;
            }
            ctx.chosen.pop();
        }
        false
    }

    let mut ctx = Ctx {
        forward: &forward,
        full,
        chosen: Vec::new(),
    };
    for t in 1..=limits.max_dimension {
        ctx.chosen.clear();
        if search(&mut ctx, 0, t, 0, 0) {
            let chosen: Vec<Vec<usize>> = ctx.chosen.iter().map(|&i| exts[i].clone()).collect();
            return Ok((t, Realizer::new(p, chosen)?));
        }
    }
    Err(Error::DimensionAboveCap(limits.max_dimension))
}

/// The permutation matrix of a poset: element `p` sits at its vector of
/// 1-based ranks in the realizer's orders.
pub fn realizer_to_matrix(p: &Poset, r: &Realizer) -> Result<HyperMatrix> {
    let checked = Realizer::new(p, r.extensions.clone())?;
    let ranks = checked.ranks();
    let ones = (0..p.len()).map(|x| ranks.iter().map(|rk| rk[x]).collect::<Vec<_>>());
    HyperMatrix::new(vec![p.len(); r.len()], ones)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_counts() {
        assert_eq!(linear_extensions(&Poset::chain(4).unwrap()).len(), 1);
        assert_eq!(linear_extensions(&Poset::antichain(4).unwrap()).len(), 24);
        let d = linear_extensions(&Poset::diamond());
        assert_eq!(d, vec![vec![0, 1, 2, 3], vec![0, 2, 1, 3]]);
        assert_eq!(linear_extensions(&Poset::boolean(3).unwrap()).len(), 48);
    }

    #[test]
    fn chain_dimension_one() {
        for k in 1..6 {
            let (t, r) = dimension(&Poset::chain(k).unwrap(), DimensionLimits::default()).unwrap();
            assert_eq!(t, 1);
            assert_eq!(r.extensions()[0], (0..k).collect::<Vec<_>>());
        }
    }

    #[test]
    fn antichain_of_two() {
        let p = Poset::antichain(2).unwrap();
        let (t, r) = dimension(&p, DimensionLimits::default()).unwrap();
        assert_eq!(t, 2);
        assert_eq!(r.extensions(), &[vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn diamond_dimension_and_matrix() {
        let d = Poset::diamond();
        let (t, r) = dimension(&d, DimensionLimits::default()).unwrap();
        assert_eq!(t, 2);
        assert_eq!(r.labelled(&d), vec![vec!["a", "b", "c", "d"], vec!["a", "c", "b", "d"]]);
        let m = realizer_to_matrix(&d, &r).unwrap();
        let expect = HyperMatrix::new(vec![4, 4], [[1, 1], [2, 3], [3, 2], [4, 4]]).unwrap();
        assert_eq!(m, expect);
        assert!(m.is_permutation_matrix().unwrap());
    }

    #[test]
    fn boolean_three_has_dimension_three() {
        let b = Poset::boolean(3).unwrap();
        let (t, r) = dimension(&b, DimensionLimits::default()).unwrap();
        assert_eq!(t, 3);
        assert!(realizer_to_matrix(&b, &r).unwrap().is_permutation_matrix().unwrap());
    }

    #[test]
    fn chain_matrix_is_all_ones_vector() {
        let c = Poset::chain(3).unwrap();
        let (_, r) = dimension(&c, DimensionLimits::default()).unwrap();
        let m = realizer_to_matrix(&c, &r).unwrap();
        assert_eq!(m, HyperMatrix::full(vec![3]).unwrap());
    }

    #[test]
    fn caps() {
        let big = Poset::antichain(9).unwrap();
        assert!(matches!(
            dimension(&big, DimensionLimits::default()),
            Err(Error::CapExceeded { .. })
        ));
        let a3 = Poset::boolean(3).unwrap();
        let lim = DimensionLimits {
            max_elements: 8,
            max_dimension: 2,
        };
        assert!(matches!(dimension(&a3, lim), Err(Error::DimensionAboveCap(2))));
    }

    #[test]
    fn invalid_realizers() {
        let d = Poset::diamond();
        // one order cannot separate b and c
        assert!(Realizer::new(&d, vec![vec![0, 1, 2, 3]]).is_err());
        // not a linear extension
        assert!(Realizer::new(&d, vec![vec![3, 1, 2, 0], vec![0, 2, 1, 3]]).is_err());
        assert!(Realizer::new(&d, vec![vec![0, 1, 2]]).is_err());
        assert!(Realizer::from_labels(&d, &[vec!["a", "b", "c", "d"], vec!["a", "c", "b", "d"]]).is_ok());
    }
}
