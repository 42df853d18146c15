//! Families of subsets of `[n]`, subposet containment in families, and the
//! Lubell-type weight functions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::binomial;
use crate::embed::{find_embedding, StrictOrder};
use crate::error::{Error, Result};
use crate::poset::Poset;

/// Largest ground set a bitmask family supports.
pub const MAX_GROUND: usize = 63;

/// A duplicate-free family of subsets of `[n]`, each a bitmask with bit
/// `i - 1` standing for element `i`. Members are kept sorted by size, then
/// by mask value (colex).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: usize,
    sets: Vec<u64>,
}

impl SetFamily {
    pub fn new(n: usize, sets: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n > MAX_GROUND {
            return Err(Error::InvalidFamily(format!(
                "ground set size {n} above the supported maximum {MAX_GROUND}"
            )));
        }
        let universe = (1u64 << n) - 1;
        let mut sets: Vec<u64> = sets.into_iter().collect();
        if let Some(s) = sets.iter().find(|&&s| s & !universe != 0) {
            return Err(Error::InvalidFamily(format!(
                "member {:?} is not a subset of [{n}]",
                mask_to_vec(*s)
            )));
        }
        sets.sort_unstable_by_key(|&s| (s.count_ones(), s));
        if let Some(w) = sets.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidFamily(format!(
                "duplicate member {:?}",
                mask_to_vec(w[0])
            )));
        }
        Ok(SetFamily { n, sets })
    }

    /// Members given as lists of elements in `1..=n`.
    pub fn from_sets<S: AsRef<[usize]>>(n: usize, sets: &[S]) -> Result<Self> {
        let masks = sets
            .iter()
            .map(|s| {
                s.as_ref().iter().try_fold(0u64, |acc, &e| {
                    if e < 1 || e > n {
                        return Err(Error::InvalidFamily(format!(
                            "element {e} outside the ground set [1, {n}]"
                        )));
                    }
                    if acc >> (e - 1) & 1 == 1 {
                        return Err(Error::InvalidFamily(format!(
                            "element {e} repeated within a member"
                        )));
                    }
                    Ok(acc | 1 << (e - 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, masks)
    }

    /// All `2^n` subsets.
    pub fn power_set(n: usize) -> Result<Self> {
        if n > 24 {
            return Err(Error::InvalidFamily(format!("power set of [{n}] is too large")));
        }
        Self::new(n, 0..1u64 << n)
    }

    /// All subsets whose size lies in `sizes`.
    pub fn levels(n: usize, sizes: std::ops::RangeInclusive<usize>) -> Result<Self> {
        if n > 24 {
            return Err(Error::InvalidFamily(format!("levels of [{n}] are too large")));
        }
        Self::new(
            n,
            (0..1u64 << n).filter(|s| sizes.contains(&(s.count_ones() as usize))),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.sets
    }

    pub fn contains_set(&self, mask: u64) -> bool {
        self.sets.iter().any(|&s| s == mask)
    }

    pub fn members(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|&s| mask_to_vec(s)).collect()
    }

    /// A copy of `p` in the family: the member assigned to each element.
    pub fn find_copy(&self, p: &Poset, induced: bool) -> Option<Vec<u64>> {
        find_embedding(p, &Inclusion(&self.sets), induced, None)
            .map(|a| a.into_iter().map(|i| self.sets[i]).collect())
    }

    pub fn to_file(&self) -> FamilyFile {
        FamilyFile {
            n: self.n,
            sets: self.members(),
        }
    }
}

/// Elements of a bitmask as a sorted 1-based list.
pub fn mask_to_vec(mask: u64) -> Vec<usize> {
    (0..64).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

/// Strict inclusion among a list of bitmask sets.
pub(crate) struct Inclusion<'a>(pub(crate) &'a [u64]);

impl StrictOrder for Inclusion<'_> {
    fn size(&self) -> usize {
        self.0.len()
    }

    #[inline]
    fn less(&self, i: usize, j: usize) -> bool {
        let (a, b) = (self.0[i], self.0[j]);
        a != b && a & b == a
    }
}

/// Whether `p` occurs in the family as a weak or induced subposet.
pub fn family_contains(f: &SetFamily, p: &Poset, induced: bool) -> bool {
    f.find_copy(p, induced).is_some()
}

/// `sum over F of 1 / binom(n, |F|)`.
pub fn lubell(f: &SetFamily) -> BigRational {
    weighted_sum(f, |size| binomial(f.n as u64, size))
}

/// `sum over F of 1 / binom(n + 2d - 2, |F| + d - 1)`; equals [`lubell`] at `d = 1`.
pub fn shifted_lubell(f: &SetFamily, d: usize) -> Result<BigRational> {
    if d < 1 {
        return Err(Error::InvalidArgument("shifted Lubell needs d >= 1".into()));
    }
    let (top, shift) = ((f.n + 2 * d - 2) as u64, (d - 1) as u64);
    Ok(weighted_sum(f, |size| binomial(top, size + shift)))
}

fn weighted_sum(f: &SetFamily, denom: impl Fn(u64) -> num_bigint::BigUint) -> BigRational {
    let mut by_size = vec![0u64; f.n + 1];
    for &s in &f.sets {
        by_size[s.count_ones() as usize] += 1;
    }
    by_size
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(BigRational::zero(), |acc, (size, &count)| {
            acc + BigRational::new(BigInt::from(count), denom(size as u64).into())
        })
}

/// On-disk JSON shape: `{"n":4,"sets":[[],[1],[1,2]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub n: usize,
    pub sets: Vec<Vec<usize>>,
}

impl TryFrom<FamilyFile> for SetFamily {
    type Error = Error;

    fn try_from(f: FamilyFile) -> Result<Self> {
        SetFamily::from_sets(f.n, &f.sets)
    }
}

impl Serialize for SetFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetFamily {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SetFamily::try_from(FamilyFile::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for SetFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let f: FamilyFile = serde_json::from_str(s)?;
        f.try_into()
    }
}
