//! Permutation partitions, prefix unions and the matrix `M_Q` of a family.
//!
//! A permutation `d`-partition of `[n]` is a permutation of `[n]` cut into
//! `d` consecutive, possibly empty, parts `Q_1 | ... | Q_d`. Choosing an
//! initial segment of every part gives a prefix union.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{binomial, factorial};
use crate::error::{Error, Result};
use crate::family::{SetFamily, MAX_GROUND};
use crate::hypermatrix::{contains, BoxCells, HyperMatrix};
use crate::poset::{realizer_to_matrix, Poset, Realizer};

/// Default cap on the number of partitions one enumeration may produce.
pub const ENUMERATION_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationPartition {
    n: usize,
    parts: Vec<Vec<usize>>,
}

impl PermutationPartition {
    /// Parts are sequences over `1..=n`; together they must list every
    /// element exactly once.
    pub fn new(n: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("needs at least one part".into()));
        }
        if n > MAX_GROUND {
            return Err(Error::InvalidPartition(format!(
                "ground set size {n} above the supported maximum {MAX_GROUND}"
            )));
        }
        let mut seen = vec![false; n + 1];
        for &e in parts.iter().flatten() {
            if e < 1 || e > n {
                return Err(Error::InvalidPartition(format!("element {e} outside [1, {n}]")));
            }
            if seen[e] {
                return Err(Error::InvalidPartition(format!("element {e} appears twice")));
            }
            seen[e] = true;
        }
        if let Some(missing) = (1..=n).find(|&e| !seen[e]) {
            return Err(Error::InvalidPartition(format!("element {missing} is missing")));
        }
        Ok(PermutationPartition { n, parts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of parts.
    pub fn d(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// `Q_j(i)`, both 1-based.
    pub fn get(&self, j: usize, i: usize) -> Option<usize> {
        self.parts.get(j.checked_sub(1)?)?.get(i.checked_sub(1)?).copied()
    }

    /// Sides of `M_Q`: `|Q_j| + 1`.
    pub fn matrix_dims(&self) -> Vec<usize> {
        self.parts.iter().map(|p| p.len() + 1).collect()
    }

    /// `Q_1(1..i_1-1) u ... u Q_d(1..i_d-1)` as a bitmask.
    pub fn prefix_union(&self, idx: &[usize]) -> Result<u64> {
        if idx.len() != self.d() {
            return Err(Error::DimensionMismatch {
                expected: self.d(),
                got: idx.len(),
            });
        }
        let mut mask = 0;
        for (part, &i) in self.parts.iter().zip(idx) {
            if i < 1 || i > part.len() + 1 {
                return Err(Error::InvalidArgument(format!(
                    "prefix index {i} outside [1, {}]",
                    part.len() + 1
                )));
            }
            mask |= part[..i - 1].iter().fold(0u64, |m, &e| m | 1 << (e - 1));
        }
        Ok(mask)
    }

    /// The index vector whose prefix union is `set`, if there is one.
    pub fn prefix_index(&self, set: u64) -> Option<Vec<usize>> {
        self.parts
            .iter()
            .map(|part| {
                let want = part.iter().filter(|&&e| set >> (e - 1) & 1 == 1).count();
                part[..want]
                    .iter()
                    .all(|&e| set >> (e - 1) & 1 == 1)
                    .then_some(want + 1)
            })
            .collect::<Option<Vec<_>>>()
            .filter(|_| set >> self.n == 0)
    }

    pub fn is_prefix_union(&self, set: u64) -> bool {
        self.prefix_index(set).is_some()
    }
}

impl fmt::Display for PermutationPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.n <= 9 { "" } else { "," };
        let parts: Vec<String> = self
            .parts
            .iter()
            .map(|p| p.iter().map(usize::to_string).collect::<Vec<_>>().join(sep))
            .collect();
        f.write_str(&parts.join("|"))
    }
}

/// Parses `142|5|3`; elements are single digits unless a comma appears,
/// as in `10,2|1,3`. The ground set size is the number of elements.
impl FromStr for PermutationPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let comma = s.contains(',');
        let bad = |t: &str| Error::InvalidPartition(format!("bad element {t:?} in {s:?}"));
        let parts = s
            .split('|')
            .map(|part| {
                if part.is_empty() {
                    Ok(Vec::new())
                } else if comma {
                    part.split(',').map(|t| t.parse().map_err(|_| bad(t))).collect()
                } else {
                    part.chars()
                        .map(|c| c.to_digit(10).map(|v| v as usize).ok_or_else(|| bad(&c.to_string())))
                        .collect()
                }
            })
            .collect::<Result<Vec<Vec<usize>>>>()?;
        let n = parts.iter().map(Vec::len).sum();
        Self::new(n, parts)
    }
}

impl Serialize for PermutationPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `(n + d - 1)! / (d - 1)!`.
pub fn partition_count(n: usize, d: usize) -> Result<BigUint> {
    if d < 1 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    Ok(factorial((n + d - 1) as u64) / factorial((d - 1) as u64))
}

/// Every permutation `d`-partition of `[n]` once: permutations in lex
/// order, and for each, cut positions `c_1 <= ... <= c_(d-1)` in lex order.
pub fn enumerate_partitions(n: usize, d: usize) -> Result<PartitionIter> {
    enumerate_partitions_capped(n, d, ENUMERATION_CAP)
}

pub fn enumerate_partitions_capped(n: usize, d: usize, cap: u128) -> Result<PartitionIter> {
    let count = partition_count(n, d)?;
    if count > BigUint::from(cap) {
        return Err(Error::CapExceeded {
            what: "number of permutation partitions",
            got: u128::try_from(&count).unwrap_or(u128::MAX),
            cap,
        });
    }
    if n > MAX_GROUND {
        return Err(Error::InvalidArgument(format!("n = {n} too large")));
    }
    Ok(PartitionIter {
        n,
        perm: (1..=n).collect(),
        cuts: vec![0; d - 1],
        done: false,
    })
}

pub struct PartitionIter {
    n: usize,
    perm: Vec<usize>,
    cuts: Vec<usize>,
    done: bool,
}

impl Iterator for PartitionIter {
    type Item = PermutationPartition;

    fn next(&mut self) -> Option<PermutationPartition> {
        if self.done {
            return None;
        }
        let mut parts = Vec::with_capacity(self.cuts.len() + 1);
        let mut start = 0;
        for &c in self.cuts.iter().chain(std::iter::once(&self.n)) {
            parts.push(self.perm[start..c].to_vec());
            start = c;
        }
        let out = PermutationPartition { n: self.n, parts };

        if let Some(i) = self.cuts.iter().rposition(|&c| c < self.n) {
            let v = self.cuts[i] + 1;
            self.cuts[i..].fill(v);
        } else if next_permutation(&mut self.perm) {
            self.cuts.fill(0);
        } else {
            self.done = true;
        }
        Some(out)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("a larger element follows");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Number of partitions having a fixed `f`-set as a prefix union:
/// `(f + d - 1)! / (d - 1)! * (n - f + d - 1)! / (d - 1)!`.
pub fn count_partitions_with_prefix(n: usize, d: usize, f: usize) -> Result<BigUint> {
    if d < 1 || f > n {
        return Err(Error::InvalidArgument(format!(
            "need d >= 1 and 0 <= f <= n, got n = {n}, d = {d}, f = {f}"
        )));
    }
    let dd = factorial((d - 1) as u64);
    Ok(factorial((f + d - 1) as u64) / &dd * (factorial((n - f + d - 1) as u64) / dd))
}

/// The same count as `(n + 2d - 2)! / ((d - 1)!^2 binom(n + 2d - 2, f + d - 1))`.
pub fn count_partitions_with_prefix_binomial(n: usize, d: usize, f: usize) -> Result<BigUint> {
    if d < 1 || f > n {
        return Err(Error::InvalidArgument(format!(
            "need d >= 1 and 0 <= f <= n, got n = {n}, d = {d}, f = {f}"
        )));
    }
    let top = (n + 2 * d - 2) as u64;
    let dd = factorial((d - 1) as u64);
    Ok(factorial(top) / (&dd * &dd * binomial(top, (f + d - 1) as u64)))
}

/// `M_Q(i) = 1` exactly when the prefix union at `i` belongs to `f`.
pub fn build_mq(q: &PermutationPartition, f: &SetFamily) -> Result<HyperMatrix> {
    if q.n() != f.n() {
        return Err(Error::InvalidArgument(format!(
            "partition is over [{}] but the family over [{}]",
            q.n(),
            f.n()
        )));
    }
    let dims = q.matrix_dims();
    let mut ones: Vec<Vec<usize>> = f.masks().iter().filter_map(|&s| q.prefix_index(s)).collect();
    ones.sort_unstable();
    debug_assert!(ones.iter().all(|i| f.contains_set(q.prefix_union(i).unwrap())));
    HyperMatrix::new(dims, ones)
}

/// All prefix unions of `q`, in lex order of their index vectors.
pub fn prefix_unions(q: &PermutationPartition) -> Vec<u64> {
    let dims = q.matrix_dims();
    BoxCells::new(&dims)
        .map(|i| q.prefix_union(&i).expect("index in range"))
        .collect()
}

/// Uniform permutation `d`-partition of `[n]`: a shuffle of the elements
/// together with `d - 1` interchangeable separators.
pub fn random_partition<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<PermutationPartition> {
    if d < 1 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    // 0 stands for a separator
    let mut tokens: Vec<usize> = (1..=n).chain(std::iter::repeat_n(0, d - 1)).collect();
    tokens.shuffle(rng);
    let parts = tokens.split(|&t| t == 0).map(<[usize]>::to_vec).collect();
    PermutationPartition::new(n, parts)
}

/// A random family over `[n]` with no (induced) copy of `p`: every subset
/// kept with probability 1/2, then a random member of some copy removed
/// until none is left.
pub fn random_free_family<R: Rng + ?Sized>(n: usize, p: &Poset, induced: bool, rng: &mut R) -> Result<SetFamily> {
    let all = SetFamily::power_set(n)?;
    let mut sets: Vec<u64> = all.masks().iter().copied().filter(|_| rng.random_bool(0.5)).collect();
    loop {
        let f = SetFamily::new(n, sets.iter().copied())?;
        match f.find_copy(p, induced) {
            None => return Ok(f),
            Some(copy) => {
                let victim = copy[rng.random_range(0..copy.len())];
                sets.retain(|&s| s != victim);
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MqCounterexample {
    pub trial: usize,
    pub family: SetFamily,
    pub partition: PermutationPartition,
    pub matrix: HyperMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct MqReport {
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub trials: usize,
    pub pattern: HyperMatrix,
    pub violations: usize,
    /// Most ones seen in any `M_Q`.
    pub max_ones: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<MqCounterexample>,
}

/// Random induced-`p`-free families paired with random partitions: each
/// `M_Q` must avoid the realizer matrix of `p`. Trial `t` draws from the
/// ChaCha stream `t` under `seed`, so the report does not depend on
/// scheduling.
pub fn verify_mq_freeness(p: &Poset, r: &Realizer, n: usize, trials: usize, seed: u64) -> Result<MqReport> {
    let d = r.len();
    if d < 2 {
        return Err(Error::InvalidArgument(format!(
            "realizer has {d} order(s); the matrix route needs d >= 2"
        )));
    }
    if n > 6 {
        return Err(Error::CapExceeded {
            what: "ground set size for M_Q trials",
            got: n as u128,
            cap: 6,
        });
    }
    let pattern = realizer_to_matrix(p, r)?;
    let outcomes = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(usize, Option<MqCounterexample>)> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t as u64);
            let family = random_free_family(n, p, true, &mut rng)?;
            let partition = random_partition(n, d, &mut rng)?;
            let matrix = build_mq(&partition, &family)?;
            let ones = matrix.len();
            let bad = contains(&matrix, &pattern)?;
            Ok((
                ones,
                bad.then(|| MqCounterexample {
                    trial: t,
                    family,
                    partition,
                    matrix,
                }),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_ones = outcomes.iter().map(|(o, _)| *o).max().unwrap_or(0);
    let mut bad: Vec<MqCounterexample> = outcomes.into_iter().filter_map(|(_, c)| c).collect();
    Ok(MqReport {
        seed,
        n,
        d,
        trials,
        pattern,
        violations: bad.len(),
        max_ones,
        first_violation: (!bad.is_empty()).then(|| bad.swap_remove(0)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleCount {
    /// Sum of the closed-form counts over the members.
    pub lhs: String,
    /// Pairs `(Q, F)` with `F` a prefix union of `Q`, by enumeration.
    pub rhs: String,
    pub equal: bool,
}

/// Counts pairs (partition, member that is one of its prefix unions) both by
/// formula and by enumerating every partition.
pub fn double_count_identity(f: &SetFamily, d: usize) -> Result<DoubleCount> {
    let n = f.n();
    let mut lhs = BigUint::from(0u32);
    for &s in f.masks() {
        lhs += count_partitions_with_prefix(n, d, s.count_ones() as usize)?;
    }
    let rhs: u64 = enumerate_partitions(n, d)?
        .par_bridge()
        .map(|q| f.masks().iter().filter(|&&s| q.is_prefix_union(s)).count() as u64)
        .sum();
    let rhs = BigUint::from(rhs);
    Ok(DoubleCount {
        equal: lhs == rhs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    })
}
