//! Finite posets, realizers and matrix patterns.

mod pattern;
mod realizer;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::embed::find_embedding;
use crate::error::{Error, Result};

pub use pattern::{
    dominance_order, enumerate_patterns, is_isomorphic, pattern_order, Dominance,
    PATTERN_SIZE_CAP,
};
pub use realizer::{
    dimension, linear_extensions, realizer_to_matrix, DimensionLimits, Realizer,
};

/// A strict partial order over labelled elements, stored as its full
/// `less-than` table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    labels: Vec<String>,
    lt: Vec<bool>,
}

impl Poset {
    /// Builds the poset generated by `relations` (pairs `x < y`), taking the
    /// transitive closure. Fails if the relations contain a cycle.
    pub fn from_relations(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        check_labels(&labels)?;
        let mut lt = vec![false; n * n];
        for &(x, y) in relations {
            if x >= n || y >= n {
                return Err(Error::InvalidPoset(format!(
                    "relation ({x}, {y}) refers to a missing element"
                )));
            }
            lt[x * n + y] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if lt[i * n + k] {
                    for j in 0..n {
                        if lt[k * n + j] {
                            lt[i * n + j] = true;
                        }
                    }
                }
            }
        }
        if let Some(x) = (0..n).find(|&x| lt[x * n + x]) {
            return Err(Error::InvalidPoset(format!(
                "antisymmetry violated: element {:?} lies on a cycle",
                labels[x]
            )));
        }
        Ok(Poset { labels, lt })
    }

    /// Takes a complete `less-than` table and checks the order axioms.
    pub fn from_table(labels: Vec<String>, lt: Vec<bool>) -> Result<Self> {
        let n = labels.len();
        check_labels(&labels)?;
        if lt.len() != n * n {
            return Err(Error::InvalidPoset(format!(
                "relation table has {} entries, expected {}",
                lt.len(),
                n * n
            )));
        }
        let at = |i: usize, j: usize| lt[i * n + j];
        for i in 0..n {
            if at(i, i) {
                return Err(Error::InvalidPoset(format!(
                    "irreflexivity violated at {:?}",
                    labels[i]
                )));
            }
            for j in 0..n {
                if at(i, j) && at(j, i) {
                    return Err(Error::InvalidPoset(format!(
                        "antisymmetry violated between {:?} and {:?}",
                        labels[i], labels[j]
                    )));
                }
                for k in 0..n {
                    if at(i, j) && at(j, k) && !at(i, k) {
                        return Err(Error::InvalidPoset(format!(
                            "transitivity violated: {:?} < {:?} < {:?}",
                            labels[i], labels[j], labels[k]
                        )));
                    }
                }
            }
        }
        Ok(Poset { labels, lt })
    }

    /// Builds from element labels and cover pairs given by label.
    pub fn from_covers<S: AsRef<str>>(elements: Vec<String>, covers: &[(S, S)]) -> Result<Self> {
        let index: HashMap<&str, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let lookup = |s: &str| {
            index
                .get(s)
                .copied()
                .ok_or_else(|| Error::InvalidPoset(format!("cover mentions unknown element {s:?}")))
        };
        let relations = covers
            .iter()
            .map(|(x, y)| Ok((lookup(x.as_ref())?, lookup(y.as_ref())?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_relations(elements, &relations)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn lt(&self, x: usize, y: usize) -> bool {
        self.lt[x * self.len() + y]
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.lt(x, y) || self.lt(y, x)
    }

    /// Number of strict relations `x < y`.
    pub fn relation_count(&self) -> usize {
        self.lt.iter().filter(|&&b| b).count()
    }

    /// Unordered incomparable pairs `(x, y)` with `x < y` as indices.
    pub fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .filter(|&(x, y)| !self.comparable(x, y))
            .collect()
    }

    /// Cover relations of the Hasse diagram.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if self.lt(x, y) && !(0..n).any(|z| self.lt(x, z) && self.lt(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn is_chain(&self) -> bool {
        self.incomparable_pairs().is_empty()
    }

    /// Length of the longest chain.
    pub fn height(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::InvalidPoset("height of the empty poset".into()));
        }
        let n = self.len();
        // x < y implies x has strictly fewer elements below it, so this is a
        // topological order.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&y| (0..n).filter(|&x| self.lt(x, y)).count());
        let mut longest = vec![1usize; n];
        for (pos, &y) in order.iter().enumerate() {
            for &x in &order[..pos] {
                if self.lt(x, y) {
                    longest[y] = longest[y].max(longest[x] + 1);
                }
            }
        }
        Ok(longest.into_iter().max().unwrap_or(0))
    }

    /// Whether `self` occurs in `host` as a weak or induced subposet.
    pub fn embeds_in(&self, host: &Poset, induced: bool) -> bool {
        find_embedding(self, host, induced, None).is_some()
    }

    pub fn to_file(&self) -> PosetFile {
        PosetFile {
            elements: self.labels.clone(),
            covers: self
                .covers()
                .into_iter()
                .map(|(x, y)| (self.labels[x].clone(), self.labels[y].clone()))
                .collect(),
        }
    }

    // Built-in families.

    /// The chain `1 < 2 < ... < k`.
    pub fn chain(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidArgument("chain length must be at least 1".into()));
        }
        let rel: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Self::from_relations(numbered(1, k), &rel)
    }

    pub fn antichain(k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidArgument("antichain size must be at least 1".into()));
        }
        Self::from_relations(numbered(1, k), &[])
    }

    /// `a < b, c < d` with `b` and `c` incomparable.
    pub fn diamond() -> Self {
        Self::from_relations(
            ["a", "b", "c", "d"].map(String::from).to_vec(),
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
        )
        .expect("diamond is a poset")
    }

    /// One minimum `0` below `r` pairwise incomparable elements.
    pub fn vee(r: usize) -> Result<Self> {
        if r < 1 {
            return Err(Error::InvalidArgument("vee needs at least one upper element".into()));
        }
        let rel: Vec<_> = (1..=r).map(|i| (0, i)).collect();
        Self::from_relations(numbered(0, r + 1), &rel)
    }

    /// Two minima below two maxima, every minimum below every maximum.
    pub fn butterfly() -> Self {
        Self::from_relations(
            ["a1", "a2", "b1", "b2"].map(String::from).to_vec(),
            &[(0, 2), (0, 3), (1, 2), (1, 3)],
        )
        .expect("butterfly is a poset")
    }

    /// The Boolean lattice of subsets of `[m]`, ordered by size then colex.
    pub fn boolean(m: usize) -> Result<Self> {
        if m > 6 {
            return Err(Error::InvalidArgument("boolean lattice limited to m <= 6".into()));
        }
        let mut masks: Vec<u64> = (0..1u64 << m).collect();
        masks.sort_by_key(|&s| (s.count_ones(), s));
        let labels = masks.iter().map(|&s| set_label(s)).collect();
        let mut rel = Vec::new();
        for (i, &a) in masks.iter().enumerate() {
            for (j, &b) in masks.iter().enumerate() {
                if a != b && a & b == a {
                    rel.push((i, j));
                }
            }
        }
        Self::from_relations(labels, &rel)
    }

    /// Parses a built-in name: `chain:k`, `antichain:k`, `diamond`, `vee:r`,
    /// `butterfly`, `boolean:m`.
    pub fn builtin(spec: &str) -> Result<Self> {
        let (name, arg) = match spec.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (spec, None),
        };
        let num = || -> Result<usize> {
            let a = arg.ok_or_else(|| {
                Error::InvalidArgument(format!("built-in poset {name:?} needs a size, e.g. {name}:3"))
            })?;
            a.parse()
                .map_err(|_| Error::InvalidArgument(format!("bad size {a:?} in {spec:?}")))
        };
        match name {
            "chain" => Self::chain(num()?),
            "antichain" => Self::antichain(num()?),
            "diamond" if arg.is_none() => Ok(Self::diamond()),
            "vee" => Self::vee(num()?),
            "butterfly" if arg.is_none() => Ok(Self::butterfly()),
            "boolean" => Self::boolean(num()?),
            _ => Err(Error::InvalidArgument(format!("unknown built-in poset {spec:?}"))),
        }
    }
}

fn numbered(start: usize, count: usize) -> Vec<String> {
    (start..start + count).map(|i| i.to_string()).collect()
}

fn set_label(mask: u64) -> String {
    let items: Vec<String> = (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| (b + 1).to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

fn check_labels(labels: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::InvalidPoset(format!("duplicate element label {l:?}")));
        }
    }
    Ok(())
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(x, y)| format!("{}<{}", self.labels[x], self.labels[y]))
            .collect();
        write!(f, "Poset({:?}; {})", self.labels, covers.join(", "))
    }
}

/// On-disk JSON shape: `{"elements":["a","b"],"covers":[["a","b"]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetFile {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
}

impl TryFrom<PosetFile> for Poset {
    type Error = Error;

    fn try_from(f: PosetFile) -> Result<Self> {
        Poset::from_covers(f.elements, &f.covers)
    }
}

impl Serialize for Poset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Poset::try_from(PosetFile::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Poset {
    type Err = Error;

    /// A built-in name, or inline JSON in the poset file format.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            let f: PosetFile = serde_json::from_str(s)?;
            f.try_into()
        } else {
            Self::builtin(s.trim())
        }
    }
}

/// Weak/induced subposet test: does `p` occur in `q`?
pub fn subposet_embeds(p: &Poset, q: &Poset, induced: bool) -> bool {
    p.embeds_in(q, induced)
}
