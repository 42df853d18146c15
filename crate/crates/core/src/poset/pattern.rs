//! The order induced on the ones of a matrix, and enumeration of all matrix
//! patterns of a poset.
//!
//! Two 1-entries `e != e'` compare as `e < e'` when `e` is coordinatewise at
//! most `e'` ([`Dominance::Weak`]). This is the order of prefix unions of a
//! permutation partition, so it is the one a `P`-pattern refers to. For
//! permutation matrices no two ones share a coordinate and the weak and
//! strict orders agree.

use std::collections::BTreeSet;

use super::Poset;
use crate::embed::find_embedding;
use crate::error::{Error, Result};
use crate::hypermatrix::HyperMatrix;

/// Largest poset accepted by [`enumerate_patterns`].
pub const PATTERN_SIZE_CAP: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// Every coordinate strictly smaller.
    Strict,
    /// Every coordinate at most, entries distinct.
    Weak,
}

impl Dominance {
    fn below(self, e: &[usize], f: &[usize]) -> bool {
        match self {
            Dominance::Strict => e.iter().zip(f).all(|(a, b)| a < b),
            Dominance::Weak => e != f && e.iter().zip(f).all(|(a, b)| a <= b),
        }
    }
}

/// The poset on the ones of `a` (labelled by coordinates, in lex order)
/// under the given dominance.
pub fn dominance_order(a: &HyperMatrix, dominance: Dominance) -> Poset {
    let ones: Vec<&[usize]> = a.ones().collect();
    let n = ones.len();
    let labels = ones
        .iter()
        .map(|c| {
            let parts: Vec<String> = c.iter().map(usize::to_string).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let mut lt = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            lt[i * n + j] = dominance.below(ones[i], ones[j]);
        }
    }
    Poset::from_table(labels, lt).expect("coordinatewise dominance is a partial order")
}

/// The usual partial order among the entries of a matrix.
pub fn pattern_order(a: &HyperMatrix) -> Poset {
    dominance_order(a, Dominance::Weak)
}

/// Order isomorphism by bijection search.
pub fn is_isomorphic(p: &Poset, q: &Poset) -> bool {
    p.len() == q.len()
        && p.relation_count() == q.relation_count()
        && find_embedding(p, q, true, None).is_some()
}

/// All `P`-patterns: 2-dimensional matrices with exactly `|P|` ones, no
/// all-zero row or column, whose [`pattern_order`] is isomorphic to `P`.
/// Sorted by shape, then by coordinates.
pub fn enumerate_patterns(p: &Poset, d: usize) -> Result<Vec<HyperMatrix>> {
    if d != 2 {
        return Err(Error::InvalidArgument(format!(
            "pattern enumeration supports d = 2 only, got d = {d}"
        )));
    }
    let k = p.len();
    if k == 0 {
        return Err(Error::InvalidPoset("pattern of the empty poset".into()));
    }
    if k > PATTERN_SIZE_CAP {
        return Err(Error::CapExceeded {
            what: "poset size for pattern enumeration",
            got: k as u128,
            cap: PATTERN_SIZE_CAP as u128,
        });
    }
    let relations = p.relation_count();
    let mut found = BTreeSet::new();
    for rows in 1..=k {
        for cols in 1..=k {
            if rows * cols < k || rows > k || cols > k {
                continue;
            }
            let mut chosen = Vec::with_capacity(k);
            let mut emit = |cells: &[(usize, usize)]| {
                let m = HyperMatrix::new(vec![rows, cols], cells.iter().map(|&(r, c)| [r, c]))
                    .expect("cells are in range");
                let q = pattern_order(&m);
                if q.relation_count() == relations && is_isomorphic(p, &q) {
                    found.insert(m);
                }
            };
            covering_sets(rows, cols, k, 0, &mut chosen, &mut emit);
        }
    }
    Ok(found.into_iter().collect())
}

/// Every `k`-subset of the `rows x cols` grid (row-major from cell `next`)
/// that meets each row and each column.
fn covering_sets(
    rows: usize,
    cols: usize,
    k: usize,
    next: usize,
    chosen: &mut Vec<(usize, usize)>,
    emit: &mut dyn FnMut(&[(usize, usize)]),
) {
    let total = rows * cols;
    if chosen.len() == k {
        let mut row_hit = vec![false; rows + 1];
        let mut col_hit = vec![false; cols + 1];
        for &(r, c) in chosen.iter() {
            row_hit[r] = true;
            col_hit[c] = true;
        }
        if row_hit[1..].iter().all(|&b| b) && col_hit[1..].iter().all(|&b| b) {
            emit(chosen);
        }
        return;
    }
    if total - next < k - chosen.len() {
        return;
    }
    let (r, c) = (next / cols + 1, next % cols + 1);
    // leaving the last cell of a row: that row must already be hit
    let row_done = c == cols;
    let row_hit = chosen.iter().any(|&(rr, _)| rr == r);
    // rows below r still need at least one cell each
    let rows_after = rows - r;
    if k - chosen.len() < rows_after + usize::from(!row_hit) {
        return;
    }

    chosen.push((r, c));
    covering_sets(rows, cols, k, next + 1, chosen, emit);
    chosen.pop();

    if !(row_done && !row_hit) {
        covering_sets(rows, cols, k, next + 1, chosen, emit);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(dims: &[usize], ones: &[&[usize]]) -> HyperMatrix {
        HyperMatrix::new(dims.to_vec(), ones.iter().copied()).unwrap()
    }

    #[test]
    fn identity_is_a_chain() {
        for k in 1..5 {
            let id = HyperMatrix::identity(k, 2).unwrap();
            assert!(is_isomorphic(&pattern_order(&id), &Poset::chain(k).unwrap()));
            assert!(is_isomorphic(
                &dominance_order(&id, Dominance::Strict),
                &Poset::chain(k).unwrap()
            ));
        }
    }

    #[test]
    fn one_row_matrix() {
        let row = m(&[1, 3], &[&[1, 1], &[1, 2], &[1, 3]]);
        let strict = dominance_order(&row, Dominance::Strict);
        assert!(is_isomorphic(&strict, &Poset::antichain(3).unwrap()));
        let weak = pattern_order(&row);
        assert!(is_isomorphic(&weak, &Poset::chain(3).unwrap()));
    }

    #[test]
    fn antidiagonal_is_antichain_both_ways() {
        let anti = m(&[3, 3], &[&[1, 3], &[2, 2], &[3, 1]]);
        for dom in [Dominance::Strict, Dominance::Weak] {
            assert!(is_isomorphic(&dominance_order(&anti, dom), &Poset::antichain(3).unwrap()));
        }
    }

    #[test]
    fn chain_two_patterns() {
        let pats = enumerate_patterns(&Poset::chain(2).unwrap(), 2).unwrap();
        let expect = vec![
            m(&[1, 2], &[&[1, 1], &[1, 2]]),
            m(&[2, 1], &[&[1, 1], &[2, 1]]),
            m(&[2, 2], &[&[1, 1], &[2, 2]]),
        ];
        assert_eq!(pats, expect);
    }

    #[test]
    fn antichain_two_has_one_pattern() {
        let pats = enumerate_patterns(&Poset::antichain(2).unwrap(), 2).unwrap();
        assert_eq!(pats, vec![m(&[2, 2], &[&[1, 2], &[2, 1]])]);
    }

    #[test]
    fn diamond_has_sixteen_patterns() {
        let pats = enumerate_patterns(&Poset::diamond(), 2).unwrap();
        assert_eq!(pats.len(), 16);
        for a in &pats {
            assert_eq!(a.len(), 4);
            assert!(is_isomorphic(&pattern_order(a), &Poset::diamond()));
        }
        // under strict dominance only three shapes survive
        let strict = pats
            .iter()
            .filter(|a| is_isomorphic(&dominance_order(a, Dominance::Strict), &Poset::diamond()))
            .count();
        assert_eq!(strict, 1);
    }

    #[test]
    fn realizer_matrix_is_a_pattern() {
        let d = Poset::diamond();
        let (_, r) = super::super::dimension(&d, Default::default()).unwrap();
        let mp = super::super::realizer_to_matrix(&d, &r).unwrap();
        assert!(enumerate_patterns(&d, 2).unwrap().contains(&mp));
    }

    #[test]
    fn rejects_other_dimensions_and_big_posets() {
        assert!(enumerate_patterns(&Poset::diamond(), 3).is_err());
        assert!(enumerate_patterns(&Poset::chain(7).unwrap(), 2).is_err());
    }
}
