//! Exact evaluation of the closed-form upper bounds on `La(n, P)` and
//! `La#(n, P)`, and the matrix route from an extremal constant to an induced
//! bound.
//!
//! Bounds on `La` are expressed as the coefficient of `binom(n, n/2)`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::arith::{binomial, factorial, rational_string, to_rational};
use crate::error::{Error, Result};
use crate::extremal::{ex_exact, ExOptions};
use crate::family::{family_contains, SetFamily};
use crate::hypermatrix::HyperMatrix;
use crate::poset::{dimension, is_isomorphic, realizer_to_matrix, DimensionLimits, Poset};

fn rat(n: u64, d: u64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Sum of the `k - 1` largest binomial coefficients `binom(n, i)`.
pub fn erdos_bound(n: u64, k: u64) -> Result<BigUint> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("chain length k must be at least 2, got {k}")));
    }
    let mut coeffs: Vec<BigUint> = (0..=n).map(|i| binomial(n, i)).collect();
    coeffs.sort_unstable_by(|a, b| b.cmp(a));
    Ok(coeffs.into_iter().take((k - 1) as usize).sum())
}

/// `|P| - 1`: every poset is a weak subposet of the chain of its size.
pub fn general_weak_bound(p: &Poset) -> BigUint {
    BigUint::from(p.len().saturating_sub(1))
}

/// `(|P| + (m^2 + 3m - 2)(h - 1)/2 - 1) / (m + 1)`.
pub fn chen_li_bound(p: &Poset, m: u64) -> Result<BigRational> {
    if m < 1 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let h = p.height()? as u64;
    let size = p.len() as u64;
    let inner = rat(size - 1, 1) + rat((m * m + 3 * m - 2) * (h - 1), 2);
    Ok(inner / rat(m + 1, 1))
}

/// The `m` in `1..=|P|` minimizing [`chen_li_bound`], smallest on ties.
pub fn best_m(p: &Poset) -> Result<(u64, BigRational)> {
    best_over(1..=p.len() as u64, |m| chen_li_bound(p, m))
}

/// `(|P| + (3k - 5) 2^(k-2) (h - 1) - 1) / 2^(k-1)`.
pub fn gmt_bound(p: &Poset, k: u64) -> Result<BigRational> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    let h = p.height()? as u64;
    let size = p.len() as u64;
    let two = BigUint::from(2u32);
    let inner = to_rational(&BigUint::from(size - 1))
        + to_rational(&(BigUint::from((3 * k - 5) * (h - 1)) * two.clone().pow(k - 2)));
    Ok(inner / to_rational(&two.pow(k - 1)))
}

/// The `k` in `2..=|P| + 2` minimizing [`gmt_bound`], smallest on ties.
pub fn best_k(p: &Poset) -> Result<(u64, BigRational)> {
    best_over(2..=p.len() as u64 + 2, |k| gmt_bound(p, k))
}

fn best_over(
    range: impl Iterator<Item = u64>,
    f: impl Fn(u64) -> Result<BigRational>,
) -> Result<(u64, BigRational)> {
    let mut best: Option<(u64, BigRational)> = None;
    for x in range {
        let v = f(x)?;
        if best.as_ref().is_none_or(|(_, b)| v < *b) {
            best = Some((x, v));
        }
    }
    best.ok_or_else(|| Error::InvalidPoset("empty poset".into()))
}

/// `h(P) - 1`, the leading term for posets whose Hasse diagram is a tree.
pub fn bukh_bound(p: &Poset) -> Result<BigUint> {
    Ok(BigUint::from(p.height()? - 1))
}

/// Whether the Hasse diagram, as an undirected graph, is a tree.
pub fn hasse_is_tree(p: &Poset) -> bool {
    let n = p.len();
    let covers = p.covers();
    if n == 0 || covers.len() != n - 1 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in &covers {
            let other = if a == x { b } else if b == x { a } else { continue };
            if !seen[other] {
                seen[other] = true;
                stack.push(other);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// `2 k^4 binom(k^2, k)`: the linear coefficient for a `k x k` permutation matrix.
pub fn marcus_tardos_constant(k: u64) -> BigUint {
    BigUint::from(2u32) * BigUint::from(k).pow(4u32) * binomial(k * k, k)
}

/// `4^(d-1) (d-1)! / (d-1)^(d-1)`, taken as 1 at `d = 1`.
pub fn refined_factor(d: u64) -> BigRational {
    if d <= 1 {
        return BigRational::one();
    }
    let four = BigUint::from(4u32).pow(d - 1);
    to_rational(&(four * factorial(d - 1))) / to_rational(&BigUint::from(d - 1).pow(d - 1))
}

/// `binom(n + 2d - 2, floor(n/2) + d - 1) <= 4^(d-1) binom(n, floor(n/2))`.
pub fn binomial_shift_check(n: u64, d: u64) -> Result<bool> {
    if d < 1 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let lhs = binomial(n + 2 * d - 2, n / 2 + d - 1);
    let rhs = BigUint::from(4u32).pow(d - 1) * binomial(n, n / 2);
    Ok(lhs <= rhs)
}

/// Where the extremal constant `K` with `ex_d(n, M_P) <= K n^(d-1)` comes from.
#[derive(Debug, Clone)]
pub enum KSource {
    /// Largest `ex_d(n^d, M_P) / n^(d-1)` over `n <= n_max`, by exact search.
    Exact { n_max: usize, opts: ExOptions },
    Supplied(BigRational),
    /// The permutation-matrix constant for `k = |P|`; `d = 2` only.
    MarcusTardos,
}

#[derive(Debug, Clone, Serialize)]
pub struct KSample {
    pub n: usize,
    pub ex: usize,
    pub ratio: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub dimension: usize,
    pub realizer: Vec<Vec<String>>,
    pub matrix: HyperMatrix,
    pub k: String,
    pub k_source: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub k_samples: Vec<KSample>,
    /// `2^d K`.
    pub coefficient: String,
    /// `4^(d-1) (d-1)! / (d-1)^(d-1) K`.
    pub refined_coefficient: String,
}

/// Induced bound coefficient `2^d K` from the realizer matrix of `p`.
pub fn induced_bound_pipeline(p: &Poset, source: &KSource, limits: DimensionLimits) -> Result<PipelineReport> {
    let (d, realizer) = dimension(p, limits)?;
    if d == 1 {
        return Err(Error::InvalidArgument(
            "chains have dimension 1; use the chain bound instead".into(),
        ));
    }
    let matrix = realizer_to_matrix(p, &realizer)?;
    let mut samples = Vec::new();
    let (k, k_source) = match source {
        KSource::Supplied(k) => (k.clone(), "supplied".to_string()),
        KSource::MarcusTardos => {
            if d != 2 {
                return Err(Error::InvalidArgument(format!(
                    "the permutation-matrix constant applies to d = 2, poset has dimension {d}"
                )));
            }
            let size = p.len() as u64;
            (
                to_rational(&marcus_tardos_constant(size)),
                format!("Marcus-Tardos constant for k = {size}"),
            )
        }
        KSource::Exact { n_max, opts } => {
            let mut k = BigRational::zero();
            for n in 1..=*n_max {
                let ex = ex_exact(&vec![n; d], &matrix, *opts)?.value;
                let ratio = rat(ex as u64, (n as u64).pow(d as u32 - 1));
                samples.push(KSample {
                    n,
                    ex,
                    ratio: rational_string(&ratio),
                });
                k = k.max(ratio);
            }
            (k, format!("empirical, not a proof: max over n <= {n_max}"))
        }
    };
    let two_d = to_rational(&BigUint::from(2u32).pow(d as u32));
    Ok(PipelineReport {
        dimension: d,
        realizer: realizer.labelled(p),
        matrix,
        coefficient: rational_string(&(two_d * &k)),
        refined_coefficient: rational_string(&(refined_factor(d as u64) * &k)),
        k: rational_string(&k),
        k_source,
        k_samples: samples,
    })
}

/// `2^2 * 4 = 16`: the induced diamond coefficient obtained by forbidding all
/// diamond patterns at once, whose joint extremal function is at most `4n`.
pub fn diamond_pattern_route_coefficient() -> BigUint {
    BigUint::from(16u32)
}

/// The `m` consecutive middle levels of `2^[n]`, lowest level
/// `ceil((n - m) / 2)`; the whole cube when `m > n`.
pub fn middle_levels(n: usize, m: usize) -> Result<SetFamily> {
    if m > n {
        return SetFamily::power_set(n);
    }
    if m == 0 {
        return SetFamily::new(n, []);
    }
    let low = (n - m).div_ceil(2);
    SetFamily::levels(n, low..=low + m - 1)
}

/// Largest `n` accepted by the middle-level tests.
pub const MIDDLE_LEVELS_N_CAP: usize = 10;

/// Whether the `m` middle levels of `2^[n]` avoid `p`.
pub fn middle_levels_free(n: usize, m: usize, p: &Poset, induced: bool) -> Result<bool> {
    if n > MIDDLE_LEVELS_N_CAP {
        return Err(Error::CapExceeded {
            what: "ground set size for middle-level containment",
            got: n as u128,
            cap: MIDDLE_LEVELS_N_CAP as u128,
        });
    }
    Ok(!family_contains(&middle_levels(n, m)?, p, induced))
}

/// Largest `m` such that the `m` middle levels avoid `p` for every
/// `n <= n_max`. Only an estimate of the all-`n` quantity.
pub fn e_estimate(p: &Poset, induced: bool, n_max: usize) -> Result<usize> {
    let mut m = 0;
    while m <= n_max {
        let next = m + 1;
        let mut ok = true;
        for n in 0..=n_max {
            if !middle_levels_free(n, next, p, induced)? {
                ok = false;
                break;
            }
        }
        if !ok {
            break;
        }
        m = next;
    }
    Ok(m)
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundEntry {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter: Option<String>,
    pub coefficient: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundsTable {
    pub size: usize,
    pub height: usize,
    pub dimension: Option<usize>,
    pub entries: Vec<BoundEntry>,
}

fn entry(name: &str, parameter: Option<String>, coefficient: String, note: Option<&str>) -> BoundEntry {
    BoundEntry {
        name: name.to_string(),
        parameter,
        coefficient,
        note: note.map(str::to_string),
    }
}

/// Every applicable coefficient of `binom(n, n/2)` for `p`.
///
/// Matrix-route entries need the dimension, found within `limits`; they
/// are omitted for chains and when the search is out of range.
pub fn bounds_table(p: &Poset, limits: DimensionLimits) -> Result<BoundsTable> {
    let h = p.height()?;
    let mut entries = vec![entry(
        "weak_chain",
        None,
        general_weak_bound(p).to_string(),
        Some("La(n,P)"),
    )];
    let cl1 = chen_li_bound(p, 1)?;
    entries.push(entry("chen_li", Some("m=1".into()), rational_string(&cl1), Some("La(n,P)")));
    let (m, cl) = best_m(p)?;
    entries.push(entry("chen_li_best", Some(format!("m={m}")), rational_string(&cl), Some("La(n,P)")));
    let g2 = gmt_bound(p, 2)?;
    entries.push(entry("gmt", Some("k=2".into()), rational_string(&g2), Some("La(n,P)")));
    let (k, g) = best_k(p)?;
    entries.push(entry("gmt_best", Some(format!("k={k}")), rational_string(&g), Some("La(n,P)")));
    entries.push(entry(
        "bukh",
        None,
        bukh_bound(p)?.to_string(),
        Some(if hasse_is_tree(p) {
            "tree posets only, leading term; applies"
        } else {
            "tree posets only, leading term; does not apply"
        }),
    ));

    let dim = dimension(p, limits).ok().map(|(d, _)| d);
    if dim == Some(2) {
        let size = p.len() as u64;
        entries.push(entry(
            "marcus_tardos_constant",
            Some(format!("k={size}")),
            marcus_tardos_constant(size).to_string(),
            Some("ex_2(n,M_P) <= K n"),
        ));
        let rep = induced_bound_pipeline(p, &KSource::MarcusTardos, limits)?;
        entries.push(entry("matrix_route", Some("K=Marcus-Tardos".into()), rep.coefficient, Some("La#(n,P)")));
        entries.push(entry(
            "matrix_route_refined",
            Some("K=Marcus-Tardos".into()),
            rep.refined_coefficient,
            Some("La#(n,P)"),
        ));
    }
    if p.len() == 4 && is_isomorphic(p, &Poset::diamond()) {
        entries.push(entry(
            "diamond_all_patterns",
            Some("ex <= 4n".into()),
            diamond_pattern_route_coefficient().to_string(),
            Some("La#(n,P)"),
        ));
    }
    Ok(BoundsTable {
        size: p.len(),
        height: h,
        dimension: dim,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erdos_values() {
        assert_eq!(erdos_bound(4, 3).unwrap(), BigUint::from(10u32));
        for n in 1..12 {
            assert_eq!(erdos_bound(n, 2).unwrap(), binomial(n, n / 2));
            assert_eq!(erdos_bound(n, n + 2).unwrap(), BigUint::from(1u64 << n));
            assert_eq!(erdos_bound(n, n + 9).unwrap(), BigUint::from(1u64 << n));
        }
        assert_eq!(erdos_bound(5, 3).unwrap(), BigUint::from(20u32));
        assert!(erdos_bound(4, 1).is_err());
    }

    #[test]
    fn coefficient_examples() {
        let d = Poset::diamond();
        let c2 = Poset::chain(2).unwrap();
        assert_eq!(general_weak_bound(&d), BigUint::from(3u32));
        assert_eq!(general_weak_bound(&Poset::antichain(5).unwrap()), BigUint::from(4u32));
        assert_eq!(chen_li_bound(&d, 1).unwrap(), rat(5, 2));
        assert_eq!(chen_li_bound(&c2, 1).unwrap(), rat(1, 1));
        // m = 1 and k = 2 both reduce to (|P| + h - 2) / 2
        for p in [Poset::butterfly(), Poset::vee(3).unwrap(), Poset::boolean(3).unwrap()] {
            assert_eq!(chen_li_bound(&p, 1).unwrap(), gmt_bound(&p, 2).unwrap());
        }
        assert_eq!(gmt_bound(&d, 2).unwrap(), rat(5, 2));
        assert_eq!(gmt_bound(&c2, 2).unwrap(), rat(1, 1));
        assert!(best_k(&d).unwrap().1 <= gmt_bound(&d, 2).unwrap());
        assert!(best_m(&d).unwrap().1 <= chen_li_bound(&d, 1).unwrap());
    }

    #[test]
    fn marcus_tardos_values() {
        assert_eq!(marcus_tardos_constant(1), BigUint::from(2u32));
        assert_eq!(marcus_tardos_constant(2), BigUint::from(192u32));
        assert_eq!(marcus_tardos_constant(3), BigUint::from(13608u32));
    }

    #[test]
    fn refined_factors() {
        assert_eq!(refined_factor(2), rat(4, 1));
        // 16 * 2 / 4
        assert_eq!(refined_factor(3), rat(8, 1));
    }

    #[test]
    fn shift_inequality() {
        assert!(binomial_shift_check(4, 2).unwrap());
        for n in 0..=60 {
            for d in 1..=6 {
                assert!(binomial_shift_check(n, d).unwrap(), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn pipeline_sources() {
        let d = Poset::diamond();
        let lim = DimensionLimits::default();
        let sup = induced_bound_pipeline(&d, &KSource::Supplied(rat(192, 1)), lim).unwrap();
        assert_eq!((sup.coefficient.as_str(), sup.refined_coefficient.as_str()), ("768", "768"));
        let mt = induced_bound_pipeline(&d, &KSource::MarcusTardos, lim).unwrap();
        assert_eq!(mt.k, marcus_tardos_constant(4).to_string());
        let ex = KSource::Exact {
            n_max: 4,
            opts: ExOptions::default(),
        };
        let rep = induced_bound_pipeline(&d, &ex, lim).unwrap();
        assert_eq!(rep.k_samples.len(), 4);
        assert!(rep.k_source.starts_with("empirical"));
        assert!(induced_bound_pipeline(&Poset::chain(3).unwrap(), &KSource::MarcusTardos, lim).is_err());
    }

    #[test]
    fn middle_levels_examples() {
        let c2 = Poset::chain(2).unwrap();
        for n in 0..=8 {
            assert!(middle_levels_free(n, 1, &c2, false).unwrap());
        }
        for n in 1..=6 {
            assert!(!middle_levels_free(n, n + 1, &c2, false).unwrap());
        }
        assert_eq!(middle_levels(5, 2).unwrap().len(), 20);
        assert_eq!(middle_levels(4, 1).unwrap().len(), 6);
        // n - m odd: the lower of the two central pairs
        assert!(middle_levels(5, 2).unwrap().masks().iter().all(|s| matches!(s.count_ones(), 2 | 3)));
        assert!(middle_levels(4, 3).unwrap().masks().iter().all(|s| matches!(s.count_ones(), 1..=3)));
        assert!(middle_levels(4, 2).unwrap().masks().iter().all(|s| matches!(s.count_ones(), 1 | 2)));
        assert_eq!(e_estimate(&c2, false, 6).unwrap(), 1);
        assert_eq!(e_estimate(&Poset::diamond(), false, 6).unwrap(), 2);
    }

    #[test]
    fn diamond_table() {
        let t = bounds_table(&Poset::diamond(), DimensionLimits::default()).unwrap();
        let get = |name: &str| {
            t.entries
                .iter()
                .find(|e| e.name == name)
                .map(|e| e.coefficient.clone())
                .unwrap()
        };
        assert_eq!(get("weak_chain"), "3");
        assert_eq!(get("chen_li"), "5/2");
        assert_eq!(get("gmt"), "5/2");
        assert_eq!(get("diamond_all_patterns"), "16");
        assert_eq!(t.dimension, Some(2));
        assert!(hasse_is_tree(&Poset::vee(3).unwrap()));
        assert!(!hasse_is_tree(&Poset::diamond()));
    }
}
