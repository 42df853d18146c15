//! Property tests against brute-force oracles written independently of the
//! library's search code.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::BigRational;
use proptest::prelude::*;

use hyperposet::arith::binomial;
use hyperposet::bounds::erdos_bound;
use hyperposet::doublecount::{build_mq, enumerate_partitions, partition_count, PermutationPartition};
use hyperposet::extremal::{ex_exact, la_exact, ExOptions, LaOptions};
use hyperposet::family::{family_contains, lubell, shifted_lubell, SetFamily};
use hyperposet::hypermatrix::contains;
use hyperposet::poset::{dimension, linear_extensions, pattern_order, is_isomorphic, realizer_to_matrix, DimensionLimits};
use hyperposet::{HyperMatrix, Poset};

fn cells(dims: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &n in dims {
        out = out
            .into_iter()
            .flat_map(|p| (1..=n).map(move |i| [p.clone(), vec![i]].concat()))
            .collect();
    }
    out
}

/// All strictly increasing maps `[k] -> [n]`, as vectors of images.
fn increasing_maps(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in from..=n {
            cur.push(v);
            go(k, n, v + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, n, 1, &mut Vec::new(), &mut out);
    out
}

/// Tries every product of increasing axis maps.
fn brute_contains(m: &HyperMatrix, a: &HyperMatrix) -> bool {
    let per_axis: Vec<Vec<Vec<usize>>> = a
        .dims()
        .iter()
        .zip(m.dims())
        .map(|(&k, &n)| increasing_maps(k, n))
        .collect();
    fn pick(axis: usize, per_axis: &[Vec<Vec<usize>>], chosen: &mut Vec<usize>, m: &HyperMatrix, a: &HyperMatrix) -> bool {
        if axis == per_axis.len() {
            return a.ones().all(|c| {
                let image: Vec<usize> = c.iter().enumerate().map(|(j, &v)| per_axis[j][chosen[j]][v - 1]).collect();
                m.get(&image)
            });
        }
        for i in 0..per_axis[axis].len() {
            chosen.push(i);
            if pick(axis + 1, per_axis, chosen, m, a) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    pick(0, &per_axis, &mut Vec::new(), m, a)
}

fn matrix(max_d: usize, max_side: usize) -> impl Strategy<Value = HyperMatrix> {
    (1..=max_d)
        .prop_flat_map(move |d| prop::collection::vec(1..=max_side, d))
        .prop_flat_map(|dims| {
            let all = cells(&dims);
            let len = all.len();
            (Just(dims), Just(all), prop::collection::vec(any::<bool>(), len))
        })
        .prop_map(|(dims, all, keep)| {
            let ones: Vec<&Vec<usize>> = all.iter().zip(&keep).filter(|(_, &k)| k).map(|(c, _)| c).collect();
            HyperMatrix::new(dims, ones).unwrap()
        })
}

fn pair_same_d(max_side_m: usize, max_side_a: usize) -> impl Strategy<Value = (HyperMatrix, HyperMatrix)> {
    (1..=3usize).prop_flat_map(move |d| {
        let m = prop::collection::vec(1..=max_side_m, d);
        let a = prop::collection::vec(1..=max_side_a, d);
        (m, a).prop_flat_map(|(dm, da)| {
            let cm = cells(&dm);
            let ca = cells(&da);
            let (lm, la) = (cm.len(), ca.len());
            (
                Just((dm, cm, da, ca)),
                prop::collection::vec(prop::bool::weighted(0.6), lm),
                prop::collection::vec(prop::bool::weighted(0.5), la),
            )
        })
    })
    .prop_map(|((dm, cm, da, ca), km, ka)| {
        let pick = |c: &[Vec<usize>], k: &[bool]| -> Vec<Vec<usize>> {
            c.iter().zip(k).filter(|(_, &b)| b).map(|(x, _)| x.clone()).collect()
        };
        (HyperMatrix::new(dm, pick(&cm, &km)).unwrap(), HyperMatrix::new(da, pick(&ca, &ka)).unwrap())
    })
}

/// Random poset: a random subset of the pairs `i < j` of `0..k`, closed.
fn poset(max: usize) -> impl Strategy<Value = Poset> {
    (1..=max)
        .prop_flat_map(|k| (Just(k), prop::collection::vec(any::<bool>(), k * (k - 1) / 2)))
        .prop_map(|(k, bits)| {
            let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
            let rel: Vec<(usize, usize)> = pairs.into_iter().zip(bits).filter(|(_, b)| *b).map(|(p, _)| p).collect();
            Poset::from_relations((0..k).map(|i| format!("x{i}")).collect(), &rel).unwrap()
        })
}

fn family(max_n: usize) -> impl Strategy<Value = SetFamily> {
    (0..=max_n)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(any::<bool>(), 1 << n)))
        .prop_map(|(n, keep)| SetFamily::new(n, (0..1u64 << n).filter(|&s| keep[s as usize])).unwrap())
}

/// Tries every injection of the poset's elements into the family.
fn brute_family_contains(f: &SetFamily, p: &Poset, induced: bool) -> bool {
    let sets = f.masks();
    let k = p.len();
    let sub = |a: u64, b: u64| a != b && a & b == a;
    fn go(x: usize, k: usize, sets: &[u64], used: &mut Vec<bool>, img: &mut Vec<u64>, ok: &dyn Fn(&[u64]) -> bool) -> bool {
        if x == k {
            return ok(img);
        }
        for (i, &s) in sets.iter().enumerate() {
            if !used[i] {
                used[i] = true;
                img.push(s);
                if go(x + 1, k, sets, used, img, ok) {
                    return true;
                }
                img.pop();
                used[i] = false;
            }
        }
        false
    }
    let check = |img: &[u64]| {
        (0..k).all(|x| {
            (0..k).all(|y| {
                let rel = p.lt(x, y);
                let inc = sub(img[x], img[y]);
                if induced { rel == inc } else { !rel || inc }
            })
        })
    };
    go(0, k, sets, &mut vec![false; sets.len()], &mut Vec::new(), &check)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn containment_matches_brute_force((m, a) in pair_same_d(4, 3)) {
        prop_assert_eq!(contains(&m, &a).unwrap(), brute_contains(&m, &a));
    }

    #[test]
    fn containment_is_monotone((m, a) in pair_same_d(4, 2), extra in prop::collection::vec(any::<prop::sample::Index>(), 0..4)) {
        let all = cells(m.dims());
        let mut ones: BTreeSet<Vec<usize>> = m.ones().map(<[usize]>::to_vec).collect();
        for ix in extra {
            ones.insert(ix.get(&all).clone());
        }
        let bigger = HyperMatrix::new(m.dims().to_vec(), ones).unwrap();
        if contains(&m, &a).unwrap() {
            prop_assert!(contains(&bigger, &a).unwrap());
        }
    }

    #[test]
    fn reversing_an_axis_preserves_containment((m, a) in pair_same_d(4, 3), axis in 1..=3usize) {
        let axis = 1 + (axis - 1) % m.d();
        let rm = m.reverse_axis(axis).unwrap();
        let ra = a.reverse_axis(axis).unwrap();
        prop_assert_eq!(contains(&m, &a).unwrap(), contains(&rm, &ra).unwrap());
    }

    #[test]
    fn projections_and_loomis_whitney(m in matrix(3, 5)) {
        if m.d() >= 2 {
            for axis in 1..=m.d() {
                let p = m.projection(axis).unwrap();
                prop_assert!(p.len() <= m.len());
                prop_assert_eq!(p.is_empty(), m.is_empty());
                prop_assert_eq!(p.d(), m.d() - 1);
            }
            prop_assert!(m.loomis_whitney_holds().unwrap());
        }
    }

    #[test]
    fn family_containment_matches_brute_force(f in family(3), p in poset(4), induced in any::<bool>()) {
        prop_assert_eq!(family_contains(&f, &p, induced), brute_family_contains(&f, &p, induced));
    }

    #[test]
    fn shifted_lubell_is_at_most_lubell(f in family(6), d in 1..=4usize) {
        prop_assert!(shifted_lubell(&f, d).unwrap() <= lubell(&f));
    }

    #[test]
    fn lubell_adds_over_disjoint_families(f in family(5), split in any::<u64>()) {
        let (a, b): (Vec<u64>, Vec<u64>) = f.masks().iter().partition(|&&s| split >> (s % 64) & 1 == 1);
        let fa = SetFamily::new(f.n(), a).unwrap();
        let fb = SetFamily::new(f.n(), b).unwrap();
        prop_assert_eq!(lubell(&f), lubell(&fa) + lubell(&fb));
        let by_level: BigRational = f
            .masks()
            .iter()
            .map(|&s| BigRational::new(1.into(), binomial(f.n() as u64, s.count_ones() as u64).into()))
            .sum();
        prop_assert_eq!(lubell(&f), by_level);
    }

    #[test]
    fn dimension_is_minimal_and_matrix_reproduces_the_poset(p in poset(5)) {
        let (t, r) = dimension(&p, DimensionLimits::default()).unwrap();
        let exts = linear_extensions(&p);
        // no tuple of t - 1 extensions separates every incomparable pair
        let pairs = p.incomparable_pairs();
        let rank = |e: &Vec<usize>, x: usize| e.iter().position(|&y| y == x).unwrap();
        let realizes = |tuple: &[&Vec<usize>]| {
            pairs.iter().all(|&(x, y)| {
                tuple.iter().any(|e| rank(e, x) < rank(e, y)) && tuple.iter().any(|e| rank(e, y) < rank(e, x))
            })
        };
        if t >= 2 {
            let smaller = t - 1;
            let mut idx: Vec<usize> = vec![0; smaller];
            let mut any = false;
            loop {
                let tuple: Vec<&Vec<usize>> = idx.iter().map(|&i| &exts[i]).collect();
                if realizes(&tuple) {
                    any = true;
                    break;
                }
                let mut j = smaller;
                while j > 0 && idx[j - 1] == exts.len() - 1 {
                    j -= 1;
                }
                if j == 0 {
                    break;
                }
                idx[j - 1] += 1;
                for v in &mut idx[j..] {
                    *v = 0;
                }
            }
            prop_assert!(!any);
        }
        let m = realizer_to_matrix(&p, &r).unwrap();
        prop_assert!(m.is_permutation_matrix().unwrap() || t == 1);
        if t == 2 {
            prop_assert!(is_isomorphic(&pattern_order(&m), &p));
        }
    }

    #[test]
    fn prefix_unions_are_strictly_monotone(seed in any::<u64>(), n in 0..=5usize, d in 1..=3usize) {
        let count = enumerate_partitions(n, d).unwrap().count();
        let q = enumerate_partitions(n, d).unwrap().nth(seed as usize % count).unwrap();
        let idx = cells(&q.matrix_dims());
        for i in &idx {
            for j in &idx {
                let (ui, uj) = (q.prefix_union(i).unwrap(), q.prefix_union(j).unwrap());
                let below = i.iter().zip(j).all(|(a, b)| a <= b);
                if below {
                    prop_assert_eq!(ui & uj, ui);
                }
                prop_assert_eq!(ui & uj == ui && ui != uj, below && i != j);
            }
        }
    }

    #[test]
    fn mq_counts_prefix_members(f in family(4), seed in any::<u64>(), d in 1..=3usize) {
        let count = enumerate_partitions(f.n(), d).unwrap().count();
        let q: PermutationPartition = enumerate_partitions(f.n(), d).unwrap().nth(seed as usize % count).unwrap();
        let m = build_mq(&q, &f).unwrap();
        let brute = cells(&q.matrix_dims())
            .iter()
            .filter(|i| f.contains_set(q.prefix_union(i).unwrap()))
            .count();
        prop_assert_eq!(m.len(), brute);
        prop_assert_eq!(m.len(), f.masks().iter().filter(|&&s| q.is_prefix_union(s)).count());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn ex_is_monotone_in_each_side(a in matrix(2, 3), n1 in 1..=4usize, n2 in 1..=4usize) {
        prop_assume!(a.d() == 2 && !a.is_empty());
        let base = ex_exact(&[n1, n2], &a, ExOptions::default()).unwrap().value;
        let wider = ex_exact(&[n1, n2 + 1], &a, ExOptions::default()).unwrap().value;
        let taller = ex_exact(&[n1 + 1, n2], &a, ExOptions::default()).unwrap().value;
        prop_assert!(base <= wider && base <= taller);
    }

    #[test]
    fn ex_witness_is_the_lex_least_optimum(a in matrix(2, 2), n1 in 1..=3usize, n2 in 1..=3usize) {
        prop_assume!(a.d() == 2 && !a.is_empty());
        let all = cells(&[n1, n2]);
        let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
        for mask in 0u32..1 << all.len() {
            let ones: Vec<Vec<usize>> = (0..all.len()).filter(|i| mask >> i & 1 == 1).map(|i| all[i].clone()).collect();
            let m = HyperMatrix::new(vec![n1, n2], ones.clone()).unwrap();
            if brute_contains(&m, &a) {
                continue;
            }
            let better = match &best {
                None => true,
                Some((v, w)) => ones.len() > *v || (ones.len() == *v && ones < *w),
            };
            if better {
                best = Some((ones.len(), ones));
            }
        }
        let (value, witness) = best.unwrap();
        let got = ex_exact(&[n1, n2], &a, ExOptions::default()).unwrap();
        prop_assert_eq!(got.value, value);
        prop_assert_eq!(got.witness.ones().map(<[usize]>::to_vec).collect::<Vec<_>>(), witness);
    }

    #[test]
    fn la_weak_is_below_induced_and_chain_bounds(p in poset(4), n in 0..=3usize) {
        let weak = la_exact(n, &p, false, LaOptions::default()).unwrap().value;
        let induced = la_exact(n, &p, true, LaOptions::default()).unwrap().value;
        prop_assert!(weak <= induced);
        let mid = binomial(n as u64, n as u64 / 2);
        prop_assert!(BigUint::from(weak) <= mid * (p.len() - 1));
        if p.len() >= 2 {
            prop_assert!(BigUint::from(weak) <= erdos_bound(n as u64, p.len() as u64).unwrap());
        }
    }
}

#[test]
fn partition_counts_up_to_ten() {
    for n in 0..=9usize {
        for d in 1..=10 - n {
            if d == 0 {
                continue;
            }
            let got = enumerate_partitions(n, d).unwrap().count();
            assert_eq!(BigUint::from(got), partition_count(n, d).unwrap(), "n={n} d={d}");
        }
    }
}
