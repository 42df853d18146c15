//! Randomized and exhaustive self-checks, grouped into named suites.
//!
//! Every randomized trial draws from its own ChaCha stream under the run
//! seed, so reports are reproducible and independent of thread scheduling.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::doublecount::{
    build_mq, count_partitions_with_prefix, count_partitions_with_prefix_binomial, double_count_identity,
    enumerate_partitions, random_free_family, random_partition, verify_mq_freeness,
};
use crate::error::{Error, Result};
use crate::extremal::{
    ex_exact, ex_monotonicity_check, marcus_tardos_slack, tardos_diamond_check, ExOptions,
};
use crate::family::SetFamily;
use crate::hypermatrix::{block_analyze, contains, find_embedding, wide_block_bound, HyperMatrix};
use crate::poset::{dimension, realizer_to_matrix, DimensionLimits, Poset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    CountP,
    CountA,
    DoubleCount,
    Lw,
    Blocks,
    Mt,
    TardosDiamond,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::CountP,
        Suite::CountA,
        Suite::DoubleCount,
        Suite::Lw,
        Suite::Blocks,
        Suite::Mt,
        Suite::TardosDiamond,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CountP => "countp",
            Suite::CountA => "counta",
            Suite::DoubleCount => "doublecount",
            Suite::Lw => "lw",
            Suite::Blocks => "blocks",
            Suite::Mt => "mt",
            Suite::TardosDiamond => "tardos-diamond",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            Suite::CountP | Suite::DoubleCount => 50,
            Suite::CountA | Suite::Lw => 1000,
            Suite::Blocks => 100,
            Suite::Mt | Suite::TardosDiamond => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Per-suite trial count; `None` uses each suite's default.
    pub trials: Option<usize>,
    pub cap_override: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0,
            trials: None,
            cap_override: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub checks: usize,
    pub failures: usize,
    pub passed: bool,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

struct Tally {
    checks: usize,
    failures: usize,
    counterexample: Option<Value>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checks: 0,
            failures: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(witness());
            }
        }
    }

    fn finish(self, suite: Suite, opts: &VerifyOptions, trials: usize, details: Value) -> SuiteReport {
        SuiteReport {
            suite: suite.name().to_string(),
            seed: opts.seed,
            trials,
            checks: self.checks,
            failures: self.failures,
            passed: self.failures == 0,
            details,
            counterexample: self.counterexample,
        }
    }
}

/// Rng for trial `t` of a suite: stream `t` of the suite-specific key.
fn trial_rng(seed: u64, suite: Suite, t: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (suite as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(t as u64);
    rng
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport> {
    let trials = opts.trials.unwrap_or(suite.default_trials());
    match suite {
        Suite::CountP => count_p(opts, trials),
        Suite::CountA => count_a(opts, trials),
        Suite::DoubleCount => double_count(opts, trials),
        Suite::Lw => loomis_whitney(opts, trials),
        Suite::Blocks => blocks(opts, trials),
        Suite::Mt => marcus_tardos(opts),
        Suite::TardosDiamond => tardos(opts),
    }
}

pub fn run_all(opts: &VerifyOptions) -> Result<Vec<SuiteReport>> {
    Suite::ALL.iter().map(|&s| run_suite(s, opts)).collect()
}

fn random_set<R: Rng + ?Sized>(n: usize, rng: &mut R) -> u64 {
    (0..n).filter(|_| rng.random_bool(0.5)).fold(0, |m, b| m | 1 << b)
}

/// Partitions with a given prefix union, counted by enumeration, against
/// both closed forms.
fn count_p(opts: &VerifyOptions, trials: usize) -> Result<SuiteReport> {
    let mut tally = Tally::new();
    let cases: Vec<(usize, usize, u64)> = (0..trials)
        .map(|t| {
            let mut rng = trial_rng(opts.seed, Suite::CountP, t);
            let n = rng.random_range(0..=5);
            let d = rng.random_range(1..=3);
            (n, d, random_set(n, &mut rng))
        })
        .collect();
    let counted: Vec<usize> = cases
        .par_iter()
        .map(|&(n, d, s)| Ok(enumerate_partitions(n, d)?.filter(|q| q.is_prefix_union(s)).count()))
        .collect::<Result<_>>()?;
    for (&(n, d, s), &got) in cases.iter().zip(&counted) {
        let f = s.count_ones() as usize;
        let formula = count_partitions_with_prefix(n, d, f)?;
        let binom = count_partitions_with_prefix_binomial(n, d, f)?;
        tally.check(formula == BigUint::from(got) && binom == formula, || {
            json!({"n": n, "d": d, "set": crate::family::mask_to_vec(s), "enumerated": got,
                   "formula": formula.to_string(), "binomial_form": binom.to_string()})
        });
    }
    Ok(tally.finish(Suite::CountP, opts, trials, json!({"max_n": 5, "max_d": 3})))
}

/// `M_Q` of an induced-`P`-free family avoids `M_P`, and its number of ones
/// stays within the exact extremal number for its shape.
fn count_a(opts: &VerifyOptions, trials: usize) -> Result<SuiteReport> {
    let n = 5;
    let mut tally = Tally::new();
    let mut details = Vec::new();
    for (i, spec) in ["diamond", "vee:2", "butterfly"].into_iter().enumerate() {
        let p = Poset::builtin(spec)?;
        let (d, r) = dimension(&p, DimensionLimits::default())?;
        let seed = opts.seed.wrapping_add(i as u64);
        let report = verify_mq_freeness(&p, &r, n, trials, seed)?;
        tally.checks += report.trials;
        tally.failures += report.violations;
        if let (None, Some(cx)) = (&tally.counterexample, &report.first_violation) {
            tally.counterexample = Some(json!({"poset": spec, "violation": cx}));
        }

        // |M_Q| <= ex(shape of M_Q, M_P), solved once per shape
        let pattern = realizer_to_matrix(&p, &r)?;
        let mut ex_by_shape: HashMap<Vec<usize>, usize> = HashMap::new();
        let sizes = (0..trials)
            .into_par_iter()
            .map(|t| -> Result<(Vec<usize>, usize, String)> {
                let mut rng = trial_rng(seed, Suite::CountA, t);
                let f = random_free_family(n, &p, true, &mut rng)?;
                let q = random_partition(n, d, &mut rng)?;
                let m = build_mq(&q, &f)?;
                Ok((m.dims().to_vec(), m.len(), q.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        for (dims, ones, q) in sizes {
            let ex = match ex_by_shape.get(&dims) {
                Some(&v) => v,
                None => {
                    let forced = ExOptions {
                        cap_override: true,
                        ..Default::default()
                    };
                    let v = ex_exact(&dims, &pattern, forced)?.value;
                    ex_by_shape.insert(dims.clone(), v);
                    v
                }
            };
            tally.check(ones <= ex, || json!({"poset": spec, "partition": q, "ones": ones, "ex": ex}));
        }
        details.push(json!({"poset": spec, "d": d, "n": n, "max_ones": report.max_ones}));
    }
    Ok(tally.finish(Suite::CountA, opts, trials, Value::Array(details)))
}

fn double_count(opts: &VerifyOptions, trials: usize) -> Result<SuiteReport> {
    let mut tally = Tally::new();
    // every family on at most 2 points, d = 2
    for n in 0..=2 {
        let all = SetFamily::power_set(n)?;
        for sel in 0u64..1 << all.len() {
            let f = SetFamily::new(n, (0..all.len()).filter(|i| sel >> i & 1 == 1).map(|i| all.masks()[i]))?;
            let r = double_count_identity(&f, 2)?;
            tally.check(r.equal, || json!({"family": f, "d": 2, "result": r}));
        }
    }
    let results = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<_> {
            let mut rng = trial_rng(opts.seed, Suite::DoubleCount, t);
            let n = rng.random_range(1..=4);
            let d = rng.random_range(2..=3);
            let all = SetFamily::power_set(n)?;
            let f = SetFamily::new(n, all.masks().iter().copied().filter(|_| rng.random_bool(0.5)))?;
            let r = double_count_identity(&f, d)?;
            Ok((f, d, r))
        })
        .collect::<Result<Vec<_>>>()?;
    for (f, d, r) in results {
        tally.check(r.equal, || json!({"family": f, "d": d, "result": r}));
    }
    Ok(tally.finish(Suite::DoubleCount, opts, trials, json!({"exhaustive_up_to_n": 2})))
}

/// Random `d`-dimensional matrix with sides in `1..=max_side`.
fn random_matrix<R: Rng + ?Sized>(d: usize, max_side: usize, rng: &mut R) -> HyperMatrix {
    let dims: Vec<usize> = (0..d).map(|_| rng.random_range(1..=max_side)).collect();
    let density = rng.random_range(0.05..0.6);
    let cells: Vec<Vec<usize>> = crate::hypermatrix::BoxCells::new(&dims)
        .filter(|_| rng.random_bool(density))
        .collect();
    HyperMatrix::new(dims, cells).expect("cells lie in the box")
}

fn loomis_whitney(opts: &VerifyOptions, trials: usize) -> Result<SuiteReport> {
    let mut tally = Tally::new();
    let results: Vec<(HyperMatrix, bool)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(opts.seed, Suite::Lw, t);
            let m = random_matrix(3, 6, &mut rng);
            let ok = m.loomis_whitney_holds()?;
            Ok((m, ok))
        })
        .collect::<Result<_>>()?;
    for (m, ok) in results {
        tally.check(ok, || json!({"matrix": m}));
    }
    Ok(tally.finish(Suite::Lw, opts, trials, json!({"d": 3, "max_side": 6})))
}

/// A random matrix with every copy of `a` broken by deleting one of its
/// ones at random.
pub fn random_free_matrix<R: Rng + ?Sized>(dims: &[usize], a: &HyperMatrix, density: f64, rng: &mut R) -> Result<HyperMatrix> {
    let cells: Vec<Vec<usize>> = crate::hypermatrix::BoxCells::new(dims)
        .filter(|_| rng.random_bool(density))
        .collect();
    let mut m = HyperMatrix::new(dims.to_vec(), cells.iter())?;
    while let Some(image) = find_embedding(&m, a)? {
        let victim = &image[rng.random_range(0..image.len())];
        let kept: Vec<&[usize]> = m.ones().filter(|c| c != victim).collect();
        m = HyperMatrix::new(dims.to_vec(), kept)?;
    }
    Ok(m)
}

fn blocks(opts: &VerifyOptions, trials: usize) -> Result<SuiteReport> {
    let a = HyperMatrix::identity(2, 2)?;
    let k = a.len();
    let mut tally = Tally::new();
    let results = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<_> {
            let mut rng = trial_rng(opts.seed, Suite::Blocks, t);
            let n = rng.random_range(1..=8);
            let s = rng.random_range(1..=2);
            let density = rng.random_range(0.1..0.9);
            let m = random_free_matrix(&[n, n], &a, density, &mut rng)?;
            let report = block_analyze(&m, &a, s)?;
            let bound = wide_block_bound(k, s, 2);
            let wide_ok = (1..=2).all(|axis| BigUint::from(report.max_wide_per_column(axis)) <= bound);
            let coarse_free = !contains(&report.coarse, &a)?;
            Ok((m, s, wide_ok, coarse_free))
        })
        .collect::<Result<Vec<_>>>()?;
    for (m, s, wide_ok, coarse_free) in results {
        tally.check(wide_ok, || json!({"matrix": m, "s": s, "failed": "wide blocks per blockcolumn"}));
        tally.check(coarse_free, || json!({"matrix": m, "s": s, "failed": "coarse matrix contains the pattern"}));
    }
    Ok(tally.finish(Suite::Blocks, opts, trials, json!({"pattern": a, "max_n": 8, "sides": [1, 2]})))
}

/// The linear Marcus-Tardos bound on small squares for every 2x2 and 3x3
/// permutation matrix, and averaging monotonicity on a grid of shapes.
fn marcus_tardos(opts: &VerifyOptions) -> Result<SuiteReport> {
    let ex_opts = ExOptions {
        cap_override: opts.cap_override,
        ..Default::default()
    };
    let mut tally = Tally::new();
    let mut values = Vec::new();
    for k in 2..=3usize {
        for perm in permutations(k) {
            let a = HyperMatrix::new(vec![k, k], perm.iter().enumerate().map(|(i, &j)| [i + 1, j]))?;
            for n in 1..=6 {
                let v = ex_exact(&[n, n], &a, ex_opts)?.value;
                tally.check(marcus_tardos_slack(v, k as u64, n), || json!({"pattern": a, "n": n, "ex": v}));
                values.push(json!({"pattern": perm, "n": n, "ex": v}));
            }
        }
    }
    let id2 = [HyperMatrix::identity(2, 2)?];
    let id3 = [HyperMatrix::identity(2, 3)?];
    let grid: [(&[HyperMatrix], &[usize], &[usize]); 6] = [
        (&id2, &[2, 2], &[4, 4]),
        (&id2, &[2, 3], &[4, 5]),
        (&id2, &[3, 3], &[5, 6]),
        (&id3, &[2, 2, 2], &[2, 3, 3]),
        (&id3, &[2, 2, 2], &[3, 3, 3]),
        (&id3, &[2, 2, 3], &[3, 3, 3]),
    ];
    for (a, small, big) in grid {
        let c = ex_monotonicity_check(a, small, big, ex_opts)?;
        tally.check(c.holds, || serde_json::to_value(&c).unwrap_or(Value::Null));
    }
    Ok(tally.finish(Suite::Mt, opts, 0, json!({"ex": values})))
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (1..=k).collect();
    fn go(p: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
        if i == p.len() {
            out.push(p.clone());
            return;
        }
        for j in i..p.len() {
            p.swap(i, j);
            go(p, i + 1, out);
            p.swap(i, j);
        }
    }
    go(&mut p, 0, &mut out);
    out.sort();
    out
}

fn tardos(opts: &VerifyOptions) -> Result<SuiteReport> {
    let ex_opts = ExOptions {
        cap_override: opts.cap_override,
        ..Default::default()
    };
    let top = if opts.cap_override { 4 } else { 3 };
    let mut tally = Tally::new();
    let mut rows = Vec::new();
    for n in 1..=top {
        let c = tardos_diamond_check(n, ex_opts)?;
        rows.push(json!({"n": n, "value": c.value, "bound": c.bound}));
        tally.check(c.holds, || serde_json::to_value(&c).unwrap_or(Value::Null));
    }
    Ok(tally.finish(Suite::TardosDiamond, opts, 0, Value::Array(rows)))
}
