//! Exact extremal numbers: `ex_d` for forbidden matrices and `La`/`La#` for
//! forbidden subposets, with an optional persistent result cache.

mod cache;
mod ex;
mod la;

use serde_json::json;

use crate::error::Result;
use crate::family::{family_contains, SetFamily};
use crate::hypermatrix::{contains, HyperMatrix};
use crate::poset::Poset;

pub use cache::{CacheRecord, ResultCache, ENGINE_VERSION};
pub use ex::{
    ex_exact, ex_exact_set, ex_monotonicity_check, ex_rectangle_check, marcus_tardos_slack,
    tardos_diamond_check, ExOptions, ExResult, MonotonicityCheck, TardosDiamondCheck,
    DEFAULT_CELL_CAP,
};
pub use la::{la_exact, LaOptions, LaResult, DEFAULT_N_CAP, OVERRIDE_N_CAP};

/// [`ex_exact_set`] through the cache. The flag reports a cache hit.
///
/// A stored witness is re-checked for shape, size and freeness before use.
pub fn ex_exact_cached(
    cache: Option<&ResultCache>,
    dims: &[usize],
    patterns: &[HyperMatrix],
    opts: ExOptions,
) -> Result<(ExResult, bool)> {
    let inputs = json!({ "dims": dims, "patterns": patterns });
    if let Some(rec) = cache.and_then(|c| c.load("ex", &inputs)) {
        if let Ok(witness) = serde_json::from_value::<HyperMatrix>(rec.witness) {
            let sound = witness.dims() == dims
                && witness.len() == rec.value
                && patterns.iter().all(|p| matches!(contains(&witness, p), Ok(false)));
            if sound {
                return Ok((ExResult { value: rec.value, witness }, true));
            }
        }
    }
    let res = ex_exact_set(dims, patterns, opts)?;
    if let Some(c) = cache {
        c.store("ex", inputs, res.value, serde_json::to_value(&res.witness)?)?;
    }
    Ok((res, false))
}

/// [`la_exact`] through the cache. The flag reports a cache hit.
pub fn la_exact_cached(
    cache: Option<&ResultCache>,
    n: usize,
    p: &Poset,
    induced: bool,
    opts: LaOptions,
) -> Result<(LaResult, bool)> {
    let inputs = json!({ "n": n, "poset": p, "induced": induced });
    if let Some(rec) = cache.and_then(|c| c.load("la", &inputs)) {
        if let Ok(witness) = serde_json::from_value::<SetFamily>(rec.witness) {
            if witness.n() == n && witness.len() == rec.value && !family_contains(&witness, p, induced) {
                return Ok((LaResult { value: rec.value, witness }, true));
            }
        }
    }
    let res = la_exact(n, p, induced, opts)?;
    if let Some(c) = cache {
        c.store("la", inputs, res.value, serde_json::to_value(&res.witness)?)?;
    }
    Ok((res, false))
}
