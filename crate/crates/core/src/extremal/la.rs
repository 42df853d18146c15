//! Exact `La(n, P)` and `La#(n, P)` by branch and bound over subfamilies of
//! the Boolean lattice.

use serde::Serialize;

use crate::embed::find_embedding;
use crate::error::{Error, Result};
use crate::family::{family_contains, Inclusion, SetFamily};
use crate::poset::Poset;

/// Default largest ground set searched.
pub const DEFAULT_N_CAP: usize = 5;
/// Ground set size allowed with the cap override.
pub const OVERRIDE_N_CAP: usize = 6;

#[derive(Debug, Clone, Copy)]
pub struct LaOptions {
    pub n_cap: usize,
    pub cap_override: bool,
}

impl Default for LaOptions {
    fn default() -> Self {
        LaOptions {
            n_cap: DEFAULT_N_CAP,
            cap_override: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LaResult {
    pub value: usize,
    /// Lex-least optimum over subsets ordered by size, then colex.
    pub witness: SetFamily,
}

/// Largest family of subsets of `[n]` with no weak (or induced) copy of `p`.
pub fn la_exact(n: usize, p: &Poset, induced: bool, opts: LaOptions) -> Result<LaResult> {
    let cap = if opts.cap_override {
        OVERRIDE_N_CAP
    } else {
        opts.n_cap.min(OVERRIDE_N_CAP)
    };
    if n > cap {
        return Err(Error::CapExceeded {
            what: "ground set size for exhaustive La search",
            got: n as u128,
            cap: cap as u128,
        });
    }
    if p.is_empty() {
        return Err(Error::InvalidPoset("forbidden poset is empty".into()));
    }
    let universe = SetFamily::power_set(n)?;
    let mut dfs = Dfs {
        p,
        induced,
        universe: universe.masks(),
        cur: Vec::with_capacity(universe.len()),
        best: Vec::new(),
        found: false,
    };
    dfs.go(0);
    let witness = SetFamily::new(n, dfs.best)?;
    if family_contains(&witness, p, induced) {
        return Err(Error::InvalidArgument(format!(
            "internal error: La witness {:?} contains the forbidden poset",
            witness.members()
        )));
    }
    Ok(LaResult {
        value: witness.len(),
        witness,
    })
}

struct Dfs<'a> {
    p: &'a Poset,
    induced: bool,
    universe: &'a [u64],
    cur: Vec<u64>,
    best: Vec<u64>,
    found: bool,
}

impl Dfs<'_> {
    fn go(&mut self, i: usize) {
        if i == self.universe.len() {
            if !self.found || self.cur.len() > self.best.len() {
                self.best = self.cur.clone();
                self.found = true;
            }
            return;
        }
        if self.found && self.cur.len() + self.universe.len() - i <= self.best.len() {
            return;
        }
        self.cur.push(self.universe[i]);
        let last = self.cur.len() - 1;
        if find_embedding(self.p, &Inclusion(&self.cur), self.induced, Some(last)).is_none() {
            self.go(i + 1);
        }
        self.cur.pop();
        self.go(i + 1);
    }
}
