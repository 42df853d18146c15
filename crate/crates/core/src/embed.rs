//! Backtracking search for copies of a poset inside a strict order.

use crate::poset::Poset;

/// A finite strict order the search can embed into.
pub trait StrictOrder {
    fn size(&self) -> usize;
    fn less(&self, i: usize, j: usize) -> bool;
}

/// Finds an injection `alpha` from `p` into `target` with
/// `x < y  =>  alpha(x) < alpha(y)` (weak) or `<=>` (induced).
///
/// With `anchor`, some element of `p` must map onto that target index.
pub fn find_embedding<T: StrictOrder + ?Sized>(
    p: &Poset,
    target: &T,
    induced: bool,
    anchor: Option<usize>,
) -> Option<Vec<usize>> {
    let k = p.len();
    let n = target.size();
    if k > n {
        return None;
    }
    if k == 0 {
        return anchor.is_none().then(Vec::new);
    }
    // Targets need enough room below and above for the pattern's down/up sets.
    let down_t: Vec<usize> = (0..n).map(|j| (0..n).filter(|&i| target.less(i, j)).count()).collect();
    let up_t: Vec<usize> = (0..n).map(|j| (0..n).filter(|&i| target.less(j, i)).count()).collect();
    let down_p: Vec<usize> = (0..k).map(|x| (0..k).filter(|&y| p.lt(y, x)).count()).collect();
    let up_p: Vec<usize> = (0..k).map(|x| (0..k).filter(|&y| p.lt(x, y)).count()).collect();

    let mut search = Search {
        p,
        target,
        induced,
        order: Vec::with_capacity(k),
        assign: vec![usize::MAX; k],
        used: vec![false; n],
        down_t,
        up_t,
        down_p,
        up_p,
    };
    match anchor {
        None => {
            search.order = connected_order(p, None);
            search.run(0).then(|| search.assign.clone())
        }
        Some(t) => {
            for x in 0..k {
                if !search.admissible(x, t) {
                    continue;
                }
                search.order = connected_order(p, Some(x));
                search.assign[x] = t;
                search.used[t] = true;
                if search.run(1) {
                    return Some(search.assign.clone());
                }
                search.assign[x] = usize::MAX;
                search.used[t] = false;
            }
            None
        }
    }
}

/// Visit order that keeps each new element related to earlier ones where
/// possible, so constraints bite early.
fn connected_order(p: &Poset, first: Option<usize>) -> Vec<usize> {
    let k = p.len();
    let degree = |x: usize| (0..k).filter(|&y| p.comparable(x, y)).count();
    let mut order = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    if let Some(x) = first {
        order.push(x);
        placed[x] = true;
    }
    while order.len() < k {
        let next = (0..k)
            .filter(|&x| !placed[x])
            .max_by_key(|&x| {
                let links = order.iter().filter(|&&y| p.comparable(x, y)).count();
                (links, degree(x), std::cmp::Reverse(x))
            })
            .expect("unplaced element");
        placed[next] = true;
        order.push(next);
    }
    order
}

struct Search<'a, T: ?Sized> {
    p: &'a Poset,
    target: &'a T,
    induced: bool,
    order: Vec<usize>,
    assign: Vec<usize>,
    used: Vec<bool>,
    down_t: Vec<usize>,
    up_t: Vec<usize>,
    down_p: Vec<usize>,
    up_p: Vec<usize>,
}

impl<T: StrictOrder + ?Sized> Search<'_, T> {
    fn admissible(&self, x: usize, t: usize) -> bool {
        if self.used[t] || self.down_t[t] < self.down_p[x] || self.up_t[t] < self.up_p[x] {
            return false;
        }
        for (y, &ty) in self.assign.iter().enumerate() {
            if ty == usize::MAX || y == x {
                continue;
            }
            let (below, above) = (self.p.lt(y, x), self.p.lt(x, y));
            if below && !self.target.less(ty, t) || above && !self.target.less(t, ty) {
                return false;
            }
            if self.induced
                && !below
                && !above
                && (self.target.less(ty, t) || self.target.less(t, ty))
            {
                return false;
            }
        }
        true
    }

    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let x = self.order[depth];
        for t in 0..self.target.size() {
            if !self.admissible(x, t) {
                continue;
            }
            self.assign[x] = t;
            self.used[t] = true;
            if self.run(depth + 1) {
                return true;
            }
            self.used[t] = false;
            self.assign[x] = usize::MAX;
        }
        false
    }
}

impl StrictOrder for Poset {
    fn size(&self) -> usize {
        self.len()
    }

    fn less(&self, i: usize, j: usize) -> bool {
        self.lt(i, j)
    }
}
