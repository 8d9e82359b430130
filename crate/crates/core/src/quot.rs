//! Torus-fixed points of Quot schemes of multiplicity-free box modules.
//!
//! For a multiplicity-free module a homogeneous submodule is a set of boxes
//! closed under outgoing edges, so a length-`n` quotient is an order ideal of
//! size `n` in the edge poset. Fixed points are isolated and the Euler
//! characteristic of `Quot(M, n)` is their number.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{box_module_of_ideal, direct_sum, BoxModule, ModuleBox, MonomialIdeal};
use crate::series::TruncSeries;

/// A fixed quotient `M -> Q`, recorded by the boxes of `Q` in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuotFixedPoint {
    pub boxes: Vec<ModuleBox>,
}

impl QuotFixedPoint {
    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// Whether the boxes form an order ideal of `m` (closed under predecessors).
    pub fn is_order_ideal_of(&self, m: &BoxModule) -> bool {
        let Some(idx) = self.boxes.iter().map(|b| m.index_of(b)).collect::<Option<Vec<usize>>>() else {
            return false;
        };
        let mut inside = vec![false; m.len()];
        for &i in &idx {
            inside[i] = true;
        }
        idx.iter().all(|&i| m.predecessors(i).iter().all(|&p| inside[p]))
    }
}

fn check_enumerable(m: &BoxModule, n: usize) -> Result<()> {
    if let Some((weight, color)) = m.first_multiplicity() {
        return Err(Error::NotMultiplicityFree { weight, color });
    }
    if n > m.length_bound() && !m.is_finite() {
        return Err(Error::TruncationTooSmall(format!(
            "box set keeps down-sets up to {} but length {n} was requested",
            m.length_bound()
        )));
    }
    Ok(())
}

/// Reverse-search state: the current ideal with counters for addability
/// (missing predecessors) and maximality (successors inside).
struct Search<'a> {
    m: &'a BoxModule,
    inside: Vec<bool>,
    missing_preds: Vec<usize>,
    succ_inside: Vec<usize>,
    members: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(m: &'a BoxModule) -> Self {
        Search {
            m,
            inside: vec![false; m.len()],
            missing_preds: (0..m.len()).map(|b| m.predecessors(b).len()).collect(),
            succ_inside: vec![0; m.len()],
            members: Vec::new(),
        }
    }

    fn push(&mut self, b: usize) {
        self.inside[b] = true;
        self.members.push(b);
        for &s in self.m.successors(b) {
            self.missing_preds[s] -= 1;
        }
        for &p in self.m.predecessors(b) {
            self.succ_inside[p] += 1;
        }
    }

    fn pop(&mut self) {
        let b = self.members.pop().expect("nonempty ideal");
        self.inside[b] = false;
        for &s in self.m.successors(b) {
            self.missing_preds[s] += 1;
        }
        for &p in self.m.predecessors(b) {
            self.succ_inside[p] -= 1;
        }
    }

    /// Boxes `a` such that adding `a` gives an ideal whose largest maximal
    /// element is `a`; each ideal then has exactly one parent.
    fn children(&self) -> Vec<usize> {
        let largest_free_max = |a: usize| {
            self.members
                .iter()
                .filter(|&&x| self.succ_inside[x] == 0 && !self.m.predecessors(a).contains(&x))
                .max()
                .copied()
        };
        (0..self.m.len())
            .filter(|&a| !self.inside[a] && self.missing_preds[a] == 0)
            .filter(|&a| largest_free_max(a).is_none_or(|x| x < a))
            .collect()
    }

    fn walk(&mut self, target: usize, out: &mut Vec<QuotFixedPoint>) {
        if self.members.len() == target {
            let mut boxes: Vec<ModuleBox> = self.members.iter().map(|&i| self.m.boxes()[i]).collect();
            boxes.sort();
            out.push(QuotFixedPoint { boxes });
            return;
        }
        for a in self.children() {
            self.push(a);
            self.walk(target, out);
            self.pop();
        }
    }
}

/// All order ideals of size `n`, sorted canonically.
pub fn enumerate_quotients(m: &BoxModule, n: usize) -> Result<Vec<QuotFixedPoint>> {
    enumerate_quotients_with_workers(m, n, 1)
}

/// As [`enumerate_quotients`], splitting the first level of the search over
/// `workers` threads. The output does not depend on `workers`.
pub fn enumerate_quotients_with_workers(m: &BoxModule, n: usize, workers: usize) -> Result<Vec<QuotFixedPoint>> {
    check_enumerable(m, n)?;
    if n == 0 {
        return Ok(vec![QuotFixedPoint { boxes: Vec::new() }]);
    }
    let roots = Search::new(m).children();
    let workers = workers.max(1).min(roots.len().max(1));
    let mut out: Vec<QuotFixedPoint> = if workers == 1 {
        let mut out = Vec::new();
        let mut s = Search::new(m);
        for &r in &roots {
            s.push(r);
            s.walk(n, &mut out);
            s.pop();
        }
        out
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let roots = &roots;
                    scope.spawn(move || {
                        let mut out = Vec::new();
                        let mut s = Search::new(m);
                        for &r in roots.iter().skip(w).step_by(workers) {
                            s.push(r);
                            s.walk(n, &mut out);
                            s.pop();
                        }
                        out
                    })
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    out.sort();
    Ok(out)
}

/// Counts order ideals of each size `0..=budget` in a sub-poset.
///
/// Uses `f(P) = f(P - up(m)) + q f(P - m)` for a minimal element `m`,
/// memoized on the remaining box set after discarding boxes whose down-set
/// no longer fits in the budget.
struct IdealCounter<'a> {
    m: &'a BoxModule,
    memo: HashMap<(Vec<u64>, usize), Vec<i128>>,
}

fn bit(set: &[u64], i: usize) -> bool {
    set[i / 64] >> (i % 64) & 1 == 1
}

fn clear(set: &mut [u64], i: usize) {
    set[i / 64] &= !(1 << (i % 64));
}

impl IdealCounter<'_> {
    /// Removes boxes whose down-set within `set` exceeds `budget`, together
    /// with everything above them. Absent predecessors of a remaining box
    /// were already included, since an excluded box takes its up-set along.
    fn prune(&self, set: &mut [u64], budget: usize) {
        for i in 0..self.m.len() {
            if !bit(set, i) {
                continue;
            }
            let mut below = std::collections::BTreeSet::new();
            let mut stack = vec![i];
            while let Some(u) = stack.pop() {
                if below.insert(u) {
                    stack.extend(self.m.predecessors(u).iter().filter(|&&p| bit(set, p)));
                }
                if below.len() > budget {
                    break;
                }
            }
            if below.len() > budget {
                self.remove_up(set, i);
            }
        }
    }

    fn remove_up(&self, set: &mut [u64], from: usize) {
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            if bit(set, u) {
                clear(set, u);
                stack.extend(self.m.successors(u));
            }
        }
    }

    fn count(&mut self, mut set: Vec<u64>, budget: usize) -> Vec<i128> {
        self.prune(&mut set, budget);
        let key = (set, budget);
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let set = &key.0;
        let mut result = vec![0i128; budget + 1];
        result[0] = 1;
        let first = (0..self.m.len()).find(|&i| bit(set, i));
        if let Some(minimal) = first {
            // the first remaining box in a linear extension is minimal
            let mut without_up = set.clone();
            self.remove_up(&mut without_up, minimal);
            let excluded = self.count(without_up, budget);
            let mut with_min = set.clone();
            clear(&mut with_min, minimal);
            let included = if budget >= 1 { self.count(with_min, budget - 1) } else { vec![0] };
            result = excluded;
            for (k, c) in included.iter().enumerate() {
                if k < budget {
                    result[k + 1] += c;
                }
            }
        }
        self.memo.insert(key, result.clone());
        result
    }
}

/// `sum_{n <= order} #Quot(M, n)^T q^n`.
pub fn quot_series(m: &BoxModule, order: usize) -> Result<TruncSeries> {
    let cap = if m.is_finite() { order.min(m.len()) } else { order };
    check_enumerable(m, cap)?;
    let words = m.len().div_ceil(64).max(1);
    let mut full = vec![0u64; words];
    for i in 0..m.len() {
        full[i / 64] |= 1 << (i % 64);
    }
    let mut counter = IdealCounter { m, memo: HashMap::new() };
    let counts = counter.count(full, cap);
    Ok(TruncSeries::from_coeffs(counts, order as i64))
}

/// Quot series of `A^r` with one color per summand.
pub fn colored_quot_series(rank: usize, order: usize) -> Result<TruncSeries> {
    if rank == 0 {
        return Err(Error::InvalidArgument("rank must be at least 1".into()));
    }
    let bound = order.max(1);
    let a = box_module_of_ideal(&MonomialIdeal::unit_ideal(), bound)?;
    let m = direct_sum(&vec![a; rank]);
    quot_series(&m, order)
}
