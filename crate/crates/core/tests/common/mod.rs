#![allow(dead_code)]

use std::collections::BTreeSet;

use quotcount::description::{fixture, Module};
use quotcount::graded::{direct_sum, BoxModule, ModuleBox, Weight};
use rand::{rngs::StdRng, RngExt};

pub fn module(name: &str) -> Module {
    fixture(name).unwrap().resolve().unwrap()
}

fn addable(cells: &BTreeSet<Weight>) -> Vec<Weight> {
    let mut out = BTreeSet::new();
    for c in cells {
        for v in 0..3 {
            let mut t = *c;
            t[v] += 1;
            let below_ok = (0..3).all(|u| {
                let mut s = t;
                s[u] -= 1;
                s[u] < 0 || cells.contains(&s)
            });
            if !cells.contains(&t) && below_ok {
                out.insert(t);
            }
        }
    }
    out.into_iter().collect()
}

/// A random staircase of `size` cells (a finite quotient `A/J`).
pub fn random_staircase(rng: &mut StdRng, size: usize) -> BTreeSet<Weight> {
    let mut cells = BTreeSet::from([[0, 0, 0]]);
    while cells.len() < size {
        let options = addable(&cells);
        cells.insert(options[rng.random_range(0..options.len())]);
    }
    cells
}

/// A random finite monomial module `I/J` of length between 1 and `max_len`,
/// on one or two colors.
pub fn random_finite_module(rng: &mut StdRng, max_len: usize) -> BoxModule {
    let colors = if max_len >= 2 && rng.random_range(0..3) == 0 { 2 } else { 1 };
    let mut parts = Vec::new();
    let mut left = max_len;
    for c in 0..colors {
        let len = if c + 1 == colors { rng.random_range(1..=left) } else { rng.random_range(1..left) };
        left -= len;
        // staircase S, then drop an order ideal T so that S - T has `len` cells
        let cut = rng.random_range(0..=2);
        let s = random_staircase(rng, len + cut);
        let mut t: BTreeSet<Weight> = BTreeSet::new();
        while t.len() < cut {
            let options: Vec<Weight> = s
                .iter()
                .copied()
                .filter(|w| !t.contains(w))
                .filter(|w| {
                    (0..3).all(|u| {
                        let mut b = *w;
                        b[u] -= 1;
                        b[u] < 0 || t.contains(&b)
                    })
                })
                .collect();
            t.insert(options[rng.random_range(0..options.len())]);
        }
        let boxes: Vec<ModuleBox> = s.difference(&t).map(|&w| ModuleBox::new(w, 0)).collect();
        parts.push(BoxModule::from_boxes_full_edges(boxes).unwrap());
    }
    direct_sum(&parts)
}
