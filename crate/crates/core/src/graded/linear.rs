//! Finite windows of fine-graded modules over a field, with explicit bases
//! and action matrices.

use std::collections::HashMap;

use super::boxes::{BoxModule, Edge, ModuleBox, Truncation};
use super::monomial::Weight;
use crate::linalg::{Field, Subquotient};

/// Position of a weight space: weight and color.
pub type Position = (Weight, u32);

/// Weight spaces on a finite set of positions, with the action of each
/// variable between positions that are both present.
#[derive(Clone, Debug)]
pub struct LinearModule<E> {
    positions: Vec<Position>,
    dims: Vec<usize>,
    index: HashMap<Position, usize>,
    /// `actions[p][v] = (q, M)`: `M` (rows: dim q, cols: dim p) maps position `p` to `q`.
    actions: Vec<[Option<(usize, Vec<Vec<E>>)>; 3]>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> LinearModule<E> {
    /// Assembles a module; `positions` need not be sorted and zero-dimensional
    /// positions are dropped.
    pub fn new(
        positions: Vec<Position>,
        dims: Vec<usize>,
        mut action: impl FnMut(usize, usize, usize) -> Vec<Vec<E>>,
    ) -> Self {
        let mut order: Vec<usize> = (0..positions.len()).filter(|&i| dims[i] > 0).collect();
        order.sort_by_key(|&i| positions[i]);
        let new_positions: Vec<Position> = order.iter().map(|&i| positions[i]).collect();
        let new_dims: Vec<usize> = order.iter().map(|&i| dims[i]).collect();
        let index: HashMap<Position, usize> =
            new_positions.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let actions = order
            .iter()
            .map(|&old| {
                let (w, c) = positions[old];
                std::array::from_fn(|var| {
                    let mut t = w;
                    t[var] += 1;
                    index.get(&(t, c)).map(|&q| {
                        let old_target = order[q];
                        (q, action(old, var, old_target))
                    })
                })
            })
            .collect();
        LinearModule { positions: new_positions, dims: new_dims, index, actions }
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn dim(&self, p: usize) -> usize {
        self.dims[p]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn position_index(&self, p: &Position) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Action of variable `var` out of position `p`, if its target is present.
    pub fn action(&self, p: usize, var: usize) -> Option<(usize, &[Vec<E>])> {
        self.actions[p][var].as_ref().map(|(q, m)| (*q, m.as_slice()))
    }

    /// Positions with an action into `p`: `(source, var)`.
    pub fn incoming(&self, p: usize) -> Vec<(usize, usize)> {
        let (w, c) = self.positions[p];
        (0..3)
            .filter_map(|var| {
                let mut s = w;
                s[var] -= 1;
                self.index.get(&(s, c)).map(|&q| (q, var))
            })
            .collect()
    }

    /// Box model: one box per basis vector, edges on nonzero matrix entries.
    pub fn to_box_module<F: Field<Elem = E>>(&self, field: &F, truncation: Truncation) -> BoxModule {
        let mut boxes = Vec::new();
        let mut first = Vec::new();
        for (p, &(w, c)) in self.positions.iter().enumerate() {
            first.push(boxes.len());
            for s in 0..self.dims[p] {
                boxes.push(ModuleBox { weight: w, color: c, slot: s as u32 });
            }
        }
        let mut edges = Vec::new();
        for p in 0..self.positions.len() {
            for var in 0..3 {
                if let Some((q, m)) = self.action(p, var) {
                    for (t, row) in m.iter().enumerate() {
                        for (s, v) in row.iter().enumerate() {
                            if !field.is_zero(v) {
                                edges.push(Edge { var, from: first[p] + s, to: first[q] + t });
                            }
                        }
                    }
                }
            }
        }
        BoxModule::new(boxes, edges, truncation).expect("weight spaces give a valid box module")
    }
}

/// The subquotient at one position of a complex of free modules: the
/// relevant generator indices and the cycles/boundaries among them.
pub struct Slice<E> {
    pub basis: Vec<usize>,
    pub space: Subquotient<E>,
}

/// Builds a module over every weight in the box `[lo, hi]` and every color in
/// `colors`, from slices whose generator sets grow along each variable so
/// that the action is the inclusion of generators.
pub fn module_from_slices<F: Field>(
    field: &F,
    lo: Weight,
    hi: Weight,
    colors: &[u32],
    mut slice: impl FnMut(Weight, u32) -> Slice<F::Elem>,
) -> LinearModule<F::Elem> {
    let mut positions = Vec::new();
    let mut slices = Vec::new();
    for a in lo[0]..=hi[0] {
        for b in lo[1]..=hi[1] {
            for c in lo[2]..=hi[2] {
                for &col in colors {
                    positions.push(([a, b, c], col));
                    slices.push(slice([a, b, c], col));
                }
            }
        }
    }
    let dims: Vec<usize> = slices.iter().map(|s| s.space.dim()).collect();
    LinearModule::new(positions, dims, |src, _var, tgt| {
        let (s, t) = (&slices[src], &slices[tgt]);
        let mut columns = Vec::new();
        for rep in s.space.basis_vectors() {
            let mut v = vec![field.zero(); t.basis.len()];
            for (i, g) in s.basis.iter().enumerate() {
                let j = t.basis.binary_search(g).expect("generator sets grow along the action");
                v[j] = rep[i].clone();
            }
            columns.push(t.space.coords(field, &v));
        }
        // transpose: rows index target basis
        (0..t.space.dim())
            .map(|r| columns.iter().map(|col| col[r].clone()).collect())
            .collect()
    })
}
