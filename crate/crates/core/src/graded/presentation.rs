//! Complexes of fine-graded free modules with signed-monomial differentials.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::monomial::{as_weight, format_monomial, lcm, Exponent, MonomialIdeal, Weight};
use crate::error::{Error, Result};

/// A matrix entry `sign * x^exp` with `sign = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignedMonomial {
    pub sign: i8,
    pub exp: Exponent,
}

impl SignedMonomial {
    pub fn new(sign: i8, exp: Exponent) -> Self {
        SignedMonomial { sign, exp }
    }
}

/// Matrix of a map `F_i -> F_{i-1}`: one row per generator of `F_{i-1}`,
/// one column per generator of `F_i`.
pub type MonomialMatrix = Vec<Vec<Option<SignedMonomial>>>;

/// A free module `⊕ A(-d_k)` with one color tag per generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeModule {
    pub degrees: Vec<Weight>,
    pub colors: Vec<u32>,
}

impl FreeModule {
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }
}

/// A finite complex `F_k -> ... -> F_1 -> F_0`.
///
/// The module it describes is `coker(F_{p+1} -> F_p)` for `p =
/// module_position`; the part of the complex from position `p` upward is a
/// free resolution of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialPresentation {
    modules: Vec<FreeModule>,
    /// `differentials[i - 1]` is `d_i : F_i -> F_{i-1}`.
    differentials: Vec<MonomialMatrix>,
    module_position: usize,
}

impl MonomialPresentation {
    /// Validates shapes, sign range, homogeneity (weights and colors) and `d^2 = 0`.
    pub fn new(
        modules: Vec<FreeModule>,
        differentials: Vec<MonomialMatrix>,
        module_position: usize,
    ) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::Invariant("complex has no free modules".into()));
        }
        if differentials.len() + 1 != modules.len() {
            return Err(Error::Invariant(format!(
                "{} free modules need {} differentials, got {}",
                modules.len(),
                modules.len() - 1,
                differentials.len()
            )));
        }
        if module_position >= modules.len() {
            return Err(Error::Invariant(format!(
                "module position {module_position} outside complex of length {}",
                modules.len()
            )));
        }
        for (i, f) in modules.iter().enumerate() {
            if f.colors.len() != f.degrees.len() {
                return Err(Error::Invariant(format!("F_{i}: colors and degrees differ in length")));
            }
        }
        for (idx, d) in differentials.iter().enumerate() {
            let i = idx + 1;
            let (src, tgt) = (&modules[i], &modules[i - 1]);
            if d.len() != tgt.rank() || d.iter().any(|row| row.len() != src.rank()) {
                return Err(Error::Invariant(format!(
                    "d_{i} must be a {}x{} matrix",
                    tgt.rank(),
                    src.rank()
                )));
            }
            for (j, row) in d.iter().enumerate() {
                for (k, entry) in row.iter().enumerate() {
                    let Some(e) = entry else { continue };
                    if e.sign != 1 && e.sign != -1 {
                        return Err(Error::Invariant(format!("d_{i}[{j}][{k}]: sign must be +1 or -1")));
                    }
                    let shifted = add_weight(&tgt.degrees[j], &as_weight(&e.exp));
                    if shifted != src.degrees[k] {
                        return Err(Error::Invariant(format!(
                            "d_{i}[{j}][{k}] = {} is not homogeneous: {:?} + {:?} != {:?}",
                            format_monomial(&e.exp),
                            tgt.degrees[j],
                            e.exp,
                            src.degrees[k]
                        )));
                    }
                    if tgt.colors[j] != src.colors[k] {
                        return Err(Error::Invariant(format!(
                            "d_{i}[{j}][{k}] joins colors {} and {}",
                            tgt.colors[j], src.colors[k]
                        )));
                    }
                }
            }
        }
        let p = MonomialPresentation { modules, differentials, module_position };
        if let Some((i, j, l)) = p.first_nonzero_square() {
            return Err(Error::Invariant(format!("d_{}·d_{} != 0 at entry [{j}][{l}]", i - 1, i)));
        }
        Ok(p)
    }

    /// Builds a complex from bare matrices, inferring generator degrees from
    /// homogeneity and colors from connected components of the entry graph.
    ///
    /// `ranks[0]` is the rank of `F_0`; it is needed when `d_1` has no rows
    /// to read it from, and checked otherwise.
    pub fn from_matrices(
        rank0: usize,
        differentials: Vec<MonomialMatrix>,
        module_position: usize,
        degrees: Option<Vec<Vec<Weight>>>,
        colors: Option<Vec<Vec<u32>>>,
    ) -> Result<Self> {
        let mut ranks = vec![rank0];
        for (idx, d) in differentials.iter().enumerate() {
            if d.len() != ranks[idx] {
                return Err(Error::Invariant(format!(
                    "d_{} has {} rows but F_{} has rank {}",
                    idx + 1,
                    d.len(),
                    idx,
                    ranks[idx]
                )));
            }
            let cols = d.first().map_or(0, |r| r.len());
            if d.iter().any(|r| r.len() != cols) {
                return Err(Error::Invariant(format!("d_{} has ragged rows", idx + 1)));
            }
            ranks.push(cols);
        }
        // a differential with zero rows leaves the next rank undetermined
        for (idx, d) in differentials.iter().enumerate() {
            if d.is_empty() && ranks[idx + 1] == 0 {
                if let Some(deg) = degrees.as_ref().and_then(|d| d.get(idx + 1)) {
                    ranks[idx + 1] = deg.len();
                }
            }
        }
        let nodes: Vec<(usize, usize)> =
            ranks.iter().enumerate().flat_map(|(i, &r)| (0..r).map(move |k| (i, k))).collect();
        let node_index: BTreeMap<(usize, usize), usize> =
            nodes.iter().enumerate().map(|(n, &ik)| (ik, n)).collect();
        // adjacency with weight offsets: deg(src) = deg(tgt) + exp
        let mut adj: Vec<Vec<(usize, Weight)>> = vec![Vec::new(); nodes.len()];
        for (idx, d) in differentials.iter().enumerate() {
            let i = idx + 1;
            for (j, row) in d.iter().enumerate() {
                for (k, entry) in row.iter().enumerate() {
                    if let Some(e) = entry {
                        let t = node_index[&(i - 1, j)];
                        let s = node_index[&(i, k)];
                        let w = as_weight(&e.exp);
                        adj[t].push((s, w));
                        adj[s].push((t, [-w[0], -w[1], -w[2]]));
                    }
                }
            }
        }
        let mut component = vec![usize::MAX; nodes.len()];
        let mut inferred = vec![[0i64; 3]; nodes.len()];
        let mut ncomp = 0;
        for start in 0..nodes.len() {
            if component[start] != usize::MAX {
                continue;
            }
            let mut members = vec![start];
            component[start] = ncomp;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &(v, off) in &adj[u] {
                    let want = add_weight(&inferred[u], &off);
                    if component[v] == usize::MAX {
                        component[v] = ncomp;
                        inferred[v] = want;
                        members.push(v);
                        queue.push_back(v);
                    } else if inferred[v] != want {
                        let (i, k) = nodes[v];
                        return Err(Error::Invariant(format!(
                            "no homogeneous grading exists: generator {k} of F_{i} needs two degrees"
                        )));
                    }
                }
            }
            // shift each component to the nonnegative orthant
            for c in 0..3 {
                let lo = members.iter().map(|&m| inferred[m][c]).min().unwrap();
                for &m in &members {
                    inferred[m][c] -= lo;
                }
            }
            ncomp += 1;
        }
        let modules = ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let degs = match &degrees {
                    Some(d) => d.get(i).cloned().ok_or_else(|| {
                        Error::Invariant(format!("degrees missing for F_{i}"))
                    })?,
                    None => (0..r).map(|k| inferred[node_index[&(i, k)]]).collect(),
                };
                let cols = match &colors {
                    Some(c) => c.get(i).cloned().ok_or_else(|| {
                        Error::Invariant(format!("colors missing for F_{i}"))
                    })?,
                    None => (0..r).map(|k| component[node_index[&(i, k)]] as u32).collect(),
                };
                if degs.len() != r || cols.len() != r {
                    return Err(Error::Invariant(format!(
                        "F_{i} has rank {r} but {} degrees and {} colors were given",
                        degs.len(),
                        cols.len()
                    )));
                }
                Ok(FreeModule { degrees: degs, colors: cols })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut p = Self::new(modules, differentials, module_position)?;
        if colors.is_none() {
            p.renumber_colors();
        }
        Ok(p)
    }

    /// Presentation of `coker(d : F_1 -> F_0)` from the matrix of `d`.
    pub fn cokernel(matrix: MonomialMatrix, rank0: usize) -> Result<Self> {
        Self::from_matrices(rank0, vec![matrix], 0, None, None)
    }

    /// Free module of rank `r`, one color per summand.
    pub fn free(rank: usize) -> Self {
        let f = FreeModule { degrees: vec![[0; 3]; rank], colors: (0..rank as u32).collect() };
        MonomialPresentation { modules: vec![f], differentials: Vec::new(), module_position: 0 }
    }

    pub fn modules(&self) -> &[FreeModule] {
        &self.modules
    }

    /// `d_i : F_i -> F_{i-1}` for `1 <= i <= length`.
    pub fn differential(&self, i: usize) -> &MonomialMatrix {
        &self.differentials[i - 1]
    }

    pub fn length(&self) -> usize {
        self.differentials.len()
    }

    pub fn module_position(&self) -> usize {
        self.module_position
    }

    /// Euler characteristic of the resolution part: `sum (-1)^j rank F_{p+j}`.
    pub fn rank(&self) -> i64 {
        self.modules[self.module_position..]
            .iter()
            .enumerate()
            .map(|(j, f)| if j % 2 == 0 { f.rank() as i64 } else { -(f.rank() as i64) })
            .sum()
    }

    /// Number of distinct color tags (colors are numbered from 0).
    pub fn color_count(&self) -> u32 {
        self.modules
            .iter()
            .flat_map(|f| f.colors.iter())
            .max()
            .map_or(0, |&c| c + 1)
    }

    /// Drops the free modules below the module position so it becomes 0.
    pub fn normalized(&self) -> Self {
        let p = self.module_position;
        MonomialPresentation {
            modules: self.modules[p..].to_vec(),
            differentials: self.differentials[p..].to_vec(),
            module_position: 0,
        }
    }

    /// Block direct sum; summand `i` gets colors shifted past those of summands `< i`.
    pub fn direct_sum(parts: &[MonomialPresentation]) -> Self {
        let parts: Vec<MonomialPresentation> = parts.iter().map(|p| p.normalized()).collect();
        let len = parts.iter().map(|p| p.modules.len()).max().unwrap_or(1);
        let mut modules = vec![FreeModule { degrees: Vec::new(), colors: Vec::new() }; len];
        let mut offsets = Vec::new();
        let mut color_offset = 0;
        for p in &parts {
            let mut off = Vec::new();
            for (i, m) in modules.iter_mut().enumerate() {
                off.push(m.rank());
                if let Some(f) = p.modules.get(i) {
                    m.degrees.extend(&f.degrees);
                    m.colors.extend(f.colors.iter().map(|c| c + color_offset));
                }
            }
            offsets.push(off);
            color_offset += p.color_count();
        }
        let mut differentials = Vec::new();
        for i in 1..len {
            let mut d = vec![vec![None; modules[i].rank()]; modules[i - 1].rank()];
            for (p, off) in parts.iter().zip(&offsets) {
                if i < p.modules.len() {
                    for (j, row) in p.differential(i).iter().enumerate() {
                        for (k, e) in row.iter().enumerate() {
                            d[off[i - 1] + j][off[i] + k] = *e;
                        }
                    }
                }
            }
            differentials.push(d);
        }
        MonomialPresentation { modules, differentials, module_position: 0 }
    }

    /// Symbolic check of `d_{i-1} d_i = 0`; returns the first offending entry.
    fn first_nonzero_square(&self) -> Option<(usize, usize, usize)> {
        for i in 2..=self.length() {
            let (a, b) = (self.differential(i - 1), self.differential(i));
            for (j, row) in a.iter().enumerate() {
                for l in 0..self.modules[i].rank() {
                    let mut sums: BTreeMap<Exponent, i64> = BTreeMap::new();
                    for (k, ea) in row.iter().enumerate() {
                        if let (Some(ea), Some(eb)) = (ea, &b[k][l]) {
                            let e = [ea.exp[0] + eb.exp[0], ea.exp[1] + eb.exp[1], ea.exp[2] + eb.exp[2]];
                            *sums.entry(e).or_default() += (ea.sign * eb.sign) as i64;
                        }
                    }
                    if sums.values().any(|&s| s != 0) {
                        return Some((i, j, l));
                    }
                }
            }
        }
        None
    }

    /// Whether every composite of consecutive differentials vanishes.
    pub fn squares_to_zero(&self) -> bool {
        self.first_nonzero_square().is_none()
    }

    /// Renumbers colors to `0, 1, ...` in order of first appearance.
    fn renumber_colors(&mut self) {
        let mut map = BTreeMap::new();
        for f in &self.modules {
            for &c in &f.colors {
                let next = map.len() as u32;
                map.entry(c).or_insert(next);
            }
        }
        for f in &mut self.modules {
            for c in &mut f.colors {
                *c = map[c];
            }
        }
    }
}

fn add_weight(a: &Weight, b: &Weight) -> Weight {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Taylor complex of the minimal generators: a free resolution of `A/I`.
///
/// `T_k` has one generator per `k`-subset `S` of the generators, in degree
/// `lcm(S)`, and `d(e_S) = sum_t (-1)^t (lcm S / lcm(S - s_t)) e_{S - s_t}`.
pub fn resolve_ideal(ideal: &MonomialIdeal) -> Result<MonomialPresentation> {
    if ideal.is_zero() {
        return Err(Error::InvalidArgument("cannot resolve the zero ideal".into()));
    }
    let gens = ideal.generators();
    let s = gens.len();
    if s > 16 {
        return Err(Error::InvalidArgument(format!("Taylor complex of {s} generators is too large")));
    }
    // subsets by size, each in increasing bitmask order
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); s + 1];
    for mask in 0u32..(1 << s) {
        by_size[mask.count_ones() as usize].push(mask);
    }
    let lcm_of = |mask: u32| -> Exponent {
        (0..s).filter(|t| mask & (1 << t) != 0).fold([0; 3], |acc, t| lcm(&acc, &gens[t]))
    };
    let modules: Vec<FreeModule> = by_size
        .iter()
        .map(|subsets| FreeModule {
            degrees: subsets.iter().map(|&m| as_weight(&lcm_of(m))).collect(),
            colors: vec![0; subsets.len()],
        })
        .collect();
    let mut differentials = Vec::new();
    for k in 1..=s {
        let rows = &by_size[k - 1];
        let cols = &by_size[k];
        let row_index: BTreeMap<u32, usize> = rows.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut d = vec![vec![None; cols.len()]; rows.len()];
        for (c, &mask) in cols.iter().enumerate() {
            let top = lcm_of(mask);
            let members: Vec<usize> = (0..s).filter(|t| mask & (1 << t) != 0).collect();
            for (pos, &t) in members.iter().enumerate() {
                let face = mask & !(1 << t);
                let low = lcm_of(face);
                let exp = [top[0] - low[0], top[1] - low[1], top[2] - low[2]];
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                d[row_index[&face]][c] = Some(SignedMonomial::new(sign, exp));
            }
        }
        differentials.push(d);
    }
    MonomialPresentation::new(modules, differentials, 0)
}

/// Free resolution of the ideal itself (the Taylor complex with `A` dropped).
pub fn ideal_presentation(ideal: &MonomialIdeal) -> Result<MonomialPresentation> {
    let mut p = resolve_ideal(ideal)?;
    p.module_position = 1;
    Ok(p.normalized())
}
