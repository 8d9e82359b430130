//! Fine-graded modules as posets of boxes joined by variable-labelled edges.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::monomial::{as_weight, divides, Exponent, MonomialIdeal, Weight, VARIABLES};
use crate::error::{Error, Result};

/// One basis vector of a weight space: weight, color and a slot index that
/// separates basis vectors sharing the same weight and color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModuleBox {
    pub weight: Weight,
    pub color: u32,
    pub slot: u32,
}

impl ModuleBox {
    pub fn new(weight: Weight, color: u32) -> Self {
        ModuleBox { weight, color, slot: 0 }
    }
}

/// Whether a box set is a whole module or a cut-off piece of an infinite one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    /// All boxes of a finite-length module.
    Finite,
    /// Exactly the boxes whose down-set has at most this many elements.
    DownSetBound(usize),
}

/// A directed edge `from -> to` for multiplication by a variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub var: usize,
    pub from: usize,
    pub to: usize,
}

/// A fine-graded module recorded by the support of its action maps.
///
/// Boxes are kept sorted (weight lexicographic, then color, then slot),
/// which is a linear extension of the edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxModule {
    boxes: Vec<ModuleBox>,
    edges: Vec<Edge>,
    truncation: Truncation,
    multiplicity_free: bool,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl BoxModule {
    /// Validates and canonicalizes. Edges refer to positions in `boxes`.
    pub fn new(boxes: Vec<ModuleBox>, edges: Vec<Edge>, truncation: Truncation) -> Result<Self> {
        let mut order: Vec<usize> = (0..boxes.len()).collect();
        order.sort_by_key(|&i| boxes[i]);
        let mut remap = vec![0; boxes.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let sorted: Vec<ModuleBox> = order.iter().map(|&i| boxes[i]).collect();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Invariant(format!("duplicate box {:?}", w[0])));
        }
        let mut new_edges = Vec::with_capacity(edges.len());
        for e in &edges {
            if e.var > 2 || e.from >= boxes.len() || e.to >= boxes.len() {
                return Err(Error::Invariant(format!("edge {e:?} out of range")));
            }
            let (a, b) = (boxes[e.from], boxes[e.to]);
            let mut expect = a.weight;
            expect[e.var] += 1;
            if b.weight != expect || a.color != b.color {
                return Err(Error::Invariant(format!(
                    "{}-edge from {:?} to {:?} does not raise the weight by one step in its color",
                    VARIABLES[e.var], a, b
                )));
            }
            new_edges.push(Edge { var: e.var, from: remap[e.from], to: remap[e.to] });
        }
        new_edges.sort();
        new_edges.dedup();
        let multiplicity_free = sorted.windows(2).all(|w| (w[0].weight, w[0].color) != (w[1].weight, w[1].color));
        let mut succ = vec![Vec::new(); sorted.len()];
        let mut pred = vec![Vec::new(); sorted.len()];
        for e in &new_edges {
            succ[e.from].push(e.to);
            pred[e.to].push(e.from);
        }
        for v in succ.iter_mut().chain(pred.iter_mut()) {
            v.sort();
            v.dedup();
        }
        let m = BoxModule { boxes: sorted, edges: new_edges, truncation, multiplicity_free, succ, pred };
        m.check_commutativity()?;
        Ok(m)
    }

    pub fn zero() -> Self {
        BoxModule::new(Vec::new(), Vec::new(), Truncation::Finite).unwrap()
    }

    /// Finite module with edges between every pair of same-color boxes one
    /// variable step apart, as in a subquotient of a cyclic module.
    pub fn from_boxes_full_edges(boxes: Vec<ModuleBox>) -> Result<Self> {
        let index: HashMap<(Weight, u32), usize> =
            boxes.iter().enumerate().map(|(i, b)| ((b.weight, b.color), i)).collect();
        let mut edges = Vec::new();
        for (i, b) in boxes.iter().enumerate() {
            for var in 0..3 {
                let mut w = b.weight;
                w[var] += 1;
                if let Some(&j) = index.get(&(w, b.color)) {
                    edges.push(Edge { var, from: i, to: j });
                }
            }
        }
        BoxModule::new(boxes, edges, Truncation::Finite)
    }

    fn check_commutativity(&self) -> Result<()> {
        if self.multiplicity_free && !self.paths_commute() {
            return Err(Error::Invariant("edge paths do not commute".into()));
        }
        Ok(())
    }

    /// For every box and pair of variables, the two two-step edge paths
    /// (when both exist) end at the same boxes. Only meaningful for
    /// multiplicity-free modules, where edge supports compose exactly.
    pub fn paths_commute(&self) -> bool {
        let step = |from: &BTreeSet<usize>, var: usize| -> BTreeSet<usize> {
            self.edges
                .iter()
                .filter(|e| e.var == var && from.contains(&e.from))
                .map(|e| e.to)
                .collect()
        };
        (0..self.len()).all(|b| {
            let start = BTreeSet::from([b]);
            (0..3).all(|i| {
                ((i + 1)..3).all(|j| {
                    let ij = step(&step(&start, i), j);
                    let ji = step(&step(&start, j), i);
                    ij.is_empty() || ji.is_empty() || ij == ji
                })
            })
        })
    }

    pub fn boxes(&self) -> &[ModuleBox] {
        &self.boxes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn is_finite(&self) -> bool {
        self.truncation == Truncation::Finite
    }

    /// The largest quotient length this box set can answer for.
    pub fn length_bound(&self) -> usize {
        match self.truncation {
            Truncation::Finite => self.boxes.len(),
            Truncation::DownSetBound(n) => n,
        }
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.multiplicity_free
    }

    /// First (weight, color) carrying two or more boxes.
    pub fn first_multiplicity(&self) -> Option<(Weight, u32)> {
        self.boxes
            .windows(2)
            .find(|w| (w[0].weight, w[0].color) == (w[1].weight, w[1].color))
            .map(|w| (w[0].weight, w[0].color))
    }

    pub fn successors(&self, b: usize) -> &[usize] {
        &self.succ[b]
    }

    pub fn predecessors(&self, b: usize) -> &[usize] {
        &self.pred[b]
    }

    pub fn index_of(&self, b: &ModuleBox) -> Option<usize> {
        self.boxes.binary_search(b).ok()
    }

    /// Size of each box's down-set (boxes with a path to it, itself included),
    /// saturating at `cap + 1`.
    pub fn downset_sizes(&self, cap: usize) -> Vec<usize> {
        let mut sizes = Vec::with_capacity(self.len());
        for b in 0..self.len() {
            let mut seen = BTreeSet::from([b]);
            let mut stack = vec![b];
            while let Some(u) = stack.pop() {
                if seen.len() > cap {
                    break;
                }
                for &p in &self.pred[u] {
                    if seen.insert(p) {
                        stack.push(p);
                    }
                }
            }
            sizes.push(seen.len().min(cap + 1));
        }
        sizes
    }

    /// Sub-box-set on the kept boxes with the edges among them.
    pub fn restrict(&self, keep: &[bool], truncation: Truncation) -> Self {
        let mut remap = vec![usize::MAX; self.len()];
        let mut boxes = Vec::new();
        for (i, b) in self.boxes.iter().enumerate() {
            if keep[i] {
                remap[i] = boxes.len();
                boxes.push(*b);
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| keep[e.from] && keep[e.to])
            .map(|e| Edge { var: e.var, from: remap[e.from], to: remap[e.to] })
            .collect();
        BoxModule::new(boxes, edges, truncation).expect("restriction of a valid module")
    }

    /// Keeps the boxes whose down-set has at most `bound` elements.
    pub fn truncate_to_downsets(&self, bound: usize) -> Self {
        let keep: Vec<bool> = self.downset_sizes(bound).iter().map(|&s| s <= bound).collect();
        self.restrict(&keep, Truncation::DownSetBound(bound))
    }

    /// Connected components of the underlying undirected edge graph, each as
    /// a sorted list of box indices; components ordered by their first box.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in self.succ[u].iter().chain(&self.pred[u]) {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                        stack.push(v);
                    }
                }
            }
            members.sort();
            out.push(members);
        }
        out
    }

    /// Largest color tag plus one (0 for the zero module).
    pub fn color_count(&self) -> u32 {
        self.boxes.iter().map(|b| b.color + 1).max().unwrap_or(0)
    }
}

/// Matlis dual of a finite module: weights negated, edges reversed.
pub fn matlis_dual(m: &BoxModule) -> Result<BoxModule> {
    if !m.is_finite() {
        return Err(Error::Truncated("the Matlis dual"));
    }
    let boxes = m
        .boxes
        .iter()
        .map(|b| ModuleBox { weight: [-b.weight[0], -b.weight[1], -b.weight[2]], ..*b })
        .collect();
    let edges = m.edges.iter().map(|e| Edge { var: e.var, from: e.to, to: e.from }).collect();
    BoxModule::new(boxes, edges, Truncation::Finite)
}

/// Direct sum; each summand's colors are shifted past those of earlier summands.
pub fn direct_sum(parts: &[BoxModule]) -> BoxModule {
    let mut boxes = Vec::new();
    let mut edges = Vec::new();
    let mut color_offset = 0;
    let mut bound: Option<usize> = None;
    for p in parts {
        let base = boxes.len();
        boxes.extend(p.boxes.iter().map(|b| ModuleBox { color: b.color + color_offset, ..*b }));
        edges.extend(p.edges.iter().map(|e| Edge { var: e.var, from: e.from + base, to: e.to + base }));
        color_offset += p.color_count().max(1);
        if let Truncation::DownSetBound(n) = p.truncation {
            bound = Some(bound.map_or(n, |b: usize| b.min(n)));
        }
    }
    let truncation = bound.map_or(Truncation::Finite, Truncation::DownSetBound);
    BoxModule::new(boxes, edges, truncation).expect("direct sum of valid modules")
}

/// Boxes of the ideal `I` whose down-set inside `I` has at most `bound` elements.
///
/// Every quotient of `I` of length `<= bound` is supported on these boxes.
pub fn box_module_of_ideal(ideal: &MonomialIdeal, bound: usize) -> Result<BoxModule> {
    if bound == 0 {
        return Err(Error::InvalidArgument("down-set bound must be at least 1".into()));
    }
    // a box with down-set <= bound sits at most bound-1 steps above a generator
    let mut candidates: BTreeSet<Exponent> = BTreeSet::new();
    for g in ideal.generators() {
        let steps = bound as u32 - 1;
        for a in 0..=steps {
            for b in 0..=steps - a {
                for c in 0..=steps - a - b {
                    candidates.insert([g[0] + a, g[1] + b, g[2] + c]);
                }
            }
        }
    }
    let kept: Vec<Exponent> = candidates
        .into_iter()
        .filter(|m| ideal_downset_size(ideal, m, bound) <= bound)
        .collect();
    let boxes: Vec<ModuleBox> = kept.iter().map(|m| ModuleBox::new(as_weight(m), 0)).collect();
    let index: BTreeMap<Exponent, usize> = kept.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut edges = Vec::new();
    for (i, m) in kept.iter().enumerate() {
        for var in 0..3 {
            let mut up = *m;
            up[var] += 1;
            if let Some(&j) = index.get(&up) {
                edges.push(Edge { var, from: i, to: j });
            }
        }
    }
    BoxModule::new(boxes, edges, Truncation::DownSetBound(bound))
}

/// Number of monomials of `I` dividing `m`, saturating at `cap + 1`.
fn ideal_downset_size(ideal: &MonomialIdeal, m: &Exponent, cap: usize) -> usize {
    let mut count = 0;
    for a in 0..=m[0] {
        for b in 0..=m[1] {
            for c in 0..=m[2] {
                let d = [a, b, c];
                if ideal.contains(&d) {
                    debug_assert!(divides(&d, m));
                    count += 1;
                    if count > cap {
                        return count;
                    }
                }
            }
        }
    }
    count
}

/// Whether two box modules are isomorphic as variable-labelled edge posets
/// (weights and colors ignored).
pub fn edge_poset_isomorphic(a: &BoxModule, b: &BoxModule) -> bool {
    if a.len() != b.len() || a.edges.len() != b.edges.len() {
        return false;
    }
    let signature = |m: &BoxModule, i: usize| -> [usize; 7] {
        let mut s = [0; 7];
        for e in &m.edges {
            if e.from == i {
                s[e.var] += 1;
            }
            if e.to == i {
                s[3 + e.var] += 1;
            }
        }
        s[6] = m.downset_sizes(m.len())[i];
        s
    };
    let sa: Vec<[usize; 7]> = (0..a.len()).map(|i| signature(a, i)).collect();
    let sb: Vec<[usize; 7]> = (0..b.len()).map(|i| signature(b, i)).collect();
    let mut ca = sa.clone();
    let mut cb = sb.clone();
    ca.sort();
    cb.sort();
    if ca != cb {
        return false;
    }
    let edge_set = |m: &BoxModule| -> BTreeSet<(usize, usize, usize)> {
        m.edges.iter().map(|e| (e.from, e.to, e.var)).collect()
    };
    let (ea, eb) = (edge_set(a), edge_set(b));

    fn extend(
        i: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        sa: &[[usize; 7]],
        sb: &[[usize; 7]],
        ea: &BTreeSet<(usize, usize, usize)>,
        eb: &BTreeSet<(usize, usize, usize)>,
    ) -> bool {
        if i == sa.len() {
            return true;
        }
        for j in 0..sb.len() {
            if used[j] || sa[i] != sb[j] {
                continue;
            }
            let consistent = (0..i).all(|k| {
                (0..3).all(|v| {
                    ea.contains(&(k, i, v)) == eb.contains(&(map[k], j, v))
                        && ea.contains(&(i, k, v)) == eb.contains(&(j, map[k], v))
                })
            });
            if !consistent {
                continue;
            }
            map.push(j);
            used[j] = true;
            if extend(i + 1, map, used, sa, sb, ea, eb) {
                return true;
            }
            map.pop();
            used[j] = false;
        }
        false
    }
    extend(0, &mut Vec::new(), &mut vec![false; b.len()], &sa, &sb, &ea, &eb)
}

#[derive(Serialize, Deserialize)]
struct EdgeRepr {
    var: char,
    from: usize,
    to: usize,
}

#[derive(Serialize, Deserialize)]
struct BoxModuleRepr {
    multiplicity_free: bool,
    truncation: Truncation,
    boxes: Vec<ModuleBox>,
    edges: Vec<EdgeRepr>,
}

impl Serialize for BoxModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BoxModuleRepr {
            multiplicity_free: self.multiplicity_free,
            truncation: self.truncation,
            boxes: self.boxes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRepr { var: VARIABLES[e.var], from: e.from, to: e.to })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoxModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = BoxModuleRepr::deserialize(d)?;
        let edges = r
            .edges
            .iter()
            .map(|e| {
                let var = VARIABLES
                    .iter()
                    .position(|&v| v == e.var)
                    .ok_or_else(|| serde::de::Error::custom(format!("unknown variable {}", e.var)))?;
                Ok(Edge { var, from: e.from, to: e.to })
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        BoxModule::new(r.boxes, edges, r.truncation).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weights(m: &BoxModule) -> Vec<Weight> {
        m.boxes().iter().map(|b| b.weight).collect()
    }

    /// Brute force: monomials of I inside a big cube whose divisors in I number <= bound.
    fn brute_force_boxes(ideal: &MonomialIdeal, bound: usize) -> Vec<Weight> {
        let mut out = Vec::new();
        for a in 0..8u32 {
            for b in 0..8u32 {
                for c in 0..8u32 {
                    let m = [a, b, c];
                    if !ideal.contains(&m) {
                        continue;
                    }
                    let mut n = 0;
                    for i in 0..=a {
                        for j in 0..=b {
                            for k in 0..=c {
                                if ideal.contains(&[i, j, k]) {
                                    n += 1;
                                }
                            }
                        }
                    }
                    if n <= bound {
                        out.push(as_weight(&m));
                    }
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn unit_ideal_boxes() {
        let m = box_module_of_ideal(&MonomialIdeal::unit_ideal(), 2).unwrap();
        assert_eq!(weights(&m), vec![[0, 0, 0], [0, 0, 1], [0, 1, 0], [1, 0, 0]]);
        assert_eq!(m.edges().len(), 3);
    }

    #[test]
    fn line_ideal_generators_only() {
        let i = MonomialIdeal::new(vec![[0, 1, 0], [0, 0, 1]]).unwrap();
        let m = box_module_of_ideal(&i, 1).unwrap();
        assert_eq!(weights(&m), vec![[0, 0, 1], [0, 1, 0]]);
    }

    #[test]
    fn principal_ideal_matches_brute_force() {
        let i = MonomialIdeal::new(vec![[1, 0, 0]]).unwrap();
        let m = box_module_of_ideal(&i, 3).unwrap();
        let expected = brute_force_boxes(&i, 3);
        assert_eq!(
            expected,
            vec![[1, 0, 0], [1, 0, 1], [1, 0, 2], [1, 1, 0], [1, 2, 0], [2, 0, 0], [3, 0, 0]]
        );
        assert_eq!(weights(&m), expected);
        for gens in [vec![[0, 0, 1], [1, 1, 0]], vec![[0, 2, 0], [0, 1, 1], [0, 0, 2]]] {
            let i = MonomialIdeal::new(gens).unwrap();
            for bound in 1..5 {
                assert_eq!(weights(&box_module_of_ideal(&i, bound).unwrap()), brute_force_boxes(&i, bound));
            }
        }
    }

    #[test]
    fn dual_of_chain() {
        let m = BoxModule::from_boxes_full_edges(vec![
            ModuleBox::new([0, 0, 0], 0),
            ModuleBox::new([1, 0, 0], 0),
        ])
        .unwrap();
        let d = matlis_dual(&m).unwrap();
        assert_eq!(weights(&d), vec![[-1, 0, 0], [0, 0, 0]]);
        assert_eq!(d.edges(), &[Edge { var: 0, from: 0, to: 1 }]);
        assert!(edge_poset_isomorphic(&m, &d));
        assert_eq!(matlis_dual(&d).unwrap(), m);
        let sky = BoxModule::from_boxes_full_edges(vec![ModuleBox::new([0, 0, 0], 0)]).unwrap();
        assert_eq!(matlis_dual(&sky).unwrap(), sky);
    }

    #[test]
    fn dual_refuses_truncations() {
        let m = box_module_of_ideal(&MonomialIdeal::unit_ideal(), 3).unwrap();
        assert!(matches!(matlis_dual(&m), Err(Error::Truncated(_))));
    }

    #[test]
    fn direct_sums() {
        let sky = BoxModule::from_boxes_full_edges(vec![ModuleBox::new([0, 0, 0], 0)]).unwrap();
        let s = direct_sum(&[sky.clone(), sky.clone()]);
        assert_eq!(s.len(), 2);
        assert!(s.is_multiplicity_free());
        assert_eq!(s.boxes()[0].weight, s.boxes()[1].weight);
        assert_eq!(direct_sum(&[]).len(), 0);
        let i = MonomialIdeal::new(vec![[0, 1, 0], [0, 0, 1]]).unwrap();
        let ray = box_module_of_ideal(&i, 2).unwrap();
        let two = direct_sum(&[ray.clone(), ray]);
        assert_eq!(two.color_count(), 2);
        // at bound 2 the boxes above y and above z are not yet joined by yz
        assert_eq!(two.components().len(), 4);
    }

    #[test]
    fn rejects_bad_edges() {
        let boxes = vec![ModuleBox::new([0, 0, 0], 0), ModuleBox::new([0, 1, 0], 0)];
        assert!(BoxModule::new(boxes.clone(), vec![Edge { var: 0, from: 0, to: 1 }], Truncation::Finite).is_err());
        assert!(BoxModule::new(boxes, vec![Edge { var: 1, from: 0, to: 1 }], Truncation::Finite).is_ok());
    }

    #[test]
    fn computed_modules_commute() {
        let m = box_module_of_ideal(&MonomialIdeal::new(vec![[0, 0, 1], [1, 1, 0]]).unwrap(), 4).unwrap();
        assert!(m.paths_commute());
    }

    #[test]
    fn isomorphism_detects_difference() {
        let chain = |var: usize| {
            let mut w = [0, 0, 0];
            w[var] = 1;
            BoxModule::from_boxes_full_edges(vec![ModuleBox::new([0, 0, 0], 0), ModuleBox::new(w, 0)]).unwrap()
        };
        assert!(!edge_poset_isomorphic(&chain(0), &chain(1)));
        assert!(edge_poset_isomorphic(&chain(2), &chain(2)));
    }

    #[test]
    fn json_round_trip() {
        let m = box_module_of_ideal(&MonomialIdeal::unit_ideal(), 3).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        let back: BoxModule = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
