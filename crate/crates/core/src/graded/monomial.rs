use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector of a monomial `x^a y^b z^c`.
pub type Exponent = [u32; 3];

/// Fine grading weight in `Z^3`.
pub type Weight = [i64; 3];

pub fn divides(a: &Exponent, b: &Exponent) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn lcm(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2])]
}

pub fn total_degree(e: &Exponent) -> u32 {
    e.iter().sum()
}

pub fn as_weight(e: &Exponent) -> Weight {
    [e[0] as i64, e[1] as i64, e[2] as i64]
}

/// Standard basis vector for variable `var` (0 = x, 1 = y, 2 = z).
pub fn unit(var: usize) -> Exponent {
    let mut e = [0; 3];
    e[var] = 1;
    e
}

pub const VARIABLES: [char; 3] = ['x', 'y', 'z'];

/// Renders an exponent as `x^2yz`, or `1`.
pub fn format_monomial(e: &Exponent) -> String {
    let mut s = String::new();
    for (v, &k) in VARIABLES.iter().zip(e) {
        match k {
            0 => {}
            1 => s.push(*v),
            k => s.push_str(&format!("{v}^{k}")),
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

/// A monomial ideal of `k[x,y,z]` given by its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialIdeal {
    generators: Vec<Exponent>,
}

impl MonomialIdeal {
    /// Builds an ideal from a generating set that must already be an antichain.
    pub fn new(generators: Vec<Exponent>) -> Result<Self> {
        for (i, a) in generators.iter().enumerate() {
            for (j, b) in generators.iter().enumerate() {
                if i != j && divides(a, b) {
                    return Err(Error::Invariant(format!(
                        "generators not an antichain: {} divides {} (generators[{i}] and generators[{j}])",
                        format_monomial(a),
                        format_monomial(b)
                    )));
                }
            }
        }
        let mut generators = generators;
        generators.sort();
        Ok(MonomialIdeal { generators })
    }

    /// Builds an ideal from any generating set, discarding redundant generators.
    pub fn minimized(mut generators: Vec<Exponent>) -> Self {
        generators.sort_by_key(|g| (total_degree(g), *g));
        generators.dedup();
        let mut minimal: Vec<Exponent> = Vec::new();
        for g in generators {
            if !minimal.iter().any(|m| divides(m, &g)) {
                minimal.push(g);
            }
        }
        minimal.sort();
        MonomialIdeal { generators: minimal }
    }

    pub fn unit_ideal() -> Self {
        MonomialIdeal { generators: vec![[0, 0, 0]] }
    }

    pub fn generators(&self) -> &[Exponent] {
        &self.generators
    }

    pub fn is_unit(&self) -> bool {
        self.generators.contains(&[0, 0, 0])
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, m: &Exponent) -> bool {
        self.generators.iter().any(|g| divides(g, m))
    }
}

impl std::fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(format_monomial).collect();
        write!(f, "({})", gens.join(", "))
    }
}

/// Cross-sections of a monomial curve supported on the coordinate axes.
///
/// `sections[k]` is a finite order ideal in `Z_{>=0}^2` describing the
/// thickening of the `k`-th axis, written in the coordinates of the two
/// remaining variables in increasing order (x-axis: `(y,z)`, y-axis:
/// `(x,z)`, z-axis: `(x,y)`). An empty section means the axis is absent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveProfile {
    sections: [Vec<[u32; 2]>; 3],
}

fn other_axes(axis: usize) -> [usize; 2] {
    match axis {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

impl CurveProfile {
    pub fn new(sections: [Vec<[u32; 2]>; 3]) -> Result<Self> {
        let mut sections = sections;
        for (axis, section) in sections.iter_mut().enumerate() {
            section.sort();
            let before = section.len();
            section.dedup();
            if section.len() != before {
                return Err(Error::Invariant(format!(
                    "cross-section of the {}-axis has repeated cells",
                    crate::graded::VARIABLES[axis]
                )));
            }
            for cell in section.iter() {
                for d in 0..2 {
                    if cell[d] > 0 {
                        let mut below = *cell;
                        below[d] -= 1;
                        if section.binary_search(&below).is_err() {
                            return Err(Error::Invariant(format!(
                                "cross-section of the {}-axis is not downward closed: {:?} present but {:?} missing",
                                crate::graded::VARIABLES[axis],
                                cell,
                                below
                            )));
                        }
                    }
                }
            }
        }
        if sections.iter().all(|s| s.is_empty()) {
            return Err(Error::Invariant("curve profile has no nonempty cross-section".into()));
        }
        Ok(CurveProfile { sections })
    }

    /// Reduced coordinate axis `axis`.
    pub fn reduced_axis(axis: usize) -> Self {
        let mut sections: [Vec<[u32; 2]>; 3] = Default::default();
        sections[axis] = vec![[0, 0]];
        CurveProfile { sections }
    }

    pub fn sections(&self) -> &[Vec<[u32; 2]>; 3] {
        &self.sections
    }

    /// Whether the monomial lies outside the curve's ideal.
    pub fn contains_monomial(&self, m: &Exponent) -> bool {
        self.sections.iter().enumerate().any(|(axis, section)| {
            let [i, j] = other_axes(axis);
            section.binary_search(&[m[i], m[j]]).is_ok()
        })
    }

    /// Minimal generators of the ideal of the union of thickened axes.
    ///
    /// A generator's exponent in variable `v` never exceeds one more than the
    /// largest `v`-extent of any section, so a bounded search is exhaustive.
    pub fn ideal_generators(&self) -> Vec<Exponent> {
        let mut bound = [0u32; 3];
        for (axis, section) in self.sections.iter().enumerate() {
            let others = other_axes(axis);
            for cell in section {
                for (d, &v) in others.iter().enumerate() {
                    bound[v] = bound[v].max(cell[d] + 1);
                }
            }
        }
        let mut gens = Vec::new();
        for a in 0..=bound[0] {
            for b in 0..=bound[1] {
                for c in 0..=bound[2] {
                    let m = [a, b, c];
                    if self.contains_monomial(&m) {
                        continue;
                    }
                    let minimal = (0..3).all(|v| {
                        if m[v] == 0 {
                            return true;
                        }
                        let mut below = m;
                        below[v] -= 1;
                        self.contains_monomial(&below)
                    });
                    if minimal {
                        gens.push(m);
                    }
                }
            }
        }
        gens
    }
}
