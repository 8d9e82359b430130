//! Cokernels and Ext modules of monomial complexes, weight by weight.
//!
//! In a fixed weight `w` a free module `⊕ A(-b_k)` is spanned by the
//! generators with `w >= b_k`, and its dual `⊕ A(b_k)` by those with
//! `w + b_k >= 0`. Every monomial matrix entry becomes its sign, so each
//! weight space is a subquotient of a coordinate space computed by exact
//! elimination. Along variable `v` the complex is constant once `w_v` passes
//! the largest relevant degree, which makes finiteness decidable.

use super::boxes::{BoxModule, Truncation};
use super::linear::{module_from_slices, LinearModule, Slice};
use super::monomial::{CurveProfile, MonomialIdeal, Weight};
use super::presentation::{ideal_presentation, MonomialPresentation};
use crate::error::{Error, Result};
use crate::linalg::{Field, Rationals, Subquotient};

fn colors_of(p: &MonomialPresentation) -> Vec<u32> {
    (0..p.color_count()).collect()
}

/// Componentwise min and max of every generator degree in the complex.
fn degree_hull(p: &MonomialPresentation) -> Option<(Weight, Weight)> {
    let mut it = p.modules().iter().flat_map(|f| f.degrees.iter());
    let first = *it.next()?;
    Some(it.fold((first, first), |(lo, hi), d| {
        (
            [lo[0].min(d[0]), lo[1].min(d[1]), lo[2].min(d[2])],
            [hi[0].max(d[0]), hi[1].max(d[1]), hi[2].max(d[2])],
        )
    }))
}

fn neg(w: Weight) -> Weight {
    [-w[0], -w[1], -w[2]]
}

fn at_least(w: &Weight, d: &Weight) -> bool {
    (0..3).all(|c| w[c] >= d[c])
}

/// `coker(d_1 : F_1 -> F_0)` at weight `w` and color `c` (normalized complex).
fn cokernel_slice<F: Field>(field: &F, p: &MonomialPresentation, w: Weight, c: u32) -> Slice<F::Elem> {
    let f0 = &p.modules()[0];
    let basis: Vec<usize> = (0..f0.rank())
        .filter(|&j| f0.colors[j] == c && at_least(&w, &f0.degrees[j]))
        .collect();
    let n = basis.len();
    let identity: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect())
        .collect();
    let mut image = Vec::new();
    if p.length() >= 1 {
        let f1 = &p.modules()[1];
        let d = p.differential(1);
        for k in 0..f1.rank() {
            if f1.colors[k] != c || !at_least(&w, &f1.degrees[k]) {
                continue;
            }
            let col: Vec<F::Elem> = basis
                .iter()
                .map(|&j| d[j][k].map_or(field.zero(), |e| field.from_i64(e.sign as i64)))
                .collect();
            image.push(col);
        }
    }
    Slice { space: Subquotient::new(field, &identity, &image, n), basis }
}

/// `H^i(Hom(F, A))` at weight `w` and color `c` (normalized complex).
fn dual_homology_slice<F: Field>(
    field: &F,
    p: &MonomialPresentation,
    i: usize,
    w: Weight,
    c: u32,
) -> Slice<F::Elem> {
    let present = |pos: usize| -> Vec<usize> {
        let f = &p.modules()[pos];
        (0..f.rank())
            .filter(|&k| f.colors[k] == c && (0..3).all(|t| w[t] + f.degrees[k][t] >= 0))
            .collect()
    };
    let basis = present(i);
    let n = basis.len();
    // cycles: kernel of the dual of d_{i+1}
    let cycles = if i < p.length() {
        let next = present(i + 1);
        let d = p.differential(i + 1);
        let rows: Vec<Vec<F::Elem>> = next
            .iter()
            .map(|&l| basis.iter().map(|&k| d[k][l].map_or(field.zero(), |e| field.from_i64(e.sign as i64))).collect())
            .collect();
        crate::linalg::kernel(field, &rows, n)
    } else {
        (0..n)
            .map(|a| (0..n).map(|b| if a == b { field.one() } else { field.zero() }).collect())
            .collect()
    };
    // boundaries: image of the dual of d_i
    let boundaries = if i >= 1 {
        let d = p.differential(i);
        present(i - 1)
            .iter()
            .map(|&j| basis.iter().map(|&k| d[j][k].map_or(field.zero(), |e| field.from_i64(e.sign as i64))).collect())
            .collect()
    } else {
        Vec::new()
    };
    Slice { space: Subquotient::new(field, &cycles, &boundaries, n), basis }
}

/// Weight window outside which `Ext^j` vanishes or repeats: below `lo`
/// nothing survives, and from `hi` upward the complex is constant.
pub fn ext_window(p: &MonomialPresentation) -> (Weight, Weight) {
    let p = p.normalized();
    match degree_hull(&p) {
        Some((dmin, dmax)) => (neg(dmax), neg(dmin)),
        None => ([0; 3], [0; 3]),
    }
}

/// `Ext^j(M, A)` over the weights `[lo, hi]`, where `M` is the module of `p`.
pub fn ext_linear_module<F: Field>(
    field: &F,
    p: &MonomialPresentation,
    j: usize,
    lo: Weight,
    hi: Weight,
) -> LinearModule<F::Elem> {
    let p = p.normalized();
    if j > p.length() {
        return LinearModule::new(Vec::new(), Vec::new(), |_, _, _| Vec::new());
    }
    module_from_slices(field, lo, hi, &colors_of(&p), |w, c| dual_homology_slice(field, &p, j, w, c))
}

/// Window for the cokernel: generators lie in `[lo, hi]` and the module is
/// periodic along each variable from `hi` upward.
pub fn cokernel_window(p: &MonomialPresentation) -> (Weight, Weight) {
    let p = p.normalized();
    let lo = p.modules()[0]
        .degrees
        .iter()
        .fold(None, |acc: Option<Weight>, d| {
            Some(acc.map_or(*d, |a| [a[0].min(d[0]), a[1].min(d[1]), a[2].min(d[2])]))
        })
        .unwrap_or([0; 3]);
    let hi = degree_hull(&p).map_or([0; 3], |(_, hi)| hi);
    (lo, hi)
}

/// The module `coker(F_1 -> F_0)` over the weights `[lo, hi]`.
pub fn cokernel_linear_module<F: Field>(
    field: &F,
    p: &MonomialPresentation,
    lo: Weight,
    hi: Weight,
) -> LinearModule<F::Elem> {
    let p = p.normalized();
    module_from_slices(field, lo, hi, &colors_of(&p), |w, c| cokernel_slice(field, &p, w, c))
}

/// Checks that `Ext^j(M, A)` vanishes for all `j >= 2`.
pub fn check_homological_dimension(p: &MonomialPresentation) -> Result<()> {
    let (lo, hi) = ext_window(p);
    let norm = p.normalized();
    for j in 2..=norm.length() {
        let m = ext_linear_module(&Rationals, &norm, j, lo, hi);
        if let Some(&(w, _)) = m.positions().first() {
            return Err(Error::HomologicalDimension { degree: j, weight: w });
        }
    }
    Ok(())
}

pub fn homological_dimension_at_most_one(p: &MonomialPresentation) -> bool {
    check_homological_dimension(p).is_ok()
}

/// Whether any position touches the periodic face `w_v = hi_v`.
fn touches_upper_face<E: Clone + PartialEq + std::fmt::Debug>(m: &LinearModule<E>, hi: &Weight) -> bool {
    m.positions().iter().any(|(w, _)| (0..3).any(|c| w[c] >= hi[c]))
}

/// Finishes a window computation: the whole module if finite, otherwise the
/// boxes with down-set at most `bound`.
fn finite_or_truncated(
    compute: impl Fn(Weight) -> LinearModule<num_rational::BigRational>,
    hi: Weight,
    bound: usize,
) -> Result<BoxModule> {
    let window = compute(hi);
    if !touches_upper_face(&window, &hi) {
        return Ok(window.to_box_module(&Rationals, Truncation::Finite));
    }
    if bound == 0 {
        return Err(Error::TruncationTooSmall(
            "module is infinite and a down-set bound of 0 contains none of its generators".into(),
        ));
    }
    let b = bound as i64;
    let region = compute([hi[0] + b, hi[1] + b, hi[2] + b]);
    let boxes = region.to_box_module(&Rationals, Truncation::Finite);
    if !boxes.is_multiplicity_free() {
        // down-sets of single boxes say nothing when weight spaces are
        // larger than one, so keep the whole region
        return BoxModule::new(boxes.boxes().to_vec(), boxes.edges().to_vec(), Truncation::DownSetBound(bound));
    }
    Ok(boxes.truncate_to_downsets(bound))
}

/// `Ext^1(M, A)` as a box module, `M` presented by `p` (which must have
/// homological dimension at most one).
///
/// A finite Ext module is returned whole; an infinite one is cut down to the
/// boxes whose down-set has at most `bound` elements.
pub fn ext1(p: &MonomialPresentation, bound: usize) -> Result<BoxModule> {
    check_homological_dimension(p)?;
    let norm = p.normalized();
    let (lo, hi) = ext_window(&norm);
    finite_or_truncated(|top| ext_linear_module(&Rationals, &norm, 1, lo, top), hi, bound)
}

/// The module presented by `p` as a box module (whole if finite, otherwise
/// the boxes with down-set at most `bound`).
pub fn cokernel_box_module(p: &MonomialPresentation, bound: usize) -> Result<BoxModule> {
    let norm = p.normalized();
    let (lo, hi) = cokernel_window(&norm);
    finite_or_truncated(|top| cokernel_linear_module(&Rationals, &norm, lo, top), hi, bound)
}

/// The ideal of a monomial curve, flagged when the homological-dimension
/// test fails (the curve would then not be Cohen-Macaulay).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveIdeal {
    pub ideal: MonomialIdeal,
    pub hd_at_most_one: bool,
}

pub fn curve_ideal(profile: &CurveProfile) -> Result<CurveIdeal> {
    let ideal = MonomialIdeal::new(profile.ideal_generators())?;
    let hd_at_most_one = homological_dimension_at_most_one(&ideal_presentation(&ideal)?);
    Ok(CurveIdeal { ideal, hd_at_most_one })
}
