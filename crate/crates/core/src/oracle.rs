//! Euler characteristics of Quot schemes by point counting.
//!
//! When a module has weight spaces of dimension above one, the torus-fixed
//! locus of `Quot(M, n)` is no longer a finite set. It is still a union of
//! strata indexed by the codimension of `K` in each weight space, each a
//! subvariety of a product of Grassmannians. We count homogeneous submodules
//! of colength `n` over several prime fields, fit a polynomial in `p`, and
//! evaluate it at `p = 1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::ext::{
    check_homological_dimension, cokernel_linear_module, cokernel_window, ext_linear_module, ext_window,
};
use crate::graded::linear::{LinearModule, Position};
use crate::graded::{BoxModule, MonomialPresentation, Weight};
use crate::linalg::{apply, kernel, rref, Field, PrimeField};
use crate::series::TruncSeries;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub primes: Vec<u64>,
    pub n_max: usize,
    /// Bound on the total dimension of the weight spaces a quotient can touch.
    pub cap: usize,
    pub workers: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { primes: vec![2, 3, 5, 7], n_max: 3, cap: 14, workers: 1 }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.primes.len() < 3 {
            return Err(Error::InvalidArgument(format!(
                "the oracle needs at least 3 primes, got {}",
                self.primes.len()
            )));
        }
        for (i, &p) in self.primes.iter().enumerate() {
            if !is_prime(p) || p >= 1 << 31 {
                return Err(Error::InvalidArgument(format!("{p} is not a usable prime")));
            }
            if self.primes[..i].contains(&p) {
                return Err(Error::InvalidArgument(format!("prime {p} listed twice")));
            }
        }
        Ok(())
    }
}

/// Where the module comes from. Box modules carry no edge scalars and must
/// be multiplicity-free; presentations give exact action matrices.
#[derive(Clone, Copy, Debug)]
pub enum OracleSource<'a> {
    Boxes(&'a BoxModule),
    Cokernel(&'a MonomialPresentation),
    Ext1(&'a MonomialPresentation),
}

/// Codimension of `K` at one weight space.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub weight: Weight,
    pub color: u32,
    pub dim: usize,
    pub codim: usize,
}

/// The graded Hilbert function of a quotient: nonzero codimensions only.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GradedSubspaceProfile {
    pub entries: Vec<ProfileEntry>,
}

impl GradedSubspaceProfile {
    pub fn total_codim(&self) -> usize {
        self.entries.iter().map(|e| e.codim).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub n: usize,
    /// Counting polynomial evaluated at 1.
    pub value: i128,
    /// `(p, number of homogeneous submodules over F_p)`.
    pub counts: Vec<(u64, u128)>,
    /// Coefficients of the counting polynomial, constant term first.
    pub polynomial: Vec<i128>,
    pub degree_bound: usize,
    /// Profiles realized over the first prime.
    pub profiles: Vec<GradedSubspaceProfile>,
}

fn build(source: OracleSource<'_>, field: &PrimeField, n: usize) -> Result<LinearModule<u64>> {
    let grow = |(lo, hi): (Weight, Weight)| {
        let k = n.saturating_sub(1) as i64;
        (lo, [hi[0] + k, hi[1] + k, hi[2] + k])
    };
    Ok(match source {
        OracleSource::Boxes(m) => {
            if let Some((weight, color)) = m.first_multiplicity() {
                return Err(Error::InvalidArgument(format!(
                    "box module has multiplicity at weight {weight:?}, color {color}; pass a presentation instead"
                )));
            }
            if !m.is_finite() && m.length_bound() < n {
                return Err(Error::TruncationTooSmall(format!(
                    "box set keeps down-sets up to {} but length {n} was requested",
                    m.length_bound()
                )));
            }
            let positions: Vec<Position> = m.boxes().iter().map(|b| (b.weight, b.color)).collect();
            let dims = vec![1; positions.len()];
            LinearModule::new(positions, dims, |_, _, _| vec![vec![1]])
        }
        OracleSource::Cokernel(p) => {
            let (lo, hi) = grow(cokernel_window(p));
            cokernel_linear_module(field, p, lo, hi)
        }
        OracleSource::Ext1(p) => {
            check_homological_dimension(p)?;
            let (lo, hi) = grow(ext_window(p));
            ext_linear_module(field, p, 1, lo, hi)
        }
    })
}

/// Image of a subspace (rows) under an action matrix (rows = target dim).
fn image(field: &PrimeField, matrix: &[Vec<u64>], basis: &[Vec<u64>]) -> Vec<Vec<u64>> {
    basis.iter().map(|v| apply(field, matrix, v)).collect()
}

fn full_basis(dim: usize) -> Vec<Vec<u64>> {
    (0..dim)
        .map(|i| {
            let mut v = vec![0; dim];
            v[i] = 1;
            v
        })
        .collect()
}

/// All `c x f` matrices in reduced row echelon form of full rank.
fn rref_matrices(field: &PrimeField, c: usize, f: usize) -> Vec<Vec<Vec<u64>>> {
    fn pivot_sets(c: usize, f: usize, start: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == c {
            out.push(acc.clone());
            return;
        }
        for s in start..f {
            acc.push(s);
            pivot_sets(c, f, s + 1, acc, out);
            acc.pop();
        }
    }
    let mut sets = Vec::new();
    pivot_sets(c, f, 0, &mut Vec::new(), &mut sets);
    let p = field.modulus();
    let mut out = Vec::new();
    for pivots in sets {
        let free: Vec<(usize, usize)> = (0..c)
            .flat_map(|r| ((pivots[r] + 1)..f).filter(|col| !pivots.contains(col)).map(move |col| (r, col)))
            .collect();
        let total = (p as u128).pow(free.len() as u32);
        for mut code in 0..total {
            let mut m = vec![vec![0u64; f]; c];
            for (r, &col) in pivots.iter().enumerate() {
                m[r][col] = 1;
            }
            for &(r, col) in &free {
                m[r][col] = (code % p as u128) as u64;
                code /= p as u128;
            }
            out.push(m);
        }
    }
    out
}

struct Counter<'a> {
    field: PrimeField,
    module: &'a LinearModule<u64>,
    /// Active positions in topological order.
    active: Vec<usize>,
    is_active: Vec<bool>,
    n: usize,
    /// Current `K` at each active position (basis rows).
    chosen: Vec<Option<Vec<Vec<u64>>>>,
    codims: Vec<usize>,
    count: u128,
    profiles: BTreeMap<GradedSubspaceProfile, u128>,
}

impl Counter<'_> {
    fn required(&self, pos: usize) -> Vec<Vec<u64>> {
        let mut rows = Vec::new();
        for (src, var) in self.module.incoming(pos) {
            let (_, m) = self.module.action(src, var).expect("incoming action exists");
            let k = match &self.chosen[src] {
                Some(k) if self.is_active[src] => k.clone(),
                _ => full_basis(self.module.dim(src)),
            };
            rows.extend(image(&self.field, m, &k));
        }
        rows
    }

    fn walk(&mut self, step: usize, used: usize) {
        if step == self.active.len() {
            if used == self.n {
                self.count += 1;
                let entries = self
                    .active
                    .iter()
                    .filter(|&&p| self.codims[p] > 0)
                    .map(|&p| {
                        let (weight, color) = self.module.positions()[p];
                        ProfileEntry { weight, color, dim: self.module.dim(p), codim: self.codims[p] }
                    })
                    .collect();
                *self.profiles.entry(GradedSubspaceProfile { entries }).or_default() += 1;
            }
            return;
        }
        let pos = self.active[step];
        let e = self.module.dim(pos);
        let req = self.required(pos);
        let annihilator = kernel(&self.field, &req, e);
        let f = annihilator.len();
        for c in 0..=f.min(self.n - used) {
            for a in rref_matrices(&self.field, c, f) {
                let constraints: Vec<Vec<u64>> = a
                    .iter()
                    .map(|row| {
                        (0..e)
                            .map(|j| {
                                row.iter().zip(&annihilator).fold(0, |acc, (x, phi)| {
                                    self.field.add(&acc, &self.field.mul(x, &phi[j]))
                                })
                            })
                            .collect()
                    })
                    .collect();
                let k = if c == 0 { full_basis(e) } else { kernel(&self.field, &constraints, e) };
                self.chosen[pos] = Some(k);
                self.codims[pos] = c;
                self.walk(step + 1, used + c);
            }
        }
        self.chosen[pos] = None;
        self.codims[pos] = 0;
    }
}

fn dist(a: &Weight, b: &Weight) -> Option<i64> {
    let d = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    d.iter().all(|&x| x >= 0).then(|| d.iter().sum())
}

/// Positions a colength-`n` submodule can differ from `M` at, and the
/// largest total Grassmannian dimension over codimension assignments.
fn active_positions(field: &PrimeField, m: &LinearModule<u64>, n: usize) -> (Vec<usize>, usize) {
    let positions = m.positions();
    let generators: Vec<usize> = (0..positions.len())
        .filter(|&p| {
            let mut rows = Vec::new();
            for (src, var) in m.incoming(p) {
                let (_, a) = m.action(src, var).expect("incoming action exists");
                rows.extend(image(field, a, &full_basis(m.dim(src))));
            }
            rref(field, &rows, m.dim(p)).rank() < m.dim(p)
        })
        .collect();
    let active: Vec<usize> = (0..positions.len())
        .filter(|&p| {
            generators.iter().any(|&g| {
                positions[g].1 == positions[p].1
                    && dist(&positions[g].0, &positions[p].0).is_some_and(|d| d < n as i64)
            })
        })
        .collect();
    // knapsack over positions: maximize sum c (d - c) with sum c = n
    let mut best = vec![None::<usize>; n + 1];
    best[0] = Some(0);
    for &p in &active {
        let d = m.dim(p);
        let mut next = best.clone();
        for used in 0..=n {
            let Some(v) = best[used] else { continue };
            for c in 1..=d.min(n - used) {
                let cand = v + c * (d - c);
                if next[used + c].is_none_or(|x| x < cand) {
                    next[used + c] = Some(cand);
                }
            }
        }
        best = next;
    }
    (active, best[n].unwrap_or(0))
}

struct PrimeCount {
    count: u128,
    degree_bound: usize,
    profiles: Vec<GradedSubspaceProfile>,
}

fn count_over(source: OracleSource<'_>, p: u64, n: usize, cap: usize) -> Result<PrimeCount> {
    let field = PrimeField::new(p);
    let module = build(source, &field, n)?;
    if n == 0 {
        return Ok(PrimeCount { count: 1, degree_bound: 0, profiles: vec![GradedSubspaceProfile { entries: vec![] }] });
    }
    let (active, degree_bound) = active_positions(&field, &module, n);
    let total: usize = active.iter().map(|&p| module.dim(p)).sum();
    if total > cap {
        return Err(Error::CapExceeded(format!(
            "length {n} touches weight spaces of total dimension {total}, above the cap {cap}"
        )));
    }
    let mut is_active = vec![false; module.positions().len()];
    for &a in &active {
        is_active[a] = true;
    }
    let mut counter = Counter {
        field,
        module: &module,
        active,
        is_active,
        n,
        chosen: vec![None; module.positions().len()],
        codims: vec![0; module.positions().len()],
        count: 0,
        profiles: BTreeMap::new(),
    };
    counter.walk(0, 0);
    Ok(PrimeCount { count: counter.count, degree_bound, profiles: counter.profiles.into_keys().collect() })
}

/// Fits the polynomial of degree at most `degree` through the first
/// `degree + 1` points and checks it against the rest.
fn fit(points: &[(u64, u128)], degree: usize) -> Result<Vec<i128>> {
    if points.len() < degree + 1 {
        return Err(Error::InvalidArgument(format!(
            "interpolating a polynomial of degree {degree} needs {} primes, got {}",
            degree + 1,
            points.len()
        )));
    }
    let k = degree + 1;
    let rat = |v: i128| BigRational::from_integer(BigInt::from(v));
    // Newton divided differences
    let xs: Vec<BigRational> = points[..k].iter().map(|&(p, _)| rat(p as i128)).collect();
    let mut dd: Vec<BigRational> = points[..k].iter().map(|&(_, c)| rat(c as i128)).collect();
    for level in 1..k {
        for i in (level..k).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // expand into the monomial basis
    let mut poly = vec![BigRational::zero(); k];
    let mut basis = vec![BigRational::one()];
    for (i, c) in dd.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            poly[j] += c * b;
        }
        if i + 1 < k {
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (j, b) in basis.iter().enumerate() {
                next[j + 1] += b;
                next[j] -= b * &xs[i];
            }
            basis = next;
        }
    }
    let coeffs: Vec<i128> = poly
        .iter()
        .map(|c| {
            if !c.is_integer() {
                return Err(Error::NonPolynomialCount(format!("interpolated coefficient {c} is not an integer")));
            }
            c.to_integer().to_i128().ok_or(Error::Overflow("interpolation"))
        })
        .collect::<Result<_>>()?;
    let eval = |x: i128| coeffs.iter().rev().fold(BigInt::zero(), |acc, &c| acc * x + c);
    for &(p, c) in &points[k..] {
        if eval(p as i128) != BigInt::from(c) {
            return Err(Error::NonPolynomialCount(format!(
                "count {c} over F_{p} disagrees with the polynomial {coeffs:?} fitted on the other primes"
            )));
        }
    }
    Ok(coeffs)
}

/// `e(Quot(M, n))` by point counting over `config.primes`.
pub fn quot_euler_bruteforce(source: OracleSource<'_>, n: usize, config: &OracleConfig) -> Result<OracleResult> {
    config.validate()?;
    if n > config.n_max {
        return Err(Error::CapExceeded(format!("length {n} is above n_max = {}", config.n_max)));
    }
    let workers = config.workers.max(1);
    let per_prime: Vec<Result<PrimeCount>> = if workers == 1 {
        config.primes.iter().map(|&p| count_over(source, p, n, config.cap)).collect()
    } else {
        let mut results: Vec<Option<Result<PrimeCount>>> = (0..config.primes.len()).map(|_| None).collect();
        for chunk in config.primes.iter().enumerate().collect::<Vec<_>>().chunks(workers) {
            std::thread::scope(|s| {
                let handles: Vec<_> = chunk
                    .iter()
                    .map(|&(i, &p)| (i, s.spawn(move || count_over(source, p, n, config.cap))))
                    .collect();
                for (i, h) in handles {
                    results[i] = Some(h.join().expect("oracle worker panicked"));
                }
            });
        }
        results.into_iter().map(|r| r.expect("every prime counted")).collect()
    };
    let per_prime: Vec<PrimeCount> = per_prime.into_iter().collect::<Result<_>>()?;
    let degree_bound = per_prime.iter().map(|c| c.degree_bound).max().unwrap_or(0);
    let counts: Vec<(u64, u128)> = config.primes.iter().copied().zip(per_prime.iter().map(|c| c.count)).collect();
    let polynomial = fit(&counts, degree_bound)?;
    let value = polynomial.iter().try_fold(0i128, |acc, &c| acc.checked_add(c)).ok_or(Error::Overflow("oracle"))?;
    Ok(OracleResult {
        n,
        value,
        counts,
        polynomial,
        degree_bound,
        profiles: per_prime.into_iter().next().map(|c| c.profiles).unwrap_or_default(),
    })
}

/// `sum_{n <= top} e(Quot(M, n)) q^n` with `top = min(order, n_max)`.
pub fn oracle_series(source: OracleSource<'_>, order: usize, config: &OracleConfig) -> Result<TruncSeries> {
    let top = order.min(config.n_max);
    let coeffs = (0..=top)
        .map(|n| quot_euler_bruteforce(source, n, config).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    Ok(TruncSeries::from_coeffs(coeffs, top as i64))
}
