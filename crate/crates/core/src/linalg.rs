//! Dense linear algebra over an exact field: the rationals for Ext
//! computations, `Z/p` for the point-counting oracle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Field operations carried by a context value, so `Z/p` can hold its modulus.
pub trait Field {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

/// The prime field `Z/p`. The caller guarantees `p` is prime.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!((2..1 << 31).contains(&p), "modulus {p} out of range");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// All field elements in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        // Fermat
        let mut result = 1u64;
        let mut base = *a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        result
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
}

/// Row-reduced echelon basis of a row space.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pub rows: Vec<Vec<E>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Reduced row echelon form of the span of `rows` (each of length `ncols`).
pub fn rref<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Echelon<F::Elem> {
    let mut m: Vec<Vec<F::Elem>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !field.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv = field.inv(&m[r][c]);
        for v in m[r].iter_mut() {
            *v = field.mul(v, &inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !field.is_zero(&row[c]) {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v = field.sub(v, &field.mul(&f, pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Echelon { rows: m, pivots, ncols }
}

/// Reduces `v` modulo the row space of `ech`; the result vanishes on every pivot column.
pub fn reduce<F: Field>(field: &F, ech: &Echelon<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    let mut v = v.to_vec();
    for (row, &c) in ech.rows.iter().zip(&ech.pivots) {
        if !field.is_zero(&v[c]) {
            let f = v[c].clone();
            for (x, rx) in v.iter_mut().zip(row) {
                *x = field.sub(x, &field.mul(&f, rx));
            }
        }
    }
    v
}

/// Basis of the right kernel `{ v : M v = 0 }` of a matrix given by rows.
pub fn kernel<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let ech = rref(field, rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !ech.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                v[p] = field.sub(&field.zero(), &row[f]);
            }
            v
        })
        .collect()
}

/// `M v` for `M` given by rows.
pub fn apply<F: Field>(field: &F, rows: &[Vec<F::Elem>], v: &[F::Elem]) -> Vec<F::Elem> {
    rows.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(field.zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
        })
        .collect()
}

/// A subquotient `Z / B` of `F^n` with `B ⊆ Z`, with a fixed basis read off
/// from echelon forms so that coordinates are canonical.
#[derive(Clone, Debug)]
pub struct Subquotient<E> {
    boundary: Echelon<E>,
    /// Echelon basis of the image of `Z` modulo `B`.
    basis: Echelon<E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug> Subquotient<E> {
    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    /// Representative vectors of the chosen basis, in ambient coordinates.
    pub fn basis_vectors(&self) -> &[Vec<E>] {
        &self.basis.rows
    }
}

impl<E: Clone + PartialEq + std::fmt::Debug> Subquotient<E> {
    pub fn new<F: Field<Elem = E>>(field: &F, cycles: &[Vec<E>], boundaries: &[Vec<E>], n: usize) -> Self {
        let boundary = rref(field, boundaries, n);
        let reduced: Vec<Vec<E>> = cycles.iter().map(|z| reduce(field, &boundary, z)).collect();
        let basis = rref(field, &reduced, n);
        Subquotient { boundary, basis }
    }

    /// Coordinates of the class of `v` (which must lie in `Z`).
    pub fn coords<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Vec<E> {
        let u = reduce(field, &self.boundary, v);
        let c: Vec<E> = self.basis.pivots.iter().map(|&p| u[p].clone()).collect();
        debug_assert!(reduce(field, &self.basis, &u).iter().all(|x| field.is_zero(x)));
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::new(7);
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.from_i64(-1), 6);
    }

    #[test]
    fn rref_and_kernel() {
        let f = PrimeField::new(5);
        let rows = vec![vec![1, 2, 3], vec![2, 4, 0]];
        let e = rref(&f, &rows, 3);
        assert_eq!(e.rank(), 2);
        let k = kernel(&f, &rows, 3);
        assert_eq!(k.len(), 1);
        assert!(apply(&f, &rows, &k[0]).iter().all(|&x| x == 0));
    }

    #[test]
    fn subquotient_coordinates() {
        let q = Rationals;
        let z: Vec<Vec<BigRational>> = vec![
            vec![q.one(), q.zero(), q.zero()],
            vec![q.zero(), q.one(), q.zero()],
        ];
        let b = vec![vec![q.one(), q.one(), q.zero()]];
        let sq = Subquotient::new(&q, &z, &b, 3);
        assert_eq!(sq.dim(), 1);
        // e1 and -e2 are the same class
        let c1 = sq.coords(&q, &z[0]);
        let c2 = sq.coords(&q, &[q.zero(), q.from_i64(-1), q.zero()]);
        assert_eq!(c1, c2);
    }
}
