//! Exact truncated Laurent series in `q` with overflow-checked `i128`
//! coefficients, plus finite polynomials and the MacMahon function.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A Laurent series `sum c_k q^k` known exactly for `min_exp <= k <= order`.
///
/// Coefficients below `min_exp` are zero; coefficients above `order` are
/// unknown and never read.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    min_exp: i64,
    coeffs: Vec<i128>,
    order: i64,
}

/// Result of comparing two series on the range where both are known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesDiff {
    /// Lowest compared exponent.
    pub lo: i64,
    /// Highest compared exponent (`hi < lo` means nothing was compared).
    pub hi: i64,
    pub first_mismatch: Option<i64>,
}

impl SeriesDiff {
    pub fn matches(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

fn checked_add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow("series addition"))
}

fn checked_mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("series multiplication"))
}

impl TruncSeries {
    /// Builds a series from coefficients of `q^min_exp, q^(min_exp+1), ...`.
    /// Entries past `order` are dropped and missing ones are zero.
    pub fn new(min_exp: i64, mut coeffs: Vec<i128>, order: i64) -> Self {
        let len = (order - min_exp + 1).max(0) as usize;
        coeffs.resize(len, 0);
        TruncSeries { min_exp, coeffs, order }
    }

    /// Ordinary power series `c_0 + c_1 q + ...` truncated at `order`.
    pub fn from_coeffs(coeffs: Vec<i128>, order: i64) -> Self {
        Self::new(0, coeffs, order)
    }

    pub fn zero(order: i64) -> Self {
        Self::new(0, Vec::new(), order)
    }

    pub fn one(order: i64) -> Self {
        Self::new(0, vec![1], order)
    }

    /// `c * q^exp` truncated at `order`.
    pub fn monomial(coeff: i128, exp: i64, order: i64) -> Self {
        Self::new(exp, vec![coeff], order)
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Stored coefficients, index `i` holding the coefficient of `q^(min_exp+i)`.
    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    /// Coefficient of `q^k`, or `None` if `k` lies above the truncation order.
    pub fn coeff(&self, k: i64) -> Option<i128> {
        if k > self.order {
            None
        } else if k < self.min_exp {
            Some(0)
        } else {
            Some(self.coeffs[(k - self.min_exp) as usize])
        }
    }

    /// Coefficients of `q^0 ..= q^order` (ordinary part only).
    pub fn ordinary_coeffs(&self) -> Vec<i128> {
        (0..=self.order).map(|k| self.coeff(k).unwrap_or(0)).collect()
    }

    /// Same series with a lower truncation order.
    pub fn truncate(&self, order: i64) -> Self {
        let order = order.min(self.order);
        Self::new(self.min_exp, self.coeffs.clone(), order)
    }

    pub fn neg(&self) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.checked_neg().ok_or(Error::Overflow("series negation")))
            .collect::<Result<_>>()?;
        Ok(TruncSeries { coeffs, ..self.clone() })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let min_exp = self.min_exp.min(other.min_exp);
        let order = self.order.min(other.order);
        let coeffs = (min_exp..=order)
            .map(|k| checked_add(self.coeff(k).unwrap(), other.coeff(k).unwrap()))
            .collect::<Result<_>>()?;
        Ok(Self::new(min_exp, coeffs, order))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg()?)
    }

    /// Product; known up to `min(a.order + b.min_exp, b.order + a.min_exp)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let min_exp = self.min_exp + other.min_exp;
        let order = (self.order + other.min_exp).min(other.order + self.min_exp);
        let len = (order - min_exp + 1).max(0) as usize;
        let mut coeffs = vec![0i128; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 || i >= len {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                coeffs[i + j] = checked_add(coeffs[i + j], checked_mul(a, b)?)?;
            }
        }
        Ok(TruncSeries { min_exp, coeffs, order })
    }

    /// Multiplicative inverse. The lowest stored coefficient must be a unit.
    pub fn inverse(&self) -> Result<Self> {
        let lead = match self.coeffs.first() {
            Some(&c) if c == 1 || c == -1 => c,
            Some(&c) => return Err(Error::NotInvertible(c.to_string())),
            None => return Err(Error::NotInvertible("unknown".into())),
        };
        let n = self.coeffs.len();
        let mut inv = vec![0i128; n];
        inv[0] = lead;
        for k in 1..n {
            let mut acc = 0i128;
            for i in 1..=k {
                acc = checked_add(acc, checked_mul(self.coeffs[i], inv[k - i])?)?;
            }
            // lead is its own inverse
            inv[k] = checked_mul(-lead, acc)?;
        }
        Ok(TruncSeries {
            min_exp: -self.min_exp,
            coeffs: inv,
            order: self.order - 2 * self.min_exp,
        })
    }

    pub fn pow(&self, exp: u32) -> Result<Self> {
        if exp == 0 {
            return Ok(TruncSeries::one(self.order));
        }
        let mut result = self.clone();
        for _ in 1..exp {
            result = result.mul(self)?;
        }
        Ok(result)
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        TruncSeries {
            min_exp: self.min_exp + shift,
            coeffs: self.coeffs.clone(),
            order: self.order + shift,
        }
    }

    /// Compares coefficients on the common known range.
    pub fn compare(&self, other: &Self) -> SeriesDiff {
        let lo = self.min_exp.min(other.min_exp);
        let hi = self.order.min(other.order);
        let first_mismatch = (lo..=hi).find(|&k| self.coeff(k) != other.coeff(k));
        SeriesDiff { lo, hi, first_mismatch }
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let k = self.min_exp + i as i64;
            let (sign, abs) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (k, abs) {
                (0, a) => write!(f, "{a}")?,
                (1, 1) => write!(f, "q")?,
                (1, a) => write!(f, "{a}q")?,
                (k, 1) => write!(f, "q^{k}")?,
                (k, a) => write!(f, "{a}q^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    min_exp: i64,
    order: i64,
    coeffs: Vec<String>,
}

impl Serialize for TruncSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesRepr {
            min_exp: self.min_exp,
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::deserialize(d)?;
        let coeffs = repr
            .coeffs
            .iter()
            .map(|c| c.parse::<i128>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let expected = (repr.order - repr.min_exp + 1).max(0) as usize;
        if coeffs.len() > expected {
            return Err(serde::de::Error::custom(format!(
                "{} coefficients given for exponents {}..={}",
                coeffs.len(),
                repr.min_exp,
                repr.order
            )));
        }
        Ok(TruncSeries::new(repr.min_exp, coeffs, repr.order))
    }
}

/// `prod_{n>=1} (1 - q^n)^(-n * power)` truncated at `order`.
pub fn macmahon(order: i64, power: u32) -> Result<TruncSeries> {
    if order < 0 {
        return Err(Error::InvalidArgument(format!("negative order {order}")));
    }
    if power == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let len = order as usize + 1;
    let mut c = vec![0i128; len];
    c[0] = 1;
    for n in 1..len {
        // multiply by 1/(1 - q^n), n * power times
        for _ in 0..(n as u64 * power as u64) {
            for k in n..len {
                c[k] = checked_add(c[k], c[k - n])?;
            }
        }
    }
    Ok(TruncSeries::from_coeffs(c, order))
}

/// A polynomial `sum c_i q^i` with exact coefficients.
///
/// Trailing zeros are trimmed, so the leading coefficient is nonzero unless
/// the polynomial is zero (stored as an empty list, degree 0).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinitePoly {
    coeffs: Vec<i128>,
}

impl FinitePoly {
    pub fn new(mut coeffs: Vec<i128>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FinitePoly { coeffs }
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `q^d P(1/q)`.
    pub fn reciprocal(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        FinitePoly::new(coeffs)
    }

    pub fn is_palindromic(&self) -> bool {
        self.reciprocal() == *self
    }

    /// Reads off `q^0 ..= q^degree` of an ordinary series known at least that far.
    pub fn from_series(s: &TruncSeries, degree: usize) -> Result<Self> {
        if s.order() < degree as i64 {
            return Err(Error::InvalidArgument(format!(
                "series known to order {} cannot give a degree {degree} polynomial",
                s.order()
            )));
        }
        if s.min_exp() < 0 && s.coeffs().iter().take((-s.min_exp()) as usize).any(|&c| c != 0) {
            return Err(Error::InvalidArgument("series has negative powers".into()));
        }
        Ok(FinitePoly::new((0..=degree as i64).map(|k| s.coeff(k).unwrap()).collect()))
    }
}

impl fmt::Display for FinitePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = TruncSeries::from_coeffs(self.coeffs.clone(), self.degree() as i64).to_string();
        write!(f, "{}", s.rsplit_once(" + O(").map_or(s.as_str(), |(p, _)| p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ser(c: &[i128], n: i64) -> TruncSeries {
        TruncSeries::from_coeffs(c.to_vec(), n)
    }

    /// Expands the product formula one factor `(1-q^n)^(-n*power)` at a time
    /// by the binomial series, independently of `macmahon`'s in-place loop.
    fn product_oracle(order: usize, power: u64) -> Vec<i128> {
        let mut acc = vec![0i128; order + 1];
        acc[0] = 1;
        for n in 1..=order {
            let e = n as u64 * power;
            // (1-x)^(-e) = sum_j C(e+j-1, j) x^j, with x = q^n
            let mut factor = vec![0i128; order + 1];
            let mut binom = 1i128;
            for j in 0..=order / n {
                factor[j * n] = binom;
                binom = binom * (e as i128 + j as i128) / (j as i128 + 1);
            }
            let mut next = vec![0i128; order + 1];
            for i in 0..=order {
                for j in 0..=order - i {
                    next[i + j] += acc[i] * factor[j];
                }
            }
            acc = next;
        }
        acc
    }

    /// Counts plane partitions of each size directly: rows of weakly
    /// decreasing parts, each row dominated entrywise by the previous one.
    fn plane_partition_counts(order: usize) -> Vec<i128> {
        fn rows(prev: &[usize], remaining: usize, counts: &mut [i128], used: usize) {
            counts[used] += 1;
            // choose next row, weakly decreasing and <= prev entrywise
            fn fill(
                prev: &[usize],
                pos: usize,
                cur: &mut Vec<usize>,
                remaining: usize,
                used: usize,
                counts: &mut [i128],
            ) {
                if pos == prev.len() || (pos > 0 && cur[pos - 1] == 0) {
                    let row: Vec<usize> = cur.iter().copied().filter(|&v| v > 0).collect();
                    let s: usize = row.iter().sum();
                    if s > 0 {
                        rows(&row, remaining - s, counts, used + s);
                    }
                    return;
                }
                let cap = if pos > 0 { prev[pos].min(cur[pos - 1]) } else { prev[pos] };
                let so_far: usize = cur.iter().sum();
                for v in 0..=cap.min(remaining - so_far) {
                    cur.push(v);
                    fill(prev, pos + 1, cur, remaining, used, counts);
                    cur.pop();
                }
            }
            fill(prev, 0, &mut Vec::new(), remaining, used, counts);
        }
        let mut counts = vec![0i128; order + 1];
        rows(&vec![order; order], order, &mut counts, 0);
        counts
    }

    #[test]
    fn macmahon_matches_both_oracles() {
        let expected = [1, 1, 3, 6, 13, 24, 48];
        assert_eq!(product_oracle(6, 1), expected);
        assert_eq!(plane_partition_counts(6), expected);
        assert_eq!(macmahon(6, 1).unwrap().ordinary_coeffs(), expected);
    }

    #[test]
    fn macmahon_squared_and_trivial() {
        let m1 = product_oracle(4, 1);
        let mut sq = vec![0i128; 5];
        for i in 0..5 {
            for j in 0..5 - i {
                sq[i + j] += m1[i] * m1[j];
            }
        }
        assert_eq!(sq, [1, 2, 7, 18, 47]);
        assert_eq!(macmahon(4, 2).unwrap().ordinary_coeffs(), sq);
        assert_eq!(macmahon(0, 3).unwrap().ordinary_coeffs(), [1]);
        assert!(macmahon(3, 0).is_err());
        assert!(macmahon(-1, 1).is_err());
    }

    #[test]
    fn mul_examples() {
        let a = ser(&[1, 1], 2);
        assert_eq!(a.mul(&a).unwrap().ordinary_coeffs(), [1, 2, 1]);
        let m = macmahon(3, 1).unwrap();
        assert_eq!(m.mul(&ser(&[1, 1], 3)).unwrap().ordinary_coeffs(), [1, 2, 4, 9]);
        assert_eq!(m.mul(&TruncSeries::one(3)).unwrap(), m);
    }

    #[test]
    fn mul_order_accounts_for_shifts() {
        let a = TruncSeries::new(-1, vec![1, 2], 3);
        let b = TruncSeries::new(2, vec![1], 4);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.min_exp(), 1);
        assert_eq!(p.order(), 4 - 1);
        assert_eq!(p.coeff(2), Some(2));
    }

    #[test]
    fn inverse_examples() {
        let g = ser(&[1, -1], 3).inverse().unwrap();
        assert_eq!(g.ordinary_coeffs(), [1, 1, 1, 1]);
        let m = macmahon(2, 1).unwrap().inverse().unwrap();
        assert_eq!(m.ordinary_coeffs(), [1, -1, -2]);
        assert_eq!(TruncSeries::one(5).inverse().unwrap(), TruncSeries::one(5));
        assert!(matches!(ser(&[2, 1], 3).inverse(), Err(Error::NotInvertible(_))));
        assert!(matches!(ser(&[0, 1], 3).inverse(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn laurent_inverse() {
        // q^-1 (1 + q) inverts to q (1 - q + q^2 - ...)
        let a = TruncSeries::new(-1, vec![1, 1], 3);
        let b = a.inverse().unwrap();
        assert_eq!(b.min_exp(), 1);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.compare(&TruncSeries::one(p.order())).first_mismatch, None);
    }

    #[test]
    fn overflow_is_reported() {
        let big = ser(&[1, i128::MAX / 2 + 1], 2);
        assert!(matches!(big.mul(&big), Err(Error::Overflow(_))));
        assert!(macmahon(60, 2000).is_err());
    }

    #[test]
    fn compare_reports_common_range() {
        let a = ser(&[1, 1, 3], 2);
        let b = ser(&[1, 1, 3, 6, 13], 4);
        let d = a.compare(&b);
        assert_eq!((d.lo, d.hi, d.first_mismatch), (0, 2, None));
        let c = ser(&[1, 2, 3], 2);
        assert_eq!(a.compare(&c).first_mismatch, Some(1));
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(FinitePoly::new(vec![1, 1]).reciprocal(), FinitePoly::new(vec![1, 1]));
        assert_eq!(
            FinitePoly::new(vec![2, 3, 0, 5]).reciprocal(),
            FinitePoly::new(vec![5, 0, 3, 2])
        );
        assert_eq!(FinitePoly::new(vec![7]).reciprocal(), FinitePoly::new(vec![7]));
        assert!(FinitePoly::new(vec![1, 1]).is_palindromic());
        assert!(!FinitePoly::new(vec![1, 2, 0, 1]).is_palindromic());
        assert!(FinitePoly::new(vec![0]).is_palindromic());
        assert_eq!(FinitePoly::new(vec![0, 0]).degree(), 0);
    }

    #[test]
    fn display() {
        assert_eq!(ser(&[1, -2, 0, 3], 3).to_string(), "1 - 2q + 3q^3 + O(q^4)");
        assert_eq!(FinitePoly::new(vec![1, 1]).to_string(), "1 + q");
    }

    #[test]
    fn json_shape() {
        let s = TruncSeries::new(-1, vec![4, 0, 4], 1);
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v, serde_json::json!({"min_exp": -1, "order": 1, "coeffs": ["4", "0", "4"]}));
        let back: TruncSeries = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }

    fn arb_series(order: i64) -> impl Strategy<Value = TruncSeries> {
        proptest::collection::vec(-50i128..50, 0..=(order as usize + 1))
            .prop_map(move |c| TruncSeries::from_coeffs(c, order))
    }

    fn arb_unit_series(order: i64) -> impl Strategy<Value = TruncSeries> {
        (prop_oneof![Just(1i128), Just(-1i128)], proptest::collection::vec(-20i128..20, 0..8))
            .prop_map(move |(u, mut c)| {
                c.insert(0, u);
                TruncSeries::from_coeffs(c, order)
            })
    }

    proptest! {
        #[test]
        fn mul_commutative_associative(a in arb_series(6), b in arb_series(6), c in arb_series(6)) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn inverse_is_inverse(a in arb_unit_series(7)) {
            let p = a.mul(&a.inverse().unwrap()).unwrap();
            prop_assert_eq!(p, TruncSeries::one(7));
        }

        #[test]
        fn reciprocal_involution(mut c in proptest::collection::vec(-9i128..9, 1..8), c0 in 1i128..9) {
            c[0] = c0;
            let p = FinitePoly::new(c);
            prop_assert_eq!(p.reciprocal().reciprocal(), p);
        }

        #[test]
        fn macmahon_power_is_power(order in 0i64..9, r in 1u32..4) {
            let base = macmahon(order, 1).unwrap();
            prop_assert_eq!(macmahon(order, r).unwrap(), base.pow(r).unwrap());
        }
    }
}
