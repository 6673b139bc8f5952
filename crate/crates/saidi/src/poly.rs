//! Exact SAIDI polynomials in power and binomial form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Q = BigRational;

/// Arithmetic the generic engines need: f64 for numeric work,
/// [`ReliabilityPolynomial`] for exact polynomials in p.
pub trait Value:
    Clone
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_f64(x: f64) -> Self;
}

impl Value for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
}

pub fn q_from_f64(x: f64) -> Q {
    Q::from_float(x).unwrap_or_else(Q::zero)
}

pub fn q_int(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// n choose k as an exact integer.
pub fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// F(p) = sum a_k p^k with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ReliabilityPolynomial {
    coeffs: Vec<Q>,
}

impl ReliabilityPolynomial {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| q_int(c)).collect())
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// The monomial p.
    pub fn p() -> Self {
        Self::new(vec![Q::zero(), Q::one()])
    }

    /// The polynomial 1 - p.
    pub fn q() -> Self {
        Self::new(vec![Q::one(), -Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval_exact(&self, p: &Q) -> Q {
        self.coeffs
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * p + c)
    }

    /// Evaluation in exact arithmetic, rounded once at the end.
    pub fn eval(&self, p: f64) -> f64 {
        q_to_f64(&self.eval_exact(&q_from_f64(p)))
    }

    /// Keep terms up to p^k.
    pub fn truncate(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().take(k + 1).cloned().collect())
    }

    /// Lowest k with a_k != 0.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Binomial-form coefficients relative to `m` edges.
    pub fn to_binomial(&self, m: usize) -> BinomialPolynomial {
        let b = (0..=m)
            .map(|n| {
                (0..=n).fold(Q::zero(), |acc, k| {
                    acc + self.coeff(k) * Q::from_integer(binom(m - k, n - k))
                })
            })
            .collect();
        BinomialPolynomial { coeffs: b }
    }
}

impl fmt::Display for ReliabilityPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("p")?,
                _ => write!(f, "p^{k}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Serialize for ReliabilityPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl Add for ReliabilityPolynomial {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self + &rhs
    }
}

impl<'a> Add<&'a ReliabilityPolynomial> for ReliabilityPolynomial {
    type Output = Self;
    fn add(mut self, rhs: &'a Self) -> Self {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Q::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        Self::new(self.coeffs)
    }
}

impl Neg for ReliabilityPolynomial {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Sub for ReliabilityPolynomial {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + &(-rhs)
    }
}

impl Mul for ReliabilityPolynomial {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self * &rhs
    }
}

impl<'a> Mul<&'a ReliabilityPolynomial> for ReliabilityPolynomial {
    type Output = Self;
    fn mul(self, rhs: &'a Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::default();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }
}

impl Value for ReliabilityPolynomial {
    fn zero() -> Self {
        Self::default()
    }
    fn one() -> Self {
        Self::constant(Q::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn from_f64(x: f64) -> Self {
        Self::constant(q_from_f64(x))
    }
}

/// F(p) = sum b_k p^k q^(m-k); index k holds b_k, index 0 is b_0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialPolynomial {
    coeffs: Vec<Q>,
}

impl BinomialPolynomial {
    /// `coeffs[k]` is b_k for k = 0..=m.
    pub fn new(coeffs: Vec<Q>) -> Self {
        Self { coeffs }
    }

    /// Convenience for b_1..b_m given as integers (b_0 = 0).
    pub fn from_ints(b: &[i64]) -> Self {
        Self::new(std::iter::once(Q::zero()).chain(b.iter().map(|&x| q_int(x))).collect())
    }

    pub fn m(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn to_power(&self) -> ReliabilityPolynomial {
        let m = self.m();
        let a = (0..=m)
            .map(|n| {
                (0..=n).fold(Q::zero(), |acc, k| {
                    let term = self.coeff(k) * Q::from_integer(binom(m - k, n - k));
                    if (n - k) % 2 == 0 {
                        acc + term
                    } else {
                        acc - term
                    }
                })
            })
            .collect();
        ReliabilityPolynomial::new(a)
    }

    /// Pad to `m` edges: multiplying by (p + q)^(m - m0) spreads each b_k.
    pub fn padded(&self, m: usize) -> Self {
        if m <= self.m() {
            return self.clone();
        }
        let extra = m - self.m();
        let mut out = vec![Q::zero(); m + 1];
        for (k, b) in self.coeffs.iter().enumerate() {
            for j in 0..=extra {
                out[k + j] += b * Q::from_integer(binom(extra, j));
            }
        }
        Self::new(out)
    }
}

fn lex(f: &[Q], g: &[Q]) -> Ordering {
    for (a, b) in f.iter().zip(g) {
        match a.cmp(b) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// `Less` means f is smaller (more reliable) for all p close to 0.
pub fn compare_near_zero(f: &BinomialPolynomial, g: &BinomialPolynomial) -> Ordering {
    let m = f.m().max(g.m());
    lex(f.padded(m).coeffs(), g.padded(m).coeffs())
}

/// `Less` means f is smaller for all p close to 1.
pub fn compare_near_one(f: &BinomialPolynomial, g: &BinomialPolynomial) -> Ordering {
    let m = f.m().max(g.m());
    let rf: Vec<Q> = f.padded(m).coeffs().iter().rev().cloned().collect();
    let rg: Vec<Q> = g.padded(m).coeffs().iter().rev().cloned().collect();
    lex(&rf, &rg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring2_fixture() {
        let a = ReliabilityPolynomial::from_ints(&[0, 0, 4, -2]);
        let b = a.to_binomial(3);
        assert_eq!(b, BinomialPolynomial::from_ints(&[0, 4, 2]));
        assert_eq!(b.to_power(), a);
    }

    #[test]
    fn star3_fixture() {
        let a = ReliabilityPolynomial::from_ints(&[0, 3]);
        assert_eq!(a.to_binomial(3), BinomialPolynomial::from_ints(&[3, 6, 3]));
    }

    #[test]
    fn zero_round_trip() {
        let z = ReliabilityPolynomial::default();
        assert_eq!(z.to_binomial(4).to_power(), z);
    }

    #[test]
    fn arithmetic_and_display() {
        let p = ReliabilityPolynomial::p();
        let f = (ReliabilityPolynomial::one() - ReliabilityPolynomial::q() * ReliabilityPolynomial::q()) * p.clone();
        assert_eq!(f, ReliabilityPolynomial::from_ints(&[0, 0, 2, -1]));
        assert_eq!(f.to_string(), "2p^2 - p^3");
        assert!((ReliabilityPolynomial::from_ints(&[0, 3, -1]).eval(0.1) - 0.29).abs() < 1e-15);
        assert_eq!(f.order(), Some(2));
    }

    #[test]
    fn near_zero_near_one() {
        let f = BinomialPolynomial::from_ints(&[0, 1, 5]);
        let g = BinomialPolynomial::from_ints(&[0, 2, 3]);
        assert_eq!(compare_near_zero(&f, &g), Ordering::Less);
        assert_eq!(compare_near_one(&f, &g), Ordering::Greater);
        assert_eq!(compare_near_zero(&f, &f), Ordering::Equal);
    }

    #[test]
    fn padding_preserves_value() {
        let b = BinomialPolynomial::from_ints(&[0, 4, 2]);
        let padded = b.padded(5);
        assert_eq!(padded.to_power(), b.to_power());
    }
}
