//! Dense univariate polynomials with scalar coefficients, used for exact
//! segmentwise integration.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// `Σ c[k] τ^k`, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    c: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(a: Scalar) -> Self {
        Poly::from_coeffs(vec![a])
    }

    /// `a·τ + b`.
    pub fn linear(a: Scalar, b: Scalar) -> Self {
        Poly::from_coeffs(vec![b, a])
    }

    pub fn from_coeffs(mut c: Vec<Scalar>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.c.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * x) + a;
        }
        acc
    }

    pub fn scale(&self, a: &Scalar) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.c.iter().map(|x| x * a).collect())
    }

    /// The antiderivative vanishing at 0.
    pub fn integral(&self) -> Poly {
        let mut out = Vec::with_capacity(self.c.len() + 1);
        out.push(Scalar::zero());
        for (k, a) in self.c.iter().enumerate() {
            let r = BigRational::new(BigInt::one(), BigInt::from(k as u64 + 1));
            out.push(a.scale(&r));
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::constant(Scalar::one());
        for _ in 0..e {
            out = &out * self;
        }
        out
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        Poly::from_coeffs((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.c.len().max(rhs.c.len());
        Poly::from_coeffs((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::from_coeffs(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrate_and_evaluate() {
        let p = Poly::linear(Scalar::from_int(2), Scalar::from_int(1));
        let q = p.integral();
        assert_eq!(q.coeffs(), &[Scalar::zero(), Scalar::one(), Scalar::one()]);
        assert_eq!(q.eval(&Scalar::from_int(3)), Scalar::from_int(12));
        assert_eq!((&p * &p).eval(&Scalar::ratio(1, 2)), Scalar::from_int(4));
        assert!((&p - &p).is_zero());
        assert_eq!(p.pow(0), Poly::constant(Scalar::one()));
    }
}
