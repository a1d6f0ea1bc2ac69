//! Dense univariate polynomials over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Polynomial in `v` with coefficients stored from the constant term upwards.
/// The coefficient vector never has a trailing zero, so the zero polynomial
/// is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    c: Vec<BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(r: BigRational) -> Self {
        if r.is_zero() {
            Poly::zero()
        } else {
            Poly { c: vec![r] }
        }
    }

    pub fn monomial(r: BigRational, k: usize) -> Self {
        if r.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = r;
        Poly { c }
    }

    pub fn from_coeffs(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.c.last()
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.c.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Number of vanishing low-order coefficients (the v-adic valuation).
    pub fn valuation(&self) -> usize {
        self.c.iter().take_while(|x| x.is_zero()).count()
    }

    pub fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(k <= self.valuation() || self.is_zero());
        if self.is_zero() {
            return Poly::zero();
        }
        Poly { c: self.c[k..].to_vec() }
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut c = vec![BigRational::zero(); k];
        c.extend(self.c.iter().cloned());
        Poly { c }
    }

    pub fn neg(&self) -> Poly {
        Poly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let (long, short) = if self.c.len() >= o.c.len() { (self, o) } else { (o, self) };
        let mut c = long.c.clone();
        for (i, x) in short.c.iter().enumerate() {
            c[i] += x;
        }
        Poly::from_coeffs(c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i);
            let b = o.c.get(i);
            c.push(match (a, b) {
                (Some(a), Some(b)) => a - b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => -b,
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(c)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if self.c.len() == 1 {
            return o.scale(&self.c[0]);
        }
        if o.c.len() == 1 {
            return self.scale(&o.c[0]);
        }
        let mut c = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Poly::from_coeffs(c)
    }

    pub fn scale(&self, r: &BigRational) -> Poly {
        if r.is_zero() {
            return Poly::zero();
        }
        if r.is_one() {
            return self.clone();
        }
        Poly { c: self.c.iter().map(|x| x * r).collect() }
    }

    /// Euclidean division; panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let Some(sd) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if sd < dd {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = d.c[dd].recip();
        let mut r = self.c.clone();
        let mut q = vec![BigRational::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let t = &r[k + dd] * &lead_inv;
            if t.is_zero() {
                continue;
            }
            for (j, x) in d.c.iter().enumerate() {
                if !x.is_zero() {
                    r[k + j] -= &t * x;
                }
            }
            q[k] = t;
        }
        r.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    /// Exact division; the caller guarantees divisibility.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => Poly::zero(),
            Some(l) if l.is_one() => self.clone(),
            Some(l) => self.scale(&l.recip()),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        if self.is_constant() && !self.is_zero() || o.is_constant() && !o.is_zero() {
            return Poly::one();
        }
        let mut a = self.monic();
        let mut b = o.monic();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Smallest positive integer `m` such that `m * self` has integer coefficients.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    pub(crate) fn fmt_in(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let coeff = if a.is_integer() { a.numer().to_string() } else { format!("{}/{}", a.numer(), a.denom()) };
            match k {
                0 => write!(f, "{coeff}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{coeff}*")?;
                    }
                    if k == 1 {
                        write!(f, "{var}")?;
                    } else {
                        write!(f, "{var}^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_in(f, "v")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_coeffs(c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    #[test]
    fn divrem_reconstructs() {
        let a = p(&[1, 0, -3, 2, 5]);
        let d = p(&[2, 1]);
        let (q, r) = a.divrem(&d);
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn gcd_of_products() {
        let a = p(&[-1, 0, 1]); // v^2 - 1
        let b = p(&[1, 2, 1]); // (v + 1)^2
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        assert_eq!(p(&[3]).gcd(&a), Poly::one());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 0, 0, 0, 1]).to_string(), "v^4 - 1");
        assert_eq!(p(&[0, -2]).to_string(), "-2*v");
    }
}
