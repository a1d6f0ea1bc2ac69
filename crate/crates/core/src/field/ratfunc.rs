//! Rational functions in `v` over the rationals, kept in a canonical form.

use super::poly::Poly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// `v^shift * num / den` with `num`, `den` coprime, both with nonzero
/// constant term, and `den` monic. Zero is `num = 0, den = 1, shift = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
    shift: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("denominator vanishes at the evaluation point")]
    DenominatorVanishes,
    #[error("supplied adjoint value does not square to the required element")]
    ExtensionValueInconsistent,
    #[error("adjoint value required but not supplied")]
    ExtensionValueMissing,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one(), shift: 0 }
    }

    pub fn one() -> Self {
        RatFunc::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        RatFunc { num: Poly::constant(r), den: Poly::one(), shift: 0 }
    }

    pub fn from_int(i: i64) -> Self {
        RatFunc::from_rational(BigRational::from_integer(BigInt::from(i)))
    }

    /// `r * v^k`.
    pub fn monomial(r: BigRational, k: i32) -> Self {
        if r.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: Poly::constant(r), den: Poly::one(), shift: k }
    }

    pub fn vpow(k: i32) -> Self {
        RatFunc::monomial(BigRational::one(), k)
    }

    /// Laurent polynomial `sum_k c_k v^(k + low)`.
    pub fn laurent(coeffs: Vec<BigRational>, low: i32) -> Self {
        RatFunc::from_parts(Poly::from_coeffs(coeffs), Poly::one(), low)
    }

    /// Canonicalizes `v^shift * num / den`.
    pub fn from_parts(num: Poly, den: Poly, shift: i32) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let vn = num.valuation();
        let vd = den.valuation();
        let mut num = num.shift_down(vn);
        let mut den = den.shift_down(vd);
        let shift = shift + vn as i32 - vd as i32;
        if !den.is_constant() && !num.is_constant() {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
        }
        let l = den.lead().expect("nonzero").clone();
        if !l.is_one() {
            let li = l.recip();
            num = num.scale(&li);
            den = den.scale(&li);
        }
        RatFunc { num, den, shift }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.den.is_one() && self.num.is_one()
    }

    /// True when the value is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Rational constant if the element has no `v` dependence.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.shift == 0 && self.den.is_one() && self.num.is_constant() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone(), shift: self.shift }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(o.shift);
        let a = self.num.shift_up((self.shift - s) as usize);
        let b = o.num.shift_up((o.shift - s) as usize);
        if self.den == o.den {
            return RatFunc::from_parts(a.add(&b), self.den.clone(), s);
        }
        let g = self.den.gcd(&o.den);
        let (d1, d2) = if g.is_one() {
            (self.den.clone(), o.den.clone())
        } else {
            (self.den.div_exact(&g), o.den.div_exact(&g))
        };
        let num = a.mul(&d2).add(&b.mul(&d1));
        let den = self.den.mul(&d2);
        RatFunc::from_parts(num, den, s)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        let shift = self.shift + o.shift;
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: self.num.mul(&o.num), den: Poly::one(), shift };
        }
        let g1 = if o.den.is_one() { Poly::one() } else { self.num.gcd(&o.den) };
        let g2 = if self.den.is_one() { Poly::one() } else { o.num.gcd(&self.den) };
        let n1 = if g1.is_one() { self.num.clone() } else { self.num.div_exact(&g1) };
        let d2 = if g1.is_one() { o.den.clone() } else { o.den.div_exact(&g1) };
        let n2 = if g2.is_one() { o.num.clone() } else { o.num.div_exact(&g2) };
        let d1 = if g2.is_one() { self.den.clone() } else { self.den.div_exact(&g2) };
        let num = n1.mul(&n2);
        // Quotients of monic polynomials by monic factors stay monic.
        let den = d1.mul(&d2);
        RatFunc { num, den, shift }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { num: self.num.scale(r), den: self.den.clone(), shift: self.shift }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let l = self.num.lead().expect("nonzero").recip();
        RatFunc { num: self.den.scale(&l), den: self.num.scale(&l), shift: -self.shift }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn pow(&self, k: i32) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Substitutes `v -> v^-1`.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let rev = |p: &Poly| Poly::from_coeffs(p.coeffs().iter().rev().cloned().collect());
        RatFunc::from_parts(rev(&self.num), rev(&self.den), -self.shift - dn as i32 + dd as i32)
    }

    pub fn eval(&self, v0: &BigRational) -> Result<BigRational, EvalError> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        assert!(!v0.is_zero(), "evaluation at v = 0");
        let d = self.den.eval(v0);
        if d.is_zero() {
            return Err(EvalError::DenominatorVanishes);
        }
        let vp = pow_rational(v0, self.shift);
        Ok(self.num.eval(v0) / d * vp)
    }
}

pub(crate) fn pow_rational(x: &BigRational, k: i32) -> BigRational {
    let base = if k < 0 { x.recip() } else { x.clone() };
    num_traits::pow::pow(base, k.unsigned_abs() as usize)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let (num, den) = if self.shift >= 0 {
            (self.num.shift_up(self.shift as usize), self.den.clone())
        } else {
            (self.num.clone(), self.den.shift_up((-self.shift) as usize))
        };
        if den.is_one() {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/({den})")
        }
    }
}
