//! The coefficient field: rational functions in `v = q^(1/2)`, optionally
//! extended by an adjoint `c` with `c^2 = q2 + q2^-1`.

use super::ratfunc::{EvalError, RatFunc};
use super::traits::Field;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Choice of the parameter `q2` entering the short-node action formulas.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Q2 {
    /// `q2 = q^(1/2) = v`
    #[serde(rename = "q^1/2")]
    HalfQ,
    /// `q2 = q = v^2`
    #[serde(rename = "q")]
    Q,
    /// `q2 = q^2 = v^4`
    #[serde(rename = "q^2")]
    QSquared,
}

impl Q2 {
    pub const ALL: [Q2; 3] = [Q2::HalfQ, Q2::Q, Q2::QSquared];

    /// Exponent `e` with `q2 = v^e`.
    pub fn v_exponent(self) -> i32 {
        match self {
            Q2::HalfQ => 1,
            Q2::Q => 2,
            Q2::QSquared => 4,
        }
    }

    /// `q2 + q2^-1`, the value of `c^2`.
    pub fn c_squared(self) -> RatFunc {
        let e = self.v_exponent();
        RatFunc::vpow(e).add(&RatFunc::vpow(-e))
    }

    pub fn label(self) -> &'static str {
        match self {
            Q2::HalfQ => "q^1/2",
            Q2::Q => "q",
            Q2::QSquared => "q^2",
        }
    }

    pub fn parse(s: &str) -> Option<Q2> {
        match s {
            "q^1/2" | "q1/2" | "sqrt-q" | "half" => Some(Q2::HalfQ),
            "q" => Some(Q2::Q),
            "q^2" | "q2" => Some(Q2::QSquared),
            _ => None,
        }
    }
}

/// `a + b c`. When `b = 0` the extension tag is dropped, so equal values
/// have equal representations.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct FieldElem {
    a: RatFunc,
    b: RatFunc,
    ext: Option<Q2>,
}

impl FieldElem {
    pub fn from_ratfunc(a: RatFunc) -> Self {
        FieldElem { a, b: RatFunc::zero(), ext: None }
    }

    pub fn with_ext(a: RatFunc, b: RatFunc, q2: Q2) -> Self {
        if b.is_zero() {
            FieldElem::from_ratfunc(a)
        } else {
            FieldElem { a, b, ext: Some(q2) }
        }
    }

    /// The adjoint `c` itself.
    pub fn c(q2: Q2) -> Self {
        FieldElem::with_ext(RatFunc::zero(), RatFunc::one(), q2)
    }

    pub fn vpow(k: i32) -> Self {
        FieldElem::from_ratfunc(RatFunc::vpow(k))
    }

    /// `q^k = v^(2k)`.
    pub fn qpow(k: i32) -> Self {
        FieldElem::vpow(2 * k)
    }

    pub fn v() -> Self {
        FieldElem::vpow(1)
    }

    pub fn q() -> Self {
        FieldElem::vpow(2)
    }

    pub fn rational(r: BigRational) -> Self {
        FieldElem::from_ratfunc(RatFunc::from_rational(r))
    }

    pub fn int(i: i64) -> Self {
        FieldElem::from_ratfunc(RatFunc::from_int(i))
    }

    /// `tau - tau^-1` for `tau = v^k`.
    pub fn nu(k: i32) -> Self {
        FieldElem::vpow(k).sub(&FieldElem::vpow(-k))
    }

    pub fn real_part(&self) -> &RatFunc {
        &self.a
    }

    pub fn ext_part(&self) -> Option<(&RatFunc, Q2)> {
        self.ext.map(|q2| (&self.b, q2))
    }

    pub fn has_ext(&self) -> bool {
        self.ext.is_some()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.ext.is_some() {
            None
        } else {
            self.a.as_rational()
        }
    }

    /// `(r, k)` when the element is `r v^k`.
    pub fn as_monomial(&self) -> Option<(BigRational, i32)> {
        if self.ext.is_some() || self.a.is_zero() {
            return None;
        }
        if self.a.numerator().is_constant() && self.a.denominator().is_one() {
            Some((self.a.numerator().coeff(0), self.a.shift()))
        } else {
            None
        }
    }

    fn join(&self, o: &Self) -> Option<Q2> {
        match (self.ext, o.ext) {
            (Some(x), Some(y)) => {
                assert_eq!(x, y, "mixing adjoints for different q2 conventions");
                Some(x)
            }
            (x, None) => x,
            (None, y) => y,
        }
    }

    /// Substitutes `v -> v^-1` in both components (the adjoint is fixed).
    pub fn bar(&self) -> Self {
        match self.ext {
            None => FieldElem::from_ratfunc(self.a.bar()),
            Some(q2) => FieldElem::with_ext(self.a.bar(), self.b.bar(), q2),
        }
    }

    /// Value at `v = v0` and, if the extension is present, `c = c0`.
    pub fn eval_at(&self, v0: &BigRational, c0: Option<&BigRational>) -> Result<BigRational, EvalError> {
        let a = self.a.eval(v0)?;
        match self.ext {
            None => Ok(a),
            Some(q2) => {
                let c0 = c0.ok_or(EvalError::ExtensionValueMissing)?;
                let want = q2.c_squared().eval(v0)?;
                if c0 * c0 != want {
                    return Err(EvalError::ExtensionValueInconsistent);
                }
                Ok(a + self.b.eval(v0)? * c0)
            }
        }
    }
}

impl Field for FieldElem {
    fn zero() -> Self {
        FieldElem::default()
    }
    fn one() -> Self {
        FieldElem::from_ratfunc(RatFunc::one())
    }
    fn from_rational(r: BigRational) -> Self {
        FieldElem::rational(r)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn is_one(&self) -> bool {
        self.ext.is_none() && self.a.is_one()
    }
    fn add(&self, o: &Self) -> Self {
        match self.join(o) {
            None => FieldElem::from_ratfunc(self.a.add(&o.a)),
            Some(q2) => FieldElem::with_ext(self.a.add(&o.a), self.b.add(&o.b), q2),
        }
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        match (self.ext, o.ext) {
            (None, None) => FieldElem::from_ratfunc(self.a.mul(&o.a)),
            (Some(q2), None) => FieldElem::with_ext(self.a.mul(&o.a), self.b.mul(&o.a), q2),
            (None, Some(q2)) => FieldElem::with_ext(self.a.mul(&o.a), self.a.mul(&o.b), q2),
            (Some(_), Some(_)) => {
                let q2 = self.join(o).expect("extension present");
                let a = self.a.mul(&o.a).add(&self.b.mul(&o.b).mul(&q2.c_squared()));
                let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
                FieldElem::with_ext(a, b, q2)
            }
        }
    }
    fn neg(&self) -> Self {
        FieldElem { a: self.a.neg(), b: self.b.neg(), ext: self.ext }
    }
    fn inv(&self) -> Self {
        match self.ext {
            None => FieldElem::from_ratfunc(self.a.inv()),
            Some(q2) => {
                let norm = self.a.mul(&self.a).sub(&self.b.mul(&self.b).mul(&q2.c_squared()));
                let ni = norm.inv();
                FieldElem::with_ext(self.a.mul(&ni), self.b.neg().mul(&ni), q2)
            }
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ext {
            None => write!(f, "{}", self.a),
            Some(_) if self.a.is_zero() => write!(f, "({})*c", self.b),
            Some(_) => write!(f, "{} + ({})*c", self.a, self.b),
        }
    }
}

/// `sum_{j<k} t^j` for `t = v^t_exp`.
pub fn qint(k: u32, t_exp: i32) -> FieldElem {
    if k == 0 {
        return FieldElem::zero();
    }
    let lo = t_exp.min(0) * (k as i32 - 1);
    let span = (t_exp.unsigned_abs() * (k - 1)) as usize;
    let mut coeffs = vec![BigRational::zero(); span + 1];
    for j in 0..k as i32 {
        let e = (t_exp * j - lo) as usize;
        coeffs[e] += BigRational::one();
    }
    FieldElem::from_ratfunc(RatFunc::laurent(coeffs, lo))
}
