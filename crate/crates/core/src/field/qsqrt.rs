//! Exact arithmetic in `Q(sqrt d)` for a fixed positive rational `d`, used to
//! specialize `v = sqrt(q0)` at rational sample points `q0`.

use super::elem::FieldElem;
use super::ratfunc::{pow_rational, EvalError, RatFunc};
use super::traits::Field;
use num_rational::BigRational;
use num_traits::Signed;
use std::cmp::Ordering;
use std::sync::Arc;

/// `a + b sqrt(d)`. Elements without a radical part carry no `d`.
#[derive(Clone, Debug)]
pub struct QSqrt {
    a: BigRational,
    b: BigRational,
    d: Option<Arc<BigRational>>,
}

impl PartialEq for QSqrt {
    fn eq(&self, o: &Self) -> bool {
        self.a == o.a && self.b == o.b
    }
}

impl QSqrt {
    pub fn rational(a: BigRational) -> Self {
        QSqrt { a, b: BigRational::zero(), d: None }
    }

    pub fn new(a: BigRational, b: BigRational, d: Arc<BigRational>) -> Self {
        assert!(d.is_positive(), "radicand must be positive");
        if b.is_zero() {
            QSqrt::rational(a)
        } else {
            QSqrt { a, b, d: Some(d) }
        }
    }

    pub fn parts(&self) -> (&BigRational, &BigRational) {
        (&self.a, &self.b)
    }

    fn radicand(&self, o: &Self) -> Option<Arc<BigRational>> {
        match (&self.d, &o.d) {
            (Some(x), Some(y)) => {
                debug_assert!(x == y, "mixing different radicands");
                Some(x.clone())
            }
            (Some(x), None) => Some(x.clone()),
            (None, y) => y.clone(),
        }
    }

    fn build(a: BigRational, b: BigRational, d: Option<Arc<BigRational>>) -> Self {
        match d {
            Some(d) if !b.is_zero() => QSqrt { a, b, d: Some(d) },
            _ => QSqrt::rational(a),
        }
    }

    /// Exact sign of the real number `a + b sqrt(d)`.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let d = self.d.as_ref().expect("radical part without radicand");
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * d.as_ref();
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// A rational approximation, for display only.
    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let d = self.d.as_ref().and_then(|d| d.to_f64()).unwrap_or(0.0);
        a + b * d.sqrt()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }
}

impl std::fmt::Display for QSqrt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.d {
            None => write!(f, "{}", self.a),
            Some(d) => write!(f, "{} + {}*sqrt({})", self.a, self.b, d),
        }
    }
}

impl Field for QSqrt {
    fn zero() -> Self {
        QSqrt::rational(BigRational::zero())
    }
    fn one() -> Self {
        QSqrt::rational(BigRational::one())
    }
    fn from_rational(r: BigRational) -> Self {
        QSqrt::rational(r)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        QSqrt::build(&self.a + &o.a, &self.b + &o.b, self.radicand(o))
    }
    fn sub(&self, o: &Self) -> Self {
        QSqrt::build(&self.a - &o.a, &self.b - &o.b, self.radicand(o))
    }
    fn mul(&self, o: &Self) -> Self {
        let d = self.radicand(o);
        if self.b.is_zero() {
            return QSqrt::build(&self.a * &o.a, &self.a * &o.b, d);
        }
        if o.b.is_zero() {
            return QSqrt::build(&self.a * &o.a, &self.b * &o.a, d);
        }
        let dv = d.clone().expect("radicand");
        let a = &self.a * &o.a + &self.b * &o.b * dv.as_ref();
        let b = &self.a * &o.b + &self.b * &o.a;
        QSqrt::build(a, b, d)
    }
    fn neg(&self) -> Self {
        QSqrt { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if self.b.is_zero() {
            return QSqrt::rational(self.a.recip());
        }
        let d = self.d.clone().expect("radicand");
        let norm = &self.a * &self.a - &self.b * &self.b * d.as_ref();
        QSqrt::build(&self.a / &norm, -&self.b / &norm, Some(d))
    }
}

/// Evaluation of coefficients at `q = q0`, i.e. `v = sqrt(q0)`.
#[derive(Clone, Debug)]
pub struct SqrtPoint {
    q0: Arc<BigRational>,
    /// Set when `q0` is a rational square; then everything stays rational.
    v0: Option<BigRational>,
}

impl SqrtPoint {
    pub fn new(q0: BigRational) -> Self {
        assert!(q0.is_positive(), "q0 must be positive");
        let v0 = rational_sqrt(&q0);
        SqrtPoint { q0: Arc::new(q0), v0 }
    }

    pub fn q0(&self) -> &BigRational {
        &self.q0
    }

    /// `v^k` at the point.
    pub fn vpow(&self, k: i32) -> QSqrt {
        if let Some(v0) = &self.v0 {
            return QSqrt::rational(pow_rational(v0, k));
        }
        let half = k.div_euclid(2);
        let base = pow_rational(&self.q0, half);
        if k.rem_euclid(2) == 0 {
            QSqrt::rational(base)
        } else {
            QSqrt::new(BigRational::zero(), base, self.q0.clone())
        }
    }

    pub fn eval_ratfunc(&self, x: &RatFunc) -> Result<QSqrt, EvalError> {
        if x.is_zero() {
            return Ok(QSqrt::zero());
        }
        let ev = |p: &super::poly::Poly| {
            let mut acc = QSqrt::zero();
            for (k, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    acc = acc.add(&self.vpow(k as i32).mul(&QSqrt::rational(c.clone())));
                }
            }
            acc
        };
        let den = ev(x.denominator());
        if den.is_zero() {
            return Err(EvalError::DenominatorVanishes);
        }
        Ok(ev(x.numerator()).mul(&den.inv()).mul(&self.vpow(x.shift())))
    }

    /// Evaluates an element without adjoint part.
    pub fn eval(&self, x: &FieldElem) -> Result<QSqrt, EvalError> {
        if x.has_ext() {
            return Err(EvalError::ExtensionValueMissing);
        }
        self.eval_ratfunc(x.real_part())
    }
}

/// Exact square root of a nonnegative rational, if it is a square.
pub fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn sign_of_mixed_terms() {
        let d = Arc::new(r(2, 1));
        // 1 - sqrt 2 < 0, 3/2 - sqrt 2 > 0
        assert_eq!(QSqrt::new(r(1, 1), r(-1, 1), d.clone()).signum(), Ordering::Less);
        assert_eq!(QSqrt::new(r(3, 2), r(-1, 1), d).signum(), Ordering::Greater);
    }

    #[test]
    fn v_squared_is_q() {
        let p = SqrtPoint::new(r(11, 10));
        assert_eq!(p.vpow(1).mul(&p.vpow(1)), QSqrt::rational(r(11, 10)));
        assert_eq!(p.vpow(-3).mul(&p.vpow(3)), QSqrt::one());
        let sq = SqrtPoint::new(r(4, 9));
        assert_eq!(sq.vpow(1), QSqrt::rational(r(2, 3)));
    }
}
