//! Coefficient arithmetic.

mod elem;
mod poly;
mod qsqrt;
mod ratfunc;
mod traits;

pub use elem::{qint, FieldElem, Q2};
pub use poly::Poly;
pub use qsqrt::{rational_sqrt, QSqrt, SqrtPoint};
pub use ratfunc::{EvalError, RatFunc};
pub use traits::Field;

use num_rational::BigRational;

/// A ring homomorphism out of the coefficient field.
pub trait Specialize<F: Field>: Sync {
    fn map(&self, x: &FieldElem) -> Result<F, EvalError>;
}

/// The identity: stay symbolic.
#[derive(Clone, Copy, Debug, Default)]
pub struct Symbolic;

impl Specialize<FieldElem> for Symbolic {
    fn map(&self, x: &FieldElem) -> Result<FieldElem, EvalError> {
        Ok(x.clone())
    }
}

/// Evaluation at a rational `v0` (and a rational adjoint value when needed).
#[derive(Clone, Debug)]
pub struct AtV {
    pub v0: BigRational,
    pub c0: Option<BigRational>,
}

impl AtV {
    pub fn new(v0: BigRational) -> Self {
        AtV { v0, c0: None }
    }
}

impl Specialize<BigRational> for AtV {
    fn map(&self, x: &FieldElem) -> Result<BigRational, EvalError> {
        x.eval_at(&self.v0, self.c0.as_ref())
    }
}

impl Specialize<QSqrt> for SqrtPoint {
    fn map(&self, x: &FieldElem) -> Result<QSqrt, EvalError> {
        self.eval(x)
    }
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    s.trim().parse::<BigRational>().ok()
}

/// Canonical `"p/q"` rendering, used for every rational crossing an interface.
pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `q^(1/2)`-valued sample point helper: `q0` must be a rational square.
pub fn v_of_q(q0: &BigRational) -> Option<BigRational> {
    rational_sqrt(q0)
}
