//! The fiber exterior algebras `Lambda^+` and `Lambda^-` on `M` generators,
//! the Kähler form, its powers, the Lefschetz operator, primitive
//! decomposition and the Hodge map.
//!
//! Forms are stored on the sorted basis `e+_I ^ e-_J` (or `e-_J ^ e+_I` for
//! the minus-first ordering) keyed by bitmasks, with bit `i - 1` standing for
//! the generator `i`. Powers of the imaginary unit never enter the
//! coefficients: `kappa` is stored as its real part `sum_i e+_i ^ e-_i` and
//! every caller carries the phase separately.

use crate::field::{fmt_rational, AtV, EvalError, Field, FieldElem, Specialize, SqrtPoint};
use crate::linalg::{nullspace, Echelon, SparseVec};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

pub const MAX_M: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("index {0} outside 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("fiber rank M = {0} outside 1..={MAX_M}")]
    BadRank(usize),
    #[error("lambda list has length {0}, expected {1}")]
    LambdaLength(usize, usize),
    #[error("lambda_{0} is zero")]
    ZeroLambda(usize),
    #[error("Lefschetz decomposition singular in bidegree ({0}, {1})")]
    DecompositionSingular(usize, usize),
    #[error("forms with different orderings or ranks")]
    Mismatch,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Which exterior algebra a word lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Leg {
    Plus,
    Minus,
}

/// Basis ordering of mixed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Order {
    /// `e+_I ^ e-_J`
    PlusFirst,
    /// `e-_J ^ e+_I`
    MinusFirst,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtParams {
    pub m: usize,
    pub lambda_plus: Vec<BigRational>,
    pub lambda_minus: Vec<BigRational>,
}

fn ri(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

impl ExtParams {
    pub fn new(m: usize) -> Result<Self, ExteriorError> {
        ExtParams::with_lambdas(m, vec![ri(1); m], vec![ri(1); m])
    }

    /// The fiber of the quadric `O_q(Q_N)`: `M = N - 2`.
    pub fn for_n(n_big: usize) -> Result<Self, ExteriorError> {
        if n_big < 3 {
            return Err(ExteriorError::BadRank(0));
        }
        ExtParams::new(n_big - 2)
    }

    pub fn with_lambdas(
        m: usize,
        lambda_plus: Vec<BigRational>,
        lambda_minus: Vec<BigRational>,
    ) -> Result<Self, ExteriorError> {
        if m == 0 || m > MAX_M {
            return Err(ExteriorError::BadRank(m));
        }
        for l in [&lambda_plus, &lambda_minus] {
            if l.len() != m {
                return Err(ExteriorError::LambdaLength(l.len(), m));
            }
            if let Some(i) = l.iter().position(Field::is_zero) {
                return Err(ExteriorError::ZeroLambda(i + 1));
            }
        }
        Ok(ExtParams { m, lambda_plus, lambda_minus })
    }

    /// Odd `M` happens exactly for odd `N`.
    pub fn is_odd(&self) -> bool {
        self.m % 2 == 1
    }

    /// The self-conjugate index, present for odd `M`.
    pub fn middle(&self) -> Option<usize> {
        self.is_odd().then_some(self.m.div_ceil(2))
    }

    pub fn conj(&self, i: usize) -> usize {
        self.m + 1 - i
    }
}

pub fn mask_of(idx: &[u8]) -> u32 {
    idx.iter().fold(0, |acc, &i| acc | 1 << (i - 1))
}

pub fn mask_indices(mask: u32) -> Vec<u8> {
    (0..32u8).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect()
}

fn popcount(mask: u32) -> usize {
    mask.count_ones() as usize
}

/// All masks of `k` bits among the lowest `m`, in increasing order.
pub fn subsets(m: usize, k: usize) -> Vec<u32> {
    (0u32..1 << m).filter(|x| popcount(*x) == k).collect()
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
}

/// `sum coeff * e+_I ^ e-_J` keyed by `(I, J)` masks.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberForm<F: Field> {
    m: usize,
    order: Order,
    terms: BTreeMap<(u32, u32), F>,
}

impl<F: Field> FiberForm<F> {
    pub fn zero(m: usize, order: Order) -> Self {
        FiberForm { m, order, terms: BTreeMap::new() }
    }

    pub fn one(m: usize, order: Order) -> Self {
        FiberForm::basis(m, order, 0, 0)
    }

    pub fn basis(m: usize, order: Order, plus: u32, minus: u32) -> Self {
        let mut f = FiberForm::zero(m, order);
        f.add_term(plus, minus, F::one());
        f
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), F> {
        &self.terms
    }

    pub fn coeff(&self, plus: u32, minus: u32) -> F {
        self.terms.get(&(plus, minus)).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, plus: u32, minus: u32, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&(plus, minus)) {
            Some(e) => {
                *e = e.add(&c);
                if e.is_zero() {
                    self.terms.remove(&(plus, minus));
                }
            }
            None => {
                self.terms.insert((plus, minus), c);
            }
        }
    }

    pub fn add_scaled(&mut self, c: &F, o: &Self) {
        assert_eq!((self.m, self.order), (o.m, o.order), "incompatible fiber forms");
        for (&(p, n), x) in &o.terms {
            self.add_term(p, n, c.mul(x));
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(&F::one(), o);
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        r.add_scaled(&F::one().neg(), o);
        r
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut r = FiberForm::zero(self.m, self.order);
        r.add_scaled(c, self);
        r
    }

    /// Distinct bidegrees `(|I|, |J|)` of the stored terms.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.terms.keys().map(|&(p, n)| (popcount(p), popcount(n))).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn component(&self, a: usize, b: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|((p, n), _)| popcount(*p) == a && popcount(*n) == b)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        FiberForm { m: self.m, order: self.order, terms }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> FiberForm<G> {
        let mut r = FiberForm::zero(self.m, self.order);
        for (&(p, n), c) in &self.terms {
            r.add_term(p, n, f(c));
        }
        r
    }
}

impl<F: Field + std::fmt::Display> std::fmt::Display for FiberForm<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let name = |s: &str, mask: u32| {
            let idx = mask_indices(mask);
            if idx.is_empty() {
                String::new()
            } else {
                format!("e{}_{}", s, idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
            }
        };
        let mut first = true;
        for (&(p, n), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let (x, y) = match self.order {
                Order::PlusFirst => (name("+", p), name("-", n)),
                Order::MinusFirst => (name("-", n), name("+", p)),
            };
            let basis = [x, y].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join("^");
            if basis.is_empty() {
                write!(f, "({})", c)?;
            } else {
                write!(f, "({})*{}", c, basis)?;
            }
        }
        Ok(())
    }
}

/// Scalars of the straightening rules in a chosen field.
#[derive(Clone, Debug)]
struct Scalars<F> {
    /// `v^e` for `e` in `-bound..=bound`.
    vp: Vec<F>,
    bound: i32,
    lam_plus: Vec<F>,
    lam_minus: Vec<F>,
}

impl<F: Field> Scalars<F> {
    fn new<S: Specialize<F>>(p: &ExtParams, s: &S) -> Result<Self, ExteriorError> {
        let bound = 4 * p.m as i32 + 8;
        let v = s.map(&FieldElem::v())?;
        let vi = v.inv();
        let mut up = vec![F::one()];
        let mut down = vec![F::one()];
        for _ in 0..bound {
            up.push(up.last().unwrap().mul(&v));
            down.push(down.last().unwrap().mul(&vi));
        }
        let mut vp: Vec<F> = down.into_iter().skip(1).rev().collect();
        vp.extend(up);
        Ok(Scalars {
            vp,
            bound,
            lam_plus: p.lambda_plus.iter().map(|x| F::from_rational(x.clone())).collect(),
            lam_minus: p.lambda_minus.iter().map(|x| F::from_rational(x.clone())).collect(),
        })
    }

    fn vpow(&self, e: i32) -> F {
        assert!(e.abs() <= self.bound, "exponent out of table range");
        self.vp[(e + self.bound) as usize].clone()
    }

    fn qpow(&self, k: i32) -> F {
        self.vpow(2 * k)
    }

    /// `tau - tau^-1` for `tau = v^e`.
    fn nu(&self, e: i32) -> F {
        self.vpow(e).sub(&self.vpow(-e))
    }

    fn lam(&self, leg: Leg, i: usize) -> &F {
        match leg {
            Leg::Plus => &self.lam_plus[i - 1],
            Leg::Minus => &self.lam_minus[i - 1],
        }
    }
}

type Straightened<F> = Vec<(u32, F)>;

/// Straightening and Lefschetz machinery over a field `F`.
pub struct Exterior<F: Field> {
    params: ExtParams,
    s: Scalars<F>,
    memo: [RefCell<HashMap<Vec<u8>, Straightened<F>>>; 2],
}

impl Exterior<FieldElem> {
    pub fn symbolic(params: &ExtParams) -> Self {
        Exterior::new(params, &crate::field::Symbolic).expect("symbolic scalars")
    }
}

impl<F: Field> Exterior<F> {
    pub fn new<S: Specialize<F>>(params: &ExtParams, s: &S) -> Result<Self, ExteriorError> {
        Ok(Exterior {
            params: params.clone(),
            s: Scalars::new(params, s)?,
            memo: [RefCell::new(HashMap::new()), RefCell::new(HashMap::new())],
        })
    }

    pub fn params(&self) -> &ExtParams {
        &self.params
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    /// Rewriting of an adjacent pair `(a, b)` with `a >= b`.
    fn pair_rule(&self, leg: Leg, a: usize, b: usize) -> Vec<([u8; 2], F)> {
        let p = &self.params;
        let s = &self.s;
        let pair = |x: usize, y: usize| [x as u8, y as u8];
        if a == b {
            let Some(mid) = p.middle().filter(|&mid| mid == a) else { return vec![] };
            let pre = s.nu(1).mul(&s.lam(leg, mid).inv());
            return (1..mid)
                .map(|j| {
                    let e = j as i32 - (mid as i32 - 1);
                    let c = match leg {
                        Leg::Minus => pre.mul(s.lam(leg, j)).mul(&s.qpow(e)),
                        Leg::Plus => pre.mul(s.lam(leg, j)).mul(&s.qpow(-e)).neg(),
                    };
                    (pair(j, p.conj(j)), c)
                })
                .collect();
        }
        if b == p.conj(a) {
            let mut out = vec![(pair(b, a), F::one().neg())];
            let pre = s.nu(2).mul(&s.lam(leg, b).inv());
            for j in 1..b {
                let e = j as i32 - b as i32 + 1;
                let c = match leg {
                    Leg::Minus => pre.mul(s.lam(leg, j)).mul(&s.qpow(e)),
                    Leg::Plus => pre.mul(s.lam(leg, j)).mul(&s.qpow(-e)).neg(),
                };
                out.push((pair(j, p.conj(j)), c));
            }
            return out;
        }
        let f = match leg {
            Leg::Minus => s.qpow(1).neg(),
            Leg::Plus => s.qpow(-1).neg(),
        };
        vec![(pair(b, a), f)]
    }

    fn straighten_rec(&self, leg: Leg, w: &[u8]) -> Straightened<F> {
        let slot = &self.memo[leg as usize];
        if let Some(r) = slot.borrow().get(w) {
            return r.clone();
        }
        let out = match (0..w.len().saturating_sub(1)).find(|&p| w[p] >= w[p + 1]) {
            None => vec![(mask_of(w), F::one())],
            Some(p) => {
                let mut acc: BTreeMap<u32, F> = BTreeMap::new();
                for (pr, c) in self.pair_rule(leg, w[p] as usize, w[p + 1] as usize) {
                    let mut nw = w.to_vec();
                    nw[p] = pr[0];
                    nw[p + 1] = pr[1];
                    for (mask, d) in self.straighten_rec(leg, &nw) {
                        let t = c.mul(&d);
                        let e = acc.entry(mask).or_insert_with(F::zero);
                        *e = e.add(&t);
                    }
                }
                acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
            }
        };
        slot.borrow_mut().insert(w.to_vec(), out.clone());
        out
    }

    fn check_word(&self, w: &[u8]) -> Result<(), ExteriorError> {
        match w.iter().find(|&&i| i == 0 || i as usize > self.m()) {
            Some(&i) => Err(ExteriorError::IndexOutOfRange(i as usize, self.m())),
            None => Ok(()),
        }
    }

    /// Expands a wedge word of one leg in the sorted basis, as `(mask, coeff)`.
    pub fn straighten(&self, leg: Leg, w: &[u8]) -> Result<Straightened<F>, ExteriorError> {
        self.check_word(w)?;
        Ok(self.straighten_rec(leg, w))
    }

    pub fn straighten_plus(&self, w: &[u8]) -> Result<FiberForm<F>, ExteriorError> {
        let mut f = FiberForm::zero(self.m(), Order::PlusFirst);
        for (mask, c) in self.straighten(Leg::Plus, w)? {
            f.add_term(mask, 0, c);
        }
        Ok(f)
    }

    pub fn straighten_minus(&self, w: &[u8]) -> Result<FiberForm<F>, ExteriorError> {
        let mut f = FiberForm::zero(self.m(), Order::PlusFirst);
        for (mask, c) in self.straighten(Leg::Minus, w)? {
            f.add_term(0, mask, c);
        }
        Ok(f)
    }

    /// The form `e+_{plus word} ^ e-_{minus word}` (or minus-first) in the sorted basis.
    pub fn word_form(&self, order: Order, plus: &[u8], minus: &[u8]) -> Result<FiberForm<F>, ExteriorError> {
        let sp = self.straighten(Leg::Plus, plus)?;
        let sm = self.straighten(Leg::Minus, minus)?;
        let mut f = FiberForm::zero(self.m(), order);
        for (p, a) in &sp {
            for (n, b) in &sm {
                f.add_term(*p, *n, a.mul(b));
            }
        }
        Ok(f)
    }

    /// Inserts `inner` between the two blocks of `outer`:
    /// `e+_I ^ inner ^ e-_J` for plus-first, `e-_J ^ inner ^ e+_I` for minus-first.
    pub fn wedge_middle(&self, outer: &FiberForm<F>, inner: &FiberForm<F>) -> Result<FiberForm<F>, ExteriorError> {
        if outer.order != inner.order || outer.m != self.m() || inner.m != self.m() {
            return Err(ExteriorError::Mismatch);
        }
        let mut f = FiberForm::zero(self.m(), outer.order);
        for (&(oi, oj), oc) in &outer.terms {
            let oi_w = mask_indices(oi);
            let oj_w = mask_indices(oj);
            for (&(ii, ij), ic) in &inner.terms {
                let c = oc.mul(ic);
                let (pw, mw) = match outer.order {
                    Order::PlusFirst => (cat(&oi_w, &mask_indices(ii)), cat(&mask_indices(ij), &oj_w)),
                    Order::MinusFirst => (cat(&mask_indices(ii), &oi_w), cat(&oj_w, &mask_indices(ij))),
                };
                let sp = self.straighten_rec(Leg::Plus, &pw);
                if sp.is_empty() {
                    continue;
                }
                let sm = self.straighten_rec(Leg::Minus, &mw);
                for (p, a) in &sp {
                    let ca = c.mul(a);
                    for (n, b) in &sm {
                        f.add_term(*p, *n, ca.mul(b));
                    }
                }
            }
        }
        Ok(f)
    }

    /// Real part of the Kähler form, `sum_i e+_i ^ e-_i` (or `e-_i ^ e+_i`).
    pub fn kappa(&self, order: Order) -> FiberForm<F> {
        let mut f = FiberForm::zero(self.m(), order);
        for i in 0..self.m() {
            f.add_term(1 << i, 1 << i, F::one());
        }
        f
    }

    /// Real part of `L(omega) = kappa ^ omega` by central insertion; the
    /// true operator carries one extra factor of `i`.
    pub fn lefschetz(&self, w: &FiberForm<F>) -> Result<FiberForm<F>, ExteriorError> {
        self.wedge_middle(w, &self.kappa(w.order))
    }

    pub fn lefschetz_pow(&self, w: &FiberForm<F>, r: usize) -> Result<FiberForm<F>, ExteriorError> {
        let k = self.kappa(w.order);
        let mut acc = w.clone();
        for _ in 0..r {
            if acc.is_zero() {
                break;
            }
            acc = self.wedge_middle(&acc, &k)?;
        }
        Ok(acc)
    }

    /// Real part of `kappa^l`.
    pub fn kappa_power(&self, l: usize, order: Order) -> FiberForm<F> {
        self.lefschetz_pow(&FiberForm::one(self.m(), order), l).expect("compatible forms")
    }

    /// Matrix of `L^r` from bidegree `(a, b)` as image columns, together with
    /// the source basis and the target coordinate index.
    fn lefschetz_columns(&self, a: usize, b: usize, r: usize) -> (Vec<(u32, u32)>, Vec<FiberForm<F>>) {
        let src: Vec<(u32, u32)> = subsets(self.m(), a)
            .into_iter()
            .flat_map(|p| subsets(self.m(), b).into_iter().map(move |n| (p, n)))
            .collect();
        let imgs = src
            .iter()
            .map(|&(p, n)| {
                self.lefschetz_pow(&FiberForm::basis(self.m(), Order::PlusFirst, p, n), r).expect("compatible")
            })
            .collect();
        (src, imgs)
    }

    /// Basis of the primitive forms of bidegree `(a, b)`, i.e. the kernel of
    /// `L^{M - a - b + 1}`.
    pub fn primitive_basis(&self, a: usize, b: usize) -> Vec<FiberForm<F>> {
        let m = self.m();
        if a + b > m {
            return vec![];
        }
        let (src, imgs) = self.lefschetz_columns(a, b, m - a - b + 1);
        let mut index: HashMap<(u32, u32), usize> = HashMap::new();
        let mut rows: Vec<SparseVec<F>> = Vec::new();
        for (s, img) in imgs.iter().enumerate() {
            for (k, c) in img.terms() {
                let t = *index.entry(*k).or_insert_with(|| {
                    rows.push(SparseVec::new());
                    rows.len() - 1
                });
                rows[t].insert(s, c.clone());
            }
        }
        nullspace(&rows, src.len())
            .into_iter()
            .map(|x| {
                let mut f = FiberForm::zero(m, Order::PlusFirst);
                for (s, c) in x {
                    f.add_term(src[s].0, src[s].1, c);
                }
                f
            })
            .collect()
    }

    /// Writes `omega = sum_j L_r^j(rho_j)` with each `rho_j` primitive, where
    /// `L_r` is the real part of `L`; the pieces `omega_j = i^-j rho_j` then
    /// satisfy `omega = sum_j L^j(omega_j)`.
    pub fn primitive_decompose(&self, w: &FiberForm<F>) -> Result<Vec<PrimitivePiece<F>>, ExteriorError> {
        if w.order != Order::PlusFirst || w.m != self.m() {
            return Err(ExteriorError::Mismatch);
        }
        let m = self.m();
        let mut out = Vec::new();
        for (a, b) in w.bidegrees() {
            let comp = w.component(a, b);
            let k = a + b;
            let jmin = k.saturating_sub(m);
            let mut cols: Vec<(usize, FiberForm<F>, FiberForm<F>)> = Vec::new();
            for j in jmin..=a.min(b) {
                for p in self.primitive_basis(a - j, b - j) {
                    let img = self.lefschetz_pow(&p, j)?;
                    cols.push((j, p, img));
                }
            }
            let dim = binom(m, a) * binom(m, b);
            let mut index: HashMap<(u32, u32), usize> = HashMap::new();
            let mut coords = |f: &FiberForm<F>| {
                let mut v = SparseVec::new();
                for (key, c) in f.terms() {
                    let n = index.len();
                    let t = *index.entry(*key).or_insert(n);
                    v.insert(t, c.clone());
                }
                v
            };
            let mut ech = Echelon::new(true);
            for (t, (_, _, img)) in cols.iter().enumerate() {
                if ech.insert(&coords(img), t).is_none() {
                    return Err(ExteriorError::DecompositionSingular(a, b));
                }
            }
            if ech.rank() != dim {
                return Err(ExteriorError::DecompositionSingular(a, b));
            }
            let sol = ech.solve(&coords(&comp)).ok_or(ExteriorError::DecompositionSingular(a, b))?;
            let mut pieces: BTreeMap<usize, FiberForm<F>> = BTreeMap::new();
            for (t, c) in sol {
                let (j, p, _) = &cols[t];
                pieces.entry(*j).or_insert_with(|| FiberForm::zero(m, Order::PlusFirst)).add_scaled(&c, p);
            }
            for (j, form) in pieces {
                if !form.is_zero() {
                    out.push(PrimitivePiece { j, bidegree: (a - j, b - j), phase: ((4 - j % 4) % 4) as u8, form });
                }
            }
        }
        Ok(out)
    }

    /// Weil formula applied to the primitive decomposition of a real form.
    /// Returns the pieces of `*omega` grouped by the power of `i` they carry.
    pub fn hodge(&self, w: &FiberForm<F>) -> Result<BTreeMap<u8, FiberForm<F>>, ExteriorError> {
        let m = self.m();
        let mut out: BTreeMap<u8, FiberForm<F>> = BTreeMap::new();
        for piece in self.primitive_decompose(w)? {
            let (a, b) = piece.bidegree;
            let k = a + b;
            let j = piece.j;
            let r = m - j - k;
            let sign = if (k * (k + 1) / 2) % 2 == 0 { 1 } else { -1 };
            let coef = BigRational::new(factorial(j) * BigInt::from(sign), factorial(r));
            let img = self.lefschetz_pow(&piece.form, r)?;
            let phase = (a as i64 - b as i64 + m as i64 - 2 * j as i64 - k as i64).rem_euclid(4) as u8;
            out.entry(phase)
                .or_insert_with(|| FiberForm::zero(m, Order::PlusFirst))
                .add_scaled(&F::from_rational(coef), &img);
        }
        out.retain(|_, f| !f.is_zero());
        Ok(out)
    }
}

fn cat(a: &[u8], b: &[u8]) -> Vec<u8> {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimitivePiece<F: Field> {
    pub j: usize,
    /// Bidegree of the primitive form itself.
    pub bidegree: (usize, usize),
    /// `omega_j = i^phase * form`.
    pub phase: u8,
    pub form: FiberForm<F>,
}

/// `kappa^l = i^l sum f_{l,I,J} e+_I ^ e-_J`.
#[derive(Clone, Debug)]
pub struct KappaExpansion {
    pub m: usize,
    pub l: usize,
    /// Power of `i`, modulo 4.
    pub phase: u8,
    pub form: FiberForm<FieldElem>,
}

impl KappaExpansion {
    pub fn coefficient(&self, plus: &[u8], minus: &[u8]) -> FieldElem {
        self.form.coeff(mask_of(plus), mask_of(minus))
    }
}

pub fn kappa_power(params: &ExtParams, l: usize) -> KappaExpansion {
    let ext = Exterior::symbolic(params);
    KappaExpansion { m: params.m, l, phase: (l % 4) as u8, form: ext.kappa_power(l, Order::PlusFirst) }
}

/// All powers `kappa^0 .. kappa^{lmax}` from one shared straightening cache.
pub fn kappa_powers(params: &ExtParams, lmax: usize) -> Vec<KappaExpansion> {
    let ext = Exterior::symbolic(params);
    let k = ext.kappa(Order::PlusFirst);
    let mut acc = FiberForm::one(params.m, Order::PlusFirst);
    let mut out = Vec::new();
    for l in 0..=lmax {
        if l > 0 {
            acc = ext.wedge_middle(&acc, &k).expect("compatible forms");
        }
        out.push(KappaExpansion { m: params.m, l, phase: (l % 4) as u8, form: acc.clone() });
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaLevel {
    pub l: usize,
    pub diagonal_terms: usize,
    pub offdiagonal_terms: usize,
    /// `f_{l,I,J}(1) = 0` for all `I != J`.
    pub offdiagonal_vanish_at_1: bool,
    /// `f_{l,I,I}(1)` nonzero with sign `(-1)^{l(l-1)/2}` for every `I`.
    pub diagonal_sign_ok: bool,
    /// Observed value `(-1)^{l(l-1)/2} l!`.
    pub diagonal_value_ok: bool,
    pub diagonal_value_at_1: Option<String>,
    /// `f_{l,I,I}(q0)` nonzero at every sample.
    pub diagonal_nonzero_at_samples: bool,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KappaReport {
    pub m: usize,
    pub samples: Vec<String>,
    pub levels: Vec<KappaLevel>,
    pub top_power_vanishes: bool,
    pub ok: bool,
}

/// Checks the `q = 1` law of the coefficients `f_{l,I,J}` for `l <= M`.
pub fn verify_f_properties(params: &ExtParams, q_samples: &[BigRational]) -> Result<KappaReport, ExteriorError> {
    let m = params.m;
    let powers = kappa_powers(params, m + 1);
    let at1 = AtV::new(ri(1));
    let points: Vec<SqrtPoint> = q_samples.iter().map(|q| SqrtPoint::new(q.clone())).collect();
    let mut levels = Vec::new();
    for kp in &powers[..=m] {
        let l = kp.l;
        let sign: i64 = if (l * (l.saturating_sub(1)) / 2) % 2 == 0 { 1 } else { -1 };
        let expect = BigRational::from_integer(factorial(l) * BigInt::from(sign));
        let (mut diag, mut off) = (0, 0);
        let (mut off_ok, mut sign_ok, mut value_ok, mut samples_ok) = (true, true, true, true);
        let mut seen_value = None;
        for (&(p, n), c) in kp.form.terms() {
            let v1 = at1.map(c)?;
            if p == n {
                diag += 1;
                let s = if Field::is_zero(&v1) { 0 } else if v1 > ri(0) { 1 } else { -1 };
                sign_ok &= s == sign;
                value_ok &= v1 == expect;
                seen_value.get_or_insert_with(|| fmt_rational(&v1));
                for pt in &points {
                    samples_ok &= !pt.map(c)?.is_zero();
                }
            } else {
                off += 1;
                off_ok &= Field::is_zero(&v1);
            }
        }
        let full = diag == binom(m, l);
        sign_ok &= full;
        value_ok &= full;
        levels.push(KappaLevel {
            l,
            diagonal_terms: diag,
            offdiagonal_terms: off,
            offdiagonal_vanish_at_1: off_ok,
            diagonal_sign_ok: sign_ok,
            diagonal_value_ok: value_ok,
            diagonal_value_at_1: seen_value,
            diagonal_nonzero_at_samples: samples_ok,
            ok: off_ok && sign_ok && samples_ok,
        });
    }
    let top_power_vanishes = powers[m + 1].form.is_zero();
    let ok = levels.iter().all(|l| l.ok) && top_power_vanishes;
    Ok(KappaReport { m, samples: q_samples.iter().map(fmt_rational).collect(), levels, top_power_vanishes, ok })
}

#[derive(Clone, Debug, Serialize)]
pub struct BidegreeRank {
    pub bidegree: (usize, usize),
    pub dim: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeRank {
    pub k: usize,
    pub dim: usize,
    pub rank: usize,
    pub bijective: bool,
    pub bidegrees: Vec<BidegreeRank>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LefschetzReport {
    pub m: usize,
    pub q0: String,
    pub degrees: Vec<DegreeRank>,
    pub ok: bool,
}

/// Rank of `L^{M-k}` from degree `k` to degree `2M - k` at `q = q0`, for
/// every `k < M`. `L` preserves `a - b`, so the matrix is block diagonal in
/// the bidegree.
pub fn verify_lefschetz_iso(params: &ExtParams, q0: &BigRational) -> Result<LefschetzReport, ExteriorError> {
    let ext: Exterior<crate::field::QSqrt> = Exterior::new(params, &SqrtPoint::new(q0.clone()))?;
    let m = params.m;
    let mut degrees = Vec::new();
    for k in 0..m {
        let mut blocks = Vec::new();
        for a in 0..=k {
            let b = k - a;
            let (src, imgs) = ext.lefschetz_columns(a, b, m - k);
            let mut index: HashMap<(u32, u32), usize> = HashMap::new();
            let mut ech = Echelon::new(false);
            for (s, img) in imgs.iter().enumerate() {
                let mut v = SparseVec::new();
                for (key, c) in img.terms() {
                    let n = index.len();
                    v.insert(*index.entry(*key).or_insert(n), c.clone());
                }
                ech.insert(&v, s);
            }
            blocks.push(BidegreeRank { bidegree: (a, b), dim: src.len(), rank: ech.rank() });
        }
        let dim: usize = blocks.iter().map(|b| b.dim).sum();
        let rank: usize = blocks.iter().map(|b| b.rank).sum();
        degrees.push(DegreeRank { k, dim, rank, bijective: dim == rank, bidegrees: blocks });
    }
    let ok = degrees.iter().all(|d| d.bijective);
    Ok(LefschetzReport { m, q0: fmt_rational(q0), degrees, ok })
}

#[derive(Clone, Debug, Serialize)]
pub struct NonprimitiveCase {
    pub order: Order,
    /// Power of `i` carried by `kappa^{M-1}`.
    pub phase: u8,
    pub top_form_only: bool,
    pub coefficient: String,
    pub value_at_1: Option<String>,
    pub nonzero_at_1: bool,
    pub nonzero_at_samples: bool,
    /// The coefficient divided by `f_{M-1,J,J}` with `J = {1..M-1}`.
    pub ratio_to_f: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonprimitiveReport {
    pub m: usize,
    pub samples: Vec<String>,
    pub cases: Vec<NonprimitiveCase>,
    pub ok: bool,
}

/// `e+_M ^ kappa^{M-1} ^ e-_M` and the mirrored `e-_M ^ kappa'^{M-1} ^ e+_M`,
/// with `kappa' = sum_i e-_i ^ e+_i`, must both be nonzero multiples of the
/// top form with nonzero value at `q = 1`.
pub fn verify_nonprimitive(params: &ExtParams, q_samples: &[BigRational]) -> Result<NonprimitiveReport, ExteriorError> {
    let m = params.m;
    let ext = Exterior::symbolic(params);
    let top = (1u32 << m) - 1;
    let last = 1u32 << (m - 1);
    let at1 = AtV::new(ri(1));
    let mut cases = Vec::new();
    for order in [Order::PlusFirst, Order::MinusFirst] {
        let kp = ext.kappa_power(m - 1, order);
        let outer = FiberForm::basis(m, order, last, last);
        let res = ext.wedge_middle(&outer, &kp)?;
        let c = res.coeff(top, top);
        let top_form_only = res.len() == 1 && !c.is_zero();
        let v1 = at1.map(&c).ok();
        let nonzero_at_1 = v1.as_ref().is_some_and(|x| !Field::is_zero(x));
        let mut nonzero_at_samples = true;
        for q in q_samples {
            nonzero_at_samples &= !SqrtPoint::new(q.clone()).map(&c)?.is_zero();
        }
        let rest = top & !last;
        let f = kp.coeff(rest, rest);
        let ratio_to_f = if f.is_zero() { "undefined".into() } else { c.div(&f).to_string() };
        cases.push(NonprimitiveCase {
            order,
            phase: ((m - 1) % 4) as u8,
            top_form_only,
            coefficient: c.to_string(),
            value_at_1: v1.as_ref().map(fmt_rational),
            nonzero_at_1,
            nonzero_at_samples,
            ratio_to_f,
            ok: top_form_only && nonzero_at_1 && nonzero_at_samples,
        });
    }
    let ok = cases.iter().all(|c| c.ok);
    Ok(NonprimitiveReport { m, samples: q_samples.iter().map(fmt_rational).collect(), cases, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QSqrt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sym(m: usize) -> Exterior<FieldElem> {
        Exterior::symbolic(&ExtParams::new(m).unwrap())
    }

    #[test]
    fn swap_follows_ordering_relation() {
        let e = sym(4);
        let f = e.straighten_minus(&[3, 1]).unwrap();
        assert_eq!(f.coeff(0, mask_of(&[1, 3])), FieldElem::q().neg());
        let f = e.straighten_plus(&[3, 1]).unwrap();
        assert_eq!(f.coeff(mask_of(&[1, 3]), 0), FieldElem::qpow(-1).neg());
    }

    #[test]
    fn conjugate_pair_without_corrections() {
        let e = sym(4);
        let f = e.straighten_minus(&[4, 1]).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.coeff(0, mask_of(&[1, 4])), FieldElem::int(-1));
    }

    #[test]
    fn conjugate_pair_with_correction() {
        let e = sym(4);
        let f = e.straighten_minus(&[3, 2]).unwrap();
        assert_eq!(f.coeff(0, mask_of(&[2, 3])), FieldElem::int(-1));
        // (q - q^-1) q^{1-2+1} e-_1 ^ e-_4
        assert_eq!(f.coeff(0, mask_of(&[1, 4])), FieldElem::nu(2));
    }

    #[test]
    fn middle_square() {
        let e = sym(3);
        let f = e.straighten_minus(&[2, 2]).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f.coeff(0, mask_of(&[1, 3])), FieldElem::nu(1));
        let g = e.straighten_plus(&[2, 2]).unwrap();
        assert_eq!(g.coeff(mask_of(&[1, 3]), 0), FieldElem::nu(1).neg());
    }

    #[test]
    fn repeated_index_vanishes_and_range_checked() {
        let e = sym(4);
        assert!(e.straighten_minus(&[2, 2]).unwrap().is_zero());
        assert_eq!(e.straighten_plus(&[5]).unwrap_err(), ExteriorError::IndexOutOfRange(5, 4));
        assert_eq!(e.straighten_plus(&[0]).unwrap_err(), ExteriorError::IndexOutOfRange(0, 4));
    }

    #[test]
    fn kappa_low_powers() {
        let p = ExtParams::new(3).unwrap();
        let k1 = kappa_power(&p, 1);
        assert_eq!(k1.form.len(), 3);
        for i in 1..=3u8 {
            for j in 1..=3u8 {
                let c = k1.coefficient(&[i], &[j]);
                assert_eq!(c.is_one(), i == j);
            }
        }
        assert!(kappa_power(&p, 4).form.is_zero());
        assert!(!kappa_power(&p, 3).form.is_zero());
    }

    #[test]
    fn lefschetz_of_one_and_top() {
        let e = sym(3);
        let one = FiberForm::one(3, Order::PlusFirst);
        assert_eq!(e.lefschetz(&one).unwrap(), e.kappa(Order::PlusFirst));
        let top = FiberForm::basis(3, Order::PlusFirst, 7, 7);
        assert!(e.lefschetz(&top).unwrap().is_zero());
        let x = FiberForm::basis(3, Order::PlusFirst, 4, 4);
        assert!(!e.lefschetz_pow(&x, 2).unwrap().is_zero());
    }

    #[test]
    fn kappa_decomposes_as_lefschetz_of_one() {
        let p = ExtParams::new(3).unwrap();
        let e: Exterior<QSqrt> = Exterior::new(&p, &SqrtPoint::new(q(11, 10))).unwrap();
        let k = e.kappa(Order::PlusFirst);
        let d = e.primitive_decompose(&k).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].j, 1);
        assert_eq!(d[0].form, FiberForm::one(3, Order::PlusFirst));
        let one = FiberForm::one(3, Order::PlusFirst);
        let d = e.primitive_decompose(&one).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].j, d[0].form.clone()), (0, one));
    }

    #[test]
    fn e3_e3_has_scalar_component() {
        let p = ExtParams::new(3).unwrap();
        let e: Exterior<QSqrt> = Exterior::new(&p, &SqrtPoint::new(q(11, 10))).unwrap();
        let w = FiberForm::basis(3, Order::PlusFirst, 4, 4);
        let d = e.primitive_decompose(&w).unwrap();
        assert!(d.iter().any(|x| x.j == 1 && !x.form.is_zero()));
        let mut back = FiberForm::zero(3, Order::PlusFirst);
        for piece in &d {
            back = back.add(&e.lefschetz_pow(&piece.form, piece.j).unwrap());
        }
        assert_eq!(back, w);
    }

    #[test]
    fn hodge_of_one_and_kappa() {
        let p = ExtParams::new(3).unwrap();
        let e: Exterior<QSqrt> = Exterior::new(&p, &SqrtPoint::new(q(11, 10))).unwrap();
        let star1 = e.hodge(&FiberForm::one(3, Order::PlusFirst)).unwrap();
        let k3 = e.kappa_power(3, Order::PlusFirst).scale(&QSqrt::rational(q(1, 6)));
        assert_eq!(star1.len(), 1);
        assert_eq!(star1[&3], k3);
        // kappa = i L_r(1): primitive piece j = 1 carries i^-1, and
        // *(L(1)) = 1!/(M-1)! L^{M-1}(1)
        let sk = e.hodge(&e.kappa(Order::PlusFirst)).unwrap();
        let k2 = e.kappa_power(2, Order::PlusFirst).scale(&QSqrt::rational(q(1, 2)));
        assert_eq!(sk.len(), 1);
        assert_eq!(sk[&1], k2);
    }

    #[test]
    fn nonprimitive_small() {
        let p = ExtParams::new(3).unwrap();
        let r = verify_nonprimitive(&p, &[q(101, 100)]).unwrap();
        assert!(r.ok, "{:?}", r);
    }
}
