//! Free noncommutative polynomials in the generators `u^i_j`.

use crate::field::{Field, FieldElem, Specialize, EvalError};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Generator `u^i_j` with 1-based indices, stored as `(i-1)*N + (j-1)`.
pub type Gen = u8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NcError {
    #[error("operands use different alphabets (N = {0} vs N = {1})")]
    AlphabetMismatch(usize, usize),
}

pub fn gen(n: usize, i: usize, j: usize) -> Gen {
    debug_assert!(i >= 1 && i <= n && j >= 1 && j <= n);
    ((i - 1) * n + (j - 1)) as Gen
}

pub fn gen_indices(n: usize, g: Gen) -> (usize, usize) {
    let g = g as usize;
    (g / n + 1, g % n + 1)
}

/// A word in the generators, ordered degree-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Word(pub SmallVec<[Gen; 8]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_gens(g: &[Gen]) -> Self {
        Word(SmallVec::from_slice(g))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn gens(&self) -> &[Gen] {
        &self.0
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut w = self.0.clone();
        w.extend_from_slice(&o.0);
        Word(w)
    }

    /// Replaces `self[pos..pos+len]` by `mid`.
    pub fn splice(&self, pos: usize, len: usize, mid: &[Gen]) -> Word {
        let mut w: SmallVec<[Gen; 8]> = SmallVec::with_capacity(self.len() - len + mid.len());
        w.extend_from_slice(&self.0[..pos]);
        w.extend_from_slice(mid);
        w.extend_from_slice(&self.0[pos + len..]);
        Word(w)
    }

    pub fn display(&self, n: usize) -> String {
        if self.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|&g| {
                let (i, j) = gen_indices(n, g);
                format!("u{}_{}", i, j)
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Shorter words first, then letter by letter with `u^i_j < u^k_l` iff `(i,j) < (k,l)`.
pub fn deglex_compare(a: &Word, b: &Word) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.0.cmp(&b.0))
}

impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        deglex_compare(self, o)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Finite combination of words with nonzero coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct NCPoly<F: Field> {
    n: usize,
    terms: BTreeMap<Word, F>,
}

impl<F: Field> NCPoly<F> {
    pub fn zero(n: usize) -> Self {
        NCPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        NCPoly::monomial(n, Word::empty(), F::one())
    }

    pub fn monomial(n: usize, w: Word, c: F) -> Self {
        let mut p = NCPoly::zero(n);
        p.add_term(w, c);
        p
    }

    /// The generator `u^i_j`.
    pub fn u(n: usize, i: usize, j: usize) -> Self {
        NCPoly::monomial(n, Word::from_gens(&[gen(n, i, j)]), F::one())
    }

    /// `c * u^{i1}_{j1} u^{i2}_{j2} ...`.
    pub fn word(n: usize, idx: &[(usize, usize)], c: F) -> Self {
        let g: Vec<Gen> = idx.iter().map(|&(i, j)| gen(n, i, j)).collect();
        NCPoly::monomial(n, Word::from_gens(&g), c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Word, F> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Word, F> {
        self.terms
    }

    pub fn from_terms(n: usize, terms: BTreeMap<Word, F>) -> Self {
        NCPoly { n, terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
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

    pub fn coeff(&self, w: &Word) -> Option<&F> {
        self.terms.get(w)
    }

    /// Largest word under deglex.
    pub fn lead(&self) -> Option<(&Word, &F)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Option<usize> {
        self.lead().map(|(w, _)| w.len())
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|w| w.len());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn add_term(&mut self, w: Word, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(e) => {
                *e = e.add(&c);
                if e.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add_scaled(&mut self, c: &F, o: &NCPoly<F>) {
        for (w, x) in &o.terms {
            self.add_term(w.clone(), c.mul(x));
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
        if c.is_zero() {
            return NCPoly::zero(self.n);
        }
        NCPoly { n: self.n, terms: self.terms.iter().map(|(w, x)| (w.clone(), x.mul(c))).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&F::one().neg())
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, NcError> {
        if self.n != o.n {
            return Err(NcError::AlphabetMismatch(self.n, o.n));
        }
        let mut r = NCPoly::zero(self.n);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &o.terms {
                r.add_term(w1.concat(w2), c1.mul(c2));
            }
        }
        Ok(r)
    }

    /// Free-algebra product. Panics on mismatched alphabets.
    pub fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("alphabet mismatch")
    }

    /// `w1 * self * w2` for words.
    pub fn sandwich(&self, w1: &Word, w2: &Word) -> Self {
        NCPoly {
            n: self.n,
            terms: self.terms.iter().map(|(w, c)| (w1.concat(w).concat(w2), c.clone())).collect(),
        }
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> NCPoly<G> {
        NCPoly::from_terms(self.n, self.terms.iter().map(|(w, c)| (w.clone(), f(c))).collect())
    }
}

impl NCPoly<FieldElem> {
    pub fn specialize<G: Field, S: Specialize<G>>(&self, s: &S) -> Result<NCPoly<G>, EvalError> {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            terms.insert(w.clone(), s.map(c)?);
        }
        Ok(NCPoly::from_terms(self.n, terms))
    }
}

/// `nc_mul` with an explicit error for mismatched alphabets.
pub fn nc_mul<F: Field>(p: &NCPoly<F>, r: &NCPoly<F>) -> Result<NCPoly<F>, NcError> {
    p.try_mul(r)
}

impl fmt::Display for NCPoly<FieldElem> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().rev().map(|(w, c)| format!("({})*{}", c, w.display(self.n))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
