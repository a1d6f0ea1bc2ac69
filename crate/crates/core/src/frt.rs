//! The R-matrix of the vector representation and the quadratic FRT relations.

use crate::field::{Field, FieldElem};
use crate::ncpoly::{gen_indices, NCPoly, Word};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrtError {
    #[error("index {0} outside 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("N = {0} is below the supported minimum 5")]
    TooSmall(usize),
}

/// Value of the step function at zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Theta {
    /// `theta(0) = 0`
    Strict,
    /// `theta(0) = 1`
    Weak,
}

#[derive(Clone, Debug)]
pub struct FrtData {
    pub n_big: usize,
    pub theta: Theta,
}

impl FrtData {
    pub fn new(n_big: usize) -> Result<Self, FrtError> {
        FrtData::with_theta(n_big, Theta::Strict)
    }

    pub fn with_theta(n_big: usize, theta: Theta) -> Result<Self, FrtError> {
        if n_big < 5 {
            return Err(FrtError::TooSmall(n_big));
        }
        Ok(FrtData { n_big, theta })
    }

    /// Rank of the orthogonal Lie algebra.
    pub fn rank(&self) -> usize {
        self.n_big / 2
    }

    pub fn is_odd(&self) -> bool {
        self.n_big % 2 == 1
    }

    pub fn conj(&self, i: usize) -> usize {
        self.n_big + 1 - i
    }

    /// `2 rho_i`, an integer.
    pub fn rho2(&self, i: usize) -> i32 {
        let n = self.n_big as i32;
        let i = i as i32;
        let c = n + 1 - i;
        if i < c {
            n - 2 * i
        } else if i == c {
            0
        } else {
            -(n - 2 * c)
        }
    }

    pub fn theta_of(&self, x: i64) -> bool {
        x > 0 || (x == 0 && self.theta == Theta::Weak)
    }

    fn check(&self, i: usize) -> Result<(), FrtError> {
        if i == 0 || i > self.n_big {
            Err(FrtError::IndexOutOfRange(i, self.n_big))
        } else {
            Ok(())
        }
    }

    /// `R^{ij}_{mn}`.
    pub fn r_entry(&self, i: usize, j: usize, m: usize, n: usize) -> Result<FieldElem, FrtError> {
        for x in [i, j, m, n] {
            self.check(x)?;
        }
        Ok(self.r_unchecked(i, j, m, n))
    }

    fn r_unchecked(&self, i: usize, j: usize, m: usize, n: usize) -> FieldElem {
        let d = |a: usize, b: usize| a == b;
        let mut val = FieldElem::zero();
        if d(i, m) && d(j, n) {
            let e = d(i, j) as i32 - d(i, self.conj(j)) as i32;
            val = FieldElem::qpow(e);
        }
        if self.theta_of(i as i64 - m as i64) {
            let mut inner = FieldElem::zero();
            if d(j, m) && d(i, n) {
                inner = FieldElem::one();
            }
            if d(j, self.conj(i)) && d(m, self.conj(n)) {
                inner = inner.sub(&FieldElem::vpow(-(self.rho2(j) + self.rho2(m))));
            }
            if !inner.is_zero() {
                val = val.add(&FieldElem::nu(2).mul(&inner));
            }
        }
        val
    }

    /// Weight of a word: row and column sums with `v_i -> -e_i` for unprimed
    /// `i <= n`, `+e_{i'}` for primed indices and `0` for the middle index.
    pub fn weight_key(&self, w: &Word) -> Vec<i8> {
        let r = self.rank();
        let mut key = vec![0i8; 2 * r];
        for &g in w.gens() {
            let (i, j) = gen_indices(self.n_big, g);
            self.add_index_weight(&mut key[..r], i);
            self.add_index_weight(&mut key[r..], j);
        }
        key
    }

    fn add_index_weight(&self, key: &mut [i8], i: usize) {
        let r = self.rank();
        if i <= r {
            key[i - 1] -= 1;
        } else if self.conj(i) <= r {
            key[self.conj(i) - 1] += 1;
        }
    }
}

/// One nonzero quadratic relation with the index quadruple that produced it.
#[derive(Clone, Debug)]
pub struct Relation {
    pub quad: [usize; 4],
    pub poly: NCPoly<FieldElem>,
}

#[derive(Clone, Debug)]
pub struct RelationSet {
    pub data: FrtData,
    pub scanned: usize,
    pub relations: Vec<Relation>,
}

impl RelationSet {
    pub fn polys(&self) -> Vec<NCPoly<FieldElem>> {
        self.relations.iter().map(|r| r.poly.clone()).collect()
    }
}

/// `sum_{k,l} R^{ij}_{kl} u^k_m u^l_n - sum_{k,l} u^j_k u^i_l R^{lk}_{mn}`.
pub fn relation(data: &FrtData, i: usize, j: usize, m: usize, n: usize) -> NCPoly<FieldElem> {
    let nn = data.n_big;
    let mut p = NCPoly::zero(nn);
    for k in 1..=nn {
        for l in 1..=nn {
            let r = data.r_unchecked(i, j, k, l);
            if !r.is_zero() {
                p.add_scaled(&r, &NCPoly::word(nn, &[(k, m), (l, n)], FieldElem::one()));
            }
            let r2 = data.r_unchecked(l, k, m, n);
            if !r2.is_zero() {
                p.add_scaled(&r2.neg(), &NCPoly::word(nn, &[(j, k), (i, l)], FieldElem::one()));
            }
        }
    }
    p
}

pub fn generate_relations(data: &FrtData) -> RelationSet {
    let nn = data.n_big;
    let mut relations = Vec::new();
    let mut scanned = 0;
    for i in 1..=nn {
        for j in 1..=nn {
            for m in 1..=nn {
                for n in 1..=nn {
                    scanned += 1;
                    let poly = relation(data, i, j, m, n);
                    if !poly.is_zero() {
                        relations.push(Relation { quad: [i, j, m, n], poly });
                    }
                }
            }
        }
    }
    RelationSet { data: data.clone(), scanned, relations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_values() {
        let d = FrtData::new(5).unwrap();
        let r: Vec<i32> = (1..=5).map(|i| d.rho2(i)).collect();
        assert_eq!(r, vec![3, 1, 0, -1, -3]);
        let d = FrtData::new(6).unwrap();
        let r: Vec<i32> = (1..=6).map(|i| d.rho2(i)).collect();
        assert_eq!(r, vec![4, 2, 0, 0, -2, -4]);
    }

    #[test]
    fn out_of_range() {
        let d = FrtData::new(5).unwrap();
        assert_eq!(d.r_entry(0, 1, 1, 1), Err(FrtError::IndexOutOfRange(0, 5)));
        assert_eq!(d.r_entry(1, 6, 1, 1), Err(FrtError::IndexOutOfRange(6, 5)));
        assert!(FrtData::new(4).is_err());
    }
}
