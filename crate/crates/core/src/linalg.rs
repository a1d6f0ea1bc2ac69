//! Sparse exact Gaussian elimination over any [`Field`].
//!
//! Rows are kept fully reduced with the pivot at the largest column index,
//! which is what the rewriting code needs (leading word = largest word).

use crate::field::Field;
use std::collections::BTreeMap;

pub type SparseVec<F> = BTreeMap<usize, F>;

#[derive(Clone, Debug)]
struct Row<F> {
    v: SparseVec<F>,
    combo: SparseVec<F>,
}

/// Incrementally built reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    rows: Vec<Row<F>>,
    by_pivot: BTreeMap<usize, usize>,
    track: bool,
}

pub fn axpy<F: Field>(acc: &mut SparseVec<F>, c: &F, x: &SparseVec<F>) {
    for (k, val) in x {
        let t = c.mul(val);
        match acc.get_mut(k) {
            Some(e) => {
                *e = e.add(&t);
                if e.is_zero() {
                    acc.remove(k);
                }
            }
            None => {
                if !t.is_zero() {
                    acc.insert(*k, t);
                }
            }
        }
    }
}

impl<F: Field> Echelon<F> {
    /// `track` records, for every row, its expression in terms of the tags
    /// passed to [`Echelon::insert`].
    pub fn new(track: bool) -> Self {
        Echelon { rows: Vec::new(), by_pivot: BTreeMap::new(), track }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_pivot.keys().copied()
    }

    /// The reduced row with the given pivot.
    pub fn row(&self, pivot: usize) -> Option<&SparseVec<F>> {
        self.by_pivot.get(&pivot).map(|&i| &self.rows[i].v)
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseVec<F>)> + '_ {
        self.by_pivot.iter().map(move |(&p, &i)| (p, &self.rows[i].v))
    }

    /// Returns `(r, c)` with `x = r + sum_i c_i * original_i`, where `r` has no
    /// pivot columns. `c` is empty unless tracking is on.
    pub fn reduce(&self, x: &SparseVec<F>) -> (SparseVec<F>, SparseVec<F>) {
        let mut r = x.clone();
        let mut combo = SparseVec::new();
        let hits: Vec<usize> = r.keys().rev().filter(|k| self.by_pivot.contains_key(k)).copied().collect();
        for p in hits {
            let Some(c) = r.get(&p).cloned() else { continue };
            let row = &self.rows[self.by_pivot[&p]];
            axpy(&mut r, &c.neg(), &row.v);
            if self.track {
                axpy(&mut combo, &c, &row.combo);
            }
        }
        (r, combo)
    }

    pub fn contains(&self, x: &SparseVec<F>) -> bool {
        self.reduce(x).0.is_empty()
    }

    /// Adds a vector; returns its pivot if it was independent.
    pub fn insert(&mut self, x: &SparseVec<F>, tag: usize) -> Option<usize> {
        let (mut r, used) = self.reduce(x);
        if r.is_empty() {
            return None;
        }
        let mut combo = SparseVec::new();
        if self.track {
            combo.insert(tag, F::one());
            axpy(&mut combo, &F::one().neg(), &used);
        }
        let (&p, lead) = r.iter().next_back().expect("nonempty");
        let li = lead.inv();
        for val in r.values_mut() {
            *val = val.mul(&li);
        }
        if self.track {
            for val in combo.values_mut() {
                *val = val.mul(&li);
            }
        }
        for row in self.rows.iter_mut() {
            if let Some(c) = row.v.get(&p).cloned() {
                axpy(&mut row.v, &c.neg(), &r);
                if self.track {
                    axpy(&mut row.combo, &c.neg(), &combo);
                }
            }
        }
        let idx = self.rows.len();
        self.rows.push(Row { v: std::mem::take(&mut r), combo });
        self.by_pivot.insert(p, idx);
        Some(p)
    }

    /// Expresses `x` through the inserted vectors, if it lies in their span.
    pub fn solve(&self, x: &SparseVec<F>) -> Option<SparseVec<F>> {
        assert!(self.track, "solve needs tracking");
        let (r, c) = self.reduce(x);
        if r.is_empty() {
            Some(c)
        } else {
            None
        }
    }
}

/// Rank of a set of sparse rows.
pub fn rank<F: Field>(rows: &[SparseVec<F>]) -> usize {
    let mut e = Echelon::new(false);
    for (i, r) in rows.iter().enumerate() {
        e.insert(r, i);
    }
    e.rank()
}

/// Basis of `{x : A x = 0}` for `A` given by its rows over columns `0..ncols`.
pub fn nullspace<F: Field>(rows: &[SparseVec<F>], ncols: usize) -> Vec<SparseVec<F>> {
    let mut e = Echelon::new(false);
    for (i, r) in rows.iter().enumerate() {
        e.insert(r, i);
    }
    let mut basis = Vec::new();
    for f in 0..ncols {
        if e.by_pivot.contains_key(&f) {
            continue;
        }
        let mut x = SparseVec::new();
        x.insert(f, F::one());
        for (p, row) in e.rows() {
            if let Some(c) = row.get(&f) {
                x.insert(p, c.neg());
            }
        }
        basis.push(x);
    }
    basis
}

/// Applies a matrix given by columns to a coefficient vector.
pub fn apply_columns<F: Field>(cols: &[SparseVec<F>], x: &SparseVec<F>) -> SparseVec<F> {
    let mut out = SparseVec::new();
    for (j, c) in x {
        axpy(&mut out, c, &cols[*j]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn sv(entries: &[(usize, i64)]) -> SparseVec<BigRational> {
        entries.iter().map(|&(k, x)| (k, BigRational::from_integer(x.into()))).collect()
    }

    #[test]
    fn rank_and_solve() {
        let mut e = Echelon::new(true);
        e.insert(&sv(&[(0, 1), (1, 2)]), 0);
        e.insert(&sv(&[(1, 1), (2, 1)]), 1);
        assert_eq!(e.insert(&sv(&[(0, 1), (1, 3), (2, 1)]), 2), None);
        let target = sv(&[(0, 2), (1, 5), (2, 1)]);
        let c = e.solve(&target).unwrap();
        let cols = vec![sv(&[(0, 1), (1, 2)]), sv(&[(1, 1), (2, 1)])];
        assert_eq!(apply_columns(&cols, &c), target);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let rows = vec![sv(&[(0, 1), (1, 1), (2, 1)]), sv(&[(0, 1), (2, -1)])];
        let ns = nullspace(&rows, 3);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            let dot = ns[0].iter().fold(BigRational::from_integer(0.into()), |acc, (k, x)| {
                acc + r.get(k).cloned().unwrap_or_default() * x
            });
            assert_eq!(dot, BigRational::from_integer(0.into()));
        }
    }
}
