//! Left and right actions of `U_q(so_N)` on the free algebra, extended from
//! the generators by the coproduct.

use crate::field::{Field, FieldElem};
use crate::ncpoly::{gen, gen_indices, Gen, NCPoly, Word};
use crate::rep::{mat_transpose, Mat, RepMatrices};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Letter {
    E(usize),
    F(usize),
    K(usize),
    Kinv(usize),
}

impl Letter {
    pub fn label(self) -> String {
        match self {
            Letter::E(i) => format!("E{}", i),
            Letter::F(i) => format!("F{}", i),
            Letter::K(i) => format!("K{}", i),
            Letter::Kinv(i) => format!("K{}^-1", i),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// Which matrices drive the right action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RightTable {
    /// `u^i_j < X = sum_k T(X)_{ik} u^k_j` from the dual pairing.
    Pairing,
    /// E and F acting through the transposed matrices of F and E.
    Literal,
}

/// Precomputed images of every generator under every letter and side.
pub struct Actions {
    n: usize,
    rank: usize,
    right_table: RightTable,
    /// `[side][kind][node][gen]`, kind 0 = E, 1 = F.
    img: Vec<Vec<Vec<Vec<Vec<(Gen, FieldElem)>>>>>,
    /// `[side][node][gen]` scalar of K on the generator.
    kdiag: Vec<Vec<Vec<FieldElem>>>,
    kinvdiag: Vec<Vec<Vec<FieldElem>>>,
}

fn images(n: usize, m: &Mat, side: Side) -> Vec<Vec<(Gen, FieldElem)>> {
    let mut out = Vec::with_capacity(n * n);
    for g in 0..(n * n) as Gen {
        let (i, j) = gen_indices(n, g);
        let mut v = Vec::new();
        for k in 1..=n {
            match side {
                Side::Left => {
                    let c = &m[k - 1][j - 1];
                    if !c.is_zero() {
                        v.push((gen(n, i, k), c.clone()));
                    }
                }
                Side::Right => {
                    let c = &m[i - 1][k - 1];
                    if !c.is_zero() {
                        v.push((gen(n, k, j), c.clone()));
                    }
                }
            }
        }
        out.push(v);
    }
    out
}

fn diag(n: usize, m: &Mat, side: Side) -> Vec<FieldElem> {
    (0..(n * n) as Gen)
        .map(|g| {
            let (i, j) = gen_indices(n, g);
            match side {
                Side::Left => m[j - 1][j - 1].clone(),
                Side::Right => m[i - 1][i - 1].clone(),
            }
        })
        .collect()
}

impl Actions {
    pub fn new(rep: &RepMatrices) -> Self {
        Actions::with_table(rep, RightTable::Pairing)
    }

    pub fn with_table(rep: &RepMatrices, right_table: RightTable) -> Self {
        let n = rep.n_big;
        let rank = rep.rank();
        let mut img = Vec::new();
        let mut kdiag = Vec::new();
        let mut kinvdiag = Vec::new();
        for side in [Side::Left, Side::Right] {
            let mut kinds = Vec::new();
            for kind in 0..2 {
                let mats: Vec<Mat> = (0..rank)
                    .map(|i| {
                        let m = if kind == 0 { &rep.e[i] } else { &rep.f[i] };
                        if side == Side::Right && right_table == RightTable::Literal {
                            mat_transpose(if kind == 0 { &rep.f[i] } else { &rep.e[i] })
                        } else {
                            m.clone()
                        }
                    })
                    .collect();
                kinds.push(mats.iter().map(|m| images(n, m, side)).collect());
            }
            img.push(kinds);
            kdiag.push((0..rank).map(|i| diag(n, &rep.k[i], side)).collect());
            kinvdiag.push((0..rank).map(|i| diag(n, &rep.kinv[i], side)).collect());
        }
        Actions { n, rank, right_table, img, kdiag, kinvdiag }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn right_table(&self) -> RightTable {
        self.right_table
    }

    /// One letter on one word. E is primitive up to `K` on the later factors,
    /// F up to `K^-1` on the earlier factors, K is group-like.
    fn letter_on_word(&self, side: Side, x: Letter, w: &Word, c: &FieldElem, out: &mut NCPoly<FieldElem>) {
        let s = side as usize;
        let g = w.gens();
        match x {
            Letter::K(i) | Letter::Kinv(i) => {
                let d = if matches!(x, Letter::K(_)) { &self.kdiag[s][i - 1] } else { &self.kinvdiag[s][i - 1] };
                let mut acc = c.clone();
                for &h in g {
                    acc = acc.mul(&d[h as usize]);
                }
                out.add_term(w.clone(), acc);
            }
            Letter::E(i) | Letter::F(i) => {
                let is_e = matches!(x, Letter::E(_));
                let kind = if is_e { 0 } else { 1 };
                let im = &self.img[s][kind][i - 1];
                let d = if is_e { &self.kdiag[s][i - 1] } else { &self.kinvdiag[s][i - 1] };
                for p in 0..g.len() {
                    let mut acc = c.clone();
                    let range = if is_e { p + 1..g.len() } else { 0..p };
                    for &h in &g[range] {
                        acc = acc.mul(&d[h as usize]);
                    }
                    if acc.is_zero() {
                        continue;
                    }
                    for (h, x) in &im[g[p] as usize] {
                        out.add_term(w.splice(p, 1, &[*h]), acc.mul(x));
                    }
                }
            }
        }
    }

    pub fn apply_letter(&self, side: Side, x: Letter, a: &NCPoly<FieldElem>) -> NCPoly<FieldElem> {
        let mut out = NCPoly::zero(a.n());
        for (w, c) in a.terms() {
            self.letter_on_word(side, x, w, c, &mut out);
        }
        out
    }

    /// `X > a` for the word `X = x_1 x_2 ... x_r`, i.e. `x_1 > (x_2 > ...)`.
    pub fn act_left(&self, x: &[Letter], a: &NCPoly<FieldElem>) -> NCPoly<FieldElem> {
        x.iter().rev().fold(a.clone(), |acc, &l| self.apply_letter(Side::Left, l, &acc))
    }

    /// `a < X`, i.e. `((a < x_1) < x_2) ...`.
    pub fn act_right(&self, a: &NCPoly<FieldElem>, x: &[Letter]) -> NCPoly<FieldElem> {
        x.iter().fold(a.clone(), |acc, &l| self.apply_letter(Side::Right, l, &acc))
    }

    /// All single letters `E_i, F_i, K_i`.
    pub fn basic_letters(&self) -> Vec<Letter> {
        (1..=self.rank).flat_map(|i| [Letter::E(i), Letter::F(i), Letter::K(i)]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::vector_rep;

    #[test]
    fn generator_examples() {
        let rep = vector_rep(5).unwrap();
        let act = Actions::new(&rep);
        let u11 = NCPoly::<FieldElem>::u(5, 1, 1);
        assert_eq!(act.act_left(&[Letter::E(1)], &u11), NCPoly::u(5, 1, 2));
        let one = NCPoly::<FieldElem>::one(5);
        assert_eq!(act.act_left(&[Letter::K(1)], &one), one);
        for j in 1..=5 {
            assert_eq!(act.act_right(&NCPoly::u(5, 1, j), &[Letter::F(1)]), NCPoly::u(5, 2, j));
        }
    }
}
