//! The N-dimensional vector representation of `U_q(so_N)`.

use crate::cartan::{wadd, CartanData, Weight};
use crate::field::{Field, FieldElem, Q2};
use serde::Serialize;
use thiserror::Error;

/// Dense square matrix; `m[t][s]` is the coefficient of `v_t` in `X v_s`.
pub type Mat = Vec<Vec<FieldElem>>;

pub fn mat_zero(n: usize) -> Mat {
    vec![vec![FieldElem::zero(); n]; n]
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = mat_zero(n);
    for (r, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for c in 0..n {
                if !b[k][c].is_zero() {
                    out[r][c] = out[r][c].add(&x.mul(&b[k][c]));
                }
            }
        }
    }
    out
}

pub fn mat_lin(a: &Mat, ca: &FieldElem, b: &Mat, cb: &FieldElem) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.mul(ca).add(&y.mul(cb))).collect())
        .collect()
}

pub fn mat_is_zero(a: &Mat) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

pub fn mat_transpose(a: &Mat) -> Mat {
    let n = a.len();
    (0..n).map(|r| (0..n).map(|c| a[c][r].clone()).collect()).collect()
}

#[derive(Debug, Error)]
pub enum RepError {
    #[error("weight propagation left v_{0} unreached")]
    Unreached(usize),
    #[error("weight of v_N is not the first fundamental weight")]
    TopWeight,
    #[error(transparent)]
    Cartan(#[from] crate::cartan::CartanError),
}

/// Conventions that are not fixed by the formulas alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RepConvention {
    pub q2: Q2,
    /// Sign in `F_j v_{j'} = sign * v_{(j+1)'}` for even N.
    pub d_sign: i8,
}

impl Default for RepConvention {
    fn default() -> Self {
        RepConvention { q2: Q2::HalfQ, d_sign: -1 }
    }
}

#[derive(Clone, Debug)]
pub struct RepMatrices {
    pub n_big: usize,
    pub cartan: CartanData,
    pub convention: RepConvention,
    pub e: Vec<Mat>,
    pub f: Vec<Mat>,
    pub k: Vec<Mat>,
    pub kinv: Vec<Mat>,
    pub weights: Vec<Weight>,
}

pub fn vector_rep(n_big: usize) -> Result<RepMatrices, RepError> {
    vector_rep_with(n_big, RepConvention::default())
}

pub fn vector_rep_with(n_big: usize, conv: RepConvention) -> Result<RepMatrices, RepError> {
    let cartan = CartanData::for_n(n_big)?;
    let n = cartan.rank;
    let nb = n_big;
    let cj = |i: usize| nb + 1 - i;
    let one = FieldElem::one();
    let mut e = vec![mat_zero(nb); n];
    let mut f = vec![mat_zero(nb); n];
    // X v_src = val v_tgt, 1-based
    let set = |m: &mut Mat, tgt: usize, src: usize, val: FieldElem| m[tgt - 1][src - 1] = val;
    for j in 1..n {
        set(&mut e[j - 1], j + 1, j, one.clone());
        set(&mut e[j - 1], cj(j), cj(j + 1), one.neg());
        set(&mut f[j - 1], j, j + 1, one.clone());
        let s = if nb % 2 == 1 { -1 } else { conv.d_sign as i64 };
        set(&mut f[j - 1], cj(j + 1), cj(j), FieldElem::int(s));
    }
    if nb % 2 == 1 {
        let c = FieldElem::c(conv.q2);
        let q2 = FieldElem::vpow(conv.q2.v_exponent());
        set(&mut e[n - 1], n + 1, n, c.clone());
        set(&mut e[n - 1], n + 2, n + 1, q2.mul(&c).neg());
        set(&mut f[n - 1], n, n + 1, c.clone());
        set(&mut f[n - 1], n + 1, n + 2, c.div(&q2).neg());
    } else {
        set(&mut e[n - 1], n + 2, n, one.neg());
        set(&mut e[n - 1], n + 1, n - 1, one.clone());
        set(&mut f[n - 1], n, n + 2, one.neg());
        set(&mut f[n - 1], n - 1, n + 1, one.clone());
    }
    let weights = propagate_weights(&cartan, &e, nb)?;
    let diag = |i: usize, sign: i32| -> Mat {
        let mut m = mat_zero(nb);
        for s in 0..nb {
            m[s][s] = FieldElem::vpow(sign * cartan.k_vexp(i, &weights[s]));
        }
        m
    };
    let k = (0..n).map(|i| diag(i, 1)).collect();
    let kinv = (0..n).map(|i| diag(i, -1)).collect();
    Ok(RepMatrices { n_big: nb, cartan, convention: conv, e, f, k, kinv, weights })
}

/// `wt(v_1) = -varpi_1`, and `E_i v_s` has weight `wt(v_s) + alpha_i`.
fn propagate_weights(c: &CartanData, e: &[Mat], nb: usize) -> Result<Vec<Weight>, RepError> {
    let mut wt: Vec<Option<Weight>> = vec![None; nb];
    wt[0] = Some(c.fundamental[0].iter().map(|x| -x).collect());
    let mut changed = true;
    while changed {
        changed = false;
        for (i, m) in e.iter().enumerate() {
            for t in 0..nb {
                for s in 0..nb {
                    if !m[t][s].is_zero() && wt[t].is_none() {
                        if let Some(ws) = wt[s].clone() {
                            wt[t] = Some(wadd(&ws, &c.simple_roots[i]));
                            changed = true;
                        }
                    }
                }
            }
        }
    }
    let out: Vec<Weight> = wt.into_iter().enumerate().map(|(i, w)| w.ok_or(RepError::Unreached(i + 1))).collect::<Result<_, _>>()?;
    if out[nb - 1] != c.fundamental[0] {
        return Err(RepError::TopWeight);
    }
    Ok(out)
}

impl RepMatrices {
    pub fn rank(&self) -> usize {
        self.cartan.rank
    }

    /// `q_i` as a power of `v`.
    pub fn qi(&self, i: usize) -> FieldElem {
        FieldElem::vpow(self.cartan.qi_vexp(i))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelCheck {
    pub relation: String,
    pub nodes: Vec<usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VariantSummary {
    pub q2: Q2,
    pub d_sign: i8,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RepReport {
    pub n: usize,
    pub convention: RepConvention,
    pub checks: Vec<RelCheck>,
    pub all_ok: bool,
    /// Outcome of the same checks under the other conventions.
    pub variants: Vec<VariantSummary>,
}

fn qint_sym(k: i64, t: &FieldElem) -> FieldElem {
    t.pow(k as i32).sub(&t.pow(-(k as i32))).div(&t.sub(&t.inv()))
}

fn qbinom(m: i64, r: i64, t: &FieldElem) -> FieldElem {
    let fact = |k: i64| (1..=k).fold(FieldElem::one(), |acc, s| acc.mul(&qint_sym(s, t)));
    fact(m).div(&fact(r).mul(&fact(m - r)))
}

/// All defining relations as exact matrix identities.
pub fn relation_checks(rep: &RepMatrices) -> Vec<RelCheck> {
    let n = rep.rank();
    let mut out = Vec::new();
    let mut push = |relation: &str, nodes: Vec<usize>, ok: bool| out.push(RelCheck { relation: relation.into(), nodes, ok });
    let one = FieldElem::one();
    for i in 0..n {
        for j in 0..n {
            let kk = mat_lin(&mat_mul(&rep.k[i], &rep.k[j]), &one, &mat_mul(&rep.k[j], &rep.k[i]), &one.neg());
            push("K_i K_j = K_j K_i", vec![i + 1, j + 1], mat_is_zero(&kk));
            let p = rep.qi(i).pow(rep.cartan.cartan_matrix[i][j] as i32);
            let ke = mat_mul(&mat_mul(&rep.k[i], &rep.e[j]), &rep.kinv[i]);
            push("K_i E_j K_i^-1 = q_i^a_ij E_j", vec![i + 1, j + 1], mat_is_zero(&mat_lin(&ke, &one, &rep.e[j], &p.neg())));
            let kf = mat_mul(&mat_mul(&rep.k[i], &rep.f[j]), &rep.kinv[i]);
            push("K_i F_j K_i^-1 = q_i^-a_ij F_j", vec![i + 1, j + 1], mat_is_zero(&mat_lin(&kf, &one, &rep.f[j], &p.inv().neg())));
            let comm = mat_lin(&mat_mul(&rep.e[i], &rep.f[j]), &one, &mat_mul(&rep.f[j], &rep.e[i]), &one.neg());
            let ok = if i == j {
                let qi = rep.qi(i);
                let s = qi.sub(&qi.inv()).inv();
                let rhs = mat_lin(&rep.k[i], &s, &rep.kinv[i], &s.neg());
                mat_is_zero(&mat_lin(&comm, &one, &rhs, &one.neg()))
            } else {
                mat_is_zero(&comm)
            };
            push("E_i F_j - F_j E_i = delta_ij (K_i - K_i^-1)/(q_i - q_i^-1)", vec![i + 1, j + 1], ok);
            if i != j {
                let m = 1 - rep.cartan.cartan_matrix[i][j];
                let qi = rep.qi(i);
                for (label, x) in [("Serre E", &rep.e), ("Serre F", &rep.f)] {
                    let mut tot = mat_zero(rep.n_big);
                    for r in 0..=m {
                        let mut p = mat_zero(rep.n_big);
                        for s in 0..rep.n_big {
                            p[s][s] = one.clone();
                        }
                        for _ in 0..(m - r) {
                            p = mat_mul(&p, &x[i]);
                        }
                        p = mat_mul(&p, &x[j]);
                        for _ in 0..r {
                            p = mat_mul(&p, &x[i]);
                        }
                        let c = qbinom(m, r, &qi).mul(&FieldElem::int(if r % 2 == 0 { 1 } else { -1 }));
                        tot = mat_lin(&tot, &one, &p, &c);
                    }
                    push(label, vec![i + 1, j + 1], mat_is_zero(&tot));
                }
            }
        }
    }
    out
}

fn failures(checks: &[RelCheck]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.ok)
        .map(|c| format!("{} {:?}", c.relation, c.nodes))
        .collect()
}

pub fn verify_qea_relations(n_big: usize) -> Result<RepReport, RepError> {
    verify_qea_relations_with(n_big, RepConvention::default())
}

pub fn verify_qea_relations_with(n_big: usize, conv: RepConvention) -> Result<RepReport, RepError> {
    let rep = vector_rep_with(n_big, conv)?;
    let checks = relation_checks(&rep);
    let all_ok = checks.iter().all(|c| c.ok);
    let mut variants = Vec::new();
    let alternatives: Vec<RepConvention> = if n_big % 2 == 1 {
        Q2::ALL.iter().map(|&q2| RepConvention { q2, d_sign: conv.d_sign }).collect()
    } else {
        [-1i8, 1].iter().map(|&d_sign| RepConvention { q2: conv.q2, d_sign }).collect()
    };
    for alt in alternatives {
        if alt == conv {
            continue;
        }
        let r = vector_rep_with(n_big, alt)?;
        variants.push(VariantSummary { q2: alt.q2, d_sign: alt.d_sign, failures: failures(&relation_checks(&r)) });
    }
    Ok(RepReport { n: n_big, convention: conv, checks, all_ok, variants })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_entries() {
        let r6 = vector_rep(6).unwrap();
        assert!(r6.e[0][1][0].is_one());
        assert_eq!(r6.e[0][5][4], FieldElem::int(-1));
        let r5 = vector_rep(5).unwrap();
        assert_eq!(r5.e[1][2][1], FieldElem::c(Q2::HalfQ));
    }
}
