//! Covariance of the relation span and highest-weight checks.

use crate::action::{Actions, Letter, RightTable, Side};
use crate::cartan::Weight;
use crate::field::FieldElem;
use crate::frt::RelationSet;
use crate::ncpoly::NCPoly;
use crate::rep::RepMatrices;
use crate::rewrite::Rewriter;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct CovarianceEntry {
    pub relation: [usize; 4],
    pub letter: String,
    pub side: Side,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CovarianceReport {
    pub n: usize,
    pub right_table: RightTable,
    pub checks: usize,
    pub passed: usize,
    pub failures: Vec<CovarianceEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub entries: Vec<CovarianceEntry>,
}

impl CovarianceReport {
    pub fn all_ok(&self) -> bool {
        self.checks == self.passed
    }
}

/// For every stored relation `r` and every `X` in `E_i, F_i, K_i`, both
/// `X > r` and `r < X` must reduce to zero.
pub fn verify_covariance(
    rels: &RelationSet,
    rw: &Rewriter<FieldElem>,
    act: &Actions,
    detailed: bool,
) -> CovarianceReport {
    let letters = act.basic_letters();
    let jobs: Vec<(usize, Letter, Side)> = (0..rels.relations.len())
        .flat_map(|r| letters.iter().flat_map(move |&l| [Side::Left, Side::Right].map(|s| (r, l, s))))
        .collect();
    let entries: Vec<CovarianceEntry> = jobs
        .par_iter()
        .map(|&(r, l, side)| {
            let rel = &rels.relations[r];
            let img = act.apply_letter(side, l, &rel.poly);
            let ok = rw.normal_form(&img).is_zero();
            CovarianceEntry { relation: rel.quad, letter: l.label(), side, ok }
        })
        .collect();
    let passed = entries.iter().filter(|e| e.ok).count();
    let failures = entries.iter().filter(|e| !e.ok).cloned().collect();
    CovarianceReport {
        n: rels.data.n_big,
        right_table: act.right_table(),
        checks: entries.len(),
        passed,
        failures,
        entries: if detailed { entries } else { vec![] },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HwEntry {
    pub node: usize,
    pub annihilated: bool,
    pub eigen: bool,
    /// Exponent `e` with `a < K_i^-1 = v^e a`, as expected from the weight.
    pub expected_v_exponent: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct HwReport {
    pub element: String,
    pub weight: Vec<String>,
    pub entries: Vec<HwEntry>,
    pub ok: bool,
}

/// `a < S(E_i) = 0` and `a < S(K_i) = q_DJ^{(lambda, alpha_i)} a` modulo the
/// relations, with `S(E_i) = -E_i K_i^-1` and `S(K_i) = K_i^-1`.
pub fn hw_check(
    name: &str,
    a: &NCPoly<FieldElem>,
    lambda: &Weight,
    rep: &RepMatrices,
    act: &Actions,
    rw: &Rewriter<FieldElem>,
) -> HwReport {
    let mut entries = Vec::new();
    for i in 1..=rep.rank() {
        let se = act.act_right(a, &[Letter::E(i), Letter::Kinv(i)]).neg();
        let annihilated = rw.normal_form(&se).is_zero();
        let e = rep.cartan.k_vexp(i - 1, lambda);
        let sk = act.act_right(a, &[Letter::Kinv(i)]);
        let diff = sk.sub(&a.scale(&FieldElem::vpow(e)));
        let eigen = rw.normal_form(&diff).is_zero();
        entries.push(HwEntry { node: i, annihilated, eigen, expected_v_exponent: e });
    }
    let ok = entries.iter().all(|e| e.annihilated && e.eigen);
    HwReport {
        element: name.into(),
        weight: lambda.iter().map(crate::field::fmt_rational).collect(),
        entries,
        ok,
    }
}
