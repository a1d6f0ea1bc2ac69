//! Right-action orbit of `y` under subwords of the F-sequence, expressed in
//! the coordinates `z_ij = u^i_N S(u^N_j)`, and the leg-wise projection of
//! `(d y, dbar y) < X` to the fiber.

use crate::action::{Actions, Letter};
use crate::exterior::{FiberForm, Order};
use crate::field::{fmt_rational, Field, FieldElem, QSqrt, Specialize, SqrtPoint};
use crate::frt::{generate_relations, FrtData, FrtError};
use crate::lemma::y_elem;
use crate::linalg::{Echelon, SparseVec};
use crate::ncpoly::{NCPoly, Word};
use crate::rep::{vector_rep, RepError};
use crate::rewrite::Rewriter;
use num_rational::BigRational;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OrbitError {
    #[error(transparent)]
    Frt(#[from] FrtError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("element obtained from `{0}` is not in the span of the z_ij")]
    NotInZSpan(String),
    #[error("a pair needs one d-leg and one dbar-leg")]
    BadTags,
}

/// `z_ij = q^{rho_j - rho_N} u^i_N u^{j'}_1`.
pub fn z_ij(data: &FrtData, i: usize, j: usize) -> NCPoly<FieldElem> {
    let n = data.n_big;
    let c = FieldElem::vpow(data.rho2(j) - data.rho2(n));
    NCPoly::word(n, &[(i, n), (data.conj(j), 1)], c)
}

/// Exact coordinates in the span of the normal forms of the `z_ij`.
pub struct ZBasis {
    n: usize,
    ech: Echelon<FieldElem>,
}

fn word_index(n: usize, w: &Word) -> usize {
    let g = w.gens();
    assert_eq!(g.len(), 2, "z coordinates live in degree 2");
    g[0] as usize * n * n + g[1] as usize
}

fn to_vec(n: usize, p: &NCPoly<FieldElem>) -> SparseVec<FieldElem> {
    p.terms().iter().map(|(w, c)| (word_index(n, w), c.clone())).collect()
}

impl ZBasis {
    pub fn new(data: &FrtData, rw: &Rewriter<FieldElem>) -> Self {
        let n = data.n_big;
        let mut ech = Echelon::new(true);
        for i in 1..=n {
            for j in 1..=n {
                let nf = rw.normal_form(&z_ij(data, i, j));
                ech.insert(&to_vec(n, &nf), (i - 1) * n + (j - 1));
            }
        }
        ZBasis { n, ech }
    }

    /// Number of independent `z_ij` modulo the relations.
    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    /// Coordinates of a degree-2 normal form, keyed by `(i, j)`.
    pub fn solve(&self, nf: &NCPoly<FieldElem>) -> Option<BTreeMap<(usize, usize), FieldElem>> {
        if nf.is_zero() {
            return Some(BTreeMap::new());
        }
        if nf.degree() != Some(2) || !nf.is_homogeneous() {
            return None;
        }
        let sol = self.ech.solve(&to_vec(self.n, nf))?;
        Some(sol.into_iter().map(|(t, c)| ((t / self.n + 1, t % self.n + 1), c)).collect())
    }
}

/// Shared state for orbit computations at one `N`.
pub struct OrbitContext {
    pub data: FrtData,
    pub rw: Rewriter<FieldElem>,
    pub act: Actions,
    pub zb: ZBasis,
}

impl OrbitContext {
    pub fn new(n: usize) -> Result<Self, OrbitError> {
        let data = FrtData::new(n)?;
        let rels = generate_relations(&data);
        let rw = Rewriter::build(&data, &rels.polys()).expect("nonempty relation set");
        let act = Actions::new(&vector_rep(n)?);
        let zb = ZBasis::new(&data, &rw);
        Ok(OrbitContext { data, rw, act, zb })
    }

    pub fn n(&self) -> usize {
        self.data.n_big
    }

    fn step(&self, a: &NCPoly<FieldElem>, l: Letter) -> NCPoly<FieldElem> {
        self.rw.normal_form(&self.act.act_right(a, &[l]))
    }

    pub fn coords(&self, a: &NCPoly<FieldElem>, label: &str) -> Result<BTreeMap<(usize, usize), FieldElem>, OrbitError> {
        self.zb.solve(&self.rw.normal_form(a)).ok_or_else(|| OrbitError::NotInZSpan(label.to_string()))
    }
}

/// Half of the F-sequence: the path from node 2 to the short/spin end and back.
pub fn half_word(n_big: usize) -> Vec<usize> {
    let n = n_big / 2;
    let mut h: Vec<usize> = Vec::new();
    if n_big % 2 == 1 {
        h.extend(2..=n);
        h.extend((2..=n).rev());
    } else {
        h.extend(2..n);
        h.push(n);
        h.extend((2..=n.saturating_sub(2)).rev());
    }
    h
}

/// The sequence `X_1 .. X_r`: the half word twice, then `F_1 F_1`.
pub fn f_sequence(n_big: usize) -> Vec<Letter> {
    let h = half_word(n_big);
    h.iter().chain(h.iter()).chain([1, 1].iter()).map(|&i| Letter::F(i)).collect()
}

/// The word taking `y` to the terminal element: half word, then `F_1 F_1`.
pub fn terminal_word(n_big: usize) -> Vec<Letter> {
    half_word(n_big).into_iter().chain([1, 1]).map(Letter::F).collect()
}

pub fn word_label(x: &[Letter]) -> String {
    if x.is_empty() {
        return "1".into();
    }
    x.iter().map(|l| l.label()).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum OrbitFamily {
    /// `z_{i,N} - q^g z_{1,i'}`
    #[serde(rename = "i'")]
    I,
    /// `z_{N,N} - q^a z_{N-1,N-1} + q^b z_{2,2} - q^c z_{1,1}`
    #[serde(rename = "ii'")]
    II,
    /// `z_{i,N-1} - q^a z_{2,i'}`
    #[serde(rename = "iii'")]
    III,
    /// `z_{N,N-1} - mu z_{2,1}`
    #[serde(rename = "iv'")]
    IV,
    #[serde(rename = "unclassified")]
    Unclassified,
}

/// Family of a nonzero coordinate vector, decided by its support.
pub fn classify(n: usize, c: &BTreeMap<(usize, usize), FieldElem>) -> OrbitFamily {
    let support: Vec<(usize, usize)> = c.keys().copied().collect();
    let is = |mut s: Vec<(usize, usize)>| {
        s.sort();
        s == support
    };
    let conj = |i: usize| n + 1 - i;
    if (2..n).any(|i| is(vec![(i, n), (1, conj(i))])) {
        return OrbitFamily::I;
    }
    if is(vec![(n, n), (n - 1, n - 1), (2, 2), (1, 1)]) {
        return OrbitFamily::II;
    }
    if (2..n - 1).any(|i| conj(i) != n - 1 && is(vec![(i, n - 1), (2, conj(i))])) {
        return OrbitFamily::III;
    }
    if is(vec![(n, n - 1), (2, 1)]) {
        return OrbitFamily::IV;
    }
    OrbitFamily::Unclassified
}

fn sign_at(p: &SqrtPoint, x: &FieldElem) -> Option<i8> {
    let v: QSqrt = p.map(x).ok()?;
    Some(match v.signum() {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    })
}

fn monomial_label(x: &FieldElem) -> Option<String> {
    x.as_monomial().map(|(r, k)| format!("{} v^{}", fmt_rational(&r), k))
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceEntry {
    pub word: String,
    pub family: OrbitFamily,
    pub coefficients: BTreeMap<String, String>,
    /// Coefficients divided by the one at the largest index, written `r v^k` when monomial.
    pub normalized: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TerminalReport {
    pub word: String,
    pub family: OrbitFamily,
    /// `mu` in `z_{N,N-1} - mu z_{2,1}`.
    pub mu: Option<String>,
    pub mu_at_sample: Option<String>,
    pub mu_sign: Option<i8>,
    pub mu_negative: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub n: usize,
    pub sequence: String,
    pub sample_q: String,
    pub z_rank: usize,
    pub subsequences: usize,
    pub distinct_words: usize,
    pub nonzero_words: usize,
    pub family_counts: BTreeMap<String, usize>,
    pub unclassified: usize,
    /// Distinct words whose image lies in family (iv').
    pub iv_words: Vec<String>,
    pub terminal: TerminalReport,
    pub classification_ok: bool,
    pub ok: bool,
    pub trace: Vec<TraceEntry>,
}

fn coord_label(k: &(usize, usize)) -> String {
    format!("z{},{}", k.0, k.1)
}

fn entry(word: &str, n: usize, c: &BTreeMap<(usize, usize), FieldElem>) -> TraceEntry {
    let family = classify(n, c);
    let lead = c.values().next_back().cloned();
    let mut normalized = BTreeMap::new();
    if let Some(lead) = &lead {
        for (k, v) in c {
            let r = v.div(lead);
            normalized.insert(coord_label(k), monomial_label(&r).unwrap_or_else(|| r.to_string()));
        }
    }
    TraceEntry {
        word: word.into(),
        family,
        coefficients: c.iter().map(|(k, v)| (coord_label(k), v.to_string())).collect(),
        normalized,
    }
}

/// Applies every subword `X_{i_1} .. X_{i_r}` (`i_1 < .. < i_r`) of the
/// F-sequence to `y` from the right and classifies the nonzero results.
pub fn orbit_scan(ctx: &OrbitContext, sample_q: &BigRational) -> Result<OrbitReport, OrbitError> {
    let n = ctx.n();
    let seq = f_sequence(n);
    let y = ctx.rw.normal_form(&y_elem(n));
    // distinct subwords, each reached from its longest proper prefix
    let mut results: HashMap<Vec<Letter>, NCPoly<FieldElem>> = HashMap::new();
    results.insert(vec![], y.clone());
    let mut frontier: Vec<(Vec<Letter>, usize)> = vec![(vec![], 0)];
    let mut subsequences = 0usize;
    while let Some((w, start)) = frontier.pop() {
        subsequences += 1;
        let cur = results[&w].clone();
        for (p, &l) in seq.iter().enumerate().skip(start) {
            let mut nw = w.clone();
            nw.push(l);
            if !results.contains_key(&nw) {
                let img = if cur.is_zero() { cur.clone() } else { ctx.step(&cur, l) };
                results.insert(nw.clone(), img);
            }
            frontier.push((nw, p + 1));
        }
    }
    let mut words: Vec<&Vec<Letter>> = results.keys().collect();
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| word_label(a).cmp(&word_label(b))));
    let mut trace = Vec::new();
    let mut family_counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut iv_words = Vec::new();
    let mut unclassified = 0;
    for w in words {
        let img = &results[w];
        if img.is_zero() {
            continue;
        }
        let label = word_label(w);
        let c = ctx.zb.solve(img).ok_or_else(|| OrbitError::NotInZSpan(label.clone()))?;
        let e = entry(&label, n, &c);
        let name = serde_json::to_value(e.family).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        *family_counts.entry(name).or_default() += 1;
        match e.family {
            OrbitFamily::IV => iv_words.push(label.clone()),
            OrbitFamily::Unclassified => unclassified += 1,
            _ => {}
        }
        trace.push(e);
    }
    let tw = terminal_word(n);
    let timg = ctx.rw.normal_form(&ctx.act.act_right(&y, &tw));
    let tc = ctx.zb.solve(&timg).ok_or_else(|| OrbitError::NotInZSpan(word_label(&tw)))?;
    let tfam = if tc.is_empty() { OrbitFamily::Unclassified } else { classify(n, &tc) };
    let point = SqrtPoint::new(sample_q.clone());
    let mu = (tfam == OrbitFamily::IV).then(|| tc[&(2, 1)].div(&tc[&(n, n - 1)]).neg());
    let mu_sign = mu.as_ref().and_then(|m| sign_at(&point, m));
    let mu_at_sample = mu.as_ref().and_then(|m| point.map(m).ok()).map(|v| v.to_string());
    let terminal = TerminalReport {
        word: word_label(&tw),
        family: tfam,
        mu: mu.as_ref().map(|m| m.to_string()),
        mu_at_sample,
        mu_sign,
        mu_negative: mu_sign == Some(-1),
    };
    let classification_ok = unclassified == 0 && tfam == OrbitFamily::IV;
    let ok = classification_ok && terminal.mu_negative;
    Ok(OrbitReport {
        n,
        sequence: word_label(&seq),
        sample_q: fmt_rational(sample_q),
        z_rank: ctx.zb.rank(),
        subsequences,
        distinct_words: results.len(),
        nonzero_words: trace.len(),
        family_counts,
        unclassified,
        iv_words,
        terminal,
        classification_ok,
        ok,
        trace,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Tag {
    /// a `d`-leg, projecting to `Lambda^+`
    Del,
    /// a `dbar`-leg, projecting to `Lambda^-`
    DelBar,
}

/// `[d a] ^ [dbar b]` (or the reverse) recorded through the two functions.
#[derive(Clone, Debug)]
pub struct TaggedForm {
    pub legs: [(Tag, NCPoly<FieldElem>); 2],
}

impl TaggedForm {
    pub fn new(first: (Tag, NCPoly<FieldElem>), second: (Tag, NCPoly<FieldElem>)) -> Self {
        TaggedForm { legs: [first, second] }
    }
}

/// `e+_i` coefficients from `z_{i+1,N}`; `e-_i` from `q^{rho_{i+1}} z_{N,i+1}`.
fn project_leg(
    ctx: &OrbitContext,
    tag: Tag,
    c: &BTreeMap<(usize, usize), FieldElem>,
) -> Vec<(u32, FieldElem)> {
    let n = ctx.n();
    (1..=n - 2)
        .filter_map(|i| {
            let x = match tag {
                Tag::Del => c.get(&(i + 1, n))?.clone(),
                Tag::DelBar => c.get(&(n, i + 1))?.mul(&FieldElem::vpow(ctx.data.rho2(i + 1))),
            };
            Some((1u32 << (i - 1), x))
        })
        .collect()
}

/// Acts on the pair by the iterated coproduct of `X` and projects each leg
/// to the fiber.
pub fn pair_act_project(ctx: &OrbitContext, t: &TaggedForm, x: &[Letter]) -> Result<FiberForm<FieldElem>, OrbitError> {
    let order = match (t.legs[0].0, t.legs[1].0) {
        (Tag::Del, Tag::DelBar) => Order::PlusFirst,
        (Tag::DelBar, Tag::Del) => Order::MinusFirst,
        _ => return Err(OrbitError::BadTags),
    };
    let n = ctx.n();
    let mut pairs: Vec<(Vec<Letter>, NCPoly<FieldElem>, NCPoly<FieldElem>)> =
        vec![(vec![], ctx.rw.normal_form(&t.legs[0].1), ctx.rw.normal_form(&t.legs[1].1))];
    for &l in x {
        let mut next = Vec::new();
        for (w, a, b) in pairs {
            let mut push = |a: NCPoly<FieldElem>, b: NCPoly<FieldElem>, tagl: Letter| {
                if !a.is_zero() && !b.is_zero() {
                    let mut nw = w.clone();
                    nw.push(tagl);
                    next.push((nw, a, b));
                }
            };
            match l {
                Letter::F(i) => {
                    push(ctx.step(&a, l), b.clone(), l);
                    push(ctx.step(&a, Letter::Kinv(i)), ctx.step(&b, l), Letter::Kinv(i));
                }
                Letter::E(i) => {
                    push(ctx.step(&a, l), ctx.step(&b, Letter::K(i)), l);
                    push(a.clone(), ctx.step(&b, l), Letter::K(i));
                }
                Letter::K(_) | Letter::Kinv(_) => push(ctx.step(&a, l), ctx.step(&b, l), l),
            }
        }
        pairs = next;
    }
    let mut out = FiberForm::zero(n - 2, order);
    for (w, a, b) in pairs {
        let label = word_label(&w);
        let ca = ctx.zb.solve(&a).ok_or_else(|| OrbitError::NotInZSpan(label.clone()))?;
        let cb = ctx.zb.solve(&b).ok_or(OrbitError::NotInZSpan(label))?;
        let pa = project_leg(ctx, t.legs[0].0, &ca);
        let pb = project_leg(ctx, t.legs[1].0, &cb);
        for (ma, xa) in &pa {
            for (mb, xb) in &pb {
                let (plus, minus) = if order == Order::PlusFirst { (*ma, *mb) } else { (*mb, *ma) };
                out.add_term(plus, minus, xa.mul(xb));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCase {
    pub order: Order,
    pub word: String,
    pub form: String,
    /// The single basis element `(i, j)` of the result, if there is exactly one.
    pub single_term: Option<(Vec<u8>, Vec<u8>)>,
    pub gamma: Option<String>,
    pub gamma_at_sample: Option<String>,
    pub gamma_sign: Option<i8>,
    /// The result is a nonzero multiple of `e+_{N-2} ^ e-_{N-2}`.
    pub expected_shape: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub n: usize,
    pub sample_q: String,
    pub cases: Vec<PairCase>,
    /// `(d y, dbar y) < X = gamma e+_M ^ e-_M` with `gamma < 0`.
    pub ok: bool,
}

/// Projects `(d y, dbar y) < X` and `(dbar y, d y) < X` with `X` the full
/// F-sequence.
pub fn verify_pair_projection(ctx: &OrbitContext, sample_q: &BigRational) -> Result<PairReport, OrbitError> {
    let n = ctx.n();
    let m = n - 2;
    let y = y_elem(n);
    let x = f_sequence(n);
    let point = SqrtPoint::new(sample_q.clone());
    let mut cases = Vec::new();
    for (t0, t1) in [(Tag::Del, Tag::DelBar), (Tag::DelBar, Tag::Del)] {
        let t = TaggedForm::new((t0, y.clone()), (t1, y.clone()));
        let f = pair_act_project(ctx, &t, &x)?;
        let single = (f.len() == 1).then(|| *f.terms().keys().next().expect("one term"));
        let last = 1u32 << (m - 1);
        let expected_shape = single == Some((last, last));
        let gamma = single.map(|(p, q)| f.coeff(p, q));
        let gamma_sign = gamma.as_ref().and_then(|g| sign_at(&point, g));
        cases.push(PairCase {
            order: f.order(),
            word: word_label(&x),
            form: f.to_string(),
            single_term: single.map(|(p, q)| (crate::exterior::mask_indices(p), crate::exterior::mask_indices(q))),
            gamma: gamma.as_ref().map(|g| g.to_string()),
            gamma_at_sample: gamma.as_ref().and_then(|g| point.map(g).ok()).map(|v| v.to_string()),
            gamma_sign,
            expected_shape,
        });
    }
    let ok = cases[0].expected_shape && cases[0].gamma_sign == Some(-1) && cases[1].expected_shape;
    Ok(PairReport { n, sample_q: fmt_rational(sample_q), cases, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn sequences() {
        let lab = |v: Vec<Letter>| word_label(&v);
        assert_eq!(lab(f_sequence(5)), "F2 F2 F2 F2 F1 F1");
        assert_eq!(lab(f_sequence(7)), "F2 F3 F3 F2 F2 F3 F3 F2 F1 F1");
        assert_eq!(lab(f_sequence(6)), "F2 F3 F2 F3 F1 F1");
        assert_eq!(lab(f_sequence(8)), "F2 F3 F4 F2 F2 F3 F4 F2 F1 F1");
        assert_eq!(lab(terminal_word(5)), "F2 F2 F1 F1");
    }

    #[test]
    fn seed_is_family_one() {
        let ctx = OrbitContext::new(5).unwrap();
        let c = ctx.coords(&y_elem(5), "1").unwrap();
        assert_eq!(classify(5, &c), OrbitFamily::I);
        // y = q (z_{2,N} - q^-2 z_{1,N-1})
        assert_eq!(c[&(2, 5)], FieldElem::q());
        assert_eq!(c[&(1, 4)], FieldElem::qpow(-1).neg());
    }

    #[test]
    fn z_has_no_fiber_component() {
        let ctx = OrbitContext::new(5).unwrap();
        let z = crate::lemma::z_elem(5);
        let t = TaggedForm::new((Tag::Del, z.clone()), (Tag::DelBar, z));
        assert!(pair_act_project(&ctx, &t, &[]).unwrap().is_zero());
        let zero = TaggedForm::new((Tag::Del, NCPoly::zero(5)), (Tag::DelBar, y_elem(5)));
        assert!(pair_act_project(&ctx, &zero, &[]).unwrap().is_zero());
    }

    #[test]
    fn first_step_is_family_one() {
        let ctx = OrbitContext::new(5).unwrap();
        let img = ctx.act.act_right(&y_elem(5), &[Letter::F(2)]);
        let c = ctx.coords(&img, "F2").unwrap();
        assert_eq!(classify(5, &c), OrbitFamily::I);
    }

    #[test]
    fn pair_projection_n5() {
        let ctx = OrbitContext::new(5).unwrap();
        let r = verify_pair_projection(&ctx, &BigRational::new(BigInt::from(11), BigInt::from(10))).unwrap();
        assert!(r.ok, "{:?}", r);
    }
}
