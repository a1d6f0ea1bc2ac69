//! The commutation relations of the coordinate algebra, checked instance by
//! instance.

use crate::field::{AtV, Field, FieldElem};
use crate::frt::{generate_relations, FrtData, RelationSet};
use crate::ncpoly::NCPoly;
use crate::rewrite::{saturate_and_check, Membership, Rewriter};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::OnceLock;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Vacuous,
    Probable,
    Inconclusive,
    Refuted,
    Excluded,
}

impl Status {
    /// 0 = fine, 1 = not decided, 2 = definite failure.
    pub fn severity(self) -> u8 {
        match self {
            Status::Verified | Status::Vacuous | Status::Excluded => 0,
            Status::Probable | Status::Inconclusive => 1,
            Status::Refuted => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub family: String,
    pub indices: Vec<usize>,
    pub status: Status,
    pub certificate_size: usize,
    pub millis: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilySummary {
    pub family: String,
    pub statement: String,
    pub instances: usize,
    pub verified: usize,
    pub refuted: usize,
    pub undecided: usize,
    pub excluded: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub n: usize,
    pub candidates_scanned: usize,
    pub relations: usize,
    pub span_rank: usize,
    pub families: Vec<FamilySummary>,
    pub instances: Vec<InstanceReport>,
}

impl LemmaReport {
    /// Worst severity over the asserted families (the sign-corrected
    /// diagnostic family is not asserted).
    pub fn severity(&self) -> u8 {
        self.instances.iter().filter(|r| !r.family.ends_with('*')).map(|r| r.status.severity()).max().unwrap_or(0)
    }

    pub fn family_ok(&self, family: &str) -> bool {
        self.instances.iter().filter(|r| r.family == family).all(|r| r.status.severity() == 0)
    }
}

/// A relation to check: `lhs - rhs` should lie in the ideal.
#[derive(Clone, Debug)]
pub struct Instance {
    pub family: &'static str,
    pub indices: Vec<usize>,
    pub poly: NCPoly<FieldElem>,
    pub excluded: bool,
}

pub const FAMILIES: [(&str, &str); 10] = [
    ("F1", "u^i_1 u^i_N = q^2 u^i_N u^i_1, i != i'"),
    ("F2", "u^i_l u^i_k = q u^i_k u^i_l, l < k, i != i' (l = k' excluded)"),
    ("F3", "u^j_l u^i_k = u^i_k u^j_l, l < k, i < j, l != k', i != j'"),
    ("F4", "u^j_1 u^i_N = q u^i_N u^j_1, i < j, i != j'"),
    ("F5", "u^i_1 u^j_N = q u^j_N u^i_1 + (q^2 - 1) u^i_N u^j_1, i < j, i != j'"),
    ("F6", "u^i_k u^j_l = u^j_l u^i_k - (q - q^-1) u^j_k u^i_l, i < j, k < l, i != j', k != l'"),
    ("F6*", "u^i_k u^j_l = u^j_l u^i_k + (q - q^-1) u^j_k u^i_l (sign-corrected, diagnostic)"),
    ("F7", "u^i_k u^j_k = q u^j_k u^i_k, k != k', i < j, i != j'"),
    ("F8", "h_a y = q^2 y h_a, h_a = u^1_1 u^2_a - q u^2_1 u^1_a, y = h_N, 2 <= a <= N-1"),
    ("F9", "y y_a = q^2 y_a y, y_a = u^1_a u^2_N - q u^2_a u^1_N, 2 <= a <= N-1"),
];

fn w(n: usize, idx: &[(usize, usize)], c: FieldElem) -> NCPoly<FieldElem> {
    NCPoly::word(n, idx, c)
}

/// `u^1_a u^2_N - q u^2_a u^1_N`.
pub fn y_a(n: usize, a: usize) -> NCPoly<FieldElem> {
    w(n, &[(1, a), (2, n)], FieldElem::one()).add(&w(n, &[(2, a), (1, n)], FieldElem::q().neg()))
}

/// `u^1_1 u^2_a - q u^2_1 u^1_a`.
pub fn h_a(n: usize, a: usize) -> NCPoly<FieldElem> {
    w(n, &[(1, 1), (2, a)], FieldElem::one()).add(&w(n, &[(2, 1), (1, a)], FieldElem::q().neg()))
}

/// `z = u^1_1 u^1_N`.
pub fn z_elem(n: usize) -> NCPoly<FieldElem> {
    w(n, &[(1, 1), (1, n)], FieldElem::one())
}

/// `y = u^1_1 u^2_N - q u^2_1 u^1_N`.
pub fn y_elem(n: usize) -> NCPoly<FieldElem> {
    y_a(n, 1)
}

pub fn instances(data: &FrtData) -> Vec<Instance> {
    let n = data.n_big;
    let cj = |i: usize| data.conj(i);
    let q = FieldElem::q();
    let one = FieldElem::one();
    let mut out = Vec::new();
    let mut push = |family: &'static str, indices: Vec<usize>, lhs: NCPoly<FieldElem>, rhs: NCPoly<FieldElem>, excluded: bool| {
        out.push(Instance { family, indices, poly: lhs.sub(&rhs), excluded });
    };
    let r = 1..=n;
    for i in r.clone() {
        if i != cj(i) {
            push("F1", vec![i], w(n, &[(i, 1), (i, n)], one.clone()), w(n, &[(i, n), (i, 1)], FieldElem::qpow(2)), false);
        }
    }
    for i in r.clone() {
        for l in r.clone() {
            for k in r.clone() {
                if l < k && i != cj(i) {
                    push("F2", vec![i, l, k], w(n, &[(i, l), (i, k)], one.clone()), w(n, &[(i, k), (i, l)], q.clone()), l == cj(k));
                }
            }
        }
    }
    for i in r.clone() {
        for j in r.clone() {
            for l in r.clone() {
                for k in r.clone() {
                    if l < k && i < j && l != cj(k) && i != cj(j) {
                        push("F3", vec![i, j, l, k], w(n, &[(j, l), (i, k)], one.clone()), w(n, &[(i, k), (j, l)], one.clone()), false);
                    }
                }
            }
        }
    }
    for i in r.clone() {
        for j in r.clone() {
            if i < j && i != cj(j) {
                push("F4", vec![i, j], w(n, &[(j, 1), (i, n)], one.clone()), w(n, &[(i, n), (j, 1)], q.clone()), false);
                let rhs = w(n, &[(j, n), (i, 1)], q.clone()).add(&w(n, &[(i, n), (j, 1)], FieldElem::qpow(2).sub(&one)));
                push("F5", vec![i, j], w(n, &[(i, 1), (j, n)], one.clone()), rhs, false);
            }
        }
    }
    for i in r.clone() {
        for j in r.clone() {
            for k in r.clone() {
                for l in r.clone() {
                    if i < j && k < l && i != cj(j) && k != cj(l) {
                        let lhs = w(n, &[(i, k), (j, l)], one.clone());
                        let base = w(n, &[(j, l), (i, k)], one.clone());
                        let corr = w(n, &[(j, k), (i, l)], FieldElem::nu(2));
                        push("F6", vec![i, j, k, l], lhs.clone(), base.sub(&corr), false);
                        push("F6*", vec![i, j, k, l], lhs, base.add(&corr), false);
                    }
                }
            }
        }
    }
    for i in r.clone() {
        for j in r.clone() {
            for k in r.clone() {
                if k != cj(k) && i < j && i != cj(j) {
                    push("F7", vec![i, j, k], w(n, &[(i, k), (j, k)], one.clone()), w(n, &[(j, k), (i, k)], q.clone()), false);
                }
            }
        }
    }
    let y = y_elem(n);
    let q2 = FieldElem::qpow(2);
    for a in 2..n {
        let h = h_a(n, a);
        push("F8", vec![a], h.mul(&y), y.mul(&h).scale(&q2), false);
    }
    for a in 2..n {
        let ya = y_a(n, a);
        push("F9", vec![a], y.mul(&ya), ya.mul(&y).scale(&q2), false);
    }
    out
}

/// Shared state for membership checks at one `N`.
pub struct Checker {
    pub data: FrtData,
    pub rels: RelationSet,
    pub rw: Rewriter<FieldElem>,
    samples: Vec<BigRational>,
    special: OnceLock<Vec<Rewriter<BigRational>>>,
}

impl Checker {
    pub fn new(n: usize, seed: u64) -> Result<Self, crate::frt::FrtError> {
        let data = FrtData::new(n)?;
        let rels = generate_relations(&data);
        let rw = Rewriter::build(&data, &rels.polys()).expect("nonempty relation set");
        Ok(Checker { data, rels, rw, samples: sample_points(seed, 3), special: OnceLock::new() })
    }

    fn specialized(&self) -> &[Rewriter<BigRational>] {
        self.special.get_or_init(|| {
            self.samples
                .iter()
                .map(|v0| {
                    let at = AtV::new(v0.clone());
                    let polys: Vec<NCPoly<BigRational>> =
                        self.rels.relations.iter().map(|r| r.poly.specialize(&at).expect("monomial coefficients")).collect();
                    Rewriter::build(&self.data, &polys).expect("nonempty")
                })
                .collect()
        })
    }

    /// Exact check for degree 2 (the degree-2 ideal is the relation span), then
    /// exact saturation, then specialization at random rational `v`.
    pub fn check(&self, poly: &NCPoly<FieldElem>) -> (Status, usize, Option<usize>) {
        let d = poly.degree().unwrap_or(0);
        if d <= 2 {
            let (nf, steps) = self.rw.normal_form_certified(poly);
            return if nf.is_zero() { (Status::Verified, steps.len(), None) } else { (Status::Refuted, 0, None) };
        }
        match saturate_and_check(&self.data, &self.rw, poly, 4) {
            Ok(Membership::Verified(steps)) => return (Status::Verified, steps.len(), None),
            Ok(Membership::Inconclusive) | Err(_) => {}
        }
        let mut hits = 0;
        for (v0, rw) in self.samples.iter().zip(self.specialized()) {
            let Ok(p) = poly.specialize(&AtV::new(v0.clone())) else { continue };
            if let Ok(Membership::Verified(_)) = saturate_and_check(&self.data, rw, &p, 4) {
                hits += 1;
            }
        }
        if hits == self.samples.len() {
            (Status::Probable, 0, Some(hits))
        } else {
            (Status::Inconclusive, 0, Some(hits))
        }
    }
}

/// Distinct rational values of `v` in `(1, 2)`, reproducible from the seed.
pub fn sample_points(seed: u64, count: usize) -> Vec<BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<BigRational> = Vec::new();
    while out.len() < count {
        let den: i64 = rng.gen_range(7..97);
        let num: i64 = rng.gen_range(den + 1..2 * den);
        let x = BigRational::new(BigInt::from(num), BigInt::from(den));
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub fn verify_lemma_rels(n: usize, seed: u64) -> Result<LemmaReport, crate::frt::FrtError> {
    let checker = Checker::new(n, seed)?;
    Ok(verify_with(&checker))
}

pub fn verify_with(checker: &Checker) -> LemmaReport {
    let insts = instances(&checker.data);
    let mut reports: Vec<InstanceReport> = insts
        .par_iter()
        .map(|inst| {
            let t0 = Instant::now();
            let (status, size, samples) = checker.check(&inst.poly);
            let millis = t0.elapsed().as_millis() as u64;
            if inst.excluded {
                let note = format!("outside the stated range; computed status {:?}", status).to_lowercase();
                return InstanceReport {
                    family: inst.family.into(),
                    indices: inst.indices.clone(),
                    status: Status::Excluded,
                    certificate_size: 0,
                    millis,
                    samples: None,
                    note: Some(note),
                };
            }
            InstanceReport { family: inst.family.into(), indices: inst.indices.clone(), status, certificate_size: size, millis, samples, note: None }
        })
        .collect();
    for (fam, _) in FAMILIES {
        if !reports.iter().any(|r| r.family == fam) {
            reports.push(InstanceReport {
                family: fam.into(),
                indices: vec![],
                status: Status::Vacuous,
                certificate_size: 0,
                millis: 0,
                samples: None,
                note: None,
            });
        }
    }
    let families = FAMILIES
        .iter()
        .map(|(fam, stmt)| {
            let rs: Vec<&InstanceReport> = reports.iter().filter(|r| r.family == *fam).collect();
            FamilySummary {
                family: fam.to_string(),
                statement: stmt.to_string(),
                instances: rs.len(),
                verified: rs.iter().filter(|r| matches!(r.status, Status::Verified | Status::Vacuous)).count(),
                refuted: rs.iter().filter(|r| r.status == Status::Refuted).count(),
                undecided: rs.iter().filter(|r| r.status.severity() == 1).count(),
                excluded: rs.iter().filter(|r| r.status == Status::Excluded).count(),
            }
        })
        .collect();
    LemmaReport {
        n: checker.data.n_big,
        candidates_scanned: checker.rels.scanned,
        relations: checker.rels.relations.len(),
        span_rank: checker.rw.rank(),
        families,
        instances: reports,
    }
}

/// The algebra identities behind the commutation of `z`, `y` with their
/// differentials.
pub fn spherical_instances(n: usize, data: &FrtData) -> Vec<Instance> {
    let mut out = Vec::new();
    let qm2 = FieldElem::qpow(-2);
    let one = FieldElem::one();
    for k in 2..n {
        let kc = data.conj(k);
        let lhs = w(n, &[(1, n), (1, kc), (1, n), (1, 1)], one.clone());
        let rhs = w(n, &[(1, n), (1, 1), (1, n), (1, kc)], qm2.clone());
        out.push(Instance { family: "z-commutation", indices: vec![k], poly: lhs.sub(&rhs), excluded: false });
    }
    let y = y_elem(n);
    for l in 2..n {
        let ya = y_a(n, data.conj(l));
        out.push(Instance {
            family: "y-commutation",
            indices: vec![l],
            poly: ya.mul(&y).sub(&y.mul(&ya).scale(&qm2)),
            excluded: false,
        });
        let lc = data.conj(l);
        let lhs = w(n, &[(2, n), (1, lc)], FieldElem::q()).sub(&w(n, &[(1, n), (2, lc)], one.clone()));
        out.push(Instance { family: "y-reorder", indices: vec![l], poly: lhs.sub(&ya.scale(&FieldElem::q())), excluded: false });
    }
    out
}

pub fn verify_spherical_identities(checker: &Checker) -> Vec<InstanceReport> {
    let insts = spherical_instances(checker.data.n_big, &checker.data);
    insts
        .par_iter()
        .map(|inst| {
            let t0 = Instant::now();
            let (status, size, samples) = checker.check(&inst.poly);
            InstanceReport {
                family: inst.family.into(),
                indices: inst.indices.clone(),
                status,
                certificate_size: size,
                millis: t0.elapsed().as_millis() as u64,
                samples,
                note: None,
            }
        })
        .collect()
}
