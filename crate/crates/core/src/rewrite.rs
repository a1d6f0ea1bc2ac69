//! Rewriting modulo the span of the quadratic relations, and degree-bounded
//! ideal membership.

use crate::field::Field;
use crate::frt::FrtData;
use crate::linalg::{Echelon, SparseVec};
use crate::ncpoly::{Gen, NCPoly, Word};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RewriteError {
    #[error("target degree {0} exceeds max degree {1}")]
    DegreeOverflow(usize, usize),
    #[error("relation is not homogeneous of degree 2")]
    NotQuadratic,
    #[error("empty relation set")]
    Empty,
}

/// `lead -> tail`, where `lead - tail` lies in the relation span and every
/// tail word is deglex-smaller than `lead`.
#[derive(Clone, Debug)]
pub struct Rule<F: Field> {
    pub lead: [Gen; 2],
    pub tail: Vec<([Gen; 2], F)>,
}

impl<F: Field> Rule<F> {
    /// `lead - tail` as a polynomial.
    pub fn poly(&self, n: usize) -> NCPoly<F> {
        let mut p = NCPoly::monomial(n, Word::from_gens(&self.lead), F::one());
        for (w, c) in &self.tail {
            p.add_term(Word::from_gens(w), c.neg());
        }
        p
    }
}

/// One reduction step: `coef * left * (lead - tail) * right` was subtracted.
#[derive(Clone, Debug)]
pub struct Step<F: Field> {
    pub coef: F,
    pub left: Word,
    pub rule: [Gen; 2],
    pub right: Word,
}

#[derive(Clone, Debug)]
pub struct Rewriter<F: Field> {
    n: usize,
    nsq: usize,
    table: Vec<Option<usize>>,
    rules: Vec<Rule<F>>,
}

impl<F: Field> Rewriter<F> {
    /// Reduced row echelon form of the span of `rels`, computed blockwise by
    /// weight; one rule per pivot.
    pub fn build(data: &FrtData, rels: &[NCPoly<F>]) -> Result<Self, RewriteError> {
        if rels.is_empty() {
            return Err(RewriteError::Empty);
        }
        let n = data.n_big;
        let mut blocks: BTreeMap<Vec<i8>, Vec<&NCPoly<F>>> = BTreeMap::new();
        for r in rels {
            let Some((w, _)) = r.lead() else { continue };
            if !r.terms().keys().all(|w| w.len() == 2) {
                return Err(RewriteError::NotQuadratic);
            }
            blocks.entry(data.weight_key(w)).or_default().push(r);
        }
        let nsq = n * n;
        let mut rw = Rewriter { n, nsq, table: vec![None; nsq * nsq], rules: Vec::new() };
        for (_, polys) in blocks {
            let mut words: Vec<Word> = polys.iter().flat_map(|p| p.terms().keys().cloned()).collect();
            words.sort();
            words.dedup();
            let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
            let mut ech = Echelon::new(false);
            for (t, p) in polys.iter().enumerate() {
                let v: SparseVec<F> = p.terms().iter().map(|(w, c)| (index[w], c.clone())).collect();
                ech.insert(&v, t);
            }
            for (piv, row) in ech.rows() {
                let lead = pair(&words[piv]);
                let tail = row
                    .iter()
                    .filter(|(&k, _)| k != piv)
                    .map(|(&k, c)| (pair(&words[k]), c.neg()))
                    .collect();
                rw.table[lead[0] as usize * nsq + lead[1] as usize] = Some(rw.rules.len());
                rw.rules.push(Rule { lead, tail });
            }
        }
        Ok(rw)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of rules, equal to the dimension of the relation span.
    pub fn rank(&self) -> usize {
        self.rules.len()
    }

    pub fn rules(&self) -> &[Rule<F>] {
        &self.rules
    }

    pub fn rule_for(&self, a: Gen, b: Gen) -> Option<&Rule<F>> {
        self.table[a as usize * self.nsq + b as usize].map(|i| &self.rules[i])
    }

    pub fn is_lead(&self, w: &[Gen; 2]) -> bool {
        self.rule_for(w[0], w[1]).is_some()
    }

    pub fn normal_form(&self, p: &NCPoly<F>) -> NCPoly<F> {
        self.reduce(p, None)
    }

    /// Normal form together with the list of reduction steps.
    pub fn normal_form_certified(&self, p: &NCPoly<F>) -> (NCPoly<F>, Vec<Step<F>>) {
        let mut steps = Vec::new();
        let r = self.reduce(p, Some(&mut steps));
        (r, steps)
    }

    /// Always rewrites the largest remaining word at its leftmost reducible
    /// position.
    fn reduce(&self, p: &NCPoly<F>, mut steps: Option<&mut Vec<Step<F>>>) -> NCPoly<F> {
        let mut work: BTreeMap<Word, F> = p.terms().clone();
        let mut out = NCPoly::zero(self.n);
        while let Some((w, c)) = work.pop_last() {
            let g = w.gens();
            let hit = (0..g.len().saturating_sub(1)).find_map(|pos| self.rule_for(g[pos], g[pos + 1]).map(|r| (pos, r)));
            match hit {
                None => out.add_term(w, c),
                Some((pos, rule)) => {
                    for (t, x) in &rule.tail {
                        let nw = w.splice(pos, 2, t);
                        let nc = c.mul(x);
                        match work.get_mut(&nw) {
                            Some(e) => {
                                *e = e.add(&nc);
                                if e.is_zero() {
                                    work.remove(&nw);
                                }
                            }
                            None => {
                                work.insert(nw, nc);
                            }
                        }
                    }
                    if let Some(s) = steps.as_deref_mut() {
                        s.push(Step {
                            coef: c,
                            left: Word::from_gens(&g[..pos]),
                            rule: rule.lead,
                            right: Word::from_gens(&g[pos + 2..]),
                        });
                    }
                }
            }
        }
        out
    }

    /// `sum coef * left * rule * right`.
    pub fn replay(&self, steps: &[Step<F>]) -> NCPoly<F> {
        let mut acc = NCPoly::zero(self.n);
        for s in steps {
            let rule = self.rule_for(s.rule[0], s.rule[1]).expect("unknown rule");
            acc.add_scaled(&s.coef, &rule.poly(self.n).sandwich(&s.left, &s.right));
        }
        acc
    }
}

fn pair(w: &Word) -> [Gen; 2] {
    let g = w.gens();
    [g[0], g[1]]
}

/// Outcome of a membership test.
#[derive(Clone, Debug)]
pub enum Membership<F: Field> {
    /// `target = sum coef * left * rule * right`.
    Verified(Vec<Step<F>>),
    Inconclusive,
}

impl<F: Field> Membership<F> {
    pub fn is_verified(&self) -> bool {
        matches!(self, Membership::Verified(_))
    }

    pub fn certificate_size(&self) -> usize {
        match self {
            Membership::Verified(s) => s.len(),
            Membership::Inconclusive => 0,
        }
    }
}

/// Decides whether a homogeneous target lies in the degree-`d` part of the
/// two-sided ideal, which is spanned by `w1 * r * w2` with `r` a rule.
/// Rewriting to zero is tried first; otherwise the normal forms of all
/// sandwiches in the target's weight block are put in echelon form.
pub fn saturate_and_check<F: Field>(
    data: &FrtData,
    rw: &Rewriter<F>,
    target: &NCPoly<F>,
    max_degree: usize,
) -> Result<Membership<F>, RewriteError> {
    let d = target.degree().unwrap_or(0);
    if d > max_degree {
        return Err(RewriteError::DegreeOverflow(d, max_degree));
    }
    let (nf, mut steps) = rw.normal_form_certified(target);
    if nf.is_zero() {
        return Ok(Membership::Verified(steps));
    }
    if d < 2 || !target.is_homogeneous() {
        return Ok(Membership::Inconclusive);
    }
    let n = data.n_big;
    let key = data.weight_key(target.lead().expect("nonzero").0);
    let short = words_by_weight(data, d - 2);
    let mut cols: HashMap<Word, usize> = HashMap::new();
    let mut sandwiches: Vec<(Word, [Gen; 2], Word)> = Vec::new();
    let mut ech = Echelon::new(true);
    let sub = |a: &[i8], b: &[i8]| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<i8>>();
    for rule in rw.rules() {
        let rk = data.weight_key(&Word::from_gens(&rule.lead));
        let need = sub(&key, &rk);
        for llen in 0..=(d - 2) {
            let rlen = d - 2 - llen;
            for (lk, lws) in &short[llen] {
                let rest = sub(&need, lk);
                let Some(rights) = short[rlen].iter().find(|(k, _)| *k == rest).map(|(_, v)| v) else {
                    continue;
                };
                for w1 in lws {
                    for w2 in rights {
                        let s = rule.poly(n).sandwich(w1, w2);
                        let red = rw.normal_form(&s);
                        if red.is_zero() {
                            continue;
                        }
                        let v = to_sparse(&red, &mut cols);
                        let tag = sandwiches.len();
                        sandwiches.push((w1.clone(), rule.lead, w2.clone()));
                        ech.insert(&v, tag);
                    }
                }
            }
        }
    }
    let tv = to_sparse(&nf, &mut cols);
    let Some(combo) = ech.solve(&tv) else {
        return Ok(Membership::Inconclusive);
    };
    // target = steps + nf, nf = sum c_s nf(s), nf(s) = s - steps(s)
    for (tag, c) in combo {
        let (w1, lead, w2) = &sandwiches[tag];
        let rule = rw.rule_for(lead[0], lead[1]).expect("rule");
        let s = rule.poly(n).sandwich(w1, w2);
        steps.push(Step { coef: c.clone(), left: w1.clone(), rule: *lead, right: w2.clone() });
        let (_, inner) = rw.normal_form_certified(&s);
        for st in inner {
            steps.push(Step { coef: st.coef.mul(&c).neg(), ..st });
        }
    }
    Ok(Membership::Verified(steps))
}

fn to_sparse<F: Field>(p: &NCPoly<F>, cols: &mut HashMap<Word, usize>) -> SparseVec<F> {
    let mut v = SparseVec::new();
    for (w, c) in p.terms() {
        let next = cols.len();
        let k = *cols.entry(w.clone()).or_insert(next);
        v.insert(k, c.clone());
    }
    v
}

type WeightGroups = Vec<(Vec<i8>, Vec<Word>)>;

/// All words of each length `0..=maxlen`, grouped by weight.
fn words_by_weight(data: &FrtData, maxlen: usize) -> Vec<WeightGroups> {
    let nsq = (data.n_big * data.n_big) as Gen;
    let mut out = Vec::new();
    let mut layer = vec![Word::empty()];
    for len in 0..=maxlen {
        if len > 0 {
            layer = layer
                .iter()
                .flat_map(|w| (0..nsq).map(move |g| w.concat(&Word::from_gens(&[g]))))
                .collect();
        }
        let mut groups: BTreeMap<Vec<i8>, Vec<Word>> = BTreeMap::new();
        for w in &layer {
            groups.entry(data.weight_key(w)).or_default().push(w.clone());
        }
        out.push(groups.into_iter().collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElem;
    use crate::frt::generate_relations;

    #[test]
    fn relations_reduce_to_zero_n5() {
        let data = FrtData::new(5).unwrap();
        let rels = generate_relations(&data);
        assert_eq!(rels.scanned, 625);
        let rw = Rewriter::build(&data, &rels.polys()).unwrap();
        for r in &rels.relations {
            let (nf, steps) = rw.normal_form_certified(&r.poly);
            assert!(nf.is_zero());
            assert_eq!(rw.replay(&steps), r.poly);
        }
    }

    #[test]
    fn non_member_is_inconclusive() {
        let data = FrtData::new(5).unwrap();
        let rels = generate_relations(&data);
        let rw = Rewriter::build(&data, &rels.polys()).unwrap();
        let t = NCPoly::word(5, &[(1, 1), (1, 1)], FieldElem::one());
        let m = saturate_and_check(&data, &rw, &t, 4).unwrap();
        assert!(!m.is_verified());
        let big = NCPoly::word(5, &[(1, 1); 5], FieldElem::one());
        assert_eq!(saturate_and_check(&data, &rw, &big, 4).unwrap_err(), RewriteError::DegreeOverflow(5, 4));
    }
}
