//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use num_bigint::BigInt;
use num_rational::BigRational;
use qso_core::action::Actions;
use qso_core::exterior::*;
use qso_core::field::{parse_rational, QSqrt, SqrtPoint};
use qso_core::lemma::{verify_spherical_identities, verify_with, z_elem, y_elem, Checker};
use qso_core::orbit::{orbit_scan, OrbitContext, OrbitFamily};
use qso_core::rep::{verify_qea_relations, vector_rep};
use qso_core::spectrum::*;
use qso_core::verify::{hw_check, verify_covariance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

const SEED: u64 = 7;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

type Outcome = (bool, String);

fn within(t: Instant, limit: Duration, what: &str, notes: &mut Vec<String>) -> bool {
    let e = t.elapsed();
    if e > limit {
        notes.push(format!("{what} took {e:?}, limit {limit:?}"));
    }
    e <= limit
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 5..=8 {
        let report = verify_with(&Checker::new(n, SEED).expect("valid N"));
        for fam in &report.families {
            if fam.family.ends_with('*') {
                continue;
            }
            if fam.refuted + fam.undecided > 0 {
                ok = false;
                notes.push(format!("N={n} {}: {} refuted, {} undecided", fam.family, fam.refuted, fam.undecided));
            }
        }
    }
    ok &= within(t, Duration::from_secs(300), "suite", &mut notes);
    (ok, notes.join("; "))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 5..=8 {
        let rep = verify_qea_relations(n).expect("valid N");
        if !rep.all_ok {
            ok = false;
            let bad: Vec<_> = rep.checks.iter().filter(|c| !c.ok).map(|c| c.relation.clone()).collect();
            notes.push(format!("N={n}: {}", bad.join(",")));
        }
    }
    ok &= within(t, Duration::from_secs(10), "suite", &mut notes);
    (ok, notes.join("; "))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 5..=7 {
        let c = Checker::new(n, SEED).expect("valid N");
        let act = Actions::new(&vector_rep(n).expect("valid N"));
        let rep = verify_covariance(&c.rels, &c.rw, &act, false);
        if !rep.all_ok() {
            ok = false;
            notes.push(format!("N={n}: {}/{} checks", rep.passed, rep.checks));
        }
    }
    ok &= within(t, Duration::from_secs(120), "suite", &mut notes);
    (ok, notes.join("; "))
}

fn criterion_4() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 5..=8 {
        let c = Checker::new(n, SEED).expect("valid N");
        let rep = vector_rep(n).expect("valid N");
        let act = Actions::new(&rep);
        let zw: Vec<BigRational> = rep.cartan.fundamental[0].iter().map(|x| x * r(2, 1)).collect();
        let yw = rep.cartan.y_weight();
        for h in [hw_check("z", &z_elem(n), &zw, &rep, &act, &c.rw), hw_check("y", &y_elem(n), &yw, &rep, &act, &c.rw)] {
            if !h.ok {
                ok = false;
                notes.push(format!("N={n} {}", h.element));
            }
        }
    }
    (ok, notes.join("; "))
}

fn criterion_5() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 5..=6 {
        let c = Checker::new(n, SEED).expect("valid N");
        for inst in verify_spherical_identities(&c) {
            if inst.status.severity() != 0 {
                ok = false;
                notes.push(format!("N={n} {} {:?}: {:?}", inst.family, inst.indices, inst.status));
            }
        }
    }
    (ok, notes.join("; "))
}

/// `f_{l,I,I}(1)` from the anticommuting algebra: the sum over orderings of
/// `I` of the sign sorting `e+_{i1} e-_{i1} .. e+_{il} e-_{il}` into `e+_I e-_I`.
fn classical_diagonal(l: usize) -> BigInt {
    fn perms(v: &[usize]) -> Vec<Vec<usize>> {
        if v.len() <= 1 {
            return vec![v.to_vec()];
        }
        let mut out = Vec::new();
        for i in 0..v.len() {
            let mut rest = v.to_vec();
            let x = rest.remove(i);
            for mut p in perms(&rest) {
                p.insert(0, x);
                out.push(p);
            }
        }
        out
    }
    let mut total = BigInt::from(0);
    for p in perms(&(0..l).collect::<Vec<_>>()) {
        let word: Vec<(u8, usize)> = p.iter().flat_map(|&i| [(0u8, i), (1u8, i)]).collect();
        let mut sign = 1;
        for a in 0..word.len() {
            for b in a + 1..word.len() {
                if word[a] > word[b] {
                    sign = -sign;
                }
            }
        }
        total += sign;
    }
    total
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for m in 3..=7 {
        let rep = verify_f_properties(&ExtParams::new(m).unwrap(), &[r(11, 10)]).expect("valid M");
        ok &= rep.ok;
        for lvl in &rep.levels {
            let oracle = BigRational::from_integer(classical_diagonal(lvl.l));
            let matches = lvl.diagonal_value_at_1.as_deref().and_then(parse_rational) == Some(oracle.clone());
            if !(lvl.ok && lvl.diagonal_value_ok && matches) {
                ok = false;
                notes.push(format!("M={m} l={}: value {:?}, oracle {oracle}", lvl.l, lvl.diagonal_value_at_1));
            }
        }
    }
    ok &= within(t, Duration::from_secs(60), "suite", &mut notes);
    (ok, notes.join("; "))
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for m in 3..=5 {
        for q0 in [r(1, 1), r(11, 10), r(101, 100)] {
            let rep = verify_lefschetz_iso(&ExtParams::new(m).unwrap(), &q0).expect("valid M");
            if !rep.ok {
                ok = false;
                notes.push(format!("M={m} q0={q0}"));
            }
        }
    }
    ok &= within(t, Duration::from_secs(120), "suite", &mut notes);
    (ok, notes.join("; "))
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for m in 3..=5 {
        let rep = verify_nonprimitive(&ExtParams::new(m).unwrap(), &[r(11, 10), r(101, 100)]).expect("valid M");
        if !rep.ok {
            ok = false;
            notes.push(format!("nonprimitive M={m}"));
        }
    }
    for n in [5, 6, 7] {
        let ctx = OrbitContext::new(n).expect("valid N");
        let rep = orbit_scan(&ctx, &r(11, 10)).expect("scan");
        let term = &rep.terminal;
        let shape = term.family == OrbitFamily::IV && term.mu.is_some();
        if !(rep.classification_ok && shape && term.mu_negative) {
            ok = false;
            notes.push(format!(
                "N={n}: classified={} terminal shape={} mu={} (at q=11/10: {})",
                rep.classification_ok,
                shape,
                term.mu.as_deref().unwrap_or("-"),
                term.mu_at_sample.as_deref().unwrap_or("-")
            ));
        }
    }
    (ok, notes.join("; "))
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    let q = r(11, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pos = |rng: &mut ChaCha8Rng| r(rng.gen_range(1..50), rng.gen_range(1..20));
    for n in [5, 6, 7, 8] {
        for qq in [r(11, 10), r(3, 2), r(7, 3)] {
            let mut p = SpectralParams::default_for(n, qq);
            p.theta1 = pos(&mut rng);
            p.theta3 = pos(&mut rng);
            p.mu_y = pos(&mut rng);
            p.mu_z = pos(&mut rng);
            p.theta2 = pos(&mut rng) - pos(&mut rng);
            p.theta = p.theta_boundary() + pos(&mut rng);
            assert!(validate_params(&p).ok);
            let exact = eigenvalue(0, 0, &p) == r(0, 1) && eigenvalue(1, 0, &p) == p.mu_y && eigenvalue(0, 1, &p) == p.mu_z;
            if !exact {
                ok = false;
                notes.push(format!("low eigenvalues at N={n}"));
            }
        }
    }
    let p = SpectralParams::default_for(5, q.clone());
    for bound in [10, 100, 1000] {
        match check_divergence(&p, 500, &r(bound, 1)) {
            Ok(rep) => {
                let finite = rep.multiplicity_below_bound.parse::<BigInt>().is_ok();
                if bound == 1000 {
                    notes.push(format!("bound 1000 cleared from m0={:?}, multiplicity {}", rep.m0, rep.multiplicity_below_bound));
                }
                ok &= finite && rep.m0.is_some_and(|m0| m0 <= 500);
            }
            Err(e) => {
                ok = false;
                notes.push(format!("bound {bound}: {e}"));
            }
        }
    }
    let mut pb = p.clone();
    pb.theta = pb.theta_boundary();
    let limit = &pb.mu_y / (r(1, 1) - (&q * &q).recip());
    let lane = match check_divergence(&pb, 500, &r(1000, 1)) {
        Ok(rep) => Some(rep),
        Err(SpectrumError::BoundNotCleared(rep)) => Some(*rep),
        Err(_) => None,
    };
    match lane {
        Some(rep) => {
            let l0 = &rep.lane_l0;
            let tiny = l0.gap.as_ref().is_some_and(|g| *g > r(0, 1) && *g < r(1, 1_000_000_000_000));
            let lane_ok = rep.boundary_theta
                && l0.limit.as_ref() == Some(&limit)
                && l0.increasing
                && l0.below_limit == Some(true)
                && tiny
                && rep.m0_off_lane.is_some();
            if !lane_ok {
                ok = false;
                notes.push("boundary lane l = 0 does not converge to mu_y/(1 - q^-2)".into());
            }
        }
        None => {
            ok = false;
            notes.push("boundary scan failed".into());
        }
    }
    ok &= within(t, Duration::from_secs(30), "suite", &mut notes);
    (ok, notes.join("; "))
}

fn criterion_10() -> Outcome {
    let m = 3;
    let ext: Exterior<QSqrt> = Exterior::new(&ExtParams::new(m).unwrap(), &SqrtPoint::new(r(11, 10))).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ok = true;
    let mut notes = Vec::new();
    for _ in 0..40 {
        let (a, b) = (rng.gen_range(0..=m), rng.gen_range(0..=m));
        let mut w = FiberForm::zero(m, Order::PlusFirst);
        for p in subsets(m, a) {
            for n in subsets(m, b) {
                w.add_term(p, n, QSqrt::rational(r(rng.gen_range(-5..=5), rng.gen_range(1..=4))));
            }
        }
        let star = ext.hodge(&w).expect("decomposition");
        let shape = star.values().all(|f| f.bidegrees().iter().all(|&bd| bd == (m - b, m - a)));
        if !shape {
            ok = false;
            notes.push(format!("bidegree ({a},{b})"));
        }
    }
    let star1 = ext.hodge(&FiberForm::one(m, Order::PlusFirst)).unwrap();
    let want = ext.kappa_power(m, Order::PlusFirst).scale(&QSqrt::rational(r(1, 6)));
    // kappa^M carries the phase i^M
    if star1.len() != 1 || star1.get(&((m % 4) as u8)) != Some(&want) {
        ok = false;
        notes.push("*(1) differs from kappa^M/M!".into());
    }
    (ok, notes.join("; "))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("relation families of the quantum coordinate algebra", criterion_1),
        ("quantum group relations on the vector representation", criterion_2),
        ("covariance of the quadratic relation span", criterion_3),
        ("highest weight vectors z and y", criterion_4),
        ("commutation identities behind the differentials of z and y", criterion_5),
        ("Kähler power coefficients at q = 1", criterion_6),
        ("Lefschetz bijectivity", criterion_7),
        ("non-primitivity and the orbit terminal element", criterion_8),
        ("spectrum arithmetic and divergence", criterion_9),
        ("Hodge map shape", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (ok, notes) = f();
        failed += usize::from(!ok);
        let tag = if ok { "PASS" } else { "FAIL" };
        let notes = if notes.is_empty() { String::new() } else { format!(" [{notes}]") };
        println!("criterion {:>2}: {tag} {name} ({:.1?}){notes}", i + 1, t.elapsed());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
