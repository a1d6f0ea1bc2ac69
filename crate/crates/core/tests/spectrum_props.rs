use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qso_core::cartan::CartanData;
use qso_core::spectrum::*;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `(k)_t` by direct summation.
fn qnum(k: u64, t: &BigRational) -> BigRational {
    let mut acc = r(0, 1);
    let mut p = r(1, 1);
    for _ in 0..k {
        acc += &p;
        p *= t;
    }
    acc
}

fn params() -> impl Strategy<Value = SpectralParams> {
    (5usize..=9, 11i64..40, 1i64..30, 1i64..30, 1i64..30, 1i64..30, -20i64..20, 0i64..20).prop_map(
        |(n, qn, t1, t3, my, mz, t2, dt)| {
            let mut p = SpectralParams::default_for(n, r(qn, 10));
            p.theta1 = r(t1, 3);
            p.theta3 = r(t3, 5);
            p.mu_y = r(my, 2);
            p.mu_z = r(mz, 7);
            p.theta2 = r(t2, 11);
            p.theta = p.theta_boundary() + r(dt, 13);
            p
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigenvalue_matches_summed_q_integers(p in params(), k in 0u64..8, l in 0u64..8) {
        let t = &p.q * &p.q;
        let ti = t.recip();
        let a = |x: u64| qnum(x, &t);
        let b = |x: u64| qnum(x, &ti);
        let want = &p.theta * a(k) * b(k.saturating_sub(1))
            + a(k) * &p.mu_y
            + a(l) * a(k) * &p.theta1
            + b(l) * b(k) * &p.theta2
            + b(l) * &p.mu_z
            + b(l) * a(l.saturating_sub(1)) * &p.theta3;
        prop_assert_eq!(eigenvalue(k, l, &p), want);
    }

    #[test]
    fn low_eigenvalues(p in params()) {
        prop_assert!(validate_params(&p).ok);
        prop_assert_eq!(eigenvalue(0, 0, &p), r(0, 1));
        prop_assert_eq!(eigenvalue(1, 0, &p), p.mu_y.clone());
        prop_assert_eq!(eigenvalue(0, 1, &p), p.mu_z.clone());
    }

    #[test]
    fn shell_minima_match_direct_scan(p in params(), shells in 1usize..12) {
        let bound = r(1_000_000, 1);
        let rep = match check_divergence(&p, shells, &bound) {
            Ok(rep) => rep,
            Err(SpectrumError::BoundNotCleared(rep)) => *rep,
            Err(e) => panic!("{e}"),
        };
        for sm in &rep.shell_minima {
            let direct = (0..=sm.m).map(|k| eigenvalue(k as u64, (sm.m - k) as u64, &p)).min().unwrap();
            prop_assert_eq!(&sm.value, &direct);
            prop_assert_eq!(eigenvalue(sm.k as u64, sm.l as u64, &p), direct);
        }
    }

    #[test]
    fn table_is_sorted_with_positive_multiplicities(p in params(), kmax in 0u64..4, lmax in 0u64..4) {
        let t = spectrum_table(&p, kmax, lmax).unwrap();
        prop_assert_eq!(t.len() as u64, (kmax + 1) * (lmax + 1));
        for w in t.windows(2) {
            let key = |x: &EigenRecord| (x.value.clone(), x.k + x.l, x.k);
            prop_assert!(key(&w[0]) <= key(&w[1]));
        }
        prop_assert!(t.iter().all(|x| x.multiplicity > BigInt::from(0)));
    }
}

/// Weyl dimensions of the spherical representations against the classical
/// closed forms: `2l varpi_1` is the harmonic polynomials of degree `2l` in
/// `N` variables, and `lambda_y` is the adjoint representation.
#[test]
fn multiplicities_against_closed_forms() {
    let binom = |n: i64, k: i64| (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1));
    for n in 5..=10usize {
        let c = CartanData::for_n(n).unwrap();
        let ni = n as i64;
        for l in 0..5i64 {
            let d = 2 * l;
            let harmonic = binom(d + ni - 1, ni - 1) - if d >= 2 { binom(d + ni - 3, ni - 1) } else { BigInt::from(0) };
            assert_eq!(multiplicity(0, l as u64, &c).unwrap(), harmonic, "N={n} l={l}");
        }
        assert_eq!(multiplicity(1, 0, &c).unwrap(), BigInt::from(ni * (ni - 1) / 2), "N={n}");
    }
}

#[test]
fn nonpositive_q_is_rejected() {
    let p = SpectralParams::default_for(5, r(1, 1));
    assert!(matches!(spectrum_table(&p, 1, 1), Err(SpectrumError::QNotAboveOne(_))));
    assert!(!validate_params(&p).ok);
}
