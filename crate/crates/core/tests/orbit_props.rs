use proptest::prelude::*;
use qso_core::action::Letter;
use qso_core::field::{Field, FieldElem};
use qso_core::lemma::y_elem;
use qso_core::orbit::*;
use std::sync::OnceLock;

fn ctx5() -> &'static OrbitContext {
    static C: OnceLock<OrbitContext> = OnceLock::new();
    C.get_or_init(|| OrbitContext::new(5).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Every subword of the F-sequence maps y into the span of the z_ij and
    /// lands in one of the four families.
    #[test]
    fn subwords_stay_in_z_span_and_classify(mask in 0u32..64) {
        let ctx = ctx5();
        let seq = f_sequence(5);
        let word: Vec<Letter> = seq.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, l)| *l).collect();
        let img = ctx.rw.normal_form(&ctx.act.act_right(&y_elem(5), &word));
        let c = ctx.coords(&img, &word_label(&word));
        prop_assert!(c.is_ok());
        let c = c.unwrap();
        if !c.is_empty() {
            prop_assert_ne!(classify(5, &c), OrbitFamily::Unclassified);
        }
    }

    /// The family depends only on the projective class of the coordinates.
    #[test]
    fn classification_is_scale_invariant(mask in 0u32..64, k in -4i32..4, r in 1i64..9) {
        let ctx = ctx5();
        let seq = f_sequence(5);
        let word: Vec<Letter> = seq.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, l)| *l).collect();
        let img = ctx.rw.normal_form(&ctx.act.act_right(&y_elem(5), &word));
        let c = ctx.coords(&img, "w").unwrap();
        let s = FieldElem::vpow(k).mul(&FieldElem::int(-r));
        let scaled = c.iter().map(|(key, v)| (*key, v.mul(&s))).collect();
        prop_assert_eq!(classify(5, &c), classify(5, &scaled));
    }
}

#[test]
fn scan_counts_and_terminal() {
    let rep = orbit_scan(ctx5(), &num_rational::BigRational::new(11.into(), 10.into())).unwrap();
    assert_eq!(rep.z_rank, 25);
    assert_eq!(rep.subsequences, 64);
    assert_eq!(rep.unclassified, 0);
    assert_eq!(rep.terminal.family, OrbitFamily::IV);
    assert_eq!(rep.terminal.mu.as_deref(), Some("(1)/(v^6)"));
}
