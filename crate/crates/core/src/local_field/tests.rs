use super::*;
use proptest::prelude::*;

fn q2_sqrt2() -> Arc<LocalField> {
    lf_make(2, 1, &[vec![-2], vec![0], vec![1]], 40).unwrap()
}

fn q2_i() -> Arc<LocalField> {
    lf_make(2, 1, &[vec![2], vec![2], vec![1]], 40).unwrap()
}

#[test]
fn make_examples() {
    let l = q2_sqrt2();
    assert_eq!((l.e(), l.f(), l.degree()), (2, 1, 2));
    let u = lf_make(3, 2, &[vec![-3], vec![1]], 36).unwrap();
    assert_eq!((u.e(), u.f(), u.degree()), (1, 2, 2));
    let i = q2_i();
    assert_eq!(i.e(), 2);
    let qp = lf_make(5, 1, &[vec![-5], vec![1]], 10).unwrap();
    assert!(qp.is_qp());
}

#[test]
fn make_rejects() {
    assert!(matches!(lf_make(2, 1, &[vec![-4], vec![0], vec![1]], 40), Err(Error::NotEisenstein(_))));
    assert!(matches!(lf_make(2, 1, &[vec![-2], vec![1], vec![1]], 40), Err(Error::NotEisenstein(_))));
    assert!(matches!(lf_make(2, 1, &[vec![-2], vec![0], vec![1]], 3), Err(Error::PrecisionTooSmall(_))));
}

#[test]
fn pi_squared_is_two() {
    let l = q2_sqrt2();
    let pi = l.uniformizer();
    let sq = pi.mul(&pi).unwrap();
    assert_eq!(sq.valuation().unwrap(), 2);
    assert!(sq.eq_mod(&l.from_int(2), l.precision()).unwrap());
}

#[test]
fn pi_squared_in_q2_i() {
    // pi^2 + 2 pi + 2 = 0
    let l = q2_i();
    let pi = l.uniformizer();
    let lhs = pi.mul(&pi).unwrap().add(&pi.scale(2)).unwrap().add(&l.from_int(2)).unwrap();
    assert!(lhs.is_zero());
}

#[test]
fn inverse_round_trip() {
    let l = q2_sqrt2();
    let x = l.one().add(&l.uniformizer()).unwrap();
    let y = x.inv().unwrap().mul(&x).unwrap();
    assert!(y.eq_mod(&l.one(), l.precision()).unwrap());
}

#[test]
fn inverse_precision_does_not_overclaim() {
    let l = q2_sqrt2();
    let pi = l.uniformizer();
    let x = pi.pow(3).unwrap().add(&pi.pow(4).unwrap()).unwrap().truncate_abs(20);
    let y = x.inv().unwrap();
    assert!(y.prec_abs() <= 20 - 2 * 3);
    assert_eq!(y.valuation().unwrap(), -3);
}

#[test]
fn valuations_of_generators() {
    for l in [q2_sqrt2(), q2_i(), lf_make(3, 2, &[vec![-3], vec![1]], 20).unwrap()] {
        assert_eq!(l.uniformizer().valuation().unwrap(), 1);
        assert_eq!(l.p_element().valuation().unwrap(), l.e() as i64);
        let r = l.residue_field().generator();
        assert_eq!(lf_teichmueller(&r, &l).unwrap().valuation().unwrap(), 0);
    }
}

#[test]
fn zero_is_indistinguishable() {
    let l = q2_sqrt2();
    assert!(matches!(l.zero().valuation(), Err(Error::IndistinguishableFromZero)));
}

#[test]
fn teichmueller_examples() {
    let q3 = lf_make(3, 1, &[vec![-3], vec![1]], 20).unwrap();
    let one = q3.residue_field().one();
    assert!(lf_teichmueller(&one, &q3).unwrap().eq_within(&q3.one()));
    let two = q3.residue_field().from_index(2);
    let t = lf_teichmueller(&two, &q3).unwrap();
    assert!(t.eq_within(&q3.from_int(-1)));
    assert!(matches!(lf_teichmueller(&q3.residue_field().zero(), &q3), Err(Error::ZeroArgument)));
}

#[test]
fn teichmueller_fixed_by_q_power() {
    let l = lf_make(2, 3, &[vec![-2], vec![1]], 24).unwrap();
    for r in l.residue_field().elements().filter(|r| !r.is_zero()) {
        let t = lf_teichmueller(&r, &l).unwrap();
        assert!(t.pow(l.q() as i64).unwrap().eq_within(&t));
        assert_eq!(t.residue().unwrap(), r);
    }
}

#[test]
fn hensel_examples() {
    let l = q2_sqrt2();
    let g = vec![l.from_int(-2), l.zero(), l.one()];
    let pi = l.uniformizer();
    let r = lf_hensel_root(&g, &pi).unwrap();
    assert!(r.eq_within(&pi));
    let r2 = lf_hensel_root(&g, &pi.neg()).unwrap();
    assert!(r2.eq_within(&pi.neg()));

    let q5 = lf_make(5, 1, &[vec![-5], vec![1]], 20).unwrap();
    let g = vec![q5.one(), q5.zero(), q5.one()];
    let r = lf_hensel_root(&g, &q5.from_int(2)).unwrap();
    assert!(r.mul(&r).unwrap().eq_within(&q5.from_int(-1)));
    assert_eq!(r.residue().unwrap().index(), 2);
    assert!(r.prec_abs() >= 18);
}

#[test]
fn hensel_rejects_bad_start() {
    let q5 = lf_make(5, 1, &[vec![-5], vec![1]], 20).unwrap();
    let g = vec![q5.one(), q5.zero(), q5.one()];
    assert!(matches!(lf_hensel_root(&g, &q5.from_int(1)), Err(Error::HenselFails(_))));
}

#[test]
fn roots_of_eisenstein_polynomial() {
    let l = q2_i();
    let g = vec![l.from_int(2), l.from_int(2), l.one()];
    let roots = roots_in_field(&g).unwrap();
    assert_eq!(roots.len(), 2);
    for r in &roots {
        assert!(poly_eval(&g, r).unwrap().is_zero());
    }
}

#[test]
fn precision_soundness() {
    let lo = q2_i();
    let hi = lo.with_precision(60).unwrap();
    let run = |l: &Arc<LocalField>| {
        let pi = l.uniformizer();
        let w = l.one().add(&pi).unwrap();
        w.pow(7).unwrap().div(&pi.pow(3).unwrap().add(&l.from_int(6)).unwrap()).unwrap()
    };
    let a = run(&lo);
    let b = run(&hi).reinterpret(&lo).unwrap();
    assert!(a.eq_mod(&b, a.prec_abs()).unwrap());
}

fn arb_elem(l: Arc<LocalField>) -> impl Strategy<Value = FieldElement> {
    let n = l.raw_len();
    (prop::collection::vec(-1000i64..1000, n), 0i64..6).prop_map(move |(c, s)| {
        let x = l.from_coords(&c, l.precision());
        x.shift(s)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn valuation_additive(a in arb_elem(q2_i()), b in arb_elem(q2_i())) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.valuation().unwrap(), a.valuation().unwrap() + b.valuation().unwrap());
    }

    #[test]
    fn ultrametric(a in arb_elem(q2_sqrt2()), b in arb_elem(q2_sqrt2())) {
        let s = a.add(&b).unwrap();
        let va = a.valuation_or_prec();
        let vb = b.valuation_or_prec();
        prop_assert!(s.valuation_or_prec() >= va.min(vb));
    }

    #[test]
    fn div_round_trip(a in arb_elem(q2_i()), b in arb_elem(q2_i())) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let q = a.div(&b).unwrap();
        let back = q.mul(&b).unwrap();
        prop_assert!(back.eq_mod(&a, back.prec_abs()).unwrap());
    }
}

#[test]
fn compositum_of_ramified_quadratic() {
    let l = q2_sqrt2();
    let (f, iota) = lf_compositum_f(&l, 2).unwrap();
    assert_eq!((f.f(), f.e(), f.degree()), (2, 2, 4));
    let pi = iota.apply(&l.uniformizer()).unwrap();
    let g: Vec<FieldElement> = f.eis_coeffs().iter().map(|c| f.from_oe_exact(c)).chain([f.one()]).collect();
    assert!(poly_eval(&g, &pi).unwrap().is_zero());
    assert_eq!(pi.valuation().unwrap(), 1);
    assert!(iota.pullback(&f.omega()).unwrap().is_none());
}

#[test]
fn compositum_of_unramified_is_identity() {
    let l = lf_make(3, 2, &[vec![-3], vec![1]], 20).unwrap();
    let (f, iota) = lf_compositum_f(&l, 1).unwrap();
    assert!(Arc::ptr_eq(&f, &l));
    let w = l.omega();
    assert!(iota.apply(&w).unwrap().eq_within(&w));
}

#[test]
fn compositum_maps_unramified_generator_to_root() {
    let l = lf_make(2, 2, &[vec![-2, 0], vec![0, 0], vec![1, 0]], 20).unwrap();
    let (f, iota) = lf_compositum_f(&l, 2).unwrap();
    assert_eq!(f.f(), 4);
    let w = iota.omega_image();
    let g: Vec<FieldElement> = l.unram_poly().iter().map(|&c| f.from_int(c as i64)).collect();
    assert!(poly_eval(&g, &w).unwrap().is_zero());
    let back = iota.pullback(&w).unwrap().unwrap();
    assert!(back.eq_within(&l.omega()));
}

fn q4_pi_omega() -> Arc<LocalField> {
    // x^2 - 2 omega over Q_4
    lf_make(2, 2, &[vec![0, -2], vec![0, 0], vec![1, 0]], 20).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn embedding_is_ring_morphism(a in arb_elem(q4_pi_omega()), b in arb_elem(q4_pi_omega())) {
        let l = a.field().clone();
        let (_, iota) = lf_compositum_f(&l, 2).unwrap();
        let ia = iota.apply(&a).unwrap();
        let ib = iota.apply(&b).unwrap();
        prop_assert!(iota.apply(&a.mul(&b).unwrap()).unwrap().eq_within(&ia.mul(&ib).unwrap()));
        prop_assert!(iota.apply(&a.add(&b).unwrap()).unwrap().eq_within(&ia.add(&ib).unwrap()));
        prop_assert_eq!(ia.valuation_or_prec(), a.valuation_or_prec());
        let back = iota.pullback(&ia).unwrap().unwrap();
        prop_assert!(back.eq_within(&a));
    }
}

#[test]
fn fixed_fields_of_trivial_and_full_groups() {
    let l = q2_sqrt2();
    let g = crate::galois::compute_automorphisms(&l).unwrap();
    let full = lf_fixed_field(&g, &[0, 1]).unwrap();
    assert_eq!((full.degree(), full.e_rel), (1, 2));
    assert!(full.pi_k.eq_within(&l.p_element()));
    let triv = lf_fixed_field(&g, &[0]).unwrap();
    assert_eq!(triv.degree(), 2);
    assert_eq!(triv.pi_k.valuation().unwrap(), 1);
}

#[test]
fn fixed_fields_of_zeta8() {
    let l = lf_make(2, 1, &[vec![2], vec![4], vec![6], vec![4], vec![1]], 24).unwrap();
    let g = crate::galois::compute_automorphisms(&l).unwrap();
    for h in 1..4 {
        let k = lf_fixed_field(&g, &[0, h]).unwrap();
        assert_eq!((k.degree(), k.e_rel, k.f_rel), (2, 2, 1));
        assert_eq!(k.pi_k.valuation().unwrap(), 2);
        for b in k.basis.iter().chain([&k.pi_k]) {
            assert!(g.apply(h, b).unwrap().eq_within(b));
        }
    }
}

#[test]
fn fixed_field_of_frobenius_subgroup() {
    // Q_4(sqrt 2): the subgroup generated by the Frobenius lift fixes a ramified quadratic
    let l = lf_make(2, 2, &[vec![-2, 0], vec![0, 0], vec![1, 0]], 20).unwrap();
    let g = crate::galois::compute_automorphisms(&l).unwrap();
    let frob = (0..4).find(|&i| g.element(i).frob_power() == 1 && g.element_order(i) == 2).unwrap();
    let k = lf_fixed_field(&g, &[0, frob]).unwrap();
    assert_eq!((k.e_rel, k.f_rel, k.e_k, k.f_k), (1, 2, 2, 1));
    assert_eq!(k.pi_k.valuation().unwrap(), 1);
}
