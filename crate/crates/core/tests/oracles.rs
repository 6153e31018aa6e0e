use std::sync::Arc;

use fundclass::cohomology::{
    cohomologous, inflate, verify_cocycle_via_compositum, verify_restriction, verify_via_compositum, ActionMatrices,
    UnitsQuotient,
};
use fundclass::galois::{compositum_group, compute_automorphisms, GaloisGroup};
use fundclass::lfc::{lfc_main, stable_level, working_precision, Base};
use fundclass::local_field::{lf_compositum_f, lf_make, LocalField};

fn galois(p: u64, f: usize, eis: &[Vec<i64>], k: i64) -> GaloisGroup {
    let tmp = lf_make(p, f, eis, 24).unwrap();
    let l: Arc<LocalField> = lf_make(p, f, eis, working_precision(k, tmp.e())).unwrap();
    compute_automorphisms(&l).unwrap()
}

fn q2_sqrt2() -> Vec<Vec<i64>> {
    vec![vec![-2], vec![0], vec![1]]
}

#[test]
fn compositum_quadratic() {
    let g = galois(2, 1, &q2_sqrt2(), 6);
    let r = verify_via_compositum(&g, 6, false).unwrap();
    assert!(r.holds);
    assert_eq!(r.group_order, 4);
    assert!(r.witness.is_some());
}

#[test]
fn compositum_unramified_is_literal() {
    let g = galois(3, 2, &[vec![-3], vec![1]], 4);
    let r = verify_via_compositum(&g, 4, false).unwrap();
    assert!(r.holds);
    assert_eq!(r.group_order, 2);
    let w = r.witness.unwrap();
    assert!(w.iter().all(|c| c.v == 0 && c.a.iter().all(|&x| x == 0)));
}

#[test]
fn compositum_rejects_corruption() {
    let g = galois(2, 1, &q2_sqrt2(), 6);
    let u = lfc_main(&g, &Base::Qp, 6).unwrap();
    let l = g.field().clone();
    let bad = u.with_value(1, 1, u.value(1, 1).mul(&l.uniformizer()).unwrap());
    assert!(!verify_cocycle_via_compositum(&g, &bad, false).unwrap().holds);
    // a genuine cocycle in a different class
    let sq = {
        let vals: Vec<_> = u.values().iter().map(|x| x.mul(x).unwrap()).collect();
        fundclass::lfc::TwoCocycle::new(u.group().clone(), u.members().to_vec(), vals, 6).unwrap()
    };
    assert!(!verify_cocycle_via_compositum(&g, &sq, false).unwrap().holds);
}

#[test]
fn compositum_degree_four() {
    for (p, f, eis) in [
        (2u64, 2usize, vec![vec![0, -2], vec![0, 0], vec![1, 0]]),
        (2, 1, vec![vec![2], vec![4], vec![6], vec![4], vec![1]]),
    ] {
        let g0 = galois(p, f, &eis, 4);
        let k = stable_level(&g0).unwrap();
        let g = galois(p, f, &eis, k);
        let r = verify_via_compositum(&g, k, false).unwrap();
        assert!(r.holds, "{eis:?}");
    }
}

#[test]
fn inflation_is_injective_on_the_class() {
    let g = galois(2, 1, &q2_sqrt2(), 6);
    let u = lfc_main(&g, &Base::Qp, 6).unwrap();
    let (f, iota) = lf_compositum_f(g.field(), 2).unwrap();
    let (gamma, proj) = compositum_group(&g, &iota).unwrap();
    let inf = inflate(u.values(), &proj, &iota).unwrap();
    let uq = UnitsQuotient::build(&f, 6).unwrap();
    let am = ActionMatrices::build(&uq, &gamma).unwrap();
    let t: Vec<_> = inf.iter().map(|x| uq.dlog(x).unwrap()).collect();
    assert_eq!(fundclass::cohomology::class_order(&am, &t, false).unwrap(), 2);
    // trivial inflates to trivial
    let ones = vec![g.field().one(); 4];
    let inf1 = inflate(&ones, &proj, &iota).unwrap();
    assert!(inf1.iter().all(|x| x.eq_within(&f.one())));
    // entries commute with the embedding
    for (a, &pa) in proj.iter().enumerate() {
        for (b, &pb) in proj.iter().enumerate() {
            assert!(inf[a * proj.len() + b].eq_within(&iota.apply(u.value(pa, pb)).unwrap()));
        }
    }
}

#[test]
fn restriction_degree_four() {
    for (p, f, eis) in [
        (2u64, 1usize, vec![vec![2], vec![0], vec![-4], vec![0], vec![1]]),
        (2, 1, vec![vec![2], vec![4], vec![6], vec![4], vec![1]]),
        (2, 2, vec![vec![0, -2], vec![0, 0], vec![1, 0]]),
    ] {
        let g0 = galois(p, f, &eis, 4);
        let k = stable_level(&g0).unwrap();
        let g = galois(p, f, &eis, k);
        for i in 1..g.order() {
            if g.element_order(i) == 2 {
                assert!(verify_restriction(&g, &[0, i], k, false).unwrap(), "{eis:?} H = <{i}>");
            }
        }
        assert!(verify_restriction(&g, &[0], k, false).unwrap());
        let all: Vec<usize> = (0..g.order()).collect();
        assert!(verify_restriction(&g, &all, k, false).unwrap());
    }
}

#[test]
fn oracle_symmetry() {
    let g = galois(2, 1, &q2_sqrt2(), 6);
    let u = lfc_main(&g, &Base::Qp, 6).unwrap();
    let uq = UnitsQuotient::build(g.field(), 6).unwrap();
    let am = ActionMatrices::build(&uq, &g).unwrap();
    let a = u.coords(&uq).unwrap();
    let sq: Vec<_> = a.iter().map(|x| uq.add(x, x)).collect();
    let one = vec![uq.zero(); 4];
    for (x, y) in [(&a, &sq), (&a, &one), (&sq, &one), (&a, &a)] {
        assert_eq!(
            cohomologous(&am, x, y, false).unwrap().is_some(),
            cohomologous(&am, y, x, false).unwrap().is_some()
        );
    }
    assert!(cohomologous(&am, &sq, &one, false).unwrap().is_some());
    assert!(cohomologous(&am, &a, &one, false).unwrap().is_none());
}
