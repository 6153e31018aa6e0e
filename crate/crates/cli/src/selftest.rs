use std::path::Path;
use std::time::Instant;

use fundclass::cohomology::{is_cocycle, ActionMatrices, UnitsQuotient};
use fundclass::finite_field::{ff_solve_artin_schreier, ff_solve_hilbert90, FFq};
use fundclass::galois::compute_automorphisms;
use fundclass::lfc::{lfc_main, working_precision, Base};
use fundclass::local_field::lf_make;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Serialize)]
struct Item {
    name: &'static str,
    pass: bool,
    millis: f64,
}

#[derive(Serialize)]
struct Report {
    seed: u64,
    pass: bool,
    items: Vec<Item>,
}

type Step = fn(&mut ChaCha8Rng) -> anyhow::Result<bool>;

fn dlog_homomorphism(rng: &mut ChaCha8Rng) -> anyhow::Result<bool> {
    let l = lf_make(2, 2, &[vec![-2, 0], vec![0, 0], vec![1, 0]], 16)?;
    let uq = UnitsQuotient::build(&l, 6)?;
    let rand_unit = |rng: &mut ChaCha8Rng| {
        let mut c: Vec<i64> = (0..l.degree()).map(|_| rng.gen_range(0..1 << 12)).collect();
        c[0] |= 1;
        l.from_coords(&c, l.precision()).shift(rng.gen_range(-3..4))
    };
    for _ in 0..50 {
        let (x, y) = (rand_unit(rng), rand_unit(rng));
        if uq.dlog(&x.mul(&y)?)? != uq.add(&uq.dlog(&x)?, &uq.dlog(&y)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn action_composition(_: &mut ChaCha8Rng) -> anyhow::Result<bool> {
    let l = lf_make(3, 1, &[vec![3], vec![9], vec![6], vec![1]], working_precision(4, 3))?;
    let g = compute_automorphisms(&l)?;
    let am = ActionMatrices::build(&UnitsQuotient::build(&l, 4)?, &g)?;
    Ok(am.check_composition())
}

fn unramified_cocycle(_: &mut ChaCha8Rng) -> anyhow::Result<bool> {
    let l = lf_make(3, 3, &[vec![-3, 0, 0], vec![1, 0, 0]], working_precision(4, 1))?;
    let g = compute_automorphisms(&l)?;
    let u = lfc_main(&g, &Base::Qp, 4)?;
    let uq = UnitsQuotient::build(&l, 4)?;
    let am = ActionMatrices::build(&uq, &g)?;
    Ok(is_cocycle(&am, &u.coords(&uq)?))
}

fn finite_field_solvers(rng: &mut ChaCha8Rng) -> anyhow::Result<bool> {
    for (p, n, d) in [(2, 4, 1), (3, 2, 1), (2, 6, 2), (5, 2, 1)] {
        let q = FFq::canonical(p, n)?;
        for _ in 0..20 {
            let x = q.from_index(rng.gen_range(1..q.size()));
            let c = x.frobenius(d).mul(&x.inv()?)?;
            let s = ff_solve_hilbert90(&c, d)?;
            if s.frobenius(d).mul(&s.inv()?)? != c {
                return Ok(false);
            }
            let b = x.frobenius(d).sub(&x)?;
            let y = ff_solve_artin_schreier(&b, d)?;
            if y.frobenius(d).sub(&y)? != b {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn run(seed: u64, out: Option<&Path>) -> anyhow::Result<bool> {
    let steps: [(&'static str, Step); 4] = [
        ("dlog-homomorphism", dlog_homomorphism),
        ("action-composition", action_composition),
        ("unramified-cocycle", unramified_cocycle),
        ("finite-field-solvers", finite_field_solvers),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items = Vec::new();
    for (name, step) in steps {
        let t = Instant::now();
        let pass = step(&mut rng)?;
        items.push(Item { name, pass, millis: t.elapsed().as_secs_f64() * 1e3 });
    }
    let report = Report { seed, pass: items.iter().all(|i| i.pass), items };
    for i in &report.items {
        eprintln!("{:<22} {}", i.name, if i.pass { "ok" } else { "FAIL" });
    }
    crate::emit(&report, out)?;
    Ok(report.pass)
}
