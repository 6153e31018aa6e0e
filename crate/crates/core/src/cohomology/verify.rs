//! Consistency oracles: inflation to the compositum and restriction to
//! subgroups.

use serde::{Deserialize, Serialize};

use super::{cohomologous, is_cocycle, ActionMatrices, Coords, UnitsQuotient};
use crate::error::{Error, Result};
use crate::galois::{compositum_group, GaloisGroup};
use crate::lfc::{lfc_main, Base, TwoCocycle};
use crate::local_field::{lf_compositum_f, Embedding, FieldElement};

/// `gamma o (proj x proj)`, with values pushed through `emb`.
pub fn inflate(values: &[FieldElement], proj: &[usize], emb: &Embedding) -> Result<Vec<FieldElement>> {
    let n = (values.len() as f64).sqrt().round() as usize;
    if n * n != values.len() || proj.iter().any(|&i| i >= n) {
        return Err(Error::InvalidInput("projection does not match the cocycle".into()));
    }
    let mut out = Vec::with_capacity(proj.len() * proj.len());
    for &a in proj {
        for &b in proj {
            out.push(emb.apply(&values[a * n + b])?);
        }
    }
    Ok(out)
}

/// Outcome of the compositum comparison.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompositumReport {
    pub holds: bool,
    pub group_order: usize,
    pub level: i64,
    pub witness: Option<Vec<Coords>>,
}

/// Compares `inf(u_{L/Q_p})` with `inf(u_{N/Q_p})` in
/// `H^2(Gal(F/Q_p), F^x / U^(k))`, `N` unramified of degree `[L:Q_p]`.
pub fn verify_via_compositum(full: &GaloisGroup, k: i64, force: bool) -> Result<CompositumReport> {
    let u = lfc_main(full, &Base::Qp, k)?;
    verify_cocycle_via_compositum(full, &u, force)
}

/// As [`verify_via_compositum`] for a given cocycle of `Gal(L/Q_p)`.
pub fn verify_cocycle_via_compositum(full: &GaloisGroup, u: &TwoCocycle, force: bool) -> Result<CompositumReport> {
    let l = full.field();
    let n = full.order();
    let k = u.level();
    let (f, iota) = lf_compositum_f(l, l.e())?;
    let (gamma, proj) = compositum_group(full, &iota)?;
    let m = gamma.order();
    if !force && m > super::MAX_ORACLE_GROUP {
        return Err(Error::OracleTooLarge(format!("compositum group of order {m}")));
    }
    let inf_l = inflate(u.values(), &proj, &iota)?;
    // Gal(F/Q_p) -> Gal(N/Q_p) = Z/n by the Frobenius power
    let p = f.p_element();
    let mut inf_n = Vec::with_capacity(m * m);
    for a in 0..m {
        for b in 0..m {
            let (i, j) = (gamma.element(a).frob_power() % n, gamma.element(b).frob_power() % n);
            inf_n.push(if i + j >= n { p.clone() } else { f.one() });
        }
    }
    let uq = UnitsQuotient::build(&f, k)?;
    let am = ActionMatrices::build(&uq, &gamma)?;
    let t_l: Vec<Coords> = inf_l.iter().map(|x| uq.dlog(x)).collect::<Result<_>>()?;
    let t_n: Vec<Coords> = inf_n.iter().map(|x| uq.dlog(x)).collect::<Result<_>>()?;
    if !is_cocycle(&am, &t_l) || !is_cocycle(&am, &t_n) {
        return Ok(CompositumReport { holds: false, group_order: m, level: k, witness: None });
    }
    let witness = cohomologous(&am, &t_l, &t_n, force)?;
    Ok(CompositumReport { holds: witness.is_some(), group_order: m, level: k, witness })
}

/// Whether `res_H(u_{L/Q_p})` and `u_{L/L^H}` are cohomologous in
/// `H^2(H, L^x / U^(k))`.
pub fn verify_restriction(full: &GaloisGroup, members: &[usize], k: i64, force: bool) -> Result<bool> {
    let u = lfc_main(full, &Base::Qp, k)?;
    let sub = lfc_main(full, &Base::Subgroup(members.to_vec()), k)?;
    let h = sub.group();
    let idx = sub.members();
    let n = h.order();
    let res: Vec<FieldElement> =
        (0..n * n).map(|i| u.value(idx[i / n], idx[i % n]).clone()).collect();
    let uq = UnitsQuotient::build(h.field(), k)?;
    let am = ActionMatrices::build(&uq, h)?;
    let t_res: Vec<Coords> = res.iter().map(|x| uq.dlog(x)).collect::<Result<_>>()?;
    let t_sub = sub.coords(&uq)?;
    if !is_cocycle(&am, &t_res) || !is_cocycle(&am, &t_sub) {
        return Ok(false);
    }
    Ok(cohomologous(&am, &t_res, &t_sub, force)?.is_some())
}
