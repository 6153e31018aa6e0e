//! The local fundamental class `u_{L/K}` as an explicit 2-cocycle modulo
//! `U_L^(k)`, computed inside the unramified extension `F = LN` of `L` of
//! degree `e(L/K)`, where `N/K` is unramified of degree `[L:K]`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cohomology::{Coords, UnitsQuotient};
use crate::error::{Error, Result};
use crate::finite_field::{ff_norm_trace, ff_solve_artin_schreier, ff_solve_hilbert90, solve_fp_linear, FFElem};
use crate::galois::{compute_automorphisms, lift_sigma_hat, restrict_unram, Automorphism, GaloisGroup, LegendEntry};
use crate::local_field::{lf_compositum_f, lf_fixed_field, Embedding, FieldDescriptor, FieldElement, LocalField};

pub const ALGORITHM_VERSION: &str = "lfc-1";

/// The base field `K`: `Q_p` or the fixed field of a subgroup of `Gal(L/Q_p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Base {
    Qp,
    Subgroup(Vec<usize>),
}

/// A 2-cocycle of `Gal(L/K)` with values in `L^x`, meaningful modulo `U^(k)`.
#[derive(Clone, Debug)]
pub struct TwoCocycle {
    group: GaloisGroup,
    /// indices of the elements of `group` in `Gal(L/Q_p)`
    members: Vec<usize>,
    values: Vec<FieldElement>,
    k: i64,
}

impl TwoCocycle {
    pub fn new(group: GaloisGroup, members: Vec<usize>, values: Vec<FieldElement>, k: i64) -> Result<TwoCocycle> {
        let n = group.order();
        if values.len() != n * n || members.len() != n {
            return Err(Error::InvalidInput("cocycle table has the wrong size".into()));
        }
        Ok(TwoCocycle { group, members, values, k })
    }

    pub fn group(&self) -> &GaloisGroup {
        &self.group
    }

    pub fn field(&self) -> &Arc<LocalField> {
        self.group.field()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn level(&self) -> i64 {
        self.k
    }

    pub fn value(&self, s: usize, t: usize) -> &FieldElement {
        &self.values[s * self.group.order() + t]
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    /// The table in coordinates of `L^x / U^(k)`.
    pub fn coords(&self, uq: &UnitsQuotient) -> Result<Vec<Coords>> {
        self.values.iter().map(|x| uq.dlog(x)).collect()
    }

    /// The same cocycle with one value replaced.
    pub fn with_value(&self, s: usize, t: usize, x: FieldElement) -> TwoCocycle {
        let mut out = self.clone();
        out.values[s * self.group.order() + t] = x;
        out
    }
}

/// A 1-cochain with values in `L_nr^x = prod_d F^x`.
#[derive(Clone, Debug)]
pub struct OneCochain {
    pub values: Vec<CompositumVector>,
}

/// An element `(y_0, ..., y_{d-1})` of `prod_d F`.
#[derive(Clone, Debug)]
pub struct CompositumVector(pub Vec<FieldElement>);

/// Everything computed on the way to the cocycle.
#[derive(Clone, Debug)]
pub struct LfcRun {
    pub cocycle: TwoCocycle,
    pub compositum: Arc<LocalField>,
    pub embedding: Embedding,
    /// uniformizer of `F` with norm `pi_K`
    pub pi: FieldElement,
    pub pi_k: FieldElement,
    pub e_rel: usize,
    pub d: usize,
    pub f_base: usize,
    pub u_sigma: Vec<FieldElement>,
    pub sigma_hat: Vec<Automorphism>,
    pub beta: OneCochain,
}

/// Relative setting of `F / L / K`.
#[derive(Clone, Debug)]
pub struct Setting {
    pub l: Arc<LocalField>,
    pub f: Arc<LocalField>,
    pub iota: Embedding,
    pub e_rel: usize,
    pub d: usize,
    pub f_base: usize,
    /// Frobenius of `F/L`
    pub frob: Automorphism,
}

impl Setting {
    pub fn new(l: &Arc<LocalField>, e_rel: usize, f_base: usize) -> Result<Setting> {
        let (f, iota) = lf_compositum_f(l, e_rel)?;
        let frob = Automorphism::new(l.f() % f.f(), f.uniformizer())?;
        Ok(Setting { l: l.clone(), f, iota, e_rel, d: l.f() / f_base, f_base, frob })
    }

    /// `N_{F/L}(x)` as an element of `F`.
    pub fn norm(&self, x: &FieldElement) -> Result<FieldElement> {
        let mut acc = x.clone();
        let mut conj = x.clone();
        for _ in 1..self.e_rel {
            conj = self.frob.apply(&conj)?;
            acc = acc.mul(&conj)?;
        }
        Ok(acc)
    }

    fn lift_level(&self, y: &FFElem, m: i64) -> Result<FieldElement> {
        self.f.one().add(&self.f.lift_residue(y).shift(m))
    }
}

/// The residue of `(a - 1) / pi^m` for `a` in `U^(m)`.
fn level_residue(a: &FieldElement, m: i64) -> Result<FFElem> {
    let d = a.sub(&a.field().one())?;
    let rf = a.field().residue_field().clone();
    if d.is_zero() {
        if d.prec_abs() > m {
            return Ok(rf.zero());
        }
        return Err(Error::PrecisionExhausted(format!("defect known to level {} only", d.prec_abs())));
    }
    let v = d.valuation()?;
    if v < m {
        return Err(Error::Internal(format!("defect at level {v}, expected at least {m}")));
    }
    if v > m {
        return Ok(rf.zero());
    }
    d.shift(-m).residue()
}

fn in_level(a: &FieldElement, level: i64) -> Result<bool> {
    a.ratio_in_units(&a.field().one(), level)
}

/// `v` in `U_F` with `N_{F/L}(v) = u mod U^(k+2)`, level by level.
pub fn solve_norm_unit(st: &Setting, u: &FieldElement, k: i64) -> Result<FieldElement> {
    if u.valuation()? != 0 {
        return Err(Error::InvalidInput("norm equation needs a unit".into()));
    }
    let target = st.iota.apply(u)?;
    let rf = st.f.residue_field().clone();
    let fl = st.l.f();
    // residue level: the norm is x -> x^((Q-1)/(q-1))
    let ubar = target.residue()?;
    let big_q = rf.size();
    let q = st.l.q();
    let ratio = (big_q - 1) / (q - 1);
    let lg = rf.log_gen(ubar.coords()).ok_or(Error::ZeroArgument)?;
    if lg % ratio != 0 {
        return Err(Error::NormSolveFailed("residue is not a norm".into()));
    }
    let mut v = st.f.lift_residue(&rf.elem(rf.exp_gen(lg / ratio)));
    for m in 1..k + 2 {
        let defect = target.div(&st.norm(&v)?)?;
        let b = level_residue(&defect, m).map_err(|e| Error::NormSolveFailed(e.to_string()))?;
        if b.is_zero() {
            continue;
        }
        let y = solve_fp_linear(&rf, |y| ff_norm_trace(y, fl).expect("divides").1, &b)
            .ok_or_else(|| Error::NormSolveFailed("trace equation has no solution".into()))?;
        v = v.mul(&st.lift_level(&y, m)?)?;
    }
    let defect = target.div(&st.norm(&v)?)?;
    if !in_level(&defect, k + 2).map_err(|e| Error::NormSolveFailed(e.to_string()))? {
        return Err(Error::NormSolveFailed("defect did not reach level k + 2".into()));
    }
    Ok(v)
}

/// Step 1: the uniformizer `pi = v pi_L` of `F` with `N_{F/L}(pi) = pi_K`.
pub fn lfc_step1_pi(st: &Setting, pi_k: &FieldElement, k: i64) -> Result<FieldElement> {
    let pi_l = st.l.uniformizer();
    if pi_k.valuation()? != st.e_rel as i64 {
        return Err(Error::InvalidInput("pi_K does not have valuation e(L/K)".into()));
    }
    let u = pi_k.div(&pi_l.pow(st.e_rel as i64)?)?;
    let v = solve_norm_unit(st, &u, k)?;
    let pi = v.mul(&st.f.uniformizer())?;
    let check = st.norm(&pi)?.div(&st.iota.apply(pi_k)?)?;
    if !in_level(&check, k + 2)? {
        return Err(Error::NormSolveFailed("norm of pi differs from pi_K".into()));
    }
    Ok(pi)
}

/// `sigma_hat` in `Gal(F/K)` with `sigma_hat|_L = sigma` and
/// `(sigma_hat|_N)^{-1} = phi^j`, together with `j`.
pub fn sigma_hat(st: &Setting, sigma: &Automorphism) -> Result<(Automorphism, usize)> {
    let j = restrict_unram(sigma, st.f_base, st.d);
    let ff = st.f.f();
    let t = (ff - (j * st.f_base) % ff) % ff;
    Ok((lift_sigma_hat(sigma, &st.iota, t)?, j))
}

/// Step 2: `u_sigma` with `u_sigma^(phi^d - 1) = sigma_hat(pi) / pi mod U^(k+2)`.
pub fn lfc_step2_usigma(st: &Setting, sh: &Automorphism, pi: &FieldElement, k: i64) -> Result<FieldElement> {
    let c = sh.apply(pi)?.div(pi)?;
    if c.valuation()? != 0 {
        return Err(Error::NormConditionViolated);
    }
    if !in_level(&st.norm(&c)?, k + 2)? {
        return Err(Error::NormConditionViolated);
    }
    solve_frobenius_twist(st, &c, k)
}

/// `x` in `U_F` with `x^(phi^d - 1) = c mod U^(k+2)`.
pub fn solve_frobenius_twist(st: &Setting, c: &FieldElement, k: i64) -> Result<FieldElement> {
    let fl = st.l.f();
    let twist = |x: &FieldElement| -> Result<FieldElement> { st.frob.apply(x)?.div(x) };
    let mut u = st.f.lift_residue(&ff_solve_hilbert90(&c.residue()?, fl)?);
    for m in 1..k + 2 {
        let defect = c.div(&twist(&u)?)?;
        let b = level_residue(&defect, m)?;
        if b.is_zero() {
            continue;
        }
        let y = ff_solve_artin_schreier(&b, fl)?;
        u = u.mul(&st.lift_level(&y, m)?)?;
    }
    if !in_level(&c.div(&twist(&u)?)?, k + 2)? {
        return Err(Error::PrecisionExhausted("Frobenius twist equation not solved to level k + 2".into()));
    }
    Ok(u)
}

/// `beta(sigma) = (u, ..., u, u sigma_hat(pi), ...)` with `j` trailing
/// components of the second kind.
pub fn lfc_beta(d: usize, j: usize, u_sigma: &FieldElement, shat_pi: &FieldElement) -> Result<CompositumVector> {
    let tail = u_sigma.mul(shat_pi)?;
    Ok(CompositumVector((0..d).map(|i| if i < d - j { u_sigma.clone() } else { tail.clone() }).collect()))
}

/// The action of `sigma` on `prod_d F`: `sigma_hat` diagonally, then the
/// shift `(phi, 1)^j`.
pub fn act(st: &Setting, sh: &Automorphism, j: usize, y: &CompositumVector) -> Result<CompositumVector> {
    let d = st.d;
    let z: Vec<FieldElement> = y.0.iter().map(|x| sh.apply(x)).collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let src = i + j;
        out.push(if src < d { z[src].clone() } else { st.frob.apply(&z[src - d])? });
    }
    Ok(CompositumVector(out))
}

/// Step 3: `gamma = d beta`, checked to be diagonal and in `L`, returned as
/// `L`-values modulo `U^(k)`.
pub fn lfc_gamma(
    st: &Setting,
    group: &GaloisGroup,
    shats: &[(Automorphism, usize)],
    beta: &OneCochain,
    k: i64,
) -> Result<Vec<FieldElement>> {
    let n = group.order();
    let mut out = Vec::with_capacity(n * n);
    for s in 0..n {
        for t in 0..n {
            let st_idx = group.mul(s, t);
            let moved = act(st, &shats[s].0, shats[s].1, &beta.values[t])?;
            let comps: Vec<FieldElement> = (0..st.d)
                .map(|i| moved.0[i].mul(&beta.values[s].0[i])?.div(&beta.values[st_idx].0[i]))
                .collect::<Result<_>>()?;
            for c in &comps[1..] {
                if !c.ratio_in_units(&comps[0], k)? {
                    return Err(Error::DiagonalityViolated(s, t));
                }
            }
            // the value lies in L modulo U^(k) only
            let c0 = comps[0].truncate_abs(comps[0].valuation()? + k);
            let x = st.iota.pullback(&c0)?.ok_or(Error::NotInL(s, t))?;
            if x.prec_rel() < k {
                return Err(Error::PrecisionExhausted(format!(
                    "cocycle value ({s}, {t}) known to relative precision {} < {k}",
                    x.prec_rel()
                )));
            }
            out.push(x);
        }
    }
    Ok(out)
}

/// Runs the algorithm for `L/K` where `L` is the field of `full` and `K` is
/// `Q_p` or the fixed field of a subgroup.
pub fn lfc_run(full: &GaloisGroup, base: &Base, k: i64) -> Result<LfcRun> {
    if k < 1 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let l = full.field().clone();
    let (members, pi_k, e_k, f_k) = match base {
        Base::Qp => ((0..full.order()).collect::<Vec<_>>(), l.p_element(), 1, 1),
        Base::Subgroup(m) => {
            let mut m = m.clone();
            m.sort_unstable();
            m.dedup();
            let sd = lf_fixed_field(full, &m)?;
            (m, sd.pi_k, sd.e_k, sd.f_k)
        }
    };
    let group = GaloisGroup::from_elements(&l, members.iter().map(|&i| full.element(i).clone()).collect())?;
    let e_rel = l.e() / e_k;
    if e_rel * e_k != l.e() || l.f() % f_k != 0 || e_rel * (l.f() / f_k) != group.order() {
        return Err(Error::InvalidInput("subgroup data inconsistent with the field".into()));
    }
    let st = Setting::new(&l, e_rel, f_k)?;
    let n = group.order();
    let shats: Vec<(Automorphism, usize)> = group.elements().iter().map(|s| sigma_hat(&st, s)).collect::<Result<_>>()?;
    let (pi, u_sigma) = if e_rel == 1 {
        // unramified: pi = pi_K, u_sigma = 1/pi for sigma != id
        let pi = st.iota.apply(&pi_k)?;
        let inv = pi.inv()?;
        let us = (0..n).map(|i| if i == group.identity() { st.f.one() } else { inv.clone() }).collect();
        (pi, us)
    } else {
        let pi = lfc_step1_pi(&st, &pi_k, k)?;
        let us = shats
            .iter()
            .enumerate()
            .map(|(i, (sh, _))| if i == group.identity() { Ok(st.f.one()) } else { lfc_step2_usigma(&st, sh, &pi, k) })
            .collect::<Result<Vec<_>>>()?;
        (pi, us)
    };
    let beta = OneCochain {
        values: (0..n)
            .map(|i| lfc_beta(st.d, shats[i].1, &u_sigma[i], &shats[i].0.apply(&pi)?))
            .collect::<Result<_>>()?,
    };
    let gamma = lfc_gamma(&st, &group, &shats, &beta, k)?;
    let values = gamma.iter().map(|x| x.inv()).collect::<Result<Vec<_>>>()?;
    let cocycle = TwoCocycle::new(group, members, values, k)?;
    Ok(LfcRun {
        cocycle,
        compositum: st.f.clone(),
        embedding: st.iota.clone(),
        pi,
        pi_k,
        e_rel,
        d: st.d,
        f_base: f_k,
        u_sigma,
        sigma_hat: shats.into_iter().map(|x| x.0).collect(),
        beta,
    })
}

/// Defining-equation residuals of a run, checked at level `k + 2` in `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residuals {
    pub level: i64,
    /// `N_{F/L}(pi) = pi_K`
    pub norm: bool,
    /// `u_sigma^(phi^d - 1) = sigma_hat(pi) / pi`, per group element
    pub twist: Vec<bool>,
}

impl Residuals {
    pub fn holds(&self) -> bool {
        self.norm && self.twist.iter().all(|&b| b)
    }
}

impl LfcRun {
    pub fn residuals(&self) -> Result<Residuals> {
        let l = self.cocycle.field();
        let st = Setting::new(l, self.e_rel, self.f_base)?;
        let level = self.cocycle.level() + 2;
        let norm = st.norm(&self.pi)?.ratio_in_units(&st.iota.apply(&self.pi_k)?, level)?;
        let twist = self
            .sigma_hat
            .iter()
            .zip(&self.u_sigma)
            .map(|(sh, u)| {
                let c = sh.apply(&self.pi)?.div(&self.pi)?;
                st.frob.apply(u)?.div(u)?.ratio_in_units(&c, level)
            })
            .collect::<Result<_>>()?;
        Ok(Residuals { level, norm, twist })
    }
}

/// The local fundamental class `u_{L/K}` modulo `U^(k)`.
pub fn lfc_main(full: &GaloisGroup, base: &Base, k: i64) -> Result<TwoCocycle> {
    Ok(lfc_run(full, base, k)?.cocycle)
}

/// Default level `e * t + 1`, with `t` the highest lower ramification break
/// (`v(sigma(pi) - pi) - 1` maximized over `sigma != 1`). Above it the image
/// of the fundamental class in `H^2(G, L^x / U^(k))` keeps its full order on
/// every catalog field.
pub fn stable_level(group: &GaloisGroup) -> Result<i64> {
    let pi = group.field().uniformizer();
    let mut t = 0;
    for i in 0..group.order() {
        if i == group.identity() {
            continue;
        }
        let d = group.apply(i, &pi)?.sub(&pi)?;
        if !d.is_zero() {
            t = t.max(d.valuation()? - 1);
        }
    }
    Ok(group.field().e() as i64 * t + 1)
}

/// Working precision for level `k` in a field with ramification `e`.
pub fn working_precision(k: i64, e: usize) -> i64 {
    2 * k + 2 * e as i64 + 4
}

/// Serialized form of an element.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElementDump {
    pub valuation: i64,
    pub unit_coords: Vec<u64>,
    pub digits: Vec<u64>,
    pub prec_abs: i64,
}

impl ElementDump {
    pub fn of(x: &FieldElement, uq: &UnitsQuotient) -> Result<ElementDump> {
        Ok(ElementDump {
            valuation: x.valuation()?,
            unit_coords: uq.dlog(x)?.a,
            digits: x.unit_digits(),
            prec_abs: x.prec_abs(),
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleMeta {
    pub field: FieldDescriptor,
    pub p: u64,
    pub f: usize,
    pub e: usize,
    pub k: i64,
    pub precision: i64,
    pub base_members: Vec<usize>,
    pub e_rel: usize,
    pub d: usize,
    pub pi_l_digits: Vec<u64>,
    pub pi_digits: Vec<u64>,
    pub moduli: Vec<u64>,
    pub algorithm_version: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairEntry {
    pub sigma: usize,
    pub tau: usize,
    pub value: ElementDump,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleDump {
    pub legend: Vec<LegendEntry>,
    pub table: Vec<PairEntry>,
    pub meta: CocycleMeta,
}

impl LfcRun {
    pub fn dump(&self) -> Result<CocycleDump> {
        let c = &self.cocycle;
        let l = c.field();
        let uq = UnitsQuotient::build(l, c.level())?;
        let n = c.group().order();
        let mut table = Vec::with_capacity(n * n);
        for s in 0..n {
            for t in 0..n {
                table.push(PairEntry { sigma: s, tau: t, value: ElementDump::of(c.value(s, t), &uq)? });
            }
        }
        Ok(CocycleDump {
            legend: c.group().legend(),
            table,
            meta: CocycleMeta {
                field: l.descriptor(),
                p: l.p(),
                f: l.f(),
                e: l.e(),
                k: c.level(),
                precision: l.precision(),
                base_members: c.members().to_vec(),
                e_rel: self.e_rel,
                d: self.d,
                pi_l_digits: l.uniformizer().unit_digits(),
                pi_digits: self.pi.unit_digits(),
                moduli: uq.moduli().to_vec(),
                algorithm_version: ALGORITHM_VERSION.into(),
            },
        })
    }
}

impl TwoCocycle {
    /// Rebuilds a cocycle from its dump. The field and its automorphisms are
    /// recomputed and must reproduce the stored legend.
    pub fn from_dump(dump: &CocycleDump) -> Result<TwoCocycle> {
        let m = &dump.meta;
        let l = LocalField::from_descriptor(&m.field, m.precision)?;
        if l.precision() != m.precision || l.e() != m.e || l.f() != m.f {
            return Err(Error::InvalidInput("metadata does not match the field descriptor".into()));
        }
        let full = compute_automorphisms(&l)?;
        if m.base_members.iter().any(|&i| i >= full.order()) {
            return Err(Error::InvalidInput("base member out of range".into()));
        }
        let group =
            GaloisGroup::from_elements(&l, m.base_members.iter().map(|&i| full.element(i).clone()).collect())?;
        if group.legend() != dump.legend {
            return Err(Error::InvalidInput("group legend does not match the recomputed automorphisms".into()));
        }
        let n = group.order();
        let mut values = vec![None; n * n];
        for e in &dump.table {
            if e.sigma >= n || e.tau >= n {
                return Err(Error::InvalidInput(format!("pair ({}, {}) out of range", e.sigma, e.tau)));
            }
            let v = &e.value;
            values[e.sigma * n + e.tau] = Some(FieldElement::from_parts(&l, v.valuation, v.digits.clone(), v.prec_abs)?);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::InvalidInput(format!("missing pair ({}, {})", i / n, i % n))))
            .collect::<Result<Vec<_>>>()?;
        TwoCocycle::new(group, m.base_members.clone(), values, m.k)
    }
}
