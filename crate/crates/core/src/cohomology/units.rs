//! The finitely generated group `L^x / U^(k)` with an explicit discrete log.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::FFElem;
use crate::linalg::{snf_local, LocalRing, Track};
use crate::local_field::{lf_teichmueller, FieldElement, LocalField};

/// Coordinates of an element of `L^x / U^(k)`: the valuation and the finite
/// part, the latter reduced modulo [`UnitsQuotient::moduli`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coords {
    pub v: i64,
    pub a: Vec<u64>,
}

/// `L^x / U^(k) = <pi> x mu_{q-1} x U^(1)/U^(k)`, the last factor in Smith
/// form.
#[derive(Clone, Debug)]
pub struct UnitsQuotient {
    field: Arc<LocalField>,
    k: i64,
    residue_gen: Option<FFElem>,
    /// `g_{ij}^{-c}` for level `i`, basis index `j`, `c < p`
    gen_inv_pows: Vec<Vec<Vec<FieldElement>>>,
    ring: LocalRing,
    /// columns of `Q` kept in the reduced presentation
    keep: Vec<usize>,
    q: Vec<Vec<u64>>,
    moduli: Vec<u64>,
    generators: Vec<FieldElement>,
}

impl UnitsQuotient {
    pub fn build(field: &Arc<LocalField>, k: i64) -> Result<UnitsQuotient> {
        if k < 1 {
            return Err(Error::InvalidInput("level must be at least 1".into()));
        }
        if k > field.precision() {
            return Err(Error::PrecisionExhausted(format!("level {k} beyond working precision")));
        }
        let (p, f) = (field.p(), field.f());
        let q = field.q();
        let rf = field.residue_field();
        let residue_gen = (q > 2).then(|| rf.generator());
        let pi = field.uniformizer();
        let w = field.omega();
        let mut gen_inv_pows = Vec::new();
        let mut raw_gens = Vec::new();
        for i in 1..k {
            let mut level = Vec::with_capacity(f);
            for j in 0..f {
                let g = field.one().add(&w.pow(j as i64)?.mul(&pi.pow(i)?)?)?;
                let ginv = g.inv()?;
                let mut pows = vec![field.one()];
                for c in 1..p {
                    pows.push(pows[c as usize - 1].mul(&ginv)?);
                }
                raw_gens.push(g);
                level.push(pows);
            }
            gen_inv_pows.push(level);
        }
        let n1 = raw_gens.len();
        let ring = LocalRing::new(p, k.max(1) as u32);
        let mut uq = UnitsQuotient {
            field: field.clone(),
            k,
            residue_gen,
            gen_inv_pows,
            ring,
            keep: Vec::new(),
            q: Vec::new(),
            moduli: Vec::new(),
            generators: Vec::new(),
        };
        // relations p e_ij - dlog(g_ij^p)
        let mut rel = Vec::with_capacity(n1);
        for (idx, g) in raw_gens.iter().enumerate() {
            let d = uq.raw_one_unit_dlog(&g.pow(p as i64)?)?;
            let mut row: Vec<u64> = d.iter().map(|&x| ring.reduce(-(x as i128))).collect();
            row[idx] = ring.add(row[idx], p);
            rel.push(row);
        }
        let t = uq.residue_gen.as_ref().map(|g| lf_teichmueller(g, field)).transpose()?;
        if let Some(t) = t {
            uq.moduli.push(q - 1);
            uq.generators.push(t);
        }
        if n1 > 0 {
            let snf = snf_local(&ring, &rel, n1, Track::Q);
            let qm = snf.q.expect("tracked");
            let qinv = snf.q_inv.expect("tracked");
            for (i, &c) in snf.diag.iter().enumerate() {
                if c >= ring.exp() {
                    return Err(Error::Internal("one-unit relations are degenerate".into()));
                }
                if c > 0 {
                    uq.keep.push(i);
                    uq.moduli.push(ring.pow_ell(c));
                    // generator: prod_j g_j^{Qinv[i][j]}
                    let mut x = field.one();
                    for (j, g) in raw_gens.iter().enumerate() {
                        if qinv[i][j] != 0 {
                            x = x.mul(&g.pow(qinv[i][j] as i64)?)?;
                        }
                    }
                    uq.generators.push(x);
                }
            }
            uq.q = qm;
        }
        Ok(uq)
    }

    pub fn field(&self) -> &Arc<LocalField> {
        &self.field
    }

    pub fn level(&self) -> i64 {
        self.k
    }

    /// Moduli of the finite coordinates.
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Order of `U / U^(k)`.
    pub fn torsion_order(&self) -> u128 {
        self.moduli.iter().map(|&m| m as u128).product()
    }

    /// Generators of the finite part, matching [`Self::moduli`].
    pub fn generators(&self) -> &[FieldElement] {
        &self.generators
    }

    pub fn has_teichmueller(&self) -> bool {
        self.residue_gen.is_some()
    }

    /// Digits of a one-unit against `g_{ij} = 1 + omega^j pi^i`, level by level.
    fn raw_one_unit_dlog(&self, u: &FieldElement) -> Result<Vec<u64>> {
        let f = self.field.f();
        let mut out = vec![0u64; (self.k.max(1) as usize - 1) * f];
        let mut u = u.clone();
        let one = self.field.one();
        for i in 1..self.k {
            let d = u.sub(&one)?;
            if d.is_zero() && d.prec_abs() < self.k {
                return Err(Error::PrecisionExhausted(format!(
                    "unit known modulo pi^{} only, level {} needed",
                    d.prec_abs(),
                    self.k
                )));
            }
            if d.is_zero() || d.valuation()? > i {
                continue;
            }
            let v = d.valuation()?;
            if v < i {
                return Err(Error::Internal("one-unit reduction lost track of the level".into()));
            }
            let r = d.shift(-i).residue()?;
            for (j, &c) in r.coords().iter().enumerate() {
                if c != 0 {
                    out[(i as usize - 1) * f + j] = c;
                    u = u.mul(&self.gen_inv_pows[i as usize - 1][j][c as usize])?;
                }
            }
        }
        let rest = u.sub(&one)?;
        if !(rest.is_zero() && rest.prec_abs() >= self.k || !rest.is_zero() && rest.valuation()? >= self.k) {
            return Err(Error::PrecisionExhausted("one-unit not reduced to level k".into()));
        }
        Ok(out)
    }

    pub fn dlog(&self, x: &FieldElement) -> Result<Coords> {
        if x.is_zero() {
            return Err(Error::IndistinguishableFromZero);
        }
        if x.prec_rel() < self.k {
            return Err(Error::PrecisionExhausted(format!(
                "element known to relative precision {} < level {}",
                x.prec_rel(),
                self.k
            )));
        }
        if !Arc::ptr_eq(x.field(), &self.field) && !x.field().same_tower(&self.field) {
            return Err(Error::ParentMismatch);
        }
        let v = x.valuation()?;
        let mut u = x.shift(-v);
        let mut a = Vec::with_capacity(self.moduli.len());
        if let Some(g) = &self.residue_gen {
            let r = u.residue()?;
            let b = r.field().log_gen(r.coords()).ok_or(Error::ZeroArgument)?;
            a.push(b);
            if b != 0 {
                u = u.div(&self.generators[0].pow(b as i64)?)?;
            }
            debug_assert!(g.field().size() > 2);
        }
        let raw = self.raw_one_unit_dlog(&u)?;
        if !self.q.is_empty() {
            let off = a.len();
            for (pos, &col) in self.keep.iter().enumerate() {
                let m = self.moduli[off + pos];
                let s = raw
                    .iter()
                    .zip(&self.q)
                    .fold(0u64, |acc, (&x, row)| self.ring.add(acc, self.ring.mul(x, row[col])));
                a.push(s % m);
            }
        }
        Ok(Coords { v, a })
    }

    /// `pi^v * prod gen_i^{a_i}`.
    pub fn exp(&self, c: &Coords) -> Result<FieldElement> {
        let mut x = self.field.uniformizer().pow(c.v)?;
        for (g, &e) in self.generators.iter().zip(&c.a) {
            if e != 0 {
                x = x.mul(&g.pow(e as i64)?)?;
            }
        }
        Ok(x)
    }

    pub fn add(&self, x: &Coords, y: &Coords) -> Coords {
        Coords {
            v: x.v + y.v,
            a: x.a.iter().zip(&y.a).zip(&self.moduli).map(|((&s, &t), &m)| ((s as u128 + t as u128) % m as u128) as u64).collect(),
        }
    }

    pub fn neg(&self, x: &Coords) -> Coords {
        Coords { v: -x.v, a: x.a.iter().zip(&self.moduli).map(|(&s, &m)| (m - s % m) % m).collect() }
    }

    pub fn zero(&self) -> Coords {
        Coords { v: 0, a: vec![0; self.moduli.len()] }
    }
}
