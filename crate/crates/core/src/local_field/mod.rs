//! Two-level towers over `Q_p`: an unramified layer `E = Q_p(omega)` defined by
//! the lift of a primitive residue polynomial, followed by an Eisenstein layer
//! `L = E(pi)`. Integral elements are stored as `e x f` coordinate arrays over
//! the basis `omega^j pi^i`, modulo `p^M`.

mod element;
mod embedding;
mod fixed_field;
mod poly;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use element::{FieldElement, LfOp};
pub use embedding::{lf_compositum_f, Embedding};
pub use fixed_field::{lf_fixed_field, SubfieldData};
pub use poly::{lf_hensel_root, poly_derivative, poly_eval, roots_in_field};

use crate::arith::{add_mod, mul_mod, neg_mod, reduce_i128, sub_mod, val_p};
use crate::error::{Error, Result};
use crate::finite_field::{FFElem, FFq};

/// Serialized field descriptor: Eisenstein coefficients (constant term first,
/// monic leading term included) as coordinate vectors over the canonical
/// unramified generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub f: usize,
    pub eis_poly: Vec<Vec<i64>>,
    #[serde(default)]
    pub precision: Option<i64>,
}

/// A finite-precision tower `Q_p ⊂ E ⊂ L`.
pub struct LocalField {
    p: u64,
    f: usize,
    e: usize,
    prec: i64,
    m_exp: u32,
    modulus: u64,
    /// monic lift of the residue modulus, length f+1
    unram: Vec<u64>,
    /// Eisenstein coefficients a_0..a_{e-1} in O_E
    eis: Vec<Vec<u64>>,
    /// original integer data, kept for re-precisioning and serialization
    eis_input: Vec<Vec<i64>>,
    residue: Arc<FFq>,
    /// frob[s][j] = coordinates of Frobenius^s(omega^j)
    frob: Vec<Vec<Vec<u64>>>,
    /// pi^e / p, a unit
    eta_inv: Vec<u64>,
}

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LocalField(p={}, f={}, e={}, eis={:?}, N={})",
            self.p, self.f, self.e, self.eis_input, self.prec
        )
    }
}

impl PartialEq for LocalField {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p
            && self.f == o.f
            && self.e == o.e
            && self.prec == o.prec
            && self.unram == o.unram
            && self.eis == o.eis
    }
}

impl Eq for LocalField {}

/// Validates and builds a tower from a descriptor.
pub fn lf_make(p: u64, f: usize, eis_coeffs: &[Vec<i64>], n_abs: i64) -> Result<Arc<LocalField>> {
    LocalField::new(p, f, eis_coeffs, n_abs)
}

impl LocalField {
    pub fn new(p: u64, f: usize, eis_coeffs: &[Vec<i64>], n_abs: i64) -> Result<Arc<LocalField>> {
        if f == 0 {
            return Err(Error::InvalidInput("inertia degree must be positive".into()));
        }
        let residue = FFq::canonical(p, f)?;
        let mut coeffs: Vec<Vec<i64>> = eis_coeffs.to_vec();
        match coeffs.pop() {
            Some(lead) if lead.first() == Some(&1) && lead.iter().skip(1).all(|&c| c == 0) => {}
            _ => return Err(Error::NotEisenstein("polynomial is not monic".into())),
        }
        let e = coeffs.len();
        if e == 0 {
            return Err(Error::NotEisenstein("polynomial has degree 0".into()));
        }
        if coeffs.iter().any(|c| c.len() > f) {
            return Err(Error::InvalidInput("coefficient vector longer than f".into()));
        }
        if n_abs < 2 * e as i64 {
            return Err(Error::PrecisionTooSmall(format!(
                "working precision {n_abs} below 2e = {}",
                2 * e
            )));
        }
        // Eisenstein: all coefficients divisible by p, constant term exactly once
        for (i, c) in coeffs.iter().enumerate() {
            if c.iter().any(|&x| x.rem_euclid(p as i64) != 0) {
                return Err(Error::NotEisenstein(format!("coefficient of x^{i} is not divisible by p")));
            }
        }
        let c0 = &coeffs[0];
        if c0.iter().all(|&x| (x / p as i64).rem_euclid(p as i64) == 0) {
            return Err(Error::NotEisenstein("constant term has valuation > 1".into()));
        }
        let m_exp = ((n_abs + e as i64 - 1) / e as i64 + 2) as u32;
        let modulus = (p as u128)
            .checked_pow(m_exp)
            .filter(|&m| m < (1u128 << 62))
            .ok_or_else(|| Error::PrecisionExhausted(format!("storage modulus p^{m_exp} exceeds 62 bits")))?
            as u64;
        let unram: Vec<u64> = residue.modulus().to_vec();
        let eis: Vec<Vec<u64>> = coeffs
            .iter()
            .map(|c| {
                let mut v: Vec<u64> = c.iter().map(|&x| reduce_i128(x as i128, modulus)).collect();
                v.resize(f, 0);
                v
            })
            .collect();
        let mut normalized: Vec<Vec<i64>> = coeffs.iter().map(|c| {
            let mut v = c.clone();
            v.resize(f, 0);
            v
        }).collect();
        let mut lead = vec![0i64; f];
        lead[0] = 1;
        normalized.push(lead);
        let mut field = LocalField {
            p,
            f,
            e,
            prec: n_abs,
            m_exp,
            modulus,
            unram,
            eis,
            eis_input: normalized,
            residue,
            frob: Vec::new(),
            eta_inv: Vec::new(),
        };
        field.frob = field.frobenius_tables();
        // eta = pi^e / p = -(sum a_i pi^i)/p
        let mut eta = vec![0u64; e * f];
        for i in 0..e {
            for j in 0..f {
                let a = field.eis[i][j];
                debug_assert_eq!(a % p, 0);
                eta[i * f + j] = neg_mod(a / p, modulus);
            }
        }
        field.eta_inv = field.raw_unit_inv(&eta);
        Ok(Arc::new(field))
    }

    pub fn from_descriptor(d: &FieldDescriptor, min_precision: i64) -> Result<Arc<LocalField>> {
        let prec = d.precision.unwrap_or(0).max(min_precision);
        LocalField::new(d.p, d.f, &d.eis_poly, prec)
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p, f: self.f, eis_poly: self.eis_input.clone(), precision: Some(self.prec) }
    }

    /// The same tower at a different working precision.
    pub fn with_precision(&self, n_abs: i64) -> Result<Arc<LocalField>> {
        LocalField::new(self.p, self.f, &self.eis_input, n_abs)
    }

    /// Same defining data, ignoring precision.
    pub fn same_tower(&self, o: &LocalField) -> bool {
        self.p == o.p && self.f == o.f && self.eis_input == o.eis_input
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Inertia degree over `Q_p`.
    pub fn f(&self) -> usize {
        self.f
    }

    /// Ramification degree over `Q_p`.
    pub fn e(&self) -> usize {
        self.e
    }

    pub fn degree(&self) -> usize {
        self.e * self.f
    }

    /// Working precision: cap on the relative precision of elements.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Size of the residue field.
    pub fn q(&self) -> u64 {
        self.residue.size()
    }

    pub fn residue_field(&self) -> &Arc<FFq> {
        &self.residue
    }

    pub fn storage_modulus(&self) -> u64 {
        self.modulus
    }

    pub fn storage_exponent(&self) -> u32 {
        self.m_exp
    }

    pub fn unram_poly(&self) -> &[u64] {
        &self.unram
    }

    /// Eisenstein coefficients `a_0..a_{e-1}` reduced into storage.
    pub fn eis_coeffs(&self) -> &[Vec<u64>] {
        &self.eis
    }

    /// Defining polynomial as given (monic), coordinate vectors padded to length f.
    pub fn eis_input(&self) -> &[Vec<i64>] {
        &self.eis_input
    }

    pub fn is_qp(&self) -> bool {
        self.e == 1 && self.f == 1
    }

    // ---------- O_E arithmetic (length f vectors mod p^M) ----------

    pub(crate) fn oe_zero(&self) -> Vec<u64> {
        vec![0; self.f]
    }

    pub(crate) fn oe_one(&self) -> Vec<u64> {
        let mut v = self.oe_zero();
        v[0] = 1;
        v
    }

    pub(crate) fn oe_add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| add_mod(x, y, self.modulus)).collect()
    }

    pub(crate) fn oe_sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| sub_mod(x, y, self.modulus)).collect()
    }

    pub(crate) fn oe_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let f = self.f;
        let m = self.modulus;
        if f == 1 {
            return vec![mul_mod(a[0], b[0], m)];
        }
        let mut acc = vec![0u128; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] = (acc[i + j] + x as u128 * y as u128) % m as u128;
            }
        }
        let mut r: Vec<u64> = acc.into_iter().map(|x| x as u64).collect();
        for t in (f..2 * f - 1).rev() {
            let c = r[t];
            if c == 0 {
                continue;
            }
            r[t] = 0;
            for k in 0..f {
                let s = mul_mod(c, self.unram[k], m);
                r[t - f + k] = sub_mod(r[t - f + k], s, m);
            }
        }
        r.truncate(f);
        r
    }

    pub(crate) fn oe_pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut r = self.oe_one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.oe_mul(&r, &b);
            }
            b = self.oe_mul(&b, &b);
            e >>= 1;
        }
        r
    }

    pub(crate) fn oe_eval_poly(&self, poly: &[u64], x: &[u64]) -> Vec<u64> {
        let mut acc = self.oe_zero();
        for &c in poly.iter().rev() {
            acc = self.oe_mul(&acc, x);
            acc[0] = add_mod(acc[0], c, self.modulus);
        }
        acc
    }

    /// Inverse of an O_E unit by Newton iteration from the residue inverse.
    pub(crate) fn oe_unit_inv(&self, a: &[u64]) -> Vec<u64> {
        let res: Vec<u64> = a.iter().map(|&x| x % self.p).collect();
        let inv = self.residue.inv_c(&res).expect("unit");
        let mut y: Vec<u64> = inv;
        let two = {
            let mut v = self.oe_zero();
            v[0] = 2 % self.modulus;
            v
        };
        let mut prec = 1u32;
        while prec < self.m_exp {
            let ay = self.oe_mul(a, &y);
            y = self.oe_mul(&y, &self.oe_sub(&two, &ay));
            prec *= 2;
        }
        y
    }

    fn frobenius_tables(&self) -> Vec<Vec<Vec<u64>>> {
        let f = self.f;
        // phi(omega): the root of the unramified polynomial congruent to omega^p
        let mut omega = self.oe_zero();
        if f > 1 {
            omega[1] = 1;
        } else {
            omega[0] = neg_mod(self.unram[0], self.modulus);
        }
        let deriv: Vec<u64> =
            (1..self.unram.len()).map(|i| mul_mod(self.unram[i], i as u64, self.modulus)).collect();
        let mut x = self.oe_pow(&omega, self.p);
        let mut prec = 1u32;
        while prec <= self.m_exp {
            let gx = self.oe_eval_poly(&self.unram, &x);
            let dx = self.oe_eval_poly(&deriv, &x);
            let step = self.oe_mul(&gx, &self.oe_unit_inv(&dx));
            x = self.oe_sub(&x, &step);
            prec *= 2;
        }
        debug_assert!(self.oe_eval_poly(&self.unram, &x).iter().all(|&c| c == 0));
        let mut tables = Vec::with_capacity(f);
        // frob^s(omega^j) = (frob^s(omega))^j
        let mut image = omega.clone();
        for _ in 0..f {
            let mut cols = Vec::with_capacity(f);
            let mut pw = self.oe_one();
            for _ in 0..f {
                cols.push(pw.clone());
                pw = self.oe_mul(&pw, &image);
            }
            tables.push(cols);
            // next power: apply phi to the image
            image = self.oe_eval_poly(&image, &x);
        }
        tables
    }

    /// Frobenius^s on O_E.
    pub(crate) fn oe_frob(&self, a: &[u64], s: usize) -> Vec<u64> {
        let s = s % self.f;
        if s == 0 {
            return a.to_vec();
        }
        let mut out = self.oe_zero();
        for (j, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let col = &self.frob[s][j];
            for k in 0..self.f {
                out[k] = add_mod(out[k], mul_mod(c, col[k], self.modulus), self.modulus);
            }
        }
        out
    }

    /// The unramified generator omega as an O_E vector.
    pub(crate) fn oe_omega(&self) -> Vec<u64> {
        let mut w = self.oe_zero();
        if self.f > 1 {
            w[1] = 1;
        } else {
            w[0] = neg_mod(self.unram[0], self.modulus);
        }
        w
    }

    /// Teichmüller representative in O_E of a residue.
    pub(crate) fn oe_teichmueller(&self, r: &[u64]) -> Vec<u64> {
        let mut x: Vec<u64> = r.to_vec();
        let q = self.q();
        for _ in 0..=self.m_exp {
            x = self.oe_pow(&x, q);
        }
        x
    }

    // ---------- O_L arithmetic (length e*f vectors, index i*f + j) ----------

    pub(crate) fn raw_len(&self) -> usize {
        self.e * self.f
    }

    pub(crate) fn raw_zero(&self) -> Vec<u64> {
        vec![0; self.e * self.f]
    }

    pub(crate) fn raw_one(&self) -> Vec<u64> {
        let mut v = self.raw_zero();
        v[0] = 1 % self.modulus;
        v
    }

    pub(crate) fn raw_add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| add_mod(x, y, self.modulus)).collect()
    }

    pub(crate) fn raw_sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| sub_mod(x, y, self.modulus)).collect()
    }

    pub(crate) fn raw_neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|&x| neg_mod(x, self.modulus)).collect()
    }

    pub(crate) fn raw_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (e, f, m) = (self.e, self.f, self.modulus);
        let mut acc = vec![vec![0u64; f]; 2 * e - 1];
        for i1 in 0..e {
            let x = &a[i1 * f..(i1 + 1) * f];
            if x.iter().all(|&c| c == 0) {
                continue;
            }
            for i2 in 0..e {
                let y = &b[i2 * f..(i2 + 1) * f];
                if y.iter().all(|&c| c == 0) {
                    continue;
                }
                let prod = self.oe_mul(x, y);
                acc[i1 + i2] = self.oe_add(&acc[i1 + i2], &prod);
            }
        }
        // pi^e = -(a_{e-1} pi^{e-1} + ... + a_0)
        for t in (e..2 * e - 1).rev() {
            let c = std::mem::replace(&mut acc[t], vec![0; f]);
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            for k in 0..e {
                let s = self.oe_mul(&c, &self.eis[k]);
                acc[t - e + k] = self.oe_sub(&acc[t - e + k], &s);
            }
        }
        let mut out = Vec::with_capacity(e * f);
        for layer in acc.into_iter().take(e) {
            out.extend(layer);
        }
        let _ = m;
        out
    }

    /// Multiplication by pi.
    pub(crate) fn raw_mul_pi(&self, a: &[u64]) -> Vec<u64> {
        let (e, f) = (self.e, self.f);
        let top = a[(e - 1) * f..].to_vec();
        let mut out = vec![0u64; e * f];
        out[f..].copy_from_slice(&a[..(e - 1) * f]);
        if top.iter().any(|&c| c != 0) {
            for k in 0..e {
                let s = self.oe_mul(&top, &self.eis[k]);
                let layer = self.oe_sub(&out[k * f..(k + 1) * f], &s);
                out[k * f..(k + 1) * f].copy_from_slice(&layer);
            }
        }
        out
    }

    pub(crate) fn raw_mul_pi_pow(&self, a: &[u64], k: usize) -> Vec<u64> {
        let mut r = a.to_vec();
        for _ in 0..k.min(self.e * self.m_exp as usize + 1) {
            r = self.raw_mul_pi(&r);
        }
        r
    }

    /// Valuation of a stored integral element; `None` if all coordinates vanish.
    pub(crate) fn raw_val(&self, a: &[u64]) -> Option<i64> {
        let mut best: Option<i64> = None;
        for i in 0..self.e {
            for j in 0..self.f {
                if let Some(v) = val_p(a[i * self.f + j], self.p) {
                    let v = self.e as i64 * v as i64 + i as i64;
                    best = Some(best.map_or(v, |b: i64| b.min(v)));
                }
            }
        }
        best
    }

    /// Exact division by `pi^t` of a stored element of valuation at least `t`.
    pub(crate) fn raw_div_pi_pow(&self, a: &[u64], t: usize) -> Vec<u64> {
        let (a_exp, b) = (t / self.e, t % self.e);
        let pa = self.p.pow(a_exp as u32);
        let mut r: Vec<u64> = a
            .iter()
            .map(|&x| {
                debug_assert_eq!(x % pa, 0);
                x / pa
            })
            .collect();
        for _ in 0..a_exp {
            r = self.raw_mul(&r, &self.eta_inv);
        }
        if b > 0 {
            r = self.raw_mul_pi_pow(&r, self.e - b);
            r = r
                .iter()
                .map(|&x| {
                    debug_assert_eq!(x % self.p, 0);
                    x / self.p
                })
                .collect();
            r = self.raw_mul(&r, &self.eta_inv);
        }
        r
    }

    /// Inverse of a stored unit.
    pub(crate) fn raw_unit_inv(&self, a: &[u64]) -> Vec<u64> {
        let f = self.f;
        let res: Vec<u64> = a[..f].iter().map(|&x| x % self.p).collect();
        let inv = self.residue.inv_c(&res).expect("unit residue");
        let mut y = self.raw_zero();
        y[..f].copy_from_slice(&inv);
        let mut two = self.raw_zero();
        two[0] = 2 % self.modulus;
        let mut prec = 1i64;
        let target = self.e as i64 * self.m_exp as i64;
        while prec < target {
            let ay = self.raw_mul(a, &y);
            y = self.raw_mul(&y, &self.raw_sub(&two, &ay));
            prec *= 2;
        }
        y
    }

    /// Zeroes coordinates beyond absolute precision `prec` (π-adic).
    pub(crate) fn raw_truncate(&self, a: &mut [u64], prec: i64) {
        for i in 0..self.e {
            let need = prec - i as i64;
            let digits = if need <= 0 { 0 } else { (need + self.e as i64 - 1) / self.e as i64 };
            if digits >= self.m_exp as i64 {
                continue;
            }
            let md = self.p.pow(digits as u32);
            for j in 0..self.f {
                a[i * self.f + j] %= md;
            }
        }
    }

    pub(crate) fn raw_pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut r = self.raw_one();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.raw_mul(&r, &b);
            }
            b = self.raw_mul(&b, &b);
            e >>= 1;
        }
        r
    }

    pub(crate) fn raw_from_oe(&self, c: &[u64]) -> Vec<u64> {
        let mut v = self.raw_zero();
        v[..self.f].copy_from_slice(c);
        v
    }

    pub(crate) fn raw_from_int(&self, n: i128) -> Vec<u64> {
        let mut v = self.raw_zero();
        v[0] = reduce_i128(n, self.modulus);
        v
    }

    // ---------- element constructors ----------

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement::zero_with_prec(self, self.prec)
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        FieldElement::from_raw(self, self.raw_one(), 0, self.prec)
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElement {
        let raw = self.raw_from_int(n as i128);
        let v = self.raw_val(&raw).unwrap_or(self.prec);
        FieldElement::from_raw(self, raw, 0, v + self.prec)
    }

    /// The Eisenstein root, the canonical uniformizer.
    pub fn uniformizer(self: &Arc<Self>) -> FieldElement {
        FieldElement::from_unit_parts(self, 1, self.raw_one(), self.prec)
    }

    /// The unramified generator omega.
    pub fn omega(self: &Arc<Self>) -> FieldElement {
        FieldElement::from_unit_parts(self, 0, self.raw_from_oe(&self.oe_omega()), self.prec)
    }

    /// An element from integral coordinates (index `i*f + j` for `omega^j pi^i`),
    /// known to absolute precision `prec_abs`.
    pub fn from_coords(self: &Arc<Self>, coords: &[i64], prec_abs: i64) -> FieldElement {
        assert_eq!(coords.len(), self.raw_len());
        let raw: Vec<u64> = coords.iter().map(|&c| reduce_i128(c as i128, self.modulus)).collect();
        FieldElement::from_raw(self, raw, 0, prec_abs)
    }

    /// Lift of a residue-field element with coordinates in `[0, p)`.
    pub fn lift_residue(self: &Arc<Self>, r: &FFElem) -> FieldElement {
        self.from_oe_exact(r.coords())
    }

    pub fn p_element(self: &Arc<Self>) -> FieldElement {
        self.from_int(self.p as i64)
    }

    /// An exact element of O_E given by coordinates over omega.
    pub(crate) fn from_oe_exact(self: &Arc<Self>, c: &[u64]) -> FieldElement {
        let raw = self.raw_from_oe(c);
        let v = self.raw_val(&raw).unwrap_or(self.prec);
        FieldElement::from_raw(self, raw, 0, v + self.prec)
    }
}

/// Teichmüller representative of a nonzero residue.
pub fn lf_teichmueller(r: &FFElem, field: &Arc<LocalField>) -> Result<FieldElement> {
    if r.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if r.field().as_ref() != field.residue.as_ref() {
        return Err(Error::ParentMismatch);
    }
    let t = field.oe_teichmueller(r.coords());
    Ok(FieldElement::from_unit_parts(field, 0, field.raw_from_oe(&t), field.prec))
}

/// Valuation of a nonzero element.
pub fn lf_valuation(a: &FieldElement) -> Result<i64> {
    a.valuation()
}

#[cfg(test)]
mod tests;
