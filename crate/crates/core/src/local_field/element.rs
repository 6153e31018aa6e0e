use std::fmt;
use std::sync::Arc;

use super::LocalField;
use crate::error::{Error, Result};
use crate::finite_field::FFElem;

/// An element `pi^val * unit` with the unit known modulo `pi^rel`.
///
/// `rel == 0` encodes an element indistinguishable from zero, known modulo
/// `pi^val`.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<LocalField>,
    val: i64,
    rel: i64,
    unit: Vec<u64>,
}

/// Operation selector for [`FieldElement::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LfOp {
    Add,
    Sub,
    Mul,
    Inv,
    Div,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rel == 0 {
            write!(f, "O(pi^{})", self.val)
        } else {
            write!(f, "pi^{} * {:?} + O(pi^{})", self.val, self.unit, self.prec_abs())
        }
    }
}

impl FieldElement {
    pub(crate) fn zero_with_prec(field: &Arc<LocalField>, prec: i64) -> FieldElement {
        FieldElement { field: field.clone(), val: prec, rel: 0, unit: field.raw_zero() }
    }

    /// `pi^shift * raw`, with `raw` integral and the result known modulo
    /// `pi^prec_abs`.
    pub(crate) fn from_raw(field: &Arc<LocalField>, raw: Vec<u64>, shift: i64, prec_abs: i64) -> FieldElement {
        let mut raw = raw;
        field.raw_truncate(&mut raw, prec_abs - shift);
        match field.raw_val(&raw) {
            Some(v) if shift + v < prec_abs => {
                let unit = if v == 0 { raw } else { field.raw_div_pi_pow(&raw, v as usize) };
                let val = shift + v;
                FieldElement::from_unit_parts(field, val, unit, prec_abs - val)
            }
            _ => FieldElement::zero_with_prec(field, prec_abs),
        }
    }

    /// `pi^val * unit` with the unit known to relative precision `rel`.
    pub(crate) fn from_unit_parts(field: &Arc<LocalField>, val: i64, mut unit: Vec<u64>, rel: i64) -> FieldElement {
        let rel = rel.min(field.precision());
        if rel <= 0 {
            return FieldElement::zero_with_prec(field, val + rel.max(0));
        }
        field.raw_truncate(&mut unit, rel);
        debug_assert!(unit[..field.f()].iter().any(|&c| c % field.p() != 0), "unit part");
        FieldElement { field: field.clone(), val, rel, unit }
    }

    pub fn field(&self) -> &Arc<LocalField> {
        &self.field
    }

    /// Whether the element is zero within its precision.
    pub fn is_zero(&self) -> bool {
        self.rel == 0
    }

    /// Absolute precision: the element is known modulo `pi^prec_abs`.
    pub fn prec_abs(&self) -> i64 {
        self.val + self.rel
    }

    /// Relative precision (0 for zero).
    pub fn prec_rel(&self) -> i64 {
        self.rel
    }

    pub fn valuation(&self) -> Result<i64> {
        if self.rel == 0 {
            Err(Error::IndistinguishableFromZero)
        } else {
            Ok(self.val)
        }
    }

    /// Valuation, or the absolute precision for zero.
    pub fn valuation_or_prec(&self) -> i64 {
        self.val
    }

    /// Unit part coordinates (index `i*f + j`); zero for zero.
    pub fn unit_coords(&self) -> &[u64] {
        &self.unit
    }

    /// Unit part coordinates as stored, truncated to the relative precision.
    pub fn unit_digits(&self) -> Vec<u64> {
        self.unit.clone()
    }

    /// Coordinates of the element when integral (`val >= 0`).
    pub fn integral_coords(&self) -> Result<Vec<u64>> {
        if self.rel == 0 {
            return Ok(self.field.raw_zero());
        }
        if self.val < 0 {
            return Err(Error::InvalidInput("element is not integral".into()));
        }
        Ok(self.field.raw_mul_pi_pow(&self.unit, self.val as usize))
    }

    pub fn same_field(&self, o: &FieldElement) -> Result<()> {
        if Arc::ptr_eq(&self.field, &o.field) || *self.field == *o.field {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    /// The residue of a unit (or of an integral element in general).
    pub fn residue(&self) -> Result<FFElem> {
        let rf = self.field.residue_field();
        if self.rel == 0 {
            if self.val >= 1 {
                return Ok(rf.zero());
            }
            return Err(Error::IndistinguishableFromZero);
        }
        if self.val < 0 {
            return Err(Error::InvalidInput("residue of a non-integral element".into()));
        }
        if self.val > 0 {
            return Ok(rf.zero());
        }
        let p = self.field.p();
        Ok(rf.elem(self.unit[..self.field.f()].iter().map(|&c| c % p).collect()))
    }

    /// Re-expresses the element in another precision copy of the same tower.
    pub fn reinterpret(&self, target: &Arc<LocalField>) -> Result<FieldElement> {
        if !self.field.same_tower(target) {
            return Err(Error::ParentMismatch);
        }
        let m = target.storage_modulus();
        if self.rel == 0 {
            return Ok(FieldElement::zero_with_prec(target, self.val));
        }
        let unit: Vec<u64> = self.unit.iter().map(|&c| c % m).collect();
        Ok(FieldElement::from_unit_parts(target, self.val, unit, self.rel))
    }

    /// Same value with precision claim raised to the full working precision
    /// (trailing digits taken as zero). Used by self-correcting iterations.
    pub fn exactify(&self) -> FieldElement {
        if self.rel == 0 {
            return FieldElement::zero_with_prec(&self.field, self.val.max(self.field.precision()));
        }
        FieldElement { rel: self.field.precision(), ..self.clone() }
    }

    /// Lowers the absolute precision to at most `prec`.
    pub fn truncate_abs(&self, prec: i64) -> FieldElement {
        if prec >= self.prec_abs() {
            return self.clone();
        }
        if self.rel == 0 || prec <= self.val {
            return FieldElement::zero_with_prec(&self.field, prec.min(self.val));
        }
        FieldElement::from_unit_parts(&self.field, self.val, self.unit.clone(), prec - self.val)
    }

    pub fn add(&self, o: &FieldElement) -> Result<FieldElement> {
        self.same_field(o)?;
        let prec = self.prec_abs().min(o.prec_abs());
        let lo = match (self.rel == 0, o.rel == 0) {
            (true, true) => return Ok(FieldElement::zero_with_prec(&self.field, prec)),
            (true, false) => o.val,
            (false, true) => self.val,
            (false, false) => self.val.min(o.val),
        };
        if lo >= prec {
            return Ok(FieldElement::zero_with_prec(&self.field, prec));
        }
        let field = &self.field;
        let mut acc = field.raw_zero();
        for x in [self, o] {
            if x.rel == 0 {
                continue;
            }
            let k = x.val - lo;
            if x.val >= prec {
                continue;
            }
            let term = field.raw_mul_pi_pow(&x.unit, k as usize);
            acc = field.raw_add(&acc, &term);
        }
        Ok(FieldElement::from_raw(field, acc, lo, prec))
    }

    pub fn neg(&self) -> FieldElement {
        if self.rel == 0 {
            return self.clone();
        }
        FieldElement::from_unit_parts(&self.field, self.val, self.field.raw_neg(&self.unit), self.rel)
    }

    pub fn sub(&self, o: &FieldElement) -> Result<FieldElement> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FieldElement) -> Result<FieldElement> {
        self.same_field(o)?;
        match (self.rel == 0, o.rel == 0) {
            (true, true) => Ok(FieldElement::zero_with_prec(&self.field, self.val + o.val)),
            (true, false) => Ok(FieldElement::zero_with_prec(&self.field, self.val + o.val)),
            (false, true) => Ok(FieldElement::zero_with_prec(&self.field, self.val + o.val)),
            (false, false) => {
                let unit = self.field.raw_mul(&self.unit, &o.unit);
                Ok(FieldElement::from_unit_parts(&self.field, self.val + o.val, unit, self.rel.min(o.rel)))
            }
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.rel == 0 {
            return Err(Error::DivisionByZero);
        }
        let unit = self.field.raw_unit_inv(&self.unit);
        Ok(FieldElement::from_unit_parts(&self.field, -self.val, unit, self.rel))
    }

    pub fn div(&self, o: &FieldElement) -> Result<FieldElement> {
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        if self.rel == 0 {
            if e == 0 {
                return Ok(self.field.one());
            }
            return Ok(FieldElement::zero_with_prec(&self.field, self.val.saturating_mul(e)));
        }
        let unit = self.field.raw_pow(&self.unit, e as u64);
        Ok(FieldElement::from_unit_parts(&self.field, self.val * e, unit, self.rel))
    }

    /// Multiplication by `pi^k` (k may be negative).
    pub fn shift(&self, k: i64) -> FieldElement {
        FieldElement { val: self.val + k, ..self.clone() }
    }

    /// Integer scalar multiple.
    pub fn scale(&self, n: i64) -> FieldElement {
        self.mul(&self.field.from_int(n)).expect("same field")
    }

    pub fn arith(&self, o: &FieldElement, op: LfOp) -> Result<FieldElement> {
        let r = match op {
            LfOp::Add => self.add(o)?,
            LfOp::Sub => self.sub(o)?,
            LfOp::Mul => self.mul(o)?,
            LfOp::Inv => self.inv()?,
            LfOp::Div => self.div(o)?,
        };
        if r.rel == 0 && r.val <= 0 && !(self.rel == 0 || o.rel == 0) && op != LfOp::Add && op != LfOp::Sub {
            return Err(Error::PrecisionExhausted("result has no significant digits".into()));
        }
        Ok(r)
    }

    /// Whether `self - o` vanishes modulo `pi^prec`.
    pub fn eq_mod(&self, o: &FieldElement, prec: i64) -> Result<bool> {
        let d = self.sub(o)?;
        if d.prec_abs() < prec && d.rel == 0 {
            return Err(Error::PrecisionExhausted(format!(
                "difference known to pi^{} only, {} requested",
                d.prec_abs(),
                prec
            )));
        }
        Ok(d.rel == 0 || d.val >= prec)
    }

    /// Whether the two elements agree to the precision both claim.
    pub fn eq_within(&self, o: &FieldElement) -> bool {
        self.sub(o).map(|d| d.rel == 0).unwrap_or(false)
    }

    /// Whether `self / o` is a unit congruent to 1 modulo `pi^level`.
    pub fn ratio_in_units(&self, o: &FieldElement, level: i64) -> Result<bool> {
        let r = self.div(o)?;
        if r.rel == 0 || r.val != 0 {
            return Ok(false);
        }
        let d = r.sub(&self.field.one())?;
        if d.rel == 0 {
            if d.val < level {
                return Err(Error::PrecisionExhausted(format!(
                    "ratio known to level {} only, {} requested",
                    d.val, level
                )));
            }
            return Ok(true);
        }
        Ok(d.val >= level)
    }

    /// Applies Frobenius^s to the O_E coefficients of the unit part and maps
    /// `pi` to `pi_image` (given as its powers `pi_image^0..pi_image^{e-1}`
    /// in unit/valuation form).
    pub(crate) fn apply_tower_map(&self, s: usize, pi_powers_raw: &[Vec<u64>], pi_image: &FieldElement) -> FieldElement {
        if self.rel == 0 {
            return self.clone();
        }
        let field = &self.field;
        let f = field.f();
        let mut acc = field.raw_zero();
        for i in 0..field.e() {
            let c = &self.unit[i * f..(i + 1) * f];
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let img = field.oe_frob(c, s);
            let term = field.raw_mul(&field.raw_from_oe(&img), &pi_powers_raw[i]);
            acc = field.raw_add(&acc, &term);
        }
        let rel = self.rel.min(pi_image.prec_rel());
        let unit_img = FieldElement::from_raw(field, acc, 0, rel);
        let pi_pow = pi_image.pow(self.val).expect("nonzero uniformizer");
        unit_img.mul(&pi_pow).expect("same field")
    }

    pub(crate) fn parts(&self) -> (i64, i64, &[u64]) {
        (self.val, self.rel, &self.unit)
    }

    /// Rebuilds an element from serialized parts.
    pub fn from_parts(field: &Arc<LocalField>, val: i64, unit: Vec<u64>, prec_abs: i64) -> Result<FieldElement> {
        if unit.len() != field.raw_len() {
            return Err(Error::InvalidInput("wrong coordinate count".into()));
        }
        if prec_abs <= val {
            return Ok(FieldElement::zero_with_prec(field, prec_abs));
        }
        let m = field.storage_modulus();
        let unit: Vec<u64> = unit.into_iter().map(|c| c % m).collect();
        if unit[..field.f()].iter().all(|&c| c % field.p() == 0) {
            return Err(Error::InvalidInput("unit part is not a unit".into()));
        }
        Ok(FieldElement::from_unit_parts(field, val, unit, prec_abs - val))
    }
}
