//! Unramified base change `F = L * Q_{p^{f e'}}` and the embedding `L -> F`.

use std::sync::Arc;

use super::{FieldElement, LocalField};
use crate::arith::{add_mod, inv_mod, mul_mod, sub_mod};
use crate::error::{Error, Result};
use crate::finite_field::FFq;

/// A valuation-preserving embedding of towers fixing the Eisenstein root:
/// `omega_L` goes to a root of its unramified polynomial and `pi_L` to `pi_F`.
#[derive(Clone)]
pub struct Embedding {
    source: Arc<LocalField>,
    target: Arc<LocalField>,
    /// images of omega_L^j in O_{E_F}
    omega_pows: Vec<Vec<u64>>,
    /// rows of the image matrix used by the left inverse, and that inverse
    rows: Vec<usize>,
    left_inv: Vec<Vec<u64>>,
}

impl std::fmt::Debug for Embedding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Embedding({:?} -> {:?})", self.source, self.target)
    }
}

impl Embedding {
    pub fn identity(field: &Arc<LocalField>) -> Embedding {
        let f = field.f();
        let omega_pows = (0..f)
            .map(|j| {
                let mut v = vec![0u64; f];
                v[j] = 1;
                v
            })
            .collect();
        let left_inv = (0..f)
            .map(|j| {
                let mut v = vec![0u64; f];
                v[j] = 1;
                v
            })
            .collect();
        Embedding {
            source: field.clone(),
            target: field.clone(),
            omega_pows,
            rows: (0..f).collect(),
            left_inv,
        }
    }

    pub fn source(&self) -> &Arc<LocalField> {
        &self.source
    }

    pub fn target(&self) -> &Arc<LocalField> {
        &self.target
    }

    fn map_oe(&self, c: &[u64]) -> Vec<u64> {
        let t = &self.target;
        let m = t.storage_modulus();
        let mut out = vec![0u64; t.f()];
        for (j, &cj) in c.iter().enumerate() {
            if cj == 0 {
                continue;
            }
            for (o, &w) in out.iter_mut().zip(&self.omega_pows[j]) {
                *o = add_mod(*o, mul_mod(cj, w, m), m);
            }
        }
        out
    }

    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement> {
        if !Arc::ptr_eq(x.field(), &self.source) && !x.field().same_tower(&self.source) {
            return Err(Error::ParentMismatch);
        }
        if x.is_zero() {
            return Ok(FieldElement::zero_with_prec(&self.target, x.prec_abs()));
        }
        let (val, rel, unit) = x.parts();
        let (fs, ft) = (self.source.f(), self.target.f());
        let mut out = self.target.raw_zero();
        for i in 0..self.source.e() {
            let img = self.map_oe(&unit[i * fs..(i + 1) * fs]);
            out[i * ft..(i + 1) * ft].copy_from_slice(&img);
        }
        Ok(FieldElement::from_unit_parts(&self.target, val, out, rel))
    }

    /// The preimage of `y`, or `None` when `y` is not in the image to the
    /// precision it claims.
    pub fn pullback(&self, y: &FieldElement) -> Result<Option<FieldElement>> {
        if !y.field().same_tower(&self.target) {
            return Err(Error::ParentMismatch);
        }
        if y.is_zero() {
            return Ok(Some(FieldElement::zero_with_prec(&self.source, y.prec_abs())));
        }
        let (val, rel, unit) = y.parts();
        let (fs, ft) = (self.source.f(), self.target.f());
        let m = self.source.storage_modulus();
        let mut out = self.source.raw_zero();
        for i in 0..self.source.e() {
            let c = &unit[i * ft..(i + 1) * ft];
            for (r, row) in self.left_inv.iter().enumerate() {
                let mut acc = 0u64;
                for (k, &ri) in self.rows.iter().enumerate() {
                    acc = add_mod(acc, mul_mod(row[k], c[ri], m), m);
                }
                out[i * fs + r] = acc;
            }
        }
        if out[..fs].iter().all(|&c| c % self.source.p() == 0) {
            return Ok(None);
        }
        let x = FieldElement::from_unit_parts(&self.source, val, out, rel);
        if self.apply(&x)?.eq_within(y) {
            Ok(Some(x))
        } else {
            Ok(None)
        }
    }

    /// The image of the unramified generator of the source.
    pub fn omega_image(&self) -> FieldElement {
        self.apply(&self.source.omega()).expect("source element")
    }
}

/// Inverse of a square matrix over `Z/m`, `m` a power of `p`, when it is
/// invertible modulo `p`.
fn invert_mod(mat: &[Vec<u64>], p: u64, m: u64) -> Option<Vec<Vec<u64>>> {
    let n = mat.len();
    let mut a: Vec<Vec<u64>> = mat
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| u64::from(i == j)));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] % p != 0)?;
        a.swap(col, piv);
        let inv = inv_mod(a[col][col], m)?;
        for x in a[col].iter_mut() {
            *x = mul_mod(*x, inv, m);
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let factor = a[r][col];
                let pivot_row = a[col].clone();
                for (x, &y) in a[r].iter_mut().zip(&pivot_row) {
                    *x = sub_mod(*x, mul_mod(factor, y, m), m);
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Rows of a `rows x cols` matrix over `Z/m` that are independent modulo `p`.
fn independent_rows(mat: &[Vec<u64>], p: u64) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    for (i, row) in mat.iter().enumerate() {
        let mut v: Vec<u64> = row.iter().map(|&x| x % p).collect();
        for (c, b) in &basis {
            if v[*c] != 0 {
                let factor = v[*c];
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = (*x + p - factor * y % p) % p;
                }
            }
        }
        if let Some(c) = v.iter().position(|&x| x != 0) {
            let inv = inv_mod(v[c], p).expect("prime field");
            for x in v.iter_mut() {
                *x = *x * inv % p;
            }
            basis.push((c, v));
            chosen.push(i);
        }
    }
    chosen
}

/// The tower `F` with unramified degree `f_L * e_rel` and the same Eisenstein
/// polynomial, together with the embedding of `L`. For `e_rel = 1` this is
/// `L` with the identity.
pub fn lf_compositum_f(l: &Arc<LocalField>, e_rel: usize) -> Result<(Arc<LocalField>, Embedding)> {
    if e_rel == 0 {
        return Err(Error::InvalidInput("relative degree must be positive".into()));
    }
    if e_rel == 1 {
        return Ok((l.clone(), Embedding::identity(l)));
    }
    let p = l.p();
    let (fl, e) = (l.f(), l.e());
    let ff = fl * e_rel;
    // scratch unramified field sharing the storage modulus of F
    let scratch = LocalField::new(p, ff, &[vec![-(p as i64)], vec![1]], l.storage_exponent() as i64 - 2)?;
    debug_assert_eq!(scratch.storage_modulus(), l.storage_modulus());
    let m = scratch.storage_modulus();
    let rf: Arc<FFq> = scratch.residue_field().clone();
    let g_res = l.residue_field().modulus().to_vec();
    let root = rf
        .elements()
        .find(|x| {
            let mut acc = rf.zero_c();
            for &c in g_res.iter().rev() {
                acc = rf.mul_c(&acc, x.coords());
                acc = rf.add_c(&acc, &rf.scale_c(&rf.one_c(), c));
            }
            acc.iter().all(|&c| c == 0)
        })
        .ok_or_else(|| Error::Internal("residue polynomial has no root in the larger field".into()))?;
    // Hensel lift of the root of the unramified polynomial of L
    let g = l.unram_poly().to_vec();
    let dg: Vec<u64> = (1..g.len()).map(|i| mul_mod(g[i], i as u64, m)).collect();
    let mut x = root.coords().to_vec();
    let mut prec = 1u32;
    while prec <= scratch.storage_exponent() {
        let gx = scratch.oe_eval_poly(&g, &x);
        let dx = scratch.oe_eval_poly(&dg, &x);
        x = scratch.oe_sub(&x, &scratch.oe_mul(&gx, &scratch.oe_unit_inv(&dx)));
        prec *= 2;
    }
    if scratch.oe_eval_poly(&g, &x).iter().any(|&c| c != 0) {
        return Err(Error::Internal("Hensel lift of the unramified generator failed".into()));
    }
    let mut omega_pows = Vec::with_capacity(fl);
    let mut pw = scratch.oe_one();
    for _ in 0..fl {
        omega_pows.push(pw.clone());
        pw = scratch.oe_mul(&pw, &x);
    }
    let signed = |c: u64| -> i64 {
        if c > m / 2 {
            c as i64 - m as i64
        } else {
            c as i64
        }
    };
    let mut eis: Vec<Vec<i64>> = Vec::with_capacity(e + 1);
    for a in l.eis_coeffs() {
        let mut img = vec![0u64; ff];
        for (j, &c) in a.iter().enumerate() {
            for (o, &w) in img.iter_mut().zip(&omega_pows[j]) {
                *o = add_mod(*o, mul_mod(c, w, m), m);
            }
        }
        eis.push(img.into_iter().map(signed).collect());
    }
    let mut lead = vec![0i64; ff];
    lead[0] = 1;
    eis.push(lead);
    let fld = LocalField::new(p, ff, &eis, l.precision())?;
    if fld.storage_modulus() != m {
        return Err(Error::Internal("storage modulus mismatch in compositum".into()));
    }
    // left inverse on the rows of the image matrix (ff x fl)
    let mat: Vec<Vec<u64>> = (0..ff).map(|r| (0..fl).map(|j| omega_pows[j][r]).collect()).collect();
    let rows = independent_rows(&mat, p);
    if rows.len() != fl {
        return Err(Error::Internal("embedding is not injective modulo p".into()));
    }
    let sub: Vec<Vec<u64>> = rows.iter().map(|&r| mat[r].clone()).collect();
    let left_inv = invert_mod(&sub, p, m).ok_or_else(|| Error::Internal("singular embedding block".into()))?;
    let emb = Embedding { source: l.clone(), target: fld.clone(), omega_pows, rows, left_inv };
    Ok((fld, emb))
}
