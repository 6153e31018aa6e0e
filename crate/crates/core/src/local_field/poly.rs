//! Polynomials over a tower, Newton lifting and root enumeration.

use std::sync::Arc;

use super::{FieldElement, LocalField};
use crate::error::{Error, Result};

/// Horner evaluation; coefficients lowest degree first.
pub fn poly_eval(coeffs: &[FieldElement], x: &FieldElement) -> Result<FieldElement> {
    let mut acc = x.field().zero();
    let mut first = true;
    for c in coeffs.iter().rev() {
        acc = if first { c.clone() } else { acc.mul(x)?.add(c)? };
        first = false;
    }
    Ok(acc)
}

pub fn poly_derivative(coeffs: &[FieldElement]) -> Vec<FieldElement> {
    coeffs.iter().enumerate().skip(1).map(|(i, c)| c.scale(i as i64)).collect()
}

fn val_or(x: &FieldElement) -> i64 {
    if x.is_zero() {
        i64::MAX / 4
    } else {
        x.valuation_or_prec()
    }
}

/// Newton iteration from `x0` to a root of `g`, assuming the Hensel condition
/// `v(g(x0)) > 2 v(g'(x0))`.
///
/// The result carries precision `T - v(g'(root))` where `T` is the precision
/// to which `g(root)` is known to vanish.
pub fn lf_hensel_root(g: &[FieldElement], x0: &FieldElement) -> Result<FieldElement> {
    let dg = poly_derivative(g);
    let g0 = poly_eval(g, x0)?;
    let d0 = poly_eval(&dg, x0)?;
    if d0.is_zero() {
        return Err(Error::HenselFails("derivative vanishes at the starting point".into()));
    }
    let vd = d0.valuation()?;
    if !g0.is_zero() && val_or(&g0) <= 2 * vd {
        return Err(Error::HenselFails(format!(
            "v(g(x0)) = {} is not larger than 2 v(g'(x0)) = {}",
            val_or(&g0),
            2 * vd
        )));
    }
    let mut x = x0.exactify();
    let mut last = val_or(&g0);
    for _ in 0..80 {
        let gx = poly_eval(g, &x)?;
        if gx.is_zero() {
            break;
        }
        let v = gx.valuation()?;
        let dx = poly_eval(&dg, &x)?;
        if dx.valuation()? != vd {
            return Err(Error::HenselFails("derivative valuation changed".into()));
        }
        x = x.sub(&gx.div(&dx)?)?.exactify();
        // quadratic convergence: the defect must strictly improve
        let next = val_or(&poly_eval(g, &x)?);
        if next <= last.min(v) {
            return Err(Error::HenselFails("Newton iteration stalled".into()));
        }
        last = next;
    }
    let gx = poly_eval(g, &x)?;
    if !gx.is_zero() {
        return Err(Error::HenselFails("no convergence within the iteration budget".into()));
    }
    Ok(x.truncate_abs(gx.prec_abs() - vd))
}

/// All roots in the field of a polynomial whose roots (in an algebraic
/// closure) all have valuation at least one, by a digit-by-digit search
/// followed by Newton lifting.
///
/// A candidate `y` fixes the digits below `pi^(m+1)`; it is kept only while
/// `v(g(y)) >= m + deg`, which holds whenever its disc contains a root. Once a
/// root `a` is lifted, discs inside `{x : v(x - a) > v(g'(a))}` are dropped
/// since that disc holds no other root. The search stops once `deg` roots
/// are known.
pub fn roots_in_field(g: &[FieldElement]) -> Result<Vec<FieldElement>> {
    const FRONTIER_LIMIT: usize = 200_000;
    let field: Arc<LocalField> = g[0].field().clone();
    let deg = g.len() as i64 - 1;
    let dg = poly_derivative(g);
    let pi = field.uniformizer();
    let digits: Vec<FieldElement> =
        field.residue_field().elements().map(|r| field.lift_residue(&r)).collect();
    let mut roots: Vec<(FieldElement, i64)> = Vec::new();
    let mut frontier = vec![field.zero()];
    for m in 1..field.precision() {
        let pim = pi.pow(m)?;
        let mut next = Vec::new();
        for x in &frontier {
            for r in &digits {
                let y = x.add(&r.mul(&pim)?)?.exactify();
                let inside = |roots: &[(FieldElement, i64)]| {
                    roots.iter().any(|(a, vd)| m >= *vd && val_or(&a.sub(&y).unwrap()) > *vd)
                };
                if inside(&roots) {
                    continue;
                }
                let gy = poly_eval(g, &y)?;
                let vg = val_or(&gy);
                if vg < m + deg {
                    continue;
                }
                let dy = poly_eval(&dg, &y)?;
                if !dy.is_zero() && vg > 2 * dy.valuation()? {
                    let root = lf_hensel_root(g, &y)?;
                    if !roots.iter().any(|(a, _)| a.eq_within(&root)) {
                        let vd = poly_eval(&dg, &root)?.valuation()?;
                        roots.push((root, vd));
                    }
                    if inside(&roots) {
                        continue;
                    }
                }
                next.push(y);
            }
        }
        if next.is_empty() || roots.len() as i64 == deg {
            return Ok(roots.into_iter().map(|(a, _)| a).collect());
        }
        if next.len() > FRONTIER_LIMIT {
            return Err(Error::HenselFails(format!("root search frontier exceeded {FRONTIER_LIMIT}")));
        }
        frontier = next;
    }
    Err(Error::PrecisionExhausted("root search did not separate the roots".into()))
}
