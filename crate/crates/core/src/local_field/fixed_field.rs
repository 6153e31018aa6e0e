//! Fixed fields of automorphism subgroups, as subspaces of `L`.

use std::sync::Arc;

use super::{FieldElement, LocalField};
use crate::error::{Error, Result};
use crate::galois::GaloisGroup;
use crate::linalg::{snf_local, LocalRing, Track};

/// The fixed field `K = L^H` inside `L`.
#[derive(Clone, Debug)]
pub struct SubfieldData {
    /// indices of `H` in the ambient group
    pub members: Vec<usize>,
    /// a `Z_p`-basis of the integers of `K`
    pub basis: Vec<FieldElement>,
    /// an element of `K` of minimal positive valuation
    pub pi_k: FieldElement,
    /// ramification and inertia degrees of `L/K`
    pub e_rel: usize,
    pub f_rel: usize,
    /// ramification and inertia degrees of `K/Q_p`
    pub e_k: usize,
    pub f_k: usize,
}

impl SubfieldData {
    pub fn degree(&self) -> usize {
        self.e_k * self.f_k
    }
}

fn basis_of(l: &Arc<LocalField>) -> Vec<FieldElement> {
    let mut out = Vec::with_capacity(l.degree());
    let pi = l.uniformizer();
    let w = l.omega();
    for i in 0..l.e() {
        for j in 0..l.f() {
            out.push(w.pow(j as i64).unwrap().mul(&pi.pow(i as i64).unwrap()).unwrap());
        }
    }
    out
}

/// Fixed field of the subgroup `members` of `group` (which must contain the
/// identity), computed as the joint kernel of `sigma - id` on integral
/// coordinates.
pub fn lf_fixed_field(group: &GaloisGroup, members: &[usize]) -> Result<SubfieldData> {
    if !group.is_subgroup(members) {
        return Err(Error::InvalidInput("not a subgroup".into()));
    }
    let l = group.field().clone();
    let n = l.degree();
    let e_rel = members.iter().filter(|&&i| group.element(i).frob_power() == 0).count();
    let f_rel = members.len() / e_rel;
    let (e_k, f_k) = (l.e() / e_rel, l.f() / f_rel);
    let r_expected = n / members.len();
    let prec_p = (l.precision() / l.e() as i64) as u32;
    let ring = LocalRing::new(l.p(), prec_p);
    let basis = basis_of(&l);
    // rows: for each sigma, coordinates of (sigma - id)(basis_c) as columns c
    let mut mat: Vec<Vec<u64>> = Vec::new();
    for &s in members {
        if s == group.identity() {
            continue;
        }
        let imgs: Vec<Vec<u64>> = basis
            .iter()
            .map(|b| group.apply(s, b)?.sub(b)?.integral_coords())
            .collect::<Result<_>>()?;
        for row in 0..n {
            mat.push((0..n).map(|c| imgs[c][row] % ring.modulus()).collect());
        }
    }
    let kernel: Vec<Vec<u64>> = if mat.is_empty() {
        (0..n).map(|c| (0..n).map(|r| u64::from(r == c)).collect()).collect()
    } else {
        let snf = snf_local(&ring, &mat, n, Track::Q);
        let q = snf.q.expect("tracked");
        let zero = snf.diag.iter().filter(|&&c| c == ring.exp()).count() + n.saturating_sub(snf.diag.len());
        let ambiguous = snf.diag.iter().any(|&c| c > prec_p / 2 && c < ring.exp());
        if zero != r_expected || ambiguous {
            return Err(Error::PrecisionExhausted(format!(
                "fixed space has rank {zero} at working precision, expected {r_expected}"
            )));
        }
        (0..n).filter(|&c| c >= snf.diag.len() || snf.diag[c] == ring.exp()).map(|c| (0..n).map(|r| q[r][c]).collect()).collect()
    };
    let prec_abs = l.e() as i64 * prec_p as i64;
    let elems: Vec<FieldElement> = kernel
        .iter()
        .map(|v| l.from_coords(&v.iter().map(|&x| x as i64).collect::<Vec<_>>(), prec_abs))
        .collect();
    let pi_k = if e_rel == l.e() {
        l.p_element()
    } else {
        // O_K / p O_K already detects valuation e_rel < v(p)
        let r = elems.len();
        let p = l.p() as usize;
        let mut best: Option<FieldElement> = None;
        for code in 1..p.pow(r as u32) {
            let mut c = code;
            let mut x = l.zero();
            for b in &elems {
                x = x.add(&b.scale((c % p) as i64))?;
                c /= p;
            }
            if !x.is_zero() && x.valuation()? == e_rel as i64 {
                best = Some(x);
                break;
            }
        }
        best.ok_or_else(|| Error::PrecisionExhausted("no uniformizer found in the fixed field".into()))?
    };
    Ok(SubfieldData { members: members.to_vec(), basis: elems, pi_k, e_rel, f_rel, e_k, f_k })
}
