//! Automorphism groups of towers: root search for the twisted Eisenstein
//! polynomials, composition tables, and the lifts used over the compositum.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local_field::{poly_derivative, poly_eval, roots_in_field, Embedding, FieldElement, LocalField};

/// `omega -> Frobenius^frob_power(omega)`, `pi -> pi_image`.
#[derive(Clone)]
pub struct Automorphism {
    frob_power: usize,
    pi_image: FieldElement,
    pi_powers: Vec<Vec<u64>>,
}

impl std::fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Aut(frob^{}, pi -> {:?})", self.frob_power, self.pi_image)
    }
}

impl Automorphism {
    pub fn new(frob_power: usize, pi_image: FieldElement) -> Result<Automorphism> {
        let field = pi_image.field().clone();
        if pi_image.is_zero() || pi_image.valuation()? != 1 {
            return Err(Error::InvalidInput("image of pi must have valuation 1".into()));
        }
        let mut pi_powers = Vec::with_capacity(field.e());
        let mut pw = field.one();
        for _ in 0..field.e() {
            pi_powers.push(pw.integral_coords()?);
            pw = pw.mul(&pi_image)?;
        }
        Ok(Automorphism { frob_power: frob_power % field.f(), pi_image, pi_powers })
    }

    pub fn identity(field: &Arc<LocalField>) -> Automorphism {
        Automorphism::new(0, field.uniformizer()).expect("uniformizer")
    }

    pub fn field(&self) -> &Arc<LocalField> {
        self.pi_image.field()
    }

    pub fn frob_power(&self) -> usize {
        self.frob_power
    }

    pub fn pi_image(&self) -> &FieldElement {
        &self.pi_image
    }

    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement> {
        let f = self.field();
        if !Arc::ptr_eq(x.field(), f)
            && !(x.field().same_tower(f) && x.field().precision() == f.precision())
        {
            return Err(Error::ParentMismatch);
        }
        Ok(x.apply_tower_map(self.frob_power, &self.pi_powers, &self.pi_image))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        let s = (self.frob_power + other.frob_power) % self.field().f();
        Automorphism::new(s, self.apply(&other.pi_image)?)
    }

    /// Same Frobenius power and images of pi agreeing modulo `pi^prec`.
    pub fn agrees(&self, o: &Automorphism, prec: i64) -> bool {
        self.frob_power == o.frob_power
            && self.pi_image.sub(&o.pi_image).map(|d| d.valuation_or_prec() >= prec).unwrap_or(false)
    }
}

/// Serialized form of a group element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegendEntry {
    pub index: usize,
    pub frob_power: usize,
    pub pi_image_val: i64,
    pub pi_image_digits: Vec<u64>,
}

/// A finite group of automorphisms with its multiplication table; the
/// identity has index 0.
#[derive(Clone, Debug)]
pub struct GaloisGroup {
    field: Arc<LocalField>,
    elements: Vec<Automorphism>,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    separation: i64,
}

impl GaloisGroup {
    /// Builds the table of a list of automorphisms closed under composition;
    /// the identity must come first.
    pub fn from_elements(field: &Arc<LocalField>, elements: Vec<Automorphism>) -> Result<GaloisGroup> {
        let n = elements.len();
        if n == 0 || !elements[0].agrees(&Automorphism::identity(field), field.precision() / 2) {
            return Err(Error::Internal("identity must be the first element".into()));
        }
        let mut closest = 1i64;
        for a in 0..n {
            for b in a + 1..n {
                if elements[a].frob_power == elements[b].frob_power {
                    let d = elements[a].pi_image.sub(&elements[b].pi_image)?;
                    if d.is_zero() {
                        return Err(Error::PrecisionExhausted("two automorphisms are indistinguishable".into()));
                    }
                    closest = closest.max(d.valuation()?);
                }
            }
        }
        let separation = closest + 1;
        let mut g = GaloisGroup { field: field.clone(), elements, table: Vec::new(), inverse: Vec::new(), separation };
        let mut table = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let c = g.elements[a].compose(&g.elements[b])?;
                table[a][b] = g
                    .locate(&c)
                    .ok_or_else(|| Error::Internal(format!("composition of {a} and {b} not in the group")))?;
            }
        }
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == 0).ok_or_else(|| Error::Internal("missing inverse".into())))
            .collect::<Result<Vec<_>>>()?;
        g.table = table;
        g.inverse = inverse;
        Ok(g)
    }

    pub fn field(&self) -> &Arc<LocalField> {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Automorphism] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Automorphism {
        &self.elements[i]
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of `a ∘ b`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn mul_table(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Precision at which distinct elements are told apart.
    pub fn separation(&self) -> i64 {
        self.separation
    }

    pub fn locate(&self, a: &Automorphism) -> Option<usize> {
        let hits: Vec<usize> =
            (0..self.order()).filter(|&i| self.elements[i].agrees(a, self.separation)).collect();
        (hits.len() == 1).then(|| hits[0])
    }

    pub fn apply(&self, i: usize, x: &FieldElement) -> Result<FieldElement> {
        self.elements[i].apply(x)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Elements acting trivially on the residue field.
    pub fn inertia(&self) -> Vec<usize> {
        (0..self.order()).filter(|&i| self.elements[i].frob_power == 0).collect()
    }

    /// Whether `members` (containing 0) is closed under the group law.
    pub fn is_subgroup(&self, members: &[usize]) -> bool {
        members.contains(&0) && members.iter().all(|&a| members.iter().all(|&b| members.contains(&self.mul(a, b))))
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = vec![0usize];
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !members.contains(&y) {
                    members.push(y);
                    frontier.push(y);
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// Identity, inverses and associativity on all triples.
    pub fn check_axioms(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| self.mul(0, a) == a && self.mul(a, 0) == a && self.mul(a, self.inv(a)) == 0)
            && (0..n).all(|a| {
                (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))))
            })
    }

    pub fn legend(&self) -> Vec<LegendEntry> {
        self.elements
            .iter()
            .enumerate()
            .map(|(index, a)| LegendEntry {
                index,
                frob_power: a.frob_power,
                pi_image_val: a.pi_image.valuation_or_prec(),
                pi_image_digits: a.pi_image.unit_digits(),
            })
            .collect()
    }
}

/// Largest working precision whose storage modulus fits.
fn max_precision(field: &LocalField) -> i64 {
    let p = field.p() as u128;
    let e = field.e() as i64;
    let mut m = 1u32;
    while p.pow(m + 1) < (1u128 << 62) {
        m += 1;
    }
    (m as i64 - 2) * e
}

/// The Eisenstein polynomial with Frobenius^s applied to its coefficients.
fn twisted_eisenstein(field: &Arc<LocalField>, s: usize) -> Vec<FieldElement> {
    let mut g: Vec<FieldElement> =
        field.eis_coeffs().iter().map(|a| field.from_oe_exact(&field.oe_frob(a, s))).collect();
    g.push(field.one());
    g
}

/// All automorphisms of `L` over `Q_p`, identity first, then ordered by
/// Frobenius power and the digits of the image of pi.
pub fn compute_automorphisms(l: &Arc<LocalField>) -> Result<GaloisGroup> {
    let g0 = twisted_eisenstein(l, 0);
    let d = poly_eval(&poly_derivative(&g0), &l.uniformizer())?.valuation()?;
    let n = l.precision();
    let wanted = n + 2 * d + l.e() as i64 + 2;
    let work_prec = wanted.min(max_precision(l));
    if work_prec < n + d + 1 {
        return Err(Error::PrecisionTooSmall(format!(
            "automorphism search needs precision {} beyond the storage limit",
            n + d + 1
        )));
    }
    let hi = l.with_precision(work_prec)?;
    let mut auts: Vec<Automorphism> = Vec::new();
    for s in 0..l.f() {
        let g = twisted_eisenstein(&hi, s);
        for root in roots_in_field(&g)? {
            auts.push(Automorphism::new(s, root.reinterpret(l)?)?);
        }
    }
    let degree = l.degree();
    if auts.len() != degree {
        return Err(Error::NotGalois { found: auts.len(), degree });
    }
    let id = Automorphism::identity(l);
    let p = l.p();
    let levels = l.storage_exponent();
    // digits lowest first, so the order does not depend on the precision
    let key = |a: &Automorphism| -> (bool, usize, Vec<u64>) {
        let coords = a.pi_image.integral_coords().unwrap_or_default();
        let mut digits = Vec::with_capacity(coords.len() * levels as usize);
        let mut rest = coords;
        for _ in 0..levels {
            for c in rest.iter_mut() {
                digits.push(*c % p);
                *c /= p;
            }
        }
        (!a.agrees(&id, n), a.frob_power, digits)
    };
    auts.sort_by_key(key);
    GaloisGroup::from_elements(l, auts)
}

/// The index `j` in `[0, d)` with `sigma` acting on the degree-`d`
/// unramified subextension over the base as `phi_K^{-j}`, where `phi_K` is
/// Frobenius^`f_base`.
pub fn restrict_unram(sigma: &Automorphism, f_base: usize, d: usize) -> usize {
    let f = sigma.field().f();
    let s = sigma.frob_power() % f;
    debug_assert_eq!(s % f_base, 0);
    let t = (s / f_base) % d;
    (d - t) % d
}

/// The automorphism of `F` restricting to `sigma` on `L` with Frobenius
/// power `frob_power_f` (which must be congruent to that of `sigma` modulo
/// the inertia degree of `L`).
pub fn lift_sigma_hat(sigma: &Automorphism, iota: &Embedding, frob_power_f: usize) -> Result<Automorphism> {
    let fl = iota.source().f();
    if frob_power_f % fl != sigma.frob_power() % fl {
        return Err(Error::Internal("lift has the wrong restriction to the unramified part of L".into()));
    }
    Automorphism::new(frob_power_f % iota.target().f(), iota.apply(sigma.pi_image())?)
}

/// `Gal(F/Q_p)` for the compositum `F` of `L`, built from `Gal(L/Q_p)`
/// without searching, and the projection onto `Gal(L/Q_p)`.
pub fn compositum_group(gl: &GaloisGroup, iota: &Embedding) -> Result<(GaloisGroup, Vec<usize>)> {
    let f = iota.target();
    let fl = gl.field().f();
    let e_rel = f.f() / fl;
    let mut pairs: Vec<(Automorphism, usize)> = Vec::with_capacity(gl.order() * e_rel);
    for (i, sigma) in gl.elements().iter().enumerate() {
        for t in 0..e_rel {
            let s = sigma.frob_power() + t * fl;
            pairs.push((lift_sigma_hat(sigma, iota, s)?, i));
        }
    }
    let (auts, proj): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    Ok((GaloisGroup::from_elements(f, auts)?, proj))
}
