//! Linear-algebra cohomology of `G` acting on `L^x / U^(k)`.
//!
//! A module element has coordinates `(v, a)`: the valuation and the finite
//! part in `A = U / U^(k)`. An automorphism acts by
//! `sigma(v, a) = (v, A_sigma a + v c_sigma)` with `c_sigma = dlog(sigma(pi)/pi)`.
//! Cochains are stored as flat tables indexed by `sigma * n + tau`.

mod h2;
mod units;
mod verify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use h2::{h2_invariants, H2Class, H2Group};
pub use units::{Coords, UnitsQuotient};
pub use verify::{inflate, verify_cocycle_via_compositum, verify_restriction, verify_via_compositum, CompositumReport};

use crate::arith::{divisors, prime_factors, val_p};
use crate::error::{Error, Result};
use crate::galois::GaloisGroup;
use crate::linalg::{solve_local, LocalRing, Mat};

/// Limit on the unknowns of an oracle linear system.
pub const MAX_ORACLE_DIM: usize = 512;
/// Limit on the group order accepted by the oracle.
pub const MAX_ORACLE_GROUP: usize = 16;

/// Integer matrices of the group action on coordinates.
#[derive(Clone, Debug)]
pub struct ActionMatrices {
    moduli: Vec<u64>,
    /// `mats[s][r][c]`: coordinate `r` of `sigma_s(gen_c)`
    mats: Vec<Mat>,
    shifts: Vec<Vec<u64>>,
    table: Vec<Vec<usize>>,
}

impl ActionMatrices {
    pub fn build(uq: &UnitsQuotient, group: &GaloisGroup) -> Result<ActionMatrices> {
        let field = uq.field();
        if !group.field().same_tower(field) {
            return Err(Error::ParentMismatch);
        }
        let pi = field.uniformizer();
        let mut mats = Vec::with_capacity(group.order());
        let mut shifts = Vec::with_capacity(group.order());
        for s in 0..group.order() {
            let c = uq.dlog(&group.apply(s, &pi)?.div(&pi)?)?;
            shifts.push(c.a);
            let d = uq.moduli().len();
            let mut m = vec![vec![0u64; d]; d];
            for (col, g) in uq.generators().iter().enumerate() {
                let img = uq.dlog(&group.apply(s, g)?)?;
                if img.v != 0 {
                    return Err(Error::Internal("automorphism moved a unit off valuation zero".into()));
                }
                for (r, &x) in img.a.iter().enumerate() {
                    m[r][col] = x;
                }
            }
            mats.push(m);
        }
        Ok(ActionMatrices { moduli: uq.moduli().to_vec(), mats, shifts, table: group.mul_table().to_vec() })
    }

    pub fn order(&self) -> usize {
        self.mats.len()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    pub fn matrix(&self, s: usize) -> &Mat {
        &self.mats[s]
    }

    pub fn shift(&self, s: usize) -> &[u64] {
        &self.shifts[s]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn apply(&self, s: usize, x: &Coords) -> Coords {
        let m = &self.mats[s];
        let a = (0..self.dim())
            .map(|r| {
                let md = self.moduli[r] as i128;
                let mut acc: i128 = (x.v as i128 % md) * self.shifts[s][r] as i128;
                for (c, &xc) in x.a.iter().enumerate() {
                    acc = (acc + m[r][c] as i128 * xc as i128) % md;
                }
                acc.rem_euclid(md) as u64
            })
            .collect();
        Coords { v: x.v, a }
    }

    /// `A(sigma tau) = A(sigma) A(tau)` on every basis vector.
    pub fn check_composition(&self) -> bool {
        let n = self.order();
        let d = self.dim();
        let mut basis = vec![Coords { v: 1, a: vec![0; d] }];
        for c in 0..d {
            let mut a = vec![0; d];
            a[c] = 1 % self.moduli[c];
            basis.push(Coords { v: 0, a });
        }
        (0..n).all(|s| {
            (0..n).all(|t| basis.iter().all(|x| self.apply(self.mul(s, t), x) == self.apply(s, &self.apply(t, x))))
        })
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

    pub fn scale(&self, x: &Coords, k: i64) -> Coords {
        Coords {
            v: x.v * k,
            a: x.a.iter().zip(&self.moduli).map(|(&s, &m)| (s as i128 * k as i128).rem_euclid(m as i128) as u64).collect(),
        }
    }
}

/// A 2-cochain in coordinates, indexed by `sigma * n + tau`.
pub type CochainTable = Vec<Coords>;

/// `(d beta)(sigma, tau) = sigma beta(tau) - beta(sigma tau) + beta(sigma)`.
pub fn coboundary1(am: &ActionMatrices, beta: &[Coords]) -> CochainTable {
    let n = am.order();
    let mut out = Vec::with_capacity(n * n);
    for s in 0..n {
        for t in 0..n {
            let x = am.add(&am.add(&am.apply(s, &beta[t]), &am.neg(&beta[am.mul(s, t)])), &beta[s]);
            out.push(x);
        }
    }
    out
}

/// The first triple `(sigma, tau, rho)` violating the 2-cocycle identity.
pub fn first_cocycle_failure(am: &ActionMatrices, g: &[Coords]) -> Option<(usize, usize, usize)> {
    let n = am.order();
    for s in 0..n {
        for t in 0..n {
            for r in 0..n {
                let lhs = am.add(&am.apply(s, &g[t * n + r]), &g[s * n + am.mul(t, r)]);
                let rhs = am.add(&g[am.mul(s, t) * n + r], &g[s * n + t]);
                if lhs != rhs {
                    return Some((s, t, r));
                }
            }
        }
    }
    None
}

pub fn is_cocycle(am: &ActionMatrices, g: &[Coords]) -> bool {
    first_cocycle_failure(am, g).is_none()
}

pub fn table_sub(am: &ActionMatrices, x: &[Coords], y: &[Coords]) -> CochainTable {
    x.iter().zip(y).map(|(a, b)| am.add(a, &am.neg(b))).collect()
}

pub fn table_scale(am: &ActionMatrices, x: &[Coords], k: i64) -> CochainTable {
    x.iter().map(|a| am.scale(a, k)).collect()
}

fn check_size(am: &ActionMatrices, unknowns: usize) -> Result<()> {
    if am.order() > MAX_ORACLE_GROUP || unknowns > MAX_ORACLE_DIM {
        return Err(Error::OracleTooLarge(format!(
            "group order {} with {} unknowns (limits {} and {})",
            am.order(),
            unknowns,
            MAX_ORACLE_GROUP,
            MAX_ORACLE_DIM
        )));
    }
    Ok(())
}

/// The prime-power decomposition of the finite coordinates: for each prime,
/// the exponent of each coordinate's modulus.
pub(crate) fn primary_parts(moduli: &[u64]) -> BTreeMap<u64, Vec<u32>> {
    let mut primes: Vec<u64> = moduli.iter().flat_map(|&m| prime_factors(m)).collect();
    primes.sort_unstable();
    primes.dedup();
    primes.into_iter().map(|l| (l, moduli.iter().map(|&m| val_p(m, l).unwrap_or(0)).collect())).collect()
}

/// Solves `d beta = delta` for a 1-cochain `beta`. The valuation part is
/// determined exactly; the finite part is solved prime by prime.
pub fn solve_coboundary(am: &ActionMatrices, delta: &[Coords], force: bool) -> Result<Option<Vec<Coords>>> {
    let n = am.order();
    let d = am.dim();
    if !force {
        check_size(am, n * (d + 1))?;
    }
    // valuation part: sum over tau gives n beta_v(sigma)
    let mut beta_v = vec![0i64; n];
    for s in 0..n {
        let total: i64 = (0..n).map(|t| delta[s * n + t].v).sum();
        if total % n as i64 != 0 {
            return Ok(None);
        }
        beta_v[s] = total / n as i64;
    }
    for s in 0..n {
        for t in 0..n {
            if beta_v[t] - beta_v[am.mul(s, t)] + beta_v[s] != delta[s * n + t].v {
                return Ok(None);
            }
        }
    }
    // finite part: A_s b(t) - b(st) + b(s) = delta_a(s,t) - beta_v(t) c_s
    let rhs: Vec<Vec<i128>> = (0..n * n)
        .map(|idx| {
            let (s, t) = (idx / n, idx % n);
            (0..d).map(|r| delta[idx].a[r] as i128 - beta_v[t] as i128 * am.shifts[s][r] as i128).collect()
        })
        .collect();
    let mut beta_a = vec![vec![0u64; d]; n];
    for (ell, exps) in primary_parts(&am.moduli) {
        let amax = *exps.iter().max().unwrap();
        let ring = LocalRing::new(ell, amax);
        let cols: Vec<usize> = (0..d).filter(|&c| exps[c] > 0).collect();
        let var = |s: usize, ci: usize| s * cols.len() + ci;
        let nv = n * cols.len();
        let mut mat: Vec<Vec<u64>> = Vec::new();
        let mut b: Vec<u64> = Vec::new();
        for s in 0..n {
            for t in 0..n {
                for &r in &cols {
                    let scale = ell.pow(amax - exps[r]) as i128;
                    let mut row = vec![0u64; nv];
                    for (ci, &c) in cols.iter().enumerate() {
                        let j = var(t, ci);
                        row[j] = ring.add(row[j], ring.reduce(am.mats[s][r][c] as i128 * scale));
                        let j = var(am.mul(s, t), ci);
                        if c == r {
                            row[j] = ring.sub(row[j], ring.reduce(scale));
                        }
                        let j = var(s, ci);
                        if c == r {
                            row[j] = ring.add(row[j], ring.reduce(scale));
                        }
                    }
                    mat.push(row);
                    b.push(ring.reduce(rhs[s * n + t][r] * scale));
                }
            }
        }
        let Some(x) = solve_local(&ring, &mat, &b) else { return Ok(None) };
        // CRT: fold the l-part into each coordinate
        for s in 0..n {
            for (ci, &c) in cols.iter().enumerate() {
                let m = am.moduli[c];
                let lpow = ell.pow(exps[c]);
                let cof = m / lpow;
                let cur = beta_a[s][c];
                beta_a[s][c] = crt_pair(cur, cof, x[var(s, ci)] % lpow, lpow);
                debug_assert!(beta_a[s][c] < m);
            }
        }
    }
    let beta: Vec<Coords> = (0..n).map(|s| Coords { v: beta_v[s], a: beta_a[s].clone() }).collect();
    if coboundary1(am, &beta) != delta {
        return Err(Error::Internal("coboundary solution failed verification".into()));
    }
    Ok(Some(beta))
}

/// `x` with `x = a mod m1` (already reduced for the other primes of the full
/// modulus `m1 * m2`) and `x = b mod m2`, assuming coprime `m1`, `m2`.
fn crt_pair(a: u64, m1: u64, b: u64, m2: u64) -> u64 {
    let m = m1 as i128 * m2 as i128;
    let (_, s, t) = crate::arith::xgcd(m1 as i128, m2 as i128);
    // s m1 + t m2 = 1
    let a = a as i128 % m1 as i128;
    let x = (a * t * m2 as i128 + b as i128 * s * m1 as i128).rem_euclid(m);
    x as u64
}

/// A witness `beta` with `gamma1 - gamma2 = d beta`, if any.
pub fn cohomologous(
    am: &ActionMatrices,
    g1: &[Coords],
    g2: &[Coords],
    force: bool,
) -> Result<Option<Vec<Coords>>> {
    solve_coboundary(am, &table_sub(am, g1, g2), force)
}

/// Order of the class of the cocycle `g` in `H^2`.
pub fn class_order(am: &ActionMatrices, g: &[Coords], force: bool) -> Result<usize> {
    if !is_cocycle(am, g) {
        return Err(Error::InvalidInput("not a cocycle".into()));
    }
    let n = am.order() as u64;
    for m in divisors(n) {
        if solve_coboundary(am, &table_scale(am, g, m as i64), force)?.is_some() {
            return Ok(m as usize);
        }
    }
    Err(Error::Internal("class order does not divide the group order".into()))
}

/// Serialized witness of a coboundary relation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub beta: Vec<Coords>,
}
