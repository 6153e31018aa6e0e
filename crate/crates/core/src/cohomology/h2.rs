//! `H^2(G, L^x / U^(k))` by kernel and image computations, one prime at a time.
//!
//! A 2-cocycle has valuation part in `Z^2(G, Z)`, parametrized by
//! `lambda` in the basis `z_i` from an integer diagonalization of the
//! coboundary `C^1(G, Z) -> C^2(G, Z)`; cutting `lambda_i` modulo `E d_i`
//! (`E` the exponent of the finite part) loses nothing since those multiples
//! are coboundaries. The resulting finite group is split into primary parts.

use serde::{Deserialize, Serialize};

use super::{first_cocycle_failure, primary_parts, ActionMatrices, Coords, MAX_ORACLE_DIM, MAX_ORACLE_GROUP};
use crate::error::{Error, Result};
use crate::linalg::{diagonalize_int, snf_local, solve_local, LocalRing, Mat, Track};

#[derive(Clone, Debug)]
struct PrimePart {
    ell: u64,
    ring: LocalRing,
    /// indices of `lambda` kept, with their exponents
    lam: Vec<(usize, u32)>,
    /// finite coordinates with nontrivial `ell`-part, with exponents
    cols: Vec<(usize, u32)>,
    /// exponents of all coordinates of the parameter space
    phi_exps: Vec<u32>,
    /// generators of the cocycle space
    gens: Vec<Vec<u64>>,
    /// change of basis on generator coefficients, and invariants per column
    q: Mat,
    inv_exps: Vec<u32>,
}

/// `H^2` of a finite group acting on the coordinates of `L^x / U^(k)`.
#[derive(Clone, Debug)]
pub struct H2Group {
    n: usize,
    p_int: Vec<Vec<i128>>,
    parts: Vec<PrimePart>,
}

/// A class in `H^2`: for each prime, coordinates modulo the prime-power
/// invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H2Class {
    pub components: Vec<(u64, Vec<(u64, u64)>)>,
}

impl H2Class {
    pub fn order(&self) -> u64 {
        self.components
            .iter()
            .map(|(ell, cs)| {
                cs.iter()
                    .map(|&(y, m)| {
                        let mut o = 1u64;
                        let mut x = y % m;
                        while x != 0 {
                            x = (x * ell) % m;
                            o *= ell;
                        }
                        o
                    })
                    .max()
                    .unwrap_or(1)
            })
            .product()
    }

    pub fn is_zero(&self) -> bool {
        self.order() == 1
    }
}

/// Rows carry exponents; solutions `x` over `Z/l^a` of
/// `sum_c A[r][c] x_c = 0 mod l^{e_r}` are returned as generators.
fn kernel(ring: &LocalRing, rows: &[(Vec<u64>, u32)], ncols: usize) -> Vec<Vec<u64>> {
    let a = ring.exp();
    let scaled: Vec<Vec<u64>> = rows
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(row, e)| {
            let s = ring.pow_ell(a - e);
            row.iter().map(|&x| ring.mul(x, s)).collect()
        })
        .collect();
    if scaled.is_empty() {
        return (0..ncols).map(|c| (0..ncols).map(|r| u64::from(r == c)).collect()).collect();
    }
    let snf = snf_local(ring, &scaled, ncols, Track::Q);
    let q = snf.q.expect("tracked");
    let mut out = Vec::new();
    for i in 0..ncols {
        let d = snf.diag.get(i).copied().unwrap_or(a);
        if d == 0 {
            continue;
        }
        let s = ring.pow_ell(a - d);
        let v: Vec<u64> = (0..ncols).map(|r| ring.mul(q[r][i], s)).collect();
        if v.iter().any(|&x| x != 0) {
            out.push(v);
        }
    }
    out
}

fn reduce_vec(ring: &LocalRing, v: &[u64], exps: &[u32]) -> Vec<u64> {
    v.iter().zip(exps).map(|(&x, &e)| x % ring.ell().pow(e)).collect()
}

fn coboundary_matrix_int(am: &ActionMatrices) -> Vec<Vec<i128>> {
    let n = am.order();
    let mut m = vec![vec![0i128; n]; n * n];
    for s in 0..n {
        for t in 0..n {
            let row = &mut m[s * n + t];
            row[t] += 1;
            row[am.mul(s, t)] -= 1;
            row[s] += 1;
        }
    }
    m
}

/// Computes `H^2(G, M)` for `M = L^x / U^(k)` given by `am`.
pub fn h2_invariants(am: &ActionMatrices, force: bool) -> Result<H2Group> {
    let n = am.order();
    let d = am.dim();
    if !force && (n > MAX_ORACLE_GROUP || n * n * (d + 1) > MAX_ORACLE_DIM) {
        return Err(Error::OracleTooLarge(format!(
            "group order {n} with {} cochain coordinates (limits {MAX_ORACLE_GROUP} and {MAX_ORACLE_DIM})",
            n * n * (d + 1)
        )));
    }
    let dmat = coboundary_matrix_int(am);
    let (diag, p_int, p_inv) = diagonalize_int(&dmat, n);
    if diag.len() != n {
        return Err(Error::Internal("coboundary on Z^G is not injective".into()));
    }
    let dvals: Vec<i128> = diag.iter().map(|x| x.abs()).collect();
    // z_i = column i of P^{-1}
    let z: Vec<Vec<i128>> = (0..n).map(|i| (0..n * n).map(|r| p_inv[r][i]).collect()).collect();
    let mut parts = Vec::new();
    let primes = primary_parts(am.moduli());
    for ell in crate::arith::prime_factors(n as u64) {
        let exps = primes.get(&ell).cloned().unwrap_or_else(|| vec![0; d]);
        let e_fin = exps.iter().copied().max().unwrap_or(0);
        let cols: Vec<(usize, u32)> = (0..d).filter(|&c| exps[c] > 0).map(|c| (c, exps[c])).collect();
        let lam: Vec<(usize, u32)> = (0..n)
            .map(|i| (i, e_fin + crate::arith::val_p(dvals[i] as u64, ell).unwrap_or(0)))
            .collect();
        let a = lam.iter().map(|x| x.1).chain(cols.iter().map(|x| x.1)).max().unwrap();
        if a == 0 {
            continue;
        }
        let ring = LocalRing::new(ell, a);
        let dl = cols.len();
        let nl = lam.len();
        let xi = |s: usize, t: usize, ci: usize| nl + (s * n + t) * dl + ci;
        let ncols = nl + n * n * dl;
        let mut phi_exps: Vec<u32> = lam.iter().map(|x| x.1).collect();
        for _ in 0..n * n {
            phi_exps.extend(cols.iter().map(|x| x.1));
        }
        // cocycle condition on the finite part
        let mut rows: Vec<(Vec<u64>, u32)> = Vec::with_capacity(n * n * n * dl);
        for s in 0..n {
            let shift = am.shift(s);
            let mat = am.matrix(s);
            for t in 0..n {
                for r in 0..n {
                    for (ri, &(rc, re)) in cols.iter().enumerate() {
                        let mut row = vec![0u64; ncols];
                        for (li, &(i, _)) in lam.iter().enumerate() {
                            row[li] = ring.reduce(z[i][t * n + r] * shift[rc] as i128);
                        }
                        for (ci, &(c, _)) in cols.iter().enumerate() {
                            let j = xi(t, r, ci);
                            row[j] = ring.add(row[j], ring.reduce(mat[rc][c] as i128));
                        }
                        let j = xi(am.mul(s, t), r, ri);
                        row[j] = ring.sub(row[j], 1);
                        let j = xi(s, am.mul(t, r), ri);
                        row[j] = ring.add(row[j], 1);
                        let j = xi(s, t, ri);
                        row[j] = ring.sub(row[j], 1);
                        rows.push((row, re));
                    }
                }
            }
        }
        let gens: Vec<Vec<u64>> = kernel(&ring, &rows, ncols)
            .into_iter()
            .map(|g| reduce_vec(&ring, &g, &phi_exps))
            .filter(|g| g.iter().any(|&x| x != 0))
            .collect();
        // coboundaries of the basis 1-cochains
        let mut bnd: Vec<Vec<u64>> = Vec::new();
        for rho in 0..n {
            let mut v = vec![0u64; ncols];
            let col: Vec<i128> = (0..n * n).map(|r| dmat[r][rho]).collect();
            for (li, &(i, _)) in lam.iter().enumerate() {
                let l: i128 = (0..n * n).map(|r| p_int[i][r] * col[r]).sum();
                v[li] = ring.reduce(l);
            }
            for s in 0..n {
                for (ci, &(c, _)) in cols.iter().enumerate() {
                    v[xi(s, rho, ci)] = ring.reduce(am.shift(s)[c] as i128);
                }
            }
            bnd.push(v);
        }
        for rho in 0..n {
            for (ci, &(c, _)) in cols.iter().enumerate() {
                let mut v = vec![0u64; ncols];
                for s in 0..n {
                    let mat = am.matrix(s);
                    for (ri, &(r, _)) in cols.iter().enumerate() {
                        let j = xi(s, rho, ri);
                        v[j] = ring.add(v[j], ring.reduce(mat[r][c] as i128));
                    }
                    for t in 0..n {
                        if am.mul(s, t) == rho {
                            let j = xi(s, t, ci);
                            v[j] = ring.sub(v[j], 1);
                        }
                    }
                    for t in 0..n {
                        if s == rho {
                            let j = xi(s, t, ci);
                            v[j] = ring.add(v[j], 1);
                        }
                    }
                }
                bnd.push(v);
            }
        }
        let bnd: Vec<Vec<u64>> = bnd.iter().map(|b| reduce_vec(&ring, b, &phi_exps)).collect();
        // relations among generators: sum mu_j s_j in the span of the coboundaries
        let t_cnt = gens.len();
        let u_cnt = bnd.len();
        let stacked: Vec<(Vec<u64>, u32)> = (0..ncols)
            .map(|r| {
                let mut row: Vec<u64> = gens.iter().map(|g| g[r]).collect();
                row.extend(bnd.iter().map(|b| ring.sub(0, b[r])));
                (row, phi_exps[r])
            })
            .collect();
        let rel: Vec<Vec<u64>> = kernel(&ring, &stacked, t_cnt + u_cnt).into_iter().map(|k| k[..t_cnt].to_vec()).collect();
        let (q, inv_exps) = if t_cnt == 0 {
            (Vec::new(), Vec::new())
        } else if rel.is_empty() {
            (crate::linalg::identity(t_cnt), vec![a; t_cnt])
        } else {
            let snf = snf_local(&ring, &rel, t_cnt, Track::Q);
            let inv: Vec<u32> = (0..t_cnt).map(|i| snf.diag.get(i).copied().unwrap_or(a)).collect();
            (snf.q.expect("tracked"), inv)
        };
        parts.push(PrimePart { ell, ring, lam, cols, phi_exps, gens, q, inv_exps });
    }
    Ok(H2Group { n, p_int, parts })
}

impl H2Group {
    /// Prime-power invariants `(ell, ell^c)`, trivial factors omitted.
    pub fn primary_invariants(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        for part in &self.parts {
            for &c in &part.inv_exps {
                if c > 0 {
                    out.push((part.ell, part.ell.pow(c)));
                }
            }
        }
        out
    }

    /// Invariant factors `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let mut per_prime: Vec<Vec<u64>> = self
            .parts
            .iter()
            .map(|part| {
                let mut v: Vec<u64> =
                    part.inv_exps.iter().filter(|&&c| c > 0).map(|&c| part.ell.pow(c)).collect();
                v.sort_unstable_by(|a, b| b.cmp(a));
                v
            })
            .collect();
        let len = per_prime.iter().map(|v| v.len()).max().unwrap_or(0);
        let mut out: Vec<u64> = (0..len).map(|i| per_prime.iter_mut().map(|v| v.get(i).copied().unwrap_or(1)).product()).collect();
        out.reverse();
        out
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors().iter().product()
    }

    /// The class of a cocycle.
    pub fn classify(&self, am: &ActionMatrices, g: &[Coords]) -> Result<H2Class> {
        let n = self.n;
        if am.order() != n || g.len() != n * n {
            return Err(Error::InvalidInput("cochain does not match the group".into()));
        }
        if let Some((s, t, r)) = first_cocycle_failure(am, g) {
            return Err(Error::InvalidInput(format!("not a cocycle at ({s}, {t}, {r})")));
        }
        let lam_full: Vec<i128> =
            self.p_int.iter().map(|row| row.iter().zip(g).map(|(&p, x)| p * x.v as i128).sum()).collect();
        if lam_full[n..].iter().any(|&x| x != 0) {
            return Err(Error::Internal("valuation part is not in the cocycle lattice".into()));
        }
        let mut components = Vec::new();
        for part in &self.parts {
            let ring = &part.ring;
            let mut phi: Vec<u64> = part.lam.iter().map(|&(i, _)| ring.reduce(lam_full[i])).collect();
            for x in g {
                phi.extend(part.cols.iter().map(|&(c, _)| x.a[c] % ring.modulus()));
            }
            let phi = reduce_vec(ring, &phi, &part.phi_exps);
            let t = part.gens.len();
            let a = ring.exp();
            let mut mat = Vec::new();
            let mut rhs = Vec::new();
            for (r, &e) in part.phi_exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let s = ring.pow_ell(a - e);
                mat.push(part.gens.iter().map(|gn| ring.mul(gn[r], s)).collect::<Vec<u64>>());
                rhs.push(ring.mul(phi[r], s));
            }
            let mu = if t == 0 {
                Vec::new()
            } else {
                solve_local(ring, &mat, &rhs)
                    .ok_or_else(|| Error::Internal("cocycle outside the computed cocycle space".into()))?
            };
            let cs: Vec<(u64, u64)> = (0..t)
                .filter(|&i| part.inv_exps[i] > 0)
                .map(|i| {
                    let m = part.ell.pow(part.inv_exps[i]);
                    let y = (0..t).fold(0u64, |acc, j| ring.add(acc, ring.mul(mu[j], part.q[j][i])));
                    (y % m, m)
                })
                .collect();
            components.push((part.ell, cs));
        }
        Ok(H2Class { components })
    }
}
