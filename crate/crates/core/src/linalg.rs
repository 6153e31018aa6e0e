//! Linear algebra over the local rings `Z/l^a` and over `Z`.
//!
//! Matrices are row-major `Vec<Vec<_>>`. Over `Z/l^a` every nonzero entry is
//! `l^v` times a unit, so elimination pivots on an entry of minimal valuation.

use crate::arith::{add_mod, inv_mod, mul_mod, sub_mod};

pub type Mat = Vec<Vec<u64>>;

/// The ring `Z/l^a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalRing {
    ell: u64,
    exp: u32,
    modulus: u64,
}

impl LocalRing {
    pub fn new(ell: u64, exp: u32) -> LocalRing {
        let modulus = (ell as u128).pow(exp);
        assert!(modulus < (1u128 << 62), "modulus too large");
        LocalRing { ell, exp, modulus: modulus as u64 }
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn exp(&self) -> u32 {
        self.exp
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    /// `l`-adic valuation, `exp` for zero.
    pub fn val(&self, mut x: u64) -> u32 {
        x %= self.modulus;
        if x == 0 {
            return self.exp;
        }
        let mut v = 0;
        while x % self.ell == 0 {
            x /= self.ell;
            v += 1;
        }
        v
    }

    pub fn pow_ell(&self, v: u32) -> u64 {
        if v >= self.exp {
            0
        } else {
            self.ell.pow(v)
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.modulus)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        add_mod(a, b, self.modulus)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        sub_mod(a, b, self.modulus)
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        inv_mod(a % self.modulus, self.modulus)
    }
}

fn row_axpy(r: &LocalRing, dst: &mut [u64], src: &[u64], c: u64) {
    if c == 0 {
        return;
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        if s != 0 {
            *d = r.sub(*d, r.mul(c, s));
        }
    }
}

/// Solves `mat * x = b` over `Z/l^a` for each right-hand side, returning
/// one solution (free variables zero) or `None` when inconsistent.
pub fn solve_local_multi(r: &LocalRing, mat: &[Vec<u64>], rhs: &[Vec<u64>]) -> Vec<Option<Vec<u64>>> {
    let rows = mat.len();
    let cols = mat.first().map_or(0, |x| x.len());
    let nr = rhs.len();
    // augmented rows: [A | b_1 .. b_nr]
    let mut a: Vec<Vec<u64>> = (0..rows)
        .map(|i| {
            let mut row: Vec<u64> = mat[i].iter().map(|&x| x % r.modulus).collect();
            row.extend(rhs.iter().map(|b| b[i] % r.modulus));
            row
        })
        .collect();
    let mut colperm: Vec<usize> = (0..cols).collect();
    let mut pivots: Vec<u32> = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in t..rows {
            for j in t..cols {
                let x = a[i][j];
                if x != 0 {
                    let v = r.val(x);
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        a.swap(t, pi);
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            colperm.swap(t, pj);
        }
        let unit = r.inv(a[t][t] / r.ell.pow(v)).expect("unit part");
        let pivot_row: Vec<u64> = a[t].iter().map(|&x| r.mul(x, unit)).collect();
        a[t] = pivot_row.clone();
        let lv = r.ell.pow(v);
        for i in t + 1..rows {
            let x = a[i][t];
            if x != 0 {
                row_axpy(r, &mut a[i], &pivot_row, x / lv);
            }
        }
        pivots.push(v);
    }
    let rank = pivots.len();
    (0..nr)
        .map(|k| {
            let bc = cols + k;
            if (rank..rows).any(|i| a[i][bc] != 0) {
                return None;
            }
            let mut y = vec![0u64; cols];
            for t in (0..rank).rev() {
                let mut s = a[t][bc];
                for j in t + 1..cols {
                    if a[t][j] != 0 && y[j] != 0 {
                        s = r.sub(s, r.mul(a[t][j], y[j]));
                    }
                }
                let lv = r.ell.pow(pivots[t]);
                if s % lv != 0 {
                    return None;
                }
                y[t] = s / lv;
            }
            let mut x = vec![0u64; cols];
            for (pos, &orig) in colperm.iter().enumerate() {
                x[orig] = y[pos];
            }
            Some(x)
        })
        .collect()
}

pub fn solve_local(r: &LocalRing, mat: &[Vec<u64>], b: &[u64]) -> Option<Vec<u64>> {
    solve_local_multi(r, mat, &[b.to_vec()]).pop().flatten()
}

pub fn mat_vec(r: &LocalRing, mat: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
    mat.iter()
        .map(|row| row.iter().zip(x).fold(0u64, |acc, (&a, &b)| r.add(acc, r.mul(a, b))))
        .collect()
}

pub fn mat_mul(r: &LocalRing, a: &[Vec<u64>], b: &[Vec<u64>]) -> Mat {
    let n = b.first().map_or(0, |x| x.len());
    a.iter()
        .map(|row| {
            let mut out = vec![0u64; n];
            for (k, &x) in row.iter().enumerate() {
                if x != 0 {
                    for (o, &y) in out.iter_mut().zip(&b[k]) {
                        *o = r.add(*o, r.mul(x, y));
                    }
                }
            }
            out
        })
        .collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            let mut v = vec![0u64; n];
            v[i] = 1;
            v
        })
        .collect()
}

/// `P * A * Q = D` over `Z/l^a` with `D` diagonal, entries `l^diag[i]`
/// (nondecreasing; `exp` marks zero). `P`, `Q` and their inverses are
/// tracked on request.
#[derive(Clone, Debug)]
pub struct LocalSnf {
    pub diag: Vec<u32>,
    pub p: Option<Mat>,
    pub p_inv: Option<Mat>,
    pub q: Option<Mat>,
    pub q_inv: Option<Mat>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Track {
    pub p: bool,
    pub p_inv: bool,
    pub q: bool,
    pub q_inv: bool,
}

impl Track {
    pub const NONE: Track = Track { p: false, p_inv: false, q: false, q_inv: false };
    pub const Q: Track = Track { p: false, p_inv: false, q: true, q_inv: true };
    pub const P: Track = Track { p: true, p_inv: true, q: false, q_inv: false };
    pub const ALL: Track = Track { p: true, p_inv: true, q: true, q_inv: true };
}

pub fn snf_local(r: &LocalRing, mat: &[Vec<u64>], ncols: usize, track: Track) -> LocalSnf {
    let rows = mat.len();
    let cols = ncols;
    let mut a: Mat = mat.iter().map(|row| row.iter().map(|&x| x % r.modulus).collect()).collect();
    let mut p = track.p.then(|| identity(rows));
    let mut p_inv = track.p_inv.then(|| identity(rows));
    let mut q = track.q.then(|| identity(cols));
    let mut q_inv = track.q_inv.then(|| identity(cols));
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        'search: for i in t..rows {
            for j in t..cols {
                let x = a[i][j];
                if x != 0 {
                    let v = r.val(x);
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                        if v == 0 {
                            break 'search;
                        }
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        // row swap t <-> pi
        if pi != t {
            a.swap(t, pi);
            if let Some(p) = p.as_mut() {
                p.swap(t, pi);
            }
            if let Some(pv) = p_inv.as_mut() {
                for row in pv.iter_mut() {
                    row.swap(t, pi);
                }
            }
        }
        // column swap t <-> pj
        if pj != t {
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            if let Some(q) = q.as_mut() {
                for row in q.iter_mut() {
                    row.swap(t, pj);
                }
            }
            if let Some(qv) = q_inv.as_mut() {
                qv.swap(t, pj);
            }
        }
        // scale row t by the inverse unit part
        let lv = r.ell.pow(v);
        let u = a[t][t] / lv;
        let uinv = r.inv(u).expect("unit");
        for x in a[t].iter_mut() {
            *x = r.mul(*x, uinv);
        }
        if let Some(p) = p.as_mut() {
            for x in p[t].iter_mut() {
                *x = r.mul(*x, uinv);
            }
        }
        if let Some(pv) = p_inv.as_mut() {
            for row in pv.iter_mut() {
                row[t] = r.mul(row[t], u);
            }
        }
        // clear column t below the pivot: row_i -= c row_t
        let pivot_row = a[t].clone();
        for i in t + 1..rows {
            let c = a[i][t] / lv;
            if c == 0 {
                continue;
            }
            row_axpy(r, &mut a[i], &pivot_row, c);
            if let Some(p) = p.as_mut() {
                let pt = p[t].clone();
                row_axpy(r, &mut p[i], &pt, c);
            }
            if let Some(pv) = p_inv.as_mut() {
                // P^{-1} <- P^{-1} (I + c e_i e_t^T): column t += c column i
                for row in pv.iter_mut() {
                    row[t] = r.add(row[t], r.mul(c, row[i]));
                }
            }
        }
        // clear row t right of the pivot: col_j -= c col_t
        for j in t + 1..cols {
            let c = a[t][j] / lv;
            if c == 0 {
                continue;
            }
            for row in a.iter_mut() {
                row[j] = r.sub(row[j], r.mul(c, row[t]));
            }
            if let Some(q) = q.as_mut() {
                for row in q.iter_mut() {
                    row[j] = r.sub(row[j], r.mul(c, row[t]));
                }
            }
            if let Some(qv) = q_inv.as_mut() {
                // Q^{-1} <- (I + c e_t e_j^T) Q^{-1}: row t += c row j
                let rj = qv[j].clone();
                for (x, &y) in qv[t].iter_mut().zip(&rj) {
                    *x = r.add(*x, r.mul(c, y));
                }
            }
        }
        diag.push(v);
    }
    while diag.len() < rows.min(cols) {
        diag.push(r.exp);
    }
    LocalSnf { diag, p, p_inv, q, q_inv }
}

/// Diagonalization over `Z`: `P * A * Q = diag(d_1..d_r, 0..)` with `P`
/// unimodular; returns the nonzero diagonal, `P` and `P^{-1}`.
pub fn diagonalize_int(mat: &[Vec<i128>], ncols: usize) -> (Vec<i128>, Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let rows = mat.len();
    let cols = ncols;
    let mut a: Vec<Vec<i128>> = mat.to_vec();
    let id = |n: usize| -> Vec<Vec<i128>> {
        (0..n)
            .map(|i| {
                let mut v = vec![0i128; n];
                v[i] = 1;
                v
            })
            .collect()
    };
    let mut p = id(rows);
    let mut p_inv = id(rows);
    // row op: row_i -= c row_t  (P likewise; P^{-1}: col_t += c col_i)
    let row_op = |a: &mut Vec<Vec<i128>>, p: &mut Vec<Vec<i128>>, pv: &mut Vec<Vec<i128>>, i: usize, t: usize, c: i128| {
        if c == 0 {
            return;
        }
        let rt = a[t].clone();
        for (x, &y) in a[i].iter_mut().zip(&rt) {
            *x -= c * y;
        }
        let pt = p[t].clone();
        for (x, &y) in p[i].iter_mut().zip(&pt) {
            *x -= c * y;
        }
        for row in pv.iter_mut() {
            row[t] += c * row[i];
        }
    };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the submatrix
        let mut best: Option<(i128, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = a[i][j].abs();
                if x != 0 && best.is_none_or(|b| x < b.0) {
                    best = Some((x, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        p.swap(t, pi);
        for row in p_inv.iter_mut() {
            row.swap(t, pi);
        }
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let piv = a[t][t];
            let mut done = true;
            for i in t + 1..rows {
                let c = a[i][t].div_euclid(piv);
                row_op(&mut a, &mut p, &mut p_inv, i, t, c);
                if a[i][t] != 0 {
                    done = false;
                }
            }
            for j in t + 1..cols {
                let c = a[t][j].div_euclid(piv);
                if c != 0 {
                    for row in a.iter_mut() {
                        row[j] -= c * row[t];
                    }
                }
                if a[t][j] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
            // move the smallest remainder in row/column t to the pivot
            let mut best = (a[t][t].abs(), t, t);
            for i in t + 1..rows {
                let x = a[i][t].abs();
                if x != 0 && x < best.0 {
                    best = (x, i, t);
                }
            }
            for j in t + 1..cols {
                let x = a[t][j].abs();
                if x != 0 && x < best.0 {
                    best = (x, t, j);
                }
            }
            let (_, bi, bj) = best;
            if bi != t {
                a.swap(t, bi);
                p.swap(t, bi);
                for row in p_inv.iter_mut() {
                    row.swap(t, bi);
                }
            }
            if bj != t {
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
            for x in p[t].iter_mut() {
                *x = -*x;
            }
            for row in p_inv.iter_mut() {
                row[t] = -row[t];
            }
        }
        diag.push(a[t][t]);
        t += 1;
    }
    (diag, p, p_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_solvable(r: &LocalRing, mat: &[Vec<u64>], b: &[u64]) -> bool {
        let cols = mat[0].len();
        let m = r.modulus();
        let total = m.pow(cols as u32);
        (0..total).any(|mut code| {
            let x: Vec<u64> = (0..cols)
                .map(|_| {
                    let d = code % m;
                    code /= m;
                    d
                })
                .collect();
            mat_vec(r, mat, &x) == b
        })
    }

    #[test]
    fn solve_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (ell, exp) in [(2u64, 3u32), (3, 2), (5, 1)] {
            let r = LocalRing::new(ell, exp);
            for _ in 0..60 {
                let rows = rng.gen_range(1..4);
                let cols = rng.gen_range(1..4);
                let mat: Mat = (0..rows)
                    .map(|_| (0..cols).map(|_| ell * rng.gen_range(0..r.modulus()) % r.modulus() * rng.gen_range(0..2) + rng.gen_range(0..2)).collect())
                    .collect();
                let b: Vec<u64> = (0..rows).map(|_| rng.gen_range(0..r.modulus())).collect();
                let sol = solve_local(&r, &mat, &b);
                assert_eq!(sol.is_some(), brute_solvable(&r, &mat, &b), "{mat:?} {b:?}");
                if let Some(x) = sol {
                    assert_eq!(mat_vec(&r, &mat, &x), b);
                }
            }
        }
    }

    #[test]
    fn snf_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let r = LocalRing::new(3, 4);
        for _ in 0..30 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let mat: Mat = (0..rows).map(|_| (0..cols).map(|_| 3 * rng.gen_range(0..27)).collect()).collect();
            let s = snf_local(&r, &mat, cols, Track::ALL);
            let (p, pv, q, qv) = (s.p.unwrap(), s.p_inv.unwrap(), s.q.unwrap(), s.q_inv.unwrap());
            assert_eq!(mat_mul(&r, &p, &pv), identity(rows));
            assert_eq!(mat_mul(&r, &q, &qv), identity(cols));
            let d = mat_mul(&r, &mat_mul(&r, &p, &mat), &q);
            for i in 0..rows {
                for j in 0..cols {
                    let expect = if i == j { r.pow_ell(s.diag[i]) } else { 0 };
                    assert_eq!(d[i][j], expect);
                }
            }
            assert!(s.diag.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn integer_diagonalization() {
        let mat: Vec<Vec<i128>> = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let (d, p, pv) = diagonalize_int(&mat, 3);
        let prod: i128 = d.iter().product();
        assert_eq!(prod.abs(), 144);
        for i in 0..3 {
            for j in 0..3 {
                let s: i128 = (0..3).map(|k| p[i][k] * pv[k][j]).sum();
                assert_eq!(s, i128::from(i == j));
            }
        }
    }
}
