//! Finite fields `F_{p^n}` for small `p^n`, together with the residue-level
//! equation solvers used by the successive-approximation loops of the p-adic
//! code: Hilbert 90 (`x^{p^d-1} = c`), Artin–Schreier (`y^{p^d} - y = b`),
//! relative norm/trace and brute-force discrete logarithms.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::arith::{inv_mod, is_prime, prime_factors};
use crate::error::{Error, Result};

/// Upper bound on the field size; discrete logs are tabulated.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// Polynomials over F_p as coefficient vectors, lowest degree first.
pub(crate) mod fp_poly {
    use crate::arith::{inv_mod, mul_mod};

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo a nonzero `m`.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lc_inv = inv_mod(m[dm], p).expect("nonzero leading coefficient");
        while r.len() > dm {
            let dr = r.len() - 1;
            let c = mul_mod(r[dr], lc_inv, p);
            for i in 0..=dm {
                let t = mul_mod(c, m[i], p);
                r[dr - dm + i] = (r[dr - dm + i] + p - t) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = rem(&mul(&r, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            e >>= 1;
        }
        r
    }
}

/// The finite field `F_p[x]/(modulus)`.
pub struct FFq {
    p: u64,
    n: usize,
    modulus: Vec<u64>,
    size: u64,
    tables: OnceLock<DlogTables>,
}

struct DlogTables {
    generator: Vec<u64>,
    /// element index -> exponent of `generator`; `u32::MAX` for zero
    log: Vec<u32>,
    /// exponent -> element index
    exp: Vec<u32>,
}

impl fmt::Debug for FFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.n, self.modulus)
    }
}

impl PartialEq for FFq {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FFq {}

impl FFq {
    /// The canonical field of order `p^n`: the modulus is the monic primitive
    /// polynomial of degree `n` with the smallest encoding `sum c_i p^i`.
    pub fn canonical(p: u64, n: usize) -> Result<Arc<FFq>> {
        check_size(p, n)?;
        let count = p.pow(n as u32);
        for code in 0..count {
            let mut modulus = Vec::with_capacity(n + 1);
            let mut c = code;
            for _ in 0..n {
                modulus.push(c % p);
                c /= p;
            }
            modulus.push(1);
            if modulus[0] == 0 {
                continue;
            }
            if is_primitive_poly(&modulus, p) {
                return FFq::with_modulus(p, modulus);
            }
        }
        Err(Error::Internal(format!("no primitive polynomial of degree {n} over F_{p}")))
    }

    /// A field from an explicit monic irreducible modulus.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Arc<FFq>> {
        let n = modulus.len().checked_sub(1).filter(|&n| n >= 1).ok_or_else(|| {
            Error::InvalidInput("modulus must have positive degree".into())
        })?;
        check_size(p, n)?;
        if modulus[n] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidInput("modulus must be monic and reduced mod p".into()));
        }
        if !is_irreducible_poly(&modulus, p) {
            return Err(Error::InvalidInput(format!("modulus {modulus:?} is reducible mod {p}")));
        }
        Ok(Arc::new(FFq { p, n, size: p.pow(n as u32), modulus, tables: OnceLock::new() }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Whether the class of `x` generates the multiplicative group.
    pub fn modulus_is_primitive(&self) -> bool {
        is_primitive_poly(&self.modulus, self.p)
    }

    pub fn index_of(&self, c: &[u64]) -> u64 {
        c.iter().rev().fold(0, |acc, &x| acc * self.p + x)
    }

    pub fn coords_of_index(&self, mut idx: u64) -> Vec<u64> {
        (0..self.n)
            .map(|_| {
                let c = idx % self.p;
                idx /= self.p;
                c
            })
            .collect()
    }

    // ---- raw coordinate arithmetic ----

    pub fn add_c(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub_c(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + self.p - y) % self.p).collect()
    }

    pub fn scale_c(&self, a: &[u64], s: u64) -> Vec<u64> {
        a.iter().map(|x| x * (s % self.p) % self.p).collect()
    }

    pub fn mul_c(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let prod = fp_poly::mul(a, b, self.p);
        self.pad(fp_poly::rem(&prod, &self.modulus, self.p))
    }

    pub fn pow_c(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut r = self.one_c();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_c(&r, &b);
            }
            b = self.mul_c(&b, &b);
            e >>= 1;
        }
        r
    }

    pub fn inv_c(&self, a: &[u64]) -> Result<Vec<u64>> {
        if a.iter().all(|&x| x == 0) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow_c(a, self.size - 2))
    }

    /// `a^{p^d}`.
    pub fn frobenius_c(&self, a: &[u64], d: usize) -> Vec<u64> {
        let mut r = a.to_vec();
        for _ in 0..(d % self.n) {
            r = self.pow_c(&r, self.p);
        }
        r
    }

    pub fn one_c(&self) -> Vec<u64> {
        let mut v = vec![0; self.n];
        v[0] = 1 % self.p;
        v
    }

    pub fn zero_c(&self) -> Vec<u64> {
        vec![0; self.n]
    }

    fn pad(&self, mut v: Vec<u64>) -> Vec<u64> {
        v.resize(self.n, 0);
        v
    }

    fn tables(&self) -> &DlogTables {
        self.tables.get_or_init(|| {
            let order = self.size - 1;
            let generator = if self.modulus_is_primitive() {
                if self.n == 1 {
                    vec![(self.p - self.modulus[0]) % self.p]
                } else {
                    let mut x = self.zero_c();
                    x[1] = 1;
                    x
                }
            } else {
                let primes = prime_factors(order);
                (1..self.size)
                    .map(|idx| self.coords_of_index(idx))
                    .find(|g| primes.iter().all(|&r| self.pow_c(g, order / r) != self.one_c()))
                    .expect("finite field has a generator")
            };
            let mut log = vec![u32::MAX; self.size as usize];
            let mut exp = Vec::with_capacity(order as usize);
            let mut cur = self.one_c();
            for k in 0..order {
                let idx = self.index_of(&cur);
                log[idx as usize] = k as u32;
                exp.push(idx as u32);
                cur = self.mul_c(&cur, &generator);
            }
            DlogTables { generator, log, exp }
        })
    }

    /// The generator used for tabulated discrete logs (the class of `x`
    /// whenever the modulus is primitive).
    pub fn generator(self: &Arc<Self>) -> FFElem {
        FFElem { field: self.clone(), c: self.tables().generator.clone() }
    }

    /// Discrete log with respect to [`FFq::generator`].
    pub fn log_gen(&self, a: &[u64]) -> Option<u64> {
        let l = self.tables().log[self.index_of(a) as usize];
        (l != u32::MAX).then_some(l as u64)
    }

    pub fn exp_gen(&self, k: u64) -> Vec<u64> {
        let t = self.tables();
        self.coords_of_index(t.exp[(k % (self.size - 1)) as usize] as u64)
    }

    pub fn elem(self: &Arc<Self>, c: Vec<u64>) -> FFElem {
        assert_eq!(c.len(), self.n, "coordinate length");
        FFElem { field: self.clone(), c: c.into_iter().map(|x| x % self.p).collect() }
    }

    pub fn from_index(self: &Arc<Self>, idx: u64) -> FFElem {
        FFElem { field: self.clone(), c: self.coords_of_index(idx) }
    }

    pub fn one(self: &Arc<Self>) -> FFElem {
        FFElem { field: self.clone(), c: self.one_c() }
    }

    pub fn zero(self: &Arc<Self>) -> FFElem {
        FFElem { field: self.clone(), c: self.zero_c() }
    }

    /// Every element, in index order.
    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = FFElem> + '_ {
        (0..self.size).map(move |i| self.from_index(i))
    }
}

fn check_size(p: u64, n: usize) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    let size = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size >= MAX_FIELD_SIZE as u128 {
        return Err(Error::InvalidInput(format!("field of size {p}^{n} exceeds 2^20")));
    }
    Ok(())
}

fn is_irreducible_poly(m: &[u64], p: u64) -> bool {
    let n = m.len() - 1;
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    // Rabin: x^{p^n} = x mod m and gcd(x^{p^{n/r}} - x, m) = 1 for primes r | n
    let frob = |k: usize| {
        let mut r = x.clone();
        for _ in 0..k {
            r = fp_poly::powmod(&r, p, m, p);
        }
        r
    };
    if fp_poly::sub(&frob(n), &x, p).iter().any(|&c| c != 0) {
        return false;
    }
    for r in prime_factors(n as u64) {
        let h = fp_poly::sub(&frob(n / r as usize), &x, p);
        let g = fp_poly::gcd(&h, m, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn is_primitive_poly(m: &[u64], p: u64) -> bool {
    let n = m.len() - 1;
    if m[0] == 0 || !is_irreducible_poly(m, p) {
        return false;
    }
    let order = p.pow(n as u32) - 1;
    if n == 1 {
        let root = (p - m[0]) % p;
        return prime_factors(order)
            .iter()
            .all(|&r| crate::arith::pow_mod(root, order / r, p) != 1);
    }
    let x = vec![0, 1];
    prime_factors(order).iter().all(|&r| fp_poly::powmod(&x, order / r, m, p) != vec![1])
}

/// An element of a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct FFElem {
    field: Arc<FFq>,
    c: Vec<u64>,
}

impl fmt::Debug for FFElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.c)
    }
}

/// Field operation selector for [`ff_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfOp {
    Add,
    Mul,
    Inv,
    Pow(u64),
}

impl FFElem {
    pub fn field(&self) -> &Arc<FFq> {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.c
    }

    pub fn index(&self) -> u64 {
        self.field.index_of(&self.c)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c == self.field.one_c()
    }

    fn check(&self, other: &FFElem) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }

    fn with(&self, c: Vec<u64>) -> FFElem {
        FFElem { field: self.field.clone(), c }
    }

    pub fn add(&self, o: &FFElem) -> Result<FFElem> {
        self.check(o)?;
        Ok(self.with(self.field.add_c(&self.c, &o.c)))
    }

    pub fn sub(&self, o: &FFElem) -> Result<FFElem> {
        self.check(o)?;
        Ok(self.with(self.field.sub_c(&self.c, &o.c)))
    }

    pub fn mul(&self, o: &FFElem) -> Result<FFElem> {
        self.check(o)?;
        Ok(self.with(self.field.mul_c(&self.c, &o.c)))
    }

    pub fn inv(&self) -> Result<FFElem> {
        Ok(self.with(self.field.inv_c(&self.c)?))
    }

    pub fn pow(&self, e: u64) -> FFElem {
        self.with(self.field.pow_c(&self.c, e))
    }

    pub fn frobenius(&self, d: usize) -> FFElem {
        self.with(self.field.frobenius_c(&self.c, d))
    }
}

pub fn ff_arith(a: &FFElem, b: &FFElem, op: FfOp) -> Result<FFElem> {
    a.check(b)?;
    match op {
        FfOp::Add => a.add(b),
        FfOp::Mul => a.mul(b),
        FfOp::Inv => a.inv(),
        FfOp::Pow(e) => Ok(a.pow(e)),
    }
}

/// `a^{p^d}`.
pub fn ff_frobenius(a: &FFElem, d: usize) -> FFElem {
    a.frobenius(d)
}

/// Relative norm and trace from `F_{p^n}` down to `F_{p^d}`.
pub fn ff_norm_trace(a: &FFElem, d: usize) -> Result<(FFElem, FFElem)> {
    let n = a.field.n;
    if d == 0 || n % d != 0 {
        return Err(Error::DegreeError { d, n });
    }
    let mut norm = a.field.one();
    let mut trace = a.field.zero();
    let mut conj = a.clone();
    for _ in 0..n / d {
        norm = norm.mul(&conj)?;
        trace = trace.add(&conj)?;
        conj = conj.frobenius(d);
    }
    debug_assert_eq!(norm.frobenius(d), norm);
    debug_assert_eq!(trace.frobenius(d), trace);
    Ok((norm, trace))
}

/// Solves `x^{p^d - 1} = c`, returning the solution with the smallest index.
pub fn ff_solve_hilbert90(c: &FFElem, d: usize) -> Result<FFElem> {
    let field = &c.field;
    let (norm, _) = ff_norm_trace(c, d)?;
    if !norm.is_one() {
        return Err(Error::NormConditionViolated);
    }
    let order = field.size - 1;
    let step = field.p.pow(d as u32) - 1;
    let b = field.log_gen(&c.c).ok_or(Error::NormConditionViolated)?;
    if step == 0 || b % step != 0 {
        if step == 0 {
            // d = 0 degenerates to x^0 = c
            return if c.is_one() { Ok(field.one()) } else { Err(Error::NormConditionViolated) };
        }
        return Err(Error::NormConditionViolated);
    }
    // solutions: exponents a with a*step = b mod order
    let period = order / step;
    let base = b / step;
    let best = (0..step)
        .map(|t| field.exp_gen(base + t * period))
        .min_by_key(|x| field.index_of(x))
        .expect("nonempty coset");
    Ok(field.elem(best))
}

/// Solves `y^{p^d} - y = b` as an F_p-linear system; free coordinates are zero.
pub fn ff_solve_artin_schreier(b: &FFElem, d: usize) -> Result<FFElem> {
    let (_, trace) = ff_norm_trace(b, d)?;
    if !trace.is_zero() {
        return Err(Error::TraceConditionViolated);
    }
    let field = b.field.clone();
    let y = solve_fp_linear(&field, |y| y.frobenius(d).sub(y).expect("same field"), b)
        .ok_or(Error::TraceConditionViolated)?;
    Ok(y)
}

/// Brute-force discrete logarithm of `x` to the base `g`.
pub fn ff_dlog(x: &FFElem, g: &FFElem) -> Result<u64> {
    x.check(g)?;
    if x.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let field = &x.field;
    let order = field.size - 1;
    let lg = field.log_gen(&g.c).ok_or(Error::NotAGenerator)?;
    let inv = inv_mod(lg, order).ok_or(Error::NotAGenerator)?;
    if order == 1 {
        return Ok(0);
    }
    let lx = field.log_gen(&x.c).expect("nonzero");
    Ok(crate::arith::mul_mod(lx, inv, order))
}

/// Solves `f(y) = b` for an F_p-linear map `f` on the field by Gaussian
/// elimination with first-nonzero pivoting; free variables are set to zero.
pub fn solve_fp_linear(
    field: &Arc<FFq>,
    f: impl Fn(&FFElem) -> FFElem,
    b: &FFElem,
) -> Option<FFElem> {
    let n = field.n;
    let p = field.p;
    let cols: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut e = field.zero_c();
            e[i] = 1;
            f(&field.elem(e)).c
        })
        .collect();
    // augmented rows
    let mut rows: Vec<Vec<u64>> = (0..n)
        .map(|r| {
            let mut row: Vec<u64> = cols.iter().map(|c| c[r]).collect();
            row.push(b.c[r]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(pr) = (rank..n).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, pr);
        let inv = inv_mod(rows[rank][col], p).expect("prime field");
        for x in rows[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..n {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in 0..=n {
                    rows[r][c] = (rows[r][c] + p * p - factor * rows[rank][c] % p) % p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| r[n] != 0) {
        return None;
    }
    let mut y = field.zero_c();
    for (r, &col) in pivots.iter().enumerate() {
        y[col] = rows[r][n];
    }
    Some(field.elem(y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Arc<FFq> {
        FFq::canonical(2, 2).unwrap()
    }

    #[test]
    fn canonical_moduli() {
        assert_eq!(f4().modulus(), &[1, 1, 1]);
        assert_eq!(FFq::canonical(3, 2).unwrap().modulus(), &[2, 1, 1]);
        assert_eq!(FFq::canonical(5, 1).unwrap().modulus(), &[2, 1]);
        assert!(FFq::canonical(2, 4).unwrap().modulus_is_primitive());
        assert!(FFq::with_modulus(2, vec![1, 0, 1]).is_err());
        assert!(FFq::canonical(2, 20).is_err());
    }

    #[test]
    fn f4_multiplication() {
        let f = f4();
        let w = f.elem(vec![0, 1]);
        assert_eq!(ff_arith(&w, &w, FfOp::Mul).unwrap().coords(), &[1, 1]);
        assert!(ff_arith(&f.one(), &f.one(), FfOp::Inv).unwrap().is_one());
        assert_eq!(f.zero().inv(), Err(Error::DivisionByZero));
        for g in f.elements().skip(1) {
            assert!(g.pow(3).is_one());
        }
    }

    #[test]
    fn parent_mismatch() {
        let a = f4().one();
        let b = FFq::canonical(2, 3).unwrap().one();
        assert_eq!(a.mul(&b), Err(Error::ParentMismatch));
    }

    #[test]
    fn frobenius_examples() {
        let f = f4();
        let w = f.elem(vec![0, 1]);
        assert_eq!(ff_frobenius(&w, 1).coords(), &[1, 1]);
        assert_eq!(ff_frobenius(&w, 0), w);
        assert_eq!(ff_frobenius(&w, 2), w);
    }

    #[test]
    fn norm_trace_examples() {
        let f = f4();
        for a in f.elements().skip(1) {
            assert!(ff_norm_trace(&a, 1).unwrap().0.is_one());
        }
        assert!(ff_norm_trace(&f.zero(), 1).unwrap().1.is_zero());
        assert_eq!(ff_norm_trace(&f.one(), 3), Err(Error::DegreeError { d: 3, n: 2 }));
        // norm of a generator of F_9^x generates F_3^x
        let f9 = FFq::canonical(3, 2).unwrap();
        let g = f9.generator();
        let n = ff_norm_trace(&g, 1).unwrap().0;
        assert_eq!(n.coords(), &[2, 0]);
        let images: std::collections::BTreeSet<u64> = f9
            .elements()
            .skip(1)
            .map(|a| ff_norm_trace(&a, 1).unwrap().0.index())
            .collect();
        assert_eq!(images.into_iter().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn hilbert90_examples() {
        let f = f4();
        assert!(ff_solve_hilbert90(&f.one(), 1).unwrap().is_one());
        let w = f.elem(vec![0, 1]);
        assert_eq!(ff_solve_hilbert90(&w, 1).unwrap(), w);
        let f9 = FFq::canonical(3, 2).unwrap();
        for c in f9.elements().skip(1).filter(|c| c.pow(4).is_one()) {
            let x = ff_solve_hilbert90(&c, 1).unwrap();
            assert_eq!(x.pow(2), c);
            // brute force: smallest solution
            let brute = f9.elements().skip(1).find(|x| x.pow(2) == c).unwrap();
            assert_eq!(brute, x);
        }
        let bad = f9.elements().skip(1).find(|c| !c.pow(4).is_one()).unwrap();
        assert_eq!(ff_solve_hilbert90(&bad, 1), Err(Error::NormConditionViolated));
    }

    #[test]
    fn artin_schreier_examples() {
        let f = f4();
        assert!(ff_solve_artin_schreier(&f.zero(), 1).unwrap().is_zero());
        let y = ff_solve_artin_schreier(&f.one(), 1).unwrap();
        assert!(y.pow(2).sub(&y).unwrap().is_one());
        let y1 = y.add(&f.one()).unwrap();
        assert!(y1.pow(2).sub(&y1).unwrap().is_one());
        let w = f.elem(vec![0, 1]);
        assert_eq!(ff_solve_artin_schreier(&w, 1), Err(Error::TraceConditionViolated));
    }

    #[test]
    fn dlog_examples() {
        let f = f4();
        let w = f.elem(vec![0, 1]);
        assert_eq!(ff_dlog(&f.one(), &w).unwrap(), 0);
        assert_eq!(ff_dlog(&w, &w).unwrap(), 1);
        assert_eq!(ff_dlog(&f.elem(vec![1, 1]), &w).unwrap(), 2);
        assert_eq!(ff_dlog(&f.zero(), &w), Err(Error::ZeroArgument));
        let f9 = FFq::canonical(3, 2).unwrap();
        let minus_one = f9.elem(vec![2, 0]);
        assert_eq!(ff_dlog(&f9.one(), &minus_one), Err(Error::NotAGenerator));
    }

    #[test]
    fn dlog_round_trip_all_units() {
        for (p, n) in [(2, 3), (3, 2), (5, 2), (2, 5)] {
            let f = FFq::canonical(p, n).unwrap();
            let g = f.generator();
            for x in f.elements().skip(1) {
                assert_eq!(g.pow(ff_dlog(&x, &g).unwrap()), x);
            }
        }
    }
}
