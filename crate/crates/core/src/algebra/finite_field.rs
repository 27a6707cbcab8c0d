//! Finite fields `F_{p^k} = F_p[u]/(m(u))` with a deterministically chosen
//! irreducible modulus.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use smallvec::{smallvec, SmallVec};

use super::polynomial::Polynomial;
use crate::error::{Error, Result};

/// Largest field order we accept; keeps exponent arithmetic in `u128`.
const MAX_ORDER_BITS: u32 = 62;

#[derive(Debug, PartialEq, Eq)]
pub struct FiniteField {
    p: u64,
    k: u32,
    /// Monic modulus, low degree first, `k + 1` coefficients.
    modulus: Vec<u64>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Fq {
    field: Arc<FiniteField>,
    coords: Coords,
}

/// Inline storage for the common small degrees.
type Coords = SmallVec<[u64; 4]>;

pub type FiniteFieldElement = Fq;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

// Dense polynomials over F_p as coefficient vectors, low degree first.

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn raw_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(&mut out);
    out
}

fn raw_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod_p(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = mulmod(r[top], lead_inv, p);
        if c != 0 {
            for i in 0..=dm {
                let sub = mulmod(c, m[i], p);
                r[top - dm + i] = (r[top - dm + i] + p - sub) % p;
            }
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn raw_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = raw_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn raw_powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = raw_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = raw_rem(&raw_mul(&result, &b, p), m, p);
        }
        b = raw_rem(&raw_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    result
}

/// Ben-Or: `f` of degree `k` is irreducible iff `gcd(x^{p^i} - x, f) = 1`
/// for `1 <= i <= k/2`.
fn is_irreducible_raw(f: &[u64], p: u64) -> bool {
    let k = f.len() - 1;
    let x = vec![0u64, 1];
    let mut h = raw_rem(&x, f, p);
    for _ in 1..=k / 2 {
        h = raw_powmod(&h, p as u128, f, p);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = raw_gcd(&diff, f, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

fn smallest_irreducible(p: u64, k: u32) -> Vec<u64> {
    let k = k as usize;
    let mut n: u128 = 0;
    loop {
        let mut f = Vec::with_capacity(k + 1);
        let mut m = n;
        for _ in 0..k {
            f.push((m % p as u128) as u64);
            m /= p as u128;
        }
        f.push(1);
        if is_irreducible_raw(&f, p) {
            return f;
        }
        n += 1;
    }
}

/// The smallest monic irreducible polynomial of degree `k` over `F_p`, in the
/// enumeration ordered by `sum c_i p^i` over the non-leading coefficients.
pub fn irreducible_modulus(p: u64, k: u32) -> Result<Polynomial<Fq>> {
    let prime = FiniteField::new(p, 1)?;
    let coeffs = smallest_irreducible(p, k);
    Ok(Polynomial::new(
        coeffs.into_iter().map(|c| prime.from_u64(c)).collect(),
    ))
}

impl FiniteField {
    pub fn new(p: u64, k: u32) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::InvalidDescriptor(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidDescriptor("extension degree must be >= 1".into()));
        }
        if p >= 1 << 31 || (64 - p.leading_zeros()) * k > MAX_ORDER_BITS {
            return Err(Error::InvalidDescriptor(format!("F_{p}^{k} is too large")));
        }
        let modulus = if k == 1 { vec![0, 1] } else { smallest_irreducible(p, k) };
        Ok(Arc::new(Self { p, k, modulus }))
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.k)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>) -> Fq {
        Fq { field: self.clone(), coords: smallvec![0; self.k as usize] }
    }

    pub fn one(self: &Arc<Self>) -> Fq {
        self.from_u64(1)
    }

    pub fn from_u64(self: &Arc<Self>, n: u64) -> Fq {
        let mut coords: Coords = smallvec![0; self.k as usize];
        coords[0] = n % self.p;
        Fq { field: self.clone(), coords }
    }

    pub fn from_i64(self: &Arc<Self>, n: i64) -> Fq {
        let p = self.p as i64;
        self.from_u64(n.rem_euclid(p) as u64)
    }

    /// Reduces an arbitrary coefficient vector modulo `p` and the modulus.
    pub fn from_coords(self: &Arc<Self>, coords: &[u64]) -> Fq {
        let mut c: Coords = coords.iter().map(|x| x % self.p).collect();
        if c.len() > self.k as usize {
            c = Coords::from_vec(raw_rem(&c, &self.modulus, self.p));
        }
        c.resize(self.k as usize, 0);
        Fq { field: self.clone(), coords: c }
    }

    /// The class of `u`, the adjoined root of the modulus.
    pub fn generator(self: &Arc<Self>) -> Fq {
        self.from_coords(&[0, 1])
    }

    /// Bijection `0..p^k -> F` via base-`p` digits.
    pub fn from_index(self: &Arc<Self>, mut n: u128) -> Fq {
        let mut coords = Coords::with_capacity(self.k as usize);
        for _ in 0..self.k {
            coords.push((n % self.p as u128) as u64);
            n /= self.p as u128;
        }
        Fq { field: self.clone(), coords }
    }

    pub fn elements(self: &Arc<Self>) -> impl Iterator<Item = Fq> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn random<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> Fq {
        let coords = (0..self.k).map(|_| rng.gen_range(0..self.p)).collect();
        Fq { field: self.clone(), coords }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> Fq {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }
}

impl Fq {
    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn index(&self) -> u128 {
        self.coords
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.field.p as u128 + c as u128)
    }

    fn same_field(&self, other: &Fq) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!(
                "F_{}^{} vs F_{}^{}",
                self.field.p, self.field.k, other.field.p, other.field.k
            )))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    /// The element as a member of the prime field, if it lies there.
    pub fn as_prime(&self) -> Option<u64> {
        if self.coords[1..].iter().all(|&c| c == 0) {
            Some(self.coords[0])
        } else {
            None
        }
    }

    pub fn zero_like(&self) -> Fq {
        self.field.zero()
    }

    pub fn one_like(&self) -> Fq {
        self.field.one()
    }

    pub fn add(&self, other: &Fq) -> Fq {
        let p = self.field.p;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a + b) % p)
            .collect();
        Fq { field: self.field.clone(), coords }
    }

    pub fn neg(&self) -> Fq {
        let p = self.field.p;
        let coords = self.coords.iter().map(|a| (p - a) % p).collect();
        Fq { field: self.field.clone(), coords }
    }

    pub fn sub(&self, other: &Fq) -> Fq {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Fq) -> Fq {
        let f = &self.field;
        if f.k == 1 {
            return Fq {
                field: f.clone(),
                coords: smallvec![mulmod(self.coords[0], other.coords[0], f.p)],
            };
        }
        let mut prod = raw_mul(&self.coords, &other.coords, f.p);
        prod = raw_rem(&prod, &f.modulus, f.p);
        prod.resize(f.k as usize, 0);
        Fq { field: f.clone(), coords: Coords::from_vec(prod) }
    }

    pub fn mul_u64(&self, n: u64) -> Fq {
        self.mul(&self.field.from_u64(n % self.field.p))
    }

    pub fn pow(&self, mut e: u128) -> Fq {
        let mut result = self.one_like();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    pub fn inv(&self) -> Result<Fq> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field.order() - 2))
    }

    pub fn try_add(&self, other: &Fq) -> Result<Fq> {
        self.same_field(other)?;
        Ok(self.add(other))
    }

    pub fn try_mul(&self, other: &Fq) -> Result<Fq> {
        self.same_field(other)?;
        Ok(self.mul(other))
    }

    pub fn div(&self, other: &Fq) -> Result<Fq> {
        self.same_field(other)?;
        Ok(self.mul(&other.inv()?))
    }

    pub fn frobenius(&self) -> Fq {
        self.pow(self.field.p as u128)
    }

    /// Inverse of the Frobenius, `x^{p^{k-1}}`.
    pub fn pth_root(&self) -> Fq {
        let mut r = self.clone();
        for _ in 1..self.field.k {
            r = r.frobenius();
        }
        r
    }

    /// Absolute trace to `F_p`.
    pub fn trace(&self) -> u64 {
        let mut acc = self.clone();
        let mut x = self.clone();
        for _ in 1..self.field.k {
            x = x.frobenius();
            acc = acc.add(&x);
        }
        debug_assert!(acc.as_prime().is_some());
        acc.coords[0]
    }

    /// Is `self` a `q`-th power of some element of the field?
    pub fn is_qth_power(&self, q: u64) -> bool {
        if self.is_zero() {
            return true;
        }
        let n = self.field.order() - 1;
        let g = gcd_u128(q as u128, n);
        self.pow(n / g).is_one()
    }

    /// Some `y` with `y^q = self`, if one exists.
    pub fn nth_root(&self, q: u64) -> Option<Fq> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let n = self.field.order() - 1;
        let qq = q as u128;
        if n % qq != 0 {
            let e = inv_mod_u128(qq % n.max(1), n)?;
            return Some(self.pow(e));
        }
        if !self.pow(n / qq).is_one() {
            return None;
        }
        let mut s = 0u32;
        let mut t = n;
        while t % qq == 0 {
            t /= qq;
            s += 1;
        }
        let nonresidue = (2..self.field.order())
            .map(|i| self.field.from_index(i))
            .find(|z| !z.pow(n / qq).is_one())?;
        let g = nonresidue.pow(t);
        // r^q = a * (a^t)^m with m = (u q - 1) / t, u = q^{-1} mod t.
        let u = if t == 1 { 0 } else { inv_mod_u128(qq % t, t)? };
        let r = self.pow(u);
        let uq = u * qq;
        let at = self.pow(t);
        let e = if uq >= 1 {
            at.pow((uq - 1) / t)
        } else {
            at.inv().ok()?
        };
        let h = e.inv().ok()?;
        // Discrete log of h in the cyclic group <g> of order q^s.
        let gamma = g.pow(qq.pow(s - 1));
        let g_inv = g.inv().ok()?;
        let mut j: u128 = 0;
        for i in 0..s {
            let hi = g_inv.pow(j).mul(&h).pow(qq.pow(s - 1 - i));
            let mut acc = self.one_like();
            let mut digit = None;
            for d in 0..qq {
                if acc == hi {
                    digit = Some(d);
                    break;
                }
                acc = acc.mul(&gamma);
            }
            j += digit? * qq.pow(i);
        }
        if j % qq != 0 {
            return None;
        }
        let root = r.mul(&g.pow(j / qq));
        debug_assert!(root.pow(qq) == *self);
        Some(root)
    }

    /// Some `y` with `y^p - y = self`; exists iff the trace vanishes.
    pub fn artin_schreier_root(&self) -> Option<Fq> {
        let f = &self.field;
        let p = f.p;
        let k = f.k as usize;
        // Columns of the F_p-linear map y -> y^p - y on the basis 1, u, ..., u^{k-1}.
        let mut cols = Vec::with_capacity(k);
        for i in 0..k {
            let mut e = vec![0u64; k];
            e[i] = 1;
            let b = f.from_coords(&e);
            cols.push(b.frobenius().sub(&b).coords.to_vec());
        }
        // Augmented matrix rows.
        let mut m: Vec<Vec<u64>> = (0..k)
            .map(|r| {
                let mut row: Vec<u64> = (0..k).map(|c| cols[c][r]).collect();
                row.push(self.coords[r]);
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..k {
            let Some(pr) = (row..k).find(|&r| m[r][col] != 0) else {
                continue;
            };
            m.swap(row, pr);
            let inv = inv_mod_p(m[row][col], p);
            for c in 0..=k {
                m[row][c] = mulmod(m[row][c], inv, p);
            }
            for r in 0..k {
                if r != row && m[r][col] != 0 {
                    let factor = m[r][col];
                    for c in 0..=k {
                        let sub = mulmod(factor, m[row][c], p);
                        m[r][c] = (m[r][c] + p - sub) % p;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        if m[row..].iter().any(|r| r[k] != 0) {
            return None;
        }
        let mut y = vec![0u64; k];
        for (r, &c) in pivots.iter().enumerate() {
            y[c] = m[r][k];
        }
        let y = f.from_coords(&y);
        debug_assert!(y.frobenius().sub(&y) == *self);
        Some(y)
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

fn inv_mod_u128(a: u128, m: u128) -> Option<u128> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u128)
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Fq {
    /// `2`, `1+2*u`, `u^2` and so on; re-parsable by the literal grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            terms.push(match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "u".to_string(),
                (1, c) => format!("{c}*u"),
                (i, 1) => format!("u^{i}"),
                (i, c) => format!("{c}*u^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join("+"))
        }
    }
}
