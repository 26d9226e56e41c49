//! Arithmetic in the tower `F_p ⊂ F_q ⊂ F_{q^t}`.
//!
//! The whole tower lives inside a single extension of degree `e·t` over the
//! prime field. Elements are stored by their polynomial encoding
//! `Σ c_i p^i` (constant term in the least significant digit), so every
//! element of the field is an integer in `0..q^t`. Multiplication goes
//! through a full discrete-log table; addition in odd characteristic goes
//! through a Zech table, in characteristic two it is a xor.
//!
//! The subfield `F_q` is the fixed field of `x ↦ x^q`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported `q^t`.
pub const MAX_FIELD_ORDER: u64 = 1 << 22;

const NO_LOG: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    /// The element whose polynomial encoding is `i`. No range check.
    pub const fn from_index(i: u32) -> Elem {
        Elem(i)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Number of points of `PG(s, q)`, i.e. `(q^{s+1} - 1)/(q - 1)`. Defined for
/// `s >= -1` with `theta(-1, q) = 0`.
pub fn theta(s: i64, q: u64) -> u64 {
    assert!(s >= -1, "theta is defined for s >= -1");
    assert!(q >= 2, "theta needs q >= 2");
    let mut acc: u64 = 0;
    let mut pw: u64 = 1;
    for _ in 0..=s {
        acc = acc.checked_add(pw).expect("theta overflow");
        pw = pw.saturating_mul(q);
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    match prime_factors(q).as_slice() {
        [p] => {
            let (mut e, mut rest) = (0, q);
            while rest > 1 {
                rest /= p;
                e += 1;
            }
            Some((*p as u32, e))
        }
        _ => None,
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Dense polynomials over `F_p`, constant term first. Used only while the
/// tables are being built.
mod poly {
    pub fn rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
        // g monic
        let dg = g.len() - 1;
        let mut r = f.to_vec();
        if r.len() <= dg {
            return r;
        }
        for i in (dg..r.len()).rev() {
            let c = r[i];
            if c == 0 {
                continue;
            }
            for j in 0..=dg {
                let k = i - dg + j;
                r[k] = (r[k] + (p - c) * g[j]) % p;
            }
        }
        r.truncate(dg);
        r
    }

    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let d = f.len() - 1;
        if d <= 1 {
            return d == 1;
        }
        for k in 1..=d / 2 {
            let count = (p as u64).pow(k as u32);
            let mut g = vec![0u32; k + 1];
            g[k] = 1;
            for key in 0..count {
                let mut rest = key;
                for c in g.iter_mut().take(k) {
                    *c = (rest % p as u64) as u32;
                    rest /= p as u64;
                }
                if rem(f, &g, p).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }

    /// `a * b mod modulus`, all of length `d` (modulus has length `d + 1`).
    pub fn mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32, out: &mut Vec<u32>) {
        let d = modulus.len() - 1;
        let mut prod = vec![0u32; 2 * d];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
        }
        for i in (d..2 * d).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..=d {
                let k = i - d + j;
                prod[k] = (prod[k] + (p - c) * modulus[j]) % p;
            }
        }
        prod.truncate(d);
        *out = prod;
    }

    pub fn powmod(a: &[u32], mut n: u64, modulus: &[u32], p: u32) -> Vec<u32> {
        let d = modulus.len() - 1;
        let mut acc = vec![0u32; d];
        acc[0] = 1;
        let mut base = a.to_vec();
        let mut tmp = Vec::new();
        while n > 0 {
            if n & 1 == 1 {
                mulmod(&acc, &base, modulus, p, &mut tmp);
                std::mem::swap(&mut acc, &mut tmp);
            }
            mulmod(&base, &base, modulus, p, &mut tmp);
            std::mem::swap(&mut base, &mut tmp);
            n >>= 1;
        }
        acc
    }

    /// Digits of the `key`-th polynomial in lexicographic order comparing
    /// coefficients from the constant term upward.
    pub fn lex_digits(key: u64, p: u32, d: usize) -> Vec<u32> {
        let mut out = vec![0u32; d];
        let mut rest = key;
        for i in (0..d).rev() {
            out[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        out
    }
}

/// The field `F_{q^t}` with `q = p^e`, together with its subfield `F_q`.
pub struct FieldCtx {
    p: u32,
    e: u32,
    t: u32,
    degree: u32,
    q: u32,
    order: u32,
    modulus: Vec<u32>,
    generator: Elem,
    exp: Vec<Elem>,
    log: Vec<u32>,
    zech: Vec<u32>,
    base: Vec<Elem>,
    pow_p: Vec<u64>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("t", &self.t)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl FieldCtx {
    /// Builds `F_{q^t}`, `q = p^e`. The modulus is the lexicographically
    /// smallest monic irreducible of degree `e·t` and the generator the
    /// smallest primitive element, both in the order that compares
    /// coefficients from the constant term upward.
    pub fn new(p: u32, e: u32, t: u32) -> Result<FieldCtx> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if e == 0 || t == 0 {
            return Err(Error::InvalidParameters(format!("need e >= 1 and t >= 1, got e={e}, t={t}")));
        }
        let degree = e.checked_mul(t).ok_or_else(|| Error::InvalidParameters("degree overflow".into()))?;
        let order = (p as u128).checked_pow(degree).unwrap_or(u128::MAX);
        if order > MAX_FIELD_ORDER as u128 {
            return Err(Error::BudgetExceeded { needed: order, budget: MAX_FIELD_ORDER as u128 });
        }
        let order = order as u32;
        let q = p.pow(e);
        let d = degree as usize;

        let modulus = (0..(p as u64).pow(degree))
            .map(|key| {
                let mut m = poly::lex_digits(key, p, d);
                m.push(1);
                m
            })
            .find(|m| poly::is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");

        let group = (order - 1) as u64;
        let factors = prime_factors(group);
        let mut one = vec![0u32; d];
        one[0] = 1;
        let gen_digits = (1..(p as u64).pow(degree))
            .map(|key| poly::lex_digits(key, p, d))
            .find(|g| {
                factors
                    .iter()
                    .all(|&r| poly::powmod(g, group / r, &modulus, p) != one)
            })
            .expect("the multiplicative group of a finite field is cyclic");

        let encode = |digits: &[u32]| -> u32 { digits.iter().rev().fold(0u32, |acc, &c| acc * p + c) };

        let mut exp = Vec::with_capacity(group as usize);
        let mut log = vec![NO_LOG; order as usize];
        let mut cur = one.clone();
        let mut tmp = Vec::new();
        for k in 0..group as u32 {
            let code = encode(&cur);
            if log[code as usize] != NO_LOG {
                return Err(Error::Consistency("generator order below q^t - 1".into()));
            }
            log[code as usize] = k;
            exp.push(Elem(code));
            poly::mulmod(&cur, &gen_digits, &modulus, p, &mut tmp);
            std::mem::swap(&mut cur, &mut tmp);
        }
        if cur != one {
            return Err(Error::Consistency("generator does not have order q^t - 1".into()));
        }

        let zech = if p == 2 {
            Vec::new()
        } else {
            exp.iter()
                .map(|&x| {
                    let c0 = x.0 % p;
                    let y = if c0 == p - 1 { x.0 - (p - 1) } else { x.0 + 1 };
                    log[y as usize]
                })
                .collect()
        };

        let pow_p = (0..degree)
            .map(|h| {
                let mut acc = 1u64;
                for _ in 0..h {
                    acc = acc * p as u64 % group.max(1);
                }
                acc
            })
            .collect();

        let step = (group / (q as u64 - 1).max(1)) as usize;
        let mut base: Vec<Elem> = std::iter::once(Elem::ZERO)
            .chain((0..(q - 1) as usize).map(|k| exp[(k * step) % exp.len()]))
            .collect();
        base.sort();

        Ok(FieldCtx {
            p,
            e,
            t,
            degree,
            q,
            order,
            modulus,
            generator: Elem(encode(&gen_digits)),
            exp,
            log,
            zech,
            base,
            pow_p,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn t(&self) -> u32 {
        self.t
    }
    /// Degree `e·t` over the prime field.
    pub fn degree(&self) -> u32 {
        self.degree
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// `q^t`.
    pub fn order(&self) -> u32 {
        self.order
    }
    /// Coefficients of the modulus, constant term first, monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn generator(&self) -> Elem {
        self.generator
    }
    /// `θ_{t-1} = (q^t - 1)/(q - 1)`, the number of points of `PG(t-1, q)`.
    pub fn theta_top(&self) -> u64 {
        theta(self.t as i64 - 1, self.q as u64)
    }

    fn group_order(&self) -> u64 {
        self.order as u64 - 1
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.order).map(Elem)
    }

    /// Elements of the subfield `F_q`, sorted by encoding.
    pub fn base_elements(&self) -> &[Elem] {
        &self.base
    }

    pub fn in_base(&self, x: Elem) -> bool {
        x.is_zero() || self.log[x.0 as usize] as u64 % self.theta_top() == 0
    }

    pub fn coefficients(&self, x: Elem) -> Vec<u32> {
        let mut rest = x.0;
        (0..self.degree)
            .map(|_| {
                let c = rest % self.p;
                rest /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Elem {
        assert!(coeffs.len() <= self.degree as usize);
        Elem(coeffs.iter().rev().fold(0u32, |acc, &c| acc * self.p + c % self.p))
    }

    /// The prime-field element `k mod p`.
    pub fn from_int(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let n = self.group_order();
        let la = self.log[a.0 as usize] as u64;
        let lb = self.log[b.0 as usize] as u64;
        let k = (lb + n - la) % n;
        match self.zech[k as usize] {
            NO_LOG => Elem::ZERO,
            z => self.exp[((la + z as u64) % n) as usize],
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a.is_zero() {
            return a;
        }
        let n = self.group_order();
        self.exp[((self.log[a.0 as usize] as u64 + n / 2) % n) as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let n = self.group_order();
        self.exp[((self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64) % n) as usize]
    }

    /// Panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        let n = self.group_order();
        self.exp[((n - self.log[a.0 as usize] as u64) % n) as usize]
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let n = self.group_order();
        let e = (self.log[a.0 as usize] as u128 * (k % n) as u128 % n as u128) as usize;
        self.exp[e]
    }

    /// `a^k` for a signed exponent; `None` for `0^k` with `k < 0`.
    pub fn pow_signed(&self, a: Elem, k: i64) -> Option<Elem> {
        if k >= 0 {
            return Some(self.pow(a, k as u64));
        }
        if a.is_zero() {
            return None;
        }
        let n = self.group_order() as i64;
        Some(self.pow(a, k.rem_euclid(n) as u64))
    }

    /// `x^{p^h}`; `h` is taken modulo `e·t`, so negative values are allowed.
    #[inline]
    pub fn frobenius(&self, x: Elem, h: i64) -> Elem {
        if x.is_zero() {
            return x;
        }
        let h = h.rem_euclid(self.degree as i64) as usize;
        let n = self.group_order();
        let e = (self.log[x.0 as usize] as u64 * self.pow_p[h]) % n;
        self.exp[e as usize]
    }

    /// `Σ_{i<t} x^{q^i}`, always in `F_q`.
    pub fn trace(&self, x: Elem) -> Elem {
        (0..self.t as i64).fold(Elem::ZERO, |acc, i| self.add(acc, self.frobenius(x, i * self.e as i64)))
    }

    /// `x^{θ_{t-1}}`, always in `F_q`.
    pub fn norm(&self, x: Elem) -> Elem {
        self.pow(x, self.theta_top())
    }

    pub fn dlog(&self, x: Elem) -> Result<u32> {
        if x.is_zero() {
            return Err(Error::LogOfZero);
        }
        Ok(self.log[x.0 as usize])
    }

    /// `g^k` for the fixed generator `g`.
    pub fn exp(&self, k: i64) -> Elem {
        self.exp[k.rem_euclid(self.group_order() as i64) as usize]
    }
}
