//! Exact arithmetic in GF(q), q = p^n.
//!
//! Elements are encoded as integers `0..q`: the code of
//! `a0 + a1 t + ... + a(n-1) t^(n-1)` in `GF(p)[t]/(modulus)` is `sum ai p^i`.
//! The modulus is the least monic irreducible of degree `n` when coefficient
//! vectors `(c0, ..., c(n-1))` are read as base-`p` integers, so the encoding of
//! every field is reproducible without external tables. Prime fields use the
//! modulus `t`, which makes the encoding the usual residue.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on the field order.
pub const DEFAULT_MAX_Q: u64 = 1 << 16;

/// Extension fields up to this order keep a full addition table.
const ADD_TABLE_MAX_Q: u32 = 512;

/// Shared handle to a field context.
pub type Field = Arc<FieldCtx>;

/// A field element, identified by its integer code.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    #[inline]
    pub const fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    /// Unary; the second operand is ignored.
    Neg,
}

/// Parameters of a field as echoed in machine-readable output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub q: u32,
    pub p: u32,
    pub n: u32,
    /// Modulus coefficients over GF(p), ascending, monic.
    pub modulus: Vec<u32>,
}

/// A concrete finite field GF(q). Immutable once built.
pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    add_table: Option<Vec<u32>>,
    // exp has length 2(q-1) so that log a + log b never needs reducing.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("q", &self.q)
            .field("p", &self.p)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Splits `q` as `p^n` with `p` prime, or returns `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 0;
    let mut d = 2u64;
    while d * d <= q {
        if q % d == 0 {
            p = d;
            break;
        }
        d += 1;
    }
    if p == 0 {
        return Some((q, 1));
    }
    let mut rest = q;
    let mut n = 0;
    while rest % p == 0 {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p, n))
}

impl FieldCtx {
    /// Builds the canonical GF(q) under the default size cap.
    pub fn new(q: u64) -> Result<Field> {
        Self::with_max_q(q, DEFAULT_MAX_Q)
    }

    pub fn with_max_q(q: u64, max_q: u64) -> Result<Field> {
        let (p, n) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > max_q || q > u64::from(u32::MAX) {
            return Err(Error::FieldTooLarge { q, cap: max_q });
        }
        let (p, q) = (p as u32, q as u32);
        let modulus = if n == 1 { vec![0, 1] } else { least_irreducible(p, n) };
        let mut ctx = FieldCtx {
            p,
            n,
            q,
            modulus,
            add_table: None,
            exp: Vec::new(),
            log: Vec::new(),
        };
        if n > 1 {
            ctx.build_tables();
        }
        Ok(Arc::new(ctx))
    }

    fn build_tables(&mut self) {
        let q = self.q;
        if q <= ADD_TABLE_MAX_Q {
            let mut table = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    table[(a * q + b) as usize] = self.add_digits(a, b);
                }
            }
            self.add_table = Some(table);
        }
        let order = (q - 1) as usize;
        for g in 2..q {
            let mut exp = Vec::with_capacity(2 * order);
            let mut x = 1u32;
            loop {
                exp.push(x);
                x = self.mul_reference(FieldElement(x), FieldElement(g)).0;
                if x == 1 {
                    break;
                }
            }
            if exp.len() == order {
                let mut log = vec![0u32; q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                exp.extend_from_within(..);
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic");
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients over GF(p), ascending and monic.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo {
            q: self.q,
            p: self.p,
            n: self.n,
            modulus: self.modulus.clone(),
        }
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    /// Validates a raw code.
    pub fn element(&self, code: u32) -> Result<FieldElement> {
        if code < self.q {
            Ok(FieldElement(code))
        } else {
            Err(Error::InvalidElement { code, q: self.q })
        }
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.q
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, i: u64) -> FieldElement {
        FieldElement((i % u64::from(self.p)) as u32)
    }

    /// All elements, ascending by code.
    pub fn elements(&self) -> impl DoubleEndedIterator<Item = FieldElement> + ExactSizeIterator {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl DoubleEndedIterator<Item = FieldElement> + ExactSizeIterator {
        (1..self.q).map(FieldElement)
    }

    pub fn arith(&self, op: Op, a: FieldElement, b: FieldElement) -> FieldElement {
        match op {
            Op::Add => self.add(a, b),
            Op::Sub => self.sub(a, b),
            Op::Mul => self.mul(a, b),
            Op::Neg => self.neg(a),
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.n == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        match &self.add_table {
            Some(t) => FieldElement(t[(a.0 * self.q + b.0) as usize]),
            None => FieldElement(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.n == 1 {
            return FieldElement(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let p = self.p;
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        while x > 0 {
            let d = x % p;
            out += ((p - d) % p) * place;
            x /= p;
            place *= p;
        }
        FieldElement(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        if self.n == 1 {
            return FieldElement(((u64::from(a.0) * u64::from(b.0)) % u64::from(self.p)) as u32);
        }
        let i = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[i as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.n == 1 {
            return Ok(self.pow(a, u64::from(self.p) - 2));
        }
        let order = self.q - 1;
        Ok(FieldElement(
            self.exp[((order - self.log[a.0 as usize]) % order) as usize],
        ))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` with the convention `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `sum of x^i` over every element of the field, with `0^0 = 1`.
    pub fn power_sum(&self, i: u64) -> FieldElement {
        self.elements()
            .fold(FieldElement::ZERO, |acc, x| self.add(acc, self.pow(x, i)))
    }

    /// Product of all nonzero elements. Panics if it is not -1.
    pub fn nonzero_product(&self) -> FieldElement {
        let prod = self
            .nonzero_elements()
            .fold(FieldElement::ONE, |acc, x| self.mul(acc, x));
        assert_eq!(prod, self.neg(FieldElement::ONE), "Wilson product in GF({})", self.q);
        prod
    }

    /// Base-`p` digits of a code, least significant first, padded to `n`.
    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        let mut x = a.0;
        (0..self.n)
            .map(|_| {
                let d = x % self.p;
                x /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> FieldElement {
        FieldElement(digits.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p))
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    /// Schoolbook product in `GF(p)[t]/(modulus)`, independent of the log tables.
    pub fn mul_reference(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let p = u64::from(self.p);
        let da: Vec<u64> = self.digits(a).into_iter().map(u64::from).collect();
        let db: Vec<u64> = self.digits(b).into_iter().map(u64::from).collect();
        let mut prod = vec![0u64; da.len() + db.len()];
        for (i, x) in da.iter().enumerate() {
            for (j, y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let modulus: Vec<u64> = self.modulus.iter().map(|&c| u64::from(c)).collect();
        let reduced = poly_rem(&prod, &modulus, p);
        let digits: Vec<u32> = (0..self.n as usize)
            .map(|i| reduced.get(i).copied().unwrap_or(0) as u32)
            .collect();
        self.from_digits(&digits)
    }
}

// Dense polynomials over GF(p), ascending, used only to find the modulus.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let m = trim(m.to_vec());
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mc) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - c * mc % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Irreducibility of a monic polynomial of degree `n >= 2` over GF(p):
/// no factor shared with `t^(p^i) - t` for `i <= n/2`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    let mut frob = vec![0u64, 1];
    for _ in 1..=n / 2 {
        frob = poly_powmod(&frob, p, f, p);
        let mut h = frob.clone();
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        let g = poly_gcd(f, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn least_irreducible(p: u32, n: u32) -> Vec<u32> {
    let pp = u64::from(p);
    let count = pp.pow(n);
    for code in 0..count {
        let mut f = Vec::with_capacity(n as usize + 1);
        let mut x = code;
        for _ in 0..n {
            f.push(x % pp);
            x /= pp;
        }
        f.push(1);
        if f[0] != 0 && is_irreducible(&f, pp) {
            return f.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}
