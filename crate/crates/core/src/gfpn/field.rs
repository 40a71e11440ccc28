use std::fmt;
use std::sync::Arc;

use super::moduli::default_modulus;
use crate::error::{Error, Result};

/// Tables are refused above this many elements.
pub const MAX_FIELD_ORDER: u64 = 1 << 24;

const NO_LOG: u32 = u32::MAX;

/// An element of `F_{p^N}`, stored as the base-`p` packing of its coefficient
/// vector in the polynomial basis `1, w, ..., w^{N-1}` (digit `i` is the
/// coefficient of `w^i`). Index 0 is zero and index 1 is one.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub(crate) fn from_raw(index: u32) -> Elem {
        Elem(index)
    }
}

/// Immutable description of `F_{p^N}` with log/antilog and Zech tables.
pub struct FieldCtx {
    p: u32,
    n: u32,
    order: u32,
    /// Monic modulus, coefficients low-to-high, length `N + 1`.
    modulus: Vec<u32>,
    pow_p: Vec<u32>,
    gen: Elem,
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`; empty in characteristic 2.
    zech: Vec<u32>,
    /// `p^k mod (order - 1)` for `k = 0..=N`.
    frob_mult: Vec<u64>,
    half: u32,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("spec", &self.spec_string())
            .field("gen", &self.gen.0)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.n == other.n && self.modulus == other.modulus && self.gen == other.gen
    }
}

impl Eq for FieldCtx {}

/// Builds `F_{p^N}`, shared behind an `Arc`. With no modulus the default table
/// entry is used.
pub fn build_field(p: u32, n: u32, modulus: Option<&[u32]>) -> Result<Arc<FieldCtx>> {
    FieldCtx::new(p, n, modulus).map(Arc::new)
}

pub fn is_prime(k: u64) -> bool {
    if k < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= k {
        if k.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut k: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= k {
        if k.is_multiple_of(d) {
            out.push(d);
            while k.is_multiple_of(d) {
                k /= d;
            }
        }
        d += 1;
    }
    if k > 1 {
        out.push(k);
    }
    out
}

/// Largest `e` with `2^e | k`.
pub fn two_valuation(k: u64) -> u32 {
    assert!(k > 0, "two_valuation is undefined at 0");
    k.trailing_zeros()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn poly_string(coeffs_low_to_high: &[u32], p: u32) -> String {
    let digits: Vec<String> = coeffs_low_to_high.iter().rev().map(|c| c.to_string()).collect();
    if p > 10 {
        digits.join(",")
    } else {
        digits.concat()
    }
}

/// Remainder of `a` modulo the monic `b`, both low-to-high.
fn poly_rem_monic(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let t = (lead as u64 * bc as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let n = modulus.len() - 1;
    // Every reducible polynomial has a monic factor of degree at most n / 2.
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for tail in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut t = tail;
            for _ in 0..d {
                div.push((t % p as u64) as u32);
                t /= p as u64;
            }
            div.push(1);
            if poly_rem_monic(modulus, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    pub fn new(p: u32, n: u32, modulus: Option<&[u32]>) -> Result<FieldCtx> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(Error::DegreeMismatch {
                expected: 0,
                got: "extension degree 0".into(),
            });
        }
        let order64 = (p as u64).checked_pow(n).filter(|&o| o <= MAX_FIELD_ORDER);
        let order = match order64 {
            Some(o) => o as u32,
            None => return Err(Error::FieldTooLarge { p: p as u64, n }),
        };
        let modulus = match modulus {
            Some(m) => {
                if m.len() != n as usize + 1 || m[n as usize] != 1 || m.iter().any(|&c| c >= p) {
                    return Err(Error::DegreeMismatch {
                        expected: n,
                        got: format!("{m:?}"),
                    });
                }
                if !is_irreducible(m, p) {
                    return Err(Error::ReducibleModulus(poly_string(m, p)));
                }
                m.to_vec()
            }
            None => match default_modulus(p, n) {
                Some(m) => m,
                None => Self::search_modulus(p, n),
            },
        };
        let mut pow_p = Vec::with_capacity(n as usize + 1);
        let mut acc = 1u32;
        for _ in 0..=n {
            pow_p.push(acc);
            acc = acc.wrapping_mul(p);
        }
        let mut ctx = FieldCtx {
            p,
            n,
            order,
            modulus,
            pow_p,
            gen: Elem::ONE,
            exp: Vec::new(),
            log: Vec::new(),
            zech: Vec::new(),
            frob_mult: Vec::new(),
            half: (order - 1) / 2,
        };
        ctx.build_tables();
        Ok(ctx)
    }

    /// First monic irreducible polynomial (by packed index of its tail) whose
    /// root is primitive; used for `(p, N)` outside the default table.
    fn search_modulus(p: u32, n: u32) -> Vec<u32> {
        let tails = (p as u64).pow(n);
        let mut fallback = None;
        for tail in 0..tails {
            let mut m: Vec<u32> = (0..n).map(|i| ((tail / (p as u64).pow(i)) % p as u64) as u32).collect();
            m.push(1);
            if m[0] == 0 || !is_irreducible(&m, p) {
                continue;
            }
            let probe = FieldCtx {
                p,
                n,
                order: (p as u64).pow(n) as u32,
                modulus: m.clone(),
                pow_p: (0..=n).map(|i| p.pow(i)).collect(),
                gen: Elem::ONE,
                exp: Vec::new(),
                log: Vec::new(),
                zech: Vec::new(),
                frob_mult: Vec::new(),
                half: 0,
            };
            if probe.poly_is_primitive(probe.root_of_modulus()) {
                return m;
            }
            fallback.get_or_insert(m);
        }
        fallback.expect("an irreducible polynomial of every degree exists")
    }

    fn root_of_modulus(&self) -> Elem {
        if self.n == 1 {
            Elem((self.p - self.modulus[0]) % self.p)
        } else {
            Elem(self.p)
        }
    }

    fn poly_pow(&self, mut base: Elem, mut e: u64) -> Elem {
        let mut r = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_poly(r, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        r
    }

    fn poly_is_primitive(&self, h: Elem) -> bool {
        if h.is_zero() {
            return false;
        }
        let qm1 = self.order as u64 - 1;
        if self.poly_pow(h, qm1) != Elem::ONE {
            return false;
        }
        prime_factors(qm1)
            .into_iter()
            .all(|r| self.poly_pow(h, qm1 / r) != Elem::ONE)
    }

    /// Same modulus, with `g` as the primitive element behind labels and
    /// `g^k` literals. Element indices are unchanged.
    pub fn with_generator(&self, g: Elem) -> Result<FieldCtx> {
        if g.0 >= self.order || !self.poly_is_primitive(g) {
            return Err(Error::ElementOutOfRange(g.0 as u64));
        }
        let mut ctx = FieldCtx {
            p: self.p,
            n: self.n,
            order: self.order,
            modulus: self.modulus.clone(),
            pow_p: self.pow_p.clone(),
            gen: Elem::ONE,
            exp: Vec::new(),
            log: Vec::new(),
            zech: Vec::new(),
            frob_mult: Vec::new(),
            half: self.half,
        };
        ctx.build_tables_with(Some(g));
        Ok(ctx)
    }

    fn build_tables(&mut self) {
        self.build_tables_with(None)
    }

    fn build_tables_with(&mut self, chosen: Option<Elem>) {
        let q = self.order;
        let qm1 = q - 1;
        let root = self.root_of_modulus();
        let gen = match chosen {
            Some(g) => g,
            None if self.poly_is_primitive(root) => root,
            None => (2..q)
                .map(Elem)
                .find(|&h| self.poly_is_primitive(h))
                .unwrap_or(Elem::ONE),
        };
        self.gen = gen;
        let mut exp = vec![0u32; qm1.max(1) as usize];
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = Elem::ONE;
        for k in 0..qm1 {
            exp[k as usize] = cur.0;
            log[cur.0 as usize] = k;
            cur = if gen == root && self.n > 1 {
                self.mul_by_root(cur)
            } else {
                self.mul_poly(cur, gen)
            };
        }
        if q == 2 {
            exp[0] = 1;
            log[1] = 0;
        }
        self.exp = exp;
        self.log = log;
        let m = (qm1.max(1)) as u64;
        self.frob_mult = (0..=self.n).map(|k| (self.p as u64).pow(k) % m).collect();
        if self.p != 2 {
            self.zech = (0..qm1)
                .map(|k| {
                    let s = self.add_digits(Elem::ONE, Elem(self.exp[k as usize]));
                    self.log[s.0 as usize]
                })
                .collect();
        }
    }

    fn digit(&self, x: Elem, i: u32) -> u32 {
        (x.0 / self.pow_p[i as usize]) % self.p
    }

    fn digits(&self, x: Elem) -> Vec<u32> {
        (0..self.n).map(|i| self.digit(x, i)).collect()
    }

    fn from_digits(&self, d: &[u32]) -> Elem {
        Elem(d.iter().enumerate().map(|(i, &c)| c * self.pow_p[i]).sum())
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let d: Vec<u32> = (0..self.n)
            .map(|i| (self.digit(a, i) + self.digit(b, i)) % self.p)
            .collect();
        self.from_digits(&d)
    }

    fn mul_by_root(&self, a: Elem) -> Elem {
        let n = self.n as usize;
        let mut d = self.digits(a);
        let top = d[n - 1];
        d.rotate_right(1);
        d[0] = 0;
        for (i, c) in d.iter_mut().enumerate() {
            let t = top * self.modulus[i] % self.p;
            *c = (*c + self.p - t) % self.p;
        }
        self.from_digits(&d)
    }

    /// Schoolbook product reduced by the modulus; independent of the log tables.
    pub fn mul_poly(&self, a: Elem, b: Elem) -> Elem {
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * self.n as usize - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let r = poly_rem_monic(&prod, &self.modulus, self.p);
        let mut r = r;
        r.resize(self.n as usize, 0);
        self.from_digits(&r)
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Extension degree `N` over the prime field.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.n
    }

    /// Number of elements `p^N`.
    #[inline]
    pub fn order(&self) -> u32 {
        self.order
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.order as usize
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn generator(&self) -> Elem {
        self.gen
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    #[inline]
    pub fn one(&self) -> Elem {
        Elem::ONE
    }

    pub fn elem(&self, index: u64) -> Result<Elem> {
        if index < self.order as u64 {
            Ok(Elem(index as u32))
        } else {
            Err(Error::ElementOutOfRange(index))
        }
    }

    /// Integer mapped into the prime subfield.
    pub fn from_int(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order).map(Elem)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.order).map(Elem)
    }

    /// Discrete logarithm base `g`; `None` at zero.
    #[inline]
    pub fn log(&self, x: Elem) -> Option<u32> {
        match self.log[x.0 as usize] {
            NO_LOG => None,
            l => Some(l),
        }
    }

    /// `g^k` for any integer `k`.
    pub fn gen_pow(&self, k: i64) -> Elem {
        let m = (self.order - 1) as i64;
        Elem(self.exp[k.rem_euclid(m) as usize])
    }

    #[inline]
    fn reduce(&self, e: u32) -> u32 {
        let m = self.order - 1;
        if e >= m {
            e - m
        } else {
            e
        }
    }

    #[inline]
    fn add_logs(&self, la: u32, lb: u32) -> Elem {
        let m = self.order - 1;
        let d = if lb >= la { lb - la } else { lb + m - la };
        match self.zech[d as usize] {
            NO_LOG => Elem::ZERO,
            z => Elem(self.exp[self.reduce(la + z) as usize]),
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if a.0 == 0 {
            return b;
        }
        if b.0 == 0 {
            return a;
        }
        self.add_logs(self.log[a.0 as usize], self.log[b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a.0 == 0 {
            return a;
        }
        Elem(self.exp[self.reduce(self.log[a.0 as usize] + self.half) as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if b.0 == 0 {
            return a;
        }
        let lnb = self.reduce(self.log[b.0 as usize] + self.half);
        if a.0 == 0 {
            return Elem(self.exp[lnb as usize]);
        }
        self.add_logs(self.log[a.0 as usize], lnb)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        Elem(self.exp[self.reduce(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        match self.log(a) {
            None => Err(Error::DivisionByZero),
            Some(0) => Ok(Elem::ONE),
            Some(l) => Ok(Elem(self.exp[(self.order - 1 - l) as usize])),
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `x^e` for `e >= 0`, with `0^0 = 1`.
    pub fn pow_u(&self, x: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        match self.log(x) {
            None => Elem::ZERO,
            Some(l) => {
                let m = (self.order - 1) as u64;
                Elem(self.exp[((l as u64) * (e % m) % m) as usize])
            }
        }
    }

    /// `x^e` for any integer `e`; negative powers of zero are an error.
    pub fn pow(&self, x: Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            return Ok(self.pow_u(x, e as u64));
        }
        match self.log(x) {
            None => Err(Error::DivisionByZero),
            Some(l) => {
                let m = (self.order - 1) as i64;
                Ok(Elem(self.exp[((l as i64) * e.rem_euclid(m)).rem_euclid(m) as usize]))
            }
        }
    }

    /// `x^{p^k}`.
    #[inline]
    pub fn frobenius(&self, x: Elem, k: u32) -> Elem {
        match self.log(x) {
            None => Elem::ZERO,
            Some(l) => {
                let k = (k % self.n) as usize;
                let m = (self.order - 1) as u64;
                Elem(self.exp[(l as u64 * self.frob_mult[k] % m) as usize])
            }
        }
    }

    fn check_divisor(&self, m: u32) -> Result<()> {
        if m == 0 || !self.n.is_multiple_of(m) {
            Err(Error::NotADivisor { m, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn divisors(&self) -> Vec<u32> {
        (1..=self.n).filter(|m| self.n.is_multiple_of(*m)).collect()
    }

    /// Relative trace `Tr_{p^N/p^m}`.
    pub fn rel_trace(&self, x: Elem, m: u32) -> Result<Elem> {
        self.check_divisor(m)?;
        Ok((0..self.n / m).fold(Elem::ZERO, |acc, i| self.add(acc, self.frobenius(x, m * i))))
    }

    /// Trace of the intermediate extension `F_{p^hi} / F_{p^lo}`, for `x` in `F_{p^hi}`.
    pub fn trace_between(&self, x: Elem, hi: u32, lo: u32) -> Result<Elem> {
        self.check_divisor(hi)?;
        if lo == 0 || !hi.is_multiple_of(lo) {
            return Err(Error::NotADivisor { m: lo, n: hi });
        }
        Ok((0..hi / lo).fold(Elem::ZERO, |acc, i| self.add(acc, self.frobenius(x, lo * i))))
    }

    /// Relative norm `N_{p^N/p^m}`: product of the conjugates over `F_{p^m}`.
    pub fn rel_norm(&self, x: Elem, m: u32) -> Result<Elem> {
        self.check_divisor(m)?;
        Ok((0..self.n / m).fold(Elem::ONE, |acc, i| self.mul(acc, self.frobenius(x, m * i))))
    }

    /// Absolute trace as an integer in `0..p`.
    #[inline]
    pub fn abs_trace_value(&self, x: Elem) -> u32 {
        (0..self.n)
            .fold(Elem::ZERO, |acc, i| self.add(acc, self.frobenius(x, i)))
            .0
    }

    /// `-1`, `0` or `+1` by square-ness (odd characteristic only).
    pub fn quadratic_character(&self, x: Elem) -> Result<i8> {
        if self.p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        Ok(match self.log(x) {
            None => 0,
            Some(l) if l % 2 == 0 => 1,
            Some(_) => -1,
        })
    }

    pub fn in_subfield(&self, x: Elem, m: u32) -> bool {
        self.frobenius(x, m) == x
    }

    pub fn subfield(&self, m: u32) -> Result<SubfieldView> {
        self.check_divisor(m)?;
        let elements = self.elements().filter(|&x| self.in_subfield(x, m)).collect();
        Ok(SubfieldView { m, elements })
    }

    /// Multiplicative order of a nonzero element.
    pub fn order_of(&self, x: Elem) -> Option<u64> {
        let l = self.log(x)? as u64;
        let m = (self.order - 1) as u64;
        Some(m / gcd(l, m))
    }

    pub fn is_primitive(&self, x: Elem) -> bool {
        self.order_of(x) == Some((self.order - 1) as u64)
    }

    /// `"0"` or `"g^k"`.
    pub fn label(&self, x: Elem) -> String {
        match self.log(x) {
            None => "0".into(),
            Some(l) => format!("g^{l}"),
        }
    }

    /// Coefficient vector of `x`, high-to-low.
    pub fn coeff_string(&self, x: Elem) -> String {
        poly_string(&self.digits(x), self.p)
    }

    /// `"p^N/c_N...c_0"` (commas between coefficients when `p > 10`).
    pub fn spec_string(&self) -> String {
        format!("{}^{}/{}", self.p, self.n, poly_string(&self.modulus, self.p))
    }

    /// Parses `p^N` or `p^N/c_N,...,c_0` (bare digit strings are accepted when
    /// every coefficient is a single digit).
    pub fn from_spec(spec: &str) -> Result<FieldCtx> {
        let bad = || Error::FieldSpec(spec.to_string());
        let (head, tail) = match spec.trim().split_once('/') {
            Some((h, t)) => (h, Some(t.trim())),
            None => (spec.trim(), None),
        };
        let (p, n) = head.split_once('^').ok_or_else(bad)?;
        let p: u32 = p.trim().parse().map_err(|_| bad())?;
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        let modulus = match tail {
            None | Some("") => None,
            Some(t) => {
                let high_to_low: Vec<u32> = if t.contains(',') {
                    t.split(',')
                        .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
                        .collect::<Result<_>>()?
                } else {
                    t.chars()
                        .map(|c| c.to_digit(10).ok_or_else(bad))
                        .collect::<Result<_>>()?
                };
                Some(high_to_low.into_iter().rev().collect::<Vec<_>>())
            }
        };
        FieldCtx::new(p, n, modulus.as_deref())
    }

    /// Parses an element literal: `0`, an integer (prime subfield), `g`,
    /// `g^k` (any integer `k`), optionally prefixed by `-`.
    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        let t = s.trim();
        let bad = || Error::ElementLiteral(s.to_string());
        if let Some(rest) = t.strip_prefix('-') {
            return Ok(self.neg(self.parse_elem(rest).map_err(|_| bad())?));
        }
        if let Some(rest) = t.strip_prefix('g') {
            let rest = rest.trim();
            if rest.is_empty() {
                return Ok(self.gen);
            }
            let k: i64 = rest
                .strip_prefix('^')
                .ok_or_else(bad)?
                .trim()
                .parse()
                .map_err(|_| bad())?;
            return Ok(self.gen_pow(k));
        }
        let k: i64 = t.parse().map_err(|_| bad())?;
        Ok(self.from_int(k))
    }
}

/// The subfield `F_{p^m}` seen inside `F_{p^N}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubfieldView {
    pub m: u32,
    /// Elements fixed by `x -> x^{p^m}`, ascending by index.
    pub elements: Vec<Elem>,
}

impl SubfieldView {
    pub fn contains(&self, x: Elem) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}
