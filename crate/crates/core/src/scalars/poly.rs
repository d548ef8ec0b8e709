//! Sparse multivariate polynomials with big-integer coefficients.
//!
//! Monomials are packed into a `u128`: the most significant field holds the
//! total degree, followed by one field per variable. Comparing packed keys as
//! integers is then exactly the graded lexicographic order, and multiplying
//! monomials is integer addition of keys.

use std::collections::HashMap;
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Variable table and coefficient ring (ℤ, or ℤ/m when `modulus` is set).
#[derive(Debug)]
pub struct PolyRing {
    names: Vec<String>,
    modulus: Option<BigInt>,
    bits: u32,
}

impl PartialEq for PolyRing {
    fn eq(&self, o: &Self) -> bool {
        self.names == o.names && self.modulus == o.modulus
    }
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Arc<Self> {
        Self::build(names, None)
    }

    /// Polynomials over ℤ/p. `p` must be prime for `divexact` to be meaningful.
    pub fn with_modulus<S: AsRef<str>>(names: &[S], p: u64) -> Arc<Self> {
        Self::build(names, Some(BigInt::from(p)))
    }

    fn build<S: AsRef<str>>(names: &[S], modulus: Option<BigInt>) -> Arc<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            assert!(!names[..i].contains(n), "duplicate variable {n}");
        }
        let bits = (128 / (names.len() as u32 + 1)).min(32);
        assert!(bits >= 4, "too many variables for packed monomials");
        Arc::new(PolyRing { names, modulus, bits })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        self.modulus.as_ref()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Largest total degree representable.
    pub fn max_degree(&self) -> u32 {
        ((1u128 << self.bits) - 1) as u32
    }

    /// A new ring with `extra` variables appended (same coefficient ring).
    pub fn extend<S: AsRef<str>>(&self, extra: &[S]) -> Arc<Self> {
        let mut names = self.names.clone();
        names.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Self::build(&names, self.modulus.clone())
    }

    /// Same variables, coefficients reduced modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Arc<Self> {
        Self::build(&self.names, Some(BigInt::from(p)))
    }

    fn field_shift(&self, var: usize) -> u32 {
        self.bits * (self.names.len() - 1 - var) as u32
    }

    fn total_shift(&self) -> u32 {
        self.bits * self.names.len() as u32
    }

    fn mask(&self) -> u128 {
        (1u128 << self.bits) - 1
    }

    pub fn key(&self, exps: &[u32]) -> u128 {
        assert_eq!(exps.len(), self.nvars());
        let total: u32 = exps.iter().sum();
        assert!(total <= self.max_degree(), "monomial degree overflow");
        let mut k = if self.nvars() == 0 { 0 } else { (total as u128) << self.total_shift() };
        for (i, &e) in exps.iter().enumerate() {
            k |= (e as u128) << self.field_shift(i);
        }
        k
    }

    pub fn exponents(&self, key: u128) -> Vec<u32> {
        (0..self.nvars()).map(|i| ((key >> self.field_shift(i)) & self.mask()) as u32).collect()
    }

    fn total_degree(&self, key: u128) -> u32 {
        if self.nvars() == 0 {
            0
        } else {
            (key >> self.total_shift()) as u32
        }
    }

    fn divides(&self, a: u128, b: u128) -> bool {
        let m = self.mask();
        (0..self.nvars()).all(|i| {
            let s = self.field_shift(i);
            (a >> s) & m <= (b >> s) & m
        })
    }

    fn reduce(&self, c: BigInt) -> BigInt {
        match &self.modulus {
            Some(m) => c.mod_floor(m),
            None => c,
        }
    }

    pub fn zero(self: &Arc<Self>) -> MultiPoly {
        MultiPoly { ring: self.clone(), terms: Vec::new() }
    }

    pub fn one(self: &Arc<Self>) -> MultiPoly {
        self.constant(BigInt::one())
    }

    pub fn constant(self: &Arc<Self>, c: BigInt) -> MultiPoly {
        let c = self.reduce(c);
        let terms = if c.is_zero() { Vec::new() } else { vec![(0u128, c)] };
        MultiPoly { ring: self.clone(), terms }
    }

    pub fn var(self: &Arc<Self>, i: usize) -> MultiPoly {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        self.monomial(BigInt::one(), &e)
    }

    pub fn var_named(self: &Arc<Self>, name: &str) -> MultiPoly {
        let i = self.index_of(name).unwrap_or_else(|| panic!("unknown variable {name}"));
        self.var(i)
    }

    pub fn monomial(self: &Arc<Self>, c: BigInt, exps: &[u32]) -> MultiPoly {
        let c = self.reduce(c);
        let terms = if c.is_zero() { Vec::new() } else { vec![(self.key(exps), c)] };
        MultiPoly { ring: self.clone(), terms }
    }

    pub fn parse(self: &Arc<Self>, s: &str) -> Result<MultiPoly, ParsePolyError> {
        Parser { ring: self, src: s.as_bytes(), pos: 0 }.parse_all()
    }
}

#[derive(Default)]
struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(5) ^ b as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        }
    }
    fn write_u128(&mut self, k: u128) {
        let x = (k as u64) ^ ((k >> 64) as u64).rotate_left(29);
        self.0 = x.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    }
    fn finish(&self) -> u64 {
        self.0 ^ (self.0 >> 31)
    }
}

type KeyMap<V> = HashMap<u128, V, BuildHasherDefault<KeyHasher>>;

/// A polynomial; terms are kept sorted by decreasing monomial with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone)]
pub struct MultiPoly {
    ring: Arc<PolyRing>,
    terms: Vec<(u128, BigInt)>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms && (Arc::ptr_eq(&self.ring, &o.ring) || self.ring == o.ring)
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterator over `(exponents, coefficient)` in decreasing monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (self.ring.exponents(*k), c))
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        match self.terms.as_slice() {
            [] => Some(BigInt::zero()),
            [(0, c)] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(k, _)| self.ring.total_degree(*k)).max().unwrap_or(0)
    }

    fn check_ring(&self, o: &Self) {
        assert!(Arc::ptr_eq(&self.ring, &o.ring) || *self.ring == *o.ring, "polynomials from different rings");
    }

    fn with_terms(&self, terms: Vec<(u128, BigInt)>) -> MultiPoly {
        MultiPoly { ring: self.ring.clone(), terms }
    }

    pub fn neg(&self) -> MultiPoly {
        let terms = self.terms.iter().map(|(k, c)| (*k, self.ring.reduce(-c))).filter(|(_, c)| !c.is_zero()).collect();
        self.with_terms(terms)
    }

    fn merge(&self, o: &Self, negate: bool) -> MultiPoly {
        self.check_ring(o);
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: &BigInt| if negate { -c } else { c.clone() };
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let c = self.ring.reduce(sign(&b[j].1));
                    if !c.is_zero() {
                        out.push((b[j].0, c));
                    }
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    let c = self.ring.reduce(c);
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = self.ring.reduce(sign(&t.1));
            if !c.is_zero() {
                out.push((t.0, c));
            }
        }
        self.with_terms(out)
    }

    pub fn add(&self, o: &Self) -> MultiPoly {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Self) -> MultiPoly {
        self.merge(o, true)
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        let terms =
            self.terms.iter().map(|(k, x)| (*k, self.ring.reduce(x * c))).filter(|(_, x)| !x.is_zero()).collect();
        self.with_terms(terms)
    }

    /// `c * m * self` for a monomial key `m`; ordering is preserved.
    fn shifted(&self, key: u128, c: &BigInt) -> MultiPoly {
        let max = self.ring.max_degree();
        let tk = self.ring.total_degree(key);
        let terms = self
            .terms
            .iter()
            .map(|(k, x)| {
                assert!(self.ring.total_degree(*k) + tk <= max, "monomial degree overflow");
                (k + key, self.ring.reduce(x * c))
            })
            .filter(|(_, x)| !x.is_zero())
            .collect();
        self.with_terms(terms)
    }

    pub fn mul(&self, o: &Self) -> MultiPoly {
        self.check_ring(o);
        if self.is_zero() || o.is_zero() {
            return self.ring.zero();
        }
        stats::record(self.terms.len() as u64 * o.terms.len() as u64);
        if o.terms.len() == 1 {
            return self.shifted(o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.shifted(self.terms[0].0, &self.terms[0].1);
        }
        let max = self.ring.max_degree();
        assert!(self.total_degree() + o.total_degree() <= max, "monomial degree overflow");
        let cap = (self.terms.len() * o.terms.len()).min(1 << 22);
        let bits_a = self.terms.iter().map(|(_, c)| c.bits()).max().unwrap_or(0);
        let bits_b = o.terms.iter().map(|(_, c)| c.bits()).max().unwrap_or(0);
        let len_bits = 64 - (self.terms.len().min(o.terms.len()) as u64).leading_zeros() as u64;
        let mut terms: Vec<(u128, BigInt)> = if bits_a + bits_b + len_bits + 2 < 127 {
            let mut acc: KeyMap<i128> = KeyMap::with_capacity_and_hasher(cap, Default::default());
            let sb: Vec<(u128, i128)> = o.terms.iter().map(|(k, c)| (*k, c.to_i128().unwrap())).collect();
            for (ka, ca) in &self.terms {
                let ca = ca.to_i128().unwrap();
                for (kb, cb) in &sb {
                    *acc.entry(ka + kb).or_insert(0) += ca * cb;
                }
            }
            acc.into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(k, c)| (k, self.ring.reduce(BigInt::from(c))))
                .filter(|(_, c)| !c.is_zero())
                .collect()
        } else {
            let mut acc: KeyMap<BigInt> = KeyMap::with_capacity_and_hasher(cap, Default::default());
            for (ka, ca) in &self.terms {
                for (kb, cb) in &o.terms {
                    *acc.entry(ka + kb).or_insert_with(BigInt::zero) += ca * cb;
                }
            }
            acc.into_iter().map(|(k, c)| (k, self.ring.reduce(c))).filter(|(_, c)| !c.is_zero()).collect()
        };
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        self.with_terms(terms)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// gcd of the coefficients (over ℤ; 1 when a modulus is set).
    pub fn content(&self) -> BigInt {
        if self.ring.modulus.is_some() {
            return BigInt::one();
        }
        self.terms.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn divexact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        self.check_ring(d);
        let (lk, lc) = d.terms.first()?;
        let lc_inv = match &self.ring.modulus {
            Some(m) => Some(mod_inverse(lc, m)?),
            None => None,
        };
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some((rk, rc)) = r.terms.first().cloned() {
            if !self.ring.divides(*lk, rk) {
                return None;
            }
            let qc = match &lc_inv {
                Some(inv) => self.ring.reduce(&rc * inv),
                None => {
                    let (qc, rem) = rc.div_rem(lc);
                    if !rem.is_zero() {
                        return None;
                    }
                    qc
                }
            };
            let qk = rk - lk;
            r = r.sub(&d.shifted(qk, &qc));
            q.push((qk, qc));
        }
        Some(self.with_terms(q))
    }

    /// Divide every coefficient by the integer `c`, if exact.
    pub fn divexact_int(&self, c: &BigInt) -> Option<MultiPoly> {
        if let Some(m) = &self.ring.modulus {
            let inv = mod_inverse(c, m)?;
            return Some(self.scale(&inv));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, x) in &self.terms {
            let (q, r) = x.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            terms.push((*k, q));
        }
        Some(self.with_terms(terms))
    }

    /// Evaluate with `vals[i]` substituted for variable `i`; coefficients are
    /// mapped through `coef`.
    pub fn eval<R: crate::scalars::Ring>(&self, vals: &[R], zero: &R) -> R {
        assert_eq!(vals.len(), self.ring.nvars());
        let mut pow_cache: Vec<Vec<R>> = vals.iter().map(|v| vec![v.one_like(), v.clone()]).collect();
        let mut acc = zero.zero_like();
        for (k, c) in &self.terms {
            let mut t = zero.bigint_like(c);
            for (i, e) in self.ring.exponents(*k).into_iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut pow_cache[i];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul(&vals[i]);
                    cache.push(next);
                }
                t = t.mul(&cache[e as usize]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Re-express in `target`, matching variables by name.
    pub fn embed(&self, target: &Arc<PolyRing>) -> Option<MultiPoly> {
        let map: Option<Vec<usize>> = self.ring.names.iter().map(|n| target.index_of(n)).collect();
        let map = map?;
        let mut out = target.zero();
        for (k, c) in &self.terms {
            let mut e = vec![0; target.nvars()];
            for (i, x) in self.ring.exponents(*k).into_iter().enumerate() {
                e[map[i]] = x;
            }
            out = out.add(&target.monomial(c.clone(), &e));
        }
        Some(out)
    }

    /// The coefficient of `var^deg` viewed as a polynomial in `var`.
    pub fn coefficient_of(&self, var: usize, deg: u32) -> MultiPoly {
        let mut terms = Vec::new();
        for (k, c) in &self.terms {
            let mut e = self.ring.exponents(*k);
            if e[var] == deg {
                e[var] = 0;
                terms.push((self.ring.key(&e), c.clone()));
            }
        }
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        self.with_terms(terms)
    }

    /// Degree in variable `var`.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(k, _)| self.ring.exponents(*k)[var]).max().unwrap_or(0)
    }

    /// A human-readable rendering of one term, used in witness reports.
    pub fn leading_term_string(&self) -> String {
        match self.terms.first() {
            None => "0".to_string(),
            Some(t) => self.with_terms(vec![t.clone()]).to_string(),
        }
    }
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let exps = self.ring.exponents(*k);
            let mut parts: Vec<String> = Vec::new();
            for (i, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(self.ring.names[i].clone()),
                    _ => parts.push(format!("{}^{}", self.ring.names[i], e)),
                }
            }
            if parts.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", parts.join("*"))?;
            } else {
                write!(f, "{}*{}", abs, parts.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("polynomial parse error at byte {pos}: {msg}")]
pub struct ParsePolyError {
    pub pos: usize,
    pub msg: String,
}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParsePolyError> {
        Err(ParsePolyError { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<MultiPoly, ParsePolyError> {
        let p = self.expr()?;
        if self.peek().is_some() {
            return self.err("trailing input");
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<MultiPoly, ParsePolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParsePolyError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly, ParsePolyError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = match std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse() {
                Ok(e) => e,
                Err(_) => return self.err("expected exponent"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, ParsePolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(self.ring.constant(s.parse::<BigInt>().unwrap()))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.ring.index_of(name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => {
                        self.pos = start;
                        self.err(format!("unknown variable '{name}'"))
                    }
                }
            }
            _ => self.err("expected a number, variable or '('"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<PolyRing> {
        PolyRing::new(&["x", "y", "z"])
    }

    #[test]
    fn grlex_order_of_keys() {
        let r = ring();
        assert!(r.key(&[0, 0, 2]) > r.key(&[1, 0, 0]));
        assert!(r.key(&[1, 1, 0]) > r.key(&[1, 0, 1]));
        assert!(r.key(&[1, 0, 0]) > r.key(&[0, 1, 0]));
    }

    #[test]
    fn expand_square() {
        let r = ring();
        let p = r.parse("x + y").unwrap();
        assert_eq!(p.mul(&p), r.parse("x^2 + 2*x*y + y^2").unwrap());
        assert_eq!(p.pow(3).to_string(), "x^3 + 3*x^2*y + 3*x*y^2 + y^3");
    }

    #[test]
    fn display_parse_round_trip() {
        let r = ring();
        let p = r.parse("-3*x^2*z + (y - 2)*(y + 7) - 14").unwrap();
        assert_eq!(r.parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn exact_division() {
        let r = ring();
        let a = r.parse("x^2 - y^2 + 3*z").unwrap();
        let b = r.parse("x*z - 5 + y").unwrap();
        let prod = a.mul(&b);
        assert_eq!(prod.divexact(&b).unwrap(), a);
        assert!(prod.add(&r.one()).divexact(&b).is_none());
        assert!(r.parse("2*x").unwrap().divexact(&r.constant(4.into())).is_none());
    }

    #[test]
    fn modular_coefficients() {
        let r = PolyRing::with_modulus(&["x"], 3);
        let p = r.parse("x + 1").unwrap();
        assert_eq!(p.pow(3), r.parse("x^3 + 1").unwrap());
        let q = r.parse("2*x").unwrap().divexact(&r.parse("x").unwrap()).unwrap();
        assert_eq!(q, r.constant(2.into()));
    }

    #[test]
    fn large_coefficients_take_bigint_path() {
        let r = ring();
        let big = r.constant(BigInt::from(1u8) << 100);
        let p = r.parse("x + y").unwrap().mul(&big);
        let sq = p.mul(&p);
        let expect = r.parse("x^2 + 2*x*y + y^2").unwrap().scale(&(BigInt::from(1u8) << 200));
        assert_eq!(sq, expect);
    }

    #[test]
    fn parse_errors_report_position() {
        let r = ring();
        let e = r.parse("x + w").unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(r.parse("(x").is_err());
    }
}

/// Process-wide multiplication counters, read by `--profile`.
pub mod stats {
    use std::sync::atomic::{AtomicU64, Ordering};

    static MULS: AtomicU64 = AtomicU64::new(0);
    static TERM_PRODUCTS: AtomicU64 = AtomicU64::new(0);

    pub(super) fn record(products: u64) {
        MULS.fetch_add(1, Ordering::Relaxed);
        TERM_PRODUCTS.fetch_add(products, Ordering::Relaxed);
    }

    #[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
    pub struct PolyStats {
        pub multiplications: u64,
        pub term_products: u64,
    }

    pub fn snapshot() -> PolyStats {
        PolyStats {
            multiplications: MULS.load(Ordering::Relaxed),
            term_products: TERM_PRODUCTS.load(Ordering::Relaxed),
        }
    }
}
