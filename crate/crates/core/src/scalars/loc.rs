//! Localizations of a polynomial ring at a declared monoid.
//!
//! A value is `num / prod(gens[i]^den[i])`. Because denominators live in the
//! monoid generated by `gens`, common denominators are exponent-wise maxima
//! and no polynomial gcd is ever needed.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::{MultiPoly, PolyRing};
use super::Ring;

#[derive(Debug)]
pub struct LocRing {
    poly: Arc<PolyRing>,
    gens: Vec<MultiPoly>,
    gen_names: Vec<String>,
}

impl PartialEq for LocRing {
    fn eq(&self, o: &Self) -> bool {
        *self.poly == *o.poly && self.gens == o.gens
    }
}

impl LocRing {
    pub fn new(poly: Arc<PolyRing>, gens: Vec<(String, MultiPoly)>) -> Arc<Self> {
        let (gen_names, gens): (Vec<_>, Vec<_>) = gens.into_iter().unzip();
        for g in &gens {
            assert!(!g.is_zero(), "cannot localize at zero");
            assert!(**g.ring() == *poly, "generator from a different ring");
        }
        Arc::new(LocRing { poly, gens, gen_names })
    }

    /// ℤ[1/2, 1/3]-style ring: no variables, constants 2 and 3 invertible.
    pub fn integers_with_inverses(primes: &[u64]) -> Arc<Self> {
        let poly = PolyRing::new::<&str>(&[]);
        let gens = primes.iter().map(|&p| (p.to_string(), poly.constant(BigInt::from(p)))).collect();
        Self::new(poly, gens)
    }

    pub fn poly(&self) -> &Arc<PolyRing> {
        &self.poly
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gen_names.iter().position(|n| n == name)
    }

    /// A ring with one more denominator generator.
    pub fn with_gen(&self, name: &str, g: MultiPoly) -> Arc<LocRing> {
        let mut gens: Vec<(String, MultiPoly)> =
            self.gen_names.iter().cloned().zip(self.gens.iter().cloned()).collect();
        gens.push((name.to_string(), g));
        LocRing::new(self.poly.clone(), gens)
    }

    /// A ring over more variables with the same generators.
    pub fn extend_vars<S: AsRef<str>>(&self, extra: &[S]) -> Arc<LocRing> {
        let poly = self.poly.extend(extra);
        let gens = self.gen_names.iter().cloned().zip(self.gens.iter().map(|g| g.embed(&poly).unwrap())).collect();
        LocRing::new(poly, gens)
    }

    pub fn from_poly(self: &Arc<Self>, p: MultiPoly) -> Loc {
        assert!(**p.ring() == *self.poly, "numerator from a different ring");
        Loc { ring: self.clone(), num: p, den: vec![0; self.gens.len()] }
    }

    pub fn zero(self: &Arc<Self>) -> Loc {
        self.from_poly(self.poly.zero())
    }

    pub fn one(self: &Arc<Self>) -> Loc {
        self.from_poly(self.poly.one())
    }

    pub fn int(self: &Arc<Self>, n: i64) -> Loc {
        self.from_poly(self.poly.constant(BigInt::from(n)))
    }

    pub fn var(self: &Arc<Self>, name: &str) -> Loc {
        self.from_poly(self.poly.var_named(name))
    }

    pub fn parse(self: &Arc<Self>, s: &str) -> Result<Loc, super::ParsePolyError> {
        Ok(self.from_poly(self.poly.parse(s)?))
    }

    /// `1 / gens[i]`.
    pub fn gen_inverse(self: &Arc<Self>, i: usize) -> Loc {
        let mut x = self.one();
        x.den[i] = 1;
        x
    }

    fn gen_power_product(&self, exps: &[u32]) -> MultiPoly {
        let mut acc = self.poly.one();
        for (g, &e) in self.gens.iter().zip(exps) {
            for _ in 0..e {
                acc = acc.mul(g);
            }
        }
        acc
    }
}

#[derive(Clone)]
pub struct Loc {
    ring: Arc<LocRing>,
    num: MultiPoly,
    den: Vec<u32>,
}

impl Loc {
    pub fn ring(&self) -> &Arc<LocRing> {
        &self.ring
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator_exponents(&self) -> &[u32] {
        &self.den
    }

    pub fn denominator(&self) -> MultiPoly {
        self.ring.gen_power_product(&self.den)
    }

    fn check(&self, o: &Self) {
        assert!(Arc::ptr_eq(&self.ring, &o.ring) || *self.ring == *o.ring, "localized scalars from different rings");
    }

    /// Numerators brought over the exponent-wise maximum denominator.
    fn aligned(&self, o: &Self) -> (MultiPoly, MultiPoly, Vec<u32>) {
        self.check(o);
        if self.den == o.den {
            return (self.num.clone(), o.num.clone(), self.den.clone());
        }
        let l: Vec<u32> = self.den.iter().zip(&o.den).map(|(a, b)| *a.max(b)).collect();
        let da: Vec<u32> = l.iter().zip(&self.den).map(|(l, a)| l - a).collect();
        let db: Vec<u32> = l.iter().zip(&o.den).map(|(l, b)| l - b).collect();
        let na = self.num.mul(&self.ring.gen_power_product(&da));
        let nb = o.num.mul(&self.ring.gen_power_product(&db));
        (na, nb, l)
    }

    fn make(&self, num: MultiPoly, den: Vec<u32>) -> Loc {
        let mut x = Loc { ring: self.ring.clone(), num, den };
        x.cancel_constants();
        x
    }

    /// Cancel constant generators (such as 2 or 3) against the content.
    fn cancel_constants(&mut self) {
        if self.num.is_zero() {
            self.den.iter_mut().for_each(|e| *e = 0);
            return;
        }
        for i in 0..self.den.len() {
            if self.den[i] == 0 {
                continue;
            }
            let Some(c) = self.ring.gens[i].constant_value() else { continue };
            while self.den[i] > 0 {
                match self.num.divexact_int(&c) {
                    Some(q) if self.ring.poly.modulus().is_none() => {
                        self.num = q;
                        self.den[i] -= 1;
                    }
                    _ => break,
                }
            }
        }
    }

    /// Cancel every generator that divides the numerator.
    pub fn reduced(&self) -> Loc {
        let mut x = self.clone();
        for i in 0..x.den.len() {
            while x.den[i] > 0 {
                match x.num.divexact(&x.ring.gens[i]) {
                    Some(q) => {
                        x.num = q;
                        x.den[i] -= 1;
                    }
                    None => break,
                }
            }
        }
        x
    }

    /// The polynomial this value equals, if its denominator cancels.
    pub fn to_poly(&self) -> Option<MultiPoly> {
        let r = self.reduced();
        if r.den.iter().all(|&e| e == 0) {
            Some(r.num)
        } else {
            None
        }
    }

    pub fn div_gen(&self, i: usize) -> Loc {
        let mut den = self.den.clone();
        den[i] += 1;
        self.make(self.num.clone(), den)
    }

    /// Substitute scalars for the variables; every generator must map to a unit.
    pub fn eval<R: Ring>(&self, vals: &[R], zero: &R) -> Option<R> {
        let n = self.num.eval(vals, zero);
        let d = self.denominator().eval(vals, zero);
        if d.is_zero() {
            return None;
        }
        Some(n.mul(&d.inverse()?))
    }

    /// Move into another localization whose variables and generators
    /// include ours (matched by name).
    pub fn embed_into(&self, target: &Arc<LocRing>) -> Option<Loc> {
        let num = self.num.embed(target.poly())?;
        let mut den = vec![0; target.gens.len()];
        for (i, &e) in self.den.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let j = target.gen_index(&self.ring.gen_names[i])?;
            den[j] += e;
        }
        Some(Loc { ring: target.clone(), num, den })
    }

    fn factor_over_gens(&self, mut p: MultiPoly) -> Option<(MultiPoly, Vec<u32>)> {
        let mut exps = vec![0; self.ring.gens.len()];
        let mut progress = true;
        while progress && p.constant_value().is_none() {
            progress = false;
            for (i, g) in self.ring.gens.iter().enumerate() {
                if g.constant_value().is_some() {
                    continue;
                }
                if let Some(q) = p.divexact(g) {
                    p = q;
                    exps[i] += 1;
                    progress = true;
                }
            }
        }
        let c = p.constant_value()?;
        let mut c = c;
        if c.is_zero() {
            return None;
        }
        for (i, g) in self.ring.gens.iter().enumerate() {
            if let Some(gc) = g.constant_value() {
                if gc.abs().is_one() {
                    continue;
                }
                while (&c % &gc).is_zero() {
                    c /= &gc;
                    exps[i] += 1;
                }
            }
        }
        Some((self.ring.poly.constant(c), exps))
    }
}

impl PartialEq for Loc {
    fn eq(&self, o: &Self) -> bool {
        let (a, b, _) = self.aligned(o);
        a == b
    }
}

impl Ring for Loc {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }
    fn one_like(&self) -> Self {
        self.ring.one()
    }
    fn int_like(&self, n: i64) -> Self {
        self.ring.int(n)
    }
    fn bigint_like(&self, n: &BigInt) -> Self {
        self.ring.from_poly(self.ring.poly.constant(n.clone()))
    }
    fn add(&self, o: &Self) -> Self {
        let (a, b, l) = self.aligned(o);
        self.make(a.add(&b), l)
    }
    fn sub(&self, o: &Self) -> Self {
        let (a, b, l) = self.aligned(o);
        self.make(a.sub(&b), l)
    }
    fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let den = self.den.iter().zip(&o.den).map(|(a, b)| a + b).collect();
        self.make(self.num.mul(&o.num), den)
    }
    fn neg(&self) -> Self {
        Loc { ring: self.ring.clone(), num: self.num.neg(), den: self.den.clone() }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn inverse(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        let (unit, exps) = self.factor_over_gens(self.num.clone())?;
        let u = unit.constant_value().unwrap();
        let unit_inv = match self.ring.poly.modulus() {
            Some(m) => super::poly::mod_inverse(&u, m)?,
            None if u.abs().is_one() => u,
            None => return None,
        };
        let num = self.ring.gen_power_product(&self.den).scale(&unit_inv);
        Some(self.make(num, exps))
    }
    fn characteristic(&self) -> u64 {
        self.ring.poly.modulus().map(|m| m.try_into().unwrap()).unwrap_or(0)
    }
    fn is_field(&self) -> bool {
        false
    }
    fn lift_int(&self) -> Option<BigInt> {
        let p = self.to_poly()?;
        p.constant_value()
    }
    fn embed(&self, target: &Arc<LocRing>) -> Option<Loc> {
        self.embed_into(target)
    }
    fn generic_ring(&self) -> Option<Arc<LocRing>> {
        Some(self.ring.clone())
    }
    fn div_int(&self, k: u32) -> Option<Self> {
        if let Some(m) = self.ring.poly.modulus() {
            let inv = super::poly::mod_inverse(&BigInt::from(k), m)?;
            return Some(self.make(self.num.scale(&inv), self.den.clone()));
        }
        let mut k = BigInt::from(k);
        if let Some(q) = self.num.divexact_int(&k) {
            return Some(self.make(q, self.den.clone()));
        }
        let mut den = self.den.clone();
        for (i, g) in self.ring.gens.iter().enumerate() {
            if let Some(c) = g.constant_value() {
                if c.abs().is_one() {
                    continue;
                }
                while (&k % &c).is_zero() {
                    k /= &c;
                    den[i] += 1;
                }
            }
        }
        if !k.abs().is_one() {
            return None;
        }
        let num = if k.is_negative() { self.num.neg() } else { self.num.clone() };
        Some(self.make(num, den))
    }
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .den
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let n = &self.ring.gen_names[i];
                if e == 1 {
                    n.to_string()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, parts.join("*"))
        }
    }
}

impl fmt::Debug for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Loc({self})")
    }
}
