//! Small finite fields `F_p` and `F_p[t]/(t^2 - t + alpha)`.
//!
//! Elements are two `u32` coordinates and a `&'static` field descriptor, so
//! they are `Copy`. Descriptors are interned and live for the whole process.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::loc::{Loc, LocRing};
use super::Ring;

#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FqField {
    p: u32,
    d: u32,
    alpha: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FqError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("t^2 - t + {alpha} is reducible over F_{p}")]
    Reducible { p: u64, alpha: u64 },
    #[error("p = {0} is too large for the table-free representation")]
    TooLarge(u64),
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn intern(f: FqField) -> &'static FqField {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32, u32), &'static FqField>>> = OnceLock::new();
    let mut m = CACHE.get_or_init(Default::default).lock().unwrap();
    m.entry((f.p, f.d, f.alpha)).or_insert_with(|| Box::leak(Box::new(f)))
}

impl FqField {
    pub fn prime(p: u64) -> Result<&'static FqField, FqError> {
        if p >= 1 << 31 {
            return Err(FqError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(FqError::NotPrime(p));
        }
        Ok(intern(FqField { p: p as u32, d: 1, alpha: 0 }))
    }

    /// `F_p[t]/(t^2 - t + alpha)`, which must be a field.
    pub fn quadratic_with_alpha(p: u64, alpha: u64) -> Result<&'static FqField, FqError> {
        let base = Self::prime(p)?;
        let a = (alpha % p) as u32;
        if base.has_root_t2_t_alpha(a) {
            return Err(FqError::Reducible { p, alpha });
        }
        Ok(intern(FqField { p: p as u32, d: 2, alpha: a }))
    }

    /// Smallest `alpha` making `t^2 - t + alpha` irreducible over `F_p`.
    pub fn irreducible_alpha(p: u64) -> Result<u64, FqError> {
        let base = Self::prime(p)?;
        (0..base.p).find(|&a| !base.has_root_t2_t_alpha(a)).map(u64::from).ok_or(FqError::Reducible { p, alpha: 0 })
    }

    pub fn quadratic(p: u64) -> Result<&'static FqField, FqError> {
        Self::quadratic_with_alpha(p, Self::irreducible_alpha(p)?)
    }

    fn has_root_t2_t_alpha(&self, a: u32) -> bool {
        let p = self.p as u64;
        (0..p).any(|t| (t * t + p - t + a as u64).is_multiple_of(p))
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.d)
    }

    /// `alpha` of the modulus `t^2 - t + alpha` (0 for prime fields).
    pub fn alpha(&self) -> u64 {
        self.alpha as u64
    }

    pub fn zero(&'static self) -> Fq {
        Fq { f: self, c: [0, 0] }
    }

    pub fn one(&'static self) -> Fq {
        self.int(1)
    }

    pub fn int(&'static self, n: i64) -> Fq {
        let p = self.p as i64;
        Fq { f: self, c: [n.rem_euclid(p) as u32, 0] }
    }

    /// The class of `t` (degree 2 only).
    pub fn gen(&'static self) -> Fq {
        assert_eq!(self.d, 2, "prime field has no generator t");
        Fq { f: self, c: [0, 1] }
    }

    pub fn from_coords(&'static self, c0: u64, c1: u64) -> Fq {
        assert!(self.d == 2 || c1 == 0);
        let p = self.p as u64;
        Fq { f: self, c: [(c0 % p) as u32, (c1 % p) as u32] }
    }

    /// Element number `i` in the enumeration order `c0 + p*c1`.
    pub fn element(&'static self, i: u64) -> Fq {
        let p = self.p as u64;
        self.from_coords(i % p, i / p)
    }

    pub fn elements(&'static self) -> impl Iterator<Item = Fq> {
        (0..self.order()).map(move |i| self.element(i))
    }

    pub fn random<G: rand::Rng + ?Sized>(&'static self, rng: &mut G) -> Fq {
        self.element(rng.gen_range(0..self.order()))
    }
}

#[derive(Clone, Copy)]
pub struct Fq {
    f: &'static FqField,
    c: [u32; 2],
}

impl Fq {
    pub fn field(&self) -> &'static FqField {
        self.f
    }

    pub fn coords(&self) -> [u32; 2] {
        self.c
    }

    /// Position in the enumeration of `elements()`.
    pub fn index(&self) -> u64 {
        self.c[0] as u64 + self.f.p as u64 * self.c[1] as u64
    }

    fn p(&self) -> u64 {
        self.f.p as u64
    }

    fn same(&self, o: &Fq) {
        assert!(std::ptr::eq(self.f, o.f), "finite field elements from different fields");
    }

    /// Image under `t -> 1 - t`; the identity on prime fields.
    pub fn involute(&self) -> Fq {
        let p = self.p();
        let (a0, a1) = (self.c[0] as u64, self.c[1] as u64);
        Fq { f: self.f, c: [((a0 + a1) % p) as u32, ((p - a1) % p) as u32] }
    }
}

impl PartialEq for Fq {
    fn eq(&self, o: &Self) -> bool {
        self.f == o.f && self.c == o.c
    }
}

impl Eq for Fq {}

impl std::hash::Hash for Fq {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.c.hash(h);
    }
}

impl Ring for Fq {
    fn zero_like(&self) -> Self {
        self.f.zero()
    }
    fn one_like(&self) -> Self {
        self.f.one()
    }
    fn int_like(&self, n: i64) -> Self {
        self.f.int(n)
    }
    fn bigint_like(&self, n: &BigInt) -> Self {
        let p = BigInt::from(self.f.p);
        let r = ((n % &p) + &p) % &p;
        self.f.int(r.to_i64().unwrap())
    }
    fn add(&self, o: &Self) -> Self {
        self.same(o);
        let p = self.p();
        let c0 = (self.c[0] as u64 + o.c[0] as u64) % p;
        let c1 = (self.c[1] as u64 + o.c[1] as u64) % p;
        Fq { f: self.f, c: [c0 as u32, c1 as u32] }
    }
    fn sub(&self, o: &Self) -> Self {
        self.same(o);
        let p = self.p();
        let c0 = (self.c[0] as u64 + p - o.c[0] as u64) % p;
        let c1 = (self.c[1] as u64 + p - o.c[1] as u64) % p;
        Fq { f: self.f, c: [c0 as u32, c1 as u32] }
    }
    fn mul(&self, o: &Self) -> Self {
        self.same(o);
        let p = self.p();
        let (a0, a1) = (self.c[0] as u64, self.c[1] as u64);
        let (b0, b1) = (o.c[0] as u64, o.c[1] as u64);
        if self.f.d == 1 {
            return Fq { f: self.f, c: [(a0 * b0 % p) as u32, 0] };
        }
        // t^2 = t - alpha
        let hi = a1 * b1 % p;
        let c0 = (a0 * b0 % p + p - self.f.alpha as u64 * hi % p) % p;
        let c1 = (a0 * b1 % p + a1 * b0 % p + hi) % p;
        Fq { f: self.f, c: [c0 as u32, c1 as u32] }
    }
    fn neg(&self) -> Self {
        let p = self.p();
        Fq { f: self.f, c: [((p - self.c[0] as u64) % p) as u32, ((p - self.c[1] as u64) % p) as u32] }
    }
    fn is_zero(&self) -> bool {
        self.c == [0, 0]
    }
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let p = self.p();
        let inv_p = |x: u64| -> u64 {
            let (mut b, mut e, mut acc) = (x % p, p - 2, 1u64);
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * b % p;
                }
                b = b * b % p;
                e >>= 1;
            }
            acc
        };
        if self.f.d == 1 {
            return Some(Fq { f: self.f, c: [inv_p(self.c[0] as u64) as u32, 0] });
        }
        let bar = self.involute();
        let n = self.mul(&bar).c[0] as u64;
        let ni = inv_p(n);
        Some(Fq { f: self.f, c: [(bar.c[0] as u64 * ni % p) as u32, (bar.c[1] as u64 * ni % p) as u32] })
    }
    fn characteristic(&self) -> u64 {
        self.p()
    }
    fn is_field(&self) -> bool {
        true
    }
    fn lift_int(&self) -> Option<BigInt> {
        (self.c[1] == 0).then(|| BigInt::from(self.c[0]))
    }
    fn embed(&self, target: &Arc<LocRing>) -> Option<Loc> {
        let m = target.poly().modulus()?;
        if *m != BigInt::from(self.f.p) || self.c[1] != 0 {
            return None;
        }
        Some(target.int(self.c[0] as i64))
    }
    fn generic_ring(&self) -> Option<Arc<LocRing>> {
        if self.f.d != 1 {
            return None;
        }
        let poly = super::PolyRing::with_modulus::<&str>(&[], self.f.p as u64);
        Some(LocRing::new(poly, Vec::new()))
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.c[0], self.c[1]) {
            (a, 0) => write!(f, "{a}"),
            (0, 1) => write!(f, "t"),
            (0, b) => write!(f, "{b}*t"),
            (a, 1) => write!(f, "{a} + t"),
            (a, b) => write!(f, "{a} + {b}*t"),
        }
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq{}^{}({self})", self.f.p, self.f.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_relations() {
        let f = FqField::quadratic_with_alpha(3, 2).unwrap();
        let t = f.gen();
        assert_eq!(t.mul(&t), t.sub(&f.int(2)));
        assert_eq!(t.mul(&t.involute()), f.int(2));
        for x in f.elements().filter(|x| !x.is_zero()) {
            assert!(x.mul(&x.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn fixed_subfield_sizes() {
        for p in [3u64, 5, 7] {
            let f = FqField::quadratic(p).unwrap();
            let fixed = f.elements().filter(|x| x.involute() == *x).count() as u64;
            assert_eq!(fixed, p);
        }
    }

    #[test]
    fn reducible_rejected() {
        // t^2 - t = t(t - 1)
        assert!(FqField::quadratic_with_alpha(5, 0).is_err());
        assert!(FqField::prime(9).is_err());
    }

    #[test]
    fn random_in_range() {
        use rand::SeedableRng;
        let f = FqField::quadratic(5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert!(f.random(&mut rng).index() < 25);
        }
    }
}
