//! The quadratic extension `K = R[t]/(t^2 - t + alpha)` with involution
//! `t -> 1 - t`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::Ring;

#[derive(Debug, PartialEq)]
pub struct KField<R: Ring> {
    alpha: R,
}

impl<R: Ring> KField<R> {
    pub fn new(alpha: R) -> Arc<Self> {
        Arc::new(KField { alpha })
    }

    pub fn alpha(&self) -> &R {
        &self.alpha
    }

    /// `1 - 4 alpha = (t - tbar)^2`.
    pub fn disc(&self) -> R {
        self.alpha.one_like().sub(&self.alpha.scale_int(4))
    }

    pub fn elem(self: &Arc<Self>, x0: R, x1: R) -> KElem<R> {
        KElem { x0, x1, k: self.clone() }
    }

    pub fn scalar(self: &Arc<Self>, r: R) -> KElem<R> {
        let z = r.zero_like();
        self.elem(r, z)
    }

    pub fn zero(self: &Arc<Self>) -> KElem<R> {
        self.scalar(self.alpha.zero_like())
    }

    pub fn one(self: &Arc<Self>) -> KElem<R> {
        self.scalar(self.alpha.one_like())
    }

    pub fn int(self: &Arc<Self>, n: i64) -> KElem<R> {
        self.scalar(self.alpha.int_like(n))
    }

    pub fn t(self: &Arc<Self>) -> KElem<R> {
        self.elem(self.alpha.zero_like(), self.alpha.one_like())
    }

    /// `t - tbar = 2t - 1`.
    pub fn skew_unit(self: &Arc<Self>) -> KElem<R> {
        self.elem(self.alpha.int_like(-1), self.alpha.int_like(2))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("elements of different quadratic extensions")]
pub struct MismatchedField;

#[derive(Clone)]
pub struct KElem<R: Ring> {
    pub x0: R,
    pub x1: R,
    k: Arc<KField<R>>,
}

impl<R: Ring> KElem<R> {
    pub fn field(&self) -> &Arc<KField<R>> {
        &self.k
    }

    fn compatible(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.k, &o.k) || *self.k == *o.k
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, MismatchedField> {
        if !self.compatible(o) {
            return Err(MismatchedField);
        }
        let hi = self.x1.mul(&o.x1);
        let x0 = self.x0.mul(&o.x0).sub(&self.k.alpha.mul(&hi));
        let x1 = self.x0.mul(&o.x1).add(&self.x1.mul(&o.x0)).add(&hi);
        Ok(KElem { x0, x1, k: self.k.clone() })
    }

    pub fn conj(&self) -> Self {
        KElem { x0: self.x0.add(&self.x1), x1: self.x1.neg(), k: self.k.clone() }
    }

    /// `k kbar`, an element of `R`.
    pub fn norm(&self) -> R {
        self.x0.mul(&self.x0).add(&self.x0.mul(&self.x1)).add(&self.k.alpha.mul(&self.x1.mul(&self.x1)))
    }

    /// `k + kbar`, an element of `R`.
    pub fn trace(&self) -> R {
        self.x0.scale_int(2).add(&self.x1)
    }

    /// `kbar / n(k)` when the norm is a unit.
    pub fn kinvert(&self) -> Option<Self> {
        let ni = self.norm().inverse()?;
        let c = self.conj();
        Some(KElem { x0: c.x0.mul(&ni), x1: c.x1.mul(&ni), k: self.k.clone() })
    }

    pub fn scale(&self, r: &R) -> Self {
        KElem { x0: self.x0.mul(r), x1: self.x1.mul(r), k: self.k.clone() }
    }

    pub fn is_scalar(&self) -> bool {
        self.x1.is_zero()
    }

    /// Coefficient `r` with `self = r (t - tbar)`, when `self` is skew and
    /// 2 is cancellable: skew elements are exactly `-x0 (2t - 1)`.
    pub fn skew_coefficient(&self) -> Option<R> {
        if !self.trace().is_zero() {
            return None;
        }
        Some(self.x0.neg())
    }

    pub fn map<S: Ring>(&self, k: &Arc<KField<S>>, f: impl Fn(&R) -> S) -> KElem<S> {
        k.elem(f(&self.x0), f(&self.x1))
    }
}

impl<R: Ring> PartialEq for KElem<R> {
    fn eq(&self, o: &Self) -> bool {
        self.x0 == o.x0 && self.x1 == o.x1
    }
}

impl<R: Ring> Ring for KElem<R> {
    fn zero_like(&self) -> Self {
        self.k.zero()
    }
    fn one_like(&self) -> Self {
        self.k.one()
    }
    fn int_like(&self, n: i64) -> Self {
        self.k.int(n)
    }
    fn bigint_like(&self, n: &BigInt) -> Self {
        self.k.scalar(self.x0.bigint_like(n))
    }
    fn add(&self, o: &Self) -> Self {
        KElem { x0: self.x0.add(&o.x0), x1: self.x1.add(&o.x1), k: self.k.clone() }
    }
    fn sub(&self, o: &Self) -> Self {
        KElem { x0: self.x0.sub(&o.x0), x1: self.x1.sub(&o.x1), k: self.k.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        self.try_mul(o).expect("elements of different quadratic extensions")
    }
    fn neg(&self) -> Self {
        KElem { x0: self.x0.neg(), x1: self.x1.neg(), k: self.k.clone() }
    }
    fn is_zero(&self) -> bool {
        self.x0.is_zero() && self.x1.is_zero()
    }
    fn inverse(&self) -> Option<Self> {
        self.kinvert()
    }
    fn characteristic(&self) -> u64 {
        self.x0.characteristic()
    }
    fn is_field(&self) -> bool {
        false
    }
    fn div_int(&self, k: u32) -> Option<Self> {
        Some(KElem { x0: self.x0.div_int(k)?, x1: self.x1.div_int(k)?, k: self.k.clone() })
    }
}

impl<R: Ring> fmt::Display for KElem<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x1.is_zero() {
            write!(f, "{}", self.x0)
        } else if self.x0.is_zero() {
            write!(f, "({})*t", self.x1)
        } else {
            write!(f, "({}) + ({})*t", self.x0, self.x1)
        }
    }
}

impl<R: Ring> fmt::Debug for KElem<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K[{:?}, {:?}]", self.x0, self.x1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{FqField, LocRing, PolyRing};

    #[test]
    fn defining_relations() {
        let f = FqField::prime(7).unwrap();
        let k = KField::new(f.int(3));
        let t = k.t();
        assert_eq!(t.mul(&t), t.sub(&k.int(3)));
        assert_eq!(t.mul(&t.conj()), k.int(3));
        let s = k.skew_unit();
        assert_eq!(s.mul(&s), k.scalar(k.disc()));
        assert_eq!(t.norm(), f.int(3));
        assert_eq!(t.trace(), f.int(1));
    }

    #[test]
    fn f9_all_invertible() {
        let f = FqField::prime(3).unwrap();
        let k = KField::new(f.int(2));
        let mut count = 0;
        for a in f.elements() {
            for b in f.elements() {
                let x = k.elem(a, b);
                if x.is_zero() {
                    continue;
                }
                let inv = x.kinvert().expect("nonzero element of F9 invertible");
                assert!(x.mul(&inv).is_one());
                count += 1;
            }
        }
        assert_eq!(count, 8);
    }

    #[test]
    fn generic_t_not_invertible() {
        let poly = PolyRing::new(&["alpha"]);
        let ring = LocRing::new(poly.clone(), vec![("d".into(), poly.parse("1 - 4*alpha").unwrap())]);
        let k = KField::new(ring.var("alpha"));
        assert!(k.t().kinvert().is_none());
        assert!(k.one().kinvert().unwrap().is_one());
    }

    #[test]
    fn mismatched_fields() {
        let f = FqField::prime(5).unwrap();
        let k1 = KField::new(f.int(2));
        let k2 = KField::new(f.int(3));
        assert_eq!(k1.t().try_mul(&k2.t()), Err(MismatchedField));
    }
}
