//! The exact scalar tower: integers, sparse polynomials, localizations,
//! finite fields and the quadratic extension `K = R[t]/(t^2 - t + alpha)`.

use std::fmt;

pub use num_bigint::BigInt;

mod fq;
mod kelem;
mod loc;
mod poly;
mod zmod;

pub use fq::{Fq, FqError, FqField};
pub use kelem::{KElem, KField, MismatchedField};
pub use loc::{Loc, LocRing};
pub use poly::{stats as poly_stats, MultiPoly, ParsePolyError, PolyRing};
pub use zmod::ZMod;

/// A commutative unital ring whose elements carry enough context to build
/// constants of the same ring (`zero_like`, `int_like`, ...).
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, n: i64) -> Self;
    fn bigint_like(&self, n: &BigInt) -> Self;

    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    /// Inverse of `self` when it is a unit the representation can certify.
    fn inverse(&self) -> Option<Self>;

    /// 0 for rings of characteristic zero.
    fn characteristic(&self) -> u64;

    /// True when every nonzero element is invertible.
    fn is_field(&self) -> bool;

    /// Integer representative, for prime fields and constant integers.
    fn lift_int(&self) -> Option<BigInt> {
        None
    }

    /// Image in a localized polynomial ring with a compatible coefficient
    /// ring; used to move an instance to a generic point.
    fn embed(&self, _target: &std::sync::Arc<LocRing>) -> Option<Loc> {
        None
    }

    /// Localized polynomial ring this ring embeds into; used to adjoin
    /// fresh indeterminates for generic-point checks.
    fn generic_ring(&self) -> Option<std::sync::Arc<LocRing>> {
        None
    }

    /// `self / k` when `k` is invertible.
    fn div_int(&self, k: u32) -> Option<Self> {
        self.int_like(k as i64).inverse().map(|i| self.mul(&i))
    }

    fn scale_int(&self, k: i64) -> Self {
        self.mul(&self.int_like(k))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Sum of an iterator of ring elements, starting from `zero`.
pub fn sum_of<R: Ring, I: IntoIterator<Item = R>>(zero: &R, it: I) -> R {
    it.into_iter().fold(zero.zero_like(), |acc, x| acc.add(&x))
}
