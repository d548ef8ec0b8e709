//! Residues modulo a small integer, used to lift prime-field computations
//! that divide by the characteristic once.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::Ring;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZMod {
    m: u64,
    v: u64,
}

impl ZMod {
    pub fn new(m: u64, v: i64) -> ZMod {
        assert!((2..1 << 31).contains(&m));
        ZMod { m, v: v.rem_euclid(m as i64) as u64 }
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn value(&self) -> u64 {
        self.v
    }

    fn mk(&self, v: u64) -> ZMod {
        ZMod { m: self.m, v: v % self.m }
    }
}

impl Ring for ZMod {
    fn zero_like(&self) -> Self {
        self.mk(0)
    }
    fn one_like(&self) -> Self {
        self.mk(1)
    }
    fn int_like(&self, n: i64) -> Self {
        ZMod::new(self.m, n)
    }
    fn bigint_like(&self, n: &BigInt) -> Self {
        let r = n.mod_floor(&BigInt::from(self.m));
        self.mk(r.to_u64().unwrap())
    }
    fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.m, o.m);
        self.mk(self.v + o.v)
    }
    fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.m, o.m);
        self.mk(self.v + self.m - o.v)
    }
    fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.m, o.m);
        self.mk(self.v * o.v)
    }
    fn neg(&self) -> Self {
        self.mk(self.m - self.v)
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn inverse(&self) -> Option<Self> {
        let e = (self.v as i64).extended_gcd(&(self.m as i64));
        (e.gcd == 1).then(|| ZMod::new(self.m, e.x))
    }
    fn characteristic(&self) -> u64 {
        self.m
    }
    fn is_field(&self) -> bool {
        false
    }
    fn lift_int(&self) -> Option<BigInt> {
        Some(BigInt::from(self.v))
    }
}

impl fmt::Display for ZMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl fmt::Debug for ZMod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.v, self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_mod_nine() {
        let x = ZMod::new(9, 4);
        assert_eq!(x.inverse().unwrap().mul(&x), ZMod::new(9, 1));
        assert!(ZMod::new(9, 6).inverse().is_none());
        assert_eq!(ZMod::new(9, -1).value(), 8);
    }
}
