//! Finite Moufang sets on `G u {infinity}` from division instances: the
//! permutation `tau`, the root groups, exhaustive axiom checks and the
//! order of the little projective group.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::hcns::{DivisionVerdict, GElem, Hcns, HcnsError};
use crate::oneinv::{gl, OneInvError};
use crate::perm::{self, Perm, StabChain};
use crate::scalars::{Fq, Ring};

#[derive(Debug, Clone, PartialEq)]
pub enum MoufPoint {
    Infinity,
    Point(GElem<Fq>),
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MoufangError {
    #[error("not a division structure: nu vanishes at {0}")]
    NotDivision(String),
    #[error(transparent)]
    Hcns(#[from] HcnsError),
    #[error(transparent)]
    OneInv(#[from] OneInvError),
    #[error("tau maps a point outside the point set")]
    OutsidePoints,
}

fn key(g: &GElem<Fq>) -> Vec<u64> {
    let mut k = vec![g.a.x0.index(), g.a.x1.index()];
    for c in &g.v.0 {
        k.push(c.x0.index());
        k.push(c.x1.index());
    }
    k.push(g.u.x0.index());
    k.push(g.u.x1.index());
    k
}

/// `tau(g) = g_l^-1`.
pub fn tau_via_gl(h: &Hcns<Fq>, g: &GElem<Fq>) -> Result<GElem<Fq>, OneInvError> {
    Ok(h.g_inv(&gl(h, g)?))
}

/// The coordinate formula for `tau(g)`, with the second J-component left to
/// group membership.
pub fn tau_explicit(h: &Hcns<Fq>, g: &GElem<Fq>) -> Result<GElem<Fq>, OneInvError> {
    let (a, v, u) = (&g.a, &g.v, &g.u);
    let ub = u.conj();
    let nu = h.nu_parts(a, v, &ub);
    let ni = nu.inverse().ok_or_else(|| OneInvError::NotOneInvertible(nu.to_string()))?;
    let nv = h.eval_n(v);
    let vs = h.eval_sharp(v);
    let x = h.kfield().scalar(h.t_norm(v));
    let a2 = ub.mul(a).sub(&a.mul(&a.conj()).mul(a)).sub(&nv.conj());
    let v2 = v.kscale(&ub.sub(&x)).sub(&vs.kscale(&a.conj())).add(&h.cross(v, &vs));
    let k = h.kfield();
    let two = k.int(2);
    let rest = two
        .mul(&nv)
        .mul(&nv.conj())
        .add(&two.mul(&k.scalar(a.norm())).mul(&h.eval_t(&vs, &vs)))
        .sub(&two.mul(&ub.mul(a).mul(&nv).add(&u.mul(&a.conj()).mul(&nv.conj()))));
    let gamma = ub.scale(&ni).add(&rest.scale(&ni.mul(&ni)));
    Ok(h.g_make(a2.scale(&ni), v2.rscale(&ni), gamma)?)
}

/// Point 0 is infinity; point `i + 1` is the `i`-th element of `G`.
#[derive(Clone)]
pub struct MoufangSetFinite {
    h: Hcns<Fq>,
    elems: Vec<GElem<Fq>>,
    index: HashMap<Vec<u64>, usize>,
    tau: Perm,
    /// Left translations by the elements of `G`, in the order of `elems`.
    u_inf: Vec<Perm>,
    /// `U_1 = tau U_inf tau^-1`.
    u_one: Vec<Perm>,
    identity_point: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct MoufangReport {
    pub points: usize,
    pub tau_involution: bool,
    pub tau_maps_infinity_to_one: bool,
    pub regular: bool,
    pub conjugation: bool,
    /// `(m, g, n)`: `g` in `U_m` with `g U_n g^-1 != U_{g n}`.
    pub witness: Option<(usize, usize, usize)>,
}

impl MoufangReport {
    pub fn all_pass(&self) -> bool {
        self.tau_involution && self.tau_maps_infinity_to_one && self.regular && self.conjugation
    }
}

impl MoufangSetFinite {
    /// Requires a division instance; `tau` is computed through `g_l`.
    pub fn build(h: &Hcns<Fq>) -> Result<Self, MoufangError> {
        if let DivisionVerdict::NotDivision { witness } = h.is_division_bruteforce()? {
            return Err(MoufangError::NotDivision(format!("{witness:?}")));
        }
        let elems = h.group_elements()?;
        let index: HashMap<Vec<u64>, usize> = elems.iter().enumerate().map(|(i, g)| (key(g), i + 1)).collect();
        let n = elems.len() + 1;
        let identity_point = index[&key(&h.g_identity())];
        let mut tau = vec![0u32; n];
        tau[0] = identity_point as u32;
        for (i, g) in elems.iter().enumerate() {
            let p = i + 1;
            if p == identity_point {
                tau[p] = 0;
            } else {
                let t = tau_via_gl(h, g)?;
                tau[p] = *index.get(&key(&t)).ok_or(MoufangError::OutsidePoints)? as u32;
            }
        }
        let u_inf = elems
            .iter()
            .map(|g| {
                let mut p = vec![0u32; n];
                for (j, x) in elems.iter().enumerate() {
                    p[j + 1] = index[&key(&h.g_mul(g, x))] as u32;
                }
                p
            })
            .collect();
        let mut ms =
            MoufangSetFinite { h: h.clone(), elems, index, tau: Vec::new(), u_inf, u_one: Vec::new(), identity_point };
        ms.set_tau(tau);
        Ok(ms)
    }

    /// Replace `tau`, recomputing the derived root groups.
    pub fn set_tau(&mut self, tau: Perm) {
        self.u_one = self.u_inf.iter().map(|g| perm::conjugate(&tau, g)).collect();
        self.tau = tau;
    }

    pub fn hcns(&self) -> &Hcns<Fq> {
        &self.h
    }

    pub fn num_points(&self) -> usize {
        self.elems.len() + 1
    }

    pub fn point(&self, i: usize) -> MoufPoint {
        if i == 0 {
            MoufPoint::Infinity
        } else {
            MoufPoint::Point(self.elems[i - 1].clone())
        }
    }

    pub fn point_index(&self, g: &GElem<Fq>) -> Option<usize> {
        self.index.get(&key(g)).copied()
    }

    pub fn identity_point(&self) -> usize {
        self.identity_point
    }

    pub fn tau(&self) -> &Perm {
        &self.tau
    }

    pub fn u_infinity(&self) -> &[Perm] {
        &self.u_inf
    }

    /// The translation of `U_infinity` sending the identity point to `p`.
    fn translation_to(&self, p: usize) -> &Perm {
        &self.u_inf[p - 1]
    }

    /// `U_p`, listed in the order of `G`.
    pub fn root_group(&self, p: usize) -> Vec<Perm> {
        if p == 0 {
            return self.u_inf.clone();
        }
        let t = self.translation_to(p);
        self.u_one.iter().map(|g| perm::conjugate(t, g)).collect()
    }

    /// Both `tau` computations agree on every finite point.
    pub fn tau_implementations_agree(&self) -> Result<bool, MoufangError> {
        for (i, g) in self.elems.iter().enumerate() {
            let p = i + 1;
            if p == self.identity_point {
                continue;
            }
            let e = tau_explicit(&self.h, g)?;
            if self.point_index(&e) != Some(self.tau[p] as usize) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The axioms, with the conjugation axiom checked for every element of
    /// every root group when `exhaustive`, and for a generating set of each
    /// root group otherwise.
    pub fn verify(&self, exhaustive: bool) -> MoufangReport {
        use rayon::prelude::*;
        let n = self.num_points();
        let tau_involution = perm::is_identity(&perm::compose(&self.tau, &self.tau));
        let tau_maps_infinity_to_one = self.tau[0] as usize == self.identity_point;
        let groups: Vec<Vec<Perm>> = (0..n).into_par_iter().map(|p| self.root_group(p)).collect();
        // Each U_m indexed by the image of a base point other than m.
        let base_of = |m: usize| if m == 0 { 1 } else { 0 };
        let lookup: Vec<HashMap<u32, usize>> = groups
            .iter()
            .enumerate()
            .map(|(m, gs)| gs.iter().enumerate().map(|(i, g)| (g[base_of(m)], i)).collect())
            .collect();
        let regular = (0..n).into_par_iter().all(|m| {
            let gs = &groups[m];
            gs.iter().all(|g| g[m] as usize == m) && lookup[m].len() == n - 1 && !lookup[m].contains_key(&(m as u32))
        });
        let member =
            |m: usize, x: &Perm| -> bool { lookup[m].get(&x[base_of(m)]).is_some_and(|&i| groups[m][i] == *x) };
        let gens: Vec<usize> = if exhaustive { (0..n - 1).collect() } else { self.generating_subset() };
        let witness = (0..n).into_par_iter().find_map_first(|m| {
            for &gi in &gens {
                let g = &groups[m][gi];
                for (nn, un) in groups.iter().enumerate() {
                    let target = g[nn] as usize;
                    if !un.iter().all(|x| member(target, &perm::conjugate(g, x))) {
                        return Some((m, gi, nn));
                    }
                }
            }
            None
        });
        MoufangReport {
            points: n,
            tau_involution,
            tau_maps_infinity_to_one,
            regular,
            conjugation: witness.is_none(),
            witness,
        }
    }

    /// Indices into `G` of a generating set, chosen greedily.
    pub fn generating_subset(&self) -> Vec<usize> {
        let n = self.num_points();
        let mut gens: Vec<usize> = Vec::new();
        let mut reached = vec![false; n];
        reached[self.identity_point] = true;
        let mut count = 1;
        for i in 0..self.elems.len() {
            if reached[i + 1] {
                continue;
            }
            gens.push(i);
            // Close the subgroup, seen as the orbit of the identity point.
            let mut queue: Vec<usize> = (1..n).filter(|&p| reached[p]).collect();
            while let Some(p) = queue.pop() {
                for &gi in &gens {
                    let q = self.u_inf[gi][p] as usize;
                    if !reached[q] {
                        reached[q] = true;
                        count += 1;
                        queue.push(q);
                    }
                }
            }
            if count == n - 1 {
                break;
            }
        }
        gens
    }

    /// Order of the group generated by all root groups; `U_infinity` and
    /// `U_1` suffice since every `U_p` is conjugate to `U_1` inside
    /// `U_infinity`.
    pub fn little_projective_order(&self) -> BigUint {
        let gens: Vec<Perm> =
            self.generating_subset().into_iter().flat_map(|i| [self.u_inf[i].clone(), self.u_one[i].clone()]).collect();
        StabChain::new(self.num_points(), &gens).order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::hermitian_form_hcns;
    use crate::scalars::{FqField, KField};

    fn n0(p: u64) -> Hcns<Fq> {
        let f = FqField::prime(p).unwrap();
        let k = KField::new(f.int(FqField::irreducible_alpha(p).unwrap() as i64));
        hermitian_form_hcns(&k, vec![]).unwrap()
    }

    /// Order of PSU(3, q) from the standard formula.
    fn psu3(q: u64) -> u64 {
        let g = if (q + 1).is_multiple_of(3) { 3 } else { 1 };
        q.pow(3) * (q.pow(3) + 1) * (q * q - 1) / g
    }

    #[test]
    fn q3_moufang_set() {
        let ms = MoufangSetFinite::build(&n0(3)).unwrap();
        assert_eq!(ms.num_points(), 28);
        assert!(ms.tau_implementations_agree().unwrap());
        let r = ms.verify(true);
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(ms.little_projective_order(), BigUint::from(psu3(3)));
        assert_eq!(psu3(3), 6048);
    }

    #[test]
    fn corrupted_tau_fails() {
        let mut ms = MoufangSetFinite::build(&n0(3)).unwrap();
        let mut t = ms.tau().clone();
        // Swap the images of two points whose images are finite, keeping an involution.
        let (a, b) =
            (1..28).map(|p| (p, t[p] as usize)).find(|&(p, q)| q != 0 && q != p && p != ms.identity_point()).unwrap();
        let c = (1..28).find(|&c| c != a && c != b && t[c] != 0 && t[c] as usize != c && t[c] as usize != a).unwrap();
        let d = t[c] as usize;
        // Re-pair (a, b), (c, d) as (a, c), (b, d).
        t[a] = c as u32;
        t[c] = a as u32;
        t[b] = d as u32;
        t[d] = b as u32;
        ms.set_tau(t);
        let r = ms.verify(true);
        assert!(!r.conjugation && r.witness.is_some());
    }

    #[test]
    fn not_division_rejected() {
        let f = FqField::prime(3).unwrap();
        let k = KField::new(f.int(FqField::irreducible_alpha(3).unwrap() as i64));
        let h = hermitian_form_hcns(&k, vec![vec![k.int(1)]]).unwrap();
        assert!(matches!(MoufangSetFinite::build(&h), Err(MoufangError::NotDivision(_))));
    }

    #[test]
    fn q5_points_and_order() {
        let ms = MoufangSetFinite::build(&n0(5)).unwrap();
        assert_eq!(ms.num_points(), 126);
        assert!(ms.tau_implementations_agree().unwrap());
        assert!(ms.verify(false).all_pass());
        assert_eq!(ms.little_projective_order(), BigUint::from(psu3(5)));
    }
}
