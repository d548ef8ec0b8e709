//! One-invertibility: the closed forms of `g_r` and `g_l`, the
//! grade-reversing automorphism `tau_g`, its action on `G` and the torus
//! elements `beta(mu, lambda)` and `psi(lambda)`.

use std::sync::Arc;

use crate::auto::{GradingSignature, LieAuto, LieBasis};
use crate::hcns::{GElem, Hcns, HcnsError, JElem};
use crate::lie::{LieError, Sign};
use crate::scalars::{Fq, KElem, Ring};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OneInvError {
    #[error("nu(g) = {0} is not invertible")]
    NotOneInvertible(String),
    #[error("1 - mu lambda is not invertible")]
    Singular,
    #[error(transparent)]
    Group(#[from] HcnsError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error("N(v^sharp) != conj(N(v))^2")]
    Precondition,
}

/// The unnormalized data `(alpha_1, alpha_2, gamma)` of `g_r`.
#[derive(Clone, Debug)]
pub struct GrData<R: Ring> {
    pub nu: R,
    pub alpha1: KElem<R>,
    pub alpha2: JElem<R>,
    pub gamma: KElem<R>,
}

pub fn gr_data<R: Ring>(h: &Hcns<R>, g: &GElem<R>) -> GrData<R> {
    let (a, v, u) = (&g.a, &g.v, &g.u);
    let k = h.kfield();
    let nu = h.nu(g);
    let nv = h.eval_n(v);
    let vs = h.eval_sharp(v);
    let tvv = h.eval_t(v, v);
    let alpha1 = u.neg().mul(a).add(&a.mul(a).mul(&a.conj())).add(&nv.conj());
    let alpha2 = v.kscale(&u.neg().add(&tvv)).add(&vs.kscale(&a.conj())).sub(&h.cross(v, &vs));
    let two = k.int(2);
    let gamma = u
        .scale(&nu)
        .add(&two.mul(&nv).mul(&nv.conj()))
        .add(&two.mul(&k.scalar(a.norm())).mul(&h.eval_t(&vs, &vs)))
        .sub(&two.mul(&u.mul(a).mul(&nv).add(&u.conj().mul(&a.conj()).mul(&nv.conj()))));
    GrData { nu, alpha1, alpha2, gamma }
}

/// `g_r = (alpha_1 / nu, alpha_2 / nu, gamma / nu^2)`.
pub fn gr<R: Ring>(h: &Hcns<R>, g: &GElem<R>) -> Result<GElem<R>, OneInvError> {
    let d = gr_data(h, g);
    let ni = d.nu.inverse().ok_or_else(|| OneInvError::NotOneInvertible(d.nu.to_string()))?;
    let a = d.alpha1.scale(&ni);
    let v = d.alpha2.rscale(&ni);
    let u = d.gamma.scale(&ni.mul(&ni));
    Ok(h.g_make(a, v, u)?)
}

/// `g_l = ((g^-1)_r)^-1`.
pub fn gl<R: Ring>(h: &Hcns<R>, g: &GElem<R>) -> Result<GElem<R>, OneInvError> {
    Ok(h.g_inv(&gr(h, &h.g_inv(g))?))
}

/// The literal reading `g_l = (g^-1)_r`.
pub fn gl_literal<R: Ring>(h: &Hcns<R>, g: &GElem<R>) -> Result<GElem<R>, OneInvError> {
    gr(h, &h.g_inv(g))
}

/// `tau(g) = g_l^-1`, the permutation of the Moufang set.
pub fn tau_point<R: Ring>(h: &Hcns<R>, g: &GElem<R>) -> Result<GElem<R>, OneInvError> {
    gr(h, &h.g_inv(g))
}

#[derive(Clone, Debug)]
pub struct OneInvCert<R: Ring> {
    pub g: GElem<R>,
    pub nu: R,
    pub nu_inverse: R,
    pub g_r: GElem<R>,
    pub g_l: GElem<R>,
    pub tau: LieAuto<R>,
}

/// `tau_{g, sign} = exp_-sign(g_l) exp_sign(g) exp_-sign(g_r)`.
pub fn tau_with<R: Ring>(
    basis: &Arc<LieBasis<R>>,
    sign: Sign,
    g_l: &GElem<R>,
    g: &GElem<R>,
    g_r: &GElem<R>,
) -> Result<LieAuto<R>, LieError> {
    let other = flip(sign);
    let l = LieAuto::exp(basis, other, g_l)?;
    let m = LieAuto::exp(basis, sign, g)?;
    let r = LieAuto::exp(basis, other, g_r)?;
    Ok(l.mul(&m).mul(&r))
}

pub fn flip(s: Sign) -> Sign {
    match s {
        Sign::Plus => Sign::Minus,
        Sign::Minus => Sign::Plus,
    }
}

pub fn certify<R: Ring>(basis: &Arc<LieBasis<R>>, g: &GElem<R>) -> Result<OneInvCert<R>, OneInvError> {
    let h = basis.lie().hcns();
    let nu = h.nu(g);
    let nu_inverse = nu.inverse().ok_or_else(|| OneInvError::NotOneInvertible(nu.to_string()))?;
    let g_r = gr(h, g)?;
    let g_l = gl(h, g)?;
    let tau = tau_with(basis, Sign::Plus, &g_l, g, &g_r)?;
    Ok(OneInvCert { g: g.clone(), nu, nu_inverse, g_r, g_l, tau })
}

impl<R: Ring> OneInvCert<R> {
    pub fn reverses(&self) -> bool {
        self.tau.grading_signature() == GradingSignature::Reverses
    }
}

/// The element `h'` with `phi = exp_sign(h')`, read off from the image of
/// the opposite corner and then checked on the whole matrix.
pub fn recognize_exp<R: Ring>(phi: &LieAuto<R>, sign: Sign) -> Result<Option<GElem<R>>, OneInvError> {
    let basis = phi.basis();
    let lie = basis.lie();
    let h = lie.hcns();
    let k = h.kfield();
    let one = h.alpha().one_like();
    let disc_inv = k.disc().inverse().ok_or(OneInvError::Singular)?;
    // s^-1 for s = t - tbar
    let s_inv = k.skew_unit().scale(&disc_inv);
    let (start, x_part) = match sign {
        Sign::Plus => {
            let y = phi.apply(&lie.bottom(one.clone()));
            (lie.bottom(one.clone()), y.am1.kscale(&s_inv))
        }
        Sign::Minus => {
            let y = phi.apply(&lie.top(one.clone()));
            (lie.top(one.clone()), y.a1.kscale(&s_inv))
        }
    };
    let image = phi.apply(&start);
    let xl = match sign {
        Sign::Plus => lie.plus_one(x_part.clone()),
        Sign::Minus => lie.minus_one(x_part.clone()),
    };
    let half = lie.bracket(&xl, &lie.bracket(&xl, &start));
    let half = half.div_int(2).ok_or(LieError::Unsupported(one.characteristic()))?;
    let rest = image.grade_part(0).sub(&half.grade_part(0));
    let c = rest.f.get(0, 0).mul(&disc_inv);
    let r = match sign {
        Sign::Plus => c,
        Sign::Minus => c.neg(),
    };
    let cand = h.g_from_skew(x_part.k, x_part.j, &r)?;
    let e = LieAuto::exp(basis, sign, &cand)?;
    Ok((e == *phi).then_some(cand))
}

/// The right action of `tau` on `G`: `tau^-1 exp_-(x) tau = exp_+(tau(x))`.
pub fn tau_act<R: Ring>(tau: &LieAuto<R>, x: &GElem<R>) -> Result<Option<GElem<R>>, OneInvError> {
    let ti = tau.inverse().ok_or(OneInvError::Singular)?;
    conjugate_minus(&ti, tau, x)
}

/// `tau exp_-(x) tau^-1 = exp_+(tau^-1(x))`.
pub fn tau_inv_act<R: Ring>(tau: &LieAuto<R>, x: &GElem<R>) -> Result<Option<GElem<R>>, OneInvError> {
    let ti = tau.inverse().ok_or(OneInvError::Singular)?;
    conjugate_minus(tau, &ti, x)
}

fn conjugate_minus<R: Ring>(
    left: &LieAuto<R>,
    right: &LieAuto<R>,
    x: &GElem<R>,
) -> Result<Option<GElem<R>>, OneInvError> {
    let conj = left.mul(&LieAuto::exp(left.basis(), Sign::Minus, x)?).mul(right);
    recognize_exp(&conj, Sign::Plus)
}

/// `r_+ = exp_+(0, r (t - tbar))`.
pub fn r_plus<R: Ring>(basis: &Arc<LieBasis<R>>, r: &R) -> Result<LieAuto<R>, OneInvError> {
    let h = basis.lie().hcns();
    let g = h.g_make(h.kfield().zero(), h.zero_j(), h.kfield().skew_unit().scale(r))?;
    Ok(LieAuto::exp(basis, Sign::Plus, &g)?)
}

/// `r_- = exp_-(0, -r (t - tbar) / (1 - 4 alpha))`.
pub fn r_minus<R: Ring>(basis: &Arc<LieBasis<R>>, r: &R) -> Result<LieAuto<R>, OneInvError> {
    let h = basis.lie().hcns();
    let k = h.kfield();
    let d = k.disc().inverse().ok_or(OneInvError::Singular)?;
    let g = h.g_make(k.zero(), h.zero_j(), k.skew_unit().scale(&r.mul(&d).neg()))?;
    Ok(LieAuto::exp(basis, Sign::Minus, &g)?)
}

/// `beta(mu, lambda) = (-lambda/(1 - mu lambda))_- mu_+ lambda_- (-mu/(1 - mu lambda))_+`.
pub fn beta<R: Ring>(basis: &Arc<LieBasis<R>>, mu: &R, lam: &R) -> Result<LieAuto<R>, OneInvError> {
    let c = mu.one_like().sub(&mu.mul(lam));
    let ci = c.inverse().ok_or(OneInvError::Singular)?;
    Ok(r_minus(basis, &lam.mul(&ci).neg())?
        .mul(&r_plus(basis, mu)?)
        .mul(&r_minus(basis, lam)?)
        .mul(&r_plus(basis, &mu.mul(&ci).neg())?))
}

/// `psi(lambda) = beta(1, 1 - lambda)`, acting as `lambda^i` on `L_i`.
pub fn psi<R: Ring>(basis: &Arc<LieBasis<R>>, lam: &R) -> Result<LieAuto<R>, OneInvError> {
    if lam.inverse().is_none() {
        return Err(OneInvError::Singular);
    }
    beta(basis, &lam.one_like(), &lam.one_like().sub(lam))
}

/// The diagonal automorphism acting as `c^i` on `L_i`.
pub fn grade_scaling<R: Ring>(basis: &Arc<LieBasis<R>>, c: &R) -> Option<LieAuto<R>> {
    let ci = c.inverse()?;
    let mut m = LieAuto::identity(basis).matrix().clone();
    for (i, g) in basis.grades().into_iter().enumerate() {
        let s = if g >= 0 { c.pow(g as u32) } else { ci.pow((-g) as u32) };
        m.set(i, i, s);
    }
    Some(LieAuto::from_matrix(basis, m))
}

/// Outcome of the exhaustive two-sided check over a finite group.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct BiconditionalReport {
    pub elements: usize,
    /// `nu(g)` invertible and the certificate reverses the grading.
    pub certified_reversing: usize,
    /// `g != 1` with `nu(g) = 0`.
    pub singular: usize,
    /// Pairs `(h, h')` ruled out for singular elements.
    pub pairs_excluded: u64,
    /// Every `exp_-(h')` fixes `(t - tbar)_-2`.
    pub minus_fixes_bottom: bool,
    pub counterexamples: usize,
}

impl BiconditionalReport {
    pub fn all_pass(&self) -> bool {
        self.counterexamples == 0 && self.minus_fixes_bottom
    }
}

/// For every `g` in a finite `G`: `nu(g) != 0` yields a grade-reversing
/// certificate, and `nu(g) = 0`, `g != 1` admits no grade-reversing
/// `exp_-(h) exp_+(g) exp_-(h')`. Since `exp_-(h')` fixes the bottom basis
/// vector, the image of `(t - tbar)_-2` depends on `h` only and must lie in
/// `L_2`; every `h` is tested, and any `h` passing that filter is tested
/// against all `h'` on the full matrix.
pub fn exhaustive_biconditional(basis: &Arc<LieBasis<Fq>>) -> Result<BiconditionalReport, OneInvError> {
    use rayon::prelude::*;
    let h = basis.lie().hcns();
    let elems = h.group_elements()?;
    let n = basis.dim();
    let minus: Vec<LieAuto<Fq>> =
        elems.par_iter().map(|x| LieAuto::exp(basis, Sign::Minus, x)).collect::<Result<_, _>>()?;
    let bottom = n - 1;
    let unit = LieAuto::identity(basis).matrix().column(bottom);
    let minus_fixes_bottom = minus.iter().all(|m| m.matrix().column(bottom) == unit);
    let per: Vec<BiconditionalReport> = elems
        .par_iter()
        .map(|g| -> Result<BiconditionalReport, OneInvError> {
            let mut rep = BiconditionalReport { elements: 1, ..Default::default() };
            if h.is_identity(g) {
                return Ok(rep);
            }
            if !h.nu(g).is_zero() {
                if certify(basis, g)?.reverses() {
                    rep.certified_reversing += 1;
                } else {
                    rep.counterexamples += 1;
                }
                return Ok(rep);
            }
            rep.singular += 1;
            let e = LieAuto::exp(basis, Sign::Plus, g)?;
            let col = e.matrix().column(bottom);
            for m in &minus {
                let w = m.matrix().mul_vec(&col);
                if w[1..].iter().all(|x| x.is_zero()) {
                    let mg = m.mul(&e);
                    if minus.iter().any(|r| mg.mul(r).grading_signature() == GradingSignature::Reverses) {
                        rep.counterexamples += 1;
                    }
                }
                rep.pairs_excluded += elems.len() as u64;
            }
            Ok(rep)
        })
        .collect::<Result<_, _>>()?;
    Ok(per.into_iter().fold(BiconditionalReport { minus_fixes_bottom, ..Default::default() }, |a, r| {
        BiconditionalReport {
            elements: a.elements + r.elements,
            certified_reversing: a.certified_reversing + r.certified_reversing,
            singular: a.singular + r.singular,
            pairs_excluded: a.pairs_excluded + r.pairs_excluded,
            minus_fixes_bottom: a.minus_fixes_bottom,
            counterexamples: a.counterexamples + r.counterexamples,
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::hermitian_form_hcns;
    use crate::lie::tests::lie_instances;
    use crate::lie::Lie;
    use crate::scalars::{FqField, KField};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn biconditional_f9() {
        let f = FqField::prime(3).unwrap();
        let k = KField::new(f.int(2));
        for gram in [vec![], vec![vec![k.int(1)]]] {
            let h = hermitian_form_hcns(&k, gram).unwrap();
            let basis = LieBasis::new(Lie::new(h));
            let rep = exhaustive_biconditional(&basis).unwrap();
            assert!(rep.all_pass(), "{rep:?}");
            assert_eq!(rep.elements, basis.lie().hcns().group_elements().unwrap().len());
        }
    }

    #[test]
    fn tau_reverses_and_hua_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [5, 3] {
            for lie in lie_instances(p) {
                let h = lie.hcns().clone();
                let basis = LieBasis::new(lie);
                let k = h.kfield();
                let mut seen = 0;
                while seen < 8 {
                    let g = h.random_g(&mut rng);
                    if h.nu(&g).is_zero() {
                        assert!(certify(&basis, &g).is_err());
                        continue;
                    }
                    seen += 1;
                    let c = certify(&basis, &g).unwrap();
                    assert!(c.reverses());
                    assert_eq!(c.tau.bottom_to_top(), c.nu);
                    let lit = gl_literal(&h, &g).unwrap();
                    let t_lit = tau_with(&basis, Sign::Plus, &lit, &g, &c.g_r).unwrap();
                    assert_ne!(t_lit.grading_signature(), GradingSignature::Reverses);
                    assert_eq!(tau_point(&h, &g).unwrap(), h.g_inv(&c.g_l));
                    assert_eq!(gr(&h, &c.g_l).unwrap(), g);
                    assert_eq!(gl(&h, &c.g_r).unwrap(), g);
                    let grr = gr(&h, &c.g_r).unwrap();
                    assert_eq!(tau_act(&c.tau, &c.g_l).unwrap(), Some(grr));
                    let gll = gl(&h, &c.g_l).unwrap();
                    assert_eq!(tau_inv_act(&c.tau, &c.g_r).unwrap(), Some(gll));
                    let x = h.g_make(k.zero(), h.zero_j(), k.skew_unit()).unwrap();
                    let want = h.g_make(k.zero(), h.zero_j(), k.skew_unit().scale(&c.nu)).unwrap();
                    assert_eq!(tau_act(&c.tau, &x).unwrap(), Some(want));
                    let f = h.alpha().field();
                    let lam = f.int(2);
                    let conj = c.tau.mul(&psi(&basis, &lam).unwrap()).mul(&c.tau.inverse().unwrap());
                    assert_eq!(conj, psi(&basis, &lam.inverse().unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn beta_is_grade_scaling() {
        for p in [5, 3] {
            for lie in lie_instances(p) {
                let basis = LieBasis::new(lie);
                let f = basis.lie().hcns().alpha().field();
                for (mu, lam) in [(2, 1), (1, 2), (4, 3), (0, 2)] {
                    let (mu, lam) = (f.int(mu), f.int(lam));
                    let c = f.one().sub(&mu.mul(&lam));
                    match beta(&basis, &mu, &lam) {
                        Ok(b) => assert_eq!(Some(b), grade_scaling(&basis, &c)),
                        Err(e) => assert!(c.is_zero() && e == OneInvError::Singular),
                    }
                }
                let (a, b) = (f.int(2), f.int(p as i64 - 1));
                let lhs = psi(&basis, &a).unwrap().mul(&psi(&basis, &b).unwrap());
                assert_eq!(lhs, psi(&basis, &a.mul(&b)).unwrap());
            }
        }
    }
}
