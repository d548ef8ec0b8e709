//! Hermitian cubic norm structures given by coefficient data on a K-basis,
//! generic-point axiom checks, the group `G` and the quartic norm.

use std::fmt;
use std::sync::Arc;

use crate::scalars::{Fq, KElem, KField, Loc, Ring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HcnsError {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("gram matrix is not hermitian at ({0}, {1})")]
    NotHermitian(usize, usize),
    #[error("element is not in G: u + ubar != a abar + T(v,v)")]
    NotInGroup,
    #[error("base ring has no generic polynomial model")]
    NoGenericModel,
    #[error("2 is not invertible in the base ring")]
    CharacteristicTwo,
}

/// Element of `J`, as coordinates over the K-basis.
#[derive(Clone, PartialEq)]
pub struct JElem<R: Ring>(pub Vec<KElem<R>>);

impl<R: Ring> JElem<R> {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, o: &Self) -> Self {
        JElem(self.0.iter().zip(&o.0).map(|(a, b)| a.add(b)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        JElem(self.0.iter().zip(&o.0).map(|(a, b)| a.sub(b)).collect())
    }

    pub fn neg(&self) -> Self {
        JElem(self.0.iter().map(|a| a.neg()).collect())
    }

    /// `k j` for `k` in K.
    pub fn kscale(&self, k: &KElem<R>) -> Self {
        JElem(self.0.iter().map(|a| k.mul(a)).collect())
    }

    /// `r j` for `r` in R.
    pub fn rscale(&self, r: &R) -> Self {
        JElem(self.0.iter().map(|a| a.scale(r)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }

    pub fn div_int(&self, k: u32) -> Option<Self> {
        self.0.iter().map(|a| a.div_int(k)).collect::<Option<Vec<_>>>().map(JElem)
    }
}

impl<R: Ring> fmt::Debug for JElem<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "J[{}]", parts.join("; "))
    }
}

/// `((a, v), (u, a v + v^sharp))`; the J-part of the second coordinate is
/// derived and never stored.
#[derive(Clone, PartialEq)]
pub struct GElem<R: Ring> {
    pub a: KElem<R>,
    pub v: JElem<R>,
    pub u: KElem<R>,
}

impl<R: Ring> fmt::Debug for GElem<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(a = {}, v = {:?}, u = {})", self.a, self.v, self.u)
    }
}

#[derive(Clone)]
pub struct Hcns<R: Ring> {
    k: Arc<KField<R>>,
    n: usize,
    gram: Vec<KElem<R>>,
    sharp: Vec<JElem<R>>,
    ncoef: Vec<KElem<R>>,
}

fn sorted3(i: usize, j: usize, k: usize) -> (usize, usize, usize) {
    let mut v = [i, j, k];
    v.sort_unstable();
    (v[0], v[1], v[2])
}

impl<R: Ring> Hcns<R> {
    /// `gram[i][j] = T(e_i, e_j)`; `sharp(i, j)` for `i <= j` is `e_i^sharp`
    /// when `i == j` and `e_i x e_j` otherwise; `ncoef(i, j, k)` for
    /// `i <= j <= k` is the coefficient of `c_i c_j c_k` in `N`.
    pub fn new(
        k: Arc<KField<R>>,
        n: usize,
        gram: Vec<Vec<KElem<R>>>,
        sharp: impl Fn(usize, usize) -> JElem<R>,
        ncoef: impl Fn(usize, usize, usize) -> KElem<R>,
    ) -> Result<Self, HcnsError> {
        if gram.len() != n {
            return Err(HcnsError::RankMismatch { expected: n, got: gram.len() });
        }
        for (i, row) in gram.iter().enumerate() {
            if row.len() != n {
                return Err(HcnsError::RankMismatch { expected: n, got: row.len() });
            }
            for j in 0..n {
                if row[j] != gram[j][i].conj() {
                    return Err(HcnsError::NotHermitian(i, j));
                }
            }
        }
        let zero = k.zero();
        let mut s = vec![JElem(vec![zero.clone(); n]); n * n];
        for i in 0..n {
            for j in i..n {
                let x = sharp(i, j);
                if x.rank() != n {
                    return Err(HcnsError::RankMismatch { expected: n, got: x.rank() });
                }
                s[i * n + j] = x.clone();
                s[j * n + i] = x;
            }
        }
        let mut nc = vec![zero; n * n * n];
        for i in 0..n {
            for j in i..n {
                for l in j..n {
                    nc[(i * n + j) * n + l] = ncoef(i, j, l);
                }
            }
        }
        Ok(Hcns { k, n, gram: gram.into_iter().flatten().collect(), sharp: s, ncoef: nc })
    }

    pub fn kfield(&self) -> &Arc<KField<R>> {
        &self.k
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn gram(&self, i: usize, j: usize) -> &KElem<R> {
        &self.gram[i * self.n + j]
    }

    pub fn sharp_data(&self, i: usize, j: usize) -> &JElem<R> {
        &self.sharp[i * self.n + j]
    }

    pub fn n_coef(&self, i: usize, j: usize, k: usize) -> &KElem<R> {
        let (a, b, c) = sorted3(i, j, k);
        &self.ncoef[(a * self.n + b) * self.n + c]
    }

    pub fn alpha(&self) -> &R {
        self.k.alpha()
    }

    pub fn zero_j(&self) -> JElem<R> {
        JElem(vec![self.k.zero(); self.n])
    }

    pub fn basis_j(&self, i: usize) -> JElem<R> {
        let mut j = self.zero_j();
        j.0[i] = self.k.one();
        j
    }

    pub fn j_from_r(&self, coords: &[(R, R)]) -> JElem<R> {
        JElem(coords.iter().map(|(a, b)| self.k.elem(a.clone(), b.clone())).collect())
    }

    fn check(&self, j: &JElem<R>) -> Result<(), HcnsError> {
        if j.rank() != self.n {
            return Err(HcnsError::RankMismatch { expected: self.n, got: j.rank() });
        }
        Ok(())
    }

    /// `j^sharp`, anti-quadratic: `(sum c_i e_i)^sharp = sum_{i<=j} cbar_i cbar_j S_ij`.
    pub fn eval_sharp(&self, j: &JElem<R>) -> JElem<R> {
        self.check(j).unwrap();
        let c: Vec<KElem<R>> = j.0.iter().map(|x| x.conj()).collect();
        let mut acc = self.zero_j();
        for i in 0..self.n {
            if c[i].is_zero() {
                continue;
            }
            for l in i..self.n {
                if c[l].is_zero() {
                    continue;
                }
                acc = acc.add(&self.sharp_data(i, l).kscale(&c[i].mul(&c[l])));
            }
        }
        acc
    }

    /// The linearization `a x b`, antilinear in both slots.
    pub fn cross(&self, a: &JElem<R>, b: &JElem<R>) -> JElem<R> {
        self.check(a).unwrap();
        self.check(b).unwrap();
        let ca: Vec<KElem<R>> = a.0.iter().map(|x| x.conj()).collect();
        let cb: Vec<KElem<R>> = b.0.iter().map(|x| x.conj()).collect();
        let mut acc = self.zero_j();
        for i in 0..self.n {
            for l in i..self.n {
                let coef =
                    if i == l { ca[i].mul(&cb[i]).scale_int(2) } else { ca[i].mul(&cb[l]).add(&ca[l].mul(&cb[i])) };
                if !coef.is_zero() {
                    acc = acc.add(&self.sharp_data(i, l).kscale(&coef));
                }
            }
        }
        acc
    }

    /// `T(a, b) = sum a_i G_ij bbar_j`.
    pub fn eval_t(&self, a: &JElem<R>, b: &JElem<R>) -> KElem<R> {
        self.check(a).unwrap();
        self.check(b).unwrap();
        let mut acc = self.k.zero();
        for i in 0..self.n {
            if a.0[i].is_zero() {
                continue;
            }
            for l in 0..self.n {
                if b.0[l].is_zero() {
                    continue;
                }
                acc = acc.add(&a.0[i].mul(self.gram(i, l)).mul(&b.0[l].conj()));
            }
        }
        acc
    }

    /// `T(v, v)` as an element of R.
    pub fn t_norm(&self, v: &JElem<R>) -> R {
        self.eval_t(v, v).x0
    }

    pub fn eval_n(&self, j: &JElem<R>) -> KElem<R> {
        self.check(j).unwrap();
        let c = &j.0;
        let mut acc = self.k.zero();
        for i in 0..self.n {
            if c[i].is_zero() {
                continue;
            }
            for l in i..self.n {
                if c[l].is_zero() {
                    continue;
                }
                let cil = c[i].mul(&c[l]);
                for m in l..self.n {
                    let nc = &self.ncoef[(i * self.n + l) * self.n + m];
                    if nc.is_zero() || c[m].is_zero() {
                        continue;
                    }
                    acc = acc.add(&nc.mul(&cil).mul(&c[m]));
                }
            }
        }
        acc
    }

    /// `(N^(2,1)(a,b), N^(1,2)(a,b))`, read off from `N(la + mb)` computed
    /// over K[l, m] with homogeneous cubic forms.
    pub fn linearize_n(&self, a: &JElem<R>, b: &JElem<R>) -> (KElem<R>, KElem<R>) {
        self.check(a).unwrap();
        self.check(b).unwrap();
        let forms: Vec<Vec<KElem<R>>> = a.0.iter().zip(&b.0).map(|(x, y)| vec![x.clone(), y.clone()]).collect();
        let z = self.k.zero();
        let mut acc = vec![z.clone(); 4];
        for i in 0..self.n {
            for l in i..self.n {
                let fil = form_mul(&forms[i], &forms[l]);
                for m in l..self.n {
                    let nc = &self.ncoef[(i * self.n + l) * self.n + m];
                    if nc.is_zero() {
                        continue;
                    }
                    let f = form_mul(&fil, &forms[m]);
                    for (s, t) in acc.iter_mut().zip(&f) {
                        *s = s.add(&nc.mul(t));
                    }
                }
            }
        }
        (acc[1].clone(), acc[2].clone())
    }

    /// Equality of all coefficient data.
    pub fn data_eq(&self, o: &Hcns<R>) -> bool {
        self.n == o.n
            && self.alpha() == o.alpha()
            && self.gram == o.gram
            && self.sharp == o.sharp
            && self.ncoef == o.ncoef
    }

    pub fn map<S: Ring>(&self, k: &Arc<KField<S>>, f: impl Fn(&R) -> S) -> Hcns<S> {
        let mk = |x: &KElem<R>| x.map(k, &f);
        Hcns {
            k: k.clone(),
            n: self.n,
            gram: self.gram.iter().map(mk).collect(),
            sharp: self.sharp.iter().map(|j| JElem(j.0.iter().map(mk).collect())).collect(),
            ncoef: self.ncoef.iter().map(mk).collect(),
        }
    }

    // ----- the group G -----

    pub fn is_member(&self, a: &KElem<R>, v: &JElem<R>, u: &KElem<R>) -> bool {
        u.trace() == a.norm().add(&self.t_norm(v))
    }

    pub fn g_make(&self, a: KElem<R>, v: JElem<R>, u: KElem<R>) -> Result<GElem<R>, HcnsError> {
        self.check(&v)?;
        if !self.is_member(&a, &v, &u) {
            return Err(HcnsError::NotInGroup);
        }
        Ok(GElem { a, v, u })
    }

    pub fn g_identity(&self) -> GElem<R> {
        GElem { a: self.k.zero(), v: self.zero_j(), u: self.k.zero() }
    }

    pub fn is_identity(&self, g: &GElem<R>) -> bool {
        g.a.is_zero() && g.v.is_zero() && g.u.is_zero()
    }

    /// Element with the given `(a, v)` and skew part `r (t - tbar)` of `u`.
    pub fn g_from_skew(&self, a: KElem<R>, v: JElem<R>, r: &R) -> Result<GElem<R>, HcnsError> {
        let tr = a.norm().add(&self.t_norm(&v));
        let half = tr.div_int(2).ok_or(HcnsError::CharacteristicTwo)?;
        let u = self.k.scalar(half).add(&self.k.skew_unit().scale(r));
        self.g_make(a, v, u)
    }

    /// Product law `(a + a', v + v', u + u' + a abar' + T(v, v'))`.
    pub fn g_mul(&self, g: &GElem<R>, h: &GElem<R>) -> GElem<R> {
        GElem {
            a: g.a.add(&h.a),
            v: g.v.add(&h.v),
            u: g.u.add(&h.u).add(&g.a.mul(&h.a.conj())).add(&self.eval_t(&g.v, &h.v)),
        }
    }

    pub fn g_inv(&self, g: &GElem<R>) -> GElem<R> {
        GElem { a: g.a.neg(), v: g.v.neg(), u: g.u.conj() }
    }

    /// J-part `a v + v^sharp` of the second coordinate.
    pub fn g_second(&self, g: &GElem<R>) -> JElem<R> {
        g.v.kscale(&g.a).add(&self.eval_sharp(&g.v))
    }

    /// `u ubar - a abar T(v,v) + a N(v) + abar N(v)bar - T(v#, v#)`.
    pub fn nu_parts(&self, a: &KElem<R>, v: &JElem<R>, u: &KElem<R>) -> R {
        let nv = self.eval_n(v);
        let vs = self.eval_sharp(v);
        u.norm().sub(&a.norm().mul(&self.t_norm(v))).add(&a.mul(&nv).trace()).sub(&self.t_norm(&vs))
    }

    pub fn nu(&self, g: &GElem<R>) -> R {
        self.nu_parts(&g.a, &g.v, &g.u)
    }
}

fn form_mul<R: Ring>(a: &[KElem<R>], b: &[KElem<R>]) -> Vec<KElem<R>> {
    let z = a[0].zero_like();
    let mut out = vec![z; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    out
}

// ----- generic-point axiom verification -----

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct AxiomResult {
    pub name: String,
    pub pass: bool,
    /// Leading monomial of the first nonvanishing difference.
    pub witness: Option<String>,
    /// Terms in the larger side, as a size measure.
    pub terms: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct AxiomReport {
    pub axioms: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.pass)
    }
}

fn compare_k(name: &str, lhs: &[KElem<Loc>], rhs: &[KElem<Loc>]) -> AxiomResult {
    let mut terms = 0;
    for (l, r) in lhs.iter().zip(rhs) {
        for (x, y) in [(&l.x0, &r.x0), (&l.x1, &r.x1)] {
            terms = terms.max(x.numerator().len()).max(y.numerator().len());
            let d = x.sub(y);
            if !d.is_zero() {
                return AxiomResult {
                    name: name.into(),
                    pass: false,
                    witness: Some(d.numerator().leading_term_string()),
                    terms,
                };
            }
        }
    }
    AxiomResult { name: name.into(), pass: true, witness: None, terms }
}

/// The structure moved to a localized polynomial ring together with two
/// generic elements `a`, `b` whose 4n base coordinates are fresh variables.
pub struct GenericPoint {
    pub h: Hcns<Loc>,
    pub a: JElem<Loc>,
    pub b: JElem<Loc>,
}

impl<R: Ring> Hcns<R> {
    pub fn generic_point(&self) -> Result<GenericPoint, HcnsError> {
        let base = self.alpha().generic_ring().ok_or(HcnsError::NoGenericModel)?;
        let mut names = Vec::new();
        for s in ["a", "b"] {
            for i in 0..self.n {
                names.push(format!("{s}{i}_0"));
                names.push(format!("{s}{i}_1"));
            }
        }
        let target = base.extend_vars(&names);
        let f = |r: &R| r.embed(&target).expect("scalar does not embed in generic model");
        let k = KField::new(f(self.alpha()));
        let h = self.map(&k, f);
        let gen = |s: &str| {
            JElem(
                (0..self.n)
                    .map(|i| k.elem(target.var(&format!("{s}{i}_0")), target.var(&format!("{s}{i}_1"))))
                    .collect(),
            )
        };
        let (a, b) = (gen("a"), gen("b"));
        Ok(GenericPoint { h, a, b })
    }

    /// Axioms 1-4 at the generic point.
    pub fn check_axioms(&self) -> Result<AxiomReport, HcnsError> {
        let gp = self.generic_point()?;
        let checks: [fn(&GenericPoint) -> AxiomResult; 4] = [axiom1, axiom2, axiom3, axiom4];
        let axioms = {
            use rayon::prelude::*;
            checks.par_iter().map(|c| c(&gp)).collect()
        };
        Ok(AxiomReport { axioms })
    }
}

/// `T(a, b#) = N^(1,2)(a, b)`.
pub fn axiom1(gp: &GenericPoint) -> AxiomResult {
    let (h, a, b) = (&gp.h, &gp.a, &gp.b);
    let lhs = h.eval_t(a, &h.eval_sharp(b));
    let (_, n12) = h.linearize_n(a, b);
    compare_k("axiom1", &[lhs], &[n12])
}

/// `(a#)# = N(a) a`.
pub fn axiom2(gp: &GenericPoint) -> AxiomResult {
    let (h, a) = (&gp.h, &gp.a);
    let lhs = h.eval_sharp(&h.eval_sharp(a));
    let rhs = a.kscale(&h.eval_n(a));
    compare_k("axiom2", &lhs.0, &rhs.0)
}

/// `(a# x b) x a = N(a)bar b + T(b, a) a#`.
pub fn axiom3(gp: &GenericPoint) -> AxiomResult {
    let (h, a, b) = (&gp.h, &gp.a, &gp.b);
    let asharp = h.eval_sharp(a);
    let lhs = h.cross(&h.cross(&asharp, b), a);
    let rhs = b.kscale(&h.eval_n(a).conj()).add(&asharp.kscale(&h.eval_t(b, a)));
    compare_k("axiom3", &lhs.0, &rhs.0)
}

/// `N(T(a, b) a - a# x b) = N(a)^2 N(b)bar`.
pub fn axiom4(gp: &GenericPoint) -> AxiomResult {
    let (h, a, b) = (&gp.h, &gp.a, &gp.b);
    let arg = a.kscale(&h.eval_t(a, b)).sub(&h.cross(&h.eval_sharp(a), b));
    let lhs = h.eval_n(&arg);
    let na = h.eval_n(a);
    let rhs = na.mul(&na).mul(&h.eval_n(b).conj());
    compare_k("axiom4", &[lhs], &[rhs])
}

// ----- finite enumeration -----

impl Hcns<Fq> {
    fn base_elements(&self) -> Vec<Fq> {
        self.alpha().field().elements().collect()
    }

    pub fn k_elements(&self) -> Vec<KElem<Fq>> {
        let f = self.base_elements();
        let mut out = Vec::with_capacity(f.len() * f.len());
        for x1 in &f {
            for x0 in &f {
                out.push(self.k.elem(*x0, *x1));
            }
        }
        out
    }

    pub fn j_elements(&self) -> Vec<JElem<Fq>> {
        let ks = self.k_elements();
        let mut out = vec![JElem(Vec::new())];
        for _ in 0..self.n {
            out = out
                .into_iter()
                .flat_map(|j| {
                    ks.iter().map(move |k| {
                        let mut c = j.0.clone();
                        c.push(k.clone());
                        JElem(c)
                    })
                })
                .collect();
        }
        out
    }

    /// All of `G`, ordered by `(a, v, skew part of u)`.
    pub fn group_elements(&self) -> Result<Vec<GElem<Fq>>, HcnsError> {
        let f = self.base_elements();
        let ks = self.k_elements();
        let js = self.j_elements();
        let mut out = Vec::with_capacity(ks.len() * js.len() * f.len());
        for a in &ks {
            for v in &js {
                for r in &f {
                    out.push(self.g_from_skew(a.clone(), v.clone(), r)?);
                }
            }
        }
        Ok(out)
    }

    pub fn random_g<G: rand::Rng + ?Sized>(&self, rng: &mut G) -> GElem<Fq> {
        let fld = self.alpha().field();
        let rk = |rng: &mut G| self.k.elem(fld.random(rng), fld.random(rng));
        let a = rk(rng);
        let v = JElem((0..self.n).map(|_| rk(rng)).collect());
        self.g_from_skew(a, v, &fld.random(rng)).expect("odd characteristic")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DivisionVerdict {
    Division { checked: usize },
    NotDivision { witness: GElem<Fq> },
}

impl Hcns<Fq> {
    /// Exhaustive search for `g != 1` with `nu(g) = 0`.
    pub fn is_division_bruteforce(&self) -> Result<DivisionVerdict, HcnsError> {
        use rayon::prelude::*;
        let all = self.group_elements()?;
        let witness = all.par_iter().find_first(|g| !self.is_identity(g) && self.nu(g).is_zero()).cloned();
        Ok(match witness {
            Some(witness) => DivisionVerdict::NotDivision { witness },
            None => DivisionVerdict::Division { checked: all.len() },
        })
    }
}

impl<R: Ring> fmt::Debug for Hcns<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hcns(rank {}, alpha = {})", self.n, self.alpha())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FqField;

    fn herm_f9(gram: i64) -> Hcns<Fq> {
        let f = FqField::prime(3).unwrap();
        let k = KField::new(f.int(2));
        let z = k.zero();
        Hcns::new(k.clone(), 1, vec![vec![k.int(gram)]], |_, _| JElem(vec![z.clone()]), |_, _, _| z.clone()).unwrap()
    }

    #[test]
    fn group_sizes_and_division() {
        let f = FqField::prime(3).unwrap();
        let k = KField::new(f.int(2));
        let h0: Hcns<Fq> = Hcns::new(k, 0, vec![], |_, _| unreachable!(), |_, _, _| unreachable!()).unwrap();
        let g = h0.group_elements().unwrap();
        assert_eq!(g.len(), 27);
        assert!(matches!(h0.is_division_bruteforce().unwrap(), DivisionVerdict::Division { checked: 27 }));

        let h1 = herm_f9(1);
        match h1.is_division_bruteforce().unwrap() {
            DivisionVerdict::NotDivision { witness } => {
                assert!(!h1.is_identity(&witness));
                assert!(h1.nu(&witness).is_zero());
            }
            v => panic!("expected a witness, got {v:?}"),
        }
    }

    #[test]
    fn group_law_inverse() {
        let h = herm_f9(1);
        for g in h.group_elements().unwrap().iter().step_by(7) {
            let gi = h.g_inv(g);
            assert!(h.is_member(&gi.a, &gi.v, &gi.u));
            assert!(h.is_identity(&h.g_mul(g, &gi)));
            assert_eq!(h.nu(&gi), h.nu(g));
        }
    }

    #[test]
    fn hermitian_axioms_pass() {
        let rep = herm_f9(1).check_axioms().unwrap();
        assert!(rep.all_pass(), "{rep:?}");
    }

    #[test]
    fn nu_of_k_element() {
        let f = FqField::prime(5).unwrap();
        let k = KField::new(f.int(2));
        let h: Hcns<Fq> = Hcns::new(k.clone(), 0, vec![], |_, _| unreachable!(), |_, _, _| unreachable!()).unwrap();
        let x = k.elem(f.int(3), f.int(4));
        let nk = x.norm();
        let g = h.g_make(x.clone(), h.zero_j(), k.t().scale(&nk)).unwrap();
        assert_eq!(h.nu(&g), nk.mul(&nk).mul(&f.int(2)));
    }
}
