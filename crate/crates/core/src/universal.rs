//! The universal one-generator structure `U` on the basis `v`, `v#`,
//! `v x v#` over `Z[x, y, alpha, N1, N2, 1/(1 - 4 alpha)]`, its
//! specializations, and the one-invertibility identities for the element
//! parametrized by `z1, z2, z3`.

use std::sync::Arc;
use std::time::Instant;

use crate::hcns::{GElem, Hcns, HcnsError, JElem};
use crate::lie::{AElem, Lie, LieElem, Sign};
use crate::oneinv::{gr_data, GrData};
use crate::scalars::{KElem, KField, Loc, LocRing, PolyRing, Ring};

pub const SCALAR_VARS: [&str; 5] = ["x", "y", "alpha", "N1", "N2"];

/// `Z[x, y, alpha, N1, N2]` localized at `1 - 4 alpha`.
pub fn universal_ring() -> Arc<LocRing> {
    let poly = PolyRing::new(&SCALAR_VARS);
    let disc = poly.parse("1 - 4*alpha").expect("constant expression");
    LocRing::new(poly, vec![("1-4alpha".into(), disc)])
}

/// `U` over the given ring, which must contain the variables of
/// [`SCALAR_VARS`].
pub fn build_universal_over(ring: &Arc<LocRing>) -> Hcns<Loc> {
    build_with(ring, None)
}

/// `U` with `1` added to entry `(i, j)` of the second sharp matrix; used to
/// check that the axiom verifier notices a corrupted model.
pub fn build_universal_perturbed(i: usize, j: usize) -> Hcns<Loc> {
    build_with(&universal_ring(), Some((i, j)))
}

fn build_with(ring: &Arc<LocRing>, m2_delta: Option<(usize, usize)>) -> Hcns<Loc> {
    let k = KField::new(ring.var("alpha"));
    let (x, y) = (k.scalar(ring.var("x")), k.scalar(ring.var("y")));
    let (n1, n2) = (ring.var("N1"), ring.var("N2"));
    // N = N1 t + N2 (1 - t)
    let n = k.elem(n2.clone(), n1.sub(&n2));
    let nb = n.conj();
    let z = k.zero();
    let c = |i: i64| k.int(i);
    // Quadratic forms of the three coordinates of the sharp map.
    let m1 =
        [[z.clone(), z.clone(), z.clone()], [z.clone(), n.clone(), z.clone()], [nb.clone(), y.clone(), nb.mul(&x)]];
    let m2 = [[c(1), z.clone(), z.clone()], [z.clone(), z.clone(), z.clone()], [x.clone(), n.clone(), y.clone()]];
    let m3 = [[z.clone(), z.clone(), z.clone()], [c(1), z.clone(), z.clone()], [z.clone(), z.clone(), nb.neg()]];
    let mut m2 = m2;
    if let Some((i, j)) = m2_delta {
        m2[i][j] = m2[i][j].add(&c(1));
    }
    let ms = [m1, m2, m3];
    let sharp = |i: usize, j: usize| {
        JElem(ms.iter().map(|m| if i == j { m[i][i].clone() } else { m[i][j].add(&m[j][i]) }).collect())
    };
    let gram = vec![
        vec![x.clone(), n.scale_int(3), y.scale_int(2)],
        vec![nb.scale_int(3), y.clone(), nb.mul(&x).scale_int(2)],
        vec![y.scale_int(2), n.mul(&x).scale_int(2), x.mul(&y).add(&n.mul(&nb).scale_int(3))],
    ];
    // Coefficients of the expanded norm in the coordinates (a, b, c).
    let nn = n.mul(&nb);
    let ncoef = |i: usize, j: usize, l: usize| -> KElem<Loc> {
        match (i, j, l) {
            (0, 0, 0) => n.clone(),
            (0, 0, 1) => y.clone(),
            (0, 0, 2) => n.mul(&x).scale_int(2),
            (0, 1, 1) => x.mul(&nb),
            (0, 1, 2) => nn.scale_int(3).add(&x.mul(&y)),
            (0, 2, 2) => n.mul(&x).mul(&x).add(&n.mul(&y)),
            (1, 1, 1) => nb.mul(&nb),
            (1, 1, 2) => y.mul(&nb).scale_int(2),
            (1, 2, 2) => x.mul(&nn).add(&y.mul(&y)),
            (2, 2, 2) => n.mul(&x).mul(&y).sub(&n.mul(&nn)),
            _ => unreachable!(),
        }
    };
    Hcns::new(k.clone(), 3, gram, sharp, ncoef).expect("the gram matrix is hermitian")
}

pub fn build_universal() -> Hcns<Loc> {
    build_universal_over(&universal_ring())
}

/// `N(v)` in `U`, i.e. `N1 t + N2 tbar`.
pub fn norm_of_generator(h: &Hcns<Loc>) -> KElem<Loc> {
    h.eval_n(&h.basis_j(0))
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct BasisIdentity {
    pub name: String,
    pub pass: bool,
}

/// The defining identities of `U` on its basis.
pub fn basis_identities(h: &Hcns<Loc>) -> Vec<BasisIdentity> {
    let ring = h.alpha().ring().clone();
    let k = h.kfield();
    let x = k.scalar(ring.var("x"));
    let y = k.scalar(ring.var("y"));
    let (v, vs, w) = (h.basis_j(0), h.basis_j(1), h.basis_j(2));
    let n = norm_of_generator(h);
    let nb = n.conj();
    let vxvs = h.cross(&v, &vs);
    let checks = [
        ("v# = f(v)", h.eval_sharp(&v) == vs),
        ("(v#)# = N(v) v", h.eval_sharp(&vs) == v.kscale(&n)),
        ("v x v# is the third basis vector", vxvs == w),
        (
            "(v x v#)# = -Nbar v x v# + Nbar x v + y v#",
            h.eval_sharp(&w) == w.kscale(&nb.neg()).add(&v.kscale(&nb.mul(&x))).add(&vs.kscale(&y)),
        ),
        ("T(v, v) = x", h.eval_t(&v, &v) == x),
        ("T(v#, v#) = y", h.eval_t(&vs, &vs) == y),
        ("N(v#) = Nbar^2", h.eval_n(&vs) == nb.mul(&nb)),
        ("N(v x v#) = N (x y - N Nbar)", h.eval_n(&w) == n.mul(&x.mul(&y).sub(&n.mul(&nb)))),
    ];
    checks.into_iter().map(|(name, pass)| BasisIdentity { name: name.into(), pass }).collect()
}

/// A homomorphism `U -> J` sending `v` to `w`.
pub struct HcnsHom<R: Ring> {
    target: Hcns<R>,
    /// Values of `x, y, alpha, N1, N2`.
    scalars: Vec<R>,
    images: [JElem<R>; 3],
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecializeError {
    #[error("N(w#) != conj(N(w))^2")]
    Obstruction,
    #[error("1 - 4 alpha is not invertible in the target")]
    DiscNotInvertible,
    #[error(transparent)]
    Hcns(#[from] HcnsError),
}

/// The homomorphism `v -> w`, `v# -> w#`, `v x v# -> w x w#` with
/// `x -> T(w, w)`, `y -> T(w#, w#)` and `N1 t + N2 tbar -> N(w)`.
pub fn specialize<R: Ring>(target: &Hcns<R>, w: &JElem<R>) -> Result<HcnsHom<R>, SpecializeError> {
    if w.rank() != target.rank() {
        return Err(HcnsError::RankMismatch { expected: target.rank(), got: w.rank() }.into());
    }
    let ws = target.eval_sharp(w);
    let nw = target.eval_n(w);
    if target.eval_n(&ws) != nw.conj().mul(&nw.conj()) {
        return Err(SpecializeError::Obstruction);
    }
    target.kfield().disc().inverse().ok_or(SpecializeError::DiscNotInvertible)?;
    let x = target.t_norm(w);
    let y = target.t_norm(&ws);
    // N(w) = n0 + n1 t = N2 + (N1 - N2) t
    let n2 = nw.x0.clone();
    let n1 = nw.x0.add(&nw.x1);
    let scalars = vec![x, y, target.alpha().clone(), n1, n2];
    let images = [w.clone(), ws.clone(), target.cross(w, &ws)];
    Ok(HcnsHom { target: target.clone(), scalars, images })
}

impl<R: Ring> HcnsHom<R> {
    pub fn target(&self) -> &Hcns<R> {
        &self.target
    }

    pub fn scalar_values(&self) -> &[R] {
        &self.scalars
    }

    pub fn map_scalar(&self, r: &Loc) -> R {
        let z = self.target.alpha().zero_like();
        r.eval(&self.scalars, &z).expect("denominator maps to a unit")
    }

    pub fn map_k(&self, k: &KElem<Loc>) -> KElem<R> {
        k.map(self.target.kfield(), |r| self.map_scalar(r))
    }

    pub fn map_j(&self, j: &JElem<Loc>) -> JElem<R> {
        let mut acc = self.target.zero_j();
        for (c, img) in j.0.iter().zip(&self.images) {
            acc = acc.add(&img.kscale(&self.map_k(c)));
        }
        acc
    }

    /// `T`, `#`, `x` and `N` are preserved on basis elements and pairs, and
    /// `N` on the sum of the basis.
    pub fn preserves_structure(&self, u: &Hcns<Loc>) -> bool {
        let t = &self.target;
        let e: Vec<JElem<Loc>> = (0..3).map(|i| u.basis_j(i)).collect();
        let mut ok = true;
        for i in 0..3 {
            let ei = self.map_j(&e[i]);
            ok &= t.eval_sharp(&ei) == self.map_j(&u.eval_sharp(&e[i]));
            ok &= t.eval_n(&ei) == self.map_k(&u.eval_n(&e[i]));
            for j in 0..3 {
                let ej = self.map_j(&e[j]);
                ok &= t.eval_t(&ei, &ej) == self.map_k(&u.eval_t(&e[i], &e[j]));
                ok &= t.cross(&ei, &ej) == self.map_j(&u.cross(&e[i], &e[j]));
                let (a, b) = u.linearize_n(&e[i], &e[j]);
                let (ta, tb) = t.linearize_n(&ei, &ej);
                ok &= ta == self.map_k(&a) && tb == self.map_k(&b);
            }
        }
        let s = e[0].add(&e[1]).add(&e[2]);
        ok && t.eval_n(&self.map_j(&s)) == self.map_k(&u.eval_n(&s))
    }
}

/// The element `g = ((a, v), (u, a v + v#))` of `U` with
/// `a = z1 t + z2 tbar` and `u = (n(a) + T(v, v) + z3) t - z3 tbar`, over
/// the scalars extended by `z1, z2, z3` and localized at `2`, `3` and `nu`.
pub struct OneGenerated {
    pub h: Hcns<Loc>,
    pub g: GElem<Loc>,
    pub nu: Loc,
    pub data: GrData<Loc>,
    /// Whether the literal `u = (z1 z2 + T(v, v) + z3) t - z3 tbar` lies in `G`.
    pub literal_u_in_group: bool,
}

fn parametrized(h: &Hcns<Loc>) -> (KElem<Loc>, KElem<Loc>, KElem<Loc>) {
    let ring = h.alpha().ring().clone();
    let k = h.kfield();
    let (z1, z2, z3) = (ring.var("z1"), ring.var("z2"), ring.var("z3"));
    let t = k.t();
    let tb = t.conj();
    let a = t.scale(&z1).add(&tb.scale(&z2));
    let x = h.t_norm(&h.basis_j(0));
    let u = t.scale(&a.norm().add(&x).add(&z3)).sub(&tb.scale(&z3));
    let literal = t.scale(&z1.mul(&z2).add(&x).add(&z3)).sub(&tb.scale(&z3));
    (a, u, literal)
}

pub fn one_generated() -> OneGenerated {
    let base = universal_ring().extend_vars(&["z1", "z2", "z3"]);
    let base = base.with_gen("2", base.poly().constant(2.into()));
    let base = base.with_gen("3", base.poly().constant(3.into()));
    let h0 = build_universal_over(&base);
    let (a, u, _) = parametrized(&h0);
    let nu0 = h0.nu_parts(&a, &h0.basis_j(0), &u);
    let nu_poly = nu0.to_poly().expect("nu is a polynomial");
    let ring = base.with_gen("nu", nu_poly);
    let h = build_universal_over(&ring);
    let (a, u, literal) = parametrized(&h);
    let v = h.basis_j(0);
    let literal_u_in_group = h.is_member(&a, &v, &literal);
    let g = h.g_make(a, v, u).expect("parametrized element lies in G");
    let data = gr_data(&h, &g);
    let nu = data.nu.clone();
    OneGenerated { h, g, nu, data, literal_u_in_group }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct EquationResult {
    pub name: String,
    pub statement: String,
    /// Normalization under which the identity is checked.
    pub scaling: String,
    pub pass: bool,
    /// Largest numerator among the compared quantities.
    pub terms: usize,
    pub millis: u128,
}

fn max_terms<'a>(xs: impl IntoIterator<Item = &'a Loc>) -> usize {
    xs.into_iter().map(|x| x.numerator().len()).max().unwrap_or(0)
}

fn a_entries(lie: &Lie<Loc>, x: &AElem<Loc>) -> Vec<Loc> {
    lie.a_coords(x)
}

impl OneGenerated {
    pub fn lie(&self) -> Lie<Loc> {
        Lie::new(self.h.clone())
    }

    fn av(&self, lie: &Lie<Loc>) -> AElem<Loc> {
        lie.a_pair(self.g.a.clone(), self.g.v.clone())
    }

    /// `(alpha_1, alpha_2)`, i.e. `nu` times the first component of `g_r`.
    fn alpha(&self, lie: &Lie<Loc>) -> AElem<Loc> {
        lie.a_pair(self.data.alpha1.clone(), self.data.alpha2.clone())
    }

    fn nu_inv(&self) -> Loc {
        self.nu.inverse().expect("nu is a declared denominator")
    }

    /// `u - ubar`.
    fn skew(&self) -> KElem<Loc> {
        self.g.u.sub(&self.g.u.conj())
    }

    /// `g_r = (alpha / nu, gamma / nu^2)`.
    pub fn g_r(&self) -> GElem<Loc> {
        let ni = self.nu_inv();
        let d = &self.data;
        self.h.g_make(d.alpha1.scale(&ni), d.alpha2.rscale(&ni), d.gamma.scale(&ni.mul(&ni))).expect("g_r lies in G")
    }

    pub fn equation(&self, i: usize) -> EquationResult {
        let start = Instant::now();
        let (statement, scaling, pass, terms) = self.equation_inner(i);
        EquationResult {
            name: format!("eq{i}"),
            statement: statement.into(),
            scaling: scaling.into(),
            pass,
            terms,
            millis: start.elapsed().as_millis(),
        }
    }

    pub fn equations(&self) -> Vec<EquationResult> {
        use rayon::prelude::*;
        (1..=7).into_par_iter().map(|i| self.equation(i)).collect()
    }

    fn equation_inner(&self, i: usize) -> (&'static str, &'static str, bool, usize) {
        let h = &self.h;
        let lie = self.lie();
        let d = &self.data;
        let (a, v, u) = (&self.g.a, &self.g.v, &self.g.u);
        let s = self.skew();
        let nu = &self.nu;
        match i {
            1 => {
                let lhs = d.gamma.trace();
                let rhs = d.alpha1.norm().add(&h.t_norm(&d.alpha2));
                ("gamma + gammabar = alpha1 alpha1bar + T(alpha2, alpha2)", "1", lhs == rhs, max_terms([&lhs, &rhs]))
            }
            2 => {
                let lhs = d.gamma.sub(&d.gamma.conj());
                let rhs = s.scale(nu);
                ("gamma - gammabar = nu (u - ubar)", "1", lhs == rhs, max_terms([&lhs.x1, &rhs.x1]))
            }
            3 => {
                // P_g(0, s) for s = t - tbar; both sides are linear in s.
                let one = nu.one_like();
                let lhs = lie.exp_apply(Sign::Plus, &self.g, &lie.bottom(one)).expect("exp over Z[1/6]").a1;
                let nv = h.eval_n(v);
                let vs = h.eval_sharp(v);
                let x = h.kfield().scalar(h.t_norm(v));
                let rhs = lie
                    .a_pair(
                        u.conj().mul(a).sub(&a.mul(a).mul(&a.conj())).sub(&nv.conj()),
                        v.kscale(&u.conj().sub(&x)).sub(&vs.kscale(&a.conj())).add(&h.cross(v, &vs)),
                    )
                    .kscale(&h.kfield().skew_unit());
                let (l, r) = (a_entries(&lie, &lhs), a_entries(&lie, &rhs));
                (
                    "P_g(0, s) = s (ubar a - a^2 abar - N(v)bar, (ubar - T(v,v)) v - abar v# + v x v#), s = t - tbar",
                    "1; P_g(0, s) is the grade-3 part of exp_+(g) applied to s in L_-2",
                    l == r,
                    max_terms(l.iter().chain(&r)),
                )
            }
            4 => {
                let gr = self.g_r();
                let y = lie.minus_one(lie.a_pair(gr.a.clone(), gr.v.clone()));
                let q = lie.exp_apply(Sign::Plus, &self.g, &y).expect("exp over Z[1/6]").a1;
                let p = lie.exp_apply(Sign::Plus, &self.g, &lie.bottom(gr.u.x1.clone())).expect("exp over Z[1/6]").a1;
                let total = q.add(&p).sub(&self.av(&lie));
                let e = a_entries(&lie, &total);
                (
                    "-(a, v) + Q_g g_r + P_g(0, gamma_r - gammabar_r) = 0",
                    "1 with g_r normalized; equals nu^-2 times the cleared form -nu^2 (a,v) + nu Q_g alpha + P_g(0, gamma - gammabar)",
                    e.iter().all(|x| x.is_zero()),
                    max_terms(&a_entries(&lie, &q)),
                )
            }
            5 | 6 => {
                let gv = self.av(&lie);
                let gr = self.alpha(&lie).rscale(&self.nu_inv());
                let sg = gv.kscale(&s);
                let c = nu.scale_int(4).add(&s.mul(&s).x0);
                let mut ok = true;
                let mut terms = 0;
                for j in 0..lie.dim_a() {
                    let e = lie.a_basis(j);
                    let (v1, v2) = if i == 5 {
                        (lie.v_op(&gv, &gr, &e), lie.v_op(&gv, &sg, &e))
                    } else {
                        (lie.v_op(&gr, &gv, &e), lie.v_op(&sg, &gv, &e))
                    };
                    let total = v1.rscale(&nu.scale_int(2)).add(&v2).add(&e.rscale(&c));
                    let te = a_entries(&lie, &total);
                    terms = terms.max(max_terms(&a_entries(&lie, &v2)));
                    ok &= te.iter().all(|x| x.is_zero());
                }
                if i == 5 {
                    (
                        "2 nu V_{g,g_r} + V_{g,(u-ubar) g} + 4 nu + L_{u-ubar}^2 = 0 on A",
                        "1 with g_r normalized; 2 nu V_{g,g_r} = 2 V_{g,alpha}",
                        ok,
                        terms,
                    )
                } else {
                    (
                        "2 nu V_{g_r,g} + V_{(u-ubar) g,g} + 4 nu + L_{u-ubar}^2 = 0 on A",
                        "1 with g_r normalized; 2 nu V_{g_r,g} = 2 V_{alpha,g}",
                        ok,
                        terms,
                    )
                }
            }
            7 => {
                let gv = self.av(&lie);
                let sg = gv.kscale(&s);
                let total = self
                    .alpha(&lie)
                    .kscale(&s.scale_int(6))
                    .add(&gv.kscale(&s.mul(&s).scale_int(3)))
                    .sub(&lie.v_op(&gv, &sg, &gv));
                let e = a_entries(&lie, &total);
                (
                    "6 (u-ubar)(alpha1, alpha2) + 3 (u-ubar)^2 (a, v) - V_{g,(u-ubar) g} (a, v) = 0",
                    "1 with (alpha1, alpha2) = nu times the first component of g_r",
                    e.iter().all(|x| x.is_zero()),
                    max_terms(&a_entries(&lie, &gv.kscale(&s.mul(&s)))),
                )
            }
            _ => panic!("equations are numbered 1 to 7"),
        }
    }

    /// Which stated form of `w` agrees with the one forced by `g_r` in `G`.
    pub fn w_variants(&self) -> WVariants {
        let h = &self.h;
        let d = &self.data;
        let nu2 = self.nu.mul(&self.nu);
        let forced = h.g_second(&self.g_r()).rscale(&nu2);
        let ni = self.nu_inv();
        let (a1, a2) = (d.alpha1.scale(&ni), d.alpha2.rscale(&ni));
        let sum_normalized = a2.kscale(&a1).add(&h.eval_sharp(&a2)).rscale(&nu2);
        let sum_unnormalized = d.alpha2.kscale(&d.alpha1).add(&h.eval_sharp(&d.alpha2)).rscale(&nu2);
        let product_plus_sharp = d.alpha2.kscale(&d.alpha1).rscale(&nu2).add(&h.eval_sharp(&d.alpha2));
        WVariants {
            nu2_times_sum_normalized: sum_normalized == forced,
            nu2_times_sum_unnormalized: sum_unnormalized == forced,
            nu2_product_plus_sharp: product_plus_sharp == forced,
            forced_equals_alpha1_alpha2_plus_sharp: d.alpha2.kscale(&d.alpha1).add(&h.eval_sharp(&d.alpha2)) == forced,
        }
    }

    /// `nu` read off from the `(t - tbar)_2` coefficient of
    /// `exp_+(g) (t - tbar)_-2`, against the closed form.
    pub fn nu_two_ways(&self) -> bool {
        self.lie().nu_via_action(&self.g).expect("exp over Z[1/6]") == self.nu
    }

    /// `3 e_3 = 3 e_2 e_1 - e_1^3` on the given inputs, where `e_i` is the
    /// part of `exp_+(g)` raising the degree by `i`.
    pub fn e3_identity(&self, inputs: &[LieElem<Loc>]) -> bool {
        let lie = self.lie();
        let x = lie.generator(Sign::Plus, &self.g).expect("u - ubar is even over Z[1/2]");
        let mut x1 = x.clone();
        x1.l2 = x.l2.zero_like();
        let s2 = x.grade_part(2);
        let e1 = |y: &LieElem<Loc>| lie.bracket(&x1, y);
        let e2 = |y: &LieElem<Loc>| lie.bracket(&s2, y).add(&e1(&e1(y)).div_int(2).unwrap());
        inputs.iter().all(|y| {
            let a1 = e1(y);
            let a1s = e1(&e1(&a1));
            let e3 = lie
                .bracket(&x1, &lie.bracket(&s2, y))
                .add(&lie.bracket(&s2, &a1))
                .div_int(2)
                .unwrap()
                .add(&a1s.div_int(6).unwrap());
            e3.rscale(&y.l2.int_like(3)) == e2(&a1).rscale(&y.l2.int_like(3)).sub(&a1s)
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct WVariants {
    /// `w = nu^2 (alpha1 alpha2 + alpha2#)` with the normalized components of `g_r`.
    pub nu2_times_sum_normalized: bool,
    /// The same formula with the unnormalized `alpha1, alpha2`.
    pub nu2_times_sum_unnormalized: bool,
    /// `w = nu^2 alpha1 alpha2 + alpha2#`.
    pub nu2_product_plus_sharp: bool,
    pub forced_equals_alpha1_alpha2_plus_sharp: bool,
}

/// `nu(r (t - tbar), 0, 0)` from the closed form, as a multiple of
/// `r^2 (1 - 4 alpha)`.
pub fn nu_of_central_skew_sign() -> i64 {
    let h = build_universal();
    let k = h.kfield();
    let g = h.g_make(k.zero(), h.zero_j(), k.skew_unit()).expect("trace zero");
    let nu = h.nu(&g);
    if nu == k.disc() {
        1
    } else if nu == k.disc().neg() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::cubic_field_hcns;
    use crate::scalars::FqField;

    #[test]
    fn basis_identities_hold() {
        let h = build_universal();
        for b in basis_identities(&h) {
            assert!(b.pass, "{}", b.name);
        }
        let (v, vs) = (h.basis_j(0), h.basis_j(1));
        assert_eq!(h.eval_t(&v, &vs).scale_int(3), h.eval_t(&v, &h.eval_sharp(&v)).scale_int(3));
        assert_eq!(h.eval_t(&v, &vs), norm_of_generator(&h).scale_int(3));
    }

    #[test]
    fn axioms_at_generic_point() {
        let h = build_universal();
        let t = Instant::now();
        let r = h.check_axioms().unwrap();
        println!("{:?} in {:?}", r, t.elapsed());
        assert!(r.all_pass());
    }

    #[test]
    fn perturbed_model_fails_axiom2() {
        let h = build_universal_perturbed(1, 1);
        let gp = h.generic_point().unwrap();
        let r = crate::hcns::axiom2(&gp);
        assert!(!r.pass && r.witness.is_some());
    }

    #[test]
    fn specializations() {
        let u = build_universal();
        let id = specialize(&u, &u.basis_j(0)).unwrap();
        let ring = u.alpha().ring().clone();
        let vars: Vec<Loc> = SCALAR_VARS.iter().map(|v| ring.var(v)).collect();
        assert_eq!(id.scalar_values(), &vars[..]);
        assert!(id.preserves_structure(&u));

        let f = FqField::prime(7).unwrap();
        let k = KField::new(f.int(FqField::irreducible_alpha(7).unwrap() as i64));
        let c = cubic_field_hcns(&k);
        let hom = specialize(&c, &c.basis_j(0)).unwrap();
        assert_eq!(hom.scalar_values()[0], f.int(3));
        assert_eq!(hom.scalar_values()[1], f.int(3));
        assert_eq!(hom.scalar_values()[3], f.int(1));
        assert_eq!(hom.scalar_values()[4], f.int(1));
        assert!(hom.preserves_structure(&u));
    }

    #[test]
    fn one_invertibility_equations() {
        let m = one_generated();
        assert!(!m.literal_u_in_group);
        let t = Instant::now();
        for e in m.equations() {
            println!("{} pass={} terms={} {}ms", e.name, e.pass, e.terms, e.millis);
            assert!(e.pass, "{}", e.name);
        }
        println!("equations in {:?}", t.elapsed());
        let w = m.w_variants();
        assert!(w.nu2_times_sum_normalized && w.forced_equals_alpha1_alpha2_plus_sharp);
        assert!(!w.nu2_product_plus_sharp && !w.nu2_times_sum_unnormalized);
        assert!(m.g_r().u.trace() == m.g_r().a.norm().add(&m.h.t_norm(&m.g_r().v)));
    }

    #[test]
    fn nu_two_ways_symbolic() {
        let m = one_generated();
        let t = Instant::now();
        assert!(m.nu_two_ways());
        println!("nu two ways in {:?}", t.elapsed());
        assert_eq!(nu_of_central_skew_sign(), -1);
    }

    #[test]
    fn third_term_device() {
        let m = one_generated();
        let lie = m.lie();
        let one = m.nu.one_like();
        let mut inputs = vec![lie.top(one.clone()), lie.bottom(one)];
        for j in 0..lie.dim_a() {
            inputs.push(lie.plus_one(lie.a_basis(j)));
            inputs.push(lie.minus_one(lie.a_basis(j)));
            inputs.push(lie.bracket(&lie.plus_one(lie.a_basis(j)), &lie.minus_one(lie.a_basis(j))));
        }
        assert!(m.e3_identity(&inputs));
    }

    #[test]
    fn degenerate_slice() {
        let m = one_generated();
        let h = &m.h;
        let k = h.kfield();
        let z3 = h.alpha().ring().var("z3");
        let u = k.skew_unit().scale(&z3);
        let g = h.g_make(k.zero(), h.zero_j(), u.clone()).unwrap();
        let d = gr_data(h, &g);
        assert!(d.alpha1.is_zero() && d.alpha2.is_zero());
        assert_eq!(d.gamma, u.scale(&d.nu));
        assert_eq!(d.nu, u.norm());
    }
}
