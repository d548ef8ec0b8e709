//! Constructors for concrete families of hermitian cubic norm structures,
//! together with their division tests.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hcns::{DivisionVerdict, Hcns, HcnsError, JElem};
use crate::scalars::{Fq, KElem, KField, Loc, LocRing, PolyRing, Ring};

/// `N = 0`, `sharp = 0` and `T` given by a hermitian gram matrix.
pub fn hermitian_form_hcns<R: Ring>(k: &Arc<KField<R>>, gram: Vec<Vec<KElem<R>>>) -> Result<Hcns<R>, HcnsError> {
    let n = gram.len();
    let z = k.zero();
    Hcns::new(k.clone(), n, gram, |_, _| JElem(vec![z.clone(); n]), |_, _, _| z.clone())
}

/// `J = K` with `N(x) = x^3`, `x^sharp = xbar^2` and `T(x, y) = 3 x ybar`.
pub fn cubic_field_hcns<R: Ring>(k: &Arc<KField<R>>) -> Hcns<R> {
    Hcns::new(k.clone(), 1, vec![vec![k.int(3)]], |_, _| JElem(vec![k.one()]), |_, _, _| k.one())
        .expect("rank one data is consistent")
}

// ----- division status -----

/// Division status, never promoting a bounded search to a proof.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum DivisionFlag {
    /// Every nonidentity element of the finite group has `nu != 0`.
    ProvenDivision {
        checked: usize,
    },
    /// A bounded search found no witness; not a proof.
    ClaimedDivision {
        samples: usize,
        max_height: u64,
    },
    NotDivision {
        witness: String,
    },
}

impl DivisionFlag {
    pub fn is_not_division(&self) -> bool {
        matches!(self, DivisionFlag::NotDivision { .. })
    }
}

pub fn division_flag_finite(h: &Hcns<Fq>) -> Result<DivisionFlag, HcnsError> {
    Ok(match h.is_division_bruteforce()? {
        DivisionVerdict::Division { checked } => DivisionFlag::ProvenDivision { checked },
        DivisionVerdict::NotDivision { witness } => DivisionFlag::NotDivision { witness: format!("{witness:?}") },
    })
}

/// Random search for `g != 1` with `nu(g) = 0` among elements whose integer
/// coordinates have absolute value at most `max_height`.
pub fn bounded_division_search<R: Ring>(h: &Hcns<R>, max_height: u64, samples: usize, seed: u64) -> DivisionFlag {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let one = h.alpha().one_like();
    let k = h.kfield();
    let bound = max_height.min(i64::MAX as u64) as i64;
    let coord = |rng: &mut ChaCha8Rng| one.int_like(rng.gen_range(-bound..=bound));
    for _ in 0..samples {
        let a = k.elem(coord(&mut rng), coord(&mut rng));
        let v = JElem((0..h.rank()).map(|_| k.elem(coord(&mut rng), coord(&mut rng))).collect());
        let r = coord(&mut rng);
        let Ok(g) = h.g_from_skew(a, v, &r) else { continue };
        if !h.is_identity(&g) && h.nu(&g).is_zero() {
            return DivisionFlag::NotDivision { witness: format!("{g:?}") };
        }
    }
    DivisionFlag::ClaimedDivision { samples, max_height }
}

/// `K = Q(i)`-style extension over `Z[1/2]`: `alpha = 1/2`, so `1 - 4 alpha = -1`
/// and `n(x0 + x1 t) = x0^2 + x0 x1 + x1^2 / 2`.
pub fn gaussian_k() -> Arc<KField<Loc>> {
    let zr = LocRing::integers_with_inverses(&[2]);
    KField::new(zr.gen_inverse(0))
}

// ----- the N = 0 criterion -----

/// The form `(a, v) -> n(a) - T(v, v)` on `K + J`.
pub fn degenerate_form<R: Ring>(h: &Hcns<R>, a: &KElem<R>, v: &JElem<R>) -> R {
    a.norm().sub(&h.t_norm(v))
}

/// A nonzero isotropic vector of `n(a) - T(v, v)`, by exhaustion.
pub fn isotropic_vector(h: &Hcns<Fq>) -> Option<(KElem<Fq>, JElem<Fq>)> {
    use rayon::prelude::*;
    let ks = h.k_elements();
    let js = h.j_elements();
    ks.par_iter().find_map_first(|a| {
        js.iter()
            .find(|v| !(a.is_zero() && v.is_zero()) && degenerate_form(h, a, v).is_zero())
            .map(|v| (a.clone(), v.clone()))
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DegenerateIdentity {
    pub rank: usize,
    pub pass: bool,
    pub terms: usize,
}

/// `nu(g) = n(u - T(v, v))` for `N = 0`, `sharp = 0` at the generic point:
/// a rank-`n` structure whose gram entries are indeterminates, with `a`, `v`
/// and the skew part of `u` generic.
pub fn degenerate_nu_identity(n: usize) -> DegenerateIdentity {
    let mut names: Vec<String> = vec!["alpha".into(), "a0".into(), "a1".into(), "r".into()];
    for i in 0..n {
        names.push(format!("v{i}_0"));
        names.push(format!("v{i}_1"));
        names.push(format!("g{i}{i}"));
        for j in i + 1..n {
            names.push(format!("g{i}{j}_0"));
            names.push(format!("g{i}{j}_1"));
        }
    }
    let poly = PolyRing::new(&names);
    let disc = poly.parse("1 - 4*alpha").expect("valid polynomial");
    let two = poly.constant(2.into());
    let ring = LocRing::new(poly, vec![("2".into(), two), ("1-4alpha".into(), disc)]);
    let k = KField::new(ring.var("alpha"));
    let var = |s: &str| ring.var(s);
    let gram: Vec<Vec<KElem<Loc>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Equal => k.scalar(var(&format!("g{i}{i}"))),
                    std::cmp::Ordering::Less => k.elem(var(&format!("g{i}{j}_0")), var(&format!("g{i}{j}_1"))),
                    std::cmp::Ordering::Greater => {
                        k.elem(var(&format!("g{j}{i}_0")), var(&format!("g{j}{i}_1"))).conj()
                    }
                })
                .collect()
        })
        .collect();
    let h = hermitian_form_hcns(&k, gram).expect("gram is hermitian by construction");
    let a = k.elem(var("a0"), var("a1"));
    let v = JElem((0..n).map(|i| k.elem(var(&format!("v{i}_0")), var(&format!("v{i}_1")))).collect());
    let g = h.g_from_skew(a, v, &var("r")).expect("2 is invertible");
    let lhs = h.nu(&g);
    let c = g.u.sub(&k.scalar(h.t_norm(&g.v)));
    let rhs = c.norm();
    let diff = lhs.sub(&rhs);
    DegenerateIdentity { rank: n, pass: diff.is_zero(), terms: lhs.numerator().len() }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CriterionCheck {
    pub description: String,
    pub division: bool,
    pub anisotropic: bool,
}

impl CriterionCheck {
    pub fn agrees(&self) -> bool {
        self.division == self.anisotropic
    }
}

/// Compare the brute-force division verdict with anisotropy of
/// `n(a) - T(v, v)` on a finite `N = 0` instance.
pub fn degenerate_criterion(description: &str, h: &Hcns<Fq>) -> Result<CriterionCheck, HcnsError> {
    let division = matches!(h.is_division_bruteforce()?, DivisionVerdict::Division { .. });
    Ok(CriterionCheck { description: description.into(), division, anisotropic: isotropic_vector(h).is_none() })
}

/// Finite `N = 0` instances over `F_p^2`: all diagonal grams of rank 0-2 and
/// a few non-diagonal ones.
pub fn degenerate_family(p: u64) -> Vec<(String, Hcns<Fq>)> {
    let f = crate::scalars::FqField::prime(p).expect("p prime");
    let k = KField::new(f.int(crate::scalars::FqField::irreducible_alpha(p).expect("odd p") as i64));
    let mut out = vec![(format!("F{}^2 rank 0", p), hermitian_form_hcns(&k, vec![]).unwrap())];
    for d in 0..p as i64 {
        out.push((format!("F{p}^2 gram [{d}]"), hermitian_form_hcns(&k, vec![vec![k.int(d)]]).unwrap()));
    }
    for d1 in 1..p as i64 {
        for d2 in d1..p as i64 {
            let g = vec![vec![k.int(d1), k.zero()], vec![k.zero(), k.int(d2)]];
            out.push((format!("F{p}^2 gram diag({d1},{d2})"), hermitian_form_hcns(&k, g).unwrap()));
        }
    }
    let off = k.t();
    let g = vec![vec![k.int(1), off.clone()], vec![off.conj(), k.int(0)]];
    out.push((format!("F{p}^2 gram [[1,t],[tbar,0]]"), hermitian_form_hcns(&k, g).unwrap()));
    out
}

// ----- quaternionic family -----

/// `Q(K, alpha') = K + K w` acting on `M` with a `K`-basis: `w . sum c_i e_i =
/// sum cbar_i W e_i`, and `q(sum c_i e_i) = sum_{i<=j} cbar_i cbar_j Q_ij w`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuaternionData<R: Ring> {
    pub k: Arc<KField<R>>,
    pub alpha_prime: R,
    /// Column `j` is `w . e_j`.
    pub w_action: Vec<Vec<KElem<R>>>,
    /// Upper triangular `Q_ij`, `i <= j`.
    pub q_coeffs: Vec<Vec<KElem<R>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuaternionError {
    #[error("alpha' is not invertible")]
    AlphaPrime,
    #[error("w . (w . e_{0}) != alpha' e_{0}")]
    WSquare(usize),
    #[error("q(w . m) != alpha' q(m) at basis pair ({0}, {1})")]
    QCompat(usize, usize),
    #[error("derived T is not hermitian at ({0}, {1})")]
    NotHermitian(usize, usize),
}

impl<R: Ring> QuaternionData<R> {
    pub fn rank_m(&self) -> usize {
        self.w_action.len()
    }

    fn q_entry(&self, i: usize, j: usize) -> KElem<R> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        self.q_coeffs[i][j].clone()
    }

    /// `w . m` in coordinates.
    pub fn w_act(&self, m: &[KElem<R>]) -> Vec<KElem<R>> {
        let r = self.rank_m();
        (0..r).map(|l| (0..r).fold(self.k.zero(), |acc, j| acc.add(&self.w_action[l][j].mul(&m[j].conj())))).collect()
    }

    /// Coefficient of `w` in `q(m)`.
    pub fn q_value(&self, m: &[KElem<R>]) -> KElem<R> {
        let r = self.rank_m();
        let mut acc = self.k.zero();
        for i in 0..r {
            for j in i..r {
                acc = acc.add(&m[i].conj().mul(&m[j].conj()).mul(&self.q_entry(i, j)));
            }
        }
        acc
    }

    /// Coefficient of `w` in the linearization `q(m, n)`.
    pub fn q_pair(&self, m: &[KElem<R>], n: &[KElem<R>]) -> KElem<R> {
        let r = self.rank_m();
        let mut acc = self.k.zero();
        for i in 0..r {
            for j in 0..r {
                let c = if i == j { self.q_entry(i, i).scale_int(2) } else { self.q_entry(i, j) };
                acc = acc.add(&m[i].conj().mul(&n[j].conj()).mul(&c));
            }
        }
        acc
    }

    /// `T(a, b)` on `M`, from `T(a, w . b) w = q(a, b) alpha'`, i.e. the
    /// `w`-coefficient of `q(a, w . b)`.
    pub fn derived_t(&self, a: &[KElem<R>], b: &[KElem<R>]) -> KElem<R> {
        self.q_pair(a, &self.w_act(b))
    }

    fn basis(&self, i: usize) -> Vec<KElem<R>> {
        (0..self.rank_m()).map(|l| if l == i { self.k.one() } else { self.k.zero() }).collect()
    }

    pub fn validate(&self) -> Result<(), QuaternionError> {
        if self.alpha_prime.inverse().is_none() {
            return Err(QuaternionError::AlphaPrime);
        }
        let r = self.rank_m();
        let ap = self.k.scalar(self.alpha_prime.clone());
        for i in 0..r {
            let e = self.basis(i);
            let ww = self.w_act(&self.w_act(&e));
            if ww.iter().zip(&e).any(|(x, y)| *x != y.mul(&ap)) {
                return Err(QuaternionError::WSquare(i));
            }
        }
        for i in 0..r {
            for j in i..r {
                let mut m = self.basis(i);
                if j != i {
                    m[j] = self.k.one();
                }
                if self.q_value(&self.w_act(&m)) != self.q_value(&m).mul(&ap) {
                    return Err(QuaternionError::QCompat(i, j));
                }
            }
        }
        for i in 0..r {
            for j in 0..r {
                if self.derived_t(&self.basis(i), &self.basis(j))
                    != self.derived_t(&self.basis(j), &self.basis(i)).conj()
                {
                    return Err(QuaternionError::NotHermitian(i, j));
                }
            }
        }
        Ok(())
    }
}

/// `J = K w + M` with `T(k1 w + m1, k2 w + m2) = k1 kbar2 alpha' + T(m1, m2)`,
/// `(k w + m)^sharp = kbar (w . m) + q(m)` and `N(k w + m) = k w q(m)`.
/// Basis index 0 is `w`.
pub fn quaternionic_hcns<R: Ring>(qd: &QuaternionData<R>) -> Result<Hcns<R>, QuaternionError> {
    qd.validate()?;
    let k = &qd.k;
    let r = qd.rank_m();
    let n = r + 1;
    let mut gram = vec![vec![k.zero(); n]; n];
    gram[0][0] = k.scalar(qd.alpha_prime.clone());
    for i in 0..r {
        for j in 0..r {
            gram[i + 1][j + 1] = qd.derived_t(&qd.basis(i), &qd.basis(j));
        }
    }
    let lift = |m: Vec<KElem<R>>| {
        let mut c = vec![k.zero()];
        c.extend(m);
        JElem(c)
    };
    let w_only = |c: KElem<R>| {
        let mut v = vec![k.zero(); n];
        v[0] = c;
        JElem(v)
    };
    let sharp = |i: usize, j: usize| -> JElem<R> {
        match (i, j) {
            (0, 0) => JElem(vec![k.zero(); n]),
            (0, j) => lift(qd.w_act(&qd.basis(j - 1))),
            (i, j) if i == j => w_only(qd.q_entry(i - 1, i - 1)),
            (i, j) => w_only(qd.q_entry(i - 1, j - 1)),
        }
    };
    // N(c0 w + m) = c0 alpha' qbar(m), with qbar(m) = sum c_i c_j Qbar_ij.
    let ap = k.scalar(qd.alpha_prime.clone());
    let ncoef = |i: usize, j: usize, l: usize| -> KElem<R> {
        if i == 0 && j >= 1 {
            qd.q_entry(j - 1, l - 1).conj().mul(&ap)
        } else {
            k.zero()
        }
    };
    Hcns::new(k.clone(), n, gram, sharp, ncoef).map_err(|e| match e {
        HcnsError::NotHermitian(i, j) => QuaternionError::NotHermitian(i, j),
        other => panic!("unexpected construction error {other}"),
    })
}

#[derive(Debug, Clone)]
pub struct QuaternionSearch {
    pub data: QuaternionData<Fq>,
    pub hcns: Hcns<Fq>,
    pub candidates: usize,
    pub rejected_by_axioms: usize,
}

/// Random search over `F_p^2` coefficient data of rank `rank_m` until a
/// candidate passes validation, all four axioms, and has `N` not
/// identically zero.
pub fn search_quaternionic(p: u64, rank_m: usize, seed: u64, budget: usize) -> Option<QuaternionSearch> {
    let f = crate::scalars::FqField::prime(p).ok()?;
    let k = KField::new(f.int(crate::scalars::FqField::irreducible_alpha(p).ok()? as i64));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rk = |rng: &mut ChaCha8Rng| k.elem(f.random(rng), f.random(rng));
    let mut rejected = 0;
    for cand in 1..=budget {
        let alpha_prime = f.int(rng.gen_range(1..p as i64));
        let w_action: Vec<Vec<KElem<Fq>>> = (0..rank_m).map(|_| (0..rank_m).map(|_| rk(&mut rng)).collect()).collect();
        let q_coeffs: Vec<Vec<KElem<Fq>>> =
            (0..rank_m).map(|i| (0..rank_m).map(|j| if j >= i { rk(&mut rng) } else { k.zero() }).collect()).collect();
        let qd = QuaternionData { k: k.clone(), alpha_prime, w_action, q_coeffs };
        if q_coeffs_zero(&qd) {
            continue;
        }
        let Ok(h) = quaternionic_hcns(&qd) else { continue };
        match h.check_axioms() {
            Ok(rep) if rep.all_pass() => {
                return Some(QuaternionSearch { data: qd, hcns: h, candidates: cand, rejected_by_axioms: rejected })
            }
            _ => rejected += 1,
        }
    }
    None
}

fn q_coeffs_zero<R: Ring>(qd: &QuaternionData<R>) -> bool {
    qd.q_coeffs.iter().flatten().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::FqField;

    fn k_over(p: u64) -> Arc<KField<Fq>> {
        let f = FqField::prime(p).unwrap();
        KField::new(f.int(FqField::irreducible_alpha(p).unwrap() as i64))
    }

    #[test]
    fn cubic_field_not_division_over_f49() {
        let h = cubic_field_hcns(&k_over(7));
        assert!(h.check_axioms().unwrap().all_pass());
        let flag = division_flag_finite(&h).unwrap();
        assert!(flag.is_not_division());
        // N itself is anisotropic.
        assert!(h.k_elements().iter().all(|x| x.is_zero() || !h.eval_n(&JElem(vec![x.clone()])).is_zero()));
    }

    #[test]
    fn division_flags() {
        let k = k_over(3);
        assert!(matches!(
            division_flag_finite(&hermitian_form_hcns(&k, vec![]).unwrap()).unwrap(),
            DivisionFlag::ProvenDivision { checked: 27 }
        ));
        assert!(division_flag_finite(&hermitian_form_hcns(&k, vec![vec![k.int(1)]]).unwrap())
            .unwrap()
            .is_not_division());
        let k5 = k_over(5);
        assert!(matches!(
            division_flag_finite(&hermitian_form_hcns(&k5, vec![]).unwrap()).unwrap(),
            DivisionFlag::ProvenDivision { checked: 125 }
        ));
    }

    #[test]
    fn gaussian_gram_three_claimed() {
        let k = gaussian_k();
        assert_eq!(k.disc(), k.alpha().int_like(-1));
        let h = hermitian_form_hcns(&k, vec![vec![k.int(3)]]).unwrap();
        let flag = bounded_division_search(&h, 10_000, 2000, 1);
        assert_eq!(flag, DivisionFlag::ClaimedDivision { samples: 2000, max_height: 10_000 });
        // gram [1] is isotropic over Q(i): n(1) = T(1, 1).
        let h1 = hermitian_form_hcns(&k, vec![vec![k.int(1)]]).unwrap();
        let g = h1.g_from_skew(k.one(), JElem(vec![k.one()]), &k.alpha().zero_like()).unwrap();
        assert!(h1.nu(&g).is_zero());
    }

    #[test]
    fn degenerate_criterion_agrees() {
        for p in [3, 5] {
            for (name, h) in degenerate_family(p) {
                let c = degenerate_criterion(&name, &h).unwrap();
                assert!(c.agrees(), "{c:?}");
            }
        }
        for n in 0..3 {
            assert!(degenerate_nu_identity(n).pass);
        }
    }

    #[test]
    fn quaternionic_family() {
        let k = k_over(3);
        let f = FqField::prime(3).unwrap();
        // M = 0: T(k1 w, k2 w) = k1 kbar2 alpha', N = 0.
        let qd0 = QuaternionData { k: k.clone(), alpha_prime: f.int(2), w_action: vec![], q_coeffs: vec![] };
        let h0 = quaternionic_hcns(&qd0).unwrap();
        let kk = k.t();
        assert_eq!(h0.eval_t(&JElem(vec![kk.clone()]), &JElem(vec![kk.clone()])), k.scalar(kk.norm().mul(&f.int(2))));
        assert!(h0.check_axioms().unwrap().all_pass());
        // q = 0 with M != 0: N vanishes.
        let qz = QuaternionData {
            k: k.clone(),
            alpha_prime: f.int(1),
            w_action: vec![vec![k.one()]],
            q_coeffs: vec![vec![k.zero()]],
        };
        let hz = quaternionic_hcns(&qz).unwrap();
        assert!(hz.k_elements().iter().all(|x| hz.eval_n(&JElem(vec![x.clone(), k.t()])).is_zero()));
        // a violated invariant is reported.
        let bad = QuaternionData { w_action: vec![vec![k.t()]], ..qz.clone() };
        assert_eq!(quaternionic_hcns(&bad).unwrap_err(), QuaternionError::WSquare(0));
        // a nontrivial member found by search.
        let found = search_quaternionic(3, 1, 5, 2000).expect("search succeeds");
        let h = &found.hcns;
        assert!(h.k_elements().iter().any(|x| !h.eval_n(&JElem(vec![x.clone(), k.one()])).is_zero()));
        // T(a, w . b) w = q(a, b) alpha' on basis pairs.
        let qd = &found.data;
        let e = vec![k.one()];
        let lhs = qd.derived_t(&e, &qd.w_act(&e));
        assert_eq!(lhs, qd.q_pair(&e, &e).scale(&qd.alpha_prime));
    }
}
