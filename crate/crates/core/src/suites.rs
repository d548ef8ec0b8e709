//! Seeded randomized property suites over small finite instances.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::auto::{GradingSignature, LieAuto, LieBasis};
use crate::hcns::Hcns;
use crate::instances::{cubic_field_hcns, hermitian_form_hcns};
use crate::lie::{Lie, LieElem, Sign};
use crate::oneinv::{beta, certify, gl, gr, grade_scaling, psi, tau_act, tau_inv_act, OneInvError};
use crate::scalars::{Fq, FqField, KField, Loc, LocRing, PolyRing, Ring, ZMod};

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// Description of the first failing case.
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }

    fn collect(name: &str, outcomes: Vec<Result<(), String>>) -> Self {
        let failures = outcomes.iter().filter(|o| o.is_err()).count();
        let first_failure = outcomes.into_iter().find_map(|o| o.err());
        SuiteResult { name: name.into(), cases: 0, failures, first_failure }
    }
}

fn run(
    name: &str,
    cases: usize,
    seed: u64,
    case: impl Fn(usize, &mut ChaCha8Rng) -> Result<(), String> + Sync,
) -> SuiteResult {
    let outcomes: Vec<Result<(), String>> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            case(i, &mut rng)
        })
        .collect();
    SuiteResult { cases, ..SuiteResult::collect(name, outcomes) }
}

fn k_over(p: u64) -> Arc<KField<Fq>> {
    let f = FqField::prime(p).expect("p prime");
    KField::new(f.int(FqField::irreducible_alpha(p).expect("odd p") as i64))
}

/// Rank 0, the rank-1 hermitian form with gram `[1]`, and the cubic field,
/// over `F_p^2 / F_p`.
pub fn standard_instances(p: u64) -> Vec<(String, Arc<LieBasis<Fq>>)> {
    let k = k_over(p);
    let alpha = FqField::irreducible_alpha(p).expect("odd p") as i64;
    let cubic = cubic_field_hcns(&k);
    let cubic_lie = if p == 3 {
        let zr = LocRing::integers_with_inverses(&[2]);
        Lie::with_integral_model(cubic, cubic_field_hcns(&KField::new(zr.int(alpha)))).expect("lift reduces correctly")
    } else {
        Lie::new(cubic)
    };
    vec![
        (format!("F{p}^2 rank 0"), LieBasis::new(Lie::new(hermitian_form_hcns(&k, vec![]).unwrap()))),
        (format!("F{p}^2 gram [1]"), LieBasis::new(Lie::new(hermitian_form_hcns(&k, vec![vec![k.int(1)]]).unwrap()))),
        (format!("F{p}^2 cubic field"), LieBasis::new(cubic_lie)),
    ]
}

pub fn all_instances() -> Vec<(String, Arc<LieBasis<Fq>>)> {
    let mut v = standard_instances(3);
    v.extend(standard_instances(5));
    v
}

fn random_lie(basis: &LieBasis<Fq>, rng: &mut ChaCha8Rng) -> LieElem<Fq> {
    let f = basis.lie().hcns().alpha().field();
    let c: Vec<Fq> = (0..basis.dim()).map(|_| f.random(rng)).collect();
    basis.elem(&c)
}

fn random_nonzero(f: &'static FqField, rng: &mut ChaCha8Rng) -> Fq {
    loop {
        let x = f.random(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

fn check_ring<R: Ring>(what: &str, a: &R, b: &R, c: &R) -> Result<(), String> {
    let ok = a.add(b).add(c) == a.add(&b.add(c))
        && a.mul(b).mul(c) == a.mul(&b.mul(c))
        && a.add(b) == b.add(a)
        && a.mul(b) == b.mul(a)
        && a.mul(&b.add(c)) == a.mul(b).add(&a.mul(c))
        && a.sub(a).is_zero()
        && a.mul(&a.one_like()) == *a
        && a.add(&a.zero_like()) == *a;
    if ok {
        Ok(())
    } else {
        Err(format!("{what}: ({a}, {b}, {c})"))
    }
}

fn random_loc(ring: &Arc<LocRing>, rng: &mut ChaCha8Rng) -> Loc {
    let vars = ring.poly().names().to_vec();
    let mut acc = ring.zero();
    for _ in 0..rng.gen_range(1..5) {
        let mut m = ring.int(rng.gen_range(-9..10));
        for v in &vars {
            m = m.mul(&ring.var(v).pow(rng.gen_range(0..3)));
        }
        acc = acc.add(&m);
    }
    for i in 0..ring.gens().len() {
        acc = acc.mul(&ring.gen_inverse(i).pow(rng.gen_range(0..2)));
    }
    acc
}

/// Ring axioms on random triples, cycling through `F_p`, `F_p^2`, `K` over
/// `F_5`, `Z/12`, and localized polynomials.
pub fn ring_axioms(cases: usize, seed: u64) -> SuiteResult {
    let poly = PolyRing::new(&["x", "y"]);
    let g = poly.parse("1 - 4*x").expect("valid polynomial");
    let loc = LocRing::new(poly, vec![("1-4x".into(), g)]);
    let k5 = k_over(5);
    let k_loc = KField::new(loc.var("x"));
    run("ring axioms", cases, seed, |i, rng| match i % 6 {
        0 => {
            let f = FqField::prime(7).unwrap();
            check_ring("F7", &f.random(rng), &f.random(rng), &f.random(rng))
        }
        1 => {
            let f = FqField::quadratic(5).unwrap();
            check_ring("F25", &f.random(rng), &f.random(rng), &f.random(rng))
        }
        2 => {
            let f = k5.alpha().field();
            let mut r = || k5.elem(f.random(rng), f.random(rng));
            let (a, b, c) = (r(), r(), r());
            check_ring("K/F5", &a, &b, &c)?;
            let inv_ok =
                a.conj().conj() == a && a.mul(&b).conj() == a.conj().mul(&b.conj()) && a.norm() == a.mul(&a.conj()).x0;
            if inv_ok {
                Ok(())
            } else {
                Err(format!("involution on {a}, {b}"))
            }
        }
        3 => {
            let mut z = || ZMod::new(12, rng.gen_range(-50..50));
            let (a, b, c) = (z(), z(), z());
            check_ring("Z/12", &a, &b, &c)
        }
        4 => check_ring("localized", &random_loc(&loc, rng), &random_loc(&loc, rng), &random_loc(&loc, rng)),
        _ => {
            let mut r = || k_loc.elem(random_loc(&loc, rng), random_loc(&loc, rng));
            let (a, b, c) = (r(), r(), r());
            check_ring("K over localized", &a, &b, &c)?;
            let n_mult = a.mul(&b).norm() == a.norm().mul(&b.norm());
            if n_mult && a.mul(&b).conj() == a.conj().mul(&b.conj()) {
                Ok(())
            } else {
                Err(format!("norm on {a}, {b}"))
            }
        }
    })
}

/// `exp_+(g)` and `exp_-(g)` preserve brackets of all basis pairs.
pub fn exp_automorphism(cases: usize, seed: u64) -> SuiteResult {
    let inst = all_instances();
    run("exp automorphism", cases, seed, |i, rng| {
        let (name, basis) = &inst[i % inst.len()];
        let h = basis.lie().hcns();
        let g = h.random_g(rng);
        let sign = if i % 2 == 0 { Sign::Plus } else { Sign::Minus };
        let e = LieAuto::exp(basis, sign, &g).map_err(|e| format!("{name}: {e}"))?;
        if e.preserves_brackets() {
            Ok(())
        } else {
            Err(format!("{name}: exp {sign:?} of {g:?}"))
        }
    })
}

/// Jacobi identity on random triples of `L`.
pub fn jacobi(cases: usize, seed: u64) -> SuiteResult {
    let inst = all_instances();
    run("Jacobi identity", cases, seed, |i, rng| {
        let (name, basis) = &inst[i % inst.len()];
        let lie = basis.lie();
        let (x, y, z) = (random_lie(basis, rng), random_lie(basis, rng), random_lie(basis, rng));
        let s = lie
            .bracket(&x, &lie.bracket(&y, &z))
            .add(&lie.bracket(&y, &lie.bracket(&z, &x)))
            .add(&lie.bracket(&z, &lie.bracket(&x, &y)));
        if s.is_zero() {
            Ok(())
        } else {
            Err(format!("{name}: Jacobi fails"))
        }
    })
}

/// `beta(mu, lambda)` acts as `(1 - mu lambda)^i` on `L_i`.
pub fn beta_grade_action(cases: usize, seed: u64) -> SuiteResult {
    let inst = all_instances();
    run("beta grade action", cases, seed, |i, rng| {
        let (name, basis) = &inst[i % inst.len()];
        let f = basis.lie().hcns().alpha().field();
        let (mu, lam) = loop {
            let (m, l) = (f.random(rng), f.random(rng));
            if !f.one().sub(&m.mul(&l)).is_zero() {
                break (m, l);
            }
        };
        let b = beta(basis, &mu, &lam).map_err(|e| format!("{name}: {e}"))?;
        if Some(b) == grade_scaling(basis, &f.one().sub(&mu.mul(&lam))) {
            Ok(())
        } else {
            Err(format!("{name}: beta({mu}, {lam})"))
        }
    })
}

/// `psi(lambda) psi(lambda') = psi(lambda lambda')`.
pub fn psi_multiplicative(cases: usize, seed: u64) -> SuiteResult {
    let inst = all_instances();
    run("psi multiplicativity", cases, seed, |i, rng| {
        let (name, basis) = &inst[i % inst.len()];
        let f = basis.lie().hcns().alpha().field();
        let (a, b) = (random_nonzero(f, rng), random_nonzero(f, rng));
        let p = |x: &Fq| psi(basis, x).map_err(|e| format!("{name}: {e}"));
        if p(&a)?.mul(&p(&b)?) == p(&a.mul(&b))? {
            Ok(())
        } else {
            Err(format!("{name}: psi({a}) psi({b})"))
        }
    })
}

/// `(g_l)_r = g`, `(g_r)_l = g`, `(g_r)_r = tau_g(g_l)` and
/// `(g_l)_l = tau_g^-1(g_r)` on random one-invertible `g`.
pub fn hua_identities(cases: usize, seed: u64) -> SuiteResult {
    let inst = all_instances();
    run("Hua identities", cases, seed, |i, rng| {
        let (name, basis) = &inst[i % inst.len()];
        let h: &Hcns<Fq> = basis.lie().hcns();
        let g = loop {
            let g = h.random_g(rng);
            if !h.nu(&g).is_zero() {
                break g;
            }
        };
        let fail = |what: &str| format!("{name}: {what} for {g:?}");
        let c = certify(basis, &g).map_err(|e| fail(&e.to_string()))?;
        if c.tau.grading_signature() != GradingSignature::Reverses {
            return Err(fail("tau_g does not reverse"));
        }
        if ctx(gr(h, &c.g_l), &fail)? != g {
            return Err(fail("(g_l)_r != g"));
        }
        if ctx(gl(h, &c.g_r), &fail)? != g {
            return Err(fail("(g_r)_l != g"));
        }
        if ctx(tau_act(&c.tau, &c.g_l), &fail)? != Some(ctx(gr(h, &c.g_r), &fail)?) {
            return Err(fail("(g_r)_r != tau_g(g_l)"));
        }
        if ctx(tau_inv_act(&c.tau, &c.g_r), &fail)? != Some(ctx(gl(h, &c.g_l), &fail)?) {
            return Err(fail("(g_l)_l != tau_g^-1(g_r)"));
        }
        Ok(())
    })
}

fn ctx<T>(r: Result<T, OneInvError>, fail: &dyn Fn(&str) -> String) -> Result<T, String> {
    r.map_err(|e| fail(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for r in [
            ring_axioms(60, 1),
            exp_automorphism(12, 2),
            jacobi(30, 3),
            beta_grade_action(12, 4),
            psi_multiplicative(12, 5),
            hua_identities(12, 6),
        ] {
            assert!(r.pass(), "{r:?}");
        }
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        assert_eq!(jacobi(10, 9), jacobi(10, 9));
    }
}
