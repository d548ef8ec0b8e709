//! Deterministic reports shared by the command line and the acceptance run.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::auto::LieBasis;
use crate::hcns::{AxiomReport, GElem, Hcns};
use crate::instances::{bounded_division_search, division_flag_finite, DivisionFlag};
use crate::io::{ElementSpec, Instance, InstanceFile, IoError};
use crate::lie::Lie;
use crate::moufang::{MoufangError, MoufangSetFinite};
use crate::oneinv::{certify, OneInvError};
use crate::scalars::poly_stats::{self, PolyStats};
use crate::scalars::{Fq, Ring};
use crate::suites::{self, SuiteResult};
use crate::universal::{build_universal, build_universal_perturbed, nu_of_central_skew_sign, one_generated};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Informational record; never affects the exit code.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scaling: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub detail: BTreeMap<String, Value>,
    pub elapsed_ms: u128,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, pass: bool) -> Self {
        CheckRecord {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            scaling: None,
            witness: None,
            terms: None,
            detail: BTreeMap::new(),
            elapsed_ms: 0,
        }
    }

    pub fn info(name: impl Into<String>) -> Self {
        CheckRecord { status: Status::Info, ..CheckRecord::new(name, true) }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.detail.insert(key.into(), serde_json::to_value(value).expect("serializable detail"));
        self
    }

    pub fn witness(mut self, w: Option<String>) -> Self {
        self.witness = w;
        self
    }

    pub fn terms(mut self, t: usize) -> Self {
        self.terms = Some(t);
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_millis();
        self
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<PolyStats>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            instance_digest: None,
            seed: None,
            checks: Vec::new(),
            profile: None,
        }
    }

    pub fn all_pass(&self) -> bool {
        !self.checks.iter().any(CheckRecord::failed)
    }

    /// Pretty JSON with a fixed field order.
    pub fn to_structured(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.tool, self.version, self.command);
        if let Some(d) = &self.instance_digest {
            out += &format!("instance sha256:{d}\n");
        }
        if let Some(s) = self.seed {
            out += &format!("seed {s}\n");
        }
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "INFO",
            };
            out += &format!("{status} {} ({} ms)\n", c.name, c.elapsed_ms);
            if let Some(s) = &c.scaling {
                out += &format!("    scaling: {s}\n");
            }
            if let Some(t) = c.terms {
                out += &format!("    terms: {t}\n");
            }
            if let Some(w) = &c.witness {
                out += &format!("    witness: {w}\n");
            }
            for (k, v) in &c.detail {
                let v = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out += &format!("    {k}: {v}\n");
            }
        }
        if let Some(p) = &self.profile {
            out += &format!(
                "profile: {} polynomial multiplications, {} term products\n",
                p.multiplications, p.term_products
            );
        }
        out
    }

    /// Records polynomial arithmetic done since `before`.
    pub fn set_profile(&mut self, before: PolyStats) {
        let now = poly_stats::snapshot();
        self.profile = Some(PolyStats {
            multiplications: now.multiplications - before.multiplications,
            term_products: now.term_products - before.term_products,
        });
    }
}

/// SHA-256 of the canonical serialization of an instance file.
pub fn instance_digest(file: &InstanceFile) -> String {
    let mut hasher = Sha256::new();
    hasher.update(file.to_toml().as_bytes());
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub fn g_string<R: Ring>(g: &GElem<R>) -> String {
    format!("{g:?}")
}

fn axiom_records(rep: AxiomReport, start: Instant) -> Vec<CheckRecord> {
    rep.axioms
        .into_iter()
        .map(|a| CheckRecord::new(a.name, a.pass).witness(a.witness).terms(a.terms).timed(start))
        .collect()
}

pub const UNIVERSAL_CHECKS: [&str; 14] = [
    "axiom1",
    "axiom2",
    "axiom3",
    "axiom4",
    "eq1",
    "eq2",
    "eq3",
    "eq4",
    "eq5",
    "eq6",
    "eq7",
    "nu-two-ways",
    "w-component",
    "nu-sign",
];

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("unknown check {0:?}; known checks: {1}")]
    UnknownCheck(String, String),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Hcns(#[from] crate::hcns::HcnsError),
    #[error(transparent)]
    Moufang(#[from] MoufangError),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Internal(String),
}

/// Axioms of the universal model, the seven equations and the `nu` checks.
/// With `self_test`, the axioms run on a model with one corrupted
/// coefficient and are expected to fail.
pub fn universal_checks(only: &[String], self_test: bool) -> Result<Vec<CheckRecord>, ReportError> {
    for o in only {
        if !UNIVERSAL_CHECKS.contains(&o.as_str()) {
            return Err(ReportError::UnknownCheck(o.clone(), UNIVERSAL_CHECKS.join(", ")));
        }
    }
    let wanted = |name: &str| only.is_empty() || only.iter().any(|o| o == name);
    let mut out = Vec::new();
    if (1..=4).any(|i| wanted(&format!("axiom{i}"))) {
        let start = Instant::now();
        let h = if self_test { build_universal_perturbed(0, 1) } else { build_universal() };
        let rep = h.check_axioms()?;
        out.extend(axiom_records(rep, start).into_iter().filter(|r| wanted(&r.name)).map(|mut r| {
            if self_test {
                r.name = format!("self-test/{}", r.name);
            }
            r
        }));
    }
    let eqs: Vec<usize> = (1..=7).filter(|i| wanted(&format!("eq{i}"))).collect();
    let needs_model = !eqs.is_empty() || wanted("nu-two-ways") || wanted("w-component");
    if needs_model && !self_test {
        let og = one_generated();
        {
            use rayon::prelude::*;
            let results: Vec<_> = eqs.par_iter().map(|&i| og.equation(i)).collect();
            for e in results {
                let mut r = CheckRecord::new(e.name, e.pass).terms(e.terms).with("statement", e.statement);
                r.scaling = Some(e.scaling);
                r.elapsed_ms = e.millis;
                out.push(r);
            }
        }
        if wanted("nu-two-ways") {
            let start = Instant::now();
            out.push(CheckRecord::new("nu-two-ways", og.nu_two_ways()).terms(og.nu.numerator().len()).timed(start));
        }
        if wanted("w-component") {
            let start = Instant::now();
            let w = og.w_variants();
            let pass = w.nu2_times_sum_normalized || w.nu2_times_sum_unnormalized || w.nu2_product_plus_sharp;
            out.push(
                CheckRecord::new("w-component", pass)
                    .with("variants", &w)
                    .with("literal_u_in_group", og.literal_u_in_group)
                    .timed(start),
            );
        }
    }
    if wanted("nu-sign") && !self_test {
        let start = Instant::now();
        let sign = nu_of_central_skew_sign();
        let mut r = CheckRecord::info("nu-sign").with("sign", sign).timed(start);
        r.detail.insert("statement".into(), json!("nu((0, 0), (r (t - tbar), 0)) = sign * r^2 (1 - 4 alpha)"));
        if sign == 0 {
            r.status = Status::Fail;
        }
        out.push(r);
    }
    Ok(out)
}

/// Loads and validates an instance file, returning it with its digest.
pub fn load_instance(text: &str) -> Result<(InstanceFile, Instance, String), ReportError> {
    let file = InstanceFile::parse(text)?;
    let inst = file.build()?;
    let digest = instance_digest(&file);
    Ok((file, inst, digest))
}

pub fn division_record(
    inst: &Instance,
    max_height: u64,
    samples: usize,
    seed: u64,
) -> Result<CheckRecord, ReportError> {
    let start = Instant::now();
    let flag = match inst {
        Instance::Finite(h) => division_flag_finite(h)?,
        Instance::Polynomial(h) => bounded_division_search(h, max_height, samples, seed),
    };
    let witness = match &flag {
        DivisionFlag::NotDivision { witness } => Some(witness.clone()),
        _ => None,
    };
    Ok(CheckRecord::new("division", !flag.is_not_division()).with("flag", &flag).witness(witness).timed(start))
}

pub fn instance_checks(
    inst: &Instance,
    max_height: u64,
    samples: usize,
    seed: u64,
) -> Result<Vec<CheckRecord>, ReportError> {
    let start = Instant::now();
    let rep = match inst {
        Instance::Finite(h) => h.check_axioms()?,
        Instance::Polynomial(h) => h.check_axioms()?,
    };
    let mut out = axiom_records(rep, start);
    let mut div = division_record(inst, max_height, samples, seed)?;
    // A structure without division is still a valid structure.
    if div.failed() {
        div.status = Status::Info;
    }
    out.push(div);
    Ok(out)
}

fn one_invert_generic<R: Ring>(h: &Hcns<R>, spec: &ElementSpec) -> Result<Vec<CheckRecord>, ReportError> {
    let start = Instant::now();
    let g = spec.build(h)?;
    let basis = LieBasis::new(Lie::new(h.clone()));
    match certify(&basis, &g) {
        Ok(c) => {
            let reverses = c.reverses();
            Ok(vec![CheckRecord::new("one-invertible", reverses)
                .with("g", g_string(&c.g))
                .with("nu", c.nu.to_string())
                .with("nu_inverse", c.nu_inverse.to_string())
                .with("g_r", g_string(&c.g_r))
                .with("g_l", g_string(&c.g_l))
                .with("tau_reverses_grading", reverses)
                .timed(start)])
        }
        Err(OneInvError::NotOneInvertible(nu)) => Ok(vec![CheckRecord::new("one-invertible", false)
            .with("g", g_string(&g))
            .with("obstruction", "NotOneInvertible")
            .witness(Some(format!("nu(g) = {nu}")))
            .timed(start)]),
        Err(e) => Err(ReportError::Internal(e.to_string())),
    }
}

pub fn one_invert_checks(inst: &Instance, element: &str) -> Result<Vec<CheckRecord>, ReportError> {
    let spec = ElementSpec::parse(element)?;
    match inst {
        Instance::Finite(h) => one_invert_generic(h, &spec),
        Instance::Polynomial(h) => one_invert_generic(h, &spec),
    }
}

pub fn moufang_checks(h: &Hcns<Fq>, exhaustive: bool) -> Result<Vec<CheckRecord>, ReportError> {
    let start = Instant::now();
    let ms = MoufangSetFinite::build(h)?;
    let mut out = vec![CheckRecord::info("points").with("count", ms.num_points()).timed(start)];
    let start = Instant::now();
    let rep = ms.verify(exhaustive);
    let witness = rep.witness.map(|(m, g, n)| format!("g = point {g} in U_{m} fails on U_{n}"));
    out.push(
        CheckRecord::new("moufang-axioms", rep.all_pass())
            .with("exhaustive", exhaustive)
            .with("tau_involution", rep.tau_involution)
            .with("tau_maps_infinity_to_one", rep.tau_maps_infinity_to_one)
            .with("root_groups_regular", rep.regular)
            .with("root_groups_conjugate", rep.conjugation)
            .witness(witness)
            .timed(start),
    );
    let start = Instant::now();
    out.push(CheckRecord::new("tau-implementations-agree", ms.tau_implementations_agree()?).timed(start));
    let start = Instant::now();
    let gens = ms.generating_subset().len();
    out.push(
        CheckRecord::info("little-projective-order")
            .with("order", ms.little_projective_order().to_string())
            .with("generators_per_root_group", gens)
            .timed(start),
    );
    Ok(out)
}

pub fn finite_hcns(inst: &Instance) -> Result<&Hcns<Fq>, ReportError> {
    match inst {
        Instance::Finite(h) => Ok(h),
        Instance::Polynomial(_) => Err(ReportError::Unsupported("this command needs a finite base field".into())),
    }
}

fn suite_record(r: SuiteResult, start: Instant) -> CheckRecord {
    CheckRecord::new(r.name.clone(), r.pass())
        .with("cases", r.cases)
        .with("failures", r.failures)
        .witness(r.first_failure)
        .timed(start)
}

/// The randomized property suites, each with `cases` seeded cases.
pub fn property_checks(cases: usize, seed: u64) -> Vec<CheckRecord> {
    type Suite = fn(usize, u64) -> SuiteResult;
    let all: [Suite; 6] = [
        suites::ring_axioms,
        suites::exp_automorphism,
        suites::jacobi,
        suites::beta_grade_action,
        suites::psi_multiplicative,
        suites::hua_identities,
    ];
    use rayon::prelude::*;
    all.par_iter()
        .map(|s| {
            let start = Instant::now();
            suite_record(s(cases, seed), start)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const F9: &str = "alpha = 2\nrank = 0\n\n[base_field]\np = 3\ndeg = 1\n";

    #[test]
    fn structured_report_is_deterministic_modulo_timing() {
        let run = || {
            let (_, inst, digest) = load_instance(F9).unwrap();
            let mut r = Report::new("check-instance");
            r.instance_digest = Some(digest);
            r.checks = instance_checks(&inst, 10, 10, 1).unwrap();
            for c in &mut r.checks {
                c.elapsed_ms = 0;
            }
            r.to_structured()
        };
        let a = run();
        assert_eq!(a, run());
        assert!(a.contains("\"proven-division\""));
    }

    #[test]
    fn only_filter_and_unknown_names() {
        let r = universal_checks(&["axiom2".into()], false).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].name, "axiom2");
        assert!(r[0].status == Status::Pass);
        assert!(matches!(universal_checks(&["axiom9".into()], false), Err(ReportError::UnknownCheck(..))));
    }

    #[test]
    fn self_test_fails_with_witness() {
        let r = universal_checks(&[], true).unwrap();
        let bad: Vec<_> = r.iter().filter(|c| c.failed()).collect();
        assert!(!bad.is_empty());
        assert!(bad.iter().all(|c| c.witness.is_some()));
    }

    #[test]
    fn one_invert_singular_element() {
        // gram [1] over F9 has nu((0, 0), (r (t - tbar), 0)) = 0 only for r = 0,
        // so use the isotropic witness from the division search.
        let text = "alpha = 2\nrank = 1\ngram = [[[1, 0]]]\n\n[base_field]\np = 3\ndeg = 1\n";
        let (_, inst, _) = load_instance(text).unwrap();
        let h = finite_hcns(&inst).unwrap();
        let (a, v) = crate::instances::isotropic_vector(h).expect("isotropic");
        let c = |k: &crate::scalars::KElem<Fq>| [k.x0.index() as i64, k.x1.index() as i64];
        let spec = format!("{{\"a\": {:?}, \"v\": [{:?}]}}", c(&a), c(&v.0[0]));
        let r = one_invert_checks(&inst, &spec).unwrap();
        assert!(r[0].failed(), "{r:?}");
        assert!(r[0].witness.as_deref().unwrap().starts_with("nu(g) = 0"));
        let ok = one_invert_checks(&inst, "{\"a\": [1, 0], \"v\": [[0, 0]]}").unwrap();
        assert!(!ok[0].failed(), "{ok:?}");
    }
}
