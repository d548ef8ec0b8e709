//! One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use hcns_lab::auto::LieBasis;
use hcns_lab::hermform::HermFormAlgebra;
use hcns_lab::instances::{degenerate_criterion, degenerate_family, degenerate_nu_identity, hermitian_form_hcns};
use hcns_lab::lie::Lie;
use hcns_lab::oneinv::exhaustive_biconditional;
use hcns_lab::report::{load_instance, moufang_checks, property_checks, universal_checks, CheckRecord, Status};
use hcns_lab::scalars::{FqField, KField};
use hcns_lab::suites;

const SEED: u64 = 20240917;

type Outcome = Result<String, String>;

fn all_pass(records: &[CheckRecord]) -> Outcome {
    match records.iter().find(|r| r.failed()) {
        None => Ok(records.iter().map(|r| r.name.as_str()).collect::<Vec<_>>().join(", ")),
        Some(r) => Err(format!("{} failed, witness {:?}", r.name, r.witness)),
    }
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn universal_axioms() -> Outcome {
    let r = universal_checks(&names(&["axiom1", "axiom2", "axiom3", "axiom4"]), false).map_err(|e| e.to_string())?;
    if r.len() != 4 {
        return Err(format!("expected 4 axiom records, got {}", r.len()));
    }
    all_pass(&r)
}

fn seven_equations() -> Outcome {
    let list: Vec<String> = (1..=7).map(|i| format!("eq{i}")).collect();
    let r = universal_checks(&list, false).map_err(|e| e.to_string())?;
    if r.len() != 7 || r.iter().any(|c| c.scaling.is_none()) {
        return Err("missing equation or scaling constant".into());
    }
    all_pass(&r)
}

fn nu_two_ways() -> Outcome {
    let r = universal_checks(&names(&["nu-two-ways", "nu-sign"]), false).map_err(|e| e.to_string())?;
    all_pass(&r)?;
    let sign = r.iter().find(|c| c.name == "nu-sign").and_then(|c| c.detail.get("sign").cloned());
    Ok(format!("action = closed form; nu(r (t - tbar)) sign {}", sign.map(|s| s.to_string()).unwrap_or_default()))
}

fn biconditional() -> Outcome {
    let f = FqField::prime(3).map_err(|e| e.to_string())?;
    let k = KField::new(f.int(2));
    let mut summary = Vec::new();
    for (n, gram) in [(0u32, vec![]), (1, vec![vec![k.int(1)]])] {
        let h = hermitian_form_hcns(&k, gram).map_err(|e| e.to_string())?;
        let basis = LieBasis::new(Lie::new(h));
        let rep = exhaustive_biconditional(&basis).map_err(|e| e.to_string())?;
        // |G| = |K|^(n+1) * q: free (a, v), then the skew part of u.
        let expected = 9usize.pow(n + 1) * 3;
        if rep.elements != expected {
            return Err(format!("n = {n}: {} elements, expected {expected}", rep.elements));
        }
        if !rep.all_pass() {
            return Err(format!("n = {n}: {rep:?}"));
        }
        summary.push(format!(
            "n={n}: {} certified, {} singular, {} pairs excluded",
            rep.certified_reversing, rep.singular, rep.pairs_excluded
        ));
    }
    Ok(summary.join("; "))
}

fn hua() -> Outcome {
    let r = suites::hua_identities(200, SEED);
    if r.cases < 200 {
        return Err(format!("only {} cases", r.cases));
    }
    if r.pass() {
        Ok(format!("{} one-invertible elements", r.cases))
    } else {
        Err(format!("{} failures, first {:?}", r.failures, r.first_failure))
    }
}

/// |PSU(3, q)| = q^3 (q^3 + 1) (q^2 - 1) / gcd(3, q + 1).
fn psu3_order(q: u64) -> u64 {
    let g = if (q + 1).is_multiple_of(3) { 3 } else { 1 };
    q.pow(3) * (q.pow(3) + 1) * (q * q - 1) / g
}

fn moufang_q3() -> Outcome {
    let text = "alpha = 2\nrank = 0\n\n[base_field]\np = 3\ndeg = 1\n";
    let (_, inst, _) = load_instance(text).map_err(|e| e.to_string())?;
    let h = hcns_lab::report::finite_hcns(&inst).map_err(|e| e.to_string())?;
    let r = moufang_checks(h, true).map_err(|e| e.to_string())?;
    all_pass(&r)?;
    let get = |name: &str, key: &str| r.iter().find(|c| c.name == name).and_then(|c| c.detail.get(key).cloned());
    let points = get("points", "count").and_then(|v| v.as_u64());
    if points != Some(3u64.pow(3) + 1) {
        return Err(format!("points {points:?}, expected 28"));
    }
    let order = get("little-projective-order", "order").and_then(|v| v.as_str().map(str::to_owned));
    if order.as_deref() != Some(psu3_order(3).to_string().as_str()) {
        return Err(format!("order {order:?}, expected {}", psu3_order(3)));
    }
    if !r.iter().any(|c| c.name == "tau-implementations-agree" && c.status == Status::Pass) {
        return Err("tau implementations disagree".into());
    }
    Ok(format!("28 points, order {}", psu3_order(3)))
}

fn degenerate() -> Outcome {
    let mut count = 0;
    for p in [3, 5] {
        for (name, h) in degenerate_family(p) {
            let c = degenerate_criterion(&name, &h).map_err(|e| e.to_string())?;
            if !c.agrees() {
                return Err(format!("{name}: division {} vs anisotropic {}", c.division, c.anisotropic));
            }
            // A nonzero quadratic form in at least 3 variables over a finite
            // field is isotropic, so only rank 0 can be division.
            if c.division != (h.rank() == 0) {
                return Err(format!("{name}: division {} at rank {}", c.division, h.rank()));
            }
            count += 1;
        }
    }
    for n in 0..=2 {
        let id = degenerate_nu_identity(n);
        if !id.pass {
            return Err(format!("nu(g) = n(u - T(v, v)) fails at rank {n}"));
        }
    }
    Ok(format!("{count} finite instances agree; symbolic identity at ranks 0-2"))
}

fn hermform() -> Outcome {
    let f = FqField::prime(3).map_err(|e| e.to_string())?;
    let k = KField::new(f.int(2));
    let mut elements = 0;
    for d in 0..3 {
        let alg = HermFormAlgebra::new(&k, vec![vec![k.int(d)]]).map_err(|e| e.to_string())?;
        let rep = alg.verify_exhaustive();
        if !rep.all_pass() || rep.elements != 243 {
            return Err(format!("gram [{d}]: {rep:?}"));
        }
        elements += rep.elements;
    }
    Ok(format!("{elements} elements over grams [0], [1], [2]"))
}

fn properties() -> Outcome {
    let r = property_checks(500, SEED);
    if let Some(c) = r.iter().find(|c| c.detail.get("cases").and_then(|v| v.as_u64()).unwrap_or(0) < 500) {
        return Err(format!("{} ran fewer than 500 cases", c.name));
    }
    all_pass(&r)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("universal-model axioms", universal_axioms),
        ("seven-equation suite", seven_equations),
        ("nu two ways", nu_two_ways),
        ("one-invertibility biconditional over F9", biconditional),
        ("Hua identities", hua),
        ("Moufang set at q = 3", moufang_q3),
        ("N = 0 division criterion", degenerate),
        ("hermitian form matrix cross-check", hermform),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS criterion {}: {name} ({msg}) [{secs:.1} s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({msg}) [{secs:.1} s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
