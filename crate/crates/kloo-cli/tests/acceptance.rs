//! Acceptance suite: one printed pass/fail line per criterion.
//!
//! Criteria that name a CLI invocation run the real binary and parse its
//! JSON; the rest go through the library together with its independent
//! oracles.  Run with `--nocapture` to see every line.

use kloo::graded;
use kloo::lattice::KloostermanFamily;
use kloo::lfunc;
use kloo::polygon::{self, Comparison};
use kloo::testkit;
use kloo::{rat, Rat};
use serde_json::Value;
use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::sync::Mutex;
use std::time::{Duration, Instant};

/// Per-criterion wall-clock bounds are part of the contract; run criteria
/// one at a time so parallel scheduling cannot distort them.
static SERIAL: Mutex<()> = Mutex::new(());

fn run_criterion(number: u32, what: &str, check: impl FnOnce() -> Result<(), String>) {
    let guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| p.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panicked".into());
        Err(format!("panicked: {msg}"))
    });
    match &outcome {
        Ok(()) => println!("criterion {number} ({what}): PASS"),
        Err(e) => println!("criterion {number} ({what}): FAIL — {e}"),
    }
    drop(guard);
    if let Err(e) = outcome {
        panic!("criterion {number} ({what}) failed: {e}");
    }
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

fn run_kloo(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_kloo"))
        .args(args)
        .env_remove("KLOO_BUDGET")
        .output()
        .map_err(|e| format!("failed to spawn kloo: {e}"))?;
    let code = out.status.code().ok_or_else(|| "terminated by signal".to_string())?;
    Ok((code, String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn parse_json(stdout: &str) -> Result<Value, String> {
    serde_json::from_str(stdout.trim()).map_err(|e| format!("stdout is not JSON ({e}): {stdout:?}"))
}

type Slope = (i64, i64, u64);

fn slopes_from(poly: &Value) -> Result<Vec<Slope>, String> {
    let arr = poly
        .get("slopes")
        .and_then(Value::as_array)
        .ok_or_else(|| format!("missing slopes array in {poly}"))?;
    arr.iter()
        .map(|e| {
            let t = e.as_array().filter(|t| t.len() == 3).ok_or_else(|| format!("bad slope {e}"))?;
            Ok((
                t[0].as_i64().ok_or_else(|| format!("bad slope {e}"))?,
                t[1].as_i64().ok_or_else(|| format!("bad slope {e}"))?,
                t[2].as_u64().ok_or_else(|| format!("bad slope {e}"))?,
            ))
        })
        .collect()
}

/// Run `verify … --json`, expecting every λ̄ equal to the Hodge polygon with
/// the given slope multiset, within the wall-clock bound.
fn check_verify_fixture(
    args: &[&str],
    lambda_count: usize,
    expected: &[Slope],
    bound: Duration,
) -> Result<(), String> {
    let t0 = Instant::now();
    let (code, stdout) = run_kloo(args)?;
    let elapsed = t0.elapsed();
    if code != 0 {
        return Err(format!("exit code {code}, expected 0"));
    }
    let report = parse_json(&stdout)?;
    let results = report["results"].as_array().ok_or("missing results")?;
    if results.len() != lambda_count {
        return Err(format!("{} λ̄ results, expected {lambda_count}", results.len()));
    }
    for r in results {
        let lambda = &r["lambda"];
        if r["verdict"] != Value::String("equal".into()) {
            return Err(format!("λ̄={lambda}: verdict {}, expected equal", r["verdict"]));
        }
        let got = slopes_from(&r["newton"])?;
        if got != expected {
            return Err(format!("λ̄={lambda}: NP slopes {got:?}, expected {expected:?}"));
        }
        if r["consistency"] != Value::Bool(true) {
            return Err(format!("λ̄={lambda}: consistency {}", r["consistency"]));
        }
    }
    if report["overall"] != Value::String("equal".into()) {
        return Err(format!("overall {}, expected equal", report["overall"]));
    }
    if elapsed > bound {
        return Err(format!("took {elapsed:?}, bound {bound:?}"));
    }
    Ok(())
}

fn points(n: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![-r; n];
    loop {
        out.push(v.clone());
        let mut i = 0;
        while i < n {
            v[i] += 1;
            if v[i] <= r {
                break;
            }
            v[i] = -r;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out
}

/// Every family with exponent entries in 1..=max.
fn for_each_family(
    n: usize,
    max: u64,
    f: &mut dyn FnMut(KloostermanFamily) -> Result<(), String>,
) -> Result<(), String> {
    let digits = 2 * n;
    let total = max.pow(digits as u32);
    for code in 0..total {
        let mut rest = code;
        let mut vals = vec![0i64; digits];
        for v in vals.iter_mut() {
            *v = (rest % max) as i64 + 1;
            rest /= max;
        }
        let family = KloostermanFamily::new(vals[..n].to_vec(), vals[n..].to_vec())
            .map_err(|e| e.to_string())?;
        f(family)?;
    }
    Ok(())
}

fn fam(a: &[i64], d: &[i64]) -> KloostermanFamily {
    KloostermanFamily::new(a.to_vec(), d.to_vec()).expect("valid family")
}

// ---------------------------------------------------------------------------
// criteria
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_n1_all_lambda_equal() {
    run_criterion(1, "n=1 fixture, all λ̄, NP slopes {0,1}", || {
        check_verify_fixture(
            &["verify", "--a", "1", "--d", "1", "--p", "5", "--all-lambda", "--json"],
            4,
            &[(0, 1, 1), (1, 1, 1)],
            Duration::from_secs(1),
        )
    });
}

#[test]
fn criterion_02_n2_unit_exponents() {
    run_criterion(2, "n=2 fixture, NP slopes {0,1,2}", || {
        check_verify_fixture(
            &["verify", "--a", "1,1", "--d", "1,1", "--p", "3", "--all-lambda", "--json"],
            2,
            &[(0, 1, 1), (1, 1, 1), (2, 1, 1)],
            Duration::from_secs(5),
        )
    });
}

#[test]
fn criterion_03_half_integer_slopes() {
    run_criterion(3, "NP slopes {0,1/2,1,3/2,2} each once", || {
        check_verify_fixture(
            &["verify", "--a", "1,2", "--d", "1,1", "--p", "3", "--all-lambda", "--json"],
            2,
            &[(0, 1, 1), (1, 2, 1), (1, 1, 1), (3, 2, 1), (2, 1, 1)],
            Duration::from_secs(30),
        )
    });
}

#[test]
fn criterion_04_repeated_slope() {
    run_criterion(4, "NP slopes {0,1,1,2}", || {
        check_verify_fixture(
            &["verify", "--a", "1,1", "--d", "1,2", "--p", "3", "--all-lambda", "--json"],
            2,
            &[(0, 1, 1), (1, 1, 2), (2, 1, 1)],
            Duration::from_secs(30),
        )
    });
}

#[test]
fn criterion_05_never_below_hodge() {
    run_criterion(5, "NP ≥ HP on completed runs with p ≢ 1 mod e*", || {
        // Named example through the binary: a=(3), d=(1), p=5, e*=3, 5 ≡ 2.
        let (code, stdout) =
            run_kloo(&["verify", "--a", "3", "--d", "1", "--p", "5", "--json"])?;
        if code != 0 {
            return Err(format!("verify (3)/(1) p=5 exit {code}, expected 0"));
        }
        let report = parse_json(&stdout)?;
        if report["criteria"]["estar_holds"] != Value::Bool(false) {
            return Err("premise broken: e* criterion unexpectedly holds at p=5".into());
        }
        for r in report["results"].as_array().ok_or("missing results")? {
            let verdict = r["verdict"].as_str().unwrap_or("?");
            if verdict == "incomparable_violation" {
                return Err(format!("λ̄={}: NP fell below HP", r["lambda"]));
            }
        }
        // A second non-guaranteed case at brute-force scale, via the library.
        let family = fam(&[1, 1], &[1, 4]);
        let hp = polygon::hodge_polygon(&family.enumerate_basis());
        for lambda in 1..3u64 {
            let np = lfunc::newton_polygon_bruteforce(&family, 3, lambda, lfunc::DEFAULT_BUDGET)
                .map_err(|e| e.to_string())?;
            let cmp = polygon::compare(&np, &hp).map_err(|e| e.to_string())?;
            if cmp == Comparison::IncomparableViolation {
                return Err(format!("(1,1)/(1,4) p=3 λ̄={lambda}: NP fell below HP"));
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_06_basis_counting_identity() {
    run_criterion(6, "counting identity, n ≤ 4, entries ≤ 5", || {
        let t0 = Instant::now();
        for n in 1..=4usize {
            for_each_family(n, 5, &mut |family| {
                // Materialize points and weights up to n = 3; at n = 4 count
                // through the same pruned range recursion without storing.
                let counted = if n <= 3 {
                    family.enumerate_basis().len() as u64
                } else {
                    family.basis_count()
                };
                let formula = family.basis_cardinality_formula();
                if counted != formula {
                    return Err(format!(
                        "a={:?} d={:?}: enumerated {counted}, formula {formula}",
                        family.a(),
                        family.d()
                    ));
                }
                Ok(())
            })?;
        }
        let elapsed = t0.elapsed();
        if elapsed > Duration::from_secs(60) {
            return Err(format!("took {elapsed:?}, bound 60s"));
        }
        Ok(())
    });
}

#[test]
fn criterion_07_set_bijections() {
    run_criterion(7, "φ∘ψ = id, ψ∘φ = id, |𝓐₀| = |𝓜|, n ≤ 3, entries ≤ 4", || {
        for n in 2..=3usize {
            for_each_family(n, 4, &mut |family| {
                let label = format!("a={:?} d={:?}", family.a(), family.d());
                let err = |e: kloo::Error| format!("{label}: {e}");
                let t = family.enumerate_t().map_err(err)?;
                let s = family.enumerate_s().map_err(err)?;
                let a0 = family.enumerate_a0().map_err(err)?;
                let m = family.enumerate_m().map_err(err)?;
                let s_set: HashSet<_> = s.iter().cloned().collect();
                let t_set: HashSet<_> = t.iter().cloned().collect();
                for v in &t {
                    let u = family.psi(v).map_err(|e| format!("{label}: ψ{v:?}: {e}"))?;
                    if !s_set.contains(&u) {
                        return Err(format!("{label}: ψ{v:?} = {u:?} ∉ 𝓢"));
                    }
                    let back = family.phi(&u).map_err(|e| format!("{label}: φ{u:?}: {e}"))?;
                    if back != *v {
                        return Err(format!("{label}: φ∘ψ moved {v:?} to {back:?}"));
                    }
                }
                for u in &s {
                    let v = family.phi(u).map_err(|e| format!("{label}: φ{u:?}: {e}"))?;
                    if !t_set.contains(&v) {
                        return Err(format!("{label}: φ{u:?} = {v:?} ∉ 𝓣"));
                    }
                    let back = family.psi(&v).map_err(|e| format!("{label}: ψ{v:?}: {e}"))?;
                    if back != *u {
                        return Err(format!("{label}: ψ∘φ moved {u:?} to {back:?}"));
                    }
                }
                if a0.len() != m.len() {
                    return Err(format!("{label}: |𝓐₀| = {} ≠ |𝓜| = {}", a0.len(), m.len()));
                }
                Ok(())
            })?;
        }
        Ok(())
    });
}

#[test]
fn criterion_08_reduction_matches_oracle() {
    run_criterion(8, "reduce_monomial ≡ linear-algebra oracle, lands in 𝓑", || {
        let mut oracle = testkit::ReductionOracle::new();
        for n in 1..=2usize {
            for_each_family(n, 3, &mut |family| {
                for p in [3u64, 5] {
                    if family.a().iter().chain(family.d()).any(|&x| x as u64 % p == 0) {
                        continue; // degenerate at this p
                    }
                    for lambda in 1..p {
                        for v in points(n, 4) {
                            let label = format!(
                                "a={:?} d={:?} p={p} λ̄={lambda} v={v:?}",
                                family.a(),
                                family.d()
                            );
                            let got = graded::reduce_monomial(&family, p, lambda, &v)
                                .map_err(|e| format!("{label}: {e}"))?;
                            for (_, point) in &got.combination {
                                if !family.in_basis(point) {
                                    return Err(format!("{label}: landed outside 𝓑 at {point:?}"));
                                }
                            }
                            let want = oracle
                                .reduce(&family, p, lambda, &v)
                                .map_err(|e| format!("{label} (oracle): {e}"))?;
                            let mut got_sorted = got.combination.clone();
                            let mut want_sorted = want.clone();
                            got_sorted.sort_by(|x, y| x.1.cmp(&y.1));
                            want_sorted.sort_by(|x, y| x.1.cmp(&y.1));
                            if got_sorted != want_sorted {
                                return Err(format!(
                                    "{label}: rewriter gave {got_sorted:?}, oracle {want_sorted:?}"
                                ));
                            }
                        }
                    }
                }
                Ok(())
            })?;
        }
        Ok(())
    });
}

#[test]
fn criterion_09_weight_properties() {
    run_criterion(9, "weight homogeneity, superadditivity, denominators, LP oracle", || {
        let families = [
            fam(&[1], &[1]),
            fam(&[3], &[2]),
            fam(&[1, 2], &[1, 1]),
            fam(&[2, 3], &[1, 2]),
            fam(&[1, 2, 3], &[2, 1, 1]),
        ];
        for family in &families {
            let n = family.n();
            let label = format!("a={:?} d={:?}", family.a(), family.d());
            // Homogeneity: w(l·v) = l·w(v), |vᵢ| ≤ 10.
            for v in points(n, 10) {
                let w = family.weight(&v);
                for l in 1..=5i64 {
                    let scaled: Vec<i64> = v.iter().map(|x| l * x).collect();
                    if family.weight(&scaled) != rat(l, 1) * w {
                        return Err(format!("{label}: w({l}·{v:?}) ≠ {l}·w({v:?})"));
                    }
                }
            }
            // Superadditivity with cofacial equality, |uᵢ|,|vᵢ| ≤ 5.
            let pts = points(n, 5);
            let weights: Vec<Rat> = pts.iter().map(|v| family.weight(v)).collect();
            for (u, wu) in pts.iter().zip(&weights) {
                for (v, wv) in pts.iter().zip(&weights) {
                    let sum: Vec<i64> = u.iter().zip(v).map(|(&x, &y)| x + y).collect();
                    let wsum = family.weight(&sum);
                    let bound = *wu + *wv;
                    if wsum > bound {
                        return Err(format!("{label}: w({u:?}+{v:?}) > w(u)+w(v)"));
                    }
                    if (wsum == bound) != family.cofacial(u, v) {
                        return Err(format!(
                            "{label}: equality/cofaciality mismatch at u={u:?} v={v:?}"
                        ));
                    }
                }
            }
            // Denominators divide e*, |vᵢ| ≤ 20.
            let estar = family.e_star();
            for v in points(n, 20) {
                if estar % *family.weight(&v).denom() != 0 {
                    return Err(format!("{label}: denom of w({v:?}) ∤ e* = {estar}"));
                }
            }
            // LP oracle agreement on small v.
            for v in points(n, if n <= 2 { 3 } else { 2 }) {
                if testkit::lp_weight(family, &v) != family.weight(&v) {
                    return Err(format!("{label}: LP weight differs at {v:?}"));
                }
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_10_hodge_closed_form() {
    run_criterion(10, "hodge (2,3)/(1,1): 11 distinct slopes, multiplicity one", || {
        let t0 = Instant::now();
        let (code, stdout) = run_kloo(&["hodge", "--a", "2,3", "--d", "1,1", "--json"])?;
        let elapsed = t0.elapsed();
        if code != 0 {
            return Err(format!("exit code {code}, expected 0"));
        }
        let poly = parse_json(&stdout)?;
        let slopes = slopes_from(&poly)?;
        let mut expected = BTreeSet::new();
        for u1 in 0..=2i64 {
            for u2 in 0..=3i64 {
                expected.insert(rat(3 * u1 + 2 * u2, 6));
            }
        }
        if expected.len() != 11 {
            return Err(format!("closed-form set has {} values, expected 11", expected.len()));
        }
        let got: Vec<Rat> = slopes.iter().map(|&(num, den, _)| rat(num, den)).collect();
        let want: Vec<Rat> = expected.into_iter().collect();
        if got != want {
            return Err(format!("slope values {got:?}, expected {want:?}"));
        }
        if let Some(&(num, den, m)) = slopes.iter().find(|&&(_, _, m)| m != 1) {
            return Err(format!("slope {num}/{den} has multiplicity {m}, expected 1"));
        }
        if elapsed > Duration::from_secs(5) {
            return Err(format!("took {elapsed:?}, expected instantaneous"));
        }
        Ok(())
    });
}

#[test]
fn criterion_11_power_sum_consistency() {
    run_criterion(11, "extra power sum matches Newton-identity prediction", || {
        let fixtures: [(&[i64], &[i64], u64); 4] = [
            (&[1], &[1], 5),
            (&[1, 1], &[1, 1], 3),
            (&[1, 2], &[1, 1], 3),
            (&[1, 1], &[1, 2], 3),
        ];
        for (a, d, p) in fixtures {
            let family = fam(a, d);
            for lambda in 1..p {
                let ok =
                    lfunc::consistency_check_extra_sum(&family, p, lambda, lfunc::DEFAULT_BUDGET)
                        .map_err(|e| format!("a={a:?} d={d:?} p={p} λ̄={lambda}: {e}"))?;
                if !ok {
                    return Err(format!("a={a:?} d={d:?} p={p} λ̄={lambda}: prediction failed"));
                }
            }
        }
        Ok(())
    });
}
