//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits non-zero when any criterion fails, except the r = 2 product on M_{1,2},
//! whose literal form is known not to hold (see README). That line is
//! printed as FAIL and tolerated only when the measured product matches
//! the documented one exactly.

#[path = "../../core/tests/common/mod.rs"]
#[allow(dead_code)]
mod oracle;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use taut_core::applications::{chi, chi_recursion_check, dyz_identity_check, mv, stable_types, ChiRoute, MvRoute};
use taut_core::exact::ExactRational;
use taut_core::graphs::{automorphism_order, enumerate_stable_graphs, enumerate_weightings};
use taut_core::hodge::{lambda_psi_integral, lambda_total_psi_integral};
use taut_core::intersection::{dimension, psi_integral};
use taut_core::invariants::{check_counterexample_footnote, run_grid, GridConfig};
use taut_core::omega::{omega_integral, OmegaSpec};
use taut_core::poly::TautPolynomial;

type Outcome = Result<String, String>;

fn q(p: i64, d: i64) -> ExactRational {
    ExactRational::new(p, d)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn three_routes() -> Outcome {
    let types = stable_types(6);
    for &(g, n) in &types {
        let hz = chi(g, n, ChiRoute::HarerZagier).map_err(err)?.value;
        let hs = chi(g, n, ChiRoute::HodgeSum).map_err(err)?.value;
        let om = chi(g, n, ChiRoute::Omega).map_err(err)?.value;
        ensure(hz == hs && hs == om, || format!("({g},{n}): hz={hz} hodge={hs} omega={om}"))?;
    }
    let pinned = [((0, 3), q(1, 1)), ((1, 1), q(-1, 12)), ((2, 0), q(-1, 240)), ((3, 0), q(1, 1008))];
    for ((g, n), want) in pinned {
        let got = chi(g, n, ChiRoute::Omega).map_err(err)?.value;
        ensure(got == want, || format!("chi({g},{n}) = {got}, want {want}"))?;
    }
    Ok(format!("{} types, chi(1,1)=-1/12, chi(2,0)=-1/240, chi(3,0)=1/1008", types.len()))
}

fn calibration() -> Outcome {
    let l1 = lambda_psi_integral(1, &[0], 1).map_err(err)?;
    let lm = lambda_total_psi_integral(1, &[0], &-ExactRational::one()).map_err(err)?;
    // the same number through the r = 1 Omega class at x = 1
    let spec = OmegaSpec::new(1, 1, vec![1], ExactRational::one());
    let om = omega_integral(1, 1, &spec, &TautPolynomial::one(1, 1)).map_err(err)?;
    ensure(l1 == q(1, 24), || format!("int lambda_1 = {l1}"))?;
    ensure(lm == q(-1, 24), || format!("int Lambda(-1) = {lm}"))?;
    ensure(om == q(-1, 24), || format!("int Omega(1,1;1) = {om}"))?;
    Ok("lambda_1 = 1/24, Lambda(-1) = -1/24 (Hodge and Omega)".into())
}

fn recursion() -> Outcome {
    let types = stable_types(5);
    for &(g, n) in &types {
        let rep = chi_recursion_check(g, n).map_err(err)?;
        ensure(rep.pass, || format!("({g},{n}): expected {} got {}", rep.expected, rep.got))?;
    }
    Ok(format!("{} steps on every route", types.len()))
}

fn dyz() -> Outcome {
    let rep = dyz_identity_check(2).map_err(err)?;
    ensure(rep.pass && rep.expected == "-1/240", || format!("expected {} got {}", rep.expected, rep.got))?;
    Ok(format!("g=2 sum = {}", rep.got))
}

fn volumes() -> Outcome {
    let types = stable_types(5);
    for &(g, n) in &types {
        let a = mv(g, n, MvRoute::Omega).map_err(err)?.value;
        let b = mv(g, n, MvRoute::HodgeSum).map_err(err)?.value;
        ensure(a == b, || format!("({g},{n}): omega={a} hodge={b}"))?;
    }
    Ok(format!("{} types agree", types.len()))
}

fn grid() -> Outcome {
    let reports = run_grid(&GridConfig::small());
    if let Some(bad) = reports.iter().find(|r| !r.pass) {
        return Err(format!("{} {} expected={} got={}", bad.check, bad.parameters, bad.expected, bad.got));
    }
    let kinds: BTreeSet<&str> = reports.iter().map(|r| r.check.as_str()).collect();
    let pairings: usize = reports.iter().map(|r| r.pairings).sum();
    Ok(format!("{} checks, {} pairings, kinds: {}", reports.len(), pairings, kinds.into_iter().collect::<Vec<_>>().join(",")))
}

/// Literal product, with the two properties that do hold asserted
/// separately. Returns (literal outcome, deviation is the documented one).
fn footnote() -> (Outcome, bool) {
    let mut documented = true;
    let mut literal_ok = true;
    let mut detail = Vec::new();
    for x in [q(1, 1), q(2, 1), q(1, 2)] {
        let fo = match check_counterexample_footnote(&x) {
            Ok(fo) => fo,
            Err(e) => return (Err(e.to_string()), false),
        };
        literal_ok &= fo.unnormalized.pass;
        // degree-0 part of each factor is r^{2g-1} = 2; the kappa_2 part is exact
        let x2 = &x * &x;
        documented &= fo.naive_identity_fails.pass
            && fo.odd_degrees_vanish.pass
            && fo.unnormalized_vs_unit4.pass
            && fo.degree2_unnormalized == -(q(3, 4) * &x2) * q(1, 24)
            && fo.degree2_normalized == -(q(3, 16) * &x2) * q(1, 24);
        detail.push(format!("x={x}: naive identity fails={}, odd degrees vanish={}", fo.naive_identity_fails.pass, fo.odd_degrees_vanish.pass));
        if !fo.unnormalized.pass {
            detail.push(format!("literal pairing expected={} got={}", fo.unnormalized.expected, fo.unnormalized.got));
        }
    }
    let text = detail.join("; ");
    (if literal_ok { Ok(text) } else { Err(text) }, documented)
}

fn oracles() -> Outcome {
    let perms: Vec<Vec<Vec<usize>>> = (0..=6).map(oracle::all_perms).collect();
    let mut graphs = 0;
    for (g, n) in stable_types(4) {
        let fast = enumerate_stable_graphs(g, n).map_err(err)?;
        let keys: BTreeSet<String> = fast.iter().map(|x| oracle::min_key(x, &perms[x.num_vertices()])).collect();
        ensure(keys.len() == fast.len(), || format!("duplicate classes at ({g},{n})"))?;
        ensure(keys == oracle::brute_force(g, n), || format!("graph sets differ at ({g},{n})"))?;
        for gr in fast.iter() {
            let (a, b) = (automorphism_order(gr), oracle::brute_aut(gr));
            ensure(a == b, || format!("|Aut {gr}| = {a}, brute force {b}"))?;
        }
        graphs += fast.len();
    }
    let mut weightings = 0;
    for (g, n) in stable_types(4).into_iter().filter(|&(_, n)| n > 0) {
        for r in 1..=4u32 {
            let s = 1i64;
            let mut a = vec![1i64; n];
            a[0] = ((2 * g as i64 - 2 + n as i64) * s - (n as i64 - 1)).rem_euclid(r as i64);
            for gr in enumerate_stable_graphs(g, n).map_err(err)?.iter() {
                let w = enumerate_weightings(gr, r, s, &a).map_err(err)?;
                let want = (r as usize).pow(gr.h1() as u32);
                ensure(w.len() == want, || format!("{gr} r={r}: {} weightings, want {want}", w.len()))?;
                let got: Vec<Vec<u32>> = w.into_iter().map(|w| w.half_edges).collect();
                ensure(got == oracle::brute_weightings(gr, r, s, &a), || format!("{gr} r={r}: weighting sets differ"))?;
                weightings += 1;
            }
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..50 {
        let g = rng.gen_range(0..=3u32);
        let n = rng.gen_range(if g == 0 { 3 } else { 1 }..=5usize);
        let mut d = vec![0u32; n];
        for _ in 0..dimension(g, n) {
            let i = rng.gen_range(0..n);
            d[i] += 1;
        }
        let mut with0 = d.clone();
        with0.push(0);
        let string = psi_integral(g, &with0).map_err(err)?;
        let mut sum = ExactRational::zero();
        for j in 0..n {
            if d[j] > 0 {
                let mut e = d.clone();
                e[j] -= 1;
                sum += psi_integral(g, &e).map_err(err)?;
            }
        }
        ensure(string == sum, || format!("string fails at g={g} d={d:?}"))?;
        let mut with1 = d.clone();
        with1.push(1);
        let dil = psi_integral(g, &with1).map_err(err)?;
        let factor = ExactRational::from(2 * g as i64 - 2 + n as i64);
        let base = psi_integral(g, &d).map_err(err)?;
        ensure(dil == &factor * &base, || format!("dilaton fails at g={g} d={d:?}"))?;
    }
    Ok(format!("{graphs} graphs, {weightings} weighted graphs, 50 random string/dilaton indices"))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_taut");
    let run = |threads: &str| -> Result<Vec<u8>, String> {
        let out = Command::new(bin)
            .args(["--no-cache", "--threads", threads, "table", "--dimmax", "4"])
            .output()
            .map_err(err)?;
        ensure(out.status.success(), || format!("taut exited with {}", out.status))?;
        Ok(out.stdout)
    };
    let a = run("1")?;
    let b = run("1")?;
    let c = run("8")?;
    ensure(!a.is_empty(), || "empty table".into())?;
    ensure(a == b, || "two runs differ".into())?;
    ensure(a == c, || "threads 1 and 8 differ".into())?;
    Ok(format!("{} bytes identical over 3 runs", a.len()))
}

/// Runs one criterion and prints its line; true on pass.
fn line(id: u32, name: &str, f: fn() -> Outcome) -> bool {
    let t = Instant::now();
    let res = f();
    let secs = t.elapsed().as_secs_f64();
    match &res {
        Ok(msg) => println!("PASS {id} {name}: {msg} [{secs:.1}s]"),
        Err(msg) => println!("FAIL {id} {name}: {msg} [{secs:.1}s]"),
    }
    res.is_ok()
}

fn main() {
    let mut failed = false;
    failed |= !line(1, "euler characteristic, three routes", three_routes);
    failed |= !line(2, "hodge calibration", calibration);
    failed |= !line(3, "euler characteristic recursion", recursion);
    failed |= !line(4, "dyz identity", dyz);
    failed |= !line(5, "masur-veech, two routes", volumes);
    failed |= !line(6, "omega identity suite", grid);
    let t = Instant::now();
    let (res, documented) = footnote();
    let secs = t.elapsed().as_secs_f64();
    match res {
        Ok(msg) => println!("PASS 7 r = 2 counterexample product: {msg} [{secs:.1}s]"),
        Err(msg) => {
            println!("FAIL 7 r = 2 counterexample product: {msg} [{secs:.1}s]");
            if documented {
                println!("  known deviation: each factor has degree-0 part 2, so the product is 4 - 3/4 x^2 kappa_2; normalized it is 1 - 3/16 x^2 kappa_2. The naive identity fails and odd degrees vanish as asserted.");
            } else {
                failed = true;
            }
        }
    }
    failed |= !line(8, "infrastructure oracles", oracles);
    failed |= !line(9, "determinism", determinism);
    if failed {
        std::process::exit(1);
    }
}
