//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wafom::bounds::{in_staircase, meets_threshold, within_theorem_scale};
use wafom::merit::wafom_exact_auto;
use wafom::netfile::{parse_net, write_net};
use wafom::qmc::{
    batch_rng, qmc_integrate, random_net_with, spearman, to_points, FunctionKind, TestFunction,
};
use wafom::*;

const L: Limits = Limits::DEFAULT;

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn with_budget(out: Outcome, elapsed: Duration, budget: Duration) -> Outcome {
    if out.ok && elapsed > budget {
        return fail(format!(
            "{} but took {:.1?} (budget {:.0?})",
            out.detail, elapsed, budget
        ));
    }
    out
}

/// The 200 random nets shared by criteria 1 and 3.
fn criterion1_nets() -> Vec<Subspace> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let shapes: Vec<(usize, usize)> = (1..=3)
        .flat_map(|s| (2..=6).map(move |n| (s, n)))
        .filter(|&(s, n)| s * n <= 18)
        .collect();
    (0..200)
        .map(|_| {
            let (s, n) = shapes[rng.gen_range(0..shapes.len())];
            let m = rng.gen_range(0..=s * n);
            random_net_with(s, n, m, &mut rng).unwrap()
        })
        .collect()
}

fn criterion1(nets: &[Subspace]) -> Outcome {
    let mut compared = 0;
    let mut worst: f64 = 0.0;
    for p in nets {
        let dual = wafom_dual(p, L).unwrap().float_value;
        let points = wafom_points(p, L).unwrap().float_value;
        let a = wafom_exact(p, ExactRoute::DualEnum, L).unwrap();
        let b = wafom_exact(p, ExactRoute::PointSum, L).unwrap();
        if a != b {
            return fail(format!("exact routes differ on {p:?}: {a} vs {b}"));
        }
        if p.is_full() {
            if dual != 0.0 || points != 0.0 || !a.is_zero() {
                return fail(format!(
                    "full space must have WAFOM 0, got {dual} / {points} / {a}"
                ));
            }
            continue;
        }
        if dual >= 1e-12 {
            compared += 1;
            let rel = (points - dual).abs() / dual;
            worst = worst.max(rel);
            if rel > 1e-10 {
                return fail(format!(
                    "point sum {points} vs dual {dual} (rel {rel:e}) on {p:?}"
                ));
            }
            let rel_exact = (a.to_f64() - dual).abs() / dual;
            if rel_exact > 1e-12 {
                return fail(format!(
                    "exact {a} vs dual float {dual} (rel {rel_exact:e})"
                ));
            }
        }
    }
    pass(format!(
        "{} nets, {compared} float comparisons, worst relative gap {worst:.2e}",
        nets.len()
    ))
}

fn criterion2_nets() -> Vec<Subspace> {
    let mut out = Vec::new();
    for (s, n) in [(1, 3), (1, 4), (2, 2), (2, 3), (3, 2)] {
        for m in 1..s * n {
            out.extend(enumerate_subspaces(s, n, m, L).unwrap());
        }
    }
    out
}

fn criterion2(nets: &[Subspace]) -> Outcome {
    let mut violations = 0;
    for p in nets {
        let delta = min_weight(&p.dual(), L).unwrap();
        let bound = delta_upper_bound(p.s() as u64, p.dim() as u64).unwrap();
        if delta > bound {
            violations += 1;
        }
    }
    if violations > 0 {
        return fail(format!(
            "{violations} violations of delta <= sq(q+1)/2 + (q+1)(r+1)"
        ));
    }
    pass(format!("{} subspaces, zero violations", nets.len()))
}

fn criterion3(nets1: &[Subspace], nets2: &[Subspace]) -> Outcome {
    let mut checked = 0;
    for p in nets1.iter().chain(nets2) {
        if p.is_full() {
            continue;
        }
        let delta = min_weight(&p.dual(), L).unwrap();
        let w = wafom_exact_auto(p, L).unwrap();
        if w < DyadicRational::pow2_neg(delta) {
            return fail(format!("WAFOM {w} < 2^-{delta} on {p:?}"));
        }
        checked += 1;
    }
    pass(format!(
        "{checked} proper subspaces, WAFOM >= 2^-delta exactly"
    ))
}

fn criterion4() -> Outcome {
    let c_prime = 1.0;
    let bound = DyadicRational::pow2_neg(16);
    let mut total = 0;
    for n in 5..=8 {
        for i in 0..10_000u64 {
            let p = random_net_with(1, n, 4, &mut batch_rng(0xC0FFEE + n as u64, i)).unwrap();
            let r = verify_net(&p, c_prime, L).unwrap();
            if !r.threshold_ok || !r.theorem_ok || r.wafom_log2 < -16.0 || r.wafom_exact < bound {
                return fail(format!("n={n} net {i}: {r:?}"));
            }
            total += 1;
        }
    }
    for p in enumerate_subspaces(1, 5, 4, L).unwrap() {
        let r = verify_net(&p, c_prime, L).unwrap();
        if !r.theorem_ok || r.wafom_exact < bound {
            return fail(format!("exhaustive net violates the bound: {r:?}"));
        }
        total += 1;
    }
    pass(format!(
        "{total} nets (s=1, m=4, n=5..8), all WAFOM >= 2^-16"
    ))
}

fn criterion5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for k in 0..500 {
        let s = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=6);
        if s * n < 2 {
            continue;
        }
        let m = rng.gen_range(1..s * n);
        let p = random_net_with(s, n, m, &mut rng).unwrap();
        let x = witness(&p).unwrap();
        let qr = qr_decompose(m as u64, s as u64).unwrap();
        let bound = delta_upper_bound(s as u64, m as u64).unwrap();
        let in_dual = p.basis().iter().all(|b| !inner(&x, b));
        let in_w = (0..s).all(|i| (0..n).all(|j| !x.get(i, j) || in_staircase(&qr, i, j)));
        let delta = min_weight(&p.dual(), L).unwrap();
        if x.is_zero() || !in_dual || !in_w || mu(&x) > bound || delta > mu(&x) {
            return fail(format!(
                "config {k} (s={s}, n={n}, m={m}): witness {x:?} fails"
            ));
        }
    }
    pass("500 configurations, witness nonzero, in P-perp and W, delta <= mu <= bound")
}

fn criterion6() -> Outcome {
    let mut checked = 0;
    for &c in &[0.51, 0.6, 0.75, 1.0, 2.0, 5.0] {
        for s in 1..=8u64 {
            for m in 1..=64u64 {
                if !meets_threshold(c, m, s).unwrap() {
                    continue;
                }
                let bound = delta_upper_bound(s, m).unwrap();
                if !within_theorem_scale(c, bound, m, s).unwrap() {
                    return fail(format!("C'={c} s={s} m={m}: bound {bound} > C' m^2/s"));
                }
                checked += 1;
            }
        }
    }
    let t1 = theorem_threshold(1.0).unwrap();
    let t2 = theorem_threshold(0.75).unwrap();
    if (t1 - 3.5615528).abs() > 1e-6 || (t2 - 6.6055513).abs() > 1e-6 {
        return fail(format!("threshold values {t1}, {t2}"));
    }
    pass(format!(
        "{checked} grid points above threshold, thresholds {t1:.7} and {t2:.7}"
    ))
}

fn criterion7(extra_nets: &[Subspace]) -> Outcome {
    for p in extra_nets {
        let pts = to_points(p, L).unwrap();
        let f = TestFunction::new(FunctionKind::Const1, p.s());
        if qmc_integrate(&pts, &f).unwrap() != 1.0 {
            return fail(format!("constant function not exact on {p:?}"));
        }
    }
    for n in 1..=12 {
        let pts = to_points(&Subspace::full(1, n), L).unwrap();
        let got = qmc_integrate(&pts, &TestFunction::new(FunctionKind::Linear, 1)).unwrap();
        let want = ((1u64 << n) - 1) as f64 / (1u64 << (n + 1)) as f64;
        if got != want {
            return fail(format!("linear on full net n={n}: {got} != {want}"));
        }
    }
    let f = TestFunction::new(FunctionKind::Product, 2);
    let mut wafoms = Vec::new();
    let mut errors = Vec::new();
    for i in 0..50 {
        let p = random_net_with(2, 6, 6, &mut batch_rng(0x5eed_0007, i)).unwrap();
        let pts = to_points(&p, L).unwrap();
        wafoms.push(wafom_exact_auto(&p, L).unwrap().to_f64());
        errors.push((qmc_integrate(&pts, &f).unwrap() - 0.25).abs());
    }
    let rho = spearman(&wafoms, &errors);
    if rho.is_nan() || rho < 0.0 {
        return fail(format!("Spearman correlation {rho} < 0"));
    }
    pass(format!(
        "{} nets exact for f=1, linear exact for n=1..12, Spearman(WAFOM, error) = {rho:.3}",
        extra_nets.len()
    ))
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_wafom"))
        .args(args)
        .output()
        .expect("run wafom binary")
}

fn criterion8() -> Outcome {
    for i in 0..200 {
        let mut rng = batch_rng(0x5eed_0008, i);
        let s = rng.gen_range(1..=4);
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(0..=s * n);
        let p = random_net_with(s, n, m, &mut rng).unwrap();
        let text = write_net(&p);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.txt");
        std::fs::write(&path, &text).unwrap();
        let back = wafom::netfile::read_net_file(&path).unwrap();
        if back != p || parse_net(&text).unwrap().basis() != p.basis() {
            return fail(format!("round trip changed {p:?}"));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("verify{run}.csv"));
        let best = dir.path().join(format!("best{run}.txt"));
        let search = dir.path().join(format!("search{run}.csv"));
        let a = run_cli(&[
            "verify",
            "--gen",
            "2,4,5,40",
            "--seed",
            "17",
            "--out",
            out.to_str().unwrap(),
        ]);
        let b = run_cli(&[
            "search",
            "--gen",
            "1,8,4,200",
            "--seed",
            "17",
            "--out",
            search.to_str().unwrap(),
            "--net-out",
            best.to_str().unwrap(),
        ]);
        if !a.status.success() || !b.status.success() {
            return fail(format!("cli failed: {a:?} {b:?}"));
        }
        outputs.push((
            std::fs::read(&out).unwrap(),
            std::fs::read(&search).unwrap(),
            std::fs::read(&best).unwrap(),
        ));
    }
    if outputs[0] != outputs[1] {
        return fail("outputs differ between identical runs");
    }
    let best = parse_net(std::str::from_utf8(&outputs[0].2).unwrap()).unwrap();
    if write_net(&best).as_bytes() != outputs[0].2.as_slice() {
        return fail("written best net is not canonical");
    }
    pass("200 net files round-trip; verify/search CSV and best net byte-identical across runs")
}

fn main() {
    let mut failures = 0;
    let mut report =
        |id: usize, name: &str, start: Instant, budget: Option<Duration>, out: Outcome| {
            let elapsed = start.elapsed();
            let out = match budget {
                Some(b) => with_budget(out, elapsed, b),
                None => out,
            };
            let tag = if out.ok { "PASS" } else { "FAIL" };
            println!(
                "[{tag}] criterion {id}: {name} ({:.2?}): {}",
                elapsed, out.detail
            );
            if !out.ok {
                failures += 1;
            }
        };

    let t = Instant::now();
    let nets1 = criterion1_nets();
    let out = criterion1(&nets1);
    report(
        1,
        "WAFOM dual/point/exact agreement",
        t,
        Some(Duration::from_secs(60)),
        out,
    );

    let t = Instant::now();
    let nets2 = criterion2_nets();
    let out = criterion2(&nets2);
    report(
        2,
        "minimum weight upper bound, exhaustive",
        t,
        Some(Duration::from_secs(300)),
        out,
    );

    let t = Instant::now();
    report(
        3,
        "WAFOM >= 2^-delta, exact",
        t,
        None,
        criterion3(&nets1, &nets2),
    );

    let t = Instant::now();
    report(
        4,
        "lower bound at C'=1, s=1, m=4",
        t,
        Some(Duration::from_secs(300)),
        criterion4(),
    );

    let t = Instant::now();
    report(5, "witness correctness", t, None, criterion5());

    let t = Instant::now();
    report(6, "bound algebra over the C' grid", t, None, criterion6());

    let t = Instant::now();
    report(7, "QMC harness sanity", t, None, criterion7(&nets1));

    let t = Instant::now();
    report(8, "round trip and determinism", t, None, criterion8());

    if failures > 0 {
        println!("{failures} criterion(s) failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
