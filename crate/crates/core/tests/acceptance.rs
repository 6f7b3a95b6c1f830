//! Acceptance suite: one PASS/FAIL line per criterion A1 to A11.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use egue::closed_forms::{
    r1_moments, r1_sigma11, r1_sigma22_exact, r1_sigma22_self_exact, r2_moments, r3_rrr_moments, SignConvention,
    VALUE_KEYS,
};
use egue::fock_sim::{run_ensemble, McRun};
use egue::moments::f_of_m;
use egue::scan::three_row;
use egue::young::{casimir_su3, dim_u, partitions};
use egue::{Channel, EnsembleSpec, Engine, IrrepState, Partition, Statistics};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

type Criterion = (&'static str, fn() -> Outcome);
type Family = (&'static str, fn(u32) -> Partition);
type Points = Vec<(f64, String)>;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}

fn p(s: &str) -> Partition {
    s.parse().unwrap()
}

fn boson(omega: usize, r: u32) -> EnsembleSpec {
    EnsembleSpec::unit(omega, r, Statistics::Boson).unwrap()
}

fn state(spec: &EnsembleSpec, f: &Partition) -> IrrepState {
    spec.state(f.clone()).unwrap()
}

fn binom(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn generic_key(e: &Engine, f: &Partition, omega: usize, key: &str) -> f64 {
    let ch = |s: &str| if s == "sym" { Channel::Sym } else { Channel::Antisym };
    let parts: Vec<&str> = key.split('_').collect();
    match parts.as_slice() {
        ["p", c] => e.p_term(ch(c), f).to_f64().unwrap(),
        ["q", c, nu] => e.q_nu(ch(c), nu.parse().unwrap(), f, omega).unwrap(),
        ["r", nu] => e.r_nu(nu.parse().unwrap(), f, omega).unwrap(),
        _ => unreachable!(),
    }
}

/// ⟨H²⟩ for one-row irreps equals λ²·C(m,2)·C(Ω+m−1,2).
fn a1() -> Outcome {
    let t = Instant::now();
    let e = Engine::new();
    let mut worst = 0.0f64;
    for omega in 4..=10usize {
        let spec = boson(omega, 1);
        for m in 2..=12u32 {
            let h2 = e.h2_average(&spec, &state(&spec, &Partition::row(m))).unwrap();
            let want = binom(m as u64, 2) * binom(omega as u64 + m as u64 - 1, 2);
            worst = worst.max(rel(h2, want));
        }
    }
    let dt = t.elapsed();
    Outcome::new(worst <= 1e-10 && dt < Duration::from_secs(1), format!("max rel err {worst:e}, {dt:?}"))
}

fn a2() -> Outcome {
    let e = Engine::new();
    let mut worst = 0.0f64;
    for omega in 4..=10usize {
        let spec = boson(omega, 1);
        let mut pairs: Vec<(u32, u32)> = (2..=12).map(|m| (m, m)).collect();
        pairs.extend([(4, 6), (10, 15)]);
        for (m, mp) in pairs {
            let s = e
                .sigma11(&spec, &state(&spec, &Partition::row(m)), &state(&spec, &Partition::row(mp)))
                .unwrap();
            worst = worst.max(rel(s, r1_sigma11(omega, m, mp)));
        }
    }
    let spec = boson(6, 1);
    let spot = e.sigma11(&spec, &state(&spec, &p("4")), &state(&spec, &p("6"))).unwrap();
    let ok = worst <= 1e-10 && (spot - 0.010153).abs() <= 1e-6;
    Outcome::new(ok, format!("max rel err {worst:e}, Σ11(6;4,6) = {spot:.8}"))
}

fn a3() -> Outcome {
    let mut worst = 0.0f64;
    for omega in 4..=10usize {
        for m in 2..=12u32 {
            let a = r1_sigma22_exact(omega, m, m);
            let b = r1_sigma22_self_exact(omega, m);
            let d = ((&a - &b) / &b).to_f64().unwrap().abs();
            worst = worst.max(d);
        }
    }
    let oracle = r1_sigma22_exact(6, 4, 4).to_f64().unwrap();
    let e = Engine::new();
    let spec = boson(6, 1);
    let generic = e.sigma22(&spec, &state(&spec, &p("4")), &state(&spec, &p("4"))).unwrap();
    let ok = worst <= 1e-12 && (generic - 5.156281e-3).abs() <= 1e-7 && rel(generic, oracle) <= 1e-10;
    Outcome::new(
        ok,
        format!("bracket vs Λ-form max rel {worst:e}; Σ22(6;4,4) = {generic:.10}"),
    )
}

fn a4() -> Outcome {
    let e = Engine::new();
    let mut worst = 0.0f64;
    for r in 1..=4u32 {
        for omega in 5..=9usize {
            let f = Partition::new(vec![r, r, r]).unwrap();
            let closed = r3_rrr_moments(omega, r).unwrap();
            for key in VALUE_KEYS {
                if let Some(want) = closed.get(key) {
                    let got = generic_key(&e, &f, omega, key);
                    worst = worst.max(if want == 0.0 { got.abs() } else { rel(got, want) });
                }
            }
            let (rr, o) = (r as f64, omega as f64);
            let eq40 = 1.5 * rr * (rr - 1.0) * (o + rr - 3.0) * (o + rr - 4.0)
                + 0.75 * rr * (rr + 1.0) * (o + rr - 2.0) * (o + rr - 3.0);
            let spec = boson(omega, 3);
            worst = worst.max(rel(e.h2_average(&spec, &state(&spec, &f)).unwrap(), eq40));
        }
    }
    let f = p("1,1,1");
    let q1 = e.q_nu(Channel::Antisym, 1, &f, 6).unwrap();
    let q2 = e.q_nu(Channel::Antisym, 2, &f, 6).unwrap();
    let spec = boson(6, 3);
    let h2 = e.h2_average(&spec, &state(&spec, &f)).unwrap();
    let ok = worst <= 1e-10 && q1 == 157.5 && q2 == 283.5 && h2 == 30.0;
    Outcome::new(ok, format!("max rel err {worst:e}; Q1={q1} Q2={q2} h2={h2}"))
}

fn a5() -> Outcome {
    let e = Engine::new();
    let mut worst = 0.0f64;
    for omega in [5usize, 6, 8] {
        for m in 2..=10u32 {
            let two = r2_moments(omega, m, m, SignConvention::PMagnitude).unwrap();
            let one = r1_moments(omega, m).unwrap();
            let f = Partition::row(m);
            for key in VALUE_KEYS {
                let (a, b, g) = (two.get(key).unwrap(), one.get(key).unwrap(), generic_key(&e, &f, omega, key));
                worst = worst.max((a - b).abs() / b.abs().max(1.0)).max((a - g).abs() / g.abs().max(1.0));
            }
        }
        let o = omega as f64;
        let pair = r2_moments(omega, 2, 0, SignConvention::PMagnitude).unwrap();
        worst = worst.max(rel(pair.get("q_anti_1").unwrap(), o * o - 1.0));
        worst = worst.max(rel(generic_key(&e, &p("1,1"), omega, "q_anti_1"), o * o - 1.0));
    }
    let pm = r2_moments(6, 4, 4, SignConvention::PMagnitude).unwrap();
    let ap = r2_moments(6, 4, 4, SignConvention::AsPrinted).unwrap();
    let (q1, q2) = (pm.get("q_sym_1").unwrap(), pm.get("q_sym_2").unwrap());
    let signed = ap.get("q_sym_1").unwrap();
    let ok = worst <= 1e-10 && rel(q1, 787.5) <= 1e-12 && rel(q2, 3712.5) <= 1e-12 && signed != q1;
    Outcome::new(ok, format!("max rel err {worst:e}; Q1={q1} Q2={q2}; AS_PRINTED Q1={signed}"))
}

fn a6() -> Outcome {
    let e = Engine::new();
    let mut n = 0;
    let mut bad = Vec::new();
    for m in 2..=15u32 {
        let want = BigRational::from_integer(BigInt::from(f_of_m(m)));
        for f in partitions(m, 3) {
            n += 1;
            if e.p_term(Channel::Sym, &f) + e.p_term(Channel::Antisym, &f) != want {
                bad.push(f.to_string());
            }
        }
    }
    Outcome::new(bad.is_empty(), format!("{n} irreps, failures: {bad:?}"))
}

fn a7() -> Outcome {
    let t = Instant::now();
    let run = McRun::new(boson(4, 1), 3, 500, 42);
    let est = run_ensemble(&run).unwrap();
    let b = &est.blocks[0];
    let z = (b.h2_mean - 45.0) / b.h2_se;
    let dt = t.elapsed();
    Outcome::new(
        z.abs() <= 3.0 && dt < Duration::from_secs(30),
        format!("h2 = {:.4} ± {:.4}, z = {z:.3}, {dt:?}", b.h2_mean, b.h2_se),
    )
}

/// Block dimensions exact, block ⟨H²⟩ within 3 s.e., and optionally
/// block-pair Σ₂₂ within |z| ≤ 4 against the engine.
fn mc_blocks(omega: usize, r: u32, m: u32, reals: usize, seed: u64, dims: &[(&str, usize)], pairs: bool) -> Outcome {
    let t = Instant::now();
    let spec = boson(omega, r);
    let est = run_ensemble(&McRun::new(spec.clone(), m, reals, seed)).unwrap();
    let e = Engine::new();
    let mut ok = true;
    let mut notes = Vec::new();
    let got: Vec<(String, usize)> = est.blocks.iter().map(|b| (b.irrep.to_string(), b.block_dim)).collect();
    let want: Vec<(String, usize)> = dims.iter().map(|(f, d)| (f.to_string(), *d)).collect();
    if got != want {
        ok = false;
        notes.push(format!("dims {got:?}"));
    }
    let mut zmax = 0.0f64;
    for b in &est.blocks {
        let st = state(&spec, &b.irrep);
        let h2 = e.h2_average(&spec, &st).unwrap();
        let zh = (b.h2_mean - h2) / b.h2_se;
        let zc = b.centroid_mean / b.centroid_se;
        zmax = zmax.max(zh.abs()).max(zc.abs());
        ok &= zh.abs() <= 3.0 && zc.abs() <= 3.0;
    }
    notes.push(format!("block |z| max {zmax:.3}"));
    if pairs {
        let mut z22 = 0.0f64;
        for pr in &est.pairs {
            let s = e.sigma22(&spec, &state(&spec, &pr.a), &state(&spec, &pr.b)).unwrap();
            let z = (pr.sigma22 - s) / pr.sigma22_se;
            z22 = z22.max(z.abs());
            ok &= z.abs() <= 4.0;
        }
        notes.push(format!("Σ22 pair |z| max {z22:.3}"));
    }
    let dt = t.elapsed();
    ok &= dt < Duration::from_secs(120);
    notes.push(format!("{dt:?}"));
    Outcome::new(ok, notes.join(", "))
}

fn a8() -> Outcome {
    let dim = |f: &str| (dim_u(&p(f), 3).unwrap() * dim_u(&p(f), 2).unwrap()).to_usize().unwrap();
    assert_eq!((dim("4"), dim("3,1"), dim("2,2")), (75, 45, 6));
    mc_blocks(3, 2, 4, 400, 7, &[("4", 75), ("3,1", 45), ("2,2", 6)], true)
}

fn a9() -> Outcome {
    let dim = |f: &str| (dim_u(&p(f), 4).unwrap() * dim_u(&p(f), 3).unwrap()).to_usize().unwrap();
    assert_eq!((dim("3"), dim("2,1"), dim("1,1,1")), (200, 160, 4));
    mc_blocks(4, 3, 3, 400, 11, &[("3", 200), ("2,1", 160), ("1,1,1", 4)], false)
}

fn a10() -> Outcome {
    let e = Engine::new();
    let spec = boson(6, 3);
    let width = |f: &Partition| e.h2_average(&spec, &state(&spec, f)).map(f64::sqrt);
    let families: [Family; 3] = [
        ("one", |m| Partition::row(m)),
        ("two", |m| Partition::new(vec![m.div_ceil(2), m / 2]).unwrap()),
        ("three", |m| Partition::new(three_row(m)).unwrap()),
    ];
    let mut fails = Vec::new();

    // Monotone in m, and one-row ≥ two-row ≥ three-row.
    for (name, fam) in &families {
        let w: Vec<f64> = (3..=15).map(|m| width(&fam(m)).unwrap()).collect();
        if !w.windows(2).all(|x| x[0] < x[1]) {
            fails.push(format!("{name}-row widths not increasing"));
        }
    }
    for m in 3..=15 {
        let w: Vec<f64> = families.iter().map(|(_, f)| width(&f(m)).unwrap()).collect();
        if !(w[0] >= w[1] && w[1] >= w[2]) {
            fails.push(format!("family ordering at m={m}: {w:?}"));
        }
    }
    // Width increasing in C₂[SU(3)] at fixed m.
    for m in [10u32, 15] {
        let pts: Vec<(i64, f64)> = partitions(m, 3)
            .into_iter()
            .filter_map(|f| width(&f).ok().map(|w| (casimir_su3(&f).unwrap(), w)))
            .collect();
        for a in &pts {
            for b in &pts {
                if a.0 < b.0 && a.1 >= b.1 {
                    fails.push(format!("m={m}: C2 {} width {} vs C2 {} width {}", a.0, a.1, b.0, b.1));
                }
            }
        }
    }
    // Correlation bands: (m, m') grids with m, m' ∈ [5, 15] per family, and
    // m = m' ∈ {10, 15} with fixed f_m against every ≤3-row f_m'.
    let (mut s11, mut s22): (Points, Points) = (Vec::new(), Vec::new());
    let mut record = |a: &Partition, b: &Partition| {
        let (sa, sb) = (state(&spec, a), state(&spec, b));
        if let Ok(x) = e.sigma11(&spec, &sa, &sb) {
            s11.push((x.sqrt(), format!("{a}|{b}")));
        }
        if let Ok(x) = e.sigma22(&spec, &sa, &sb) {
            s22.push((x.sqrt(), format!("{a}|{b}")));
        }
    };
    for (_, fam) in &families {
        for m in 5..=15 {
            for mp in 5..=15 {
                record(&fam(m), &fam(mp));
            }
        }
    }
    for m in [10u32, 15] {
        for (_, fam) in &families {
            for g in partitions(m, 3) {
                record(&fam(m), &g);
            }
        }
    }
    for v in [&mut s11, &mut s22] {
        v.sort_by(|a, b| a.1.cmp(&b.1));
        v.dedup_by(|a, b| a.1 == b.1);
    }
    let out_of = |v: &[(f64, String)], lo: f64, hi: f64| -> Vec<String> {
        v.iter().filter(|(x, _)| !(*x >= lo && *x <= hi)).map(|(x, k)| format!("{k}={x:.4}")).collect()
    };
    let bad11 = out_of(&s11, 0.10, 0.30);
    let bad22 = out_of(&s22, 0.05, 0.20);
    let span = |v: &[(f64, String)]| {
        let lo = v.iter().map(|x| x.0).fold(f64::INFINITY, f64::min);
        let hi = v.iter().map(|x| x.0).fold(0.0, f64::max);
        format!("[{lo:.4}, {hi:.4}]")
    };
    let bands = format!("√Σ11 range {} ({} pts), √Σ22 range {} ({} pts)", span(&s11), s11.len(), span(&s22), s22.len());
    if !bad11.is_empty() {
        fails.push(format!("√Σ11 outside [0.10,0.30]: {}", bad11.join(" ")));
    }
    if !bad22.is_empty() {
        fails.push(format!("√Σ22 outside [0.05,0.20]: {}", bad22.join(" ")));
    }
    let detail = if fails.is_empty() { bands } else { format!("{bands}; {}", fails.join("; ")) };
    Outcome::new(fails.is_empty(), detail)
}

fn a11() -> Outcome {
    let s = r1_sigma11(6, 10_000, 10_000);
    let limit = 1.0 / 21.0;
    Outcome::new(rel(s, limit) <= 0.01, format!("Σ11 = {s:.6}, limit {limit:.6}, rel {:.2e}", rel(s, limit)))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("A1", a1),
        ("A2", a2),
        ("A3", a3),
        ("A4", a4),
        ("A5", a5),
        ("A6", a6),
        ("A7", a7),
        ("A8", a8),
        ("A9", a9),
        ("A10", a10),
        ("A11", a11),
    ];
    let mut failed = 0;
    for (id, f) in criteria {
        let o = f();
        if !o.pass {
            failed += 1;
        }
        println!("{id} {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
