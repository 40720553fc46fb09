//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p permroots --test acceptance`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use permroots::asymptotics::{
    final_constant, transfer_sandwich, AsymptoticReport, DEFAULT_LOWER_TERMS,
};
use permroots::cli::{self, AsymJson, EnvelopeJson, ProbsTable};
use permroots::envelope::{exp_envelope, BoundConfig, Envelope};
use permroots::oracle::{count_by_cycle_types, counts_by_cycle_types, nth_power_image_count};
use permroots::rootgf::{
    build_b, build_p, build_p_counts, build_q1, build_q1_exp, build_q2, check_dominations,
    sected_bound, RootProblem,
};
use permroots::series::exp_sected;
use permroots::{FloatSeries, Rational, RationalSeries};

type Outcome = Result<String, String>;

fn q(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn prob(n: u64, order: usize) -> RootProblem {
    RootProblem::new(n, order).expect("n >= 2")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// 1. image count = cycle-type count = k! p_k, n in {2,3}, k <= 7.
fn three_way_equality() -> Outcome {
    for n in [2u64, 3] {
        let gf = build_p_counts(&prob(n, 7));
        for (k, gf_k) in gf.iter().enumerate() {
            let image = BigInt::from(nth_power_image_count(k, n).map_err(|e| e.to_string())?);
            let cycles = BigInt::from(count_by_cycle_types(k, n).map_err(|e| e.to_string())?);
            ensure(image == *gf_k && cycles == *gf_k, || {
                format!("n={n} k={k}: image={image} cycle_type={cycles} gf={gf_k}")
            })?;
        }
    }
    Ok("n in {2,3}, k <= 7 agree exactly".into())
}

const DEGREES: [u64; 5] = [2, 3, 4, 6, 12];

/// 2. cycle-type count = k! p_k, n in {2,3,4,6,12}, k <= 60.
fn cycle_types_match_gf() -> Outcome {
    let gfs: Vec<_> = DEGREES
        .iter()
        .map(|&n| build_p_counts(&prob(n, 60)))
        .collect();
    for k in 0..=60 {
        let counts = counts_by_cycle_types(k, &DEGREES).map_err(|e| e.to_string())?;
        for (i, &n) in DEGREES.iter().enumerate() {
            let c = BigInt::from(counts[i].clone());
            ensure(c == gfs[i][k], || {
                format!("n={n} k={k}: cycle_type={c} gf={}", gfs[i][k])
            })?;
        }
    }
    Ok("n in {2,3,4,6,12}, k <= 60 agree exactly".into())
}

/// 3. q1 from the Moebius product equals its exponential form, order 256.
fn moebius_identity() -> Outcome {
    for n in DEGREES {
        let pr = prob(n, 256);
        ensure(build_q1(&pr) == build_q1_exp(&pr), || {
            format!("n={n}: q1 constructions differ")
        })?;
    }
    Ok("order 256, n in {2,3,4,6,12}".into())
}

/// 4. q1 q2 >= p (order 256), q2 >= B (order 256 >= 128), exp(x^k/k!) >= exp_k(x)
///    for k = 2..6 (order 128); n in {2,6}.
fn dominations() -> Outcome {
    for n in [2u64, 6] {
        let report = check_dominations(&prob(n, 256));
        ensure(report.all_hold(), || format!("n={n}: {report:?}"))?;
        let pr = prob(n, 128);
        ensure(build_q2(&pr).dominates(&build_b(&pr)), || {
            format!("n={n}: q2 >= B fails at 128")
        })?;
    }
    for k in 2..=6usize {
        let ok = sected_bound(k, 128).dominates(&exp_sected(k, 1, &q(1, 1), 128));
        ensure(ok, || format!("exp(x^{k}/{k}!) does not dominate exp_{k}"))?;
    }
    Ok("all dominations hold exactly".into())
}

/// 5. f_m = 1/m^2: exp(f)_m m^2 <= exp_envelope(1, 2).C for m <= 512.
fn lemma_certification() -> Outcome {
    let f = RationalSeries::from_fn(512, |m| {
        if m == 0 {
            Rational::zero()
        } else {
            q(1, (m * m) as i64)
        }
    });
    let g = f.exp_series().map_err(|e| e.to_string())?;
    let bound = exp_envelope(&Envelope::new(q(1, 1), 2).unwrap(), &BoundConfig::default())
        .map_err(|e| e.to_string())?;
    ensure(bound.first_violation(&g).is_none(), || {
        "envelope violated".into()
    })?;
    let observed = (1..=512)
        .map(|m| (g[m].clone() * q((m * m) as i64, 1)).to_f64().unwrap())
        .fold(0.0, f64::max);
    Ok(format!(
        "max exp(f)_m m^2 = {observed:.6} <= C = {:.6e}",
        bound.constant().to_f64().unwrap()
    ))
}

/// 6. q1 * B = p exactly, order 128.
fn factorization_identity() -> Outcome {
    for n in DEGREES {
        let pr = prob(n, 128);
        ensure(&build_q1(&pr) * &build_b(&pr) == build_p(&pr), || {
            format!("n={n}: q1 B != p")
        })?;
    }
    Ok("order 128, n in {2,3,4,6,12}".into())
}

fn report(n: u64) -> Result<AsymptoticReport, String> {
    final_constant(n, 512, &BoundConfig::default()).map_err(|e| e.to_string())
}

/// 7. log-log slope over [256, 512] within 0.05 of (phi(n) - n)/n, n in {2,3,4}.
fn asymptotic_exponent() -> Outcome {
    let mut parts = Vec::new();
    for n in [2u64, 3, 4] {
        let r = report(n)?;
        let slope = r.fit_slope.ok_or("no fit")?;
        let target = r.exponent.to_f64().unwrap();
        ensure((slope - target).abs() <= 0.05, || {
            format!("n={n}: slope {slope:.4} vs {target:.4}")
        })?;
        parts.push(format!("n={n}: {slope:.4} vs {target:.4}"));
    }
    Ok(parts.join("; "))
}

/// 8. n = 2: p_512 sqrt(512) within 10% of the constant's midpoint, and
///    |r_512 - r_256| < |r_256 - r_128|.
fn asymptotic_constant() -> Outcome {
    let r = report(2)?;
    let mid = r.final_constant.midpoint();
    let r512 = r.ratio_at(512).unwrap();
    let r256 = r.ratio_at(256).unwrap();
    let r128 = r.ratio_at(128).unwrap();
    let rel = (r512 - mid).abs() / mid;
    ensure(rel <= 0.10, || {
        format!("r_512 = {r512:.6}, midpoint {mid:.6}, rel {rel:.4}")
    })?;
    ensure((r512 - r256).abs() < (r256 - r128).abs(), || {
        format!("no convergence trend: r128={r128} r256={r256} r512={r512}")
    })?;
    Ok(format!(
        "C in [{:.6}, {:.6}], r_512 = {r512:.6} (rel {rel:.4})",
        r.final_constant.lo, r.final_constant.hi
    ))
}

/// 9. Transfer sandwich on a_m = (m+1)^{-1/2}, b_m = (m+1)^{-3}.
fn transfer_sandwich_property() -> Outcome {
    let order = 2000;
    let a = FloatSeries::from_fn(order, |m| ((m + 1) as f64).powf(-0.5));
    let b = FloatSeries::from_fn(order, |m| ((m + 1) as f64).powi(-3));
    let c = &a * &b;
    let (alpha, beta) = (q(1, 2), q(3, 4));
    for m in [256usize, 1024, 2000] {
        let s = transfer_sandwich(&a, &b, &alpha, &beta, m, DEFAULT_LOWER_TERMS)
            .map_err(|e| e.to_string())?;
        let scaled = c[m] * (m as f64).sqrt();
        ensure(s.lower <= scaled && scaled <= s.upper, || {
            format!("m={m}: {} <= {scaled} <= {} fails", s.lower, s.upper)
        })?;
    }
    let total: f64 = b.coeffs().iter().sum();
    let scaled = c[2000] * 2000f64.sqrt();
    let rel = (scaled - total).abs() / total;
    ensure(rel < 0.05, || {
        format!("c_2000 sqrt(2000) = {scaled}, sum b = {total}")
    })?;
    Ok(format!(
        "sandwich holds; c_2000 sqrt(2000) = {scaled:.5} vs sum b = {total:.5}"
    ))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("permroots").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap())
}

/// 10. Deterministic, schema-valid output; exit 1 on corruption; exit 2 on usage errors.
fn cli_contract() -> Outcome {
    let commands: [&[&str]; 5] = [
        &["probs", "--n", "2", "--order", "4"],
        &["probs", "--n", "3", "--order", "10", "--format", "json"],
        &["verify", "--n", "2", "--max-k", "7", "--mode", "both"],
        &["asym", "--n", "2", "--order", "64"],
        &["envelope", "--c", "1", "--k", "2", "--order", "64"],
    ];
    for args in commands {
        let first = run_cli(args);
        let second = run_cli(args);
        ensure(first.0 == 0, || format!("{args:?} exited {}", first.0))?;
        ensure(first == second, || format!("{args:?} is not deterministic"))?;
    }

    let (_, csv) = run_cli(commands[0]);
    let counts: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    ensure(csv.starts_with("k,count,p_num,p_den,p_float\n"), || {
        "csv header".into()
    })?;
    ensure(counts == ["1", "1", "1", "3", "12"], || {
        format!("csv counts {counts:?}")
    })?;

    let (_, json) = run_cli(commands[1]);
    let table: ProbsTable = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    let p = build_p(&prob(3, 10));
    for rec in &table.records {
        let back = BigRational::new(rec.p_num.parse().unwrap(), rec.p_den.parse().unwrap());
        ensure(back == p[rec.k], || {
            format!("json round trip at k={}", rec.k)
        })?;
    }
    let (_, json) = run_cli(commands[3]);
    let asym: AsymJson = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    ensure(asym.exponent == "-1/2" && asym.ratios.len() == 64, || {
        "asym schema".into()
    })?;
    let (_, json) = run_cli(commands[4]);
    let env: EnvelopeJson = serde_json::from_str(&json).map_err(|e| e.to_string())?;
    ensure(env.certified, || "envelope not certified".into())?;

    let (code, _) = run_cli(&[
        "verify",
        "--n",
        "2",
        "--max-k",
        "7",
        "--mode",
        "both",
        "--corrupt-k",
        "5",
    ]);
    ensure(code == 1, || format!("corrupted verify exited {code}"))?;

    let usage: [&[&str]; 6] = [
        &["probs", "--n", "1", "--order", "4"],
        &["verify", "--n", "2", "--max-k", "5", "--mode", "nonsense"],
        &["asym", "--n", "0", "--order", "4"],
        &["envelope", "--c", "1", "--k", "1", "--order", "4"],
        &["envelope", "--c", "1/x", "--k", "2", "--order", "4"],
        &["bogus"],
    ];
    for args in usage {
        let (code, _) = run_cli(args);
        ensure(code == 2, || format!("{args:?} exited {code}, expected 2"))?;
    }
    Ok("determinism, schemas, exit codes 0/1/2".into())
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: Vec<Criterion> = vec![
        ("AC1 three-way exact equality", three_way_equality),
        (
            "AC2 cycle types vs generating function",
            cycle_types_match_gf,
        ),
        ("AC3 Moebius identity for q1", moebius_identity),
        ("AC4 coefficient dominations", dominations),
        ("AC5 exp envelope certification", lemma_certification),
        ("AC6 factorization p = q1 B", factorization_identity),
        ("AC7 asymptotic exponent fit", asymptotic_exponent),
        ("AC8 asymptotic constant (n = 2)", asymptotic_constant),
        ("AC9 transfer sandwich", transfer_sandwich_property),
        ("AC10 CLI contract", cli_contract),
    ];
    let results: Vec<(Outcome, Duration)> = std::thread::scope(|scope| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, f)| {
                scope.spawn(move || {
                    let start = Instant::now();
                    let outcome = f();
                    (outcome, start.elapsed())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| (Err("panicked".into()), Duration::ZERO))
            })
            .collect()
    });
    let mut failed = 0;
    for ((name, _), (outcome, elapsed)) in criteria.iter().zip(results) {
        match outcome {
            Ok(detail) => println!("PASS {name} [{:.1}s]: {detail}", elapsed.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} [{:.1}s]: {detail}", elapsed.as_secs_f64());
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
