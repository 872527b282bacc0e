//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dclab::chaoscore::{
    classify_pair, complement_identity_check, empirical_df_at_checkpoints, DistanceSeries, Tolerances,
};
use dclab::combdendrite::{
    boundary_continuity_check, dc2_absence_scan, dc2half_limit_scan, dyadic_deltas,
    eventually_fixed_time, landing_time, comb_certificate, certificate_targets, sample_spike_points,
    walk_checkpoints, walk_distance_series, walk_orbit_mismatch, CombParams,
};
use dclab::gehman::{build_gehman, endpoint_conjugacy_check, steps_to_root, GehmanPoint};
use dclab::rational::{int, pow2_neg, rat, to_f64, Rational};
use dclab::shiftspace::{
    lambda_nu_word, parse_word, scrambled_point, validate_growth, GrowthSequence, ScrambledPair,
    Subshift, SymbolicPoint, ValidatedGrowth, horseshoe_check,
};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn timed(limit: Duration, started: Instant, what: &str) -> Result<Duration, String> {
    let t = started.elapsed();
    ensure(t < limit, format!("{what} took {:.2} s, limit {:.0} s", t.as_secs_f64(), limit.as_secs_f64()))?;
    Ok(t)
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let cert = comb_certificate(12).map_err(e)?;
    let t = timed(Duration::from_secs(5), started, "level-12 certificate")?;
    let (a, b, c) = certificate_targets();
    let fin = cert.final_estimate();
    let tol = rat(1, 100);
    for (name, est, target) in [
        ("upper(1/2)", &fin.phi_star_half, &a),
        ("lower(1/2)", &fin.phi_half, &b),
        ("upper(1/4)", &fin.phi_star_quarter, &c),
    ] {
        let err = (est - target).abs();
        ensure(err <= tol, format!("{name} = {:.6}, error {:.6}", to_f64(est), to_f64(&err)))?;
    }
    ensure(cert.errors_shrink_from(8), "errors do not shrink from level 8 to 12")?;
    Ok(format!(
        "upper(1/2) = {:.6}, lower(1/2) = {:.6}, upper(1/4) = {:.6}; errors shrink over levels 8..12; {:.2} s",
        to_f64(&fin.phi_star_half),
        to_f64(&fin.phi_half),
        to_f64(&fin.phi_star_quarter),
        t.as_secs_f64()
    ))
}

fn comb_verdict(x1: &Rational, levels: u32, grid: &[Rational]) -> Result<dclab::chaoscore::ChaosVerdict, String> {
    let params = CombParams::triadic();
    let series = walk_distance_series(&params, x1, levels).map_err(e)?;
    let times = walk_checkpoints(&params, x1, grid, levels, 4).map_err(e)?;
    let df = empirical_df_at_checkpoints(&series, grid, &times).map_err(e)?;
    classify_pair(&df, &Tolerances::default()).map_err(e)
}

fn criterion_2() -> Outcome {
    let scan = dc2_absence_scan(&rat(1, 4), 1024).map_err(e)?;
    ensure(scan.maximum == rat(3, 4), format!("maximum {}", scan.maximum))?;
    ensure(scan.argmax == vec![rat(1, 4), rat(3, 4)], format!("argmax {:?}", scan.argmax))?;
    let grid = [rat(1, 8), rat(1, 4), rat(1, 2)];
    let xs = [int(0), rat(1, 8), rat(1, 4), rat(1, 3), rat(1, 2), rat(3, 4), int(1)];
    for x in &xs {
        let v = comb_verdict(x, 8, &grid)?;
        ensure(!v.dc2, format!("dc2 set for x1 = {x}"))?;
    }
    Ok(format!("max = 3/4 exactly at x1 in {{1/4, 3/4}}; dc2 unset for {} sampled pairs", xs.len()))
}

fn criterion_3() -> Outcome {
    let deltas = dyadic_deltas(2, 20);
    let mut cols = Vec::new();
    for x in [int(0), rat(1, 3), rat(1, 2), int(1)] {
        let s = dc2half_limit_scan(&x, &deltas).map_err(e)?;
        ensure(s.strictly_decreasing, format!("x1 = {x} not strictly decreasing"))?;
        ensure(s.final_value < rat(1, 10000), format!("x1 = {x} final {}", to_f64(&s.final_value)))?;
        cols.push(s);
    }
    ensure(cols[0].values == cols[3].values, "x1 = 0 and x1 = 1 differ")?;
    for (d, v) in deltas.iter().zip(&cols[0].values) {
        ensure(*v == int(3) * d / (int(1) + int(2) * d), format!("closed form differs at {d}"))?;
    }
    let worst = cols.iter().map(|s| to_f64(&s.final_value)).fold(0.0, f64::max);
    Ok(format!("4 columns strictly decreasing, largest final value {worst:.3e}; x1 = 0 and 1 equal 3d/(1+2d)"))
}

fn criterion_4() -> Outcome {
    let started = Instant::now();
    let grid = [rat(1, 4), rat(1, 2)];
    let v = comb_verdict(&int(1), 12, &grid)?;
    let t = timed(Duration::from_secs(10), started, "classification")?;
    let iv = v.dc3_interval.clone().ok_or("no dc3 interval")?;
    ensure(v.dc3 && iv.a <= grid[0] && iv.b >= grid[1], format!("dc3 interval [{}, {}]", iv.a, iv.b))?;
    ensure(!v.dc2, "dc2 set")?;
    ensure(!v.dc2half, "dc2half set")?;
    Ok(format!("dc3 on [{}, {}], dc2 = false, dc2half = false; {:.2} s", iv.a, iv.b, t.as_secs_f64()))
}

fn criterion_5() -> Outcome {
    let started = Instant::now();
    let growth = GrowthSequence::pow2_square();
    let report = validate_growth(&growth, 8, &rat(1, 20)).map_err(e)?;
    ensure(report.pass, "growth test fails at depth 8")?;
    let last = report.trace.last().map(|r| r.ratio).unwrap_or(f64::NAN);
    ensure(last < 0.05, format!("final ratio {last}"))?;
    let vg = ValidatedGrowth::new(growth.clone(), 8, &rat(1, 20)).map_err(e)?;
    let seed = |s: &str| SymbolicPoint::explicit(2, parse_word(s, 2).unwrap()).unwrap();
    let x = scrambled_point(&seed("0"), &vg, 5).map_err(e)?;
    let y = scrambled_point(&seed("1"), &vg, 5).map_err(e)?;
    let b3 = x.table().end_of(3).ok_or("b3")?;
    let b4 = x.table().end_of(4).ok_or("b4")?;
    let pair = ScrambledPair::new(x, y).map_err(e)?;
    let delta = pow2_neg(8);
    let upper = pair.fraction_below(&delta, b3 - 8).map_err(e)?;
    let lower = pair.fraction_below(&delta, b4).map_err(e)?;

    // brute force over the materialized words
    let len = (b4 + 16) as usize;
    let wx = lambda_nu_word(&seed("0"), &growth, len).map_err(e)?;
    let wy = lambda_nu_word(&seed("1"), &growth, len).map_err(e)?;
    let close = |k: usize| (k..k + 9).all(|i| wx[i] == wy[i]);
    let brute = |n: u64| (0..n as usize).filter(|&k| close(k)).count() as u64;
    let (bu, bl) = (brute(b3 - 8), brute(b4));
    ensure(
        upper == Rational::new(bu.into(), (b3 - 8).into()) && lower == Rational::new(bl.into(), b4.into()),
        "symbolic and brute-force counts differ",
    )?;
    let t = timed(Duration::from_secs(5), started, "scrambled-pair counting")?;
    ensure(upper >= rat(9, 10), format!("upper {:.4} at n = {}", to_f64(&upper), b3 - 8))?;
    ensure(lower <= rat(1, 100), format!("lower {:.4} at n = {b4}", to_f64(&lower)))?;
    Ok(format!(
        "final growth ratio {last:.2e}; upper {:.4} at n = {}, lower {:.5} at n = {b4}; matches brute force; {:.2} s",
        to_f64(&upper),
        b3 - 8,
        to_f64(&lower),
        t.as_secs_f64()
    ))
}

fn criterion_6() -> Outcome {
    let full2 = Subshift::full(2).map_err(e)?;
    let full5 = Subshift::full(5).map_err(e)?;
    let golden = Subshift::golden_mean();
    ensure(horseshoe_check(&full2, &[0], &[1], 8).map_err(e)?, "full 2-shift fails")?;
    for a in 0..5u8 {
        for b in a + 1..5 {
            ensure(horseshoe_check(&full5, &[a], &[b], 8).map_err(e)?, format!("full 5-shift fails on {a},{b}"))?;
        }
    }
    ensure(!horseshoe_check(&golden, &[0], &[1], 8).map_err(e)?, "golden mean passes")?;
    Ok("full 2-shift and full 5-shift pass to depth 8, golden mean fails".into())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let params = CombParams::triadic();
    let mut series: Vec<(String, DistanceSeries)> = Vec::new();
    for x in [int(1), rat(1, 2), int(0)] {
        series.push((format!("comb x1 = {x}"), walk_distance_series(&params, &x, 8).map_err(e)?));
    }
    let growth = GrowthSequence::pow2_square();
    let vg = ValidatedGrowth::new(growth, 8, &rat(1, 20)).map_err(e)?;
    let pt = |s: &str| {
        let seed = SymbolicPoint::explicit(2, parse_word(s, 2).unwrap()).unwrap();
        scrambled_point(&seed, &vg, 5)
    };
    let pair = ScrambledPair::new(pt("0").map_err(e)?, pt("1").map_err(e)?).map_err(e)?;
    series.push(("scrambled 0|1".into(), pair.distance_series(70_000, 64).map_err(e)?));
    let deltas = [rat(1, 256), rat(1, 8), rat(1, 4), rat(1, 2), int(1)];
    let mut checked = 0;
    for (name, s) in &series {
        for _ in 0..100 {
            let n = rng.gen_range(1..=s.len());
            let d = &deltas[rng.gen_range(0..deltas.len())];
            ensure(complement_identity_check(s, d, n).map_err(e)?, format!("{name}: identity fails at n = {n}"))?;
            checked += 1;
        }
    }
    let mismatch = walk_orbit_mismatch(&params, 10_000).map_err(e)?;
    ensure(mismatch.is_none(), format!("walk and orbit differ at step {mismatch:?}"))?;
    ensure(boundary_continuity_check(&params, 6).map_err(e)?, "continuity fails")?;
    for (name, x) in [
        ("full 2-shift", Subshift::full(2).map_err(e)?),
        ("full 5-shift", Subshift::full(5).map_err(e)?),
        ("golden mean", Subshift::golden_mean()),
    ] {
        let r = endpoint_conjugacy_check(&x, 8).map_err(e)?;
        ensure(r.pass, format!("{name}: conjugacy fails"))?;
    }
    Ok(format!(
        "{checked} complement checks on {} series; walk = orbit for 10^4 steps; continuity to level 6; conjugacy to depth 8 on 3 shifts",
        series.len()
    ))
}

fn criterion_8() -> Outcome {
    let params = CombParams::triadic();
    let pts = sample_spike_points(&params, 5, 1000).map_err(e)?;
    let mut worst = 0;
    for p in &pts {
        let cap = landing_time(&params, p).map_err(e)?.ok_or_else(|| format!("{p} has no cap"))?;
        let t = eventually_fixed_time(&params, p, cap).map_err(e)?;
        ensure(t.is_some(), format!("{p} misses the spine within {cap} steps"))?;
        worst = worst.max(t.unwrap());
    }
    let g = build_gehman(2, 8).map_err(e)?;
    let mut count = 0;
    for w in g.branch_points() {
        let s = steps_to_root(&GehmanPoint::BranchPoint(w.clone()), &g).map_err(e)?;
        ensure(s.is_some_and(|s| s <= 8), format!("branch point {w:?} does not reach the root"))?;
        count += 1;
    }
    Ok(format!(
        "{} spike points land within their caps (at most {worst} steps); {count} branch points reach the root in <= 8 steps",
        pts.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("walk estimates near 3/4, 1/4, 1/2", criterion_1),
        ("upper DF bounded by 3/4", criterion_2),
        ("upper DF limit vanishes", criterion_3),
        ("dc3 without dc2 or dc2half", criterion_4),
        ("scrambled pair fractions", criterion_5),
        ("horseshoe", criterion_6),
        ("structural exactness", criterion_7),
        ("eventual fixedness", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
