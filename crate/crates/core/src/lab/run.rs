//! Experiment dispatch.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::chaoscore::{
    classify_pair, empirical_df_at_checkpoints, empirical_df_pair, ChaosVerdict, DistanceSeries,
    Tolerances,
};
use crate::combdendrite::{
    boundary_continuity_check, dc2_absence_scan, dc2half_limit_scan, dyadic_deltas,
    comb_certificate, certificate_targets, phi_star_closed_form, scan_grid, walk_checkpoints,
    walk_counts, walk_distance_series, walk_orbit_mismatch, BaseSchedule, CombParams,
};
use crate::error::{DcError, Result};
use crate::gehman::{self, endpoint_conjugacy_check, steps_to_root, subdendrite, GehmanPoint};
use crate::rational::{format_rational, int, rat, to_f64, Rational};
use crate::shiftspace::growth::{dyadic_threshold, validate_growth, ValidatedGrowth};
use crate::shiftspace::point::{format_word, parse_word, symbol_char, SymbolicPoint};
use crate::shiftspace::scrambled::{scrambled_point, BlockClass, ScrambledPair};
use crate::shiftspace::subshift::{horseshoe_check, Subshift};

use super::config::{Experiment, ExperimentConfig, GrowthChoice};
use super::emit::{comb_drawing, emit_csv, emit_json, emit_svg, step_plot, Table};

/// One expected-value comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, expected: impl Into<String>, observed: impl Into<String>, pass: bool) -> Self {
        Check {
            name: name.into(),
            expected: expected.into(),
            observed: observed.into(),
            pass,
        }
    }

    fn flag(name: impl Into<String>, expected: bool, observed: bool) -> Self {
        Check::new(name, expected.to_string(), observed.to_string(), expected == observed)
    }

    fn within(name: impl Into<String>, observed: &Rational, target: &Rational, tol: &Rational) -> Self {
        Check::new(
            name,
            format!("{} ± {}", format_rational(target), format_rational(tol)),
            format!("{} ({:.6})", format_rational(observed), to_f64(observed)),
            (observed - target).abs() <= *tol,
        )
    }

    fn at_most(name: impl Into<String>, observed: &Rational, bound: &Rational) -> Self {
        Check::new(
            name,
            format!("<= {}", format_rational(bound)),
            format!("{} ({:.6})", format_rational(observed), to_f64(observed)),
            observed <= bound,
        )
    }

    fn below(name: impl Into<String>, observed: &Rational, bound: &Rational) -> Self {
        Check::new(
            name,
            format!("< {}", format_rational(bound)),
            format!("{} ({:.6})", format_rational(observed), to_f64(observed)),
            observed < bound,
        )
    }

    fn at_least(name: impl Into<String>, observed: &Rational, bound: &Rational) -> Self {
        Check::new(
            name,
            format!(">= {}", format_rational(bound)),
            format!("{} ({:.6})", format_rational(observed), to_f64(observed)),
            observed >= bound,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub summary: serde_json::Value,
    /// Files written, relative to the output directory.
    pub artifacts: Vec<String>,
    /// Kept out of the JSON so that reruns are byte-identical.
    #[serde(skip)]
    pub duration: Duration,
}

/// Output directory: `DCLAB_OUT`, then the config's `out`, then `dclab-out`.
pub fn output_dir(config: &ExperimentConfig) -> PathBuf {
    std::env::var_os("DCLAB_OUT")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("dclab-out"))
}

/// Validates the config, runs the experiment into [`output_dir`] and writes
/// `<experiment>_report.json` next to the other artifacts.
pub fn run(config: &ExperimentConfig) -> Result<RunReport> {
    run_in(config, &output_dir(config))
}

pub fn run_in(config: &ExperimentConfig, out: &Path) -> Result<RunReport> {
    config.validate()?;
    std::fs::create_dir_all(out)
        .map_err(|e| DcError::Io(format!("cannot create {}: {e}", out.display())))?;
    let started = Instant::now();
    let mut ctx = Ctx {
        out,
        artifacts: Vec::new(),
        checks: Vec::new(),
    };
    let summary = match config.experiment {
        Experiment::CombCertificate => comb_certificate_run(config, &mut ctx)?,
        Experiment::Dc2scan => dc2scan(config, &mut ctx)?,
        Experiment::Dc2half => dc2half(config, &mut ctx)?,
        Experiment::Dc1set => dc1set(config, &mut ctx)?,
        Experiment::Horseshoe => horseshoe(config, &mut ctx)?,
        Experiment::Gehman => gehman_run(config, &mut ctx)?,
        Experiment::GeneralizedComb => generalized_comb(config, &mut ctx)?,
        Experiment::Classify => classify(config, &mut ctx)?,
    };
    let report_name = format!("{}_report.json", config.experiment.name().replace('-', "_"));
    ctx.artifacts.push(report_name.clone());
    let report = RunReport {
        config: config.clone(),
        pass: ctx.checks.iter().all(|c| c.pass),
        checks: ctx.checks,
        summary,
        artifacts: ctx.artifacts,
        duration: started.elapsed(),
    };
    emit_json(&report, &out.join(report_name))?;
    Ok(report)
}

struct Ctx<'a> {
    out: &'a Path,
    artifacts: Vec<String>,
    checks: Vec<Check>,
}

impl Ctx<'_> {
    fn csv(&mut self, name: &str, table: &Table) -> Result<()> {
        emit_csv(table, &self.out.join(name))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn svg(&mut self, name: &str, drawing: &crate::svg::Drawing) -> Result<()> {
        emit_svg(drawing, &self.out.join(name))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    fn file(&mut self, name: &str, write: impl FnOnce(std::io::BufWriter<std::fs::File>) -> Result<()>) -> Result<()> {
        let path = self.out.join(name);
        let f = std::fs::File::create(&path)
            .map_err(|e| DcError::Io(format!("cannot write {}: {e}", path.display())))?;
        write(std::io::BufWriter::new(f))?;
        self.artifacts.push(name.to_string());
        Ok(())
    }
}

fn fmt(r: &Rational) -> String {
    format_rational(r)
}

fn sorted_deltas(config: &ExperimentConfig, default: &[Rational]) -> Vec<Rational> {
    let mut d = config.deltas.clone().unwrap_or_else(|| default.to_vec());
    d.sort();
    d.dedup();
    d
}

/// Classification of the pair `((x₁, 0), (1/3, 1/3))` on the walk prefix.
fn comb_verdict(
    params: &CombParams,
    x1: &Rational,
    grid: &[Rational],
    levels: u32,
    tol: &Tolerances,
) -> Result<(crate::chaoscore::EmpiricalDF, ChaosVerdict)> {
    let series = walk_distance_series(params, x1, levels)?;
    let times = walk_checkpoints(params, x1, grid, levels, 4.min(levels))?;
    let df = empirical_df_at_checkpoints(&series, grid, &times)?;
    let verdict = classify_pair(&df, tol)?;
    Ok((df, verdict))
}

fn comb_certificate_run(config: &ExperimentConfig, ctx: &mut Ctx) -> Result<serde_json::Value> {
    let levels = config.levels.unwrap_or(12);
    let tol = config.tol();
    let cert = comb_certificate(levels)?;
    let (a, b, c) = certificate_targets();
    let fin = cert.final_estimate();
    ctx.checks.push(Check::within("upper DF at 1/2", &fin.phi_star_half, &a, &tol));
    ctx.checks.push(Check::within("lower DF at 1/2", &fin.phi_half, &b, &tol));
    ctx.checks.push(Check::within("upper DF at 1/4", &fin.phi_star_quarter, &c, &tol));
    if levels >= 6 {
        let from = 8.min(levels - 2);
        ctx.checks.push(Check::flag(
            format!("errors shrink from level {from}"),
            true,
            cert.errors_shrink_from(from),
        ));
    }

    let params = CombParams::triadic();
    let grid = [rat(1, 4), rat(1, 2)];
    let (df, verdict) = comb_verdict(&params, &Rational::one(), &grid, levels, &Tolerances::default())?;
    let covers = verdict
        .dc3_interval
        .as_ref()
        .is_some_and(|i| i.a <= grid[0] && i.b >= grid[1]);
    ctx.checks.push(Check::flag("dc3 on [1/4, 1/2]", true, verdict.dc3 && covers));
    ctx.checks.push(Check::flag("dc2", false, verdict.dc2));
    ctx.checks.push(Check::flag("dc2half", false, verdict.dc2half));

    ctx.file("lemma34.csv", |w| cert.write_csv(w))?;
    let mut t = Table::new(&["level", "upper_half", "lower_half", "upper_quarter", "lower_quarter"]);
    for e in &cert.per_level {
        t.push(vec![
            e.level.to_string(),
            fmt(&e.phi_star_half),
            fmt(&e.phi_half),
            fmt(&e.phi_star_quarter),
            fmt(&e.phi_quarter),
        ])?;
    }
    ctx.csv("lemma34_levels.csv", &t)?;
    ctx.svg("lemma34_comb.svg", &comb_drawing(&params, levels.min(4))?)?;
    let curve = |f: fn(&crate::combdendrite::LevelEstimate) -> &Rational| {
        cert.per_level.iter().map(|e| (e.level as f64, to_f64(f(e)))).collect::<Vec<_>>()
    };
    let plot = step_plot(
        &[
            ("upper 1/2", curve(|e| &e.phi_star_half)),
            ("lower 1/2", curve(|e| &e.phi_half)),
            ("upper 1/4", curve(|e| &e.phi_star_quarter)),
            ("lower 1/4", curve(|e| &e.phi_quarter)),
        ],
        &["crimson", "navy", "darkorange", "teal"],
    );
    ctx.svg("lemma34_df.svg", &plot)?;

    Ok(json!({
        "levels": levels,
        "walk_steps": cert.rows.iter().map(|r| r.checkpoint_time).max(),
        "final": fin,
        "per_level": cert.per_level,
        "floats": cert.summary,
        "empirical_df": df,
        "verdict": verdict,
    }))
}

fn dc2scan(config: &ExperimentConfig, ctx: &mut Ctx) -> Result<serde_json::Value> {
    let deltas = sorted_deltas(config, &[rat(1, 4)]);
    let n = config.grid.unwrap_or(1024);
    let levels = config.levels.unwrap_or(8);
    let quarter = rat(1, 4);
    let mut scans = Vec::new();
    let mut t = Table::new(&["delta", "x1", "limit"]);
    let mut curves = Vec::new();
    for d in &deltas {
        let scan = dc2_absence_scan(d, n)?;
        ctx.checks.push(Check::below(format!("max upper DF at {}", fmt(d)), &scan.maximum, &int(1)));
        if *d <= quarter {
            ctx.checks.push(Check::at_most(
                format!("max upper DF at {} within 3/4", fmt(d)),
                &scan.maximum,
                &rat(3, 4),
            ));
        }
        let mut curve = Vec::new();
        for x in scan_grid(d, n)? {
            let v = phi_star_closed_form(&x, d)?.limit;
            curve.push((to_f64(&x), to_f64(&v)));
            t.push(vec![fmt(d), fmt(&x), fmt(&v)])?;
        }
        curves.push((fmt(d), curve));
        scans.push(scan);
    }
    ctx.csv("dc2scan.csv", &t)?;
    let series: Vec<(&str, Vec<(f64, f64)>)> = curves.iter().map(|(l, c)| (l.as_str(), c.clone())).collect();
    ctx.svg("dc2scan.svg", &step_plot(&series, &["navy", "crimson", "teal"]))?;

    // sampled pairs against the spike-top orbit
    let params = CombParams::triadic();
    let mut grid = deltas.clone();
    grid.extend([quarter, rat(1, 2)]);
    grid.sort();
    grid.dedup();
    let xs = config
        .x1
        .clone()
        .unwrap_or_else(|| vec![int(0), rat(1, 4), rat(1, 2), rat(3, 4), int(1)]);
    let tol = Tolerances::uniform(config.tol())?;
    let mut pairs = Vec::new();
    let mut pt = Table::new(&["x1", "delta", "lower", "upper"]);
    for x in &xs {
        let (df, verdict) = comb_verdict(&params, x, &grid, levels, &tol)?;
        ctx.checks.push(Check::flag(format!("dc2 for x1 = {}", fmt(x)), false, verdict.dc2));
        for (i, d) in df.delta_grid.iter().enumerate() {
            pt.push(vec![fmt(x), fmt(d), fmt(&df.lower_est[i]), fmt(&df.upper_est[i])])?;
        }
        pairs.push(json!({ "x1": fmt(x), "verdict": verdict }));
    }
    ctx.csv("dc2scan_pairs.csv", &pt)?;
    Ok(json!({ "grid_size": n, "scans": scans, "pairs": pairs }))
}

fn dc2half(config: &ExperimentConfig, ctx: &mut Ctx) -> Result<serde_json::Value> {
    let deltas = config.deltas.clone().unwrap_or_else(|| dyadic_deltas(2, 20));
    let xs = config
        .x1
        .clone()
        .unwrap_or_else(|| vec![int(0), rat(1, 3), rat(1, 2), int(1)]);
    let tol = config.tol();
    let mut scans = Vec::new();
    for x in &xs {
        let s = dc2half_limit_scan(x, &deltas)?;
        ctx.checks.push(Check::flag(format!("strictly decreasing for x1 = {}", fmt(x)), true, s.strictly_decreasing));
        ctx.checks.push(Check::below(format!("final value for x1 = {}", fmt(x)), &s.final_value, &tol));
        scans.push(s);
    }
    let col = |x: &Rational| xs.iter().position(|y| y == x);
    if let (Some(i), Some(j)) = (col(&int(0)), col(&int(1))) {
        let closed = deltas
            .iter()
            .map(|d| int(3) * d / (int(1) + int(2) * d))
            .collect::<Vec<_>>();
        let same = scans[i].values == scans[j].values && scans[i].values == closed;
        ctx.checks.push(Check::flag("x1 = 0 and x1 = 1 equal 3δ/(1+2δ)", true, same));
    }

    let mut header = vec!["delta".to_string()];
    header.extend(xs.iter().map(|x| format!("x1={}", fmt(x))));
    let mut t = Table::new(&header);
    for (k, d) in deltas.iter().enumerate() {
        let mut row = vec![fmt(d)];
        row.extend(scans.iter().map(|s| fmt(&s.values[k])));
        t.push(row)?;
    }
    ctx.csv("dc2half.csv", &t)?;
    let labels: Vec<String> = xs.iter().map(|x| format!("x1={}", fmt(x))).collect();
    let series: Vec<(&str, Vec<(f64, f64)>)> = scans
        .iter()
        .zip(&labels)
        .map(|(s, l)| {
            let pts = deltas
                .iter()
                .zip(&s.values)
                .map(|(d, v)| (-to_f64(d).log2(), to_f64(v)))
                .collect();
            (l.as_str(), pts)
        })
        .collect();
    ctx.svg("dc2half.svg", &step_plot(&series, &["navy", "crimson", "teal", "darkorange"]))?;
    Ok(json!({ "scans": scans }))
}

fn dc1set(config: &ExperimentConfig, ctx: &mut Ctx) -> Result<serde_json::Value> {
    let choice = config.growth.clone().unwrap_or(GrowthChoice::Pow2sq);
    let growth = choice.sequence()?;
    let depth = config.depth.unwrap_or(8);
    let threshold = rat(1, 20);
    let validation = validate_growth(&growth, depth, &threshold)?;
    ctx.checks.push(Check::flag(format!("growth test to depth {depth}"), true, validation.pass));
    if !validation.pass {
        return Ok(json!({ "growth": validation }));
    }
    let validated = ValidatedGrowth::new(growth, depth, &threshold)?;
    let k = config.prefix_blocks.unwrap_or(4);
    let deltas = sorted_deltas(config, &[rat(1, 256), rat(1, 16), rat(1, 2)]);
    let tol = config.tol();
    let tolerances = Tolerances::uniform(tol.clone())?;
    let t = deltas.iter().map(dyadic_threshold).max().expect("nonempty") as u64;

    let seeds = config.seeds();
    let points = seeds
        .iter()
        .map(|s| {
            let seed = SymbolicPoint::explicit(2, parse_word(s, 2)?)?;
            scrambled_point(&seed, &validated, k + 1)
        })
        .collect::<Result<Vec<_>>>()?;
    let table = points[0].table();
    if table.blocks().len() < k + 1 {
        return Err(DcError::Config(format!(
            "growth sequence materializes only {} blocks, need {}",
            table.blocks().len(),
            k + 1
        )));
    }
    let limit = table.end_of(k as u64).expect("block exists");

    let mut rows = Table::new(&["pair", "kind", "checkpoint", "delta", "fraction_below"]);
    let mut pairs = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let label = format!("{}|{}", seeds[i], seeds[j]);
            let pair = ScrambledPair::new(points[i].clone(), points[j].clone())?;
            let cp = pair.checkpoints(&deltas, limit)?;
            let df = pair.empirical_df(&deltas, limit)?;
            let verdict = classify_pair(&df, &tolerances)?;
            let upper = pair.fraction_below(&deltas[0], cp.upper)?;
            let lower = pair.fraction_below(&deltas[0], cp.lower)?;
            ctx.checks.push(Check::at_least(
                format!("{label} upper fraction at {} (n = {})", fmt(&deltas[0]), cp.upper),
                &upper,
                &(Rational::one() - &tol),
            ));
            ctx.checks.push(Check::at_most(
                format!("{label} lower fraction at {} (n = {})", fmt(&deltas[0]), cp.lower),
                &lower,
                &tol,
            ));
            ctx.checks.push(Check::flag(format!("{label} dc1"), true, verdict.dc1));

            // every structural checkpoint up to the limit, to show the trend
            let mut marks: Vec<(u64, &str)> = pair
                .disagreeing_blocks()
                .iter()
                .map(|b| (b.end(), "lower"))
                .collect();
            marks.extend(
                table
                    .blocks()
                    .iter()
                    .filter(|b| b.class == BlockClass::Zero && b.index > 1 && b.len >= t)
                    .map(|b| (b.end() + 1 - t, "upper")),
            );
            marks.retain(|&(n, _)| n <= limit);
            marks.sort();
            for (n, kind) in marks {
                for d in &deltas {
                    rows.push(vec![
                        label.clone(),
                        kind.to_string(),
                        n.to_string(),
                        fmt(d),
                        fmt(&pair.fraction_below(d, n)?),
                    ])?;
                }
            }
            pairs.push(json!({
                "seeds": [seeds[i], seeds[j]],
                "checkpoints": cp,
                "empirical_df": df,
                "verdict": verdict,
            }));
        }
    }
    ctx.csv("dc1set_checkpoints.csv", &rows)?;
    Ok(json!({
        "growth": validation,
        "prefix_blocks": k,
        "prefix_length": limit,
        "pairs": pairs,
    }))
}

fn parse_forbidden(config: &ExperimentConfig, k: u8) -> Result<Subshift> {
    let forbidden = config
        .forbidden
        .iter()
        .flatten()
        .map(|w| parse_word(w, k))
        .collect::<Result<Vec<_>>>()?;
    Subshift::new(k, forbidden)
}

fn horseshoe(config: &ExperimentConfig, ctx: &mut Ctx) -> Result<serde_json::Value> {
    let k = config.alphabet.unwrap_or(2);
    let depth = config.depth.unwrap_or(8);
    let x = parse_forbidden(config, k)?;
    let words = config
        .words
        .clone()
        .unwrap_or_else(|| vec!["0".into(), symbol_char(k - 1).to_string()]);
    let a = parse_word(&words[0], k)?;
    let b = parse_word(&words[1], k)?;
    let holds = horseshoe_check(&x, &a, &b, depth)?;
    ctx.checks.push(Check::flag(
        format!("horseshoe on [{}], [{}] to depth {depth}", words[0], words[1]),
        true,
        holds,
    ));
    let mut t = Table::new(&["length", "words"]);
    for n in 1..=depth {
        t.push(vec![n.to_string(), x.language(n)?.len().to_string()])?;
    }
    ctx.csv("horseshoe_language.csv", &t)?;
    Ok(json!({
        "subshift": x.to_spec(),
        "words": words,
        "depth": depth,
        "holds": holds,
    }))
}

fn gehman_run(config: &ExperimentConfig, ctx: &mut Ctx) -> Result<serde_json::Value> {
    let k = config.alphabet.unwrap_or(5);
    let depth = config.depth.unwrap_or(3);
    let x = parse_forbidden(config, k)?;
    let g = subdendrite(&x, depth)?;
    let conj = endpoint_conjugacy_check(&x, depth)?;
    ctx.checks.push(Check::flag("invariant under g", true, g.is_invariant()));
    ctx.checks.push(Check::flag("endpoint square commutes", true, conj.square_commutes));

    let mut t = Table::new(&["word", "degree", "steps_to_root"]);
    let mut worst = 0usize;
    let mut all_reach = true;
    for w in g.branch_points() {
        let steps = steps_to_root(&GehmanPoint::BranchPoint(w.clone()), &g)?;
        match steps {
            Some(s) => worst = worst.max(s),
            None => all_reach = false,
        }
        t.push(vec![
            format_word(&w),
            g.degree(&w).to_string(),
            steps.map_or(String::new(), |s| s.to_string()),
        ])?;
    }
    ctx.checks.push(Check::new(
        "branch points reach the root",
        format!("<= {depth} steps"),
        if all_reach { format!("{worst} steps") } else { "never".into() },
        all_reach && worst <= depth,
    ));
    ctx.csv("gehman_branch_points.csv", &t)?;
    ctx.file("gehman_tree.json", |w| g.write_json(w))?;
    ctx.svg("gehman.svg", &g.to_svg())?;
    Ok(json!({
        "alphabet": k,
        "depth": depth,
        "branch_points": g.branch_points().len(),
        "endpoints": g.endpoint_words().len(),
        "diameter": fmt(&gehman::diameter(&g)),
        "conjugacy": conj,
    }))
}

fn generalized_comb(config: &ExperimentConfig, ctx: &mut Ctx) -> Result<serde_json::Value> {
    let bases = config.bases();
    let schedule = if bases.len() == 1 {
        BaseSchedule::Constant(bases[0])
    } else {
        BaseSchedule::Explicit(bases.clone())
    };
    let params = CombParams::new(schedule)?;
    let levels = config.comb_levels();
    let deltas = sorted_deltas(config, &[rat(1, 4), rat(1, 2)]);
    let xs = config.x1.clone().unwrap_or_else(|| vec![int(1)]);

    // the last level of a finite schedule has no successor spikes
    let defined = params.max_level().map_or(levels, |m| levels.min(m - 1));
    let cont_levels = defined.min(6);
    ctx.checks.push(Check::flag(
        format!("boundary continuity to level {cont_levels}"),
        true,
        boundary_continuity_check(&params, cont_levels)?,
    ));
    let steps = (params.denominator(levels)? - 2).min(10_000) as usize;
    let mismatch = walk_orbit_mismatch(&params, steps)?;
    ctx.checks.push(Check::new(
        format!("walk matches orbit for {steps} steps"),
        "no mismatch",
        mismatch.map_or("no mismatch".to_string(), |k| format!("mismatch at {k}")),
        mismatch.is_none(),
    ));

    let mut t = Table::new(&[
        "x1",
        "delta",
        "level",
        "limsup_time",
        "limsup_fraction",
        "liminf_time",
        "liminf_fraction",
    ]);
    let mut runs = Vec::new();
    for x in &xs {
        for d in &deltas {
            let wc = walk_counts(&params, x, d, levels)?;
            for l in &wc.levels {
                t.push(vec![
                    fmt(x),
                    fmt(d),
                    l.level.to_string(),
                    l.limsup_time.to_string(),
                    fmt(&l.limsup_fraction()),
                    l.liminf_time.to_string(),
                    fmt(&l.liminf_fraction()),
                ])?;
            }
            runs.push(json!({
                "x1": fmt(x),
                "delta": fmt(d),
                "running_min": fmt(&wc.running_min),
                "running_max": fmt(&wc.running_max),
            }));
        }
    }
    ctx.csv("generalized_comb.csv", &t)?;
    ctx.svg("generalized_comb.svg", &comb_drawing(&params, levels.min(4))?)?;
    Ok(json!({
        "schedule": params,
        "levels": levels,
        "walk_steps": params.denominator(levels)? - 1,
        "runs": runs,
    }))
}

fn classify(config: &ExperimentConfig, ctx: &mut Ctx) -> Result<serde_json::Value> {
    let path = config.series.as_ref().expect("validated");
    let file = std::fs::File::open(path)
        .map_err(|e| DcError::Config(format!("cannot read {}: {e}", path.display())))?;
    let diameter = config.diameter.clone().unwrap_or_else(Rational::one);
    let series = DistanceSeries::from_csv_reader(file, diameter)?;
    let deltas = sorted_deltas(config, &[]);
    let tol = Tolerances::uniform(config.tol())?;
    let df = empirical_df_pair(&series, &deltas, &tol)?;
    let verdict = classify_pair(&df, &tol)?;
    let mut t = Table::new(&["delta", "lower", "upper"]);
    for (i, d) in df.delta_grid.iter().enumerate() {
        t.push(vec![fmt(d), fmt(&df.lower_est[i]), fmt(&df.upper_est[i])])?;
    }
    ctx.csv("classify_df.csv", &t)?;
    let curve = |v: &[Rational]| {
        df.delta_grid
            .iter()
            .zip(v)
            .map(|(d, x)| (to_f64(d), to_f64(x)))
            .collect::<Vec<_>>()
    };
    let plot = step_plot(
        &[("lower", curve(&df.lower_est)), ("upper", curve(&df.upper_est))],
        &["navy", "crimson"],
    );
    ctx.svg("classify_df.svg", &plot)?;
    Ok(json!({ "length": series.len(), "empirical_df": df, "verdict": verdict }))
}
