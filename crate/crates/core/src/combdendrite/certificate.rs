//! Counting along the spike-top walk against a fixed spine point.
//!
//! The orbit of `(1/3, 1/3)` visits every spike top once, level by level, so
//! its distance to `(x₁, 0)` at time `k` is `max(|x₁ − j/D_n|, 1/D_n)` for
//! the `k`-th walk state `(n, j)`. All comparisons below are integer
//! cross-multiplications.

use std::io::Write;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chaoscore::DistanceSeries;
use crate::error::{DcError, Result};
use crate::rational::{format_rational, int, rat, ratio_u64, to_f64, Rational};

use super::map::{orbit, LevelWalkState};
use super::params::CombParams;
use super::point::DendritePoint;

fn small(r: &Rational, what: &str) -> Result<(i128, i128)> {
    match (r.numer().to_i128(), r.denom().to_i128()) {
        (Some(p), Some(q)) if p.abs() < 1 << 40 && q < 1 << 40 => Ok((p, q)),
        _ => Err(DcError::Domain(format!(
            "{what} {} has too large a numerator or denominator",
            format_rational(r)
        ))),
    }
}

/// Decides `max(|x₁ − j/D|, 1/D) < δ` exactly.
#[derive(Debug, Clone, Copy)]
struct BelowTest {
    p: i128,
    q: i128,
    r: i128,
    s: i128,
}

impl BelowTest {
    fn new(x1: &Rational, delta: &Rational) -> Result<Self> {
        let (p, q) = small(x1, "x1")?;
        let (r, s) = small(delta, "delta")?;
        Ok(BelowTest { p, q, r, s })
    }

    fn below(&self, j: u64, d: u64) -> bool {
        let (j, d) = (j as i128, d as i128);
        let num = (self.p * d - self.q * j).abs().max(self.q);
        // num / (q·D) < r / s
        self.s * num < self.r * self.q * d
    }
}

/// The spike indices of one level, in walk order.
fn level_indices(params: &CombParams, n: u32) -> Result<(u64, Vec<u64>)> {
    let grid = params.spike_grid(n)?;
    let mut js: Vec<u64> = grid.indices().collect();
    if n % 2 == 0 {
        js.reverse();
    }
    Ok((grid.denominator, js))
}

fn check_levels(params: &CombParams, levels: u32) -> Result<()> {
    if levels == 0 {
        return Err(DcError::Domain("need at least one level".into()));
    }
    // keeps i128 products exact
    if params.denominator(levels)? > 1 << 40 {
        return Err(DcError::Domain(format!("{levels} levels exceed the walk size limit")));
    }
    Ok(())
}

/// Checkpoints of one level for one `δ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCheckpoints {
    pub level: u32,
    /// First walk time of the level, `l_{n−1}`.
    pub start: u64,
    /// `l_n`
    pub end: u64,
    /// Prefix length ending the level's first run of close visits.
    pub limsup_time: u64,
    pub limsup_count: u64,
    /// Prefix length just before the level's first close visit.
    pub liminf_time: u64,
    pub liminf_count: u64,
}

impl LevelCheckpoints {
    pub fn limsup_fraction(&self) -> Rational {
        ratio_u64(self.limsup_count, self.limsup_time.max(1))
    }

    pub fn liminf_fraction(&self) -> Rational {
        ratio_u64(self.liminf_count, self.liminf_time.max(1))
    }
}

/// Walk statistics for one `δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkCounts {
    #[serde(with = "crate::rational::serde_str")]
    pub delta: Rational,
    pub levels: Vec<LevelCheckpoints>,
    /// Minimum of the running fraction over the last two levels.
    #[serde(with = "crate::rational::serde_str")]
    pub running_min: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub running_max: Rational,
}

impl WalkCounts {
    pub fn level(&self, n: u32) -> Option<&LevelCheckpoints> {
        self.levels.iter().find(|l| l.level == n)
    }
}

/// Streams the walk through `levels` levels, recording per-level checkpoints
/// and the running extremes over the last two levels.
pub fn walk_counts(
    params: &CombParams,
    x1: &Rational,
    delta: &Rational,
    levels: u32,
) -> Result<WalkCounts> {
    check_levels(params, levels)?;
    let test = BelowTest::new(x1, delta)?;
    let window_from = if levels >= 2 {
        params.denominator(levels - 2)? - 1
    } else {
        0
    };
    let mut count = 0u64;
    let mut time = 0u64;
    let mut out = Vec::with_capacity(levels as usize);
    let (mut lo, mut hi): (Option<(u64, u64)>, Option<(u64, u64)>) = (None, None);
    for n in 1..=levels {
        let (d, js) = level_indices(params, n)?;
        let start = time;
        let mut limsup = None;
        let mut liminf = None;
        let mut in_run = false;
        for j in js {
            let below = test.below(j, d);
            if below && liminf.is_none() {
                liminf = Some((time, count));
            }
            if below {
                in_run = true;
            } else if in_run && limsup.is_none() {
                limsup = Some((time, count));
            }
            if below {
                count += 1;
            }
            time += 1;
            if time > window_from {
                let f = (count, time);
                let less = |a: (u64, u64), b: (u64, u64)| {
                    (a.0 as u128) * (b.1 as u128) < (b.0 as u128) * (a.1 as u128)
                };
                if lo.is_none_or(|l| less(f, l)) {
                    lo = Some(f);
                }
                if hi.is_none_or(|h| less(h, f)) {
                    hi = Some(f);
                }
            }
        }
        let (limsup_time, limsup_count) = limsup.unwrap_or((time, count));
        let (liminf_time, liminf_count) = liminf.unwrap_or((time, count));
        out.push(LevelCheckpoints {
            level: n,
            start,
            end: time,
            limsup_time,
            limsup_count,
            liminf_time,
            liminf_count,
        });
    }
    let lo = lo.expect("walk is nonempty");
    let hi = hi.expect("walk is nonempty");
    Ok(WalkCounts {
        delta: delta.clone(),
        levels: out,
        running_min: ratio_u64(lo.0, lo.1),
        running_max: ratio_u64(hi.0, hi.1),
    })
}

/// Distances from the orbit of the first spike top to `(x₁, 0)` for all
/// walk times in the first `levels` levels.
pub fn walk_distance_series(params: &CombParams, x1: &Rational, levels: u32) -> Result<DistanceSeries> {
    check_levels(params, levels)?;
    if *x1 < Rational::zero() || *x1 > Rational::one() {
        return Err(DcError::Domain(format!("x1 {} outside [0, 1]", format_rational(x1))));
    }
    let mut values = Vec::new();
    for n in 1..=levels {
        let (d, js) = level_indices(params, n)?;
        let h = ratio_u64(1, d);
        for j in js {
            let gap = (x1 - ratio_u64(j, d)).abs();
            values.push(if gap > h { gap } else { h.clone() });
        }
    }
    DistanceSeries::new(values, int(1))
}

/// Union of limsup and liminf checkpoints of levels `from_level..=levels`
/// for every `δ` in the grid, sorted.
pub fn walk_checkpoints(
    params: &CombParams,
    x1: &Rational,
    deltas: &[Rational],
    levels: u32,
    from_level: u32,
) -> Result<Vec<u64>> {
    let mut times = Vec::new();
    for d in deltas {
        let wc = walk_counts(params, x1, d, levels)?;
        for l in wc.levels.iter().filter(|l| l.level >= from_level) {
            times.extend([l.limsup_time, l.liminf_time]);
        }
    }
    times.retain(|&t| t > 0);
    times.sort_unstable();
    times.dedup();
    Ok(times)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRow {
    pub checkpoint_time: u64,
    #[serde(with = "crate::rational::serde_str")]
    pub delta: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub fraction_below: Rational,
}

/// Estimates obtained from the pair of levels `(level − 1, level)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelEstimate {
    pub level: u32,
    #[serde(with = "crate::rational::serde_str")]
    pub phi_star_half: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub phi_half: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub phi_star_quarter: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub phi_quarter: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub phi_star_half: f64,
    pub phi_half: f64,
    pub phi_star_quarter: f64,
    pub phi_quarter: f64,
    pub running_max_half: f64,
    pub running_min_half: f64,
    pub running_max_quarter: f64,
    pub running_min_quarter: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombCertificate {
    pub levels: u32,
    pub rows: Vec<CertificateRow>,
    pub per_level: Vec<LevelEstimate>,
    pub summary: CertificateSummary,
}

/// Limits the certificate converges to.
pub fn certificate_targets() -> (Rational, Rational, Rational) {
    (rat(3, 4), rat(1, 4), rat(1, 2))
}

impl CombCertificate {
    pub fn final_estimate(&self) -> &LevelEstimate {
        self.per_level.last().expect("at least one even level")
    }

    /// Absolute errors of `(Φ̂*(1/2), Φ̂(1/2), Φ̂*(1/4))` at an even level.
    pub fn errors_at(&self, level: u32) -> Option<[Rational; 3]> {
        let e = self.per_level.iter().find(|e| e.level == level)?;
        let (a, b, c) = certificate_targets();
        Some([
            (&e.phi_star_half - a).abs(),
            (&e.phi_half - b).abs(),
            (&e.phi_star_quarter - c).abs(),
        ])
    }

    /// Over the even levels from `from` on, every error strictly decreases
    /// until it reaches zero and then stays there.
    pub fn errors_shrink_from(&self, from: u32) -> bool {
        let errs: Vec<[Rational; 3]> = self
            .per_level
            .iter()
            .filter(|e| e.level >= from)
            .filter_map(|e| self.errors_at(e.level))
            .collect();
        errs.len() >= 2
            && errs.windows(2).all(|w| {
                (0..3).all(|i| w[1][i] < w[0][i] || (w[0][i].is_zero() && w[1][i].is_zero()))
            })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["checkpoint_time", "delta", "fraction_below"])?;
        for r in &self.rows {
            w.write_record([
                r.checkpoint_time.to_string(),
                format_rational(&r.delta),
                format_rational(&r.fraction_below),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Certificate for the pair `((1, 0), (1/3, 1/3))` with `δ ∈ {1/4, 1/2}`:
/// limsup checkpoints on even levels, liminf checkpoints on odd levels.
pub fn comb_certificate(levels: u32) -> Result<CombCertificate> {
    if levels < 4 || levels % 2 != 0 {
        return Err(DcError::Domain(format!("levels must be even and at least 4, got {levels}")));
    }
    let params = CombParams::triadic();
    let x1 = Rational::one();
    let half = walk_counts(&params, &x1, &rat(1, 2), levels)?;
    let quarter = walk_counts(&params, &x1, &rat(1, 4), levels)?;

    let mut rows = Vec::new();
    for wc in [&quarter, &half] {
        for l in &wc.levels {
            let (t, f) = if l.level % 2 == 0 {
                (l.limsup_time, l.limsup_fraction())
            } else {
                (l.liminf_time, l.liminf_fraction())
            };
            rows.push(CertificateRow {
                checkpoint_time: t,
                delta: wc.delta.clone(),
                fraction_below: f,
            });
        }
    }
    rows.sort_by(|a, b| (a.checkpoint_time, &a.delta).cmp(&(b.checkpoint_time, &b.delta)));

    let per_level: Vec<LevelEstimate> = (4..=levels)
        .step_by(2)
        .map(|m| {
            let even = |wc: &WalkCounts| wc.level(m).expect("level computed").limsup_fraction();
            let odd = |wc: &WalkCounts| wc.level(m - 1).expect("level computed").liminf_fraction();
            LevelEstimate {
                level: m,
                phi_star_half: even(&half),
                phi_half: odd(&half),
                phi_star_quarter: even(&quarter),
                phi_quarter: odd(&quarter),
            }
        })
        .collect();

    let last = per_level.last().expect("levels >= 4");
    let summary = CertificateSummary {
        phi_star_half: to_f64(&last.phi_star_half),
        phi_half: to_f64(&last.phi_half),
        phi_star_quarter: to_f64(&last.phi_star_quarter),
        phi_quarter: to_f64(&last.phi_quarter),
        running_max_half: to_f64(&half.running_max),
        running_min_half: to_f64(&half.running_min),
        running_max_quarter: to_f64(&quarter.running_max),
        running_min_quarter: to_f64(&quarter.running_min),
    };
    Ok(CombCertificate {
        levels,
        rows,
        per_level,
        summary,
    })
}

/// Writes the orbit as CSV with columns
/// `k,x_num,x_den,y_num,y_den,level,index`; spine points leave the last two
/// fields empty.
pub fn write_orbit_csv<W: Write>(
    params: &CombParams,
    start: &DendritePoint,
    steps: usize,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "x_num", "x_den", "y_num", "y_den", "level", "index"])?;
    for (k, p) in orbit(params, start, steps)?.iter().enumerate() {
        let (x, y) = p.coords();
        let (level, index) = match p.spike_label() {
            Some((n, j)) => (n.to_string(), j.to_string()),
            None => (String::new(), String::new()),
        };
        w.write_record([
            k.to_string(),
            x.numer().to_string(),
            x.denom().to_string(),
            y.numer().to_string(),
            y.denom().to_string(),
            level,
            index,
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Walk state at time `k`, computed by skipping whole levels.
pub fn walk_state_at(params: &CombParams, k: u64) -> Result<LevelWalkState> {
    let mut n = 1;
    loop {
        let end = params.denominator(n)? - 1;
        if k < end {
            let start = params.denominator(n - 1)? - 1;
            let (_, js) = level_indices(params, n)?;
            return Ok(LevelWalkState {
                level: n,
                index: js[(k - start) as usize],
                elapsed: k,
            });
        }
        n += 1;
    }
}
