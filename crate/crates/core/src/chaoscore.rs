//! Finite-time distribution functions of orbit distances and the
//! distributional-chaos classification of a pair.
//!
//! For a pair `(x, y)` with distance series `d_k = d(f^k x, f^k y)` the
//! running fraction at prefix length `n` is
//!
//! ```text
//! F_n(δ) = #{ 0 <= k < n : d_k < δ } / n
//! ```
//!
//! The lower and upper distribution functions are the liminf and limsup of
//! `F_n(δ)`. They are estimated by the min and max of `F_n` over a tail window
//! of prefix lengths, or over caller-supplied checkpoint times when the
//! dynamics has known structure. Fractions are exact; tolerances enter only
//! in [`classify_pair`].

use std::io::Read;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{DcError, Result};
use crate::rational::{self, parse_rational, ratio_u64, Rational};

/// Slack used to turn asymptotic statements into finite checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tolerances {
    /// How far below 1 a value may sit and still count as 1.
    #[serde(with = "rational::serde_str")]
    pub one_gap: Rational,
    /// How far above 0 a value may sit and still count as 0.
    #[serde(with = "rational::serde_str")]
    pub zero_gap: Rational,
    /// Portion of prefix lengths treated as the asymptotic tail.
    #[serde(with = "rational::serde_str")]
    pub tail_fraction: Rational,
}

impl Tolerances {
    pub fn new(one_gap: Rational, zero_gap: Rational, tail_fraction: Rational) -> Result<Self> {
        let t = Tolerances {
            one_gap,
            zero_gap,
            tail_fraction,
        };
        t.validate()?;
        Ok(t)
    }

    /// Both gaps set to `tol`, default tail fraction.
    pub fn uniform(tol: Rational) -> Result<Self> {
        Self::new(tol.clone(), tol, rational::rat(1, 2))
    }

    pub fn validate(&self) -> Result<()> {
        let zero = Rational::zero();
        if self.one_gap <= zero || self.zero_gap <= zero || self.tail_fraction <= zero {
            return Err(DcError::Invariant("tolerances must be strictly positive".into()));
        }
        if self.tail_fraction >= Rational::one() {
            return Err(DcError::Invariant("tail_fraction must be < 1".into()));
        }
        Ok(())
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            one_gap: rational::rat(1, 20),
            zero_gap: rational::rat(1, 20),
            tail_fraction: rational::rat(1, 2),
        }
    }
}

/// Orbit distances `d_0, d_1, …` of one pair, each within `[0, diameter]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceSeries {
    values: Vec<Rational>,
    diameter: Rational,
}

impl DistanceSeries {
    pub fn new(values: Vec<Rational>, diameter: Rational) -> Result<Self> {
        if diameter <= Rational::zero() {
            return Err(DcError::Domain("diameter must be positive".into()));
        }
        if values.is_empty() {
            return Err(DcError::Domain("distance series is empty".into()));
        }
        if let Some((k, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| **v < Rational::zero() || **v > diameter)
        {
            return Err(DcError::Invariant(format!(
                "distance d_{k} = {} outside [0, diameter]",
                rational::format_rational(v)
            )));
        }
        Ok(DistanceSeries { values, diameter })
    }

    /// Reads one rational (`p/q`) or decimal per line. Blank lines and lines
    /// starting with `#` are skipped.
    pub fn from_csv_reader<R: Read>(reader: R, diameter: Rational) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .flexible(true)
            .from_reader(reader);
        let mut values = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let Some(field) = rec.get(0) else { continue };
            if field.trim().is_empty() {
                continue;
            }
            let v = parse_rational(field)
                .map_err(|e| DcError::Parse(format!("line {}: {e}", line + 1)))?;
            values.push(v);
        }
        Self::new(values, diameter)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn diameter(&self) -> &Rational {
        &self.diameter
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn check_delta(&self, delta: &Rational) -> Result<()> {
        if *delta <= Rational::zero() || *delta > self.diameter {
            return Err(DcError::Domain(format!(
                "delta {} outside (0, diameter]",
                rational::format_rational(delta)
            )));
        }
        Ok(())
    }

    /// Running counts `#{k < n : d_k < δ}` for `n = 0..=len`.
    fn prefix_counts_below(&self, delta: &Rational) -> Vec<u64> {
        let mut counts = Vec::with_capacity(self.values.len() + 1);
        let mut c = 0u64;
        counts.push(0);
        for v in &self.values {
            if v < delta {
                c += 1;
            }
            counts.push(c);
        }
        counts
    }
}

/// Finite-time lower/upper distribution-function estimates on a δ-grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmpiricalDF {
    #[serde(with = "rational::serde_str::vec")]
    pub delta_grid: Vec<Rational>,
    #[serde(with = "rational::serde_str::vec")]
    pub lower_est: Vec<Rational>,
    #[serde(with = "rational::serde_str::vec")]
    pub upper_est: Vec<Rational>,
    pub checkpoint_times: Option<Vec<u64>>,
    /// First prefix length in the estimation window.
    pub tail_start: u64,
    /// Smallest distance seen in the tail (liminf surrogate).
    #[serde(with = "rational::serde_str")]
    pub tail_min_distance: Rational,
    /// Largest distance seen in the tail (limsup surrogate).
    #[serde(with = "rational::serde_str")]
    pub tail_max_distance: Rational,
    #[serde(with = "rational::serde_str")]
    pub diameter: Rational,
}

impl EmpiricalDF {
    /// Assembles estimates computed elsewhere (for instance by block
    /// arithmetic on a symbolic orbit) and checks the invariants.
    #[allow(clippy::too_many_arguments)]
    pub fn from_estimates(
        delta_grid: Vec<Rational>,
        lower_est: Vec<Rational>,
        upper_est: Vec<Rational>,
        checkpoint_times: Option<Vec<u64>>,
        tail_start: u64,
        tail_min_distance: Rational,
        tail_max_distance: Rational,
        diameter: Rational,
    ) -> Result<Self> {
        let df = EmpiricalDF {
            delta_grid,
            lower_est,
            upper_est,
            checkpoint_times,
            tail_start,
            tail_min_distance,
            tail_max_distance,
            diameter,
        };
        df.validate()?;
        Ok(df)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.delta_grid.len();
        if self.lower_est.len() != n || self.upper_est.len() != n {
            return Err(DcError::Invariant("estimate length differs from grid".into()));
        }
        validate_grid(&self.delta_grid, &self.diameter)?;
        let (zero, one) = (Rational::zero(), Rational::one());
        for i in 0..n {
            let (lo, up) = (&self.lower_est[i], &self.upper_est[i]);
            if *lo < zero || lo > up || *up > one {
                return Err(DcError::Invariant(format!(
                    "need 0 <= lower <= upper <= 1 at grid index {i}"
                )));
            }
            if i > 0
                && (self.lower_est[i - 1] > *lo || self.upper_est[i - 1] > *up)
            {
                return Err(DcError::Invariant(format!(
                    "estimates decrease in delta at grid index {i}"
                )));
            }
        }
        if self.tail_min_distance > self.tail_max_distance {
            return Err(DcError::Invariant("tail min distance exceeds max".into()));
        }
        Ok(())
    }

    pub fn gap(&self, i: usize) -> Rational {
        &self.upper_est[i] - &self.lower_est[i]
    }
}

fn validate_grid(grid: &[Rational], diameter: &Rational) -> Result<()> {
    for (i, d) in grid.iter().enumerate() {
        if *d <= Rational::zero() || d > diameter {
            return Err(DcError::Domain(format!(
                "delta {} outside (0, diameter]",
                rational::format_rational(d)
            )));
        }
        if i > 0 && grid[i - 1] >= *d {
            return Err(DcError::Domain("delta grid must be strictly increasing".into()));
        }
    }
    Ok(())
}

/// Exact comparison of `a/n` against `b/m`.
fn frac_lt(a: u64, n: u64, b: u64, m: u64) -> bool {
    (a as u128) * (m as u128) < (b as u128) * (n as u128)
}

/// Estimates over the tail window of prefix lengths
/// `n ∈ (len·(1 − tail_fraction), len]`.
pub fn empirical_df_pair(
    series: &DistanceSeries,
    delta_grid: &[Rational],
    tol: &Tolerances,
) -> Result<EmpiricalDF> {
    tol.validate()?;
    let len = series.len() as u64;
    let keep = Rational::one() - &tol.tail_fraction;
    // len >= 1/(1 - tail_fraction)
    if ratio_u64(len, 1) * &keep < Rational::one() {
        return Err(DcError::Domain(format!(
            "series of length {len} too short for tail fraction {}",
            rational::format_rational(&tol.tail_fraction)
        )));
    }
    let head = (ratio_u64(len, 1) * keep).floor();
    let head: u64 = head.to_integer().try_into().unwrap_or(0);
    let start = (head + 1).min(len).max(1);
    let times: Vec<u64> = (start..=len).collect();
    estimate(series, delta_grid, &times, None)
}

/// Estimates sampled only at the given prefix lengths (strictly increasing,
/// each in `1..=len`).
pub fn empirical_df_at_checkpoints(
    series: &DistanceSeries,
    delta_grid: &[Rational],
    checkpoints: &[u64],
) -> Result<EmpiricalDF> {
    if checkpoints.is_empty() {
        return Err(DcError::Config("no checkpoint times".into()));
    }
    let len = series.len() as u64;
    for (i, &t) in checkpoints.iter().enumerate() {
        if t == 0 || t > len {
            return Err(DcError::Domain(format!("checkpoint {t} outside 1..={len}")));
        }
        if i > 0 && checkpoints[i - 1] >= t {
            return Err(DcError::Domain("checkpoints must be strictly increasing".into()));
        }
    }
    estimate(series, delta_grid, checkpoints, Some(checkpoints.to_vec()))
}

fn estimate(
    series: &DistanceSeries,
    delta_grid: &[Rational],
    times: &[u64],
    checkpoint_times: Option<Vec<u64>>,
) -> Result<EmpiricalDF> {
    if delta_grid.is_empty() {
        return Err(DcError::Config("empty delta grid".into()));
    }
    for d in delta_grid {
        series.check_delta(d)?;
    }
    validate_grid(delta_grid, series.diameter())?;

    let mut lower_est = Vec::with_capacity(delta_grid.len());
    let mut upper_est = Vec::with_capacity(delta_grid.len());
    for delta in delta_grid {
        let counts = series.prefix_counts_below(delta);
        let (mut lo, mut hi) = ((counts[times[0] as usize], times[0]), (counts[times[0] as usize], times[0]));
        for &n in &times[1..] {
            let c = counts[n as usize];
            if frac_lt(c, n, lo.0, lo.1) {
                lo = (c, n);
            }
            if frac_lt(hi.0, hi.1, c, n) {
                hi = (c, n);
            }
        }
        lower_est.push(ratio_u64(lo.0, lo.1));
        upper_est.push(ratio_u64(hi.0, hi.1));
    }

    let tail_start = times[0];
    let tail = &series.values()[(tail_start - 1) as usize..];
    let tail_min = tail.iter().min().cloned().unwrap_or_else(Rational::zero);
    let tail_max = tail.iter().max().cloned().unwrap_or_else(Rational::zero);

    EmpiricalDF::from_estimates(
        delta_grid.to_vec(),
        lower_est,
        upper_est,
        checkpoint_times,
        tail_start,
        tail_min,
        tail_max,
        series.diameter().clone(),
    )
}

/// Counts `(#{k < n : d_k < δ}, #{k < n : d_k >= δ})`, tallied independently.
pub fn complement_counts(series: &DistanceSeries, delta: &Rational, n: usize) -> Result<(u64, u64)> {
    series.check_delta(delta)?;
    if n > series.len() {
        return Err(DcError::Domain(format!(
            "prefix length {n} exceeds series length {}",
            series.len()
        )));
    }
    let below = series.values()[..n].iter().filter(|v| *v < delta).count() as u64;
    let at_or_above = series.values()[..n].iter().filter(|v| *v >= delta).count() as u64;
    Ok((below, at_or_above))
}

/// Checks, at every prefix length `m = 1..=n`, that the fraction of distances
/// below `δ` and the fraction at or above `δ` sum to exactly one.
pub fn complement_identity_check(series: &DistanceSeries, delta: &Rational, n: usize) -> Result<bool> {
    series.check_delta(delta)?;
    if n == 0 || n > series.len() {
        return Err(DcError::Domain(format!(
            "prefix length {n} outside 1..={}",
            series.len()
        )));
    }
    let (mut below, mut above) = (0u64, 0u64);
    for (k, v) in series.values()[..n].iter().enumerate() {
        if v < delta {
            below += 1;
        }
        if v >= delta {
            above += 1;
        }
        let m = (k + 1) as u64;
        if ratio_u64(below, m) + ratio_u64(above, m) != Rational::one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of classifying one pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChaosVerdict {
    pub ly: bool,
    /// Limsup surrogate of the distance when the pair is Li-Yorke.
    #[serde(with = "rational::serde_str::opt")]
    pub ly_witness: Option<Rational>,
    pub dc1: bool,
    pub dc2: bool,
    pub dc2half: bool,
    pub dc3: bool,
    pub dc3_interval: Option<DeltaInterval>,
    /// Grid δ at which the lower estimate drops (to ~0 for DC1, below ~1 for DC2).
    #[serde(with = "rational::serde_str::opt")]
    pub epsilon_witness: Option<Rational>,
    #[serde(with = "rational::serde_str")]
    pub tolerance: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaInterval {
    #[serde(with = "rational::serde_str")]
    pub a: Rational,
    #[serde(with = "rational::serde_str")]
    pub b: Rational,
}

/// Classifies a pair from its estimated distribution functions.
///
/// * DC1: upper ≈ 1 on the whole grid and lower ≈ 0 at some ε.
/// * DC2: upper ≈ 1 on the whole grid and lower ≲ 1 at some ε.
/// * DC3: some consecutive grid points `δ_i < δ_{i+1}` with
///   `lower(δ_{i+1}) + tol < upper(δ_i)`; by monotonicity both functions are
///   then separated on all of `[δ_i, δ_{i+1}]`. The widest run of such
///   segments (leftmost on ties) is reported.
/// * DC2½: a gap at the smallest grid δ, provided that δ is itself within
///   `zero_gap · diameter` of 0; otherwise only via DC2.
/// * LY: tail min distance ≈ 0 and tail max distance clearly positive.
///
/// The implications DC1 ⇒ DC2 ⇒ DC2½ and DC2 ⇒ DC3 are enforced.
pub fn classify_pair(df: &EmpiricalDF, tol: &Tolerances) -> Result<ChaosVerdict> {
    tol.validate()?;
    df.validate()?;
    let n = df.delta_grid.len();
    if n < 2 {
        return Err(DcError::Config(format!(
            "delta grid too coarse: {n} value(s), need at least 2"
        )));
    }
    let near_one = Rational::one() - &tol.one_gap;
    let upper_all_one = df.upper_est.iter().all(|u| *u >= near_one);

    let zero_witness = (0..n).find(|&i| df.lower_est[i] <= tol.zero_gap);
    let below_one_witness = (0..n).find(|&i| df.lower_est[i] <= near_one);

    let dc1 = upper_all_one && zero_witness.is_some();
    let dc2 = dc1 || (upper_all_one && below_one_witness.is_some());
    let epsilon_witness = if dc1 {
        zero_witness.map(|i| df.delta_grid[i].clone())
    } else if dc2 {
        below_one_witness.map(|i| df.delta_grid[i].clone())
    } else {
        None
    };

    // Widest run of certified segments.
    let certified: Vec<bool> = (0..n - 1)
        .map(|i| &df.lower_est[i + 1] + &tol.zero_gap < df.upper_est[i])
        .collect();
    let mut best: Option<(usize, usize)> = None;
    let mut i = 0;
    while i < certified.len() {
        if !certified[i] {
            i += 1;
            continue;
        }
        let s = i;
        while i < certified.len() && certified[i] {
            i += 1;
        }
        let run = (s, i); // grid points s..=i
        let width = &df.delta_grid[run.1] - &df.delta_grid[run.0];
        let better = match best {
            None => true,
            Some((bs, be)) => width > &df.delta_grid[be] - &df.delta_grid[bs],
        };
        if better {
            best = Some(run);
        }
    }
    let mut dc3_interval = best.map(|(s, e)| DeltaInterval {
        a: df.delta_grid[s].clone(),
        b: df.delta_grid[e].clone(),
    });
    if dc3_interval.is_none() && dc2 {
        dc3_interval = epsilon_witness.clone().map(|b| DeltaInterval {
            a: Rational::zero(),
            b,
        });
    }
    let dc3 = dc3_interval.is_some();

    let small = &df.delta_grid[0];
    let small_enough = *small <= &tol.zero_gap * &df.diameter;
    let dc2half = dc2 || (small_enough && &df.lower_est[0] + &tol.zero_gap < df.upper_est[0]);

    let zero_level = &tol.zero_gap * &df.diameter;
    let ly = df.tail_min_distance <= zero_level && df.tail_max_distance > zero_level;

    Ok(ChaosVerdict {
        ly,
        ly_witness: ly.then(|| df.tail_max_distance.clone()),
        dc1,
        dc2,
        dc2half,
        dc3,
        dc3_interval,
        epsilon_witness,
        tolerance: tol.zero_gap.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn series(v: &[(i64, i64)]) -> DistanceSeries {
        DistanceSeries::new(v.iter().map(|&(p, q)| rat(p, q)).collect(), int(1)).unwrap()
    }

    #[test]
    fn constant_zero_series_is_always_close() {
        let s = series(&[(0, 1); 10]);
        let df = empirical_df_pair(&s, &[rat(1, 8), rat(1, 2)], &Tolerances::default()).unwrap();
        assert!(df.lower_est.iter().all(|v| *v == int(1)));
        assert!(df.upper_est.iter().all(|v| *v == int(1)));
    }

    #[test]
    fn constant_diameter_series_is_never_close() {
        let s = series(&[(1, 1); 10]);
        let df = empirical_df_pair(&s, &[rat(1, 2), int(1)], &Tolerances::default()).unwrap();
        assert_eq!(df.lower_est[0], int(0));
        assert_eq!(df.upper_est[0], int(0));
        // d_k = 1 is not < 1 either
        assert_eq!(df.upper_est[1], int(0));
    }

    #[test]
    fn alternating_series_half_below() {
        let v: Vec<(i64, i64)> = (0..200).map(|k| (k % 2, 1)).collect();
        let s = series(&v);
        let tol = Tolerances::default();
        let df = empirical_df_pair(&s, &[rat(1, 2), int(1)], &tol).unwrap();
        assert_eq!(df.lower_est[0], rat(1, 2));
        assert!((&df.upper_est[0] - rat(1, 2)) <= tol.zero_gap);
        assert_eq!(df.tail_start, 101);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(DistanceSeries::new(vec![], int(1)).is_err());
        assert!(DistanceSeries::new(vec![int(2)], int(1)).is_err());
        let s = series(&[(0, 1), (1, 1), (0, 1)]);
        let tol = Tolerances::default();
        assert!(matches!(
            empirical_df_pair(&s, &[int(0)], &tol),
            Err(DcError::Domain(_))
        ));
        assert!(matches!(
            empirical_df_pair(&s, &[int(2)], &tol),
            Err(DcError::Domain(_))
        ));
        let one = series(&[(0, 1)]);
        assert!(empirical_df_pair(&one, &[rat(1, 2)], &tol).is_err());
    }

    #[test]
    fn complement_identity_small_example() {
        let s = series(&[(0, 1), (1, 1), (0, 1), (1, 1)]);
        assert_eq!(complement_counts(&s, &rat(1, 2), 4).unwrap(), (2, 2));
        assert!(complement_identity_check(&s, &rat(1, 2), 4).unwrap());
        assert!(complement_identity_check(&s, &rat(1, 2), 0).is_err());
        assert!(complement_identity_check(&s, &rat(1, 2), 5).is_err());
    }

    #[test]
    fn csv_ingestion_mixes_formats() {
        let text = "# header comment\n0\n1/2\n0.25\n\n1\n";
        let s = DistanceSeries::from_csv_reader(text.as_bytes(), int(1)).unwrap();
        assert_eq!(s.values(), &[int(0), rat(1, 2), rat(1, 4), int(1)]);
        assert!(DistanceSeries::from_csv_reader("x\n".as_bytes(), int(1)).is_err());
        assert!(DistanceSeries::from_csv_reader("".as_bytes(), int(1)).is_err());
    }

    #[test]
    fn no_gap_means_no_distributional_chaos() {
        let grid = vec![rat(1, 4), rat(1, 2), int(1)];
        let est = vec![rat(1, 3), rat(1, 2), int(1)];
        let df = EmpiricalDF::from_estimates(
            grid,
            est.clone(),
            est,
            None,
            1,
            int(0),
            int(0),
            int(1),
        )
        .unwrap();
        let v = classify_pair(&df, &Tolerances::default()).unwrap();
        assert!(!v.dc1 && !v.dc2 && !v.dc2half && !v.dc3);
        assert!(v.dc3_interval.is_none());
    }

    #[test]
    fn dc1_profile_sets_every_flag() {
        let grid = vec![rat(1, 256), rat(1, 2), int(1)];
        let df = EmpiricalDF::from_estimates(
            grid,
            vec![rat(1, 100), rat(1, 50), rat(1, 20)],
            vec![rat(97, 100), rat(98, 100), int(1)],
            None,
            1,
            int(0),
            int(1),
            int(1),
        )
        .unwrap();
        let v = classify_pair(&df, &Tolerances::default()).unwrap();
        assert!(v.dc1 && v.dc2 && v.dc2half && v.dc3 && v.ly);
        assert_eq!(v.epsilon_witness, Some(rat(1, 256)));
        let iv = v.dc3_interval.unwrap();
        assert_eq!((iv.a, iv.b), (rat(1, 256), int(1)));
    }

    #[test]
    fn one_point_grid_is_a_configuration_error() {
        let df = EmpiricalDF::from_estimates(
            vec![rat(1, 2)],
            vec![int(0)],
            vec![int(1)],
            None,
            1,
            int(0),
            int(1),
            int(1),
        )
        .unwrap();
        assert!(matches!(
            classify_pair(&df, &Tolerances::default()),
            Err(DcError::Config(_))
        ));
    }

    #[test]
    fn dc2_without_certified_segment_still_reports_interval() {
        // Upper ~1 everywhere, lower just under 1: DC2 but no tol-sized gap.
        let df = EmpiricalDF::from_estimates(
            vec![rat(1, 2), int(1)],
            vec![rat(19, 20), rat(19, 20)],
            vec![rat(19, 20), int(1)],
            None,
            1,
            int(0),
            int(1),
            int(1),
        )
        .unwrap();
        let v = classify_pair(&df, &Tolerances::default()).unwrap();
        assert!(v.dc2 && v.dc3 && v.dc2half && !v.dc1);
        let iv = v.dc3_interval.unwrap();
        assert_eq!((iv.a, iv.b), (int(0), rat(1, 2)));
    }
}
