//! Block-length sequences `a_1 < a_2 < …` for the scrambled-set construction
//! and the growth test `(b_n + n) / a_{n+1} → 0`, `b_n = a_1 + … + a_n`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{DcError, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthKind {
    /// `a_i = 2^(i²)`
    Pow2Square,
    /// `a_i = (i!)^(i!)`
    FactorialPower,
    /// `a_i = 2^i`; grows too slowly for the construction.
    Pow2,
    /// `a_i = i`; only useful for illustrating the block pattern.
    Linear,
    /// Explicit finite list `a_1, a_2, …`.
    Custom(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthSequence {
    kind: GrowthKind,
}

impl GrowthSequence {
    pub fn new(kind: GrowthKind) -> Result<Self> {
        if let GrowthKind::Custom(v) = &kind {
            if v.is_empty() {
                return Err(DcError::Invariant("custom growth sequence is empty".into()));
            }
            check_increasing(v.iter().map(|&a| BigUint::from(a)))?;
        }
        Ok(GrowthSequence { kind })
    }

    pub fn pow2_square() -> Self {
        GrowthSequence {
            kind: GrowthKind::Pow2Square,
        }
    }

    pub fn factorial_power() -> Self {
        GrowthSequence {
            kind: GrowthKind::FactorialPower,
        }
    }

    pub fn custom(v: Vec<u64>) -> Result<Self> {
        Self::new(GrowthKind::Custom(v))
    }

    pub fn kind(&self) -> &GrowthKind {
        &self.kind
    }

    /// Number of available terms (`None` for closed forms).
    pub fn len(&self) -> Option<usize> {
        match &self.kind {
            GrowthKind::Custom(v) => Some(v.len()),
            _ => None,
        }
    }

    /// `a_i` for `i >= 1`.
    pub fn term(&self, i: usize) -> Result<BigUint> {
        if i == 0 {
            return Err(DcError::Domain("growth terms are indexed from 1".into()));
        }
        Ok(match &self.kind {
            GrowthKind::Pow2Square => BigUint::one() << (i * i),
            GrowthKind::FactorialPower => {
                let f: BigUint = (1..=i as u64).map(BigUint::from).product();
                let e = f
                    .to_usize()
                    .ok_or_else(|| DcError::Domain(format!("{i}! too large as an exponent")))?;
                num_traits::pow(f, e)
            }
            GrowthKind::Pow2 => BigUint::one() << i,
            GrowthKind::Linear => BigUint::from(i),
            GrowthKind::Custom(v) => BigUint::from(*v.get(i - 1).ok_or_else(|| {
                DcError::Domain(format!("custom growth has only {} terms", v.len()))
            })?),
        })
    }

    /// `a_1..=a_n`.
    pub fn terms(&self, n: usize) -> Result<Vec<BigUint>> {
        (1..=n).map(|i| self.term(i)).collect()
    }

    /// Block lengths as machine integers while the running total fits in
    /// `u64`, stopping after `max_blocks` blocks or once the total reaches
    /// `min_total`, whichever comes first.
    pub fn u64_lengths(&self, max_blocks: usize, min_total: Option<u64>) -> Vec<u64> {
        let mut out = Vec::new();
        let mut total: u64 = 0;
        for i in 1..=max_blocks {
            if min_total.is_some_and(|m| total >= m) {
                break;
            }
            if self.len().is_some_and(|l| i > l) {
                break;
            }
            if let GrowthKind::Pow2Square = self.kind {
                if i * i >= 64 {
                    break;
                }
            }
            let Ok(a) = self.term(i) else { break };
            let Some(a) = a.to_u64() else { break };
            let Some(t) = total.checked_add(a) else { break };
            total = t;
            out.push(a);
        }
        out
    }
}

fn check_increasing(terms: impl Iterator<Item = BigUint>) -> Result<()> {
    let mut prev = BigUint::zero();
    for (i, a) in terms.enumerate() {
        if a <= prev {
            return Err(DcError::Invariant(format!(
                "growth sequence not strictly increasing and positive at a_{}",
                i + 1
            )));
        }
        prev = a;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioEntry {
    pub n: usize,
    /// `(b_n + n) / a_{n+1}`, rounded for display.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthValidation {
    pub pass: bool,
    pub decreasing_tail: bool,
    pub final_below_threshold: bool,
    pub depth: usize,
    pub trace: Vec<RatioEntry>,
}

/// `num / den` as `f64`, robust to operands far beyond `f64` range.
fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    let shift = num.bits().max(den.bits()).saturating_sub(900) as usize;
    let n = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
    if d == 0.0 {
        // den ≪ num: the ratio overflows
        return f64::INFINITY;
    }
    n / d
}

/// Computes `(b_n + n)/a_{n+1}` for `n = 1..=depth`. Passes iff the ratio is
/// strictly decreasing over the second half of the range and the last ratio
/// is below `threshold`. All comparisons are exact.
pub fn validate_growth(
    growth: &GrowthSequence,
    depth: usize,
    threshold: &Rational,
) -> Result<GrowthValidation> {
    if depth < 3 {
        return Err(DcError::Domain(format!("depth {depth} < 3")));
    }
    if *threshold <= Rational::zero() {
        return Err(DcError::Domain("threshold must be positive".into()));
    }
    let a = growth.terms(depth + 1)?;
    check_increasing(a.iter().cloned())?;

    // numerators (b_n + n) for n = 1..=depth, denominators a_{n+1}
    let mut nums = Vec::with_capacity(depth);
    let mut b = BigUint::zero();
    for n in 1..=depth {
        b += &a[n - 1];
        nums.push(&b + BigUint::from(n));
    }
    let ratio = |n: usize| (&nums[n - 1], &a[n]);

    let trace = (1..=depth)
        .map(|n| {
            let (p, q) = ratio(n);
            RatioEntry {
                n,
                ratio: ratio_f64(p, q),
            }
        })
        .collect();

    let from = (depth / 2).max(1);
    let decreasing_tail = (from..depth).all(|n| {
        let (p1, q1) = ratio(n);
        let (p2, q2) = ratio(n + 1);
        p1 * q2 > p2 * q1
    });

    let (tn, td) = (threshold.numer(), threshold.denom());
    let (tn, td) = (
        tn.to_biguint().expect("positive threshold"),
        td.to_biguint().expect("positive denominator"),
    );
    let (p, q) = ratio(depth);
    let final_below_threshold = p * &td < q * &tn;

    Ok(GrowthValidation {
        pass: decreasing_tail && final_below_threshold,
        decreasing_tail,
        final_below_threshold,
        depth,
        trace,
    })
}

/// A growth sequence that passed [`validate_growth`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidatedGrowth {
    growth: GrowthSequence,
    report: GrowthValidation,
}

impl ValidatedGrowth {
    pub fn new(growth: GrowthSequence, depth: usize, threshold: &Rational) -> Result<Self> {
        let report = validate_growth(&growth, depth, threshold)?;
        if !report.pass {
            return Err(DcError::Precondition(format!(
                "growth sequence {:?} fails the growth test at depth {depth}",
                growth.kind()
            )));
        }
        Ok(ValidatedGrowth { growth, report })
    }

    pub fn growth(&self) -> &GrowthSequence {
        &self.growth
    }

    pub fn report(&self) -> &GrowthValidation {
        &self.report
    }
}

/// Smallest `t >= 0` with `2^-t < δ`, i.e. `d < δ` for a distance
/// `d = 2^-i` exactly when `i >= t`. Requires `δ > 0`.
pub fn dyadic_threshold(delta: &Rational) -> u32 {
    let mut t = 0u32;
    let mut p = Rational::one();
    while p >= *delta {
        t += 1;
        p /= Rational::from_integer(2.into());
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn pow2_square_passes() {
        let v = validate_growth(&GrowthSequence::pow2_square(), 8, &rat(1, 20)).unwrap();
        assert!(v.pass, "{v:?}");
        assert!(v.trace.last().unwrap().ratio < 0.05);
        // ratio bound n·2^(−2n−1) from b_n < 2·a_n
        for e in &v.trace[1..] {
            let n = e.n as f64;
            assert!(e.ratio <= (n + 2.0) * 2f64.powf(-2.0 * n - 1.0) + 1e-300);
        }
    }

    #[test]
    fn factorial_power_passes() {
        let v = validate_growth(&GrowthSequence::factorial_power(), 5, &rat(1, 20)).unwrap();
        assert!(v.pass);
        assert_eq!(
            GrowthSequence::factorial_power().terms(3).unwrap(),
            vec![1u32.into(), 4u32.into(), 46656u32.into()]
        );
    }

    #[test]
    fn pow2_fails() {
        let g = GrowthSequence::new(GrowthKind::Pow2).unwrap();
        let v = validate_growth(&g, 8, &rat(1, 20)).unwrap();
        assert!(!v.pass);
        // the ratio decreases toward 1 from above, so only the threshold fails
        assert!(v.decreasing_tail && !v.final_below_threshold);
        assert!(v.trace.last().unwrap().ratio > 1.0);
        assert!(ValidatedGrowth::new(g, 8, &rat(1, 20)).is_err());
    }

    #[test]
    fn invariant_and_domain_errors() {
        assert!(GrowthSequence::custom(vec![1, 1, 2]).is_err());
        assert!(GrowthSequence::custom(vec![0, 1]).is_err());
        assert!(validate_growth(&GrowthSequence::pow2_square(), 2, &rat(1, 20)).is_err());
        let short = GrowthSequence::custom(vec![1, 2, 3]).unwrap();
        assert!(validate_growth(&short, 3, &rat(1, 20)).is_err());
    }

    #[test]
    fn u64_lengths_stop_before_overflow() {
        let l = GrowthSequence::pow2_square().u64_lengths(100, None);
        assert_eq!(l.len(), 7);
        assert_eq!(l[3], 65536);
        let l = GrowthSequence::pow2_square().u64_lengths(100, Some(100));
        assert_eq!(l, vec![2, 16, 512]);
    }

    #[test]
    fn dyadic_thresholds() {
        assert_eq!(dyadic_threshold(&rat(1, 256)), 9);
        assert_eq!(dyadic_threshold(&rat(1, 1)), 1);
        assert_eq!(dyadic_threshold(&rat(3, 4)), 1);
        assert_eq!(dyadic_threshold(&rat(3, 2)), 0);
    }
}
