//! Limit values of the upper distribution function for the pair
//! `((x₁, 0), (1/3, 1/3))` and the scans built on them.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{DcError, Result};
use crate::rational::{format_rational, int, max_rat, min_rat, rat, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormDF {
    #[serde(with = "crate::rational::serde_str")]
    pub x1: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub delta: Rational,
    /// Length of the `δ`-neighbourhood of `x₁` inside `[0, 1]`.
    #[serde(with = "crate::rational::serde_str")]
    pub a: Rational,
    /// Distance from the near end of the spine to the far edge of the
    /// neighbourhood.
    #[serde(with = "crate::rational::serde_str")]
    pub b: Rational,
    /// `log(1/δ) / log 3`; only bounds the finite-time correction term.
    pub m: f64,
    /// `3a / (1 + 2b)`
    #[serde(with = "crate::rational::serde_str")]
    pub limit: Rational,
}

impl ClosedFormDF {
    /// Band `[−3^m·a − 2, 2]` of the correction term in the numerator of the
    /// finite-time fraction.
    pub fn correction_band(&self) -> (f64, f64) {
        (-(3f64.powf(self.m)) * to_f64(&self.a) - 2.0, 2.0)
    }
}

pub fn phi_star_closed_form(x1: &Rational, delta: &Rational) -> Result<ClosedFormDF> {
    let half = rat(1, 2);
    if *delta <= Rational::zero() || *delta >= half {
        return Err(DcError::Domain(format!(
            "delta {} outside (0, 1/2)",
            format_rational(delta)
        )));
    }
    if *x1 < Rational::zero() || *x1 > Rational::one() {
        return Err(DcError::Domain(format!(
            "x1 {} outside [0, 1]",
            format_rational(x1)
        )));
    }
    let hi = x1 + delta;
    let lo = x1 - delta;
    let one = Rational::one();
    let zero = Rational::zero();
    let a = (min_rat(&hi, &one) - max_rat(&lo, &zero)).abs();
    let b = if *x1 <= half { hi } else { one - x1 + delta };
    let limit = int(3) * &a / (int(1) + int(2) * &b);
    let m = (1.0 / to_f64(delta)).ln() / 3f64.ln();
    Ok(ClosedFormDF {
        x1: x1.clone(),
        delta: delta.clone(),
        a,
        b,
        m,
        limit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dc2Scan {
    #[serde(with = "crate::rational::serde_str")]
    pub delta: Rational,
    pub grid_size: usize,
    #[serde(with = "crate::rational::serde_str")]
    pub maximum: Rational,
    #[serde(with = "crate::rational::serde_str::vec")]
    pub argmax: Vec<Rational>,
}

/// `{i/(N−1)} ∪ {δ, 1 − δ}`, sorted.
pub fn scan_grid(delta: &Rational, grid_size: usize) -> Result<Vec<Rational>> {
    if grid_size < 2 {
        return Err(DcError::Domain("x1 grid needs at least 2 points".into()));
    }
    let last = grid_size as i64 - 1;
    let mut xs: Vec<Rational> = (0..=last).map(|i| rat(i, last)).collect();
    xs.push(delta.clone());
    xs.push(Rational::one() - delta);
    xs.sort();
    xs.dedup();
    Ok(xs)
}

/// Maximum of the limit over `x₁ ∈ {i/(N−1)} ∪ {δ, 1 − δ}`.
pub fn dc2_absence_scan(delta: &Rational, grid_size: usize) -> Result<Dc2Scan> {
    let xs = scan_grid(delta, grid_size)?;
    let mut maximum = Rational::zero();
    let mut argmax = Vec::new();
    for x in xs {
        let v = phi_star_closed_form(&x, delta)?.limit;
        if v > maximum {
            maximum = v;
            argmax.clear();
            argmax.push(x);
        } else if v == maximum {
            argmax.push(x);
        }
    }
    Ok(Dc2Scan {
        delta: delta.clone(),
        grid_size,
        maximum,
        argmax,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dc2HalfScan {
    #[serde(with = "crate::rational::serde_str")]
    pub x1: Rational,
    #[serde(with = "crate::rational::serde_str::vec")]
    pub deltas: Vec<Rational>,
    #[serde(with = "crate::rational::serde_str::vec")]
    pub values: Vec<Rational>,
    pub strictly_decreasing: bool,
    #[serde(with = "crate::rational::serde_str")]
    pub final_value: Rational,
}

/// The limit along a strictly decreasing `δ` grid.
pub fn dc2half_limit_scan(x1: &Rational, deltas: &[Rational]) -> Result<Dc2HalfScan> {
    if deltas.is_empty() {
        return Err(DcError::Domain("empty delta grid".into()));
    }
    if deltas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(DcError::Domain("delta grid must be strictly decreasing".into()));
    }
    let values = deltas
        .iter()
        .map(|d| phi_star_closed_form(x1, d).map(|c| c.limit))
        .collect::<Result<Vec<_>>>()?;
    let strictly_decreasing = values.windows(2).all(|w| w[1] < w[0]);
    Ok(Dc2HalfScan {
        x1: x1.clone(),
        deltas: deltas.to_vec(),
        final_value: values.last().expect("nonempty").clone(),
        values,
        strictly_decreasing,
    })
}

/// `δ = 2^-m` for `m = from..=to`.
pub fn dyadic_deltas(from: u32, to: u32) -> Vec<Rational> {
    (from..=to).map(crate::rational::pow2_neg).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        let c = phi_star_closed_form(&int(1), &rat(1, 4)).unwrap();
        assert_eq!((c.a, c.b, c.limit), (rat(1, 4), rat(1, 4), rat(1, 2)));
        let c = phi_star_closed_form(&rat(1, 4), &rat(1, 4)).unwrap();
        assert_eq!((c.a, c.b, c.limit), (rat(1, 2), rat(1, 2), rat(3, 4)));
        let c = phi_star_closed_form(&rat(1, 2), &rat(1, 1024)).unwrap();
        assert_eq!(c.limit, rat(6, 1024) / (int(2) + rat(2, 1024)));
        assert!((c.m - 10.0 * 2f64.ln() / 3f64.ln()).abs() < 1e-12);
        assert!(phi_star_closed_form(&int(0), &rat(1, 2)).is_err());
        assert!(phi_star_closed_form(&rat(3, 2), &rat(1, 4)).is_err());
    }

    #[test]
    fn scan_examples() {
        let s = dc2_absence_scan(&rat(1, 4), 1024).unwrap();
        assert_eq!(s.maximum, rat(3, 4));
        assert_eq!(s.argmax, vec![rat(1, 4), rat(3, 4)]);
        let s = dc2_absence_scan(&rat(1, 8), 64).unwrap();
        assert_eq!(s.maximum, rat(1, 2));
        assert_eq!(s.argmax, vec![rat(1, 8), rat(7, 8)]);
    }

    #[test]
    fn half_scan_examples() {
        let ds = dyadic_deltas(2, 20);
        let s0 = dc2half_limit_scan(&int(0), &ds).unwrap();
        let s1 = dc2half_limit_scan(&int(1), &ds).unwrap();
        assert_eq!(s0.values, s1.values);
        for (d, v) in ds.iter().zip(&s0.values) {
            assert_eq!(*v, int(3) * d / (int(1) + int(2) * d));
        }
        assert!(s0.strictly_decreasing);
        assert!(dc2half_limit_scan(&int(0), &[rat(1, 8), rat(1, 4)]).is_err());
    }
}
