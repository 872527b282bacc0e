use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{DcError, Result};
use crate::rational::{abs_diff, format_rational, max_rat, ratio_u64, Rational};

use super::params::CombParams;

/// A point of the comb: on the spine `I × {0}` or strictly above the base
/// of a spike. Height zero is always represented as a spine point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DendritePoint {
    Spine(#[serde(with = "crate::rational::serde_str")] Rational),
    Spike {
        level: u32,
        index: u64,
        /// `index / D_level`
        #[serde(with = "crate::rational::serde_str")]
        x: Rational,
        #[serde(with = "crate::rational::serde_str")]
        height: Rational,
    },
}

impl DendritePoint {
    pub fn spine(x: Rational) -> Result<Self> {
        if x < Rational::zero() || x > Rational::one() {
            return Err(DcError::Domain(format!(
                "spine coordinate {} outside [0, 1]",
                format_rational(&x)
            )));
        }
        Ok(DendritePoint::Spine(x))
    }

    /// Point at height `y` on spike `(n, j)`; `y = 0` yields the spine point.
    pub fn spike(params: &CombParams, n: u32, j: u64, y: Rational) -> Result<Self> {
        let grid = params.spike_grid(n)?;
        if !grid.contains(j) {
            return Err(DcError::Domain(format!("{j} is not a level-{n} spike index")));
        }
        let x = ratio_u64(j, grid.denominator);
        if y.is_zero() {
            return Ok(DendritePoint::Spine(x));
        }
        if y < Rational::zero() || y > grid.height() {
            return Err(DcError::Domain(format!(
                "height {} outside (0, {}] on level {n}",
                format_rational(&y),
                format_rational(&grid.height())
            )));
        }
        Ok(DendritePoint::Spike {
            level: n,
            index: j,
            x,
            height: y,
        })
    }

    /// Endpoint at the top of spike `(n, j)`.
    pub fn spike_top(params: &CombParams, n: u32, j: u64) -> Result<Self> {
        let h = ratio_u64(1, params.denominator(n)?);
        Self::spike(params, n, j, h)
    }

    /// Embedded coordinates in the plane.
    pub fn coords(&self) -> (Rational, Rational) {
        match self {
            DendritePoint::Spine(x) => (x.clone(), Rational::zero()),
            DendritePoint::Spike { x, height, .. } => (x.clone(), height.clone()),
        }
    }

    pub fn is_spine(&self) -> bool {
        matches!(self, DendritePoint::Spine(_))
    }

    /// `(level, index)` of a spike point.
    pub fn spike_label(&self) -> Option<(u32, u64)> {
        match self {
            DendritePoint::Spike { level, index, .. } => Some((*level, *index)),
            DendritePoint::Spine(_) => None,
        }
    }

    pub fn is_spike_top(&self) -> bool {
        match self {
            DendritePoint::Spike { x, height, index, .. } => {
                // x = j / D, so D = j / x and the top sits at height 1 / D
                height * Rational::from_integer((*index).into()) == *x
            }
            DendritePoint::Spine(_) => false,
        }
    }

    /// Checks the variant invariants against `params`.
    pub fn validate(&self, params: &CombParams) -> Result<()> {
        match self {
            DendritePoint::Spine(x) => Self::spine(x.clone()).map(|_| ()),
            DendritePoint::Spike {
                level,
                index,
                x,
                height,
            } => {
                if height.is_zero() {
                    return Err(DcError::Invariant("spike point at height 0 is not canonical".into()));
                }
                let canon = Self::spike(params, *level, *index, height.clone())?;
                if canon.coords().0 != *x {
                    return Err(DcError::Invariant(format!(
                        "spike ({level}, {index}) has inconsistent position {}",
                        format_rational(x)
                    )));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for DendritePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.coords();
        write!(f, "({}, {})", format_rational(&x), format_rational(&y))
    }
}

/// Max metric of the plane.
pub fn distance(p: &DendritePoint, q: &DendritePoint) -> Rational {
    let (px, py) = p.coords();
    let (qx, qy) = q.coords();
    max_rat(&abs_diff(&px, &qx), &abs_diff(&py, &qy)).clone()
}
