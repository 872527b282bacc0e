use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{DcError, Result};
use crate::rational::{format_rational, int, ratio_u64, Rational};

use super::params::CombParams;
use super::point::{distance, DendritePoint};

/// Spike whose top receives the top of `(n, j)`: the next spike of level `n`
/// in walk order (rightward on odd levels, leftward on even ones), or the
/// first spike of level `n + 1` once the level is exhausted.
pub fn successor(params: &CombParams, n: u32, j: u64) -> Result<(u32, u64)> {
    if !params.in_index_set(n, j)? {
        return Err(DcError::Domain(format!("{j} is not a level-{n} spike index")));
    }
    let b = params.base(n)?;
    let d = params.denominator(n)?;
    if n % 2 == 1 {
        if j == d - 1 {
            return Ok((n + 1, params.denominator(n + 1)? - 1));
        }
        Ok((n, if (j + 1) % b != 0 { j + 1 } else { j + 2 }))
    } else {
        if j == 1 {
            return Ok((n + 1, 1));
        }
        Ok((n, if (j - 1) % b != 0 { j - 1 } else { j - 2 }))
    }
}

fn check_spike(params: &CombParams, n: u32, j: u64) -> Result<(Rational, Rational)> {
    let grid = params.spike_grid(n)?;
    if !grid.contains(j) {
        return Err(DcError::Domain(format!("{j} is not a level-{n} spike index")));
    }
    Ok((ratio_u64(j, grid.denominator), grid.height()))
}

/// Linear map of `[0, (2/3)h_n]` onto the spine segment between the base of
/// spike `(n, j)` and the base of its successor, sending `0` to the own base.
pub fn psi_eval(params: &CombParams, n: u32, j: u64, y: &Rational) -> Result<Rational> {
    let (z, h) = check_spike(params, n, j)?;
    let top = &h * Rational::new(2.into(), 3.into());
    if *y < Rational::zero() || *y > top {
        return Err(DcError::Domain(format!(
            "psi argument {} outside [0, {}]",
            format_rational(y),
            format_rational(&top)
        )));
    }
    let (tn, tj) = successor(params, n, j)?;
    let target = ratio_u64(tj, params.denominator(tn)?);
    Ok(&z + (target - &z) * (y / top))
}

/// Increasing linear map of `[(2/3)h_n, h_n]` onto `[0, h]`, where `h` is
/// the height of the successor spike.
pub fn phi_eval(params: &CombParams, n: u32, j: u64, y: &Rational) -> Result<Rational> {
    let (_, h) = check_spike(params, n, j)?;
    let low = &h * Rational::new(2.into(), 3.into());
    if *y < low || *y > h {
        return Err(DcError::Domain(format!(
            "phi argument {} outside [{}, {}]",
            format_rational(y),
            format_rational(&low),
            format_rational(&h)
        )));
    }
    let (tn, _) = successor(params, n, j)?;
    let th = ratio_u64(1, params.denominator(tn)?);
    Ok(th * (y - &low) / (h - low))
}

/// The map `f`: identity on the spine, the lower two thirds of a spike fold
/// onto the spine, the upper third stretches over the successor spike.
pub fn apply_f(params: &CombParams, p: &DendritePoint) -> Result<DendritePoint> {
    match p {
        DendritePoint::Spine(_) => Ok(p.clone()),
        DendritePoint::Spike {
            level,
            index,
            height,
            ..
        } => {
            let (n, j) = (*level, *index);
            let h = ratio_u64(1, params.denominator(n)?);
            let split = h * Rational::new(2.into(), 3.into());
            if *height <= split {
                DendritePoint::spine(psi_eval(params, n, j, height)?)
            } else {
                let (tn, tj) = successor(params, n, j)?;
                DendritePoint::spike(params, tn, tj, phi_eval(params, n, j, height)?)
            }
        }
    }
}

/// `(p, f(p), …, f^N(p))`.
pub fn orbit(params: &CombParams, p: &DendritePoint, steps: usize) -> Result<Vec<DendritePoint>> {
    p.validate(params)?;
    let mut out = Vec::with_capacity(steps + 1);
    let mut cur = p.clone();
    for _ in 0..steps {
        let next = apply_f(params, &cur)?;
        out.push(std::mem::replace(&mut cur, next));
    }
    out.push(cur);
    Ok(out)
}

/// Position of a spike top along the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelWalkState {
    pub level: u32,
    pub index: u64,
    pub elapsed: u64,
}

impl LevelWalkState {
    /// The top of the first spike `(1/D_1, 1/D_1)` at time 0.
    pub fn start() -> Self {
        LevelWalkState {
            level: 1,
            index: 1,
            elapsed: 0,
        }
    }
}

/// One step of the symbolic spike-top walk.
pub fn spike_top_walk(params: &CombParams, state: LevelWalkState) -> Result<LevelWalkState> {
    let (level, index) = successor(params, state.level, state.index)?;
    Ok(LevelWalkState {
        level,
        index,
        elapsed: state.elapsed + 1,
    })
}

/// Iterator over walk states starting from `state` (inclusive).
pub struct Walk<'a> {
    params: &'a CombParams,
    next: Option<LevelWalkState>,
}

impl Iterator for Walk<'_> {
    type Item = LevelWalkState;

    fn next(&mut self) -> Option<LevelWalkState> {
        let cur = self.next?;
        self.next = spike_top_walk(self.params, cur).ok();
        Some(cur)
    }
}

pub fn walk_from(params: &CombParams, state: LevelWalkState) -> Walk<'_> {
    Walk {
        params,
        next: Some(state),
    }
}

/// Height relative to the spike's own height, `y / h_n`.
fn relative_height(params: &CombParams, p: &DendritePoint) -> Result<Option<Rational>> {
    Ok(match p {
        DendritePoint::Spine(_) => None,
        DendritePoint::Spike { level, height, .. } => {
            Some(height * Rational::from_integer(params.denominator(*level)?.into()))
        }
    })
}

/// Exact number of steps after which a non-endpoint lands on the spine.
///
/// On the upper third the relative height evolves as `r ↦ 3r − 2`, so
/// `1 − r` triples until `r ≤ 2/3`; spike tops (`r = 1`) never land.
pub fn landing_time(params: &CombParams, p: &DendritePoint) -> Result<Option<u64>> {
    let Some(r) = relative_height(params, p)? else {
        return Ok(Some(0));
    };
    let gap = Rational::one() - r;
    if gap.is_zero() {
        return Ok(None);
    }
    let third = Rational::new(1.into(), 3.into());
    let mut g = gap;
    let mut k = 0u64;
    while g < third {
        g *= int(3);
        k += 1;
    }
    Ok(Some(k + 1))
}

/// Smallest `m ≤ cap` with `f^m(p)` on the spine.
pub fn eventually_fixed_time(params: &CombParams, p: &DendritePoint, cap: u64) -> Result<Option<u64>> {
    p.validate(params)?;
    let mut cur = p.clone();
    for m in 0..=cap {
        if cur.is_spine() {
            return Ok(Some(m));
        }
        if m < cap {
            cur = apply_f(params, &cur)?;
        }
    }
    Ok(None)
}

/// Exact two-sided agreement of `f` at `y = (2/3)h_n` and at the spike base
/// for every spike of levels `1..=max_level`.
pub fn boundary_continuity_check(params: &CombParams, max_level: u32) -> Result<bool> {
    for n in 1..=max_level {
        let grid = params.spike_grid(n)?;
        let split = grid.height() * Rational::new(2.into(), 3.into());
        for j in grid.indices() {
            // part 2 at the boundary
            let lower = DendritePoint::spine(psi_eval(params, n, j, &split)?)?;
            // part 3 in the limit y ↓ (2/3)h_n
            let (tn, tj) = successor(params, n, j)?;
            let upper = DendritePoint::spike(params, tn, tj, phi_eval(params, n, j, &split)?)?;
            if lower != upper {
                return Ok(false);
            }
            // near the base the spike folds onto its own foot, which is fixed
            let foot = DendritePoint::spine(psi_eval(params, n, j, &Rational::zero())?)?;
            if foot != DendritePoint::spine(ratio_u64(j, grid.denominator))?
                || apply_f(params, &foot)? != foot
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Compares the symbolic walk with the exact orbit of the first spike top
/// for `steps` steps; returns the first time they differ.
pub fn walk_orbit_mismatch(params: &CombParams, steps: usize) -> Result<Option<u64>> {
    let start = DendritePoint::spike_top(params, 1, 1)?;
    let mut cur = start;
    let mut state = LevelWalkState::start();
    for k in 0..=steps as u64 {
        if cur != DendritePoint::spike_top(params, state.level, state.index)? {
            return Ok(Some(k));
        }
        if k < steps as u64 {
            cur = apply_f(params, &cur)?;
            state = spike_top_walk(params, state)?;
        }
    }
    Ok(None)
}

/// `count` spike points below the tops on levels `1..=max_level`, spread
/// round-robin over the spikes at relative heights `(2i + 1)/(2L + 1)`.
pub fn sample_spike_points(params: &CombParams, max_level: u32, count: usize) -> Result<Vec<DendritePoint>> {
    let mut spikes = Vec::new();
    for n in 1..=max_level {
        let grid = params.spike_grid(n)?;
        spikes.extend(grid.indices().map(|j| (n, j, grid.height())));
    }
    if spikes.is_empty() || count == 0 {
        return Ok(Vec::new());
    }
    let layers = count.div_ceil(spikes.len()) as i64;
    (0..count)
        .map(|i| {
            let (n, j, h) = &spikes[i % spikes.len()];
            let layer = (i / spikes.len()) as i64;
            let r = Rational::new((2 * layer + 1).into(), (2 * layers + 1).into());
            DendritePoint::spike(params, *n, *j, h * r)
        })
        .collect()
}

/// Number of walk steps from the first spike top to `(n, j)`.
pub fn walk_time(params: &CombParams, n: u32, j: u64) -> Result<u64> {
    let grid = params.spike_grid(n)?;
    if !grid.contains(j) {
        return Err(DcError::Domain(format!("{j} is not a level-{n} spike index")));
    }
    let start = params.denominator(n - 1)? - 1;
    let b = grid.base;
    // rank of j among J_n in walk order
    let below = (j - 1) - (j - 1) / b;
    let rank = if n % 2 == 1 { below } else { grid.count - 1 - below };
    Ok(start + rank)
}

/// Time after which two spike-top orbits stay within `1 / D_m` of each
/// other.
///
/// Both tops ride the same walk at a fixed time offset `Δ`. Consecutive
/// tops from level `N` on are at most `2 / D_N` apart, so once the earlier
/// one reaches a level `N` with `D_N ≥ 2Δ·D_m` the bound holds forever.
pub fn endpoint_convergence_witness(
    params: &CombParams,
    p: &DendritePoint,
    q: &DendritePoint,
    m: u32,
) -> Result<u64> {
    let label = |x: &DendritePoint| {
        if !x.is_spike_top() {
            return Err(DcError::Domain(format!("{x} is not a spike top")));
        }
        Ok(x.spike_label().expect("spike top has a label"))
    };
    let (pn, pj) = label(p)?;
    let (qn, qj) = label(q)?;
    let tp = walk_time(params, pn, pj)?;
    let tq = walk_time(params, qn, qj)?;
    let delta = tp.abs_diff(tq).max(1);
    let target = (2 * delta)
        .checked_mul(params.denominator(m)?)
        .ok_or_else(|| DcError::Domain("witness level too deep".into()))?;
    let mut level = 1;
    while params.denominator(level)? < target {
        level += 1;
    }
    let reach = params.denominator(level - 1)? - 1;
    Ok(reach.saturating_sub(tp.min(tq)))
}

/// Checks the witness exactly over `extra` steps past it.
pub fn verify_convergence_witness(
    params: &CombParams,
    p: &DendritePoint,
    q: &DendritePoint,
    m: u32,
    extra: u64,
) -> Result<bool> {
    let w = endpoint_convergence_witness(params, p, q, m)?;
    let bound = ratio_u64(1, params.denominator(m)?);
    let (mut a, mut b) = (p.clone(), q.clone());
    for k in 0..=w + extra {
        if k >= w && distance(&a, &b) > bound {
            return Ok(false);
        }
        a = apply_f(params, &a)?;
        b = apply_f(params, &b)?;
    }
    Ok(true)
}
