use serde::{Deserialize, Serialize};

use crate::error::{DcError, Result};
use crate::rational::{ratio_u64, Rational};

/// Per-level subdivision bases `b_n`. Level `n` places spikes at `j / D_n`
/// with `D_n = b_1 ⋯ b_n`, skipping the positions already used by coarser
/// levels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseSchedule {
    Constant(u64),
    /// `bases[n − 1]` is the base of level `n`; deeper levels are undefined.
    Explicit(Vec<u64>),
    /// `b_n = first + step·(n − 1)`: the spike count per gap grows without bound.
    Arithmetic { first: u64, step: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombParams {
    pub schedule: BaseSchedule,
}

impl Default for CombParams {
    fn default() -> Self {
        Self::triadic()
    }
}

impl CombParams {
    /// Two new spikes in every gap: the comb of the DC3 example.
    pub fn triadic() -> Self {
        CombParams {
            schedule: BaseSchedule::Constant(3),
        }
    }

    pub fn new(schedule: BaseSchedule) -> Result<Self> {
        let p = CombParams { schedule };
        p.validate()?;
        Ok(p)
    }

    pub fn constant(base: u64) -> Result<Self> {
        Self::new(BaseSchedule::Constant(base))
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match &self.schedule {
            BaseSchedule::Constant(b) => *b >= 2,
            BaseSchedule::Explicit(v) => !v.is_empty() && v.iter().all(|&b| b >= 2),
            BaseSchedule::Arithmetic { first, .. } => *first >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(DcError::Invariant(format!(
                "every comb base must be at least 2: {:?}",
                self.schedule
            )))
        }
    }

    pub fn is_triadic(&self) -> bool {
        self.schedule == BaseSchedule::Constant(3)
    }

    /// Deepest level the schedule defines, if bounded.
    pub fn max_level(&self) -> Option<u32> {
        match &self.schedule {
            BaseSchedule::Explicit(v) => Some(v.len() as u32),
            _ => None,
        }
    }

    pub fn base(&self, n: u32) -> Result<u64> {
        if n == 0 {
            return Err(DcError::Domain("comb levels start at 1".into()));
        }
        match &self.schedule {
            BaseSchedule::Constant(b) => Ok(*b),
            BaseSchedule::Explicit(v) => v.get(n as usize - 1).copied().ok_or_else(|| {
                DcError::Domain(format!("schedule defines only {} levels", v.len()))
            }),
            BaseSchedule::Arithmetic { first, step } => step
                .checked_mul(n as u64 - 1)
                .and_then(|s| s.checked_add(*first))
                .ok_or_else(|| DcError::Domain(format!("base of level {n} overflows"))),
        }
    }

    /// `D_n = b_1 ⋯ b_n`, with `D_0 = 1`.
    pub fn denominator(&self, n: u32) -> Result<u64> {
        let mut d: u64 = 1;
        for i in 1..=n {
            d = d.checked_mul(self.base(i)?).ok_or_else(|| {
                DcError::Domain(format!("level {n} is too fine for 64-bit indices"))
            })?;
        }
        Ok(d)
    }

    /// Whether `j` indexes a level-`n` spike.
    pub fn in_index_set(&self, n: u32, j: u64) -> Result<bool> {
        let d = self.denominator(n)?;
        Ok(j >= 1 && j <= d && j % self.base(n)? != 0)
    }

    pub fn spike_grid(&self, n: u32) -> Result<SpikeGrid> {
        spike_grid(n, self)
    }
}

/// Level data of the comb: positions `j / D_n` for `j ∈ J_n`, height
/// `1 / D_n` and the number of spikes up to this level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpikeGrid {
    pub level: u32,
    pub base: u64,
    pub denominator: u64,
    /// `#J_n`
    pub count: u64,
    /// `l_n = D_n − 1`
    pub cumulative: u64,
}

impl SpikeGrid {
    pub fn height(&self) -> Rational {
        ratio_u64(1, self.denominator)
    }

    /// `J_n` in increasing order.
    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        (1..self.denominator).filter(move |j| j % self.base != 0)
    }

    pub fn positions(&self) -> Vec<Rational> {
        self.indices()
            .map(|j| ratio_u64(j, self.denominator))
            .collect()
    }

    pub fn contains(&self, j: u64) -> bool {
        j >= 1 && j < self.denominator && j % self.base != 0
    }
}

pub fn spike_grid(n: u32, params: &CombParams) -> Result<SpikeGrid> {
    if n < 1 {
        return Err(DcError::Domain("spike levels start at 1".into()));
    }
    let base = params.base(n)?;
    let denominator = params.denominator(n)?;
    let coarser = denominator / base;
    Ok(SpikeGrid {
        level: n,
        base,
        denominator,
        count: denominator - coarser,
        cumulative: denominator - 1,
    })
}
