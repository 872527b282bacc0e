//! The uncountable scrambled set of the full 2-shift.
//!
//! A seed `x = x_0 x_1 x_2 …` is first spread out by `λ` into
//! `x_0 | x_0 x_1 | x_0 x_1 x_2 | …` and then by `ν` into blocks of lengths
//! `a_1, a_2, …`. Blocks with index `i_l = l(l+1)/2` are zero runs; the `l`
//! blocks after zero block `l` repeat `x_0, …, x_{l−1}` in order:
//!
//! ```text
//! 0^{a1} x0^{a2} 0^{a3} x0^{a4} x1^{a5} 0^{a6} x0^{a7} x1^{a8} x2^{a9} 0^{a10} …
//! ```
//!
//! Two such points differ on whole blocks, which makes every distance query a
//! lookup in the block table.

use std::io::Write;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::chaoscore::{DistanceSeries, EmpiricalDF};
use crate::error::{DcError, Result};
use crate::rational::{pow2_neg, ratio_u64, Rational};

use super::growth::{dyadic_threshold, GrowthSequence, ValidatedGrowth};
use super::point::{symbol_char, Rule, Symbol, SymbolicPoint, Word};

/// What a block of the construction carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockClass {
    Zero,
    /// Repeats seed coordinate `j`.
    Coordinate(u64),
}

/// Largest `l` with `l(l+1)/2 <= i`, for `i >= 1`.
fn triangular_root(i: u64) -> u64 {
    let mut l = (((8.0 * i as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while l * (l + 1) / 2 > i {
        l -= 1;
    }
    while (l + 1) * (l + 2) / 2 <= i {
        l += 1;
    }
    l
}

/// `true` iff block `i` (1-based) is one of the zero blocks `l(l+1)/2`.
pub fn is_zero_block(i: u64) -> bool {
    let l = triangular_root(i);
    l * (l + 1) / 2 == i
}

/// Class of block `i` in the composed construction `ν∘λ`.
pub fn lambda_nu_class(i: u64) -> BlockClass {
    let l = triangular_root(i);
    let il = l * (l + 1) / 2;
    if il == i {
        BlockClass::Zero
    } else {
        BlockClass::Coordinate(i - il - 1)
    }
}

/// Class of block `i` under `ν` alone: coordinate blocks consume the input
/// sequence one symbol at a time.
pub fn nu_class(i: u64) -> BlockClass {
    let l = triangular_root(i);
    let il = l * (l + 1) / 2;
    if il == i {
        BlockClass::Zero
    } else {
        BlockClass::Coordinate(l * (l - 1) / 2 + (i - il - 1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub index: u64,
    pub start: u64,
    pub len: u64,
    pub class: BlockClass,
}

impl Block {
    pub fn end(&self) -> u64 {
        self.start + self.len
    }
}

/// Materialized block layout: block `i` occupies `[b_{i−1}, b_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockTable {
    blocks: Vec<Block>,
}

impl BlockTable {
    fn from_lengths(lengths: &[u64], class_of: fn(u64) -> BlockClass) -> Self {
        let mut start = 0u64;
        let blocks = lengths
            .iter()
            .enumerate()
            .map(|(k, &len)| {
                let index = k as u64 + 1;
                let b = Block {
                    index,
                    start,
                    len,
                    class: class_of(index),
                };
                start += len;
                b
            })
            .collect();
        BlockTable { blocks }
    }

    /// Layout of `ν∘λ` for the first `max_blocks` blocks (fewer if the total
    /// length would overflow `u64`).
    pub fn lambda_nu(growth: &GrowthSequence, max_blocks: usize) -> Result<Self> {
        let lengths = growth.u64_lengths(max_blocks, None);
        if lengths.is_empty() {
            return Err(DcError::Domain("no materializable blocks".into()));
        }
        Ok(Self::from_lengths(&lengths, lambda_nu_class))
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// `b_K` for the last materialized block `K`.
    pub fn total_len(&self) -> u64 {
        self.blocks.last().map_or(0, Block::end)
    }

    /// `b_i`, the end of block `i`.
    pub fn end_of(&self, i: u64) -> Option<u64> {
        self.blocks.get((i as usize).checked_sub(1)?).map(Block::end)
    }

    pub fn block_at(&self, pos: u64) -> Option<&Block> {
        let k = self.blocks.partition_point(|b| b.end() <= pos);
        self.blocks.get(k)
    }
}

/// A point of the scrambled set: `ν(λ(seed))`, queried through its blocks.
#[derive(Debug, Clone)]
pub struct ScrambledPoint {
    seed: SymbolicPoint,
    growth: GrowthSequence,
    table: Arc<BlockTable>,
}

impl ScrambledPoint {
    pub fn seed(&self) -> &SymbolicPoint {
        &self.seed
    }

    pub fn growth(&self) -> &GrowthSequence {
        &self.growth
    }

    pub fn table(&self) -> &BlockTable {
        &self.table
    }

    pub fn horizon(&self) -> u64 {
        self.table.total_len()
    }

    fn class_symbol(&self, class: BlockClass) -> Symbol {
        match class {
            BlockClass::Zero => 0,
            BlockClass::Coordinate(j) => self.seed.symbol(j).unwrap_or(0),
        }
    }

    pub fn symbol(&self, i: u64) -> Option<Symbol> {
        self.table.block_at(i).map(|b| self.class_symbol(b.class))
    }

    /// Symbol content of block `i` (1-based) as `(symbol, length)`.
    pub fn block_content(&self, i: u64) -> Option<(Symbol, u64)> {
        let b = self.table.blocks().get((i as usize).checked_sub(1)?)?;
        Some((self.class_symbol(b.class), b.len))
    }

    /// Wraps the point as a [`SymbolicPoint`] with the `LambdaNu` rule.
    pub fn to_symbolic(self) -> SymbolicPoint {
        SymbolicPoint::new(2, Vec::new(), Rule::LambdaNu(Arc::new(self)))
            .expect("scrambled points are binary")
    }

    fn same_layout(&self, other: &ScrambledPoint) -> bool {
        Arc::ptr_eq(&self.table, &other.table) || self.table == other.table
    }

    /// Blocks on which the two points carry different symbols.
    pub fn disagreeing_blocks(&self, other: &ScrambledPoint) -> Result<Vec<Block>> {
        if !self.same_layout(other) {
            return Err(DcError::Domain("points use different block layouts".into()));
        }
        Ok(self
            .table
            .blocks()
            .iter()
            .filter(|b| self.class_symbol(b.class) != other.class_symbol(b.class))
            .cloned()
            .collect())
    }

    /// Block-level search for the first disagreement in
    /// `[from, from + horizon)`. `Ok(None)` when the layouts differ (caller
    /// falls back to symbol scanning).
    pub(crate) fn first_disagreement_from(
        &self,
        other: &ScrambledPoint,
        from: u64,
        horizon: u64,
    ) -> Result<Option<Option<u64>>> {
        if !self.same_layout(other) {
            return Ok(None);
        }
        let limit = from.saturating_add(horizon).min(self.horizon());
        let first = self.table.blocks().iter().find(|b| {
            b.end() > from && self.class_symbol(b.class) != other.class_symbol(b.class)
        });
        Ok(Some(
            first
                .map(|b| b.start.max(from))
                .filter(|&pos| pos < limit),
        ))
    }

    /// Raw symbol text, one character per symbol.
    pub fn write_prefix<W: Write>(&self, mut out: W, len: u64) -> Result<()> {
        if len > self.horizon() {
            return Err(DcError::Domain(format!(
                "prefix length {len} exceeds materialized horizon {}",
                self.horizon()
            )));
        }
        let mut buf = Vec::with_capacity(len.min(1 << 20) as usize);
        for b in self.table.blocks() {
            if b.start >= len {
                break;
            }
            let c = symbol_char(self.class_symbol(b.class)) as u8;
            let n = (b.end().min(len) - b.start) as usize;
            buf.extend(std::iter::repeat(c).take(n));
            if buf.len() >= 1 << 20 {
                out.write_all(&buf)?;
                buf.clear();
            }
        }
        out.write_all(&buf)?;
        Ok(())
    }
}

/// `λ(x)` truncated to `out_len` symbols: `x_0 x_0x_1 x_0x_1x_2 …`.
pub fn lambda_map(x: &SymbolicPoint, out_len: usize) -> Result<Word> {
    let mut out = Vec::with_capacity(out_len);
    let mut g = 1u64;
    'outer: loop {
        for t in 0..g {
            if out.len() == out_len {
                break 'outer;
            }
            out.push(
                x.symbol(t)
                    .ok_or_else(|| DcError::Domain(format!("seed index {t} beyond horizon")))?,
            );
        }
        g += 1;
    }
    Ok(out)
}

fn expand_blocks(
    x: &SymbolicPoint,
    growth: &GrowthSequence,
    out_len: usize,
    class_of: fn(u64) -> BlockClass,
) -> Result<Word> {
    let lengths = growth.u64_lengths(usize::MAX, Some(out_len as u64));
    let total: u64 = lengths.iter().sum();
    if total < out_len as u64 {
        return Err(DcError::Domain(format!(
            "only {total} symbols materializable, {out_len} requested"
        )));
    }
    let mut out = Vec::with_capacity(out_len);
    for (k, &len) in lengths.iter().enumerate() {
        let s = match class_of(k as u64 + 1) {
            BlockClass::Zero => 0,
            BlockClass::Coordinate(j) => x
                .symbol(j)
                .ok_or_else(|| DcError::Domain(format!("seed index {j} beyond horizon")))?,
        };
        let n = (len as usize).min(out_len - out.len());
        out.extend(std::iter::repeat(s).take(n));
        if out.len() == out_len {
            break;
        }
    }
    Ok(out)
}

/// `ν(x)` truncated to `out_len` symbols:
/// `0^{a1} x0^{a2} 0^{a3} x1^{a4} x2^{a5} 0^{a6} x3^{a7} …`.
///
/// Only the strict-increase invariant of `growth` is required here; the
/// growth test gates [`scrambled_point`].
pub fn nu_map(x: &SymbolicPoint, growth: &GrowthSequence, out_len: usize) -> Result<Word> {
    if x.alphabet() != 2 {
        return Err(DcError::Domain("nu acts on the 2-shift".into()));
    }
    expand_blocks(x, growth, out_len, nu_class)
}

/// The composed word `ν(λ(x))` truncated to `out_len`, expanded symbol by
/// symbol (no block table).
pub fn lambda_nu_word(x: &SymbolicPoint, growth: &GrowthSequence, out_len: usize) -> Result<Word> {
    expand_blocks(x, growth, out_len, lambda_nu_class)
}

/// Default number of materialized blocks.
pub const DEFAULT_BLOCKS: usize = 7;

/// `ν(λ(seed))` with its block table (at most `max_blocks` blocks).
pub fn scrambled_point(
    seed: &SymbolicPoint,
    growth: &ValidatedGrowth,
    max_blocks: usize,
) -> Result<ScrambledPoint> {
    if seed.alphabet() != 2 {
        return Err(DcError::Domain("seed must be a point of the 2-shift".into()));
    }
    let table = BlockTable::lambda_nu(growth.growth(), max_blocks)?;
    Ok(ScrambledPoint {
        seed: seed.clone(),
        growth: growth.growth().clone(),
        table: Arc::new(table),
    })
}

/// Two scrambled points sharing one layout, with their disagreement blocks.
#[derive(Debug, Clone)]
pub struct ScrambledPair {
    x: ScrambledPoint,
    y: ScrambledPoint,
    diff: Vec<Block>,
}

impl ScrambledPair {
    pub fn new(x: ScrambledPoint, y: ScrambledPoint) -> Result<Self> {
        let diff = x.disagreeing_blocks(&y)?;
        Ok(ScrambledPair { x, y, diff })
    }

    pub fn x(&self) -> &ScrambledPoint {
        &self.x
    }

    pub fn y(&self) -> &ScrambledPoint {
        &self.y
    }

    pub fn disagreeing_blocks(&self) -> &[Block] {
        &self.diff
    }

    pub fn horizon(&self) -> u64 {
        self.x.horizon()
    }

    /// Index of the first disagreement at or after `k`, if materialized.
    pub fn next_disagreement(&self, k: u64) -> Option<u64> {
        let i = self.diff.partition_point(|b| b.end() <= k);
        self.diff.get(i).map(|b| b.start.max(k))
    }

    /// `d(σ^k x, σ^k y)` with the metric truncated at `metric_horizon`.
    pub fn distance_at(&self, k: u64, metric_horizon: u32) -> Rational {
        match self.next_disagreement(k) {
            Some(s) if s - k < metric_horizon as u64 => pow2_neg((s - k) as u32),
            _ => Rational::zero(),
        }
    }

    /// `d(σ^k x, σ^k y)` for `k < len`, from the block table.
    pub fn distance_series(&self, len: u64, metric_horizon: u32) -> Result<DistanceSeries> {
        if len == 0 || len + metric_horizon as u64 > self.horizon() + 1 {
            return Err(DcError::Domain(format!(
                "series length {len} with metric horizon {metric_horizon} exceeds materialized horizon {}",
                self.horizon()
            )));
        }
        let values = (0..len).map(|k| self.distance_at(k, metric_horizon)).collect();
        DistanceSeries::new(values, Rational::one())
    }

    /// `#{k < n : d(σ^k x, σ^k y) < δ}` by interval arithmetic on blocks.
    pub fn count_below(&self, delta: &Rational, n: u64) -> Result<u64> {
        if *delta <= Rational::zero() || *delta > Rational::one() {
            return Err(DcError::Domain("delta outside (0, 1]".into()));
        }
        let t = dyadic_threshold(delta) as u64;
        if n + t > self.horizon() + 1 {
            return Err(DcError::Domain(format!(
                "prefix {n} needs symbols beyond the materialized horizon {}",
                self.horizon()
            )));
        }
        // k is "far" when some disagreement lies in [k, k+t−1]:
        // k ∈ [start − t + 1, end) for a disagreeing block.
        let mut far = 0u64;
        let mut covered_to = 0u64;
        for b in &self.diff {
            let lo = (b.start + 1).saturating_sub(t).max(covered_to);
            let hi = b.end().min(n);
            if lo < hi {
                far += hi - lo;
                covered_to = hi;
            }
            if b.end() >= n {
                break;
            }
        }
        Ok(n - far)
    }

    /// Fraction `#{k < n : d_k < δ} / n`.
    pub fn fraction_below(&self, delta: &Rational, n: u64) -> Result<Rational> {
        if n == 0 {
            return Err(DcError::Domain("prefix length must be positive".into()));
        }
        Ok(ratio_u64(self.count_below(delta, n)?, n))
    }

    /// Structural checkpoints (prefix lengths `<= limit`) for the lower and
    /// upper estimates.
    ///
    /// The lower checkpoint is the end of the last disagreeing block. The
    /// upper checkpoint is the last prefix length at which every window of
    /// `t` symbols started so far lies inside a zero block or earlier
    /// agreement, i.e. `t − 1` symbols before the end of the last zero block;
    /// `t` is the largest dyadic threshold on the grid.
    pub fn checkpoints(&self, delta_grid: &[Rational], limit: u64) -> Result<DfCheckpoints> {
        let t = delta_grid
            .iter()
            .map(dyadic_threshold)
            .max()
            .ok_or_else(|| DcError::Config("empty delta grid".into()))? as u64;
        let horizon = self.horizon();
        let lower = self
            .diff
            .iter()
            .rev()
            .map(Block::end)
            .find(|&e| e <= limit && e + t <= horizon + 1)
            .ok_or_else(|| {
                DcError::Config("no disagreeing block within the materialized horizon".into())
            })?;
        let upper = self
            .x
            .table()
            .blocks()
            .iter()
            .rev()
            .filter(|b| b.class == BlockClass::Zero && b.len >= t && b.index > 1)
            .map(|b| b.end() + 1 - t)
            .find(|&n| n <= limit)
            .ok_or_else(|| DcError::Config("no long zero block materialized".into()))?;
        Ok(DfCheckpoints {
            lower,
            upper,
            threshold: t as u32,
        })
    }

    /// Empirical distribution functions at the structural checkpoints up to
    /// prefix length `limit`, counted symbolically.
    pub fn empirical_df(&self, delta_grid: &[Rational], limit: u64) -> Result<EmpiricalDF> {
        let cp = self.checkpoints(delta_grid, limit)?;
        let mut times = vec![cp.lower, cp.upper];
        times.sort_unstable();
        times.dedup();
        let mut lower = Vec::with_capacity(delta_grid.len());
        let mut upper = Vec::with_capacity(delta_grid.len());
        for delta in delta_grid {
            let fr: Vec<Rational> = times
                .iter()
                .map(|&n| self.fraction_below(delta, n))
                .collect::<Result<_>>()?;
            lower.push(fr.iter().min().cloned().expect("nonempty"));
            upper.push(fr.iter().max().cloned().expect("nonempty"));
        }
        let metric_horizon = 64;
        let d: Vec<Rational> = times
            .iter()
            .map(|&n| self.distance_at(n - 1, metric_horizon))
            .collect();
        EmpiricalDF::from_estimates(
            delta_grid.to_vec(),
            lower,
            upper,
            Some(times.clone()),
            times[0],
            d.iter().min().cloned().expect("nonempty"),
            d.iter().max().cloned().expect("nonempty"),
            Rational::one(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfCheckpoints {
    pub lower: u64,
    pub upper: u64,
    pub threshold: u32,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::shiftspace::point::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    fn pt(s: &str) -> SymbolicPoint {
        SymbolicPoint::explicit(2, w(s)).unwrap()
    }

    fn validated() -> ValidatedGrowth {
        ValidatedGrowth::new(GrowthSequence::pow2_square(), 8, &rat(1, 20)).unwrap()
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_map(&pt(""), 12).unwrap(), vec![0; 12]);
        assert_eq!(lambda_map(&pt("1"), 10).unwrap(), w("1101001000"));
        let ones = SymbolicPoint::constant(2, 1).unwrap();
        assert_eq!(lambda_map(&ones, 6).unwrap(), w("111111"));
    }

    #[test]
    fn nu_examples() {
        let lin = GrowthSequence::custom(vec![1, 2, 3, 4, 5, 6]).unwrap();
        let ones = SymbolicPoint::constant(2, 1).unwrap();
        assert_eq!(
            nu_map(&ones, &lin, 21).unwrap(),
            w("011000111111111000000")
        );
        assert_eq!(nu_map(&pt(""), &lin, 21).unwrap(), vec![0; 21]);
        assert!(nu_map(&ones, &lin, 22).is_err());
        assert!(is_zero_block(6) && is_zero_block(10) && !is_zero_block(7));
    }

    #[test]
    fn nu_versus_composition() {
        // ν(λ(x)) must equal the composed block pattern
        let g = GrowthSequence::custom((1..=15).collect()).unwrap();
        let x = pt("1011");
        let lam = SymbolicPoint::explicit(2, lambda_map(&x, 40).unwrap()).unwrap();
        assert_eq!(
            nu_map(&lam, &g, 100).unwrap(),
            lambda_nu_word(&x, &g, 100).unwrap()
        );
    }

    #[test]
    fn block_classes() {
        let classes: Vec<_> = (1..=10).map(lambda_nu_class).collect();
        use BlockClass::*;
        assert_eq!(
            classes,
            vec![
                Zero,
                Coordinate(0),
                Zero,
                Coordinate(0),
                Coordinate(1),
                Zero,
                Coordinate(0),
                Coordinate(1),
                Coordinate(2),
                Zero
            ]
        );
        assert_eq!(nu_class(9), Coordinate(5));
    }

    #[test]
    fn scrambled_examples() {
        let g = validated();
        let z = scrambled_point(&pt(""), &g, 5).unwrap();
        assert!((0..z.horizon()).step_by(997).all(|i| z.symbol(i) == Some(0)));
        let one = scrambled_point(&pt("1"), &g, 5).unwrap();
        assert_eq!(one.block_content(2), Some((1, 16)));
        assert_eq!(one.symbol(1), Some(0));
        assert_eq!(one.symbol(2), Some(1));
        assert_eq!(one.symbol(17), Some(1));
        assert_eq!(one.symbol(18), Some(0));
        assert!(one.symbol(one.horizon()).is_none());
        let bad = SymbolicPoint::constant(3, 0).unwrap();
        assert!(scrambled_point(&bad, &g, 5).is_err());
    }

    #[test]
    fn shifting_by_block_end_aligns_next_block() {
        let g = validated();
        let p = scrambled_point(&pt("1"), &g, 5).unwrap();
        let b2 = p.table().end_of(2).unwrap();
        let s = p.clone().to_symbolic().shifted(b2);
        // block 3 (zeros, length 512) now starts at the origin, block 4 (ones) after it
        assert_eq!(s.word(512).unwrap(), vec![0; 512]);
        assert_eq!(s.symbol(512), Some(1));
    }

    #[test]
    fn write_prefix_text() {
        let g = validated();
        let p = scrambled_point(&pt("1"), &g, 3).unwrap();
        let mut out = Vec::new();
        p.write_prefix(&mut out, 20).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "00111111111111111100");
        assert!(p.write_prefix(Vec::new(), 10_000).is_err());
    }

    #[test]
    fn block_counts_match_brute_force() {
        let g = validated();
        let x = scrambled_point(&pt("01"), &g, 5).unwrap();
        let y = scrambled_point(&pt("11"), &g, 5).unwrap();
        let pair = ScrambledPair::new(x.clone(), y.clone()).unwrap();
        let n = 70_000u64;
        let xs = x.to_symbolic().word(n + 20).unwrap();
        let ys = y.to_symbolic().word(n + 20).unwrap();
        for (delta, t) in [(rat(1, 256), 9usize), (rat(1, 2), 2), (rat(1, 1), 1)] {
            let brute = (0..n as usize)
                .filter(|&k| (k..k + t).all(|i| xs[i] == ys[i]))
                .count() as u64;
            assert_eq!(pair.count_below(&delta, n).unwrap(), brute);
        }
    }
}
