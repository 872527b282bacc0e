use std::sync::Arc;

use num_traits::Zero;

use crate::error::{DcError, Result};
use crate::rational::{pow2_neg, Rational};

use super::scrambled::ScrambledPoint;

pub type Symbol = u8;
pub type Word = Vec<Symbol>;

const SYMBOL_CHARS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Largest supported alphabet (one printable character per symbol).
pub const MAX_ALPHABET: u8 = 36;

pub fn symbol_char(s: Symbol) -> char {
    SYMBOL_CHARS[s as usize] as char
}

pub fn format_word(w: &[Symbol]) -> String {
    w.iter().map(|&s| symbol_char(s)).collect()
}

/// Parses `"0110"`-style words; symbols above 9 use `a..z`.
pub fn parse_word(s: &str, alphabet: u8) -> Result<Word> {
    s.trim()
        .chars()
        .map(|c| {
            let v = c
                .to_digit(36)
                .ok_or_else(|| DcError::Parse(format!("bad symbol {c:?} in word {s:?}")))?
                as u8;
            if v >= alphabet {
                return Err(DcError::Domain(format!(
                    "symbol {c:?} outside alphabet of size {alphabet}"
                )));
            }
            Ok(v)
        })
        .collect()
}

/// How symbols past the explicit prefix are generated.
#[derive(Debug, Clone)]
pub enum Rule {
    /// `preperiod` once, then `period` forever.
    EventuallyPeriodic { preperiod: Word, period: Word },
    /// A finite word followed by zeros.
    Explicit(Word),
    /// The image of a seed under the block construction of the scrambled set.
    LambdaNu(Arc<ScrambledPoint>),
}

/// A point of `{0,…,k−1}^ℕ`, exposed through index queries.
///
/// Symbol `i` is `prefix[i]` for `i < prefix.len()` and otherwise symbol
/// `offset + i − prefix.len()` of the rule.
#[derive(Debug, Clone)]
pub struct SymbolicPoint {
    alphabet: u8,
    prefix: Word,
    rule: Rule,
    offset: u64,
}

fn check_symbols(w: &[Symbol], alphabet: u8) -> Result<()> {
    match w.iter().find(|&&s| s >= alphabet) {
        Some(s) => Err(DcError::Invariant(format!(
            "symbol {s} outside alphabet of size {alphabet}"
        ))),
        None => Ok(()),
    }
}

fn check_alphabet(alphabet: u8) -> Result<()> {
    if !(2..=MAX_ALPHABET).contains(&alphabet) {
        return Err(DcError::Domain(format!(
            "alphabet size {alphabet} outside 2..={MAX_ALPHABET}"
        )));
    }
    Ok(())
}

impl SymbolicPoint {
    pub fn new(alphabet: u8, prefix: Word, rule: Rule) -> Result<Self> {
        check_alphabet(alphabet)?;
        check_symbols(&prefix, alphabet)?;
        match &rule {
            Rule::EventuallyPeriodic { preperiod, period } => {
                if period.is_empty() {
                    return Err(DcError::Invariant("empty period".into()));
                }
                check_symbols(preperiod, alphabet)?;
                check_symbols(period, alphabet)?;
            }
            Rule::Explicit(w) => check_symbols(w, alphabet)?,
            Rule::LambdaNu(_) => {
                if alphabet != 2 {
                    return Err(DcError::Invariant(
                        "scrambled points live in the 2-shift".into(),
                    ));
                }
            }
        }
        Ok(SymbolicPoint {
            alphabet,
            prefix,
            rule,
            offset: 0,
        })
    }

    /// `w` followed by zeros.
    pub fn explicit(alphabet: u8, w: Word) -> Result<Self> {
        Self::new(alphabet, Vec::new(), Rule::Explicit(w))
    }

    pub fn eventually_periodic(alphabet: u8, preperiod: Word, period: Word) -> Result<Self> {
        Self::new(alphabet, Vec::new(), Rule::EventuallyPeriodic { preperiod, period })
    }

    pub fn constant(alphabet: u8, s: Symbol) -> Result<Self> {
        Self::eventually_periodic(alphabet, Vec::new(), vec![s])
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn prefix(&self) -> &[Symbol] {
        &self.prefix
    }

    pub fn offset(&self) -> u64 {
        self.offset
    }

    /// Indices below the horizon are answerable; `None` means unbounded.
    pub fn horizon(&self) -> Option<u64> {
        match &self.rule {
            Rule::LambdaNu(p) => {
                Some((p.horizon() - self.offset.min(p.horizon())) + self.prefix.len() as u64)
            }
            _ => None,
        }
    }

    /// Symbol at index `i`; `None` only past a finite horizon.
    pub fn symbol(&self, i: u64) -> Option<Symbol> {
        let plen = self.prefix.len() as u64;
        if i < plen {
            return Some(self.prefix[i as usize]);
        }
        let i = self.offset + (i - plen);
        match &self.rule {
            Rule::EventuallyPeriodic { preperiod, period } => {
                let pre = preperiod.len() as u64;
                Some(if i < pre {
                    preperiod[i as usize]
                } else {
                    period[((i - pre) % period.len() as u64) as usize]
                })
            }
            Rule::Explicit(w) => Some(w.get(i as usize).copied().unwrap_or(0)),
            Rule::LambdaNu(p) => p.symbol(i),
        }
    }

    /// The first `n` symbols; fails if `n` exceeds the horizon.
    pub fn word(&self, n: u64) -> Result<Word> {
        (0..n)
            .map(|i| {
                self.symbol(i).ok_or_else(|| {
                    DcError::Domain(format!("index {i} beyond the point's horizon"))
                })
            })
            .collect()
    }

    /// The shift `σ`: `σ(x)_i = x_{i+1}`.
    pub fn sigma(&self) -> SymbolicPoint {
        self.shifted(1)
    }

    /// `σ^n(x)`.
    pub fn shifted(&self, n: u64) -> SymbolicPoint {
        let mut out = self.clone();
        let drop = (n as usize).min(out.prefix.len());
        out.prefix.drain(..drop);
        out.offset += n - drop as u64;
        out
    }

    /// First index in `[0, horizon)` where the points differ.
    pub fn first_disagreement(&self, other: &SymbolicPoint, horizon: u64) -> Result<Option<u64>> {
        if self.alphabet != other.alphabet {
            return Err(DcError::Domain(format!(
                "alphabet mismatch: {} vs {}",
                self.alphabet, other.alphabet
            )));
        }
        if let (Rule::LambdaNu(a), Rule::LambdaNu(b)) = (&self.rule, &other.rule) {
            if self.prefix.is_empty() && other.prefix.is_empty() && self.offset == other.offset {
                if let Some(found) = a.first_disagreement_from(b, self.offset, horizon)? {
                    return Ok(found.map(|i| i - self.offset));
                }
            }
        }
        for i in 0..horizon {
            match (self.symbol(i), other.symbol(i)) {
                (Some(a), Some(b)) if a != b => return Ok(Some(i)),
                (Some(_), Some(_)) => {}
                _ => return Ok(None),
            }
        }
        Ok(None)
    }
}

/// `2^-i` for the first disagreement `i < horizon`, or `0` when none is found
/// (meaning the distance is at most `2^-horizon`).
pub fn shift_metric(x: &SymbolicPoint, y: &SymbolicPoint, horizon: u64) -> Result<Rational> {
    if horizon == 0 {
        return Err(DcError::Domain("horizon must be at least 1".into()));
    }
    Ok(match x.first_disagreement(y, horizon)? {
        Some(i) => pow2_neg(i as u32),
        None => Rational::zero(),
    })
}

/// Free-function form of [`SymbolicPoint::sigma`].
pub fn sigma(x: &SymbolicPoint) -> SymbolicPoint {
    x.sigma()
}
