use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{DcError, Result};

use super::point::{format_word, parse_word, Symbol, Word, MAX_ALPHABET};

/// Extra language predicate for subshifts not given by forbidden words.
/// Must be pure.
pub type MembershipHook = Arc<dyn Fn(&[Symbol]) -> bool + Send + Sync>;

/// A subshift of `{0,…,k−1}^ℕ` given by forbidden words and an optional
/// membership hook.
#[derive(Clone)]
pub struct Subshift {
    alphabet: u8,
    forbidden: Vec<Word>,
    hook: Option<MembershipHook>,
}

impl fmt::Debug for Subshift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Subshift")
            .field("alphabet", &self.alphabet)
            .field(
                "forbidden",
                &self.forbidden.iter().map(|w| format_word(w)).collect::<Vec<_>>(),
            )
            .field("hook", &self.hook.is_some())
            .finish()
    }
}

/// JSON form: `{"alphabet_size": 2, "forbidden_words": ["11"]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubshiftSpec {
    pub alphabet_size: u8,
    #[serde(default)]
    pub forbidden_words: Vec<String>,
}

impl Subshift {
    pub fn new(alphabet: u8, forbidden: Vec<Word>) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&alphabet) {
            return Err(DcError::Domain(format!(
                "alphabet size {alphabet} outside 2..={MAX_ALPHABET}"
            )));
        }
        for w in &forbidden {
            if w.is_empty() {
                return Err(DcError::Invariant("forbidden words must be nonempty".into()));
            }
            if w.iter().any(|&s| s >= alphabet) {
                return Err(DcError::Invariant(format!(
                    "forbidden word {} not over the alphabet",
                    format_word(w)
                )));
            }
        }
        Ok(Subshift {
            alphabet,
            forbidden,
            hook: None,
        })
    }

    pub fn full(alphabet: u8) -> Result<Self> {
        Self::new(alphabet, Vec::new())
    }

    /// Binary sequences without two consecutive ones.
    pub fn golden_mean() -> Self {
        Self::new(2, vec![vec![1, 1]]).expect("valid golden-mean shift")
    }

    pub fn with_hook(mut self, hook: MembershipHook) -> Self {
        self.hook = Some(hook);
        self
    }

    pub fn from_spec(spec: &SubshiftSpec) -> Result<Self> {
        let words = spec
            .forbidden_words
            .iter()
            .map(|w| parse_word(w, spec.alphabet_size))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec.alphabet_size, words)
    }

    pub fn to_spec(&self) -> SubshiftSpec {
        SubshiftSpec {
            alphabet_size: self.alphabet,
            forbidden_words: self.forbidden.iter().map(|w| format_word(w)).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(&serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn forbidden(&self) -> &[Word] {
        &self.forbidden
    }

    /// True iff no forbidden word ends at the last position of `w`.
    fn suffix_ok(&self, w: &[Symbol]) -> bool {
        !self.forbidden.iter().any(|f| w.ends_with(f))
    }

    /// Word avoids every forbidden factor and passes the hook.
    pub fn admits(&self, w: &[Symbol]) -> bool {
        if w.iter().any(|&s| s >= self.alphabet) {
            return false;
        }
        let factors_ok = (1..=w.len()).all(|end| self.suffix_ok(&w[..end]));
        factors_ok && self.hook.as_ref().is_none_or(|h| h(w))
    }

    /// All admissible words of the given length, in lexicographic order.
    pub fn language(&self, length: usize) -> Result<Vec<Word>> {
        if length == 0 {
            return Err(DcError::Domain("word length must be at least 1".into()));
        }
        let mut out = Vec::new();
        let mut stack: Vec<Word> = vec![Vec::new()];
        while let Some(w) = stack.pop() {
            if w.len() == length {
                if self.hook.as_ref().is_none_or(|h| h(&w)) {
                    out.push(w);
                }
                continue;
            }
            for s in (0..self.alphabet).rev() {
                let mut next = w.clone();
                next.push(s);
                if self.suffix_ok(&next) {
                    stack.push(next);
                }
            }
        }
        Ok(out)
    }

    /// Checks that the language is factorial and extendable up to `length`.
    pub fn check_language(&self, length: usize) -> Result<()> {
        let mut prev: Option<BTreeSet<Word>> = None;
        for n in 1..=length + 1 {
            let cur: BTreeSet<Word> = self.language(n)?.into_iter().collect();
            if let Some(p) = &prev {
                for w in &cur {
                    if !p.contains(&w[1..]) || !p.contains(&w[..w.len() - 1]) {
                        return Err(DcError::Invariant(format!(
                            "language not factorial at {}",
                            format_word(w)
                        )));
                    }
                }
                for w in p {
                    let extends = (0..self.alphabet).any(|s| {
                        let mut e = w.clone();
                        e.push(s);
                        cur.contains(&e)
                    });
                    if !extends {
                        return Err(DcError::Invariant(format!(
                            "word {} has no right extension",
                            format_word(w)
                        )));
                    }
                }
            }
            prev = Some(cur);
        }
        Ok(())
    }
}

/// Free-function form of [`Subshift::language`].
pub fn sft_language(x: &Subshift, length: usize) -> Result<Vec<Word>> {
    x.language(length)
}

/// One word is a prefix of the other.
fn compatible(a: &[Symbol], b: &[Symbol]) -> bool {
    let n = a.len().min(b.len());
    a[..n] == b[..n]
}

/// Finite-depth check that the cylinders `A = [word_a]` and `B = [word_b]`
/// in `X` satisfy `σ(A) ∩ σ(B) ⊇ A ∪ B`: every admissible word of length
/// `depth` in `A ∪ B` must have a one-symbol left extension landing in `A`
/// and another landing in `B`.
pub fn horseshoe_check(x: &Subshift, word_a: &[Symbol], word_b: &[Symbol], depth: usize) -> Result<bool> {
    if word_a.is_empty() || word_b.is_empty() {
        return Err(DcError::Precondition("cylinder words must be nonempty".into()));
    }
    if compatible(word_a, word_b) {
        return Err(DcError::Precondition(format!(
            "cylinders [{}] and [{}] overlap",
            format_word(word_a),
            format_word(word_b)
        )));
    }
    if depth < word_a.len().max(word_b.len()) {
        return Err(DcError::Domain(format!(
            "depth {depth} shorter than a cylinder word"
        )));
    }
    let longer: BTreeSet<Word> = x.language(depth + 1)?.into_iter().collect();
    let lands_in = |w: &Word, cyl: &[Symbol]| {
        (0..x.alphabet()).any(|s| {
            let mut e = Vec::with_capacity(w.len() + 1);
            e.push(s);
            e.extend_from_slice(w);
            compatible(&e, cyl) && longer.contains(&e)
        })
    };
    for w in x.language(depth)? {
        if !(w.starts_with(word_a) || w.starts_with(word_b)) {
            continue;
        }
        if !lands_in(&w, word_a) || !lands_in(&w, word_b) {
            return Ok(false);
        }
    }
    Ok(true)
}
