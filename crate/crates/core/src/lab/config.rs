//! Experiment configuration, as read from JSON or assembled from CLI flags.

use std::path::{Path, PathBuf};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{DcError, Result};
use crate::rational::{format_rational, rat, Rational};
use crate::shiftspace::growth::{GrowthKind, GrowthSequence};
use crate::shiftspace::point::{parse_word, MAX_ALPHABET};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    #[serde(rename = "lemma34")]
    CombCertificate,
    Dc2scan,
    Dc2half,
    Dc1set,
    Horseshoe,
    Gehman,
    GeneralizedComb,
    Classify,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::CombCertificate,
        Experiment::Dc2scan,
        Experiment::Dc2half,
        Experiment::Dc1set,
        Experiment::Horseshoe,
        Experiment::Gehman,
        Experiment::GeneralizedComb,
        Experiment::Classify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::CombCertificate => "lemma34",
            Experiment::Dc2scan => "dc2scan",
            Experiment::Dc2half => "dc2half",
            Experiment::Dc1set => "dc1set",
            Experiment::Horseshoe => "horseshoe",
            Experiment::Gehman => "gehman",
            Experiment::GeneralizedComb => "generalized-comb",
            Experiment::Classify => "classify",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| DcError::Config(format!("unknown experiment {s:?}")))
    }

    /// Tolerance used when the config leaves it unset.
    pub fn default_tol(self) -> Rational {
        match self {
            Experiment::CombCertificate => rat(1, 100),
            Experiment::Dc2half => rat(1, 10000),
            _ => rat(1, 20),
        }
    }
}

impl std::fmt::Display for Experiment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Block-length sequence for the scrambled set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrowthChoice {
    Pow2sq,
    Factorial,
    Custom(Vec<u64>),
}

impl GrowthChoice {
    /// Parses `pow2sq`, `factorial` or `custom:<file>`; the file holds
    /// integers separated by whitespace or commas.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pow2sq" => Ok(GrowthChoice::Pow2sq),
            "factorial" => Ok(GrowthChoice::Factorial),
            _ => match s.strip_prefix("custom:") {
                Some(path) => Self::read_custom(Path::new(path)),
                None => Err(DcError::Config(format!(
                    "growth must be pow2sq, factorial or custom:<file>, got {s:?}"
                ))),
            },
        }
    }

    fn read_custom(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DcError::Config(format!("cannot read {}: {e}", path.display())))?;
        let terms = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u64>()
                    .map_err(|_| DcError::Parse(format!("bad growth term {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GrowthChoice::Custom(terms))
    }

    pub fn sequence(&self) -> Result<GrowthSequence> {
        match self {
            GrowthChoice::Pow2sq => Ok(GrowthSequence::pow2_square()),
            GrowthChoice::Factorial => Ok(GrowthSequence::factorial_power()),
            GrowthChoice::Custom(v) => GrowthSequence::new(GrowthKind::Custom(v.clone())),
        }
    }
}

/// Parameters of one run. Unset fields take per-experiment defaults.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<u32>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::rational::serde_str::opt_vec"
    )]
    pub deltas: Option<Vec<Rational>>,
    /// Number of `x₁` grid points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthChoice>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix_blocks: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forbidden: Option<Vec<String>>,
    /// Cylinder words for the horseshoe test.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub words: Option<Vec<String>>,
    /// Spike bases per level; a single entry means a constant base.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bases: Option<Vec<u64>>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::rational::serde_str::opt_vec"
    )]
    pub x1: Option<Vec<Rational>>,
    /// Seed words of the scrambled points, each followed by zeros.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<String>>,
    /// Distance series file for `classify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<PathBuf>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::rational::serde_str::opt"
    )]
    pub diameter: Option<Rational>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::rational::serde_str::opt"
    )]
    pub tol: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            levels: None,
            deltas: None,
            grid: None,
            growth: None,
            prefix_blocks: None,
            alphabet: None,
            depth: None,
            forbidden: None,
            words: None,
            bases: None,
            x1: None,
            seeds: None,
            series: None,
            diameter: None,
            tol: None,
            out: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| DcError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DcError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn tol(&self) -> Rational {
        self.tol.clone().unwrap_or_else(|| self.experiment.default_tol())
    }

    /// Checks the parameters against the experiment's preconditions.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(DcError::Config(msg));
        use Experiment::*;
        let e = self.experiment;
        let allowed: &[&str] = match e {
            CombCertificate => &["levels", "deltas"],
            Dc2scan => &["deltas", "grid", "levels", "x1"],
            Dc2half => &["deltas", "x1"],
            Dc1set => &["deltas", "growth", "prefix_blocks", "seeds", "depth"],
            Horseshoe => &["alphabet", "forbidden", "words", "depth"],
            Gehman => &["alphabet", "forbidden", "depth"],
            GeneralizedComb => &["bases", "levels", "deltas", "x1"],
            Classify => &["series", "diameter", "deltas"],
        };
        for (name, set) in self.set_fields() {
            if set && !allowed.contains(&name) {
                return bad(format!("{name} does not apply to {e}"));
            }
        }
        if let Some(t) = &self.tol {
            if *t <= Rational::zero() || *t >= Rational::one() {
                return bad(format!("tol {} outside (0, 1)", format_rational(t)));
            }
        }
        if let Some(d) = &self.deltas {
            if d.is_empty() {
                return bad("empty delta grid".into());
            }
            if d.iter().any(|x| *x <= Rational::zero()) {
                return bad("deltas must be positive".into());
            }
        }
        if let Some(xs) = &self.x1 {
            if xs.is_empty() || xs.iter().any(|x| *x < Rational::zero() || *x > Rational::one()) {
                return bad("x1 values must lie in [0, 1]".into());
            }
        }
        match e {
            CombCertificate => {
                let l = self.levels.unwrap_or(12);
                if l < 4 || l % 2 != 0 || l > 20 {
                    return bad(format!("lemma34 needs an even level count in 4..=20, got {l}"));
                }
                if let Some(d) = &self.deltas {
                    let mut d = d.clone();
                    d.sort();
                    if d != [rat(1, 4), rat(1, 2)] {
                        return bad("lemma34 is defined for deltas 1/4 and 1/2".into());
                    }
                }
            }
            Dc2scan => {
                if self.grid.unwrap_or(1024) < 2 {
                    return bad("x1 grid needs at least 2 points".into());
                }
                let l = self.levels.unwrap_or(8);
                if !(4..=12).contains(&l) {
                    return bad(format!("dc2scan pair sampling needs levels in 4..=12, got {l}"));
                }
                check_open_half(self.deltas.as_deref())?;
            }
            Dc2half => {
                check_open_half(self.deltas.as_deref())?;
                if let Some(d) = &self.deltas {
                    if d.windows(2).any(|w| w[1] >= w[0]) {
                        return bad("dc2half deltas must be strictly decreasing".into());
                    }
                }
            }
            Dc1set => {
                if let Some(d) = &self.deltas {
                    if d.len() < 2 || d.iter().any(|x| *x > Rational::one()) {
                        return bad("dc1set needs at least 2 deltas in (0, 1]".into());
                    }
                }
                let k = self.prefix_blocks.unwrap_or(4);
                if !(2..=6).contains(&k) {
                    return bad(format!("prefix_blocks must be in 2..=6, got {k}"));
                }
                if self.depth.unwrap_or(8) < 3 {
                    return bad("growth depth must be at least 3".into());
                }
                let seeds = self.seeds();
                if seeds.len() < 2 {
                    return bad("dc1set needs at least 2 seeds".into());
                }
                for s in &seeds {
                    parse_word(s, 2)?;
                }
                if let Some(GrowthChoice::Custom(v)) = &self.growth {
                    GrowthSequence::custom(v.clone())
                        .map_err(|err| DcError::Config(err.to_string()))?;
                }
            }
            Horseshoe | Gehman => {
                let k = self.alphabet.unwrap_or(if e == Gehman { 5 } else { 2 });
                if !(2..=MAX_ALPHABET).contains(&k) {
                    return bad(format!("alphabet size {k} outside 2..={MAX_ALPHABET}"));
                }
                let depth = self.depth.unwrap_or(if e == Gehman { 3 } else { 8 });
                if depth < 2 || depth > 12 {
                    return bad(format!("depth {depth} outside 2..=12"));
                }
                for w in self.forbidden.iter().flatten() {
                    parse_word(w, k)?;
                }
                if e == Horseshoe {
                    let words = self.words.clone().unwrap_or_default();
                    if self.words.is_some() && words.len() != 2 {
                        return bad("horseshoe needs exactly 2 words".into());
                    }
                    for w in &words {
                        parse_word(w, k)?;
                    }
                }
            }
            GeneralizedComb => {
                let bases = self.bases();
                if bases.is_empty() || bases.iter().any(|&b| b < 2) {
                    return bad("bases must be at least 2".into());
                }
                let l = self.comb_levels();
                if l == 0 || (bases.len() > 1 && l as usize > bases.len()) {
                    return bad(format!("levels {l} outside 1..={}", bases.len()));
                }
                if let Some(d) = &self.deltas {
                    if d.iter().any(|x| *x > Rational::one()) {
                        return bad("deltas must lie in (0, 1]".into());
                    }
                }
            }
            Classify => {
                if self.series.is_none() {
                    return bad("classify needs a series file".into());
                }
                match &self.deltas {
                    Some(d) if d.len() >= 2 => {}
                    _ => return bad("classify needs at least 2 deltas".into()),
                }
                if self.diameter.as_ref().is_some_and(|d| *d <= Rational::zero()) {
                    return bad("diameter must be positive".into());
                }
            }
        }
        Ok(())
    }

    fn set_fields(&self) -> [(&'static str, bool); 13] {
        [
            ("levels", self.levels.is_some()),
            ("deltas", self.deltas.is_some()),
            ("grid", self.grid.is_some()),
            ("growth", self.growth.is_some()),
            ("prefix_blocks", self.prefix_blocks.is_some()),
            ("alphabet", self.alphabet.is_some()),
            ("depth", self.depth.is_some()),
            ("forbidden", self.forbidden.is_some()),
            ("words", self.words.is_some()),
            ("bases", self.bases.is_some()),
            ("x1", self.x1.is_some()),
            ("seeds", self.seeds.is_some()),
            ("series", self.series.is_some() || self.diameter.is_some()),
        ]
    }

    pub(crate) fn seeds(&self) -> Vec<String> {
        self.seeds
            .clone()
            .unwrap_or_else(|| vec!["0".to_string(), "1".to_string()])
    }

    pub(crate) fn comb_levels(&self) -> u32 {
        let bases = self.bases();
        let default = if bases.len() == 1 { 6 } else { bases.len().min(8) as u32 };
        self.levels.unwrap_or(default)
    }

    pub(crate) fn bases(&self) -> Vec<u64> {
        self.bases.clone().unwrap_or_else(|| vec![3, 4, 5, 6, 7])
    }
}

fn check_open_half(deltas: Option<&[Rational]>) -> Result<()> {
    if let Some(d) = deltas {
        if d.iter().any(|x| *x >= rat(1, 2)) {
            return Err(DcError::Config("deltas must lie in (0, 1/2)".into()));
        }
    }
    Ok(())
}
