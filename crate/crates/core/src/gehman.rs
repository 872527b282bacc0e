//! Gehman-style dendrites over a `k`-letter alphabet, truncated at a finite
//! depth, and the map `g` that drops the first letter of every address.
//!
//! The branch point `c_w` sits at the end of the branch `B_w`, which starts
//! at `c_{w minus last letter}` and has length `2^-|w|`. Endpoints are the
//! limits along infinite addresses; at depth `D` they are represented by
//! their length-`D` prefixes.

use std::collections::BTreeSet;
use std::io::Write;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{DcError, Result};
use crate::rational::{format_rational, max_rat, min_rat, pow2_neg, to_f64, Rational};
use crate::shiftspace::point::{format_word, SymbolicPoint, Word, MAX_ALPHABET};
use crate::shiftspace::subshift::Subshift;
use crate::svg::Drawing;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GehmanDendrite {
    k: u8,
    depth: usize,
    /// Retained addresses of length `0..=depth`, closed under prefixes and
    /// under dropping the first letter.
    words: BTreeSet<Word>,
}

#[derive(Debug, Clone)]
pub enum GehmanPoint {
    BranchPoint(Word),
    Endpoint(SymbolicPoint),
    /// Point at fraction `t ∈ (0, 1)` along `B_w` from its upper end.
    ArcInterior { word: Word, t: Rational },
}

impl GehmanPoint {
    pub fn root() -> Self {
        GehmanPoint::BranchPoint(Vec::new())
    }

    pub fn arc(word: Word, t: Rational) -> Result<Self> {
        if word.is_empty() {
            return Err(DcError::Domain("the root has no incoming branch".into()));
        }
        if t <= Rational::zero() || t >= Rational::one() {
            return Err(DcError::Domain(format!(
                "arc parameter {} outside (0, 1)",
                format_rational(&t)
            )));
        }
        Ok(GehmanPoint::ArcInterior { word, t })
    }

    pub fn label(&self) -> String {
        match self {
            GehmanPoint::BranchPoint(w) => format!("c{}", format_word(w)),
            GehmanPoint::Endpoint(x) => {
                let shown = x.word(8).map(|w| format_word(&w)).unwrap_or_default();
                format!("e({shown}…)")
            }
            GehmanPoint::ArcInterior { word, t } => {
                format!("B{}@{}", format_word(word), format_rational(t))
            }
        }
    }
}

fn check_k(k: u8) -> Result<()> {
    if !(2..=MAX_ALPHABET).contains(&k) {
        return Err(DcError::Domain(format!(
            "alphabet size {k} outside 2..={MAX_ALPHABET}"
        )));
    }
    Ok(())
}

/// Full `k`-ary truncation of depth `depth`.
pub fn build_gehman(k: u8, depth: usize) -> Result<GehmanDendrite> {
    check_k(k)?;
    subdendrite(&Subshift::full(k)?, depth)
}

/// The subdendrite whose addresses are the admissible words of `x`.
pub fn subdendrite(x: &Subshift, depth: usize) -> Result<GehmanDendrite> {
    if depth < 1 {
        return Err(DcError::Domain("depth must be at least 1".into()));
    }
    let mut words = BTreeSet::new();
    words.insert(Vec::new());
    for n in 1..=depth {
        let lang = x.language(n)?;
        if lang.is_empty() {
            return Err(DcError::Precondition(format!(
                "subshift has no admissible words of length {n}"
            )));
        }
        words.extend(lang);
    }
    let d = GehmanDendrite {
        k: x.alphabet(),
        depth,
        words,
    };
    if !d.is_invariant() {
        return Err(DcError::Invariant(
            "admissible words are not closed under the shift".into(),
        ));
    }
    Ok(d)
}

impl GehmanDendrite {
    pub fn alphabet(&self) -> u8 {
        self.k
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn contains_word(&self, w: &[u8]) -> bool {
        self.words.contains(w)
    }

    /// All `c_w`, shortest first.
    pub fn branch_points(&self) -> Vec<Word> {
        let mut v: Vec<Word> = self.words.iter().cloned().collect();
        v.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        v
    }

    /// Depth-`D` addresses: the endpoint classes.
    pub fn endpoint_words(&self) -> Vec<Word> {
        self.words
            .iter()
            .filter(|w| w.len() == self.depth)
            .cloned()
            .collect()
    }

    pub fn children(&self, w: &[u8]) -> Vec<Word> {
        (0..self.k)
            .map(|s| {
                let mut c = w.to_vec();
                c.push(s);
                c
            })
            .filter(|c| self.words.contains(c))
            .collect()
    }

    /// Number of arcs meeting at `c_w`.
    pub fn degree(&self, w: &[u8]) -> usize {
        usize::from(!w.is_empty()) + self.children(w).len()
    }

    /// Every retained address stays retained after dropping its first letter.
    pub fn is_invariant(&self) -> bool {
        self.words
            .iter()
            .all(|w| w.is_empty() || self.words.contains(&w[1..]))
    }

    pub fn contains(&self, p: &GehmanPoint) -> bool {
        match p {
            GehmanPoint::BranchPoint(w) => self.words.contains(w),
            GehmanPoint::ArcInterior { word, t } => {
                !word.is_empty()
                    && self.words.contains(word)
                    && *t > Rational::zero()
                    && *t < Rational::one()
            }
            GehmanPoint::Endpoint(x) => {
                x.alphabet() == self.k
                    && x.word(self.depth as u64)
                        .map(|w| self.words.contains(&w))
                        .unwrap_or(false)
            }
        }
    }

    pub fn to_tree(&self) -> TreeNode {
        self.node(&[])
    }

    fn node(&self, w: &[u8]) -> TreeNode {
        TreeNode {
            word: format_word(w),
            branch_length: if w.is_empty() {
                "0".into()
            } else {
                format_rational(&pow2_neg(w.len() as u32))
            },
            children: self.children(w).iter().map(|c| self.node(c)).collect(),
        }
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, &self.to_tree())?;
        Ok(())
    }

    /// Line drawing with the root at the bottom and each address placed
    /// over the middle of its `k`-adic interval.
    pub fn to_svg(&self) -> Drawing {
        let mut d = Drawing::new(800.0, 480.0, (0.0, 0.0, 1.0, 1.0));
        let place = |w: &[u8]| {
            let mut lo = 0.0;
            let mut width = 1.0;
            for &s in w {
                width /= self.k as f64;
                lo += s as f64 * width;
            }
            (lo + width / 2.0, 1.0 - 0.5f64.powi(w.len() as i32))
        };
        for w in self.branch_points() {
            let at = place(&w);
            if !w.is_empty() {
                d.line(place(&w[..w.len() - 1]), at, "black", 1.0);
            }
            d.dot(at, if w.len() == self.depth { 1.5 } else { 2.5 }, "black");
        }
        d.text(place(&[]), 12.0, "c");
        d
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub word: String,
    pub branch_length: String,
    pub children: Vec<TreeNode>,
}

/// The map `g`: `c_{i₁…iₙ} ↦ c_{i₂…iₙ}`, `B_{i₁…iₙ} ↦ B_{i₂…iₙ}` with the
/// same arc parameter, `B_i ↦ c`, and the shift on endpoints.
pub fn g_map(p: &GehmanPoint, x: &GehmanDendrite) -> Result<GehmanPoint> {
    if !x.contains(p) {
        return Err(DcError::Domain(format!("{} is not in the dendrite", p.label())));
    }
    Ok(match p {
        GehmanPoint::BranchPoint(w) => {
            GehmanPoint::BranchPoint(if w.is_empty() { Vec::new() } else { w[1..].to_vec() })
        }
        GehmanPoint::ArcInterior { word, t } => {
            if word.len() == 1 {
                GehmanPoint::root()
            } else {
                GehmanPoint::ArcInterior {
                    word: word[1..].to_vec(),
                    t: t.clone(),
                }
            }
        }
        GehmanPoint::Endpoint(e) => GehmanPoint::Endpoint(e.sigma()),
    })
}

/// Path from the root as a finite word (or endpoint) plus arc length from
/// the root.
fn address(p: &GehmanPoint, horizon: u64) -> Result<(Word, Rational)> {
    Ok(match p {
        GehmanPoint::BranchPoint(w) => (w.clone(), Rational::one() - pow2_neg(w.len() as u32)),
        GehmanPoint::ArcInterior { word, t } => {
            let n = word.len() as u32;
            (word.clone(), Rational::one() - pow2_neg(n - 1) + t * pow2_neg(n))
        }
        GehmanPoint::Endpoint(e) => (e.word(horizon)?, Rational::one()),
    })
}

/// Arc-length distance; endpoints are compared on their first `horizon`
/// symbols, so endpoints agreeing that far are at distance `0`.
pub fn arc_distance(p: &GehmanPoint, q: &GehmanPoint, horizon: u64) -> Result<Rational> {
    let (u, ru) = address(p, horizon)?;
    let (v, rv) = address(q, horizon)?;
    let common = u.iter().zip(&v).take_while(|(a, b)| a == b).count();
    let both_endpoints =
        matches!(p, GehmanPoint::Endpoint(_)) && matches!(q, GehmanPoint::Endpoint(_));
    if both_endpoints && common == u.len().min(v.len()) {
        return Ok(Rational::zero());
    }
    let rho = Rational::one() - pow2_neg(common as u32);
    let meet = min_rat(min_rat(&ru, &rv), &rho).clone();
    Ok(&ru + &rv - &meet - &meet)
}

/// Steps until a non-endpoint reaches the root.
pub fn steps_to_root(p: &GehmanPoint, x: &GehmanDendrite) -> Result<Option<usize>> {
    let mut cur = p.clone();
    for step in 0..=x.depth() {
        if let GehmanPoint::BranchPoint(w) = &cur {
            if w.is_empty() {
                return Ok(Some(step));
            }
        }
        if matches!(cur, GehmanPoint::Endpoint(_)) {
            return Ok(None);
        }
        cur = g_map(&cur, x)?;
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugacyReport {
    pub depth: usize,
    pub endpoints: usize,
    pub square_commutes: bool,
    pub branch_points_reach_root: bool,
    pub pass: bool,
}

/// Checks `g∘e = e∘σ` on the depth-`D` endpoint classes and that every
/// branch point `c_w` reaches the root in exactly `|w|` steps.
pub fn endpoint_conjugacy_check(x: &Subshift, depth: usize) -> Result<ConjugacyReport> {
    if depth < 2 {
        return Err(DcError::Domain("conjugacy check needs depth at least 2".into()));
    }
    let g = subdendrite(x, depth)?;
    let shorter: BTreeSet<Word> = g
        .words
        .iter()
        .filter(|w| w.len() == depth - 1)
        .cloned()
        .collect();
    let mut square = true;
    let endpoints = g.endpoint_words();
    for w in &endpoints {
        let e = GehmanPoint::Endpoint(SymbolicPoint::explicit(g.k, w.clone())?);
        let GehmanPoint::Endpoint(image) = g_map(&e, &g)? else {
            square = false;
            continue;
        };
        let shifted = image.word(depth as u64 - 1)?;
        let extends = !g.children(&shifted).is_empty();
        if shifted != w[1..] || !shorter.contains(&shifted) || !extends {
            square = false;
        }
    }
    let mut reach = true;
    for w in g.branch_points() {
        if steps_to_root(&GehmanPoint::BranchPoint(w.clone()), &g)? != Some(w.len()) {
            reach = false;
        }
    }
    Ok(ConjugacyReport {
        depth,
        endpoints: endpoints.len(),
        square_commutes: square,
        branch_points_reach_root: reach,
        pass: square && reach,
    })
}

/// Diameter of the truncated tree in arc length.
pub fn diameter(x: &GehmanDendrite) -> Rational {
    let leaves = x.endpoint_words();
    let mut best = Rational::zero();
    for (i, a) in leaves.iter().enumerate() {
        for b in &leaves[i + 1..] {
            let d = arc_distance(
                &GehmanPoint::BranchPoint(a.clone()),
                &GehmanPoint::BranchPoint(b.clone()),
                0,
            )
            .expect("finite addresses");
            best = max_rat(&best, &d).clone();
        }
    }
    best
}

/// Approximate branch length for display.
pub fn branch_length(w: &[u8]) -> f64 {
    to_f64(&pow2_neg(w.len() as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::shiftspace::point::parse_word;

    #[test]
    fn build_counts() {
        let g = build_gehman(2, 2).unwrap();
        assert_eq!(g.branch_points().len(), 7);
        assert_eq!(g.endpoint_words().len(), 4);
        assert_eq!(g.degree(&[0]), 3);
        assert_eq!(g.degree(&[]), 2);
        let g5 = build_gehman(5, 1).unwrap();
        let names: Vec<String> = g5.branch_points().iter().map(|w| format_word(w)).collect();
        assert_eq!(names, ["", "0", "1", "2", "3", "4"]);
        assert!(build_gehman(1, 2).is_err());
        assert!(build_gehman(2, 0).is_err());
    }

    #[test]
    fn g_examples() {
        let g = build_gehman(2, 3).unwrap();
        let c = GehmanPoint::root();
        assert!(matches!(g_map(&c, &g).unwrap(), GehmanPoint::BranchPoint(w) if w.is_empty()));
        let c01 = GehmanPoint::BranchPoint(vec![0, 1]);
        assert!(matches!(g_map(&c01, &g).unwrap(), GehmanPoint::BranchPoint(w) if w == vec![1]));
        let arc = GehmanPoint::arc(vec![1], rat(1, 2)).unwrap();
        assert!(matches!(g_map(&arc, &g).unwrap(), GehmanPoint::BranchPoint(w) if w.is_empty()));
        let x = SymbolicPoint::eventually_periodic(2, vec![], vec![0, 1]).unwrap();
        let GehmanPoint::Endpoint(y) = g_map(&GehmanPoint::Endpoint(x), &g).unwrap() else {
            panic!("endpoint maps to endpoint");
        };
        assert_eq!(y.word(4).unwrap(), vec![1, 0, 1, 0]);
        assert!(g_map(&GehmanPoint::BranchPoint(vec![0, 0, 0, 0]), &g).is_err());
    }

    #[test]
    fn subdendrite_examples() {
        let gm = Subshift::golden_mean();
        let g = subdendrite(&gm, 2).unwrap();
        let ends: Vec<String> = g.endpoint_words().iter().map(|w| format_word(w)).collect();
        assert_eq!(ends, ["00", "01", "10"]);
        assert_eq!(subdendrite(&Subshift::full(5).unwrap(), 3).unwrap().endpoint_words().len(), 125);
        let empty = Subshift::new(2, vec![vec![0], vec![1]]).unwrap();
        assert!(subdendrite(&empty, 2).is_err());
    }

    #[test]
    fn conjugacy_examples() {
        for x in [Subshift::full(2).unwrap(), Subshift::golden_mean()] {
            let r = endpoint_conjugacy_check(&x, 6).unwrap();
            assert!(r.pass, "{r:?}");
        }
        assert!(endpoint_conjugacy_check(&Subshift::full(2).unwrap(), 1).is_err());
    }

    #[test]
    fn distances() {
        let e = |s: &str| GehmanPoint::Endpoint(SymbolicPoint::explicit(2, parse_word(s, 2).unwrap()).unwrap());
        // first disagreement at index 2: meet at depth 2, 2·2^-2 apart
        assert_eq!(arc_distance(&e("0010"), &e("0000"), 16).unwrap(), rat(1, 2));
        assert_eq!(arc_distance(&e("1"), &e("0"), 16).unwrap(), int(2));
        assert_eq!(arc_distance(&e("1"), &e("1"), 16).unwrap(), int(0));
        let c0 = GehmanPoint::BranchPoint(vec![0]);
        let root = GehmanPoint::root();
        assert_eq!(arc_distance(&c0, &root, 0).unwrap(), rat(1, 2));
        let mid = GehmanPoint::arc(vec![0, 1], rat(1, 2)).unwrap();
        assert_eq!(arc_distance(&mid, &c0, 0).unwrap(), rat(1, 8));
        assert_eq!(arc_distance(&mid, &GehmanPoint::BranchPoint(vec![1]), 0).unwrap(), rat(9, 8));
        assert_eq!(diameter(&build_gehman(2, 3).unwrap()), rat(7, 4));
    }

    #[test]
    fn exports() {
        let g = build_gehman(2, 2).unwrap();
        let tree = g.to_tree();
        assert_eq!(tree.children.len(), 2);
        assert_eq!(tree.children[1].children[0].word, "10");
        assert_eq!(tree.children[1].children[0].branch_length, "1/4");
        let svg = g.to_svg().render();
        assert_eq!(svg.matches("<line").count(), 6);
    }
}
