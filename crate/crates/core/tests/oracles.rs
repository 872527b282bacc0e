//! Values produced by the independent Python references in `tests/oracles/`,
//! frozen here.

use dclab::combdendrite::{
    apply_f, comb_certificate, spike_top_walk, walk_counts, CombParams, DendritePoint,
    LevelWalkState,
};
use dclab::rational::{int, pow2_neg, rat, Rational};
use dclab::shiftspace::{
    format_word, lambda_nu_word, parse_word, scrambled_point, GrowthSequence, ScrambledPair,
    SymbolicPoint, ValidatedGrowth,
};

/// `(level, δ, limsup time, limsup fraction, liminf time, liminf fraction)`;
/// the limsup checkpoint is taken on `level`, the liminf one on `level − 1`.
const COMB: &[(u32, (i64, i64), u64, (i64, i64), u64, (i64, i64))] = &[
    (4, (1, 2), 53, (40, 53), 17, (4, 17)),
    (4, (1, 4), 40, (1, 2), 22, (1, 11)),
    (6, (1, 2), 485, (364, 485), 161, (40, 161)),
    (6, (1, 4), 364, (1, 2), 202, (10, 101)),
    (8, (1, 2), 4373, (3280, 4373), 1457, (364, 1457)),
    (8, (1, 4), 3280, (1, 2), 1822, (91, 911)),
    (10, (1, 2), 39365, (29524, 39365), 13121, (3280, 13121)),
    (10, (1, 4), 29524, (1, 2), 16402, (820, 8201)),
    (12, (1, 2), 354293, (265720, 354293), 118097, (29524, 118097)),
    (12, (1, 4), 265720, (1, 2), 147622, (7381, 73811)),
];

fn r((p, q): (i64, i64)) -> Rational {
    rat(p, q)
}

#[test]
fn comb_checkpoints_match_reference() {
    let params = CombParams::triadic();
    let half = walk_counts(&params, &int(1), &rat(1, 2), 12).unwrap();
    let quarter = walk_counts(&params, &int(1), &rat(1, 4), 12).unwrap();
    for &(level, delta, st, sf, it, fr) in COMB {
        let wc = if delta == (1, 2) { &half } else { &quarter };
        let even = wc.level(level).unwrap();
        let odd = wc.level(level - 1).unwrap();
        assert_eq!((even.limsup_time, even.limsup_fraction()), (st, r(sf)), "level {level}");
        assert_eq!((odd.liminf_time, odd.liminf_fraction()), (it, r(fr)), "level {level}");
    }
}

#[test]
fn certificate_estimates_match_reference() {
    let cert = comb_certificate(12).unwrap();
    for e in &cert.per_level {
        let row = |d: (i64, i64)| COMB.iter().find(|c| c.0 == e.level && c.1 == d).unwrap();
        assert_eq!(e.phi_star_half, r(row((1, 2)).3));
        assert_eq!(e.phi_half, r(row((1, 2)).5));
        assert_eq!(e.phi_star_quarter, r(row((1, 4)).3));
        assert_eq!(e.phi_quarter, r(row((1, 4)).5));
    }
}

#[test]
fn comb_map_matches_reference() {
    let p = CombParams::triadic();
    let top = DendritePoint::spike_top(&p, 1, 1).unwrap();
    assert_eq!(apply_f(&p, &top).unwrap(), DendritePoint::spike(&p, 1, 2, rat(1, 3)).unwrap());
    let low = DendritePoint::spike(&p, 1, 1, rat(1, 9)).unwrap();
    assert_eq!(apply_f(&p, &low).unwrap(), DendritePoint::spine(rat(1, 2)).unwrap());

    let mut s = LevelWalkState::start();
    let mut seen = vec![(s.level, s.index)];
    for _ in 0..8 {
        s = spike_top_walk(&p, s).unwrap();
        seen.push((s.level, s.index));
    }
    assert_eq!(seen, [(1, 1), (1, 2), (2, 8), (2, 7), (2, 5), (2, 4), (2, 2), (2, 1), (3, 1)]);
}

fn seed(s: &str) -> SymbolicPoint {
    SymbolicPoint::explicit(2, parse_word(s, 2).unwrap()).unwrap()
}

#[test]
fn scrambled_prefix_matches_reference() {
    let y = lambda_nu_word(&seed("1"), &GrowthSequence::pow2_square(), 40).unwrap();
    assert_eq!(format_word(&y), "0011111111111111110000000000000000000000");
}

#[test]
fn scrambled_fractions_match_reference() {
    let g = ValidatedGrowth::new(GrowthSequence::pow2_square(), 8, &rat(1, 20)).unwrap();
    let x = scrambled_point(&seed("0"), &g, 5).unwrap();
    let y = scrambled_point(&seed("1"), &g, 5).unwrap();
    let pair = ScrambledPair::new(x, y).unwrap();
    let delta = pow2_neg(8);
    for (n, f) in [(100, (41, 50)), (522, (28, 29)), (530, (252, 265)), (66066, (12, 1573))] {
        assert_eq!(pair.fraction_below(&delta, n).unwrap(), r(f), "n = {n}");
    }
}
