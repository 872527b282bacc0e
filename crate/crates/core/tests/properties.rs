use proptest::prelude::*;

use dclab::chaoscore::{
    classify_pair, complement_counts, empirical_df_at_checkpoints, empirical_df_pair, DistanceSeries,
    EmpiricalDF, Tolerances,
};
use dclab::combdendrite::{apply_f, orbit, CombParams, DendritePoint};
use dclab::gehman::{build_gehman, g_map, GehmanPoint};
use dclab::rational::{format_rational, parse_rational, rat, Rational};
use dclab::shiftspace::growth::GrowthSequence;
use dclab::shiftspace::scrambled::{lambda_nu_class, BlockClass, BlockTable};
use dclab::shiftspace::{lambda_map, lambda_nu_word, shift_metric, SymbolicPoint};

fn series_strategy() -> impl Strategy<Value = DistanceSeries> {
    prop::collection::vec(0i64..=64, 2..200)
        .prop_map(|v| DistanceSeries::new(v.into_iter().map(|p| rat(p, 64)).collect(), rat(1, 1)).unwrap())
}

fn grid_strategy() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::btree_set(1i64..=64, 2..6).prop_map(|s| s.into_iter().map(|p| rat(p, 64)).collect())
}

fn word(k: u8, len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..k, len)
}

proptest! {
    #[test]
    fn below_and_above_partition_every_prefix(s in series_strategy(), p in 1i64..=64, cut in 0.0f64..1.0) {
        let n = 1 + ((s.len() - 1) as f64 * cut) as usize;
        let (below, above) = complement_counts(&s, &rat(p, 64), n).unwrap();
        prop_assert_eq!(below + above, n as u64);
    }

    #[test]
    fn estimates_are_monotone_and_ordered(s in series_strategy(), grid in grid_strategy()) {
        let df = empirical_df_pair(&s, &grid, &Tolerances::default()).unwrap();
        for i in 0..grid.len() {
            prop_assert!(df.lower_est[i] <= df.upper_est[i]);
            if i > 0 {
                prop_assert!(df.lower_est[i - 1] <= df.lower_est[i]);
                prop_assert!(df.upper_est[i - 1] <= df.upper_est[i]);
            }
        }
        let times: Vec<u64> = (1..=s.len() as u64).step_by(3).collect();
        let at = empirical_df_at_checkpoints(&s, &grid, &times).unwrap();
        prop_assert!(at.validate().is_ok());
    }

    #[test]
    fn verdicts_respect_the_hierarchy(
        raw in prop::collection::vec((0i64..=20, 0i64..=20), 2..6),
        tol in 1i64..10,
    ) {
        // build monotone lower <= upper estimates on the grid 1/6, 2/6, ...
        let mut lo = Vec::new();
        let mut up = Vec::new();
        let (mut a, mut b) = (0i64, 0i64);
        for (x, y) in &raw {
            a = (a + x).min(20);
            b = (b.max(a) + y).min(20);
            lo.push(rat(a, 20));
            up.push(rat(b.max(a), 20));
        }
        let grid: Vec<Rational> = (1..=raw.len() as i64).map(|i| rat(i, 6)).collect();
        let df = EmpiricalDF::from_estimates(grid, lo, up, None, 1, rat(0, 1), rat(1, 2), rat(1, 1)).unwrap();
        let v = classify_pair(&df, &Tolerances::uniform(rat(tol, 100)).unwrap()).unwrap();
        prop_assert!(!v.dc1 || v.dc2);
        prop_assert!(!v.dc2 || v.dc2half);
        prop_assert!(!v.dc2 || v.dc3);
        prop_assert_eq!(v.dc3, v.dc3_interval.is_some());
    }

    #[test]
    fn shift_metric_is_an_ultrametric(x in word(3, 1..24), y in word(3, 1..24), z in word(3, 1..24)) {
        let p = |w: &Vec<u8>| SymbolicPoint::explicit(3, w.clone()).unwrap();
        let (x, y, z) = (p(&x), p(&y), p(&z));
        let d = |a: &SymbolicPoint, b: &SymbolicPoint| shift_metric(a, b, 32).unwrap();
        let (xy, yz, xz) = (d(&x, &y), d(&y, &z), d(&x, &z));
        prop_assert_eq!(&xy, &d(&y, &x));
        prop_assert!(xz <= xy.clone().max(yz));
    }

    #[test]
    fn gehman_map_conjugates_endpoints_to_the_shift(w in word(3, 6..7)) {
        let g = build_gehman(3, 6).unwrap();
        let e = SymbolicPoint::explicit(3, w.clone()).unwrap();
        let GehmanPoint::Endpoint(image) = g_map(&GehmanPoint::Endpoint(e.clone()), &g).unwrap() else {
            panic!("endpoint maps to an endpoint");
        };
        prop_assert_eq!(image.word(5).unwrap(), e.sigma().word(5).unwrap());
        prop_assert_eq!(&image.word(5).unwrap()[..], &w[1..]);
    }

    #[test]
    fn lambda_is_injective(x in word(2, 1..10), y in word(2, 1..10)) {
        let p = |w: &Vec<u8>| SymbolicPoint::explicit(2, w.clone()).unwrap();
        let n = 10;
        let len = n * (n + 1) / 2;
        let (lx, ly) = (lambda_map(&p(&x), len).unwrap(), lambda_map(&p(&y), len).unwrap());
        let same_seed = p(&x).word(n as u64).unwrap() == p(&y).word(n as u64).unwrap();
        prop_assert_eq!(lx == ly, same_seed);
    }

    #[test]
    fn composed_word_is_constant_on_blocks(x in word(2, 1..8)) {
        let g = GrowthSequence::custom(vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233]).unwrap();
        let seed = SymbolicPoint::explicit(2, x).unwrap();
        let table = BlockTable::lambda_nu(&g, 12).unwrap();
        let out = lambda_nu_word(&seed, &g, table.total_len() as usize).unwrap();
        let mut carried = Vec::new();
        for b in table.blocks() {
            let block = &out[b.start as usize..b.end() as usize];
            let want = match lambda_nu_class(b.index) {
                BlockClass::Zero => 0,
                BlockClass::Coordinate(j) => {
                    carried.push(block[0]);
                    seed.symbol(j).unwrap()
                }
            };
            prop_assert!(block.iter().all(|&s| s == want), "block {}", b.index);
        }
        // the non-zero blocks spell out λ(x)
        prop_assert_eq!(carried.clone(), lambda_map(&seed, carried.len()).unwrap());
    }

    #[test]
    fn comb_map_stays_canonical(n in 1u32..=4, pick in 0usize..1000, p in 0i64..=30) {
        let params = CombParams::triadic();
        let grid = params.spike_grid(n).unwrap();
        let idx: Vec<u64> = grid.indices().collect();
        let j = idx[pick % idx.len()];
        let y = grid.height() * rat(p, 30);
        let start = DendritePoint::spike(&params, n, j, y).unwrap();
        prop_assert_eq!(start.is_spine(), p == 0);
        for q in orbit(&params, &start, 20).unwrap() {
            prop_assert!(q.validate(&params).is_ok());
            if q.is_spine() {
                prop_assert_eq!(apply_f(&params, &q).unwrap(), q);
            }
        }
    }

    #[test]
    fn rationals_round_trip_through_text(p in -1000i64..1000, q in 1i64..1000) {
        let r = rat(p, q);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}
