use proptest::prelude::*;
use staircase_core::torusgeo::{measure_preserving, omega_apply};
use staircase_core::{preimage, ArcSet, OmegaMap};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Exhaustive over `(m, n, l) ≤ (6, 6, 4)` at `M = 360`: the measure of every
/// single-bin preimage is compared with `1/d`, and equality for all bins is
/// matched against the divisibility criterion.
#[test]
fn measure_preservation_exhaustive() {
    let big = 360;
    for d in [36usize, 60, 360] {
        for m in 1..=6u64 {
            for n in 1..=6u64 {
                for l in 1..=4u64 {
                    let o = OmegaMap::new(m, n, l).unwrap();
                    // bin histogram of ω over the grid: the preimage counts of single bins
                    let mut hist = vec![0usize; d];
                    for b in 0..big {
                        for a in 0..big {
                            hist[omega_apply(o, a, b, big, d).unwrap()] += 1;
                        }
                    }
                    let uniform = hist.iter().all(|&h| h * d == big * big);
                    assert_eq!(uniform, measure_preserving(o, big, d).unwrap(), "{m} {n} {l} d={d}");
                    let g = gcd(l * gcd(m, n), big as u64);
                    assert_eq!(uniform, (big / d) as u64 % g == 0);
                }
            }
        }
    }
}

fn arcs(d: usize) -> impl Strategy<Value = ArcSet> {
    prop::collection::vec(any::<bool>(), d).prop_map(|b| ArcSet::from_bits(b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn preimage_is_a_homomorphism(g1 in arcs(12), g2 in arcs(12), m in 1u64..6, n in 1u64..6, l in 1u64..4) {
        let o = OmegaMap::new(m, n, l).unwrap();
        let pre = |g: &ArcSet| preimage(o, g, 36).unwrap();
        prop_assert_eq!(pre(&g1.union(&g2).unwrap()), pre(&g1).union(&pre(&g2)).unwrap());
        prop_assert_eq!(pre(&g1.intersection(&g2).unwrap()), pre(&g1).intersection(&pre(&g2)).unwrap());
        prop_assert_eq!(pre(&g1.complement()), pre(&g1).complement());
    }

    #[test]
    fn single_point_fibers(m in 1u64..7, n in 1u64..7, k in 0usize..60) {
        let big = 60;
        let o = OmegaMap::new(m, n, 1).unwrap();
        let g = ArcSet::from_runs(big, &[(k, k)]).unwrap();
        let (rows, cols) = preimage(o, &g, big).unwrap().line_counts();
        let row_sizes: std::collections::BTreeSet<_> = rows.into_iter().filter(|&r| r > 0).collect();
        let col_sizes: std::collections::BTreeSet<_> = cols.into_iter().filter(|&c| c > 0).collect();
        prop_assert!(row_sizes.len() <= 1 && col_sizes.len() <= 1);
        if let (Some(&r), Some(&c)) = (row_sizes.first(), col_sizes.first()) {
            // row b solves m a ≡ k + n b (mod M): gcd(m, M) solutions when solvable
            prop_assert_eq!(r as u64, gcd(m, big as u64));
            prop_assert_eq!(c as u64, gcd(n, big as u64));
        }
    }
}
