use std::collections::BTreeSet;

use proptest::prelude::*;
use staircase_core::{Diagram, DiagramClass, LatticePoint, SimpleKind, Window};

fn p(i: i64, j: i64) -> LatticePoint {
    LatticePoint::new(i, j)
}

/// Staircase corners: strictly increasing `i`, strictly decreasing `j`.
fn corners(max: usize) -> impl Strategy<Value = Vec<LatticePoint>> {
    prop::collection::btree_set(-6i64..12, 1..=max)
        .prop_flat_map(|is| {
            let k = is.len();
            (Just(is), prop::collection::btree_set(-6i64..12, k..=k))
        })
        .prop_map(|(is, js)| is.into_iter().zip(js.into_iter().rev()).map(|(i, j)| p(i, j)).collect())
}

fn periodic() -> impl Strategy<Value = Diagram> {
    (1usize..5, 1i64..5)
        .prop_flat_map(|(m, n)| (prop::collection::vec(0..=n, m - 1), Just(n), -4i64..4))
        .prop_map(|(drops, n, start)| {
            let mut floors = vec![start];
            let mut budget = n;
            for d in drops {
                let d = d.min(budget);
                budget -= d;
                floors.push(floors.last().unwrap() - d);
            }
            Diagram::periodic(floors, n).unwrap()
        })
}

fn any_diagram() -> impl Strategy<Value = Diagram> {
    prop_oneof![
        (0usize..4, -5i64..5, -5i64..5).prop_map(|(k, i, j)| {
            let kind = [SimpleKind::Plane, SimpleKind::Quadrant, SimpleKind::Rows, SimpleKind::Cols][k];
            Diagram::simple(kind, p(i, j))
        }),
        corners(5).prop_map(|cs| Diagram::finite_corner(cs).unwrap()),
        periodic(),
    ]
}

proptest! {
    #[test]
    fn upward_closed(d in any_diagram()) {
        let w = Window::square(-15, 15, 1).unwrap();
        for q in w.points() {
            if d.contains(q) {
                prop_assert!(d.contains(q + p(1, 0)) && d.contains(q + p(0, 1)));
            }
        }
    }

    #[test]
    fn classify_is_translation_invariant(d in any_diagram(), i in -20i64..20, j in -20i64..20) {
        prop_assert_eq!(d.translate(p(i, j)).classify(), d.classify());
    }

    #[test]
    fn corners_regenerate_finite_diagrams(cs in corners(5)) {
        let d = Diagram::finite_corner(cs).unwrap();
        let rebuilt = d.corners().unwrap();
        let w = Window::square(-10, 16, 0).unwrap();
        for q in w.points() {
            let by_corners = rebuilt.iter().any(|c| q.i >= c.i && q.j >= c.j);
            prop_assert_eq!(by_corners, d.contains(q));
        }
    }

    #[test]
    fn period_normalize_keeps_membership(d in periodic(), l in 1i64..4) {
        let big = d.period_normalize(l).unwrap();
        let w = Window::square(-12, 12, 0).unwrap();
        for q in w.points() {
            prop_assert_eq!(big.contains(q), d.contains(q));
        }
        match (d.classify(), big.period_cell()) {
            (DiagramClass::Periodic { m, n }, Some(cell)) => {
                prop_assert_eq!(cell.m() % m, 0);
                prop_assert_eq!(cell.n() * m, cell.m() * n);
            }
            (DiagramClass::Simple { .. }, _) => {}
            other => prop_assert!(false, "unexpected {:?}", other),
        }
    }

    /// The reported period `(m, n)` is the smallest translation `(m, -n)`
    /// fixing the set, found by brute force on a window.
    #[test]
    fn minimal_period_matches_window_search(d in periodic()) {
        let w = Window::square(-30, 30, 0).unwrap();
        let set: BTreeSet<_> = d.restrict_to_window(&w).into_iter().collect();
        let inner = Window::square(-12, 12, 0).unwrap();
        let fixes = |m: i64, n: i64| {
            inner.points().all(|q| set.contains(&q) == set.contains(&(q + p(m, -n))))
        };
        if let DiagramClass::Periodic { m, n } = d.classify() {
            prop_assert!(fixes(m, n));
            for mm in 1..=m {
                for nn in 1..=16 {
                    if (mm, nn) != (m, n) && fixes(mm, nn) {
                        prop_assert!(mm >= m && nn >= n, "({mm},{nn}) also fixes, reported ({m},{n})");
                    }
                }
            }
        }
    }
}

#[test]
fn example_classifications() {
    assert_eq!(Diagram::quadrant().classify(), DiagramClass::Simple { kind: SimpleKind::Quadrant });
    assert_eq!(Diagram::periodic(vec![0], 1).unwrap().classify(), DiagramClass::Periodic { m: 1, n: 1 });
    let stair = Diagram::finite_corner(vec![p(0, 3), p(2, 1), p(5, 0)]).unwrap();
    assert_eq!(stair.classify(), DiagramClass::Irregular);
}
