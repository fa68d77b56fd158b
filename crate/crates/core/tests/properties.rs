mod common;

use common::{q, qi, Q};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surfsing::criterion::check_exclusion;
use surfsing::cycles;
use surfsing::graph::{DualGraph, Vertex};
use surfsing::lattice::Vector;
use surfsing::zariski::{zariski_decompose, CurveLattice, Divisor};

/// Random weighted tree: vertex `i > 0` hangs off `parents[i - 1] % i`.
fn tree() -> impl Strategy<Value = DualGraph> {
    (1usize..=7)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(2u32..=6, n),
                proptest::collection::vec(any::<usize>(), n - 1),
            )
        })
        .prop_map(|(weights, parents)| {
            let vertices = weights
                .iter()
                .enumerate()
                .map(|(i, &w)| Vertex::rational(format!("C{}", i + 1), w))
                .collect();
            let edges = parents.iter().enumerate().map(|(k, p)| (p % (k + 1), k + 1)).collect();
            DualGraph::new(vertices, edges).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn laufer_ignores_the_order_of_steps(g in tree(), seed in any::<u64>()) {
        prop_assume!(common::negative_definite(&common::matrix(&g)));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shuffled = cycles::laufer_by(&g, |c| c[rng.gen_range(0..c.len())]);
        let z: Vec<i64> = cycles::fundamental_cycle(&g)
            .unwrap()
            .coefficients()
            .iter()
            .map(|c| c.to_integer().try_into().unwrap())
            .collect();
        prop_assert_eq!(&shuffled, &z);
        prop_assert_eq!(&z, &common::laufer(&g));
    }

    #[test]
    fn discrepancy_is_effective(g in tree()) {
        prop_assume!(common::negative_definite(&common::matrix(&g)));
        let a: Vec<Q> = cycles::discrepancy(&g).unwrap().coefficients().iter().cloned().collect();
        prop_assert!(a.iter().all(|x| !x.is_negative()));
        prop_assert_eq!(a, common::discrepancy(&g));
    }

    #[test]
    fn exclusion_on_smooth_points_implies_the_classical_bounds(
        d2 in 5i64..40,
        de in (-8i64..=24, 1i64..=4),
        e2 in (-30i64..=30, 1i64..=4),
    ) {
        let (de, e2) = (q(de.0, de.1), q(e2.0, e2.1));
        if check_exclusion(&q(d2, 1), &de, &e2, &qi(4)).unwrap() {
            prop_assert!(!de.is_negative() && de < qi(2));
            prop_assert!(&de - qi(1) <= e2);
        }
    }
}

#[derive(Debug, Clone)]
struct Case {
    rows: Vec<Vec<i64>>,
    nef_part: Vec<i64>,
    nef_square: i64,
    fixed: Vec<(i64, i64)>,
}

fn case() -> impl Strategy<Value = Case> {
    (1usize..=5)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(1i64..=4, n),
                proptest::collection::vec(0i64..=2, n * n),
                proptest::collection::vec(0i64..=3, n),
                1i64..=12,
                proptest::collection::vec((0i64..=6, 1i64..=3), n),
            )
        })
        .prop_map(|(diag, off, nef_part, nef_square, fixed)| {
            let n = diag.len();
            let mut rows = vec![vec![0; n]; n];
            for i in 0..n {
                rows[i][i] = -diag[i];
                for j in (i + 1)..n {
                    rows[i][j] = off[i * n + j];
                    rows[j][i] = off[i * n + j];
                }
            }
            Case { rows, nef_part, nef_square, fixed }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn zariski_square_and_support(c in case()) {
        let m: Vec<Vec<Q>> = c.rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
        prop_assume!(common::negative_definite(&m));
        let n = m.len();
        let e: Vec<Q> = c.fixed.iter().map(|&(p, d)| q(p, d)).collect();
        let me = common::apply(&m, &e);
        let pairings: Vec<Q> = c.nef_part.iter().zip(&me).map(|(a, x)| qi(*a) + x).collect();
        let ae: Q = c.nef_part.iter().zip(&e).map(|(a, x)| qi(*a) * x).sum();
        let d2 = qi(c.nef_square) + qi(2) * ae + common::form(&m, &e, &e);

        let ids: Vec<String> = (1..=n).map(|i| format!("C{i}")).collect();
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        let lattice = CurveLattice::from_integers(&refs, &c.rows).unwrap();
        let d = Divisor::functional(Vector::new(pairings), Some(d2.clone()));
        let dec = zariski_decompose(&d, &lattice).unwrap();

        let n2 = dec.negative_square(&lattice).unwrap();
        prop_assert!(!n2.is_positive());
        let p2 = dec.positive_square.clone().unwrap();
        prop_assert_eq!(&p2, &(&d2 - &n2));
        prop_assert!(p2 >= d2);

        for i in 0..n {
            if dec.positive_pairings[i].is_positive() {
                prop_assert!(dec.negative[i].is_zero());
            }
        }

        let history = &dec.support_history;
        prop_assert!(history.len() <= n + 1);
        for w in history.windows(2) {
            prop_assert!(w[0].iter().all(|i| w[1].contains(i)));
        }
    }
}
