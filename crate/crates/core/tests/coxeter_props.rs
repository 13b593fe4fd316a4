use coxspec::coxeter::{
    classify_root, default_t_max, enumerate_real_roots, inverse_word, standard_character,
    verify_standard, CoxeterSystem, RootClassification,
};
use coxspec::graph::{index_and_principal, make_star, Graph, Parity, PowerOptions};
use coxspec::{BranchVector, GVector};
use proptest::prelude::*;

fn star(e: &[u64]) -> Graph {
    make_star(&BranchVector::new(e.to_vec()).unwrap())
}

fn suite() -> Vec<Graph> {
    vec![
        Graph::path(2),
        Graph::path(5),
        Graph::cycle(6),
        star(&[1, 1, 1, 1]),
        star(&[2, 2, 2]),
        star(&[1, 3, 3]),
        star(&[1, 2, 5]),
        star(&[1, 2, 6]),
        star(&[2, 3, 4, 4]),
    ]
}

#[test]
fn root_counts() {
    let mut cases: Vec<(Graph, usize)> = (1..=6).map(|n| (Graph::path(n), n * (n + 1))).collect();
    cases.extend([
        (star(&[1, 1, 1]), 24),
        (star(&[1, 2, 2]), 72),
        (star(&[1, 2, 3]), 126),
        (star(&[1, 2, 4]), 240),
    ]);
    for (g, count) in cases {
        let e = enumerate_real_roots(&g, 1000, 100_000).unwrap();
        assert!(e.exhaustive);
        assert_eq!(e.roots.len(), count);
        assert!(e
            .roots
            .iter()
            .all(|x| x.is_nonnegative() || x.is_nonpositive()));
    }
}

#[test]
fn standard_identities_on_suite() {
    for g in suite() {
        let spectral = index_and_principal(&g, PowerOptions::default()).unwrap();
        if spectral.index < 2.0 - 1e-9 {
            continue;
        }
        let sys = CoxeterSystem::from_graph(&g).unwrap();
        let report = verify_standard(&sys, &spectral, 10).unwrap();
        assert!(
            report.passes(1e-8),
            "{:?}: {:?}",
            g.labels(),
            report.max_defect()
        );
    }
}

#[test]
fn singular_replay_and_characters() {
    for g in [star(&[1, 1, 1, 1]), star(&[1, 2, 5]), star(&[1, 2, 6])] {
        let sys = CoxeterSystem::from_graph(&g).unwrap();
        let spectral = index_and_principal(&g, PowerOptions::default()).unwrap();
        for v in 0..g.len() {
            for t in -8..=8 {
                let d = sys.coxeter_t(&GVector::simple_root(g.len(), v), t).unwrap();
                if !d.is_nonnegative() {
                    continue;
                }
                let verdict = classify_root(&sys, &d, default_t_max(&g)).unwrap();
                let RootClassification::SingularAt { t: s, vertex } = verdict else {
                    panic!("{verdict:?}")
                };
                assert_eq!(
                    sys.coxeter_t(&GVector::simple_root(g.len(), vertex), s)
                        .unwrap(),
                    d
                );
                let ch = standard_character(&sys, &d, &spectral, default_t_max(&g)).unwrap();
                assert_eq!(ch.seed[vertex], 0.0);
                assert!(g.neighbors(vertex).iter().all(|&w| ch.seed[w] > 0.0));
            }
        }
    }
}

fn vector(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..=50, n)
}

proptest! {
    #[test]
    fn involutions_and_group_law(idx in 0usize..9, raw in vector(14), s in -6i64..=6, t in -6i64..=6) {
        let g = &suite()[idx];
        let sys = CoxeterSystem::from_graph(g).unwrap();
        let x = GVector::from_values(raw[..g.len()].to_vec());
        for p in [Parity::Odd, Parity::Even] {
            prop_assert_eq!(sys.partial(&sys.partial(&x, p).unwrap(), p).unwrap(), x.clone());
        }
        let c = sys.coxeter(&x).unwrap();
        let cinv = sys.partial(&sys.partial(&x, Parity::Even).unwrap(), Parity::Odd).unwrap();
        prop_assert_eq!(sys.partial(&sys.partial(&c, Parity::Even).unwrap(), Parity::Odd).unwrap(), x.clone());
        prop_assert_eq!(sys.coxeter(&cinv).unwrap(), x.clone());
        prop_assert_eq!(sys.coxeter_t(&sys.coxeter_t(&x, t).unwrap(), inverse_word(t)).unwrap(), x.clone());
        // c_t after c_s concatenates when the last factor of c_s and the first of c_t differ
        if s >= 0 && t >= 0 && s % 2 == 0 {
            let lhs = sys.coxeter_t(&sys.coxeter_t(&x, s).unwrap(), t).unwrap();
            prop_assert_eq!(lhs, sys.coxeter_t(&x, s + t).unwrap());
        }
    }
}
