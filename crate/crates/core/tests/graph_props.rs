use coxspec::graph::{
    bipartition, full_spectrum, index_and_principal, make_star, parse_graph, recognize_ade,
    smith_classify, star_branches, DynkinName, Graph, PowerOptions, SmithTag, DEFAULT_CLASSIFY_TOL,
    DEFAULT_JACOBI_TOL,
};
use coxspec::BranchVector;
use proptest::prelude::*;

fn star(e: &[u64]) -> Graph {
    make_star(&BranchVector::new(e.to_vec()).unwrap())
}

/// Extended D_n (n >= 5): a chain of n - 3 vertices with two leaves at each end.
fn extended_d(n: usize) -> Graph {
    let m = n - 3;
    let mut edges: Vec<(usize, usize)> = (1..m).map(|i| (i - 1, i)).collect();
    edges.extend([(0, m), (0, m + 1), (m - 1, m + 2), (m - 1, m + 3)]);
    Graph::from_index_edges(n + 1, &edges).unwrap()
}

fn tree_from_pruefer(seq: &[usize]) -> Graph {
    let n = seq.len() + 2;
    let mut degree = vec![1; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::new();
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, s));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::from_index_edges(n, &edges).unwrap()
}

fn pruefer() -> impl Strategy<Value = Vec<usize>> {
    (0usize..=10).prop_flat_map(|len| prop::collection::vec(0..len + 2, len))
}

fn dynkin_suite() -> Vec<(Graph, DynkinName)> {
    let mut out = Vec::new();
    for n in 1..=9 {
        out.push((Graph::path(n), DynkinName::A(n)));
    }
    for n in 4..=9 {
        out.push((star(&[1, 1, n as u64 - 3]), DynkinName::D(n)));
    }
    out.push((star(&[1, 2, 2]), DynkinName::E6));
    out.push((star(&[1, 2, 3]), DynkinName::E7));
    out.push((star(&[1, 2, 4]), DynkinName::E8));
    out
}

fn extended_suite() -> Vec<(Graph, DynkinName)> {
    let mut out = Vec::new();
    for n in 3..=9 {
        out.push((Graph::cycle(n), DynkinName::ExtA(n - 1)));
    }
    out.push((star(&[1, 1, 1, 1]), DynkinName::ExtD(4)));
    for n in 5..=8 {
        out.push((extended_d(n), DynkinName::ExtD(n)));
    }
    out.push((star(&[2, 2, 2]), DynkinName::ExtE6));
    out.push((star(&[1, 3, 3]), DynkinName::ExtE7));
    out.push((star(&[1, 2, 5]), DynkinName::ExtE8));
    out
}

#[test]
fn smith_theorem_small_graphs() {
    for (g, name) in dynkin_suite() {
        let c = smith_classify(&g, DEFAULT_CLASSIFY_TOL).unwrap();
        assert!(c.index < 2.0 - 1e-6, "{name}");
        assert_eq!((c.tag, c.name), (SmithTag::Dynkin, Some(name)));
    }
    for (g, name) in extended_suite() {
        let c = smith_classify(&g, DEFAULT_CLASSIFY_TOL).unwrap();
        assert!((c.index - 2.0).abs() <= 1e-9, "{name}: {}", c.index);
        assert_eq!((c.tag, c.name), (SmithTag::ExtendedDynkin, Some(name)));
    }
}

#[test]
fn spectral_examples() {
    let r = index_and_principal(&Graph::path(2), PowerOptions::default()).unwrap();
    assert!((r.index - 1.0).abs() < 1e-12);
    let r = index_and_principal(&star(&[1, 1, 1, 1]), PowerOptions::default()).unwrap();
    assert!((r.index - 2.0).abs() < 1e-12);
    let p = r.principal.values();
    for &leaf in &p[1..] {
        assert!((p[0] / leaf - 2.0).abs() < 1e-10);
    }
    let s = full_spectrum(&Graph::path(3), DEFAULT_JACOBI_TOL).unwrap();
    let want = [-(2f64.sqrt()), 0.0, 2f64.sqrt()];
    for (a, b) in s.iter().zip(want) {
        assert!((a - b).abs() < 1e-12);
    }
    assert_eq!(
        full_spectrum(&parse_graph("a").unwrap(), DEFAULT_JACOBI_TOL).unwrap(),
        vec![0.0]
    );
}

#[test]
fn star_decomposition_examples() {
    assert_eq!(
        star_branches(&star(&[1, 2, 5])).unwrap().entries(),
        &[1, 2, 5]
    );
    assert_eq!(star_branches(&Graph::path(4)).unwrap().entries(), &[4]);
    assert!(star_branches(&extended_d(6)).is_err());
    assert_eq!(recognize_ade(&star(&[1, 1])), Some(DynkinName::A(3)));
}

#[test]
fn complete_graphs_reach_upper_bound() {
    for n in 2..=8 {
        let r = index_and_principal(&Graph::complete(n), PowerOptions::default()).unwrap();
        assert!((r.index - (n as f64 - 1.0)).abs() < 1e-10);
    }
}

fn check_spectral_invariants(g: &Graph) -> Result<(), TestCaseError> {
    let n = g.len();
    let r = index_and_principal(g, PowerOptions::default()).unwrap();
    prop_assert!(r.index >= 1.0 - 1e-12 && r.index <= n as f64 - 1.0 + 1e-12);
    prop_assert!(r.principal.iter().all(|&x| x > 0.0));
    for i in 0..n {
        let ay: f64 = g.neighbors(i).iter().map(|&j| r.principal[j]).sum();
        prop_assert!((ay - r.index * r.principal[i]).abs() <= 1e-9);
    }
    let spectrum = full_spectrum(g, DEFAULT_JACOBI_TOL).unwrap();
    prop_assert!((spectrum[n - 1] - r.index).abs() <= 1e-9);
    if bipartition(g).is_ok() {
        for i in 0..n {
            prop_assert!((spectrum[i] + spectrum[n - 1 - i]).abs() <= 1e-9);
        }
    }
    Ok(())
}

proptest! {
    #[test]
    fn random_trees(seq in pruefer()) {
        let g = tree_from_pruefer(&seq);
        prop_assert!(g.is_tree());
        prop_assert!(bipartition(&g).is_ok());
        check_spectral_invariants(&g)?;
    }

    #[test]
    fn cycles(n in 3usize..=12) {
        check_spectral_invariants(&Graph::cycle(n))?;
    }

    #[test]
    fn edge_list_round_trip(seq in pruefer()) {
        let g = tree_from_pruefer(&seq);
        let text = g.to_edge_list();
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_edge_list(), text);
        prop_assert_eq!(Graph::from_json(&g.to_json()).unwrap(), g);
    }
}
