//! Built-in identity checks behind `verify all`. Each check is also public
//! so the acceptance suite can time it on its own.

use std::error::Error;

use rayon::prelude::*;

use coxspec::coxeter::{
    classify_root, default_t_max, enumerate_real_roots, standard_character, verify_standard,
    CoxeterSystem, RootClassification,
};
use coxspec::graph::{
    index_and_principal, make_star, smith_classify, DynkinName, Graph, PowerOptions, SmithTag,
};
use coxspec::numeric::{format_sig17, Rational};
use coxspec::rho::{
    canonical_branch_vectors, classify_branch_vector, default_solver_bounds, rho, rho_closed_form,
    rho_table, solve_rho_equation, BranchTag, RecurrenceSequence,
};
use coxspec::sigma::{phi_plus, phi_plus_recurrent, SigmaError};
use coxspec::star::{
    solve_star_index, verify_star_theorem, DEFAULT_BRACKET_TOL, DEFAULT_THEOREM_TOL,
};
use coxspec::{BranchVector, GVector};

type Failure = Box<dyn Error + Send + Sync>;
type Outcome = Result<(bool, String), Failure>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, body: impl FnOnce() -> Outcome) -> Check {
    match body() {
        Ok((passed, detail)) => Check {
            name,
            passed,
            detail,
        },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn bv(e: &[u64]) -> BranchVector {
    BranchVector::new(e.to_vec()).expect("positive entries")
}

fn star(e: &[u64]) -> Graph {
    make_star(&bv(e))
}

fn finite<T>(x: coxspec::ExtendedValue<T>) -> Result<T, String> {
    x.into_finite().ok_or_else(|| "unexpected pole".to_string())
}

fn sorted(mut vs: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    vs.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    vs
}

/// The four solution families at integer `r >= 4`.
pub fn expected_families(r: u64) -> Vec<Vec<u64>> {
    let n = (r - 1) as usize;
    sorted(vec![
        vec![1; r as usize],
        vec![2; n],
        std::iter::once(1)
            .chain(std::iter::repeat_n(3, n - 1))
            .collect(),
        [1, 2]
            .into_iter()
            .chain(std::iter::repeat_n(5, n - 2))
            .collect(),
    ])
}

fn solve_default(r: &Rational) -> Result<(Vec<Vec<u64>>, bool), Failure> {
    let (s, n) = default_solver_bounds(r);
    let res = solve_rho_equation(r, s, n)?;
    Ok((
        res.solutions.iter().map(|v| v.entries().to_vec()).collect(),
        res.exhaustive,
    ))
}

pub fn solver_at_four() -> Check {
    check("solutions of rho_4(v) = 4", || {
        let (got, exhaustive) = solve_default(&q(4, 1))?;
        let want = sorted(vec![
            vec![1, 1, 1, 1],
            vec![2, 2, 2],
            vec![1, 3, 3],
            vec![1, 2, 5],
        ]);
        Ok((
            got == want && exhaustive,
            format!("{} solutions, exhaustive {exhaustive}", got.len()),
        ))
    })
}

pub fn solver_families() -> Check {
    check("solver families", || {
        let mut bad = Vec::new();
        for r in 5..=7u64 {
            let (got, exhaustive) = solve_default(&q(r as i64, 1))?;
            if got != expected_families(r) || !exhaustive {
                bad.push(format!("r={r}"));
            }
        }
        let (got, exhaustive) = solve_default(&q(9, 2))?;
        if !got.is_empty() || !exhaustive {
            bad.push("r=9/2".to_string());
        }
        Ok((
            bad.is_empty(),
            if bad.is_empty() {
                "r = 5, 6, 7, 9/2".into()
            } else {
                bad.join(", ")
            },
        ))
    })
}

/// The Dynkin stars: `(n)`, `(l, m)`, `(1, 1, k)`, `(1, 2, 2)`, `(1, 2, 3)`,
/// `(1, 2, 4)`.
pub fn is_dynkin_shape(e: &[u64]) -> bool {
    matches!(
        e,
        [_] | [_, _] | [1, 1, _] | [1, 2, 2] | [1, 2, 3] | [1, 2, 4]
    )
}

pub fn branch_classification() -> Check {
    check("branch-vector classification", || {
        let all = canonical_branch_vectors(6, 12);
        let mismatches: Vec<String> = all
            .iter()
            .filter(|v| {
                (classify_branch_vector(v).tag == BranchTag::Dynkin) != is_dynkin_shape(v.entries())
            })
            .map(|v| v.to_string())
            .collect();
        Ok((
            mismatches.is_empty(),
            format!("{} vectors, {} mismatches", all.len(), mismatches.len()),
        ))
    })
}

pub fn smith_classification() -> Check {
    check("Smith classification", || {
        let names = DynkinName::catalog(9);
        let mut bad = Vec::new();
        for name in &names {
            let g = name.graph().ok_or("catalog entry without a graph")?;
            let c = smith_classify(&g, 1e-9)?;
            let index_ok = if name.is_extended() {
                (c.index - 2.0).abs() <= 1e-9
            } else {
                c.index < 2.0 - 1e-6
            };
            let want = if name.is_extended() {
                SmithTag::ExtendedDynkin
            } else {
                SmithTag::Dynkin
            };
            if !index_ok || c.tag != want || c.name != Some(*name) {
                bad.push(name.ascii());
            }
        }
        let detail = format!("{} graphs, {} failures", names.len(), bad.len());
        Ok((
            bad.is_empty(),
            if bad.is_empty() {
                detail
            } else {
                format!("{detail}: {}", bad.join(", "))
            },
        ))
    })
}

pub fn star_theorem_sweep() -> Check {
    check("star index theorem", || {
        let all = canonical_branch_vectors(5, 6);
        let rows: Vec<(f64, f64)> = all
            .par_iter()
            .map(|v| {
                let fwd = verify_star_theorem(v, DEFAULT_THEOREM_TOL)?;
                let inv = solve_star_index(v, DEFAULT_BRACKET_TOL)?;
                Ok((fwd.residual, (inv.r - fwd.r).abs()))
            })
            .collect::<Result<_, coxspec::star::StarError>>()?;
        let residual = rows.iter().map(|r| r.0).fold(0.0, f64::max);
        let delta = rows.iter().map(|r| r.1).fold(0.0, f64::max);
        Ok((
            all.len() == 461 && residual <= 1e-7 && delta <= 1e-7,
            format!(
                "{} vectors, max residual {}, max delta {}",
                all.len(),
                format_sig17(residual),
                format_sig17(delta)
            ),
        ))
    })
}

pub fn closed_form_star_indices() -> Check {
    check("closed-form star indices", || {
        let mut worst =
            (solve_star_index(&bv(&[1, 2, 2]), DEFAULT_BRACKET_TOL)?.r - (2.0 + 3f64.sqrt())).abs();
        for s in 1..=10 {
            let rep = solve_star_index(&bv(&vec![1; s]), DEFAULT_BRACKET_TOL)?;
            worst = worst.max((rep.r - s as f64).abs());
        }
        Ok((worst <= 1e-10, format!("max error {}", format_sig17(worst))))
    })
}

/// The graphs on which the standard-vector identities are checked.
pub fn standard_suite() -> Vec<(&'static str, Graph)> {
    vec![
        ("~D4", star(&[1, 1, 1, 1])),
        ("~E6", star(&[2, 2, 2])),
        ("~E7", star(&[1, 3, 3])),
        ("~E8", star(&[1, 2, 5])),
        ("(1,2,6)", star(&[1, 2, 6])),
    ]
}

pub fn standard_vector_action() -> Check {
    check("Coxeter action on standard vectors", || {
        let mut worst = 0.0_f64;
        let mut bad = Vec::new();
        for (name, g) in standard_suite() {
            let sys = CoxeterSystem::from_graph(&g)?;
            let spectral = index_and_principal(&g, PowerOptions::default())?;
            let report = verify_standard(&sys, &spectral, 10)?;
            match report.max_defect() {
                Some(d) => worst = worst.max(d),
                None => bad.push(name),
            }
            if !report.passes(1e-8) {
                bad.push(name);
            }
        }
        bad.dedup();
        let detail = format!("max defect {}", format_sig17(worst));
        Ok((
            bad.is_empty(),
            if bad.is_empty() {
                detail
            } else {
                format!("{detail}; failing: {}", bad.join(", "))
            },
        ))
    })
}

pub fn recurrence_vs_closed_form() -> Check {
    check("recurrence vs closed form", || {
        let mut worst = 0.0_f64;
        for r in [4.5, 5.0, 6.0, 10.0] {
            for n in 0..=30 {
                let a = finite(rho(&r, n)?)?;
                let b = rho_closed_form(r, n)?;
                worst = worst.max((a - b).abs() / a.abs().max(1.0));
            }
        }
        Ok((
            worst <= 1e-10,
            format!("max relative error {}", format_sig17(worst)),
        ))
    })
}

pub fn odd_index_u_ratio() -> Check {
    check("odd-index u-ratio identity", || {
        let mut failures = 0;
        for r in 4..=7 {
            let r = q(r, 1);
            let u = RecurrenceSequence::u(r.clone())?;
            for k in 1..=15u64 {
                let lhs = finite(rho(&r, 2 * k - 1)?)?;
                if lhs != q(1, 1) + u.term(k - 1)? / u.term(k)? {
                    failures += 1;
                }
            }
        }
        Ok((
            failures == 0,
            format!("exact, r = 4..7, k <= 15, {failures} failures"),
        ))
    })
}

pub fn v_sequence_ratio() -> Check {
    check("v-sequence ratio identity", || {
        let mut worst = 0.0_f64;
        let mut pole_failures = 0;
        for r in [4.0, 4.5, 5.0, 6.0, 2.0 + 3f64.sqrt()] {
            let v = RecurrenceSequence::v(r)?;
            let mut scale = 1.0_f64;
            for n in 0..=21 {
                scale = scale.max(v.term(n)?.abs());
            }
            for n in 0..=20 {
                let lhs = rho(&r, n)?;
                let den = v.term(n + 1)?;
                if den.abs() <= 1e-12 * scale {
                    // both sides sit on a pole
                    if lhs.finite().is_some_and(|x| x.abs() <= 1e10) {
                        pole_failures += 1;
                    }
                    continue;
                }
                let lhs = finite(lhs)?;
                worst = worst.max((lhs - r.sqrt() * v.term(n)? / den).abs());
            }
        }
        Ok((
            worst <= 1e-10 && pole_failures == 0,
            format!("n <= 20, max error {}", format_sig17(worst)),
        ))
    })
}

pub fn periodicity() -> Check {
    check("periodicity below four", || {
        let mut bad = Vec::new();
        for (r, period) in [(1, 3usize), (2, 4), (3, 6)] {
            let table = rho_table(&q(r, 1), 40)?;
            let minimal = (1..=period)
                .find(|&p| (0..table.len() - p).all(|m| table[m] == table[m + p]))
                .unwrap_or(0);
            if minimal != period {
                bad.push(format!("r={r} period {minimal}"));
            }
        }
        Ok((
            bad.is_empty(),
            if bad.is_empty() {
                "periods 3, 4, 6".into()
            } else {
                bad.join(", ")
            },
        ))
    })
}

pub fn phi_closed_vs_recurrent() -> Check {
    check("Coxeter map closed vs recurrent", || {
        let mut worst = 0.0_f64;
        for r in [4.0, 5.0, 6.0] {
            for alpha in [0.0, 0.5, 1.0, 2.0] {
                for k in 1..=10 {
                    match (phi_plus(&r, &alpha, k), phi_plus_recurrent(&r, &alpha, k)) {
                        (Ok(a), Ok(b)) => worst = worst.max((a - b).abs() / a.abs().max(1.0)),
                        (Err(SigmaError::Pole { .. }), Err(SigmaError::Pole { .. })) => {}
                        (Err(e), _) | (_, Err(e)) => return Err(e.into()),
                    }
                }
            }
        }
        let exact = phi_plus(&q(5, 1), &q(1, 1), 2)? == phi_plus_recurrent(&q(5, 1), &q(1, 1), 2)?;
        Ok((
            worst <= 1e-10 && exact,
            format!("max relative error {}", format_sig17(worst)),
        ))
    })
}

/// Root systems and their sizes for the census.
pub fn census_suite() -> Vec<(&'static str, Graph, usize)> {
    vec![
        ("A2", Graph::path(2), 6),
        ("D4", star(&[1, 1, 1]), 24),
        ("E6", star(&[1, 2, 2]), 72),
        ("E7", star(&[1, 2, 3]), 126),
        ("E8", star(&[1, 2, 4]), 240),
    ]
}

/// Counts and sign dichotomy for one root system.
pub fn root_census_of(g: &Graph, count: usize) -> Outcome {
    let e = enumerate_real_roots(g, 1000, 100_000)?;
    let signed = e
        .roots
        .iter()
        .all(|x| x.is_nonnegative() || x.is_nonpositive());
    Ok((
        e.exhaustive && e.roots.len() == count && signed,
        format!("{} roots, exhaustive {}", e.roots.len(), e.exhaustive),
    ))
}

pub fn root_census() -> Check {
    check("root census", || {
        let mut parts = Vec::new();
        let mut passed = true;
        for (name, g, count) in census_suite() {
            let (ok, _) = root_census_of(&g, count)?;
            passed &= ok;
            parts.push(format!("{name}{}", if ok { "" } else { " FAIL" }));
        }
        Ok((passed, parts.join(", ")))
    })
}

/// Replays every nonnegative `c_t(e_v)` with `|t| <= 8` on `g`. Returns the
/// number of vectors checked.
pub fn singular_replay_on(g: &Graph) -> Result<usize, Failure> {
    let sys = CoxeterSystem::from_graph(g)?;
    let spectral = index_and_principal(g, PowerOptions::default())?;
    let t_max = default_t_max(g);
    let mut checked = 0;
    for v in 0..g.len() {
        for t in -8..=8 {
            let d = sys.coxeter_t(&GVector::simple_root(g.len(), v), t)?;
            if !d.is_nonnegative() {
                continue;
            }
            let RootClassification::SingularAt { t: s, vertex } = classify_root(&sys, &d, t_max)?
            else {
                return Err(format!("c_{t}(e_{}) not singular", g.label(v)).into());
            };
            if sys.coxeter_t(&GVector::simple_root(g.len(), vertex), s)? != d {
                return Err(format!("replay of c_{t}(e_{}) differs", g.label(v)).into());
            }
            let ch = standard_character(&sys, &d, &spectral, t_max)?;
            if ch.seed[vertex] != 0.0 || !g.neighbors(vertex).iter().all(|&w| ch.seed[w] > 0.0) {
                return Err(
                    format!("character of c_{t}(e_{}) has the wrong support", g.label(v)).into(),
                );
            }
            checked += 1;
        }
    }
    Ok(checked)
}

pub fn singular_replay() -> Check {
    check("singular root replay", || {
        let a = singular_replay_on(&star(&[1, 1, 1, 1]))?;
        let b = singular_replay_on(&star(&[1, 2, 5]))?;
        Ok((true, format!("~D4: {a} vectors, ~E8: {b} vectors")))
    })
}

/// Every check, run in parallel, in a fixed order.
pub fn run_all() -> Vec<Check> {
    let checks: [fn() -> Check; 14] = [
        recurrence_vs_closed_form,
        odd_index_u_ratio,
        v_sequence_ratio,
        periodicity,
        phi_closed_vs_recurrent,
        solver_at_four,
        solver_families,
        branch_classification,
        smith_classification,
        star_theorem_sweep,
        closed_form_star_indices,
        standard_vector_action,
        root_census,
        singular_replay,
    ];
    checks.par_iter().map(|f| f()).collect()
}
