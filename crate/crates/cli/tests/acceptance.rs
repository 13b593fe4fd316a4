//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! fails.

use std::time::{Duration, Instant};

use coxspec::graph::make_star;
use coxspec::BranchVector;
use coxspec_cli::verify::{self, Check};
use coxspec_cli::{run_with, Environment};

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Option<Duration>,
    body: fn() -> (bool, String),
}

fn from_checks(checks: &[fn() -> Check]) -> (bool, String) {
    let results: Vec<Check> = checks.iter().map(|f| f()).collect();
    let passed = results.iter().all(|c| c.passed);
    let detail = results
        .iter()
        .map(|c| {
            format!(
                "{}{}: {}",
                if c.passed { "" } else { "FAILED " },
                c.name,
                c.detail
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    (passed, detail)
}

fn solve_at_four() -> (bool, String) {
    let out = run_with(
        ["coxspec", "rho", "solve", "--r", "4", "--json"],
        &Environment::default(),
    );
    if out.exit_code != 0 {
        return (false, out.stderr);
    }
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).expect("JSON output");
    let mut got: Vec<Vec<u64>> =
        serde_json::from_value(doc["solutions"].clone()).expect("solutions are integer lists");
    got.sort();
    let want = vec![
        vec![1, 1, 1, 1],
        vec![1, 2, 5],
        vec![1, 3, 3],
        vec![2, 2, 2],
    ];
    (got == want && doc["exhaustive"] == true, format!("{got:?}"))
}

fn root_census() -> (bool, String) {
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, g, count) in verify::census_suite() {
        let start = Instant::now();
        let (ok, detail) = match verify::root_census_of(&g, count) {
            Ok(r) => r,
            Err(e) => (false, e.to_string()),
        };
        let elapsed = start.elapsed();
        let in_time = name != "E8" || elapsed < Duration::from_secs(10);
        passed &= ok && in_time;
        parts.push(format!("{name}: {detail} ({:.2?})", elapsed));
    }
    (passed, parts.join("; "))
}

fn singular_replay() -> (bool, String) {
    let mut parts = Vec::new();
    for (name, e) in [("~D4", vec![1, 1, 1, 1]), ("~E8", vec![1, 2, 5])] {
        let g = make_star(&BranchVector::new(e).expect("positive"));
        match verify::singular_replay_on(&g) {
            Ok(n) => parts.push(format!("{name}: {n} vectors")),
            Err(e) => return (false, format!("{name}: {e}")),
        }
    }
    (true, parts.join(", "))
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "rho_4 equation solutions",
            budget: Some(Duration::from_secs(1)),
            body: solve_at_four,
        },
        Criterion {
            id: 2,
            name: "solver families",
            budget: Some(Duration::from_secs(5)),
            body: || from_checks(&[verify::solver_families]),
        },
        Criterion {
            id: 3,
            name: "branch-vector classification",
            budget: None,
            body: || from_checks(&[verify::branch_classification]),
        },
        Criterion {
            id: 4,
            name: "Smith classification",
            budget: None,
            body: || from_checks(&[verify::smith_classification]),
        },
        Criterion {
            id: 5,
            name: "star index theorem sweep",
            budget: Some(Duration::from_secs(30)),
            body: || from_checks(&[verify::star_theorem_sweep]),
        },
        Criterion {
            id: 6,
            name: "closed-form star indices",
            budget: None,
            body: || from_checks(&[verify::closed_form_star_indices]),
        },
        Criterion {
            id: 7,
            name: "Coxeter action on standard vectors",
            budget: None,
            body: || from_checks(&[verify::standard_vector_action]),
        },
        Criterion {
            id: 8,
            name: "identity suites",
            budget: None,
            body: || {
                from_checks(&[
                    verify::odd_index_u_ratio,
                    verify::v_sequence_ratio,
                    verify::periodicity,
                    verify::phi_closed_vs_recurrent,
                ])
            },
        },
        Criterion {
            id: 9,
            name: "root census",
            budget: None,
            body: root_census,
        },
        Criterion {
            id: 10,
            name: "singular root replay",
            budget: None,
            body: singular_replay,
        },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let (ok, detail) = (c.body)();
        let elapsed = start.elapsed();
        let in_time = c.budget.is_none_or(|b| elapsed < b);
        let passed = ok && in_time;
        if !passed {
            failures += 1;
        }
        let budget = c
            .budget
            .map_or_else(String::new, |b| format!(", budget {b:?}"));
        println!(
            "{} criterion {:>2} {}: {} [{:.2?}{}]",
            if passed { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            detail,
            elapsed,
            budget
        );
    }
    println!(
        "{}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
