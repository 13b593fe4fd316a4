use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use coxspec::coxeter::{
    classify_root, default_t_max, enumerate_real_roots, reflect, standard_character,
    standard_vectors, verify_standard, CoxeterSystem, RootClassification, StandardCheckReport,
};
use coxspec::graph::{
    full_spectrum, index_and_principal, make_star, smith_classify, star_branches, Graph,
    PowerOptions, DEFAULT_CLASSIFY_TOL, DEFAULT_JACOBI_TOL, DEFAULT_MAX_ITER, DEFAULT_POWER_TOL,
};
use coxspec::numeric::{format_sig17, json_f64, rational_to_string, Rational};
use coxspec::rho::{
    canonical_branch_vectors, classify_branch_vector, default_solver_bounds, rho, rho_closed_form,
    rho_vector, solve_rho_equation,
};
use coxspec::sigma::{
    phi_plus, phi_plus_recurrent, sigma_description, SigmaPart, DEFAULT_MEMBER_TOL,
};
use coxspec::star::{
    analytic_star_eigenvector, solve_star_index, verify_star_theorem, StarIndexReport,
    DEFAULT_BRACKET_TOL, DEFAULT_THEOREM_TOL,
};
use coxspec::{BranchVector, ExtendedValue, GVector, Number, RecurrenceSequence};

use crate::args::*;
use crate::input;
use crate::verify;
use crate::{CliError, Environment, Report};

/// Pass threshold for the standard-vector identities.
const STANDARD_TOL: f64 = 1e-8;
/// Pass threshold for both residuals in `star sweep`.
const SWEEP_TOL: f64 = 1e-7;

pub(crate) fn wants_json(cmd: &Command) -> bool {
    let out = match cmd {
        Command::Rho(c) => match c {
            RhoCmd::Eval { out, .. }
            | RhoCmd::Solve { out, .. }
            | RhoCmd::Classify { out, .. }
            | RhoCmd::Term { out, .. } => out,
        },
        Command::Sigma(c) => match c {
            SigmaCmd::Sets { out, .. }
            | SigmaCmd::Member { out, .. }
            | SigmaCmd::Phi { out, .. } => out,
        },
        Command::Graph(c) => match c {
            GraphCmd::Index { out, .. }
            | GraphCmd::Spectrum { out, .. }
            | GraphCmd::Classify { out, .. }
            | GraphCmd::Emit { out, .. }
            | GraphCmd::Branches { out, .. } => out,
        },
        Command::Coxeter(c) => match c {
            CoxeterCmd::Reflect { out, .. }
            | CoxeterCmd::Orbit { out, .. }
            | CoxeterCmd::Standard { out, .. }
            | CoxeterCmd::VerifyStandard { out, .. }
            | CoxeterCmd::Roots { out, .. }
            | CoxeterCmd::Character { out, .. }
            | CoxeterCmd::ClassifyRoot { out, .. } => out,
        },
        Command::Star(c) => match c {
            StarCmd::Index { out, .. }
            | StarCmd::Verify { out, .. }
            | StarCmd::Vector { out, .. }
            | StarCmd::Sweep { out, .. } => out,
        },
        Command::Verify(VerifyCmd::All { out }) => out,
    };
    out.json
}

pub(crate) fn dispatch(cmd: &Command, env: &Environment) -> Result<Report, CliError> {
    match cmd {
        Command::Rho(c) => rho_cmd(c),
        Command::Sigma(c) => sigma_cmd(c, env),
        Command::Graph(c) => graph_cmd(c, env),
        Command::Coxeter(c) => coxeter_cmd(c, env),
        Command::Star(c) => star_cmd(c, env),
        Command::Verify(VerifyCmd::All { .. }) => Ok(verify_all()),
    }
}

fn number_json(n: &Number) -> Value {
    match n {
        Number::Exact(q) => rational_json(q),
        Number::Float(x) => json_f64(*x),
    }
}

fn rational_json(q: &Rational) -> Value {
    serde_json::to_value(Number::Exact(q.clone())).expect("rationals serialize")
}

fn extended_json(v: &ExtendedValue<Number>) -> Value {
    match v {
        ExtendedValue::Finite(n) => number_json(n),
        ExtendedValue::Infinite => Value::from("inf"),
    }
}

fn extended_text(v: &ExtendedValue<Number>) -> String {
    match v {
        ExtendedValue::Finite(n) => n.to_string(),
        ExtendedValue::Infinite => "inf".to_string(),
    }
}

fn branches_json(v: &BranchVector) -> Value {
    Value::from(v.entries().to_vec())
}

fn float_vector_json(g: &Graph, x: &GVector<f64>) -> Value {
    x.to_json(g)
}

fn vector_text<T>(g: &Graph, x: &GVector<T>, show: impl Fn(&T) -> String) -> String {
    g.labels()
        .iter()
        .zip(x.iter())
        .map(|(l, v)| format!("{l}={}", show(v)))
        .collect::<Vec<_>>()
        .join(",")
}

fn int_text(g: &Graph, x: &GVector<i64>) -> String {
    vector_text(g, x, |v| v.to_string())
}

fn float_text(g: &Graph, x: &GVector<f64>) -> String {
    vector_text(g, x, |v| format_sig17(*v))
}

fn rho_cmd(cmd: &RhoCmd) -> Result<Report, CliError> {
    match cmd {
        RhoCmd::Eval {
            r,
            n,
            branches,
            exact,
            closed_form,
            ..
        } => {
            if *closed_form {
                let n = n.expect("clap requires --n with --closed-form");
                let x = rho_closed_form(input::real("r", r)?, n)?;
                return Ok(Report::ok(
                    format_sig17(x),
                    json!({ "r": json_f64(input::real("r", r)?), "n": n, "form": "closed", "value": json_f64(x) }),
                ));
            }
            let value = match (n, branches) {
                (Some(n), _) => {
                    if *exact {
                        rho(&input::rational("r", r)?, *n)?.map(Number::Exact)
                    } else {
                        rho(&input::real("r", r)?, *n)?.map(Number::Float)
                    }
                }
                (None, Some(b)) => {
                    let v = input::branches(b)?;
                    if *exact {
                        rho_vector(&input::rational("r", r)?, &v)?.map(Number::Exact)
                    } else {
                        rho_vector(&input::real("r", r)?, &v)?.map(Number::Float)
                    }
                }
                (None, None) => unreachable!("clap requires --n or --branches"),
            };
            let mut doc = Map::new();
            doc.insert(
                "r".into(),
                if *exact {
                    rational_json(&input::rational("r", r)?)
                } else {
                    json_f64(input::real("r", r)?)
                },
            );
            match (n, branches) {
                (Some(n), _) => doc.insert("n".into(), Value::from(*n)),
                (None, Some(b)) => {
                    doc.insert("branches".into(), branches_json(&input::branches(b)?))
                }
                _ => None,
            };
            doc.insert(
                "mode".into(),
                Value::from(if *exact { "exact" } else { "floating" }),
            );
            doc.insert("value".into(), extended_json(&value));
            Ok(Report::ok(extended_text(&value), Value::Object(doc)))
        }
        RhoCmd::Solve { r, smax, nmax, .. } => {
            let q = input::rational("r", r)?;
            let (s_default, n_default) = default_solver_bounds(&q);
            let res = solve_rho_equation(&q, smax.unwrap_or(s_default), nmax.unwrap_or(n_default))?;
            let mut text = String::new();
            for v in &res.solutions {
                writeln!(text, "{v}").unwrap();
            }
            if res.solutions.is_empty() {
                writeln!(text, "no solutions").unwrap();
            }
            write!(
                text,
                "{}",
                if res.exhaustive {
                    "exhaustive"
                } else {
                    "not proven exhaustive"
                }
            )
            .unwrap();
            let doc = json!({
                "r": rational_json(&res.r),
                "s_max": res.s_max,
                "n_max": res.n_max,
                "solutions": res.solutions.iter().map(branches_json).collect::<Vec<_>>(),
                "exhaustive": res.exhaustive,
            });
            Ok(Report::ok(text, doc))
        }
        RhoCmd::Classify { branches, .. } => {
            let v = input::branches(branches)?;
            let class = classify_branch_vector(&v);
            let text = format!("{} rho4={}", class.tag, rational_to_string(&class.rho4));
            let doc = json!({ "branches": branches_json(&v), "tag": class.tag.to_string(), "rho4": rational_json(&class.rho4) });
            Ok(Report::ok(text, doc))
        }
        RhoCmd::Term {
            kind,
            r,
            n,
            alpha,
            exact,
            ..
        } => {
            let value = if *exact {
                let q = input::rational("r", r)?;
                let seq = match kind {
                    SequenceArg::U => RecurrenceSequence::u(q)?,
                    SequenceArg::A => {
                        let a = alpha
                            .as_deref()
                            .ok_or_else(|| CliError::Usage("--kind a needs --alpha".into()))?;
                        RecurrenceSequence::a(q, input::rational("alpha", a)?)?
                    }
                    SequenceArg::V => RecurrenceSequence::v_exact(&q).ok_or_else(|| {
                        CliError::Domain(
                            "the exact v-sequence needs r to be the square of a rational".into(),
                        )
                    })?,
                };
                Number::Exact(seq.term(*n)?)
            } else {
                let x = input::real("r", r)?;
                let seq = match kind {
                    SequenceArg::U => RecurrenceSequence::u(x)?,
                    SequenceArg::A => {
                        let a = alpha
                            .as_deref()
                            .ok_or_else(|| CliError::Usage("--kind a needs --alpha".into()))?;
                        RecurrenceSequence::a(x, input::real("alpha", a)?)?
                    }
                    SequenceArg::V => RecurrenceSequence::v(x)?,
                };
                Number::Float(seq.term(*n)?)
            };
            let name = match kind {
                SequenceArg::U => "u",
                SequenceArg::V => "v",
                SequenceArg::A => "a",
            };
            let doc = json!({ "kind": name, "n": n, "value": number_json(&value) });
            Ok(Report::ok(value.to_string(), doc))
        }
    }
}

fn part_text(p: &SigmaPart) -> String {
    match p {
        SigmaPart::Lambda1(k) => format!("lambda1[{k}]"),
        SigmaPart::Lambda2(k) => format!("lambda2[{k}]"),
        SigmaPart::Band => "band".to_string(),
        SigmaPart::Reflected1(k) => format!("reflected1[{k}]"),
        SigmaPart::Reflected2(k) => format!("reflected2[{k}]"),
    }
}

fn sigma_cmd(cmd: &SigmaCmd, env: &Environment) -> Result<Report, CliError> {
    match cmd {
        SigmaCmd::Sets { r, k, exact, .. } => {
            let band;
            let (series, jsons): (Vec<String>, Vec<Value>) = if *exact {
                let s = sigma_description(&input::rational("r", r)?, *k)?;
                band = s.band;
                let lists = [&s.lambda1, &s.lambda2, &s.reflected1, &s.reflected2];
                (
                    lists
                        .iter()
                        .map(|l| {
                            l.iter()
                                .map(rational_to_string)
                                .collect::<Vec<_>>()
                                .join(", ")
                        })
                        .collect(),
                    lists
                        .iter()
                        .map(|l| Value::from(l.iter().map(rational_json).collect::<Vec<_>>()))
                        .collect(),
                )
            } else {
                let s = sigma_description(&input::real("r", r)?, *k)?;
                band = s.band;
                let lists = [&s.lambda1, &s.lambda2, &s.reflected1, &s.reflected2];
                (
                    lists
                        .iter()
                        .map(|l| {
                            l.iter()
                                .map(|x| format_sig17(*x))
                                .collect::<Vec<_>>()
                                .join(", ")
                        })
                        .collect(),
                    lists
                        .iter()
                        .map(|l| Value::from(l.iter().map(|x| json_f64(*x)).collect::<Vec<_>>()))
                        .collect(),
                )
            };
            let names = ["lambda1", "lambda2", "reflected1", "reflected2"];
            let mut text = String::new();
            for (name, line) in names.iter().zip(&series).take(2) {
                writeln!(text, "{name}: {line}").unwrap();
            }
            writeln!(
                text,
                "band: [{}, {}]",
                format_sig17(band.0),
                format_sig17(band.1)
            )
            .unwrap();
            for (name, line) in names.iter().zip(&series).skip(2) {
                writeln!(text, "{name}: {line}").unwrap();
            }
            let mut doc = Map::new();
            doc.insert("r".into(), Value::from(r.as_str()));
            for (name, j) in names.iter().zip(jsons) {
                doc.insert((*name).into(), j);
            }
            doc.insert("band".into(), json!([json_f64(band.0), json_f64(band.1)]));
            Ok(Report::ok(text, Value::Object(doc)))
        }
        SigmaCmd::Member {
            r, alpha, k, tol, ..
        } => {
            let tol = input::tolerance(*tol, env, DEFAULT_MEMBER_TOL)?;
            let s = sigma_description(&input::real("r", r)?, *k)?;
            let parts = s.locate(*alpha, tol);
            let text = if parts.is_empty() {
                "not found".to_string()
            } else {
                parts.iter().map(part_text).collect::<Vec<_>>().join("\n")
            };
            let doc = json!({
                "r": json_f64(s.r),
                "alpha": json_f64(*alpha),
                "tol": json_f64(tol),
                "member": !parts.is_empty(),
                "parts": parts.iter().map(part_text).collect::<Vec<_>>(),
            });
            Ok(Report::ok(text, doc))
        }
        SigmaCmd::Phi {
            r, alpha, k, exact, ..
        } => {
            let (closed, recurrent) = if *exact {
                let (r, a) = (input::rational("r", r)?, input::rational("alpha", alpha)?);
                (
                    Number::Exact(phi_plus(&r, &a, *k)?),
                    Number::Exact(phi_plus_recurrent(&r, &a, *k)?),
                )
            } else {
                let (r, a) = (input::real("r", r)?, input::real("alpha", alpha)?);
                (
                    Number::Float(phi_plus(&r, &a, *k)?),
                    Number::Float(phi_plus_recurrent(&r, &a, *k)?),
                )
            };
            let difference = (closed.to_f64() - recurrent.to_f64()).abs();
            let text = format!(
                "closed: {closed}\nrecurrent: {recurrent}\ndifference: {}",
                format_sig17(difference)
            );
            let doc = json!({
                "k": k,
                "closed": number_json(&closed),
                "recurrent": number_json(&recurrent),
                "difference": json_f64(difference),
            });
            Ok(Report::ok(text, doc))
        }
    }
}

fn graph_cmd(cmd: &GraphCmd, env: &Environment) -> Result<Report, CliError> {
    match cmd {
        GraphCmd::Index {
            graph,
            tol,
            max_iter,
            ..
        } => {
            let g = input::graph(graph, env)?;
            let opts = PowerOptions {
                tol: input::tolerance(*tol, env, DEFAULT_POWER_TOL)?,
                max_iter: max_iter.unwrap_or(DEFAULT_MAX_ITER),
            };
            let s = index_and_principal(&g, opts)?;
            let text = format!(
                "index: {}\nprincipal: {}\niterations: {}\nresidual: {}",
                format_sig17(s.index),
                float_text(&g, &s.principal),
                s.iterations,
                format_sig17(s.residual)
            );
            let doc = json!({
                "index": json_f64(s.index),
                "principal": float_vector_json(&g, &s.principal),
                "iterations": s.iterations,
                "residual": json_f64(s.residual),
            });
            Ok(Report::ok(text, doc))
        }
        GraphCmd::Spectrum { graph, tol, .. } => {
            let g = input::graph(graph, env)?;
            let spectrum = full_spectrum(&g, input::tolerance(*tol, env, DEFAULT_JACOBI_TOL)?)?;
            let text = spectrum
                .iter()
                .map(|x| format_sig17(*x))
                .collect::<Vec<_>>()
                .join("\n");
            let doc =
                json!({ "eigenvalues": spectrum.iter().map(|x| json_f64(*x)).collect::<Vec<_>>() });
            Ok(Report::ok(text, doc))
        }
        GraphCmd::Classify { graph, tol, .. } => {
            let g = input::graph(graph, env)?;
            let c = smith_classify(&g, input::tolerance(*tol, env, DEFAULT_CLASSIFY_TOL)?)?;
            let name = c.name.map_or_else(|| "-".to_string(), |n| n.to_string());
            let text = format!("{} {} index={}", c.tag, name, format_sig17(c.index));
            let doc = json!({
                "tag": c.tag.to_string(),
                "name": c.name.map(|n| n.to_string()),
                "name_ascii": c.name.map(|n| n.ascii()),
                "index": json_f64(c.index),
            });
            Ok(Report::ok(text, doc))
        }
        GraphCmd::Emit { graph, star, .. } => {
            let g = match (graph, star) {
                (_, Some(b)) => make_star(&input::branches(b)?),
                (Some(path), None) => input::graph(path, env)?,
                (None, None) => unreachable!("clap requires a source"),
            };
            let doc: Value = serde_json::from_str(&g.to_json()).expect("graph JSON is valid");
            Ok(Report::ok(g.to_edge_list(), doc))
        }
        GraphCmd::Branches { graph, .. } => {
            let g = input::graph(graph, env)?;
            let v = star_branches(&g)?;
            Ok(Report::ok(
                v.to_string(),
                json!({ "branches": branches_json(&v) }),
            ))
        }
    }
}

fn verdict_text(g: &Graph, c: &RootClassification) -> String {
    match c {
        RootClassification::SingularAt { t, vertex } => {
            format!("singular t={t} vertex={}", g.label(*vertex))
        }
        RootClassification::RegularProven { period } => format!("regular period={period}"),
        RootClassification::UndeterminedWithin { t_max } => {
            format!("undetermined within t_max={t_max}")
        }
    }
}

fn verdict_json(g: &Graph, c: &RootClassification) -> Value {
    match c {
        RootClassification::SingularAt { t, vertex } => {
            json!({ "verdict": "singular", "t": t, "vertex": g.label(*vertex) })
        }
        RootClassification::RegularProven { period } => {
            json!({ "verdict": "regular", "period": period })
        }
        RootClassification::UndeterminedWithin { t_max } => {
            json!({ "verdict": "undetermined", "t_max": t_max })
        }
    }
}

fn standard_report(r: &StandardCheckReport, tol: f64) -> (String, Value, bool) {
    let fmt = |d: Option<f64>| d.map_or_else(|| "pole".to_string(), format_sig17);
    let mut text = format!("r: {}\n", format_sig17(r.r));
    writeln!(
        text,
        "c_-2(y_odd) vs (r-1) y_odd + sqrt(r) y_even: {}",
        format_sig17(r.intermediate_defect)
    )
    .unwrap();
    writeln!(
        text,
        "t\tc_(2t-1)(y_even)\tc_(2t)(y_even)\tc_-(2t+1)(y_odd)\tc_-(2t)(y_odd)"
    )
    .unwrap();
    for row in &r.rows {
        let cells: Vec<String> = row.lines.iter().map(|l| fmt(l.defect)).collect();
        writeln!(text, "{}\t{}", row.t, cells.join("\t")).unwrap();
    }
    let passed = r.passes(tol);
    write!(
        text,
        "{} (max defect {}, tolerance {})",
        if passed { "PASS" } else { "FAIL" },
        fmt(r.max_defect()),
        format_sig17(tol)
    )
    .unwrap();
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({
                "t": row.t,
                "lines": row.lines.iter().map(|l| json!({
                    "word": l.word,
                    "start": l.start.to_string(),
                    "coefficient": l.coefficient.map(json_f64),
                    "defect": l.defect.map(json_f64),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let doc = json!({
        "r": json_f64(r.r),
        "intermediate_defect": json_f64(r.intermediate_defect),
        "rows": rows,
        "max_defect": r.max_defect().map(json_f64),
        "tolerance": json_f64(tol),
        "passed": passed,
    });
    (text, doc, passed)
}

fn coxeter_cmd(cmd: &CoxeterCmd, env: &Environment) -> Result<Report, CliError> {
    match cmd {
        CoxeterCmd::Reflect {
            graph, vector, at, ..
        } => {
            let g = input::graph(graph, env)?;
            let x = input::int_vector(&g, vector)?;
            let y = reflect(&g, &x, input::vertex(&g, at)?)?;
            Ok(Report::ok(int_text(&g, &y), y.to_json(&g)))
        }
        CoxeterCmd::Orbit {
            graph,
            vector,
            tmax,
            ..
        } => {
            let g = input::graph(graph, env)?;
            let sys = CoxeterSystem::from_graph(&g)?;
            let x = input::int_vector(&g, vector)?;
            let orbit = sys.orbit(&x, *tmax)?;
            let text = orbit
                .iter()
                .map(|(t, y)| format!("{t}: {}", int_text(&g, y)))
                .collect::<Vec<_>>()
                .join("\n");
            let doc = json!({
                "orbit": orbit.iter().map(|(t, y)| json!({ "t": t, "vector": y.to_json(&g) })).collect::<Vec<_>>(),
            });
            Ok(Report::ok(text, doc))
        }
        CoxeterCmd::Standard { graph, .. } => {
            let g = input::graph(graph, env)?;
            let sys = CoxeterSystem::from_graph(&g)?;
            let spectral = index_and_principal(&g, PowerOptions::default())?;
            let std = standard_vectors(&sys, &spectral)?;
            let parities: Vec<String> = (0..g.len())
                .map(|v| format!("{}={}", g.label(v), sys.parity(v)))
                .collect();
            let text = format!(
                "index: {}\nparity: {}\ny_odd: {}\ny_even: {}",
                format_sig17(std.index),
                parities.join(","),
                float_text(&g, &std.y_odd),
                float_text(&g, &std.y_even)
            );
            let mut parity_doc = Map::new();
            for v in 0..g.len() {
                parity_doc.insert(
                    g.label(v).to_string(),
                    Value::from(sys.parity(v).to_string()),
                );
            }
            let doc = json!({
                "index": json_f64(std.index),
                "parity": parity_doc,
                "y_odd": float_vector_json(&g, &std.y_odd),
                "y_even": float_vector_json(&g, &std.y_even),
            });
            Ok(Report::ok(text, doc))
        }
        CoxeterCmd::VerifyStandard {
            graph, tmax, tol, ..
        } => {
            let g = input::graph(graph, env)?;
            let sys = CoxeterSystem::from_graph(&g)?;
            let spectral = index_and_principal(&g, PowerOptions::default())?;
            let tol = input::tolerance(*tol, env, STANDARD_TOL)?;
            let report = verify_standard(&sys, &spectral, *tmax)?;
            let (text, doc, passed) = standard_report(&report, tol);
            Ok(Report::checked(text, doc, passed))
        }
        CoxeterCmd::Roots {
            graph,
            bound,
            budget,
            list,
            ..
        } => {
            let g = input::graph(graph, env)?;
            let e = enumerate_real_roots(&g, *bound, *budget)?;
            let mut text = format!(
                "roots: {}\nexhaustive: {}\ntruncated: {}\nbudget_exhausted: {}",
                e.roots.len(),
                e.exhaustive,
                e.truncated,
                e.budget_exhausted
            );
            if *list {
                for root in &e.roots {
                    write!(text, "\n{}", int_text(&g, root)).unwrap();
                }
            }
            let mut doc = json!({
                "count": e.roots.len(),
                "exhaustive": e.exhaustive,
                "truncated": e.truncated,
                "budget_exhausted": e.budget_exhausted,
            });
            if *list {
                doc["roots"] =
                    Value::from(e.roots.iter().map(|r| r.to_json(&g)).collect::<Vec<_>>());
            }
            Ok(Report::ok(text, doc))
        }
        CoxeterCmd::Character {
            graph,
            vector,
            tmax,
            ..
        } => {
            let g = input::graph(graph, env)?;
            let sys = CoxeterSystem::from_graph(&g)?;
            let d = input::int_vector(&g, vector)?;
            let spectral = index_and_principal(&g, PowerOptions::default())?;
            let ch = standard_character(
                &sys,
                &d,
                &spectral,
                tmax.unwrap_or_else(|| default_t_max(&g)),
            )?;
            let text = format!(
                "t: {}\nvertex: {}\nseed: {}\ncharacter: {}",
                ch.t,
                g.label(ch.vertex),
                float_text(&g, &ch.seed),
                float_text(&g, &ch.character)
            );
            let doc = json!({
                "t": ch.t,
                "vertex": g.label(ch.vertex),
                "seed": float_vector_json(&g, &ch.seed),
                "character": float_vector_json(&g, &ch.character),
            });
            Ok(Report::ok(text, doc))
        }
        CoxeterCmd::ClassifyRoot {
            graph,
            vector,
            tmax,
            ..
        } => {
            let g = input::graph(graph, env)?;
            let sys = CoxeterSystem::from_graph(&g)?;
            let d = input::int_vector(&g, vector)?;
            let c = classify_root(&sys, &d, tmax.unwrap_or_else(|| default_t_max(&g)))?;
            Ok(Report::ok(verdict_text(&g, &c), verdict_json(&g, &c)))
        }
    }
}

fn star_json(rep: &StarIndexReport) -> Value {
    json!({
        "branches": branches_json(&rep.branches),
        "r": json_f64(rep.r),
        "index": json_f64(rep.index),
        "residual": json_f64(rep.residual),
        "method": serde_json::to_value(rep.method).expect("enum serializes"),
        "power_r": rep.power_r.map(json_f64),
        "cross_check_delta": rep.cross_check_delta.map(json_f64),
        "within_tolerance": rep.within_tolerance,
    })
}

fn star_text(rep: &StarIndexReport) -> String {
    let opt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), format_sig17);
    format!(
        "branches: {}\nr: {}\nindex: {}\nresidual: {}\nmethod: {}\npower_r: {}\ncross_check_delta: {}",
        rep.branches,
        format_sig17(rep.r),
        format_sig17(rep.index),
        format_sig17(rep.residual),
        serde_json::to_value(rep.method).expect("enum serializes").as_str().unwrap_or("?"),
        opt(rep.power_r),
        opt(rep.cross_check_delta)
    )
}

fn star_cmd(cmd: &StarCmd, env: &Environment) -> Result<Report, CliError> {
    match cmd {
        StarCmd::Index { branches, tol, .. } => {
            let v = input::branches(branches)?;
            let rep = solve_star_index(&v, input::tolerance(*tol, env, DEFAULT_BRACKET_TOL)?)?;
            Ok(Report::ok(star_text(&rep), star_json(&rep)))
        }
        StarCmd::Verify { branches, tol, .. } => {
            let v = input::branches(branches)?;
            let rep = verify_star_theorem(&v, input::tolerance(*tol, env, DEFAULT_THEOREM_TOL)?)?;
            let passed = rep.within_tolerance;
            Ok(Report::checked(star_text(&rep), star_json(&rep), passed))
        }
        StarCmd::Vector { branches, r, .. } => {
            let v = input::branches(branches)?;
            let r = match r {
                Some(r) => *r,
                None => solve_star_index(&v, DEFAULT_BRACKET_TOL)?.r,
            };
            let g = make_star(&v);
            let y = analytic_star_eigenvector(&v, r)?;
            let text = format!("r: {}\nvector: {}", format_sig17(r), float_text(&g, &y));
            let doc = json!({ "r": json_f64(r), "vector": float_vector_json(&g, &y) });
            Ok(Report::ok(text, doc))
        }
        StarCmd::Sweep {
            smax, nmax, tol, ..
        } => {
            let tol = input::tolerance(*tol, env, SWEEP_TOL)?;
            let vectors = canonical_branch_vectors(*smax, *nmax);
            let rows: Vec<Result<(StarIndexReport, StarIndexReport), CliError>> = vectors
                .par_iter()
                .map(|v| {
                    Ok((
                        verify_star_theorem(v, tol)?,
                        solve_star_index(v, DEFAULT_BRACKET_TOL)?,
                    ))
                })
                .collect();
            let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
            let mut text = String::new();
            let (mut max_residual, mut max_delta, mut failures) = (0.0_f64, 0.0_f64, Vec::new());
            let mut items = Vec::with_capacity(rows.len());
            for (fwd, inv) in &rows {
                let delta = (inv.r - fwd.r).abs();
                max_residual = max_residual.max(fwd.residual);
                max_delta = max_delta.max(delta);
                let ok = fwd.residual <= tol && delta <= tol;
                if !ok {
                    failures.push(fwd.branches.to_string());
                }
                writeln!(
                    text,
                    "{}\tr={}\tresidual={}\tdelta={}{}",
                    fwd.branches,
                    format_sig17(fwd.r),
                    format_sig17(fwd.residual),
                    format_sig17(delta),
                    if ok { "" } else { "\tFAIL" }
                )
                .unwrap();
                items.push(json!({
                    "branches": branches_json(&fwd.branches),
                    "r_power": json_f64(fwd.r),
                    "r_bisection": json_f64(inv.r),
                    "residual": json_f64(fwd.residual),
                    "delta": json_f64(delta),
                }));
            }
            let passed = failures.is_empty();
            write!(
                text,
                "{} vectors, max residual {}, max delta {}, {}",
                rows.len(),
                format_sig17(max_residual),
                format_sig17(max_delta),
                if passed {
                    "PASS".to_string()
                } else {
                    format!("{} FAIL", failures.len())
                }
            )
            .unwrap();
            let doc = json!({
                "count": rows.len(),
                "tolerance": json_f64(tol),
                "max_residual": json_f64(max_residual),
                "max_delta": json_f64(max_delta),
                "failures": failures,
                "results": items,
                "passed": passed,
            });
            Ok(Report::checked(text, doc, passed))
        }
    }
}

fn verify_all() -> Report {
    let results = verify::run_all();
    let passed = results.iter().all(|c| c.passed);
    let mut text = String::new();
    for c in &results {
        writeln!(
            text,
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        )
        .unwrap();
    }
    write!(
        text,
        "{}/{} checks passed",
        results.iter().filter(|c| c.passed).count(),
        results.len()
    )
    .unwrap();
    let doc = json!({
        "checks": results.iter().map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail })).collect::<Vec<_>>(),
        "passed": passed,
    });
    Report::checked(text, doc, passed)
}
