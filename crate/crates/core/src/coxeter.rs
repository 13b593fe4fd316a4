//! Reflections and Coxeter transforms on G-vectors of bipartite graphs,
//! standard vectors, real roots and the singular-root characters.
//!
//! Words follow `c_t = ... c_odd c_even c_odd` (length `t`, rightmost factor
//! `c_odd`) for `t > 0` and `c_t = ... c_even c_odd c_even` for `t < 0`,
//! where `c_odd` reflects every odd vertex and `c_even` every even vertex.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{bipartition, Bipartition, Graph, GraphError, Parity, SpectralResult};
use crate::numeric::ExtendedValue;
use crate::rho::{rho_table_unchecked, RhoError};
use crate::vector::{CoxScalar, GVector};

/// Smallest accepted squared index for the standard-vector identities.
pub const STANDARD_MIN_R: f64 = 4.0 - 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoxeterError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Rho(#[from] RhoError),
    #[error("vertex {0} is out of range")]
    UnknownVertex(usize),
    #[error("vector has {got} coordinates but the graph has {expected} vertices")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("invalid input vector: {0}")]
    InvalidVector(String),
    #[error(
        "vector is not a real root: its orbit leaves the positive cone away from a simple root"
    )]
    NotARealRoot,
    #[error("vector is not singular: {0:?}")]
    NotSingular(RootClassification),
    #[error("word length {t} is incompatible with the {parity} vertex {vertex}")]
    ParityViolation {
        t: i64,
        vertex: usize,
        parity: Parity,
    },
    #[error("graph index {0} is below 2")]
    IndexBelowTwo(f64),
    #[error("squared index {0} is below 4")]
    BelowFour(f64),
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

/// `sigma_v(x)`: coordinate `v` becomes `-x_v + sum of x over neighbours`.
pub fn reflect<T: CoxScalar>(
    g: &Graph,
    x: &GVector<T>,
    vertex: usize,
) -> Result<GVector<T>, CoxeterError> {
    check_len(g, x)?;
    if vertex >= g.len() {
        return Err(CoxeterError::UnknownVertex(vertex));
    }
    let mut values = x.values().to_vec();
    values[vertex] = reflected_coordinate(g, x.values(), vertex)?;
    Ok(GVector::from_values(values))
}

fn reflected_coordinate<T: CoxScalar>(
    g: &Graph,
    x: &[T],
    vertex: usize,
) -> Result<T, CoxeterError> {
    let mut acc = x[vertex].checked_neg().ok_or(CoxeterError::Overflow)?;
    for &w in g.neighbors(vertex) {
        acc = acc.checked_add(&x[w]).ok_or(CoxeterError::Overflow)?;
    }
    Ok(acc)
}

fn check_len<T>(g: &Graph, x: &GVector<T>) -> Result<(), CoxeterError> {
    if x.len() != g.len() {
        return Err(CoxeterError::DimensionMismatch {
            expected: g.len(),
            got: x.len(),
        });
    }
    Ok(())
}

/// A bipartite graph together with a validated bipartition.
#[derive(Debug, Clone)]
pub struct CoxeterSystem<'g> {
    graph: &'g Graph,
    parts: Bipartition,
    odd: Vec<usize>,
    even: Vec<usize>,
}

impl<'g> CoxeterSystem<'g> {
    pub fn new(graph: &'g Graph, parts: Bipartition) -> Result<Self, CoxeterError> {
        parts.validate(graph)?;
        let odd = parts.vertices_of(Parity::Odd);
        let even = parts.vertices_of(Parity::Even);
        Ok(CoxeterSystem {
            graph,
            parts,
            odd,
            even,
        })
    }

    /// Uses the breadth-first bipartition of the graph.
    pub fn from_graph(graph: &'g Graph) -> Result<Self, CoxeterError> {
        let parts = bipartition(graph)?;
        Self::new(graph, parts)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn bipartition(&self) -> &Bipartition {
        &self.parts
    }

    pub fn parity(&self, vertex: usize) -> Parity {
        self.parts.parity(vertex)
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn reflect<T: CoxScalar>(
        &self,
        x: &GVector<T>,
        vertex: usize,
    ) -> Result<GVector<T>, CoxeterError> {
        reflect(self.graph, x, vertex)
    }

    /// Product of the reflections at every vertex of `parity`. These vertices
    /// are pairwise non-adjacent, so every new coordinate reads only the
    /// untouched opposite class.
    pub fn partial<T: CoxScalar>(
        &self,
        x: &GVector<T>,
        parity: Parity,
    ) -> Result<GVector<T>, CoxeterError> {
        check_len(self.graph, x)?;
        let mut out = x.clone();
        let class = match parity {
            Parity::Odd => &self.odd,
            Parity::Even => &self.even,
        };
        for &v in class {
            let value = reflected_coordinate(self.graph, x.values(), v)?;
            out.values_mut()[v] = value;
        }
        Ok(out)
    }

    /// `c_t(x)`.
    pub fn coxeter_t<T: CoxScalar>(
        &self,
        x: &GVector<T>,
        t: i64,
    ) -> Result<GVector<T>, CoxeterError> {
        check_len(self.graph, x)?;
        let mut parity = if t > 0 { Parity::Odd } else { Parity::Even };
        let mut out = x.clone();
        for _ in 0..t.unsigned_abs() {
            out = self.partial(&out, parity)?;
            parity = parity.flip();
        }
        Ok(out)
    }

    /// The full transform `c = c_even c_odd = c_2`.
    pub fn coxeter<T: CoxScalar>(&self, x: &GVector<T>) -> Result<GVector<T>, CoxeterError> {
        self.coxeter_t(x, 2)
    }

    /// `c_t` restricted to `|t| <= t_max`, both directions, as `(t, c_t(x))`
    /// in increasing `t`.
    pub fn orbit<T: CoxScalar>(
        &self,
        x: &GVector<T>,
        t_max: u64,
    ) -> Result<Vec<(i64, GVector<T>)>, CoxeterError> {
        let t_max = t_max as i64;
        let mut negative = vec![(0, x.clone())];
        let mut positive = vec![(0, x.clone())];
        for (sign, list) in [(-1i64, &mut negative), (1, &mut positive)] {
            let mut parity = if sign > 0 { Parity::Odd } else { Parity::Even };
            for t in 1..=t_max {
                let next = self.partial(&list.last().expect("seeded").1, parity)?;
                list.push((sign * t, next));
                parity = parity.flip();
            }
        }
        negative.reverse();
        negative.pop();
        negative.extend(positive);
        Ok(negative)
    }
}

/// Word length of the inverse of `c_t`: `c_t` itself for odd `t`, `c_{-t}`
/// for even `t`.
pub fn inverse_word(t: i64) -> i64 {
    if t % 2 == 0 {
        -t
    } else {
        t
    }
}

/// Parity masks of the unit principal eigenvector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardVectors {
    pub y_odd: GVector<f64>,
    pub y_even: GVector<f64>,
    pub index: f64,
}

impl StandardVectors {
    pub fn of_parity(&self, parity: Parity) -> &GVector<f64> {
        match parity {
            Parity::Odd => &self.y_odd,
            Parity::Even => &self.y_even,
        }
    }
}

pub fn standard_vectors(
    sys: &CoxeterSystem<'_>,
    spectral: &SpectralResult,
) -> Result<StandardVectors, CoxeterError> {
    let g = sys.graph();
    check_len(g, &spectral.principal)?;
    let mut y_odd = vec![0.0; g.len()];
    let mut y_even = vec![0.0; g.len()];
    for (v, &y) in spectral.principal.iter().enumerate() {
        if y <= 0.0 {
            return Err(CoxeterError::InternalConsistency(format!(
                "principal eigenvector is not positive at {}",
                g.label(v)
            )));
        }
        match sys.parity(v) {
            Parity::Odd => y_odd[v] = y,
            Parity::Even => y_even[v] = y,
        }
    }
    Ok(StandardVectors {
        y_odd: GVector::from_values(y_odd),
        y_even: GVector::from_values(y_even),
        index: spectral.index,
    })
}

/// One line of the standard-vector identities: `lhs = c_word(start)` compared
/// against `start + coefficient * other`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardLine {
    pub word: i64,
    pub start: Parity,
    /// `None` when the coefficient hits a pole of rho.
    pub coefficient: Option<f64>,
    /// Sine of the angle between the two sides.
    pub defect: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardCheckRow {
    pub t: u64,
    pub lines: [StandardLine; 4],
}

impl StandardCheckRow {
    pub fn max_defect(&self) -> Option<f64> {
        self.lines
            .iter()
            .try_fold(0.0_f64, |m, l| l.defect.map(|d| m.max(d)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardCheckReport {
    pub r: f64,
    pub rows: Vec<StandardCheckRow>,
    /// Relative max-norm gap between `c_{-2}(y_odd)` and
    /// `(r - 1) y_odd + sqrt(r) y_even`.
    pub intermediate_defect: f64,
}

impl StandardCheckReport {
    /// Largest defect over all lines; poles count as failures.
    pub fn max_defect(&self) -> Option<f64> {
        self.rows
            .iter()
            .try_fold(self.intermediate_defect, |m, row| {
                row.max_defect().map(|d| m.max(d))
            })
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_defect().is_some_and(|d| d <= tol)
    }
}

/// Checks, for `1 <= t <= t_max`,
///
/// * `c_{2t-1}(y_even)  ~ y_even + sqrt(r)/rho(2t-1) y_odd`
/// * `c_{2t}(y_even)    ~ y_even + rho(2t)/sqrt(r) y_odd`
/// * `c_{-(2t+1)}(y_odd) ~ y_odd + sqrt(r)/rho(2t+1) y_even`
/// * `c_{-2t}(y_odd)    ~ y_odd + rho(2t)/sqrt(r) y_even`
///
/// with `r` the squared index, reporting the sine of the angle per line.
pub fn verify_standard(
    sys: &CoxeterSystem<'_>,
    spectral: &SpectralResult,
    t_max: u64,
) -> Result<StandardCheckReport, CoxeterError> {
    let std = standard_vectors(sys, spectral)?;
    let r = spectral.index * spectral.index;
    if r.is_nan() || r < STANDARD_MIN_R {
        return Err(CoxeterError::BelowFour(r));
    }
    let sqrt_r = spectral.index;
    let rho = rho_table_unchecked(&r, 2 * t_max + 1)?;
    let (y_odd, y_even) = (&std.y_odd, &std.y_even);

    let cm2 = sys.coxeter_t(y_odd, -2)?;
    let expected = y_odd.scaled(r - 1.0).add_scaled(sqrt_r, y_even);
    let intermediate_defect = cm2.add_scaled(-1.0, &expected).max_abs() / expected.max_abs();

    let line = |word: i64,
                start: Parity,
                coefficient: Option<f64>|
     -> Result<StandardLine, CoxeterError> {
        let (from, other) = match start {
            Parity::Odd => (y_odd, y_even),
            Parity::Even => (y_even, y_odd),
        };
        let defect = match coefficient {
            Some(k) => Some(
                sys.coxeter_t(from, word)?
                    .sine_to(&from.add_scaled(k, other)),
            ),
            None => None,
        };
        Ok(StandardLine {
            word,
            start,
            coefficient,
            defect,
        })
    };
    let finite = |n: u64| match &rho[n as usize] {
        ExtendedValue::Finite(v) => Some(*v),
        ExtendedValue::Infinite => None,
    };
    let over = |n: u64| finite(n).and_then(|p| (p != 0.0).then(|| sqrt_r / p));
    let under = |n: u64| finite(n).map(|p| p / sqrt_r);

    let mut rows = Vec::with_capacity(t_max as usize);
    for t in 1..=t_max {
        let ti = t as i64;
        rows.push(StandardCheckRow {
            t,
            lines: [
                line(2 * ti - 1, Parity::Even, over(2 * t - 1))?,
                line(2 * ti, Parity::Even, under(2 * t))?,
                line(-(2 * ti + 1), Parity::Odd, over(2 * t + 1))?,
                line(-2 * ti, Parity::Odd, under(2 * t))?,
            ],
        });
    }
    Ok(StandardCheckReport {
        r,
        rows,
        intermediate_defect,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootEnumeration {
    pub roots: Vec<GVector<i64>>,
    /// The closure finished with nothing discarded.
    pub exhaustive: bool,
    /// Some image exceeded the coordinate bound and was dropped.
    pub truncated: bool,
    /// The budget on stored roots ran out before the closure finished.
    pub budget_exhausted: bool,
}

/// Breadth-first closure of the simple roots under all reflections, keeping
/// vectors whose coordinates are bounded by `norm_bound` in absolute value
/// and storing at most `budget` roots. Roots come out sorted by height and
/// then lexicographically.
pub fn enumerate_real_roots(
    g: &Graph,
    norm_bound: u64,
    budget: usize,
) -> Result<RootEnumeration, CoxeterError> {
    let n = g.len();
    let bound = i64::try_from(norm_bound).unwrap_or(i64::MAX);
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    let (mut truncated, mut budget_exhausted) = (false, false);
    for v in 0..n {
        let root = GVector::<i64>::simple_root(n, v);
        if seen.len() >= budget {
            budget_exhausted = true;
            break;
        }
        if seen.insert(root.values().to_vec()) {
            queue.push_back(root);
        }
    }
    'outer: while let Some(x) = queue.pop_front() {
        for v in 0..n {
            let y = reflect(g, &x, v)?;
            if y.iter().any(|c| c.unsigned_abs() > bound as u64) {
                truncated = true;
                continue;
            }
            if seen.contains(y.values()) {
                continue;
            }
            if seen.len() >= budget {
                budget_exhausted = true;
                break 'outer;
            }
            seen.insert(y.values().to_vec());
            queue.push_back(y);
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort_by(|a, b| {
        a.iter()
            .sum::<i64>()
            .cmp(&b.iter().sum::<i64>())
            .then_with(|| a.cmp(b))
    });
    Ok(RootEnumeration {
        roots: roots.into_iter().map(GVector::from_values).collect(),
        exhaustive: !truncated && !budget_exhausted,
        truncated,
        budget_exhausted,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RootClassification {
    /// `d = c_t(simple root at vertex)`.
    SingularAt {
        t: i64,
        vertex: usize,
    },
    /// `c^period(d) = d` with the whole orbit nonnegative.
    RegularProven {
        period: u64,
    },
    UndeterminedWithin {
        t_max: u64,
    },
}

/// Default walk length: ten times the vertex count.
pub fn default_t_max(g: &Graph) -> u64 {
    10 * g.len() as u64
}

enum Walk {
    Exit { t: i64, vertex: usize },
    Periodic(u64),
    Open,
}

fn walk(
    sys: &CoxeterSystem<'_>,
    d: &GVector<i64>,
    sign: i64,
    t_max: u64,
) -> Result<Walk, CoxeterError> {
    let mut parity = if sign > 0 { Parity::Odd } else { Parity::Even };
    let mut x = d.clone();
    for step in 1..=t_max {
        let next = sys.partial(&x, parity)?;
        if !next.is_nonnegative() {
            let s = sign * (step as i64 - 1);
            return match x.simple_vertex() {
                Some(v) if sys.parity(v) == parity => Ok(Walk::Exit { t: s, vertex: v }),
                _ => Err(CoxeterError::NotARealRoot),
            };
        }
        if step % 2 == 0 && &next == d {
            return Ok(Walk::Periodic(step / 2));
        }
        x = next;
        parity = parity.flip();
    }
    Ok(Walk::Open)
}

/// Classifies a nonnegative integer vector by walking `c_t(d)` for
/// `|t| <= t_max` in both directions.
///
/// When the walk in one direction first leaves the nonnegative cone, the
/// vector just before must be a simple root `g` reached at signed step `s`;
/// then `d = c_T(g)` with `T = s` for odd `s` and `T = -s` for even `s`,
/// which always has `T >= 0` for even `g` and `T <= 0` for odd `g`. The
/// shortest word is returned, preferring `T >= 0` on ties, and is replayed
/// before returning.
pub fn classify_root(
    sys: &CoxeterSystem<'_>,
    d: &GVector<i64>,
    t_max: u64,
) -> Result<RootClassification, CoxeterError> {
    check_len(sys.graph(), d)?;
    if !d.is_nonnegative() {
        return Err(CoxeterError::InvalidVector(
            "coordinates must be nonnegative".into(),
        ));
    }
    if d.iter().all(|&c| c == 0) {
        return Err(CoxeterError::InvalidVector("vector must be nonzero".into()));
    }
    if let Some(v) = d.simple_vertex() {
        return Ok(RootClassification::SingularAt { t: 0, vertex: v });
    }
    let forward = walk(sys, d, 1, t_max)?;
    if let Walk::Periodic(period) = forward {
        return Ok(RootClassification::RegularProven { period });
    }
    let backward = walk(sys, d, -1, t_max)?;
    if let Walk::Periodic(period) = backward {
        return Ok(RootClassification::RegularProven { period });
    }
    let to_word = |s: i64| if s % 2 != 0 { s } else { -s };
    let mut candidates: Vec<(i64, usize)> = [forward, backward]
        .into_iter()
        .filter_map(|w| match w {
            Walk::Exit { t, vertex } => Some((to_word(t), vertex)),
            _ => None,
        })
        .collect();
    candidates.sort_by_key(|&(t, _)| (t.unsigned_abs(), t < 0));
    let Some(&(t, vertex)) = candidates.first() else {
        return Ok(RootClassification::UndeterminedWithin { t_max });
    };
    check_word_parity(sys, t, vertex)?;
    let replay = sys.coxeter_t(&GVector::simple_root(sys.len(), vertex), t)?;
    if &replay != d {
        return Err(CoxeterError::InternalConsistency(format!(
            "c_{t} of the simple root at {} does not reproduce the vector",
            sys.graph().label(vertex)
        )));
    }
    Ok(RootClassification::SingularAt { t, vertex })
}

/// Word lengths allowed from the simple root at `vertex`: `t >= 0` for even
/// vertices, `t <= 0` for odd ones.
fn check_word_parity(sys: &CoxeterSystem<'_>, t: i64, vertex: usize) -> Result<(), CoxeterError> {
    let parity = sys.parity(vertex);
    let ok = match parity {
        Parity::Even => t >= 0,
        Parity::Odd => t <= 0,
    };
    if ok {
        Ok(())
    } else {
        Err(CoxeterError::ParityViolation { t, vertex, parity })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StandardCharacter {
    pub t: i64,
    pub vertex: usize,
    /// Character of the simplest object at `vertex`: the standard vector of
    /// the opposite parity, zero at `vertex` and positive on its neighbours.
    pub seed: GVector<f64>,
    /// `c_{-t}(seed)`, scaled so the largest coordinate is 1.
    pub character: GVector<f64>,
}

/// The standard character attached to a singular root `d = c_t(g)`.
///
/// Dimensions move by `c_t` while characters move by the word with the
/// parities exchanged, so the simplest character at `g` is carried by
/// `c_{-t}`.
pub fn standard_character(
    sys: &CoxeterSystem<'_>,
    d: &GVector<i64>,
    spectral: &SpectralResult,
    t_max: u64,
) -> Result<StandardCharacter, CoxeterError> {
    if spectral.index < 2.0 - 1e-9 {
        return Err(CoxeterError::IndexBelowTwo(spectral.index));
    }
    let (t, vertex) = match classify_root(sys, d, t_max)? {
        RootClassification::SingularAt { t, vertex } => (t, vertex),
        other => return Err(CoxeterError::NotSingular(other)),
    };
    check_word_parity(sys, t, vertex)?;
    let std = standard_vectors(sys, spectral)?;
    let seed = std.of_parity(sys.parity(vertex).flip()).max_normalized();
    let g = sys.graph();
    if seed[vertex] != 0.0 || g.neighbors(vertex).iter().any(|&w| seed[w] <= 0.0) {
        return Err(CoxeterError::InternalConsistency(
            "seed violates the simplest-object condition".into(),
        ));
    }
    let character = sys.coxeter_t(&seed, -t)?.max_normalized();
    Ok(StandardCharacter {
        t,
        vertex,
        seed,
        character,
    })
}
