//! Separating functions `rho_r`, their companion recurrences, and solvers for
//! `rho_r(n_1, ..., n_s) = r`.
//!
//! The primary definition iterates `rho_r(n + 1) = r / (r - rho_r(n))` from
//! `rho_r(0) = 0`. When a denominator vanishes exactly the value is
//! [`ExtendedValue::Infinite`], and the step after an infinite value is `0`.
//! Floating callers only hit the pole branch on exact floating equality, so
//! parameters merely close to a pole produce large finite values.

use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::numeric::{
    exact_sqrt, ge_multiple_of_band_left, ExtendedValue, Mode, Number, Rational, Scalar,
};

/// Largest index a [`RecurrenceSequence`] will cache.
pub const MAX_SEQUENCE_INDEX: u64 = 1 << 20;

/// Default largest entry explored by [`solve_rho_equation`].
pub const DEFAULT_SOLVER_N_MAX: u64 = 50;

/// Offset between the A-sequence index and the Coxeter iterate index:
/// `Phi^{+k}(alpha) = 1 + a_{k-1+OFFSET} / a_{k+OFFSET}` with the sequence
/// stored as `a_1 = 1`, `a_2 = r - 1 - alpha`. Calibrated against the
/// closed Moebius form in the test suite.
pub const A_SEQUENCE_PHI_OFFSET: u64 = 1;

// Absolute slack of the floating prefilter in the solver; exact arithmetic
// confirms every candidate that survives it.
const FILTER_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RhoError {
    #[error("parameter r = {0} must be at least 1")]
    ParameterBelowOne(String),
    #[error("closed form requires r > 4, got {0}")]
    ClosedFormDomain(f64),
    #[error("exact arithmetic exceeded capacity at index {0}")]
    Capacity(u64),
    #[error("sequence index {0} exceeds the cache limit")]
    IndexTooLarge(u64),
    #[error("invalid branch vector: {0}")]
    InvalidBranchVector(String),
    #[error("solver requires a rational r >= 4, got {0}")]
    SolverDomain(String),
    #[error("v-sequence requires r >= 0, got {0}")]
    NegativeParameter(String),
}

/// Unordered multiset of positive integers, stored nondecreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct BranchVector(Vec<u64>);

impl BranchVector {
    pub fn new(mut entries: Vec<u64>) -> Result<Self, RhoError> {
        if entries.is_empty() {
            return Err(RhoError::InvalidBranchVector("no entries".into()));
        }
        if entries.contains(&0) {
            return Err(RhoError::InvalidBranchVector(
                "entries must be positive".into(),
            ));
        }
        entries.sort_unstable();
        Ok(BranchVector(entries))
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertex_count(&self) -> u64 {
        1 + self.0.iter().sum::<u64>()
    }
}

impl fmt::Display for BranchVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for BranchVector {
    type Err = RhoError;

    /// Accepts `1,2,5` with optional surrounding parentheses.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let entries = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| RhoError::InvalidBranchVector(format!("bad entry {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        BranchVector::new(entries)
    }
}

/// All canonical branch vectors with `1 <= len <= s_max` and entries in
/// `1..=n_max`, in lexicographic order of (length, entries).
pub fn canonical_branch_vectors(s_max: usize, n_max: u64) -> Vec<BranchVector> {
    fn extend(prefix: &mut Vec<u64>, len: usize, lo: u64, n_max: u64, out: &mut Vec<BranchVector>) {
        if prefix.len() == len {
            out.push(BranchVector(prefix.clone()));
            return;
        }
        for n in lo..=n_max {
            prefix.push(n);
            extend(prefix, len, n, n_max, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for len in 1..=s_max {
        extend(&mut Vec::with_capacity(len), len, 1, n_max, &mut out);
    }
    out
}

fn ensure_at_least_one<T: Scalar>(r: &T) -> Result<(), RhoError> {
    // NaN fails this comparison as well
    if *r >= T::one() {
        Ok(())
    } else {
        Err(RhoError::ParameterBelowOne(r.to_string()))
    }
}

fn rho_step<T: Scalar>(r: &T, prev: &ExtendedValue<T>) -> ExtendedValue<T> {
    match prev {
        ExtendedValue::Infinite => ExtendedValue::Finite(T::zero()),
        ExtendedValue::Finite(p) => {
            let denom = r.clone() - p.clone();
            if denom.is_zero() {
                ExtendedValue::Infinite
            } else {
                ExtendedValue::Finite(r.clone() / denom)
            }
        }
    }
}

/// Values `rho_r(0), ..., rho_r(n_max)` for any `r > 0`, without the `r >= 1`
/// domain check.
pub(crate) fn rho_table_unchecked<T: Scalar>(
    r: &T,
    n_max: u64,
) -> Result<Vec<ExtendedValue<T>>, RhoError> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut cur = ExtendedValue::Finite(T::zero());
    out.push(cur.clone());
    for n in 1..=n_max {
        cur = rho_step(r, &cur);
        if let ExtendedValue::Finite(v) = &cur {
            if !v.within_capacity() {
                return Err(RhoError::Capacity(n));
            }
        }
        out.push(cur.clone());
    }
    Ok(out)
}

pub(crate) fn rho_unchecked<T: Scalar>(r: &T, n: u64) -> Result<ExtendedValue<T>, RhoError> {
    let mut cur = ExtendedValue::Finite(T::zero());
    for k in 1..=n {
        cur = rho_step(r, &cur);
        if let ExtendedValue::Finite(v) = &cur {
            if !v.within_capacity() {
                return Err(RhoError::Capacity(k));
            }
        }
    }
    Ok(cur)
}

/// `rho_r(n)` by the Moebius recurrence, for `r >= 1`.
///
/// With `T = Rational` poles are decided exactly; with `T = f64` only exact
/// floating equality `rho_r(k) == r` yields [`ExtendedValue::Infinite`].
pub fn rho<T: Scalar>(r: &T, n: u64) -> Result<ExtendedValue<T>, RhoError> {
    ensure_at_least_one(r)?;
    rho_unchecked(r, n)
}

/// The table `rho_r(0..=n_max)` computed in one pass.
pub fn rho_table<T: Scalar>(r: &T, n_max: u64) -> Result<Vec<ExtendedValue<T>>, RhoError> {
    ensure_at_least_one(r)?;
    rho_table_unchecked(r, n_max)
}

/// `rho_r(n)` for a rational parameter evaluated either exactly or in `f64`.
pub fn rho_with_mode(r: &Rational, n: u64, mode: Mode) -> Result<ExtendedValue<Number>, RhoError> {
    match mode {
        Mode::Exact => Ok(rho(r, n)?.map(Number::Exact)),
        Mode::Floating => Ok(rho(&r.as_f64(), n)?.map(Number::Float)),
    }
}

/// `(lambda + 1)(lambda^n - 1) / (lambda^{n+1} - 1)` with
/// `lambda = (r - 2 + sqrt(r^2 - 4r)) / 2`, valid for `r > 4`.
pub fn rho_closed_form(r: f64, n: u64) -> Result<f64, RhoError> {
    if r.is_nan() || r <= 4.0 {
        return Err(RhoError::ClosedFormDomain(r));
    }
    let lambda = (r - 2.0 + (r * r - 4.0 * r).sqrt()) / 2.0;
    // divided through by lambda^{n+1} so large n stays finite
    let inv = lambda.recip();
    let tail = inv.powf(n as f64 + 1.0);
    Ok((lambda + 1.0) * (inv - tail) / (1.0 - tail))
}

/// `sup_n rho_r(n) = (r - sqrt(r^2 - 4r)) / 2` for `r >= 4`, the left band
/// endpoint.
pub fn rho_limit(r: f64) -> f64 {
    (r - (r * r - 4.0 * r).max(0.0).sqrt()) / 2.0
}

/// `rho_r(v) = sum_i rho_r(n_i)`; infinite as soon as one summand is.
pub fn rho_vector<T: Scalar>(r: &T, v: &BranchVector) -> Result<ExtendedValue<T>, RhoError> {
    ensure_at_least_one(r)?;
    rho_vector_unchecked(r, v)
}

pub(crate) fn rho_vector_unchecked<T: Scalar>(
    r: &T,
    v: &BranchVector,
) -> Result<ExtendedValue<T>, RhoError> {
    let max = *v.entries().last().expect("branch vectors are nonempty");
    let table = rho_table_unchecked(r, max)?;
    let mut sum = T::zero();
    for &n in v.entries() {
        match &table[n as usize] {
            ExtendedValue::Infinite => return Ok(ExtendedValue::Infinite),
            ExtendedValue::Finite(x) => sum = sum + x.clone(),
        }
    }
    Ok(ExtendedValue::Finite(sum))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SequenceKind {
    /// `u_0 = 0, u_1 = 1, u_{i+2} = (r - 2) u_{i+1} - u_i`
    U,
    /// `v_0 = 0, v_1 = 1, v_{n+2} = sqrt(r) v_{n+1} - v_n`
    V,
    /// `a_1 = 1, a_2 = r - 1 - alpha, a_{k+2} = (r - 2) a_{k+1} - a_k`;
    /// index 0 holds `alpha - 1`, the backward continuation.
    A,
}

/// A second-order linear recurrence `x_{i+2} = c x_{i+1} - x_i` with a
/// lazily extended, lock-protected cache of terms.
#[derive(Debug)]
pub struct RecurrenceSequence<T> {
    kind: SequenceKind,
    coefficient: T,
    cache: RwLock<Vec<T>>,
}

impl<T: Scalar> RecurrenceSequence<T> {
    fn with_start(kind: SequenceKind, coefficient: T, x0: T, x1: T) -> Self {
        RecurrenceSequence {
            kind,
            coefficient,
            cache: RwLock::new(vec![x0, x1]),
        }
    }

    pub fn u(r: T) -> Result<Self, RhoError> {
        ensure_at_least_one(&r)?;
        let two = T::from_count(2);
        Ok(Self::with_start(
            SequenceKind::U,
            r - two,
            T::zero(),
            T::one(),
        ))
    }

    pub fn a(r: T, alpha: T) -> Result<Self, RhoError> {
        ensure_at_least_one(&r)?;
        let two = T::from_count(2);
        Ok(Self::with_start(
            SequenceKind::A,
            r - two,
            alpha - T::one(),
            T::one(),
        ))
    }

    /// The v-sequence from a precomputed `sqrt(r)`.
    pub fn v_from_root(sqrt_r: T) -> Self {
        Self::with_start(SequenceKind::V, sqrt_r, T::zero(), T::one())
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    pub fn term(&self, index: u64) -> Result<T, RhoError> {
        if index > MAX_SEQUENCE_INDEX {
            return Err(RhoError::IndexTooLarge(index));
        }
        let i = index as usize;
        {
            let cache = self.cache.read().expect("sequence cache poisoned");
            if let Some(v) = cache.get(i) {
                return Ok(v.clone());
            }
        }
        let mut cache = self.cache.write().expect("sequence cache poisoned");
        while cache.len() <= i {
            let n = cache.len();
            let next = self.coefficient.clone() * cache[n - 1].clone() - cache[n - 2].clone();
            if !next.within_capacity() {
                return Err(RhoError::Capacity(n as u64));
            }
            cache.push(next);
        }
        Ok(cache[i].clone())
    }
}

impl RecurrenceSequence<f64> {
    pub fn v(r: f64) -> Result<Self, RhoError> {
        if r.is_nan() || r < 0.0 {
            return Err(RhoError::NegativeParameter(r.to_string()));
        }
        Ok(Self::v_from_root(r.sqrt()))
    }
}

impl RecurrenceSequence<Rational> {
    /// The v-sequence in exact arithmetic, available when `r` is the square
    /// of a rational.
    pub fn v_exact(r: &Rational) -> Option<Self> {
        exact_sqrt(r).map(Self::v_from_root)
    }
}

/// Result of [`solve_rho_equation`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhoSolutions {
    #[serde(serialize_with = "crate::numeric::serialize_rational")]
    pub r: Rational,
    pub s_max: usize,
    pub n_max: u64,
    /// Sorted by length, then lexicographically.
    pub solutions: Vec<BranchVector>,
    /// `true` when no solution of any length or entry size lies outside the
    /// searched box.
    pub exhaustive: bool,
}

/// Default bounds: `s_max = floor(r) + 1`, `n_max = 50`.
pub fn default_solver_bounds(r: &Rational) -> (usize, u64) {
    let floor = r.floor().to_integer();
    let s = num_traits::ToPrimitive::to_usize(&floor).unwrap_or(0);
    (s + 1, DEFAULT_SOLVER_N_MAX)
}

struct SolverTables {
    exact: Vec<Rational>,
    float: Vec<f64>,
    target: f64,
    limit: f64,
}

/// All canonical `v` with `len <= s_max`, entries `<= n_max` and
/// `rho_r(v) = r` exactly, for rational `r >= 4`.
///
/// The depth-first search prunes with an `f64` copy of the table (slack
/// `1e-9`) and confirms every surviving candidate exactly. The exhaustive
/// flag certifies, via `rho_r(n) < (r - sqrt(r^2 - 4r)) / 2`, that no vector
/// with an entry beyond `n_max` solves the equation, and that `s_max` is at
/// least `floor(r)` (every summand is at least 1).
pub fn solve_rho_equation(
    r: &Rational,
    s_max: usize,
    n_max: u64,
) -> Result<RhoSolutions, RhoError> {
    let four = Rational::from_integer(BigInt::from(4));
    if *r < four {
        return Err(RhoError::SolverDomain(crate::numeric::rational_to_string(
            r,
        )));
    }
    let table = rho_table(r, n_max + 1)?;
    let exact: Vec<Rational> = table
        .into_iter()
        .map(|v| v.into_finite().expect("rho_r has no poles for r >= 4"))
        .collect();
    let float: Vec<f64> = exact.iter().map(Scalar::as_f64).collect();
    let target = r.as_f64();
    let tables = SolverTables {
        exact,
        float,
        target,
        limit: rho_limit(target),
    };

    let mut solutions = Vec::new();
    let mut stack = Vec::with_capacity(s_max);
    if s_max > 0 && n_max > 0 {
        search_solutions(&tables, r, s_max, n_max, 1, 0.0, &mut stack, &mut solutions);
    }
    solutions.sort_by(|a: &BranchVector, b| (a.len(), a.entries()).cmp(&(b.len(), b.entries())));

    let length_complete = r.floor() <= Rational::from_integer(BigInt::from(s_max as u64));
    let exhaustive = length_complete && tail_is_excluded(&tables, r, s_max, n_max);
    Ok(RhoSolutions {
        r: r.clone(),
        s_max,
        n_max,
        solutions,
        exhaustive,
    })
}

#[allow(clippy::too_many_arguments)]
fn search_solutions(
    t: &SolverTables,
    r: &Rational,
    s_max: usize,
    n_max: u64,
    start: u64,
    sum: f64,
    stack: &mut Vec<u64>,
    out: &mut Vec<BranchVector>,
) {
    for n in start..=n_max {
        let s = sum + t.float[n as usize];
        if s > t.target + FILTER_MARGIN {
            break;
        }
        stack.push(n);
        if (s - t.target).abs() <= FILTER_MARGIN {
            let exact: Rational = stack.iter().map(|&k| t.exact[k as usize].clone()).sum();
            if exact == *r {
                out.push(BranchVector(stack.clone()));
            }
        }
        // each further summand adds at least 1, so only descend from strictly below
        let slots = s_max - stack.len();
        if slots > 0
            && s + 1.0 <= t.target + FILTER_MARGIN
            && s + slots as f64 * t.limit + FILTER_MARGIN >= t.target
        {
            search_solutions(t, r, s_max, n_max, n, s, stack, out);
        }
        stack.pop();
    }
}

/// Checks that every split of a would-be solution into a part with entries
/// `<= n_max` (sum `S`) and `j >= 1` larger entries is impossible: the large
/// part contributes to `[j rho(n_max + 1), j L)` with `L` the supremum.
fn tail_is_excluded(t: &SolverTables, r: &Rational, s_max: usize, n_max: u64) -> bool {
    fn excluded(
        t: &SolverTables,
        r: &Rational,
        stack: &[u64],
        sum: f64,
        s_max: usize,
        n_max: u64,
    ) -> bool {
        let low_unit = t.float[n_max as usize + 1];
        let q = t.target - sum;
        for j in 1..=(s_max - stack.len()) as u64 {
            let low = j as f64 * low_unit;
            let high = j as f64 * t.limit;
            if q < low - FILTER_MARGIN || q > high + FILTER_MARGIN {
                continue;
            }
            if q > low + FILTER_MARGIN && q < high - FILTER_MARGIN {
                return false;
            }
            let exact_sum: Rational = stack.iter().map(|&k| t.exact[k as usize].clone()).sum();
            let q_exact = r - exact_sum;
            let j_q = Rational::from_integer(BigInt::from(j));
            let below = q_exact < j_q * &t.exact[n_max as usize + 1];
            if !below && !ge_multiple_of_band_left(&q_exact, j, r) {
                return false;
            }
        }
        true
    }

    fn walk(
        t: &SolverTables,
        r: &Rational,
        s_max: usize,
        n_max: u64,
        start: u64,
        sum: f64,
        stack: &mut Vec<u64>,
    ) -> bool {
        if !excluded(t, r, stack, sum, s_max, n_max) {
            return false;
        }
        if stack.len() + 1 >= s_max {
            return true;
        }
        let low_unit = t.float[n_max as usize + 1];
        for n in start..=n_max {
            let s = sum + t.float[n as usize];
            // past this point every j is ruled out by the lower bound
            if t.target - s < low_unit - FILTER_MARGIN {
                break;
            }
            stack.push(n);
            let ok = walk(t, r, s_max, n_max, n, s, stack);
            stack.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    if s_max == 0 {
        return true;
    }
    walk(t, r, s_max, n_max, 1, 0.0, &mut Vec::with_capacity(s_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BranchTag {
    Dynkin,
    ExtendedDynkin,
    Hyperbolic,
}

impl fmt::Display for BranchTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BranchTag::Dynkin => "Dynkin",
            BranchTag::ExtendedDynkin => "ExtendedDynkin",
            BranchTag::Hyperbolic => "Hyperbolic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchClass {
    pub tag: BranchTag,
    #[serde(serialize_with = "crate::numeric::serialize_rational")]
    pub rho4: Rational,
}

/// Compares the exact `rho_4(v)` against 4.
pub fn classify_branch_vector(v: &BranchVector) -> BranchClass {
    let four = Rational::from_integer(BigInt::from(4));
    // rho_4(n) = 1 + (n - 1)/(n + 1) = 2n/(n + 1), never a pole
    let rho4: Rational = v
        .entries()
        .iter()
        .map(|&n| Rational::new(BigInt::from(2 * n), BigInt::from(n + 1)))
        .sum();
    let tag = match rho4.cmp(&four) {
        std::cmp::Ordering::Less => BranchTag::Dynkin,
        std::cmp::Ordering::Equal => BranchTag::ExtendedDynkin,
        std::cmp::Ordering::Greater => BranchTag::Hyperbolic,
    };
    BranchClass { tag, rho4 }
}

/// `rho_r(n)` through the u-sequence, `1 + u_{n-1} / (u_n + 1)`, for `n >= 1`.
pub fn rho_via_u<T: Scalar>(r: &T, n: u64) -> Result<T, RhoError> {
    let u = RecurrenceSequence::u(r.clone())?;
    if n == 0 {
        return Ok(T::zero());
    }
    Ok(T::one() + u.term(n - 1)? / (u.term(n)? + T::one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64) -> Rational {
        q(n, 1)
    }

    fn bv(e: &[u64]) -> BranchVector {
        BranchVector::new(e.to_vec()).unwrap()
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(&int(4), 3).unwrap(), ExtendedValue::Finite(q(3, 2)));
        assert_eq!(rho(&int(7), 0).unwrap(), ExtendedValue::Finite(int(0)));
        assert_eq!(rho(&int(2), 3).unwrap(), ExtendedValue::Infinite);
        assert_eq!(rho(&int(2), 4).unwrap(), ExtendedValue::Finite(int(0)));
        assert_eq!(rho(&int(5), 4).unwrap(), ExtendedValue::Finite(q(15, 11)));
    }

    #[test]
    fn rho_pole_sequence_by_hand() {
        let t = rho_table(&int(2), 8).unwrap();
        let expect = [
            Some(0),
            Some(1),
            Some(2),
            None,
            Some(0),
            Some(1),
            Some(2),
            None,
            Some(0),
        ];
        for (got, want) in t.iter().zip(expect) {
            match want {
                Some(w) => assert_eq!(got, &ExtendedValue::Finite(int(w))),
                None => assert!(got.is_infinite()),
            }
        }
    }

    #[test]
    fn floating_pole_only_on_exact_equality() {
        assert_eq!(rho(&2.0_f64, 3).unwrap(), ExtendedValue::Infinite);
        let near = rho(&(2.0_f64 + 1e-12), 3).unwrap();
        assert!(near.finite().unwrap().abs() > 1e10);
    }

    #[test]
    fn rho_rejects_small_r() {
        assert!(matches!(
            rho(&q(1, 2), 3),
            Err(RhoError::ParameterBelowOne(_))
        ));
        assert!(matches!(
            rho(&f64::NAN, 3),
            Err(RhoError::ParameterBelowOne(_))
        ));
    }

    #[test]
    fn exact_mode_reports_capacity() {
        let huge = Rational::new(num_traits::pow(BigInt::from(2), 65_540), BigInt::from(3));
        assert!(matches!(rho(&huge, 3), Err(RhoError::Capacity(2))));
    }

    #[test]
    fn closed_form_examples() {
        assert!((rho_closed_form(5.0, 2).unwrap() - 1.25).abs() < 1e-12);
        assert!((rho_closed_form(5.0, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!((rho_closed_form(6.0, 3).unwrap() - 1.25).abs() < 1e-12);
        assert!(rho_closed_form(4.0, 3).is_err());
        assert!(rho_closed_form(3.0, 3).is_err());
        // large n stays at the limit instead of overflowing
        let far = rho_closed_form(10.0, 5000).unwrap();
        assert!((far - rho_limit(10.0)).abs() < 1e-12);
    }

    #[test]
    fn rho_vector_examples() {
        assert_eq!(
            rho_vector(&int(4), &bv(&[1, 2, 5])).unwrap(),
            ExtendedValue::Finite(int(4))
        );
        assert_eq!(
            rho_vector(&int(4), &bv(&[1, 1, 1, 1])).unwrap(),
            ExtendedValue::Finite(int(4))
        );
        assert_eq!(
            rho_vector(&int(4), &bv(&[1, 2, 6])).unwrap(),
            ExtendedValue::Finite(q(85, 21))
        );
        assert_eq!(
            rho_vector(&int(2), &bv(&[1, 3])).unwrap(),
            ExtendedValue::Infinite
        );
    }

    #[test]
    fn sequence_examples() {
        let u = RecurrenceSequence::u(int(5)).unwrap();
        assert_eq!(u.term(4).unwrap(), int(21));
        let v = RecurrenceSequence::v(4.0).unwrap();
        for n in 0..=10 {
            assert_eq!(v.term(n).unwrap(), n as f64);
        }
        let v = RecurrenceSequence::v_exact(&int(4)).unwrap();
        assert_eq!(v.term(10).unwrap(), int(10));
        assert!(RecurrenceSequence::v_exact(&int(5)).is_none());
        let a = RecurrenceSequence::a(int(4), int(0)).unwrap();
        assert_eq!(a.term(1).unwrap(), int(1));
        assert_eq!(a.term(2).unwrap(), int(3));
        assert_eq!(a.kind(), SequenceKind::A);
        assert!(RecurrenceSequence::v(-1.0).is_err());
        assert!(matches!(
            u.term(MAX_SEQUENCE_INDEX + 1),
            Err(RhoError::IndexTooLarge(_))
        ));
    }

    #[test]
    fn a_sequence_matches_u_form() {
        // a_k = u_k + (1 - alpha) u_{k-1} in the stored indexing
        let (r, alpha) = (int(6), q(1, 2));
        let u = RecurrenceSequence::u(r.clone()).unwrap();
        let a = RecurrenceSequence::a(r, alpha.clone()).unwrap();
        for k in 1..12 {
            let expect = u.term(k).unwrap() + (int(1) - &alpha) * u.term(k - 1).unwrap();
            assert_eq!(a.term(k).unwrap(), expect);
        }
    }

    #[test]
    fn sequence_cache_is_shared_across_threads() {
        let u = std::sync::Arc::new(RecurrenceSequence::u(int(4)).unwrap());
        let handles: Vec<_> = (0..4)
            .map(|i| {
                let u = u.clone();
                std::thread::spawn(move || u.term(50 + i).unwrap())
            })
            .collect();
        for (i, h) in handles.into_iter().enumerate() {
            assert_eq!(h.join().unwrap(), int(50 + i as i64));
        }
    }

    #[test]
    fn rho_one_is_one() {
        for r in [1.0, 1.5, 2.0, 3.7, 4.0, 9.0] {
            assert_eq!(rho(&r, 1).unwrap(), ExtendedValue::Finite(1.0));
        }
    }

    #[test]
    fn u_form_agrees_with_recurrence() {
        for r in [4, 5, 6, 9] {
            for n in 1..20 {
                let a = rho(&int(r), n).unwrap().into_finite().unwrap();
                assert_eq!(rho_via_u(&int(r), n).unwrap(), a, "r={r} n={n}");
            }
        }
    }

    #[test]
    fn solver_on_four() {
        let sol = solve_rho_equation(&int(4), 6, 12).unwrap();
        let got: Vec<_> = sol.solutions.iter().map(|v| v.entries().to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![1, 2, 5],
                vec![1, 3, 3],
                vec![2, 2, 2],
                vec![1, 1, 1, 1]
            ]
        );
        assert!(sol.exhaustive);
    }

    #[test]
    fn solver_non_integer_rational_has_no_solutions() {
        let sol = solve_rho_equation(&q(9, 2), 5, 50).unwrap();
        assert!(sol.solutions.is_empty());
        assert!(sol.exhaustive);
    }

    #[test]
    fn solver_short_bounds_are_not_exhaustive() {
        // (1,2,5) needs n_max >= 5; with n_max = 3 the tail cannot be excluded
        let sol = solve_rho_equation(&int(4), 5, 3).unwrap();
        assert_eq!(sol.solutions.len(), 3);
        assert!(!sol.exhaustive);
        // s_max below floor(r) cannot be exhaustive either
        let sol = solve_rho_equation(&int(4), 3, 12).unwrap();
        assert!(!sol.exhaustive);
    }

    #[test]
    fn solver_rejects_small_r() {
        assert!(matches!(
            solve_rho_equation(&int(3), 4, 10),
            Err(RhoError::SolverDomain(_))
        ));
    }

    #[test]
    fn default_bounds() {
        assert_eq!(default_solver_bounds(&int(5)), (6, 50));
        assert_eq!(default_solver_bounds(&q(9, 2)), (5, 50));
    }

    #[test]
    fn classify_examples() {
        let c = classify_branch_vector(&bv(&[1, 2, 4]));
        assert_eq!(c.tag, BranchTag::Dynkin);
        assert_eq!(c.rho4, q(59, 15));
        assert_eq!(
            classify_branch_vector(&bv(&[2, 2, 2])).tag,
            BranchTag::ExtendedDynkin
        );
        let c = classify_branch_vector(&bv(&[1, 2, 6]));
        assert_eq!(c.tag, BranchTag::Hyperbolic);
        assert_eq!(c.rho4, q(85, 21));
    }

    #[test]
    fn branch_vector_parsing() {
        assert_eq!("5,1,2".parse::<BranchVector>().unwrap(), bv(&[1, 2, 5]));
        assert_eq!(
            "(1,2,5)".parse::<BranchVector>().unwrap().to_string(),
            "(1,2,5)"
        );
        assert!("1,0".parse::<BranchVector>().is_err());
        assert!("".parse::<BranchVector>().is_err());
        assert!("1,x".parse::<BranchVector>().is_err());
        assert_eq!(bv(&[1, 2, 5]).vertex_count(), 9);
    }

    #[test]
    fn canonical_sweep_size() {
        assert_eq!(canonical_branch_vectors(5, 6).len(), 461);
        assert_eq!(canonical_branch_vectors(2, 3).len(), 3 + 6);
    }

    #[test]
    fn with_mode_dispatch() {
        let exact = rho_with_mode(&int(4), 3, Mode::Exact).unwrap();
        assert_eq!(exact, ExtendedValue::Finite(Number::Exact(q(3, 2))));
        let float = rho_with_mode(&int(4), 3, Mode::Floating).unwrap();
        assert!((float.into_finite().unwrap().to_f64() - 1.5).abs() < 1e-15);
    }
}
