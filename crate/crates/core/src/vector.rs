//! Vertex-indexed vectors over a graph.

use std::fmt::Debug;
use std::ops::Index;

use num_traits::Zero;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::graph::Graph;
use crate::numeric::{json_f64, rational_to_string, Rational};

/// Ring operations used by reflections, with overflow surfaced for fixed-width
/// integers.
pub trait CoxScalar: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn checked_add(&self, other: &Self) -> Option<Self>;
    fn checked_neg(&self) -> Option<Self>;
    fn to_json(&self) -> Value;
}

impl CoxScalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        i64::checked_add(*self, *other)
    }
    fn checked_neg(&self) -> Option<Self> {
        i64::checked_neg(*self)
    }
    fn to_json(&self) -> Value {
        Value::from(*self)
    }
}

impl CoxScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn to_json(&self) -> Value {
        json_f64(*self)
    }
}

impl CoxScalar for Rational {
    fn zero() -> Self {
        <Rational as Zero>::zero()
    }
    fn one() -> Self {
        <Rational as num_traits::One>::one()
    }
    fn checked_add(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn checked_neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn to_json(&self) -> Value {
        match (
            self.is_integer(),
            num_traits::ToPrimitive::to_i64(self.numer()),
        ) {
            (true, Some(v)) => Value::from(v),
            _ => Value::from(rational_to_string(self)),
        }
    }
}

/// A G-vector: one scalar per vertex, in the host graph's vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct GVector<T> {
    values: Vec<T>,
}

impl<T> GVector<T> {
    pub fn from_values(values: Vec<T>) -> Self {
        GVector { values }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.values.iter()
    }

    pub(crate) fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }
}

impl<T: CoxScalar> GVector<T> {
    pub fn zeros(n: usize) -> Self {
        GVector {
            values: vec![T::zero(); n],
        }
    }

    /// The simple root at `vertex`.
    pub fn simple_root(n: usize, vertex: usize) -> Self {
        let mut v = Self::zeros(n);
        v.values[vertex] = T::one();
        v
    }

    /// `{"label": value, ...}` in vertex order. Integers stay integers,
    /// non-integral rationals become `"p/q"` strings.
    pub fn to_json(&self, graph: &Graph) -> Value {
        let mut map = Map::new();
        for (label, v) in graph.labels().iter().zip(&self.values) {
            map.insert(label.clone(), v.to_json());
        }
        Value::Object(map)
    }
}

impl<T> Index<usize> for GVector<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.values[i]
    }
}

impl GVector<i64> {
    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&x| x >= 0)
    }

    pub fn is_nonpositive(&self) -> bool {
        self.values.iter().all(|&x| x <= 0)
    }

    /// The vertex of a simple root, if this is one.
    pub fn simple_vertex(&self) -> Option<usize> {
        let mut found = None;
        for (i, &x) in self.values.iter().enumerate() {
            match x {
                0 => {}
                1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }

    pub fn to_f64(&self) -> GVector<f64> {
        GVector {
            values: self.values.iter().map(|&x| x as f64).collect(),
        }
    }
}

impl GVector<f64> {
    pub fn dot(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        GVector {
            values: self.values.iter().map(|x| x * s).collect(),
        }
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: f64, other: &Self) -> Self {
        GVector {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + s * b)
                .collect(),
        }
    }

    /// Scaled so the largest coordinate is 1; unchanged when that coordinate
    /// is not positive.
    pub fn max_normalized(&self) -> Self {
        let max = self
            .values
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        if max > 0.0 {
            self.scaled(max.recip())
        } else {
            self.clone()
        }
    }

    /// Sine of the angle between two nonzero vectors; 0 for proportional
    /// vectors. Computed from the projection residual, which keeps full
    /// precision for small angles.
    pub fn sine_to(&self, other: &Self) -> f64 {
        let (nu, nw) = (self.norm(), other.norm());
        if nu == 0.0 || nw == 0.0 {
            return if nu == nw { 0.0 } else { 1.0 };
        }
        let u = self.scaled(nu.recip());
        let w = other.scaled(nw.recip());
        let residual = u.add_scaled(-u.dot(&w), &w);
        residual.norm().min(1.0)
    }
}
