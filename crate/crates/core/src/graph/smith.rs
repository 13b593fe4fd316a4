//! Smith's classification of connected graphs by index, cross-checked by a
//! structural recognizer for the ADE shapes and their extensions.

use std::fmt;

use serde::Serialize;

use super::{index_and_principal, make_star, Graph, GraphError, PowerOptions};
use crate::rho::BranchVector;

pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SmithTag {
    Dynkin,
    ExtendedDynkin,
    Other,
}

impl fmt::Display for SmithTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SmithTag::Dynkin => "Dynkin",
            SmithTag::ExtendedDynkin => "ExtendedDynkin",
            SmithTag::Other => "Other",
        })
    }
}

/// Named Dynkin and extended Dynkin shapes. The number is the rank: `A(n)`
/// and `D(n)` have `n` vertices, the extended shapes have rank + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DynkinName {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
    ExtA(usize),
    ExtD(usize),
    ExtE6,
    ExtE7,
    ExtE8,
}

impl DynkinName {
    pub fn is_extended(self) -> bool {
        matches!(
            self,
            DynkinName::ExtA(_)
                | DynkinName::ExtD(_)
                | DynkinName::ExtE6
                | DynkinName::ExtE7
                | DynkinName::ExtE8
        )
    }

    pub fn tag(self) -> SmithTag {
        if self.is_extended() {
            SmithTag::ExtendedDynkin
        } else {
            SmithTag::Dynkin
        }
    }

    fn parts(self) -> (char, usize) {
        match self {
            DynkinName::A(n) | DynkinName::ExtA(n) => ('A', n),
            DynkinName::D(n) | DynkinName::ExtD(n) => ('D', n),
            DynkinName::E6 | DynkinName::ExtE6 => ('E', 6),
            DynkinName::E7 | DynkinName::ExtE7 => ('E', 7),
            DynkinName::E8 | DynkinName::ExtE8 => ('E', 8),
        }
    }

    /// Builds the named graph; `None` for ranks outside the family
    /// (`D(n)` needs `n >= 4`, `ExtA(n)` needs `n >= 2`, `ExtD(n)` needs `n >= 4`).
    pub fn graph(self) -> Option<Graph> {
        let star = |e: &[u64]| make_star(&BranchVector::new(e.to_vec()).expect("positive entries"));
        Some(match self {
            DynkinName::A(n) if n >= 1 => Graph::path(n),
            DynkinName::D(n) if n >= 4 => star(&[1, 1, n as u64 - 3]),
            DynkinName::E6 => star(&[1, 2, 2]),
            DynkinName::E7 => star(&[1, 2, 3]),
            DynkinName::E8 => star(&[1, 2, 4]),
            DynkinName::ExtA(n) if n >= 2 => Graph::cycle(n + 1),
            DynkinName::ExtD(4) => star(&[1, 1, 1, 1]),
            DynkinName::ExtD(n) if n >= 5 => {
                let m = n - 3;
                let mut edges: Vec<(usize, usize)> = (1..m).map(|i| (i - 1, i)).collect();
                edges.extend([(0, m), (0, m + 1), (m - 1, m + 2), (m - 1, m + 3)]);
                Graph::from_index_edges(n + 1, &edges).expect("valid extended D")
            }
            DynkinName::ExtE6 => star(&[2, 2, 2]),
            DynkinName::ExtE7 => star(&[1, 3, 3]),
            DynkinName::ExtE8 => star(&[1, 2, 5]),
            _ => return None,
        })
    }

    /// Every Dynkin and extended Dynkin graph with at most `max_vertices`
    /// vertices.
    pub fn catalog(max_vertices: usize) -> Vec<DynkinName> {
        let mut out = Vec::new();
        out.extend((1..=max_vertices).map(DynkinName::A));
        out.extend((4..=max_vertices).map(DynkinName::D));
        out.extend(
            [
                (6, DynkinName::E6),
                (7, DynkinName::E7),
                (8, DynkinName::E8),
            ]
            .into_iter()
            .filter(|&(n, _)| n <= max_vertices)
            .map(|(_, d)| d),
        );
        out.extend((2..max_vertices).map(DynkinName::ExtA));
        out.extend((4..max_vertices).map(DynkinName::ExtD));
        out.extend(
            [
                (7, DynkinName::ExtE6),
                (8, DynkinName::ExtE7),
                (9, DynkinName::ExtE8),
            ]
            .into_iter()
            .filter(|&(n, _)| n <= max_vertices)
            .map(|(_, d)| d),
        );
        out
    }

    /// Plain ASCII spelling: `E8`, `~E8`.
    pub fn ascii(self) -> String {
        let (letter, n) = self.parts();
        let tilde = if self.is_extended() { "~" } else { "" };
        format!("{tilde}{letter}{n}")
    }
}

impl fmt::Display for DynkinName {
    /// `E8`, or with a combining tilde for extended shapes: `Ẽ8`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (letter, n) = self.parts();
        if self.is_extended() {
            write!(f, "{letter}\u{303}{n}")
        } else {
            write!(f, "{letter}{n}")
        }
    }
}

impl Serialize for DynkinName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmithClass {
    pub tag: SmithTag,
    pub name: Option<DynkinName>,
    pub index: f64,
}

/// Lengths of the arms hanging off `center`, nondecreasing. Each arm must be a
/// simple path ending in a leaf.
fn arm_lengths(g: &Graph, center: usize) -> Option<Vec<usize>> {
    let mut arms = Vec::with_capacity(g.degree(center));
    for &first in g.neighbors(center) {
        let (mut prev, mut cur, mut len) = (center, first, 1);
        loop {
            match g.degree(cur) {
                1 => break,
                2 => {
                    let next = g.neighbors(cur).iter().copied().find(|&w| w != prev)?;
                    prev = cur;
                    cur = next;
                    len += 1;
                }
                _ => return None,
            }
        }
        arms.push(len);
    }
    arms.sort_unstable();
    Some(arms)
}

/// Matches a connected graph against the ADE catalogue: paths, cycles, trees
/// with one branching point of degree 3 or 4, and the two-branch-point
/// extended D shapes.
pub fn recognize_ade(g: &Graph) -> Option<DynkinName> {
    let n = g.len();
    if n == 0 || !g.is_connected() {
        return None;
    }
    if n >= 3 && g.edge_count() == n && (0..n).all(|v| g.degree(v) == 2) {
        return Some(DynkinName::ExtA(n - 1));
    }
    if !g.is_tree() {
        return None;
    }
    let branching: Vec<usize> = (0..n).filter(|&v| g.degree(v) >= 3).collect();
    match branching.as_slice() {
        [] => Some(DynkinName::A(n)),
        [c] => match (g.degree(*c), arm_lengths(g, *c)?.as_slice()) {
            (3, [1, 1, k]) => Some(DynkinName::D(k + 3)),
            (3, [1, 2, 2]) => Some(DynkinName::E6),
            (3, [1, 2, 3]) => Some(DynkinName::E7),
            (3, [1, 2, 4]) => Some(DynkinName::E8),
            (3, [2, 2, 2]) => Some(DynkinName::ExtE6),
            (3, [1, 3, 3]) => Some(DynkinName::ExtE7),
            (3, [1, 2, 5]) => Some(DynkinName::ExtE8),
            (4, [1, 1, 1, 1]) => Some(DynkinName::ExtD(4)),
            _ => None,
        },
        [a, b] => {
            let two_leaves = |v: usize| {
                g.degree(v) == 3
                    && g.neighbors(v).iter().filter(|&&w| g.degree(w) == 1).count() >= 2
            };
            (two_leaves(*a) && two_leaves(*b)).then_some(DynkinName::ExtD(n - 1))
        }
        _ => None,
    }
}

/// Tags a connected graph by its index with tolerance `tol` and names it
/// structurally. The two verdicts must agree.
pub fn smith_classify(g: &Graph, tol: f64) -> Result<SmithClass, GraphError> {
    if !g.is_connected() || g.is_empty() {
        return Err(GraphError::Disconnected);
    }
    let index = index_and_principal(g, PowerOptions::default())?.index;
    let tag = if (index - 2.0).abs() <= tol {
        SmithTag::ExtendedDynkin
    } else if index < 2.0 {
        SmithTag::Dynkin
    } else {
        SmithTag::Other
    };
    let name = recognize_ade(g);
    let structural = name.map_or(SmithTag::Other, DynkinName::tag);
    if structural != tag {
        return Err(GraphError::ClassifierDisagreement {
            index,
            tag,
            structure: name.map_or_else(|| "no ADE shape".to_string(), |n| n.to_string()),
        });
    }
    Ok(SmithClass { tag, name, index })
}
