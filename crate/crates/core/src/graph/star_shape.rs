//! Star-shaped trees: construction from a branch vector and decomposition
//! back into branch sizes.

use super::{Graph, GraphError};
use crate::rho::BranchVector;

pub const CENTER_LABEL: &str = "c";

fn branch_label(branch: usize, position: u64) -> String {
    format!("b{branch}_{position}")
}

/// The star with centre [`CENTER_LABEL`] and one chain per entry. Branch `k`
/// (1-based) has vertices `bk_1 .. bk_n` with `bk_1` the leaf; vertices are
/// listed centre first and then each branch from the centre outwards.
pub fn make_star(v: &BranchVector) -> Graph {
    let mut labels = vec![CENTER_LABEL.to_string()];
    let mut edges = Vec::new();
    for (k, &n) in v.entries().iter().enumerate() {
        let k = k + 1;
        let mut prev = CENTER_LABEL.to_string();
        for i in (1..=n).rev() {
            let label = branch_label(k, i);
            labels.push(label.clone());
            edges.push((prev, label.clone()));
            prev = label;
        }
    }
    Graph::from_edges(&labels, &edges).expect("star construction is well formed")
}

/// Branch sizes of a tree with at most one vertex of degree three or more.
/// A path on `n` vertices yields `(n)`.
pub fn star_branches(g: &Graph) -> Result<BranchVector, GraphError> {
    if g.is_empty() {
        return Err(GraphError::TooSmall(1));
    }
    if !g.is_tree() {
        return Err(GraphError::NotStarShaped("graph is not a tree".to_string()));
    }
    let branching: Vec<usize> = (0..g.len()).filter(|&v| g.degree(v) >= 3).collect();
    let sizes = match branching.as_slice() {
        [] => vec![g.len() as u64],
        &[center] => g
            .neighbors(center)
            .iter()
            .map(|&first| {
                let (mut prev, mut cur, mut len) = (center, first, 1u64);
                while let Some(&next) = g.neighbors(cur).iter().find(|&&w| w != prev) {
                    prev = cur;
                    cur = next;
                    len += 1;
                }
                len
            })
            .collect(),
        many => {
            let names: Vec<&str> = many.iter().map(|&v| g.label(v)).collect();
            return Err(GraphError::NotStarShaped(format!(
                "several branching points: {}",
                names.join(", ")
            )));
        }
    };
    Ok(BranchVector::new(sizes).expect("branch sizes are positive"))
}
