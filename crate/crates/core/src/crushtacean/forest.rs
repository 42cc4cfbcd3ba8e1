use serde::{Deserialize, Serialize};

use super::graph::EmbeddedGraph;
use super::involution::{find_edge_involution, Orientation};
use super::GraphError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestTree {
    pub edges: Vec<usize>,
    /// The edge whose endpoints the tree's involution must exchange.
    pub middle: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningForest {
    pub trees: Vec<ForestTree>,
}

/// Checks that `f` is an edge-symmetric spanning forest of `g`.
///
/// Structural problems (unknown or repeated edges, cycles, disconnected
/// trees, trees sharing vertices, uncovered vertices) are errors. A
/// well-formed forest with a tree that has no involution exchanging the ends
/// of its middle edge gives `Ok(false)`. The involution may have either
/// orientation; it is taken with respect to the rotation system inherited
/// from `g`.
pub fn validate_forest(g: &EmbeddedGraph, f: &SpanningForest) -> Result<bool, GraphError> {
    let mut owner = vec![usize::MAX; g.vertex_count()];
    let mut edge_seen = vec![false; g.edge_count()];
    let mut subtrees = Vec::with_capacity(f.trees.len());
    for (t, tree) in f.trees.iter().enumerate() {
        for &e in &tree.edges {
            g.edge(e)?;
            if std::mem::replace(&mut edge_seen[e], true) {
                return Err(GraphError::Invalid(format!("edge {e} appears twice in the forest")));
            }
        }
        if !tree.edges.contains(&tree.middle) {
            return Err(GraphError::Invalid(format!(
                "middle edge {} of tree {t} is not one of its edges",
                tree.middle
            )));
        }
        let (sub, vmap) = g.induced_by_edges(&tree.edges)?;
        if sub.components().len() != 1 {
            return Err(GraphError::DisconnectedTree(t));
        }
        if sub.edge_count() + 1 != sub.vertex_count() {
            return Err(GraphError::Cyclic(t));
        }
        for &v in &vmap {
            if owner[v] != usize::MAX {
                return Err(GraphError::TreesOverlap(v));
            }
            owner[v] = t;
        }
        let local_middle = tree.edges.iter().position(|&e| e == tree.middle).expect("checked");
        subtrees.push((sub, local_middle));
    }
    let missing: Vec<usize> = (0..g.vertex_count()).filter(|&v| owner[v] == usize::MAX).collect();
    if !missing.is_empty() {
        return Err(GraphError::NotSpanning(missing));
    }
    for (sub, middle) in &subtrees {
        let mut ok = false;
        for o in Orientation::BOTH {
            if find_edge_involution(sub, *middle, o)?.is_some() {
                ok = true;
                break;
            }
        }
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::super::graph::{build_pretzel_crushtacean, Edge, EdgeColor};
    use super::*;

    fn tree(edges: &[usize], middle: usize) -> ForestTree {
        ForestTree {
            edges: edges.to_vec(),
            middle,
        }
    }

    /// Rung ids are `i`, outer rails `n + i`, inner rails `2n + i`.
    fn p5_forest() -> SpanningForest {
        SpanningForest {
            trees: vec![tree(&[0, 5, 10], 0), tree(&[2, 7, 12], 2), tree(&[4], 4)],
        }
    }

    #[test]
    fn p5_forest_is_edge_symmetric() {
        let g = build_pretzel_crushtacean(5).unwrap();
        assert!(validate_forest(&g, &p5_forest()).unwrap());
    }

    #[test]
    fn structural_errors_are_distinct() {
        let g = build_pretzel_crushtacean(5).unwrap();
        let mut partial = p5_forest();
        partial.trees.pop();
        assert_eq!(
            validate_forest(&g, &partial).unwrap_err(),
            GraphError::NotSpanning(vec![4, 9])
        );
        // the outer 5-cycle plus the spokes closes a cycle
        let cyclic = SpanningForest {
            trees: vec![tree(&[5, 6, 7, 8, 9, 0], 0)],
        };
        assert_eq!(validate_forest(&g, &cyclic).unwrap_err(), GraphError::Cyclic(0));
        let split = SpanningForest {
            trees: vec![tree(&[0, 2], 0)],
        };
        assert_eq!(validate_forest(&g, &split).unwrap_err(), GraphError::DisconnectedTree(0));
    }

    #[test]
    fn even_path_and_star() {
        // path 0-1-2-3 with middle edge 1-2
        let path = EmbeddedGraph::new(
            4,
            (0..3)
                .map(|i| Edge { ends: [i, i + 1], color: EdgeColor::Plain })
                .collect(),
            vec![vec![0], vec![0, 1], vec![1, 2], vec![2]],
        )
        .unwrap();
        let f = SpanningForest { trees: vec![tree(&[0, 1, 2], 1)] };
        assert!(validate_forest(&path, &f).unwrap());
        let off_center = SpanningForest { trees: vec![tree(&[0, 1, 2], 0)] };
        assert!(!validate_forest(&path, &off_center).unwrap());

        // star with centre 0 and a non-central middle edge
        let star = EmbeddedGraph::new(
            4,
            (1..4)
                .map(|i| Edge { ends: [0, i], color: EdgeColor::Plain })
                .collect(),
            vec![vec![0, 1, 2], vec![0], vec![1], vec![2]],
        )
        .unwrap();
        let f = SpanningForest { trees: vec![tree(&[0, 1, 2], 0)] };
        assert!(!validate_forest(&star, &f).unwrap());
    }
}
