//! Color-preserving automorphisms of embedded graphs.
//!
//! A map automorphism is a dart permutation `σ` commuting with `alpha` and
//! either commuting with `next` (orientation preserving, "rotational") or
//! sending `next` to `prev` (orientation reversing, "reflective"). On a
//! connected component it is fixed by the image of one dart, so the search
//! only branches over root images, one component at a time.

use serde::{Deserialize, Serialize};

use super::graph::{EdgeColor, EmbeddedGraph};
use super::GraphError;

const UNSET: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Rotational: respects the cyclic order at every vertex.
    Preserving,
    /// Reflective: reverses the cyclic order at every vertex.
    Reversing,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::Preserving, Orientation::Reversing];
}

/// A color- and rotation-respecting automorphism, given on darts and on
/// vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphAutomorphism {
    pub orientation: Orientation,
    pub vertex_perm: Vec<usize>,
    pub dart_perm: Vec<usize>,
}

impl GraphAutomorphism {
    pub fn is_involution(&self) -> bool {
        self.dart_perm
            .iter()
            .enumerate()
            .all(|(d, &s)| self.dart_perm[s] == d)
    }
}

/// Witness type returned by the involution search.
pub type GraphInvolution = GraphAutomorphism;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvolutionReport {
    pub edge: usize,
    pub has_reflective: bool,
    pub has_rotational: bool,
    pub reflective: Option<GraphInvolution>,
    pub rotational: Option<GraphInvolution>,
}

struct Search<'a> {
    g: &'a EmbeddedGraph,
    reversing: bool,
    involution: bool,
    comp_darts: Vec<Vec<usize>>,
    comp_of_dart: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(g: &'a EmbeddedGraph, orientation: Orientation, involution: bool) -> Self {
        let comps = g.components();
        let mut comp_of_vertex = vec![0; g.vertex_count()];
        for (c, vs) in comps.iter().enumerate() {
            for &v in vs {
                comp_of_vertex[v] = c;
            }
        }
        let mut comp_darts = vec![Vec::new(); comps.len()];
        let mut comp_of_dart = vec![0; g.dart_count()];
        for d in 0..g.dart_count() {
            let c = comp_of_vertex[g.dart_vertex(d)];
            comp_darts[c].push(d);
            comp_of_dart[d] = c;
        }
        Self {
            g,
            reversing: orientation == Orientation::Reversing,
            involution,
            comp_darts,
            comp_of_dart,
        }
    }

    /// Propagates `root ↦ target` over the component of `root`. Returns the
    /// assignments, or `None` on any clash with the rules or with images
    /// already taken.
    fn propagate(&self, root: usize, target: usize, used: &[bool]) -> Option<Vec<(usize, usize)>> {
        let g = self.g;
        let mut local = vec![UNSET; g.dart_count()];
        let mut hit = vec![false; g.dart_count()];
        let mut stack = vec![(root, target)];
        let mut pairs = Vec::new();
        local[root] = target;
        while let Some((d, t)) = stack.pop() {
            if g.dart_color(d) != g.dart_color(t) || used[t] || hit[t] {
                return None;
            }
            hit[t] = true;
            pairs.push((d, t));
            let t_next = if self.reversing { g.prev(t) } else { g.next(t) };
            for (d2, t2) in [(g.alpha(d), g.alpha(t)), (g.next(d), t_next)] {
                if local[d2] == UNSET {
                    local[d2] = t2;
                    stack.push((d2, t2));
                } else if local[d2] != t2 {
                    return None;
                }
            }
        }
        Some(pairs)
    }

    /// Tries `root ↦ target`, writing into `map`/`used`. Returns the list of
    /// darts written so the caller can undo.
    fn assign(
        &self,
        root: usize,
        target: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> Option<Vec<usize>> {
        let pairs = self.propagate(root, target, used)?;
        let same = self.comp_of_dart[root] == self.comp_of_dart[target];
        if self.involution {
            if same {
                let mut local = vec![UNSET; map.len()];
                for &(d, t) in &pairs {
                    local[d] = t;
                }
                if pairs.iter().any(|&(d, t)| local[t] != d) {
                    return None;
                }
            } else if self.comp_darts[self.comp_of_dart[target]]
                .iter()
                .any(|&d| map[d] != UNSET)
            {
                return None;
            }
        }
        let mut written = Vec::with_capacity(2 * pairs.len());
        for &(d, t) in &pairs {
            map[d] = t;
            used[t] = true;
            written.push(d);
        }
        if self.involution && !same {
            for &(d, t) in &pairs {
                map[t] = d;
                used[d] = true;
                written.push(t);
            }
        }
        Some(written)
    }

    fn undo(&self, written: &[usize], map: &mut [usize], used: &mut [bool]) {
        for &d in written {
            used[map[d]] = false;
            map[d] = UNSET;
        }
    }

    fn solve(
        &self,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        let Some(c) = (0..self.comp_darts.len()).find(|&c| map[self.comp_darts[c][0]] == UNSET)
        else {
            out.push(map.clone());
            return;
        };
        let root = self.comp_darts[c][0];
        let root_deg = self.g.degree(self.g.dart_vertex(root));
        let root_color = self.g.dart_color(root);
        for t in 0..self.g.dart_count() {
            if used[t]
                || self.g.dart_color(t) != root_color
                || self.g.degree(self.g.dart_vertex(t)) != root_deg
                || self.comp_darts[self.comp_of_dart[t]].len() != self.comp_darts[c].len()
            {
                continue;
            }
            if let Some(written) = self.assign(root, t, map, used) {
                self.solve(map, used, out, limit);
                self.undo(&written, map, used);
                if out.len() >= limit {
                    return;
                }
            }
        }
    }

    fn run(&self, forced: Option<(usize, usize)>, limit: usize) -> Vec<Vec<usize>> {
        let n = self.g.dart_count();
        let mut map = vec![UNSET; n];
        let mut used = vec![false; n];
        let mut out = Vec::new();
        if let Some((d, t)) = forced {
            if self.assign(d, t, &mut map, &mut used).is_none() {
                return out;
            }
        }
        self.solve(&mut map, &mut used, &mut out, limit);
        out
    }
}

fn to_automorphism(g: &EmbeddedGraph, orientation: Orientation, darts: Vec<usize>) -> GraphAutomorphism {
    let vertex_perm = (0..g.vertex_count())
        .map(|v| {
            let e = g.rotation(v)[0];
            let d = g.dart_at(e, v).expect("incident");
            g.dart_vertex(darts[d])
        })
        .collect();
    GraphAutomorphism {
        orientation,
        vertex_perm,
        dart_perm: darts,
    }
}

/// Involution of the given orientation that maps edge `e` to itself with its
/// endpoints exchanged, if one exists.
pub fn find_edge_involution(
    g: &EmbeddedGraph,
    e: usize,
    orientation: Orientation,
) -> Result<Option<GraphInvolution>, GraphError> {
    let edge = g.edge(e)?;
    let from = g.dart_at(e, edge.ends[0]).expect("incident");
    let to = g.dart_at(e, edge.ends[1]).expect("incident");
    let search = Search::new(g, orientation, true);
    Ok(search
        .run(Some((from, to)), 1)
        .pop()
        .map(|darts| to_automorphism(g, orientation, darts)))
}

/// Reflective and rotational involutions swapping the ends of green edge `e`.
pub fn find_involutions(g: &EmbeddedGraph, e: usize) -> Result<InvolutionReport, GraphError> {
    if g.edge(e)?.color != EdgeColor::Green {
        return Err(GraphError::NotGreen(e));
    }
    let reflective = find_edge_involution(g, e, Orientation::Reversing)?;
    let rotational = find_edge_involution(g, e, Orientation::Preserving)?;
    Ok(InvolutionReport {
        edge: e,
        has_reflective: reflective.is_some(),
        has_rotational: rotational.is_some(),
        reflective,
        rotational,
    })
}

/// All color-preserving automorphisms of the embedded graph, preserving
/// ones first, each group in lexicographic order of dart images.
pub fn automorphisms(g: &EmbeddedGraph) -> Vec<GraphAutomorphism> {
    let mut out = Vec::new();
    for orientation in Orientation::BOTH {
        let search = Search::new(g, orientation, false);
        let mut found = search.run(None, usize::MAX);
        found.sort();
        out.extend(found.into_iter().map(|d| to_automorphism(g, orientation, d)));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCheck {
    pub edge: usize,
    pub twisted: bool,
    pub required: Orientation,
    pub witness: Option<GraphInvolution>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdwReport {
    pub holds: bool,
    pub edges: Vec<EdgeCheck>,
}

/// Every untwisted green edge needs a reflective involution and every
/// twisted one a rotational involution, each swapping the edge's ends.
/// `twists[i]` refers to the i-th green edge in id order.
pub fn cdw_criterion(g: &EmbeddedGraph, twists: &[bool]) -> Result<CdwReport, GraphError> {
    let green = g.green_edges();
    if twists.len() != green.len() {
        return Err(GraphError::LengthMismatch {
            expected: green.len(),
            got: twists.len(),
        });
    }
    let mut edges = Vec::with_capacity(green.len());
    for (&e, &twisted) in green.iter().zip(twists) {
        let required = if twisted {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        };
        edges.push(EdgeCheck {
            edge: e,
            twisted,
            required,
            witness: find_edge_involution(g, e, required)?,
        });
    }
    Ok(CdwReport {
        holds: edges.iter().all(|c| c.witness.is_some()),
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::super::graph::{build_pretzel_crushtacean, Edge};
    use super::*;

    fn single_edge() -> EmbeddedGraph {
        EmbeddedGraph::new(
            2,
            vec![Edge {
                ends: [0, 1],
                color: EdgeColor::Green,
            }],
            vec![vec![0], vec![0]],
        )
        .unwrap()
    }

    #[test]
    fn single_edge_has_both() {
        let r = find_involutions(&single_edge(), 0).unwrap();
        assert!(r.has_reflective && r.has_rotational);
        assert_eq!(r.reflective.unwrap().vertex_perm, vec![1, 0]);
    }

    #[test]
    fn pretzel_edges_have_both() {
        for n in 3..=9 {
            let g = build_pretzel_crushtacean(n).unwrap();
            for e in g.green_edges() {
                let r = find_involutions(&g, e).unwrap();
                assert!(r.has_reflective && r.has_rotational, "n={n} e={e}");
                for w in [r.reflective.unwrap(), r.rotational.unwrap()] {
                    assert!(w.is_involution());
                    assert_eq!(w.vertex_perm[e], n + e);
                }
            }
        }
    }

    #[test]
    fn plain_edge_rejected() {
        let g = build_pretzel_crushtacean(4).unwrap();
        assert_eq!(find_involutions(&g, 5).unwrap_err(), GraphError::NotGreen(5));
        assert!(find_involutions(&g, 99).is_err());
    }

    #[test]
    fn pretzel_automorphism_count() {
        for n in 3..=8 {
            let g = build_pretzel_crushtacean(n).unwrap();
            let all = automorphisms(&g);
            let preserving = all
                .iter()
                .filter(|a| a.orientation == Orientation::Preserving)
                .count();
            assert_eq!(all.len(), 4 * n, "n={n}");
            assert_eq!(preserving, 2 * n, "n={n}");
        }
    }

    #[test]
    fn twist_length_checked() {
        let g = build_pretzel_crushtacean(5).unwrap();
        assert!(matches!(
            cdw_criterion(&g, &[false; 4]),
            Err(GraphError::LengthMismatch { expected: 5, got: 4 })
        ));
        assert!(cdw_criterion(&g, &[false, true, true, false, true]).unwrap().holds);
    }

    #[test]
    fn disconnected_components_can_swap() {
        // two disjoint green edges: an involution may swap or fix each one
        let g = EmbeddedGraph::new(
            4,
            vec![
                Edge { ends: [0, 1], color: EdgeColor::Green },
                Edge { ends: [2, 3], color: EdgeColor::Plain },
            ],
            vec![vec![0], vec![0], vec![1], vec![1]],
        )
        .unwrap();
        assert!(find_involutions(&g, 0).unwrap().has_rotational);
        // at degree-one vertices both orientations give the same maps
        let all = automorphisms(&g);
        assert_eq!(all.len(), 8);
        assert_eq!(all.iter().filter(|a| a.orientation == Orientation::Reversing).count(), 4);
    }
}
