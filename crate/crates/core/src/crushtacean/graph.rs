use serde::{Deserialize, Serialize};

use super::GraphError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeColor {
    /// Edge coming from a crossing circle.
    Green,
    Plain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub ends: [usize; 2],
    pub color: EdgeColor,
}

/// On-disk form; edge ids are positions in `edges`, and `rotation[v]` lists
/// the edges at `v` in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct GraphFile {
    vertices: usize,
    edges: Vec<Edge>,
    rotation: Vec<Vec<usize>>,
}

/// A graph with a rotation system (a combinatorial map) and edge colors.
///
/// Each edge `e` has two darts: `2e` at `ends[0]` and `2e + 1` at
/// `ends[1]`. Multiple edges are allowed, loops and isolated vertices are
/// not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedGraph {
    edges: Vec<Edge>,
    rotation: Vec<Vec<usize>>,
    /// position of each dart in the rotation at its vertex
    pos: Vec<usize>,
}

impl EmbeddedGraph {
    pub fn new(
        vertices: usize,
        edges: Vec<Edge>,
        rotation: Vec<Vec<usize>>,
    ) -> Result<Self, GraphError> {
        if rotation.len() != vertices {
            return Err(GraphError::Invalid(format!(
                "{} rotation lists for {vertices} vertices",
                rotation.len()
            )));
        }
        for (id, e) in edges.iter().enumerate() {
            if e.ends.iter().any(|&v| v >= vertices) {
                return Err(GraphError::Invalid(format!("edge {id} has an endpoint out of range")));
            }
            if e.ends[0] == e.ends[1] {
                return Err(GraphError::Invalid(format!("edge {id} is a loop")));
            }
        }
        let mut pos = vec![usize::MAX; 2 * edges.len()];
        for (v, rot) in rotation.iter().enumerate() {
            if rot.is_empty() {
                return Err(GraphError::Invalid(format!("vertex {v} is isolated")));
            }
            for (i, &e) in rot.iter().enumerate() {
                let edge = edges
                    .get(e)
                    .ok_or_else(|| GraphError::UnknownEdge(e))?;
                let d = if edge.ends[0] == v {
                    2 * e
                } else if edge.ends[1] == v {
                    2 * e + 1
                } else {
                    return Err(GraphError::Invalid(format!(
                        "rotation at vertex {v} lists edge {e}, which is not incident"
                    )));
                };
                if pos[d] != usize::MAX {
                    return Err(GraphError::Invalid(format!(
                        "rotation at vertex {v} lists edge {e} twice"
                    )));
                }
                pos[d] = i;
            }
        }
        if let Some(d) = pos.iter().position(|&p| p == usize::MAX) {
            return Err(GraphError::Invalid(format!(
                "edge {} is missing from the rotation at vertex {}",
                d / 2,
                edges[d / 2].ends[d % 2]
            )));
        }
        Ok(Self {
            edges,
            rotation,
            pos,
        })
    }

    pub fn from_json(s: &str) -> Result<Self, GraphError> {
        let f: GraphFile = serde_json::from_str(s).map_err(|e| GraphError::Parse(e.to_string()))?;
        Self::new(f.vertices, f.edges, f.rotation)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&GraphFile {
            vertices: self.vertex_count(),
            edges: self.edges.clone(),
            rotation: self.rotation.clone(),
        })
        .expect("graph serializes")
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Result<&Edge, GraphError> {
        self.edges.get(e).ok_or(GraphError::UnknownEdge(e))
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn is_trivalent(&self) -> bool {
        self.rotation.iter().all(|r| r.len() == 3)
    }

    /// Ids of green edges in increasing order.
    pub fn green_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| self.edges[e].color == EdgeColor::Green)
            .collect()
    }

    pub fn dart_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn dart_vertex(&self, d: usize) -> usize {
        self.edges[d / 2].ends[d % 2]
    }

    pub fn dart_color(&self, d: usize) -> EdgeColor {
        self.edges[d / 2].color
    }

    /// The dart of edge `e` at endpoint `v`.
    pub fn dart_at(&self, e: usize, v: usize) -> Option<usize> {
        let edge = self.edges.get(e)?;
        if edge.ends[0] == v {
            Some(2 * e)
        } else if edge.ends[1] == v {
            Some(2 * e + 1)
        } else {
            None
        }
    }

    /// Opposite dart of the same edge.
    pub fn alpha(&self, d: usize) -> usize {
        d ^ 1
    }

    fn dart_of_rotation_slot(&self, v: usize, i: usize) -> usize {
        let e = self.rotation[v][i];
        if self.edges[e].ends[0] == v {
            2 * e
        } else {
            2 * e + 1
        }
    }

    /// Next dart counterclockwise at the same vertex.
    pub fn next(&self, d: usize) -> usize {
        let v = self.dart_vertex(d);
        let k = self.rotation[v].len();
        self.dart_of_rotation_slot(v, (self.pos[d] + 1) % k)
    }

    pub fn prev(&self, d: usize) -> usize {
        let v = self.dart_vertex(d);
        let k = self.rotation[v].len();
        self.dart_of_rotation_slot(v, (self.pos[d] + k - 1) % k)
    }

    /// Connected components, each as a sorted list of vertices, ordered by
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                for &e in &self.rotation[v] {
                    let [a, b] = self.edges[e].ends;
                    let w = if a == v { b } else { a };
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Number of faces of the embedding (orbits of `next ∘ alpha`).
    pub fn face_count(&self) -> usize {
        let mut seen = vec![false; self.dart_count()];
        let mut faces = 0;
        for s in 0..self.dart_count() {
            if seen[s] {
                continue;
            }
            faces += 1;
            let mut d = s;
            while !seen[d] {
                seen[d] = true;
                d = self.next(self.alpha(d));
            }
        }
        faces
    }

    /// Sum of genera over components, from Euler's formula.
    pub fn genus(&self) -> usize {
        let v = self.vertex_count() as i64;
        let e = self.edge_count() as i64;
        let f = self.face_count() as i64;
        let c = self.components().len() as i64;
        ((2 * c - v + e - f) / 2) as usize
    }

    /// The sub-map on the given edges, with rotations restricted from this
    /// graph. Returns the subgraph and the map from its vertices to ours.
    pub fn induced_by_edges(&self, edge_ids: &[usize]) -> Result<(Self, Vec<usize>), GraphError> {
        let mut vmap: Vec<usize> = Vec::new();
        let mut local = vec![usize::MAX; self.vertex_count()];
        let mut emap = vec![usize::MAX; self.edge_count()];
        let mut edges = Vec::new();
        for &e in edge_ids {
            let edge = self.edge(e)?;
            if emap[e] != usize::MAX {
                return Err(GraphError::Invalid(format!("edge {e} listed twice")));
            }
            emap[e] = edges.len();
            let mut ends = [0; 2];
            for (k, &v) in edge.ends.iter().enumerate() {
                if local[v] == usize::MAX {
                    local[v] = vmap.len();
                    vmap.push(v);
                }
                ends[k] = local[v];
            }
            edges.push(Edge {
                ends,
                color: edge.color,
            });
        }
        let rotation = vmap
            .iter()
            .map(|&v| {
                self.rotation[v]
                    .iter()
                    .filter(|&&e| emap[e] != usize::MAX)
                    .map(|&e| emap[e])
                    .collect()
            })
            .collect();
        Ok((Self::new(vmap.len(), edges, rotation)?, vmap))
    }

    /// Same map with vertices renamed by `perm` (old → new).
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, GraphError> {
        let n = self.vertex_count();
        if perm.len() != n {
            return Err(GraphError::Invalid("permutation has the wrong length".into()));
        }
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                ends: [perm[e.ends[0]], perm[e.ends[1]]],
                color: e.color,
            })
            .collect();
        let mut rotation = vec![Vec::new(); n];
        for v in 0..n {
            rotation[perm[v]] = self.rotation[v].clone();
        }
        Self::new(n, edges, rotation)
    }
}

/// The crushtacean of the pretzel FAL `P_n`: a circular ladder drawn in the
/// plane with outer vertices `u_i = i`, inner vertices `w_i = n + i`, green
/// rungs `c_i = u_i w_i` (edge `i`), outer rails `u_i u_{i+1}` (edge `n + i`)
/// and inner rails `w_i w_{i+1}` (edge `2n + i`).
pub fn build_pretzel_crushtacean(n: usize) -> Result<EmbeddedGraph, GraphError> {
    if n < 3 {
        return Err(GraphError::NotHyperbolic(n as u64));
    }
    let mut edges = Vec::with_capacity(3 * n);
    for i in 0..n {
        edges.push(Edge {
            ends: [i, n + i],
            color: EdgeColor::Green,
        });
    }
    for i in 0..n {
        edges.push(Edge {
            ends: [i, (i + 1) % n],
            color: EdgeColor::Plain,
        });
    }
    for i in 0..n {
        edges.push(Edge {
            ends: [n + i, n + (i + 1) % n],
            color: EdgeColor::Plain,
        });
    }
    let mut rotation = Vec::with_capacity(2 * n);
    for i in 0..n {
        let before = (i + n - 1) % n;
        rotation.push(vec![n + i, i, n + before]);
    }
    for i in 0..n {
        let before = (i + n - 1) % n;
        rotation.push(vec![i, 2 * n + i, 2 * n + before]);
    }
    EmbeddedGraph::new(2 * n, edges, rotation)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pretzel_shape() {
        let g = build_pretzel_crushtacean(3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 9));
        assert_eq!(g.green_edges(), vec![0, 1, 2]);
        assert!(g.is_trivalent());
        for n in 3..12 {
            let g = build_pretzel_crushtacean(n).unwrap();
            assert_eq!(g.genus(), 0, "planar drawing");
            assert_eq!(g.face_count(), n + 2);
            assert_eq!(g.components().len(), 1);
        }
        assert!(build_pretzel_crushtacean(2).is_err());
    }

    #[test]
    fn n4_is_the_cube() {
        let g = build_pretzel_crushtacean(4).unwrap();
        // cube: vertices are 3-bit strings, edges join strings at distance 1
        let label = [0b000, 0b001, 0b011, 0b010, 0b100, 0b101, 0b111, 0b110];
        let mut ours: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = (label[e.ends[0]], label[e.ends[1]]);
                (a.min(b), a.max(b))
            })
            .collect();
        ours.sort_unstable();
        let mut cube = Vec::new();
        for a in 0..8usize {
            for bit in 0..3 {
                let b = a ^ (1 << bit);
                if a < b {
                    cube.push((a, b));
                }
            }
        }
        cube.sort_unstable();
        assert_eq!(ours, cube);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let g = build_pretzel_crushtacean(5).unwrap();
        let back = EmbeddedGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
        let bad = r#"{"vertices":2,"edges":[{"ends":[0,1],"color":"plain"}],"rotation":[[0],[]]}"#;
        assert!(EmbeddedGraph::from_json(bad).is_err());
        let loopy = r#"{"vertices":1,"edges":[{"ends":[0,0],"color":"plain"}],"rotation":[[0]]}"#;
        assert!(EmbeddedGraph::from_json(loopy).is_err());
        let unknown = r#"{"vertices":2,"edges":[{"ends":[0,1],"color":"plain"}],"rotation":[[0],[3]]}"#;
        assert!(EmbeddedGraph::from_json(unknown).is_err());
    }

    #[test]
    fn rotation_navigation() {
        let g = build_pretzel_crushtacean(4).unwrap();
        for d in 0..g.dart_count() {
            assert_eq!(g.prev(g.next(d)), d);
            assert_eq!(g.dart_vertex(g.next(d)), g.dart_vertex(d));
        }
    }
}
