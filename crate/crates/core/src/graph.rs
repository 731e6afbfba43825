//! Graphs with boundary: a vertex set, a subset of wall vertices whose spin
//! is frozen to the ground state, a multiset of inner bonds (self-loops
//! allowed), and a multiset of boundary bonds tying vertices to the wall.
//!
//! All edit operations return new values; contraction can create parallel
//! bonds and self-loops, which is why the bond collections are multisets.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(String);

impl VertexId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_string())
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(s)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownInnerEndpoint { bond: (VertexId, VertexId), endpoint: VertexId },
    UnknownBoundaryVertex { vertex: VertexId },
    UnknownWallVertex { vertex: VertexId },
}

impl fmt::Display for Violation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownInnerEndpoint { bond, endpoint } => write!(
                out,
                "inner bond [{}, {}] references unknown vertex {}",
                bond.0, bond.1, endpoint
            ),
            Violation::UnknownBoundaryVertex { vertex } => {
                write!(out, "boundary bond references unknown vertex {vertex}")
            }
            Violation::UnknownWallVertex { vertex } => {
                write!(out, "wall set references unknown vertex {vertex}")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("no inner bond [{0}, {1}] present")]
    InnerBondNotFound(VertexId, VertexId),
    #[error("vertex {0} has no boundary bond")]
    BoundaryBondNotFound(VertexId),
    #[error("invalid graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("cannot parse graph JSON: {0}")]
    Json(String),
}

/// Serialized form:
/// `{"vertices": [...], "wall_vertices": [...], "inner_bonds": [["u","v"], ...],
///   "boundary_bonds": ["u", ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub wall_vertices: Vec<String>,
    pub inner_bonds: Vec<(String, String)>,
    pub boundary_bonds: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphDoc", into = "GraphDoc")]
pub struct BoundaryGraph {
    vertices: BTreeSet<VertexId>,
    wall: BTreeSet<VertexId>,
    // normalized (min, max) pairs, kept sorted; duplicates are parallel bonds
    inner: Vec<(VertexId, VertexId)>,
    // sorted; duplicates are repeated boundary bonds
    boundary: Vec<VertexId>,
}

fn normalize(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Default for BoundaryGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl BoundaryGraph {
    pub fn new() -> Self {
        BoundaryGraph {
            vertices: BTreeSet::new(),
            wall: BTreeSet::new(),
            inner: Vec::new(),
            boundary: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, id: impl Into<VertexId>) {
        self.vertices.insert(id.into());
    }

    pub fn add_wall_vertex(&mut self, id: impl Into<VertexId>) {
        let id = id.into();
        self.vertices.insert(id.clone());
        self.wall.insert(id);
    }

    pub fn add_inner_bond(
        &mut self,
        u: impl Into<VertexId>,
        v: impl Into<VertexId>,
    ) -> Result<(), GraphError> {
        let (u, v) = (u.into(), v.into());
        for w in [&u, &v] {
            if !self.vertices.contains(w) {
                return Err(GraphError::UnknownVertex(w.clone()));
            }
        }
        let bond = normalize(u, v);
        let at = self.inner.partition_point(|b| *b <= bond);
        self.inner.insert(at, bond);
        Ok(())
    }

    pub fn add_boundary_bond(&mut self, v: impl Into<VertexId>) -> Result<(), GraphError> {
        let v = v.into();
        if !self.vertices.contains(&v) {
            return Err(GraphError::UnknownVertex(v));
        }
        let at = self.boundary.partition_point(|b| *b <= v);
        self.boundary.insert(at, v);
        Ok(())
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn wall_vertices(&self) -> &BTreeSet<VertexId> {
        &self.wall
    }

    pub fn inner_bonds(&self) -> &[(VertexId, VertexId)] {
        &self.inner
    }

    pub fn boundary_bonds(&self) -> &[VertexId] {
        &self.boundary
    }

    pub fn is_wall(&self, v: &VertexId) -> bool {
        self.wall.contains(v)
    }

    /// Vertices carrying a free spin.
    pub fn spin_count(&self) -> usize {
        self.vertices.len() - self.wall.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.inner.is_empty() && self.boundary.is_empty()
    }

    /// Reports every invariant violation. A graph built through the `add_*`
    /// methods is always clean; this is the diagnostic for ingested data.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for bond in &self.inner {
            for endpoint in [&bond.0, &bond.1] {
                if !self.vertices.contains(endpoint) {
                    out.push(Violation::UnknownInnerEndpoint {
                        bond: bond.clone(),
                        endpoint: endpoint.clone(),
                    });
                }
            }
        }
        for v in &self.boundary {
            if !self.vertices.contains(v) {
                out.push(Violation::UnknownBoundaryVertex { vertex: v.clone() });
            }
        }
        for v in &self.wall {
            if !self.vertices.contains(v) {
                out.push(Violation::UnknownWallVertex { vertex: v.clone() });
            }
        }
        out
    }

    /// Removes one occurrence of the inner bond {u, v}.
    pub fn delete_inner(&self, u: &VertexId, v: &VertexId) -> Result<Self, GraphError> {
        let bond = normalize(u.clone(), v.clone());
        let mut g = self.clone();
        match g.inner.iter().position(|b| *b == bond) {
            Some(i) => {
                g.inner.remove(i);
                Ok(g)
            }
            None => Err(GraphError::InnerBondNotFound(bond.0, bond.1)),
        }
    }

    /// Contracts one occurrence of the inner bond {u, v}: the endpoints merge
    /// into the lexicographically smaller id and all incident bonds follow.
    /// A self-loop contracts by dropping the bond alone. If either endpoint
    /// was on the wall the merged vertex stays on the wall.
    pub fn contract_inner(&self, u: &VertexId, v: &VertexId) -> Result<Self, GraphError> {
        let bond = normalize(u.clone(), v.clone());
        let mut g = self.delete_inner(u, v)?;
        let (keep, gone) = (bond.0, bond.1);
        if keep == gone {
            return Ok(g); // self-loop
        }
        g.vertices.remove(&gone);
        if g.wall.remove(&gone) {
            g.wall.insert(keep.clone());
        }
        let relabel = |w: VertexId| if w == gone { keep.clone() } else { w };
        g.inner = g
            .inner
            .into_iter()
            .map(|(a, b)| normalize(relabel(a), relabel(b)))
            .collect();
        g.inner.sort();
        g.boundary = g.boundary.into_iter().map(relabel).collect();
        g.boundary.sort();
        Ok(g)
    }

    /// Removes one occurrence of the boundary bond on `v`.
    pub fn delete_boundary(&self, v: &VertexId) -> Result<Self, GraphError> {
        let mut g = self.clone();
        match g.boundary.iter().position(|b| b == v) {
            Some(i) => {
                g.boundary.remove(i);
                Ok(g)
            }
            None => Err(GraphError::BoundaryBondNotFound(v.clone())),
        }
    }

    /// Contracts one occurrence of the boundary bond on `v`, pinning `v`
    /// to the wall.
    pub fn contract_boundary(&self, v: &VertexId) -> Result<Self, GraphError> {
        let mut g = self.delete_boundary(v)?;
        g.wall.insert(v.clone());
        Ok(g)
    }

    /// Drops all degree-0 vertices, returning the stripped graph and the
    /// counts of removed free and wall vertices.
    pub fn strip_isolated(&self) -> (Self, usize, usize) {
        let mut touched: BTreeSet<&VertexId> = BTreeSet::new();
        for (a, b) in &self.inner {
            touched.insert(a);
            touched.insert(b);
        }
        for v in &self.boundary {
            touched.insert(v);
        }
        let mut g = self.clone();
        let mut free = 0;
        let mut wall = 0;
        g.vertices.retain(|v| {
            if touched.contains(v) {
                true
            } else {
                if self.wall.contains(v) {
                    wall += 1;
                } else {
                    free += 1;
                }
                false
            }
        });
        g.wall.retain(|v| g.vertices.contains(v));
        (g, free, wall)
    }

    pub fn from_json_str(s: &str) -> Result<Self, GraphError> {
        serde_json::from_str(s).map_err(|e| GraphError::Json(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serialization cannot fail")
    }
}

impl TryFrom<GraphDoc> for BoundaryGraph {
    type Error = GraphError;

    fn try_from(doc: GraphDoc) -> Result<Self, GraphError> {
        let mut g = BoundaryGraph {
            vertices: doc.vertices.into_iter().map(VertexId).collect(),
            wall: doc.wall_vertices.into_iter().map(VertexId).collect(),
            inner: doc
                .inner_bonds
                .into_iter()
                .map(|(u, v)| normalize(VertexId(u), VertexId(v)))
                .collect(),
            boundary: doc.boundary_bonds.into_iter().map(VertexId).collect(),
        };
        g.inner.sort();
        g.boundary.sort();
        let violations = g.validate();
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(GraphError::Invalid(violations))
        }
    }
}

impl From<BoundaryGraph> for GraphDoc {
    fn from(g: BoundaryGraph) -> GraphDoc {
        GraphDoc {
            vertices: g.vertices.iter().map(|v| v.0.clone()).collect(),
            wall_vertices: g.wall.iter().map(|v| v.0.clone()).collect(),
            inner_bonds: g
                .inner
                .iter()
                .map(|(a, b)| (a.0.clone(), b.0.clone()))
                .collect(),
            boundary_bonds: g.boundary.iter().map(|v| v.0.clone()).collect(),
        }
    }
}

/// An assignment of a spin in {0, .., f-1} to every vertex, with wall
/// vertices pinned to 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinState {
    values: std::collections::BTreeMap<VertexId, u64>,
}

impl SpinState {
    pub fn new(values: impl IntoIterator<Item = (VertexId, u64)>) -> Self {
        SpinState {
            values: values.into_iter().collect(),
        }
    }

    pub fn get(&self, v: &VertexId) -> Option<u64> {
        self.values.get(v).copied()
    }
}
