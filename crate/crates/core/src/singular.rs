//! The singular-set graph: six fixed-point vertices joined by nine edge
//! spheres, each with its local group.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ineffective_kernel, EdgeId, IsotropyGroup, Parity, TorusParams, VertexId};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    /// Trivial edge group and trivial endpoints.
    Regular,
    /// Both endpoints carry the edge group.
    SmoothSphere,
    /// Exactly one endpoint group differs from the edge group.
    Teardrop,
    /// Both endpoint groups differ from the edge group.
    Football,
    /// Trivial edge group, some endpoint singular.
    IsolatedEndpointsOnly,
}

impl EdgeClass {
    pub fn in_sigma(self) -> bool {
        matches!(
            self,
            EdgeClass::SmoothSphere | EdgeClass::Teardrop | EdgeClass::Football
        )
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct VertexRecord {
    pub vertex: VertexId,
    pub parity: Parity,
    pub isotropy: IsotropyGroup,
    pub in_sigma: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub edge: EdgeId,
    pub endpoints: [VertexId; 2],
    pub isotropy: IsotropyGroup,
    pub class: EdgeClass,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SingularGraph {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

/// Shape of the singular set as seen by the theorem checks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaShape {
    Empty,
    /// Only isolated singular points.
    Points(usize),
    /// At least one singular edge sphere.
    WithSpheres,
}

pub fn singular_graph(t: &TorusParams) -> Result<SingularGraph> {
    if !t.is_almost_free() {
        return Err(Error::NotAlmostFree);
    }
    let k = ineffective_kernel(t);
    if !k.is_trivial() {
        return Err(Error::NotEffective { kernel: k.to_string() });
    }
    Ok(build_graph(t))
}

/// Graph construction without the precondition checks.
pub(crate) fn build_graph(t: &TorusParams) -> SingularGraph {
    let vertices: Vec<VertexRecord> = VertexId::ALL
        .iter()
        .map(|&v| {
            let isotropy = t.vertex_isotropy(v);
            VertexRecord {
                vertex: v,
                parity: v.parity(),
                in_sigma: !isotropy.group.is_trivial(),
                isotropy,
            }
        })
        .collect();
    let group_of = |v: VertexId| &vertices[v as usize].isotropy.group;
    let edges = EdgeId::ALL
        .iter()
        .map(|&e| {
            let isotropy = t.edge_isotropy(e);
            let endpoints = e.endpoints();
            let class = if isotropy.group.is_trivial() {
                if endpoints.iter().any(|&v| !group_of(v).is_trivial()) {
                    EdgeClass::IsolatedEndpointsOnly
                } else {
                    EdgeClass::Regular
                }
            } else {
                match endpoints.iter().filter(|&&v| *group_of(v) != isotropy.group).count() {
                    0 => EdgeClass::SmoothSphere,
                    1 => EdgeClass::Teardrop,
                    _ => EdgeClass::Football,
                }
            };
            EdgeRecord {
                edge: e,
                endpoints,
                isotropy,
                class,
            }
        })
        .collect();
    SingularGraph { vertices, edges }
}

impl SingularGraph {
    pub fn vertex(&self, v: VertexId) -> &VertexRecord {
        &self.vertices[v as usize]
    }

    pub fn edge(&self, e: EdgeId) -> &EdgeRecord {
        &self.edges[e.i() * 3 + e.j()]
    }

    pub fn singular_vertices(&self) -> Vec<VertexId> {
        self.vertices.iter().filter(|r| r.in_sigma).map(|r| r.vertex).collect()
    }

    pub fn singular_edges(&self) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|r| r.class.in_sigma())
            .map(|r| r.edge)
            .collect()
    }

    pub fn sigma_is_empty(&self) -> bool {
        self.vertices.iter().all(|r| !r.in_sigma) && self.edges.iter().all(|r| !r.class.in_sigma())
    }

    pub fn shape(&self) -> SigmaShape {
        if !self.singular_edges().is_empty() {
            SigmaShape::WithSpheres
        } else {
            match self.singular_vertices().len() {
                0 => SigmaShape::Empty,
                n => SigmaShape::Points(n),
            }
        }
    }

    /// Edge/endpoint pairs whose groups have equal order but differ.
    pub fn order_equal_but_distinct(&self) -> Vec<(EdgeId, VertexId)> {
        let mut out = Vec::new();
        for e in &self.edges {
            for &v in &e.endpoints {
                let vg = &self.vertex(v).isotropy;
                if vg.n == e.isotropy.n && vg.group != e.isotropy.group {
                    out.push((e.edge, v));
                }
            }
        }
        out
    }

    /// The single edge containing the singular set, if there is one.
    ///
    /// An empty set uses edge (1,1); a singular edge is used as is; a single
    /// vertex picks its first incident edge; two adjacent vertices pick
    /// their joining edge.
    pub fn containing_edge(&self) -> Result<EdgeId> {
        let edges = self.singular_edges();
        let verts = self.singular_vertices();
        let covers = |e: EdgeId| verts.iter().all(|v| e.endpoints().contains(v));
        match (edges.as_slice(), verts.as_slice()) {
            ([], []) => Ok(EdgeId::new(0, 0)),
            ([e], _) if covers(*e) => Ok(*e),
            ([], [v]) => Ok(v.edges()[0]),
            ([], [u, v]) => EdgeId::joining(*u, *v).ok_or(Error::SigmaNotSingleEdge),
            _ => Err(Error::SigmaNotSingleEdge),
        }
    }
}

/// Counts of singular vertices by parity: `(even, odd)`.
pub fn parity_census(g: &SingularGraph) -> (usize, usize) {
    let even = g
        .vertices
        .iter()
        .filter(|r| r.in_sigma && r.parity == Parity::Even)
        .count();
    let odd = g
        .vertices
        .iter()
        .filter(|r| r.in_sigma && r.parity == Parity::Odd)
        .count();
    (even, odd)
}

/// Undirected DOT graph: even vertices in one rank, odd in the other,
/// singular vertices and edges drawn bold red with their groups.
pub fn export_dot(g: &SingularGraph) -> String {
    let mut s = String::from("graph singular_set {\n  node [shape=circle, fontname=\"Helvetica\"];\n");
    for (parity, name) in [(Parity::Even, "even"), (Parity::Odd, "odd")] {
        let _ = write!(s, "  {{ rank=same; /* {name} */");
        for r in g.vertices.iter().filter(|r| r.parity == parity) {
            let _ = write!(s, " \"{}\";", r.vertex);
        }
        s.push_str(" }\n");
    }
    for r in &g.vertices {
        if r.in_sigma {
            let _ = writeln!(
                s,
                "  \"{}\" [label=\"{}\\n{}\", color=red, fontcolor=red, penwidth=2];",
                r.vertex,
                r.vertex,
                r.isotropy.group.compact()
            );
        } else {
            let _ = writeln!(s, "  \"{}\" [label=\"{}\"];", r.vertex, r.vertex);
        }
    }
    for e in &g.edges {
        let [u, v] = e.endpoints;
        if e.class.in_sigma() {
            let _ = writeln!(
                s,
                "  \"{u}\" -- \"{v}\" [label=\"{} {}\", color=red, penwidth=3];",
                e.edge.label(),
                e.isotropy.group.compact()
            );
        } else {
            let _ = writeln!(s, "  \"{u}\" -- \"{v}\" [label=\"{}\"];", e.edge.label());
        }
    }
    s.push_str("}\n");
    s
}
