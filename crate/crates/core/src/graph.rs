//! Labelled multigraphs with minors, leg extension and Whitney moves.
//!
//! Graphs are immutable; every operation returns a new graph. Multi-edges
//! and self-loops are permitted throughout. Legs are attachment metadata
//! carrying a momentum index; they only become edges when the graph is
//! extended with external vertices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::atom::Atom;

pub type VertexId = String;
pub type EdgeId = String;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edge `{0}` is a self-loop and cannot be contracted")]
    SelfLoopContraction(String),
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("invalid move: {0}")]
    InvalidMove(MoveRejection),
}

/// Reason a Whitney move was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveRejection {
    SameComponent,
    NotACutVertex,
    NotATwoSeparation,
    AmbiguousLeg,
    EmptyPart,
    EdgeNotIncident(EdgeId),
    UnknownVertex(VertexId),
    UnknownEdge(EdgeId),
    IdenticalVertices,
}

impl fmt::Display for MoveRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveRejection::SameComponent => write!(f, "vertices lie in the same component"),
            MoveRejection::NotACutVertex => write!(f, "not a cut vertex for the given partition"),
            MoveRejection::NotATwoSeparation => write!(f, "side edges do not form a 2-separation"),
            MoveRejection::AmbiguousLeg => write!(f, "a leg is attached to an altered vertex"),
            MoveRejection::EmptyPart => {
                write!(f, "each part of the edge partition must be nonempty")
            }
            MoveRejection::EdgeNotIncident(e) => {
                write!(f, "edge `{e}` is not incident to the split vertex")
            }
            MoveRejection::UnknownVertex(v) => write!(f, "unknown vertex `{v}`"),
            MoveRejection::UnknownEdge(e) => write!(f, "unknown edge `{e}`"),
            MoveRejection::IdenticalVertices => write!(f, "the two vertices must be distinct"),
        }
    }
}

/// Variable carried by an internal edge.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum EdgeVar {
    Feyn(u32),
    Leg(u32),
}

impl EdgeVar {
    pub fn atom(self) -> Atom {
        match self {
            EdgeVar::Feyn(i) => Atom::feyn(i),
            EdgeVar::Leg(j) => Atom::leg(j),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub id: EdgeId,
    pub ends: (VertexId, VertexId),
    pub var: EdgeVar,
}

impl Edge {
    pub fn is_self_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }

    pub fn other_end(&self, v: &str) -> &VertexId {
        if self.ends.0 == v {
            &self.ends.1
        } else {
            &self.ends.0
        }
    }

    pub fn touches(&self, v: &str) -> bool {
        self.ends.0 == v || self.ends.1 == v
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Leg {
    pub momentum: u32,
    pub vertex: VertexId,
}

/// A labelled multigraph with external legs and optional edge masses.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FeynGraph {
    pub name: String,
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    legs: Vec<Leg>,
    masses: BTreeMap<EdgeId, u32>,
}

impl FeynGraph {
    pub fn new(
        name: impl Into<String>,
        vertices: Vec<VertexId>,
        edges: Vec<Edge>,
        legs: Vec<Leg>,
        masses: BTreeMap<EdgeId, u32>,
    ) -> Result<Self, GraphError> {
        let g = FeynGraph {
            name: name.into(),
            vertices,
            edges,
            legs,
            masses,
        };
        g.validate()?;
        Ok(g)
    }

    /// Compact constructor for tests and generated graphs: edges are
    /// `(id, end, end, feyn index)`, legs are `(momentum, vertex)`.
    pub fn from_parts(
        name: &str,
        vertices: &[&str],
        edges: &[(&str, &str, &str, u32)],
        legs: &[(u32, &str)],
    ) -> Result<Self, GraphError> {
        Self::new(
            name,
            vertices.iter().map(|v| v.to_string()).collect(),
            edges
                .iter()
                .map(|(id, a, b, i)| Edge {
                    id: id.to_string(),
                    ends: (a.to_string(), b.to_string()),
                    var: EdgeVar::Feyn(*i),
                })
                .collect(),
            legs.iter()
                .map(|(p, v)| Leg {
                    momentum: *p,
                    vertex: v.to_string(),
                })
                .collect(),
            BTreeMap::new(),
        )
    }

    fn validate(&self) -> Result<(), GraphError> {
        let mut seen_v = BTreeSet::new();
        for v in &self.vertices {
            if v.is_empty() {
                return Err(GraphError::Malformed("empty vertex name".into()));
            }
            if !seen_v.insert(v) {
                return Err(GraphError::Malformed(format!("duplicate vertex `{v}`")));
            }
        }
        let mut seen_e = BTreeSet::new();
        let mut seen_var = BTreeSet::new();
        for e in &self.edges {
            if e.id.is_empty() {
                return Err(GraphError::Malformed("empty edge id".into()));
            }
            if !seen_e.insert(&e.id) {
                return Err(GraphError::Malformed(format!(
                    "duplicate edge id `{}`",
                    e.id
                )));
            }
            if !seen_var.insert(e.var) {
                return Err(GraphError::Malformed(format!(
                    "duplicate edge variable on edge `{}`",
                    e.id
                )));
            }
            match e.var {
                EdgeVar::Feyn(i) | EdgeVar::Leg(i) if i == 0 => {
                    return Err(GraphError::Malformed(format!(
                        "edge `{}` has a non-positive variable index",
                        e.id
                    )));
                }
                _ => {}
            }
            for v in [&e.ends.0, &e.ends.1] {
                if !seen_v.contains(v) {
                    return Err(GraphError::UnknownVertex(v.clone()));
                }
            }
        }
        let mut seen_p = BTreeSet::new();
        for leg in &self.legs {
            if leg.momentum == 0 {
                return Err(GraphError::Malformed(
                    "leg momentum index must be positive".into(),
                ));
            }
            if !seen_p.insert(leg.momentum) {
                return Err(GraphError::Malformed(format!(
                    "duplicate leg momentum index {}",
                    leg.momentum
                )));
            }
            if !seen_v.contains(&leg.vertex) {
                return Err(GraphError::UnknownVertex(leg.vertex.clone()));
            }
        }
        for (eid, m) in &self.masses {
            if *m == 0 {
                return Err(GraphError::Malformed(format!(
                    "mass index for edge `{eid}` must be positive"
                )));
            }
            if !seen_e.contains(eid) {
                return Err(GraphError::UnknownEdge(eid.clone()));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn masses(&self) -> &BTreeMap<EdgeId, u32> {
        &self.masses
    }

    pub fn with_masses(mut self, masses: BTreeMap<EdgeId, u32>) -> Result<Self, GraphError> {
        self.masses = masses;
        self.validate()?;
        Ok(self)
    }

    pub fn edge(&self, id: &str) -> Result<&Edge, GraphError> {
        self.edges
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| GraphError::UnknownEdge(id.to_string()))
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.vertices.iter().any(|w| w == v)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Loop number `n - r + c`, always derived.
    pub fn loop_number(&self) -> usize {
        self.edge_count() + self.connected_components().len() - self.vertex_count()
    }

    /// Largest leg momentum index, used as the conservation pivot.
    pub fn max_momentum_index(&self) -> u32 {
        self.legs.iter().map(|l| l.momentum).max().unwrap_or(0)
    }

    pub fn incident_edges(&self, v: &str) -> Vec<&Edge> {
        self.edges.iter().filter(|e| e.touches(v)).collect()
    }

    /// Vertex partition into connected components, each sorted, ordered by
    /// their smallest vertex in graph order. The empty graph has no
    /// components.
    pub fn connected_components(&self) -> Vec<BTreeSet<VertexId>> {
        let index: BTreeMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let mut dsu = Dsu::new(self.vertices.len());
        for e in &self.edges {
            dsu.union(index[e.ends.0.as_str()], index[e.ends.1.as_str()]);
        }
        let mut by_root: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            by_root.entry(dsu.find(i)).or_default().insert(v.clone());
        }
        let mut comps: Vec<BTreeSet<VertexId>> = by_root.into_values().collect();
        comps.sort_by_key(|c| {
            self.vertices
                .iter()
                .position(|v| c.contains(v))
                .unwrap_or(usize::MAX)
        });
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Removes an edge; vertices and legs are untouched, so deletion may
    /// leave isolated vertices behind.
    pub fn delete_edge(&self, id: &str) -> Result<Self, GraphError> {
        self.edge(id)?;
        let mut g = self.clone();
        g.edges.retain(|e| e.id != id);
        g.masses.remove(id);
        Ok(g)
    }

    /// Contracts a regular or bridge edge, merging its endpoints into the
    /// endpoint that comes first in vertex order. Parallel edges become
    /// self-loops; legs reattach to the merged vertex.
    pub fn contract_edge(&self, id: &str) -> Result<Self, GraphError> {
        let edge = self.edge(id)?.clone();
        if edge.is_self_loop() {
            return Err(GraphError::SelfLoopContraction(id.to_string()));
        }
        let pos_a = self.vertex_position(&edge.ends.0)?;
        let pos_b = self.vertex_position(&edge.ends.1)?;
        let (keep, drop) = if pos_a < pos_b {
            (edge.ends.0.clone(), edge.ends.1.clone())
        } else {
            (edge.ends.1.clone(), edge.ends.0.clone())
        };
        let mut g = self.clone();
        g.edges.retain(|e| e.id != id);
        g.masses.remove(id);
        let rename = |v: &VertexId| if *v == drop { keep.clone() } else { v.clone() };
        for e in &mut g.edges {
            e.ends = (rename(&e.ends.0), rename(&e.ends.1));
        }
        for leg in &mut g.legs {
            leg.vertex = rename(&leg.vertex);
        }
        g.vertices.retain(|v| *v != drop);
        Ok(g)
    }

    fn vertex_position(&self, v: &str) -> Result<usize, GraphError> {
        self.vertices
            .iter()
            .position(|w| w == v)
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))
    }

    pub fn is_bridge(&self, id: &str) -> Result<bool, GraphError> {
        let before = self.connected_components().len();
        let after = self.delete_edge(id)?.connected_components().len();
        Ok(after > before)
    }

    /// A regular edge is neither a self-loop nor a bridge.
    pub fn is_regular_edge(&self, id: &str) -> Result<bool, GraphError> {
        let edge = self.edge(id)?;
        if edge.is_self_loop() {
            return Ok(false);
        }
        Ok(!self.is_bridge(id)?)
    }

    pub fn regular_edges(&self) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|e| self.is_regular_edge(&e.id).unwrap_or(false))
            .map(|e| e.id.clone())
            .collect()
    }

    /// Caps every leg with a fresh external vertex and promotes the leg to
    /// an internal edge carrying the leg variable `z_j`. The new vertices
    /// are appended after the original ones, so the external block is the
    /// trailing range of the vertex order; the result has no legs.
    pub fn extend_with_external_vertices(&self) -> Self {
        let mut g = self.clone();
        g.name = format!("{}^", self.name);
        for leg in &self.legs {
            let v = g.fresh_vertex_name(&format!("ext{}", leg.momentum));
            let id = g.fresh_edge_id(&format!("z{}", leg.momentum));
            g.vertices.push(v.clone());
            g.edges.push(Edge {
                id,
                ends: (leg.vertex.clone(), v),
                var: EdgeVar::Leg(leg.momentum),
            });
        }
        g.legs.clear();
        g
    }

    fn fresh_vertex_name(&self, base: &str) -> VertexId {
        let mut name = base.to_string();
        while self.vertices.contains(&name) {
            name.push('\'');
        }
        name
    }

    fn fresh_edge_id(&self, base: &str) -> EdgeId {
        let mut id = base.to_string();
        while self.edges.iter().any(|e| e.id == id) {
            id.push('\'');
        }
        id
    }

    /// Drops vertices with no incident edge and no attached leg.
    pub fn strip_isolated_vertices(&self) -> Self {
        let mut g = self.clone();
        g.vertices.retain(|v| {
            self.edges.iter().any(|e| e.touches(v)) || self.legs.iter().any(|l| l.vertex == *v)
        });
        g
    }

    pub fn apply_whitney_move(&self, mv: &WhitneyMove) -> Result<Self, GraphError> {
        match mv {
            WhitneyMove::Identify { u, v } => self.identify(u, v),
            WhitneyMove::Cleave { w, part } => self.cleave(w, part),
            WhitneyMove::Twist { u, v, side } => self.twist(u, v, side),
        }
    }

    /// Merges `drop` into `keep` unconditionally: edges and legs reattach,
    /// `drop` leaves the vertex list. Unlike vertex identification this does
    /// not care about components, so it can glue a graph to itself.
    pub fn merge_vertices(&self, keep: &str, drop: &str) -> Result<Self, GraphError> {
        if !self.has_vertex(keep) {
            return Err(GraphError::UnknownVertex(keep.to_string()));
        }
        if !self.has_vertex(drop) {
            return Err(GraphError::UnknownVertex(drop.to_string()));
        }
        if keep == drop {
            return Err(GraphError::Malformed(
                "cannot merge a vertex with itself".into(),
            ));
        }
        let mut g = self.clone();
        let keep = keep.to_string();
        let rename = |w: &VertexId| if w == drop { keep.clone() } else { w.clone() };
        for e in &mut g.edges {
            e.ends = (rename(&e.ends.0), rename(&e.ends.1));
        }
        for leg in &mut g.legs {
            leg.vertex = rename(&leg.vertex);
        }
        g.vertices.retain(|w| w != drop);
        Ok(g)
    }

    fn identify(&self, u: &str, v: &str) -> Result<Self, GraphError> {
        if !self.has_vertex(u) {
            return Err(GraphError::InvalidMove(MoveRejection::UnknownVertex(
                u.into(),
            )));
        }
        if !self.has_vertex(v) {
            return Err(GraphError::InvalidMove(MoveRejection::UnknownVertex(
                v.into(),
            )));
        }
        if u == v {
            return Err(GraphError::InvalidMove(MoveRejection::IdenticalVertices));
        }
        let comps = self.connected_components();
        let cu = comps.iter().position(|c| c.contains(u));
        let cv = comps.iter().position(|c| c.contains(v));
        if cu == cv {
            return Err(GraphError::InvalidMove(MoveRejection::SameComponent));
        }
        self.merge_vertices(u, v)
    }

    fn cleave(&self, w: &str, part: &BTreeSet<EdgeId>) -> Result<Self, GraphError> {
        if !self.has_vertex(w) {
            return Err(GraphError::InvalidMove(MoveRejection::UnknownVertex(
                w.into(),
            )));
        }
        if self.legs.iter().any(|l| l.vertex == w) {
            return Err(GraphError::InvalidMove(MoveRejection::AmbiguousLeg));
        }
        let incident: BTreeSet<EdgeId> = self
            .incident_edges(w)
            .iter()
            .map(|e| e.id.clone())
            .collect();
        for id in part {
            if !incident.contains(id) {
                return Err(GraphError::InvalidMove(MoveRejection::EdgeNotIncident(
                    id.clone(),
                )));
            }
        }
        let complement: BTreeSet<EdgeId> = incident.difference(part).cloned().collect();
        if part.is_empty() || complement.is_empty() {
            return Err(GraphError::InvalidMove(MoveRejection::EmptyPart));
        }
        // Every branch component of G - w must keep all of its edges on one
        // side of the split.
        let without = self.delete_vertex_for_branching(w);
        let branch_comps = without.connected_components();
        let branch_of = |e: &Edge| -> Option<usize> {
            if e.is_self_loop() {
                return None;
            }
            let other = e.other_end(w);
            branch_comps.iter().position(|c| c.contains(other))
        };
        let mut side_of_branch: BTreeMap<usize, bool> = BTreeMap::new();
        for e in self.incident_edges(w) {
            if let Some(b) = branch_of(e) {
                let in_part = part.contains(&e.id);
                match side_of_branch.get(&b) {
                    Some(prev) if *prev != in_part => {
                        return Err(GraphError::InvalidMove(MoveRejection::NotACutVertex));
                    }
                    _ => {
                        side_of_branch.insert(b, in_part);
                    }
                }
            }
        }
        let mut g = self.clone();
        let fresh = self.fresh_vertex_name(w);
        g.vertices.push(fresh.clone());
        for e in &mut g.edges {
            if part.contains(&e.id) {
                if e.ends.0 == w {
                    e.ends.0 = fresh.clone();
                }
                if e.ends.1 == w {
                    e.ends.1 = fresh.clone();
                }
            }
        }
        Ok(g)
    }

    fn twist(&self, u: &str, v: &str, side: &BTreeSet<EdgeId>) -> Result<Self, GraphError> {
        if !self.has_vertex(u) {
            return Err(GraphError::InvalidMove(MoveRejection::UnknownVertex(
                u.into(),
            )));
        }
        if !self.has_vertex(v) {
            return Err(GraphError::InvalidMove(MoveRejection::UnknownVertex(
                v.into(),
            )));
        }
        if u == v {
            return Err(GraphError::InvalidMove(MoveRejection::IdenticalVertices));
        }
        for id in side {
            if self.edges.iter().all(|e| e.id != *id) {
                return Err(GraphError::InvalidMove(MoveRejection::UnknownEdge(
                    id.clone(),
                )));
            }
        }
        if self.legs.iter().any(|l| l.vertex == u || l.vertex == v) {
            return Err(GraphError::InvalidMove(MoveRejection::AmbiguousLeg));
        }
        // 2-separation: apart from u and v, the side subgraph and the rest
        // must not share a vertex.
        let mut side_interior: BTreeSet<&VertexId> = BTreeSet::new();
        let mut rest_interior: BTreeSet<&VertexId> = BTreeSet::new();
        for e in &self.edges {
            let target = if side.contains(&e.id) {
                &mut side_interior
            } else {
                &mut rest_interior
            };
            for end in [&e.ends.0, &e.ends.1] {
                if end != u && end != v {
                    target.insert(end);
                }
            }
        }
        if side_interior.intersection(&rest_interior).next().is_some() {
            return Err(GraphError::InvalidMove(MoveRejection::NotATwoSeparation));
        }
        let mut g = self.clone();
        for e in &mut g.edges {
            if side.contains(&e.id) {
                let flip = |w: &VertexId| {
                    if w == u {
                        v.to_string()
                    } else if w == v {
                        u.to_string()
                    } else {
                        w.clone()
                    }
                };
                e.ends = (flip(&e.ends.0), flip(&e.ends.1));
            }
        }
        Ok(g)
    }

    // Removes w together with its incident edges, keeping everything else.
    fn delete_vertex_for_branching(&self, w: &str) -> Self {
        let mut g = self.clone();
        g.edges.retain(|e| !e.touches(w));
        g.legs.retain(|l| l.vertex != w);
        g.vertices.retain(|v| v != w);
        g.masses
            .retain(|eid, _| g.edges.iter().any(|e| e.id == *eid));
        g
    }

    /// Disjoint union; the other graph's vertex names, edge ids, variable
    /// indices and momentum indices are shifted/prefixed so the invariants
    /// keep holding.
    pub fn disjoint_union(&self, other: &Self, prefix: &str) -> Self {
        let max_feyn = self
            .edges
            .iter()
            .map(|e| match e.var {
                EdgeVar::Feyn(i) => i,
                EdgeVar::Leg(_) => 0,
            })
            .max()
            .unwrap_or(0);
        let max_mom = self.max_momentum_index();
        let max_mass = self.masses.values().copied().max().unwrap_or(0);
        let mut g = self.clone();
        g.name = format!("{}+{}", self.name, other.name);
        for v in &other.vertices {
            g.vertices.push(format!("{prefix}{v}"));
        }
        for e in &other.edges {
            g.edges.push(Edge {
                id: format!("{prefix}{}", e.id),
                ends: (
                    format!("{prefix}{}", e.ends.0),
                    format!("{prefix}{}", e.ends.1),
                ),
                var: match e.var {
                    EdgeVar::Feyn(i) => EdgeVar::Feyn(i + max_feyn),
                    EdgeVar::Leg(j) => EdgeVar::Leg(j + max_mom),
                },
            });
        }
        for l in &other.legs {
            g.legs.push(Leg {
                momentum: l.momentum + max_mom,
                vertex: format!("{prefix}{}", l.vertex),
            });
        }
        for (eid, m) in &other.masses {
            g.masses.insert(format!("{prefix}{eid}"), m + max_mass);
        }
        g
    }

    /// Label-preserving isomorphism: a vertex bijection under which the two
    /// graphs carry the same edges (same ids, variables and masses), and the
    /// same legs. Exhaustive search with degree pruning; desk scale only.
    pub fn is_isomorphic(&self, other: &Self) -> bool {
        if self.vertices.len() != other.vertices.len()
            || self.edges.len() != other.edges.len()
            || self.legs.len() != other.legs.len()
            || self.masses != other.masses
        {
            return false;
        }
        let ids_a: BTreeSet<&EdgeId> = self.edges.iter().map(|e| &e.id).collect();
        let ids_b: BTreeSet<&EdgeId> = other.edges.iter().map(|e| &e.id).collect();
        if ids_a != ids_b {
            return false;
        }
        let mut mapping: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let mut used: BTreeSet<VertexId> = BTreeSet::new();
        self.match_vertices(other, 0, &mut mapping, &mut used)
    }

    fn match_vertices(
        &self,
        other: &Self,
        depth: usize,
        mapping: &mut BTreeMap<VertexId, VertexId>,
        used: &mut BTreeSet<VertexId>,
    ) -> bool {
        if depth == self.vertices.len() {
            return self.mapped_equals(other, mapping);
        }
        let v = self.vertices[depth].clone();
        let dv = self.incident_edges(&v).len();
        for w in &other.vertices {
            if used.contains(w) || other.incident_edges(w).len() != dv {
                continue;
            }
            mapping.insert(v.clone(), w.clone());
            used.insert(w.clone());
            if self.match_vertices(other, depth + 1, mapping, used) {
                return true;
            }
            mapping.remove(&v);
            used.remove(w);
        }
        false
    }

    fn mapped_equals(&self, other: &Self, mapping: &BTreeMap<VertexId, VertexId>) -> bool {
        for e in &self.edges {
            let Ok(f) = other.edge(&e.id) else {
                return false;
            };
            if e.var != f.var {
                return false;
            }
            let a = &mapping[&e.ends.0];
            let b = &mapping[&e.ends.1];
            let same = (*a == f.ends.0 && *b == f.ends.1) || (*a == f.ends.1 && *b == f.ends.0);
            if !same {
                return false;
            }
        }
        for l in &self.legs {
            if !other
                .legs
                .iter()
                .any(|m| m.momentum == l.momentum && m.vertex == mapping[&l.vertex])
            {
                return false;
            }
        }
        true
    }
}

/// One of the three matroid-preserving graph transformations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WhitneyMove {
    /// Merge two vertices from different components into one.
    Identify { u: VertexId, v: VertexId },
    /// Split a vertex in two, sending `part` of its incident edges to the
    /// fresh copy. The partition must group whole branches of `G - w`.
    Cleave { w: VertexId, part: BTreeSet<EdgeId> },
    /// Swap the attachments at `u` and `v` of a 2-separated edge set.
    Twist {
        u: VertexId,
        v: VertexId,
        side: BTreeSet<EdgeId>,
    },
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Union-find over a fixed vertex list; used by forest enumeration too.
pub(crate) fn acyclic_and_components(
    vertices: &[VertexId],
    edges: &[&Edge],
) -> Option<Vec<BTreeSet<VertexId>>> {
    let index: BTreeMap<&str, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let mut dsu = Dsu::new(vertices.len());
    for e in edges {
        let a = index[e.ends.0.as_str()];
        let b = index[e.ends.1.as_str()];
        if a == b || !dsu.union(a, b) {
            return None; // self-loop or cycle
        }
    }
    let mut by_root: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate() {
        by_root.entry(dsu.find(i)).or_default().insert(v.clone());
    }
    let mut comps: Vec<BTreeSet<VertexId>> = by_root.into_values().collect();
    comps.sort_by_key(|c| {
        vertices
            .iter()
            .position(|v| c.contains(v))
            .unwrap_or(usize::MAX)
    });
    Some(comps)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn bubble() -> FeynGraph {
        FeynGraph::from_parts(
            "bubble",
            &["v1", "v2"],
            &[("e1", "v1", "v2", 1), ("e2", "v1", "v2", 2)],
            &[(1, "v1"), (2, "v2")],
        )
        .unwrap()
    }

    pub(crate) fn triangle() -> FeynGraph {
        FeynGraph::from_parts(
            "triangle",
            &["a", "b", "c"],
            &[
                ("e1", "a", "b", 1),
                ("e2", "b", "c", 2),
                ("e3", "c", "a", 3),
            ],
            &[],
        )
        .unwrap()
    }

    pub(crate) fn fig1() -> FeynGraph {
        FeynGraph::from_parts(
            "fig1",
            &["v1", "v2", "v3", "v4"],
            &[
                ("e1", "v4", "v1", 1),
                ("e2", "v1", "v2", 2),
                ("e3", "v2", "v3", 3),
                ("e4", "v3", "v4", 4),
                ("e5", "v1", "v3", 5),
            ],
            &[(1, "v1"), (2, "v2"), (3, "v3"), (4, "v4")],
        )
        .unwrap()
    }

    fn two_triangles() -> FeynGraph {
        FeynGraph::from_parts(
            "two-triangles",
            &["a", "b", "c", "d", "e", "f"],
            &[
                ("e1", "a", "b", 1),
                ("e2", "b", "c", 2),
                ("e3", "c", "a", 3),
                ("e4", "d", "e", 4),
                ("e5", "e", "f", 5),
                ("e6", "f", "d", 6),
            ],
            &[],
        )
        .unwrap()
    }

    #[test]
    fn loop_number_is_derived() {
        assert_eq!(bubble().loop_number(), 1);
        assert_eq!(triangle().loop_number(), 1);
        assert_eq!(fig1().loop_number(), 2);
        assert_eq!(two_triangles().loop_number(), 2);
    }

    #[test]
    fn delete_keeps_vertices() {
        let g = bubble().delete_edge("e2").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.vertex_count(), 2);
        assert!(g.is_connected());

        let box4 = fig1().delete_edge("e5").unwrap();
        assert_eq!(box4.edge_count(), 4);
        assert_eq!(box4.loop_number(), 1);

        assert_eq!(
            bubble().delete_edge("nope"),
            Err(GraphError::UnknownEdge("nope".into()))
        );
    }

    #[test]
    fn delete_then_readd_is_isomorphic() {
        let g = bubble();
        let deleted = g.delete_edge("e2").unwrap();
        let mut edges: Vec<Edge> = deleted.edges().to_vec();
        edges.push(g.edge("e2").unwrap().clone());
        let readded = FeynGraph::new(
            "bubble",
            deleted.vertices().to_vec(),
            edges,
            deleted.legs().to_vec(),
            BTreeMap::new(),
        )
        .unwrap();
        assert!(readded.is_isomorphic(&g));
    }

    #[test]
    fn contraction_merges_and_reattaches() {
        let single =
            FeynGraph::from_parts("stick", &["v1", "v2"], &[("e1", "v1", "v2", 1)], &[]).unwrap();
        let point = single.contract_edge("e1").unwrap();
        assert_eq!(point.vertex_count(), 1);
        assert_eq!(point.edge_count(), 0);

        let looped = bubble().contract_edge("e1").unwrap();
        assert_eq!(looped.vertex_count(), 1);
        assert_eq!(looped.edge_count(), 1);
        assert!(looped.edge("e2").unwrap().is_self_loop());
        // both legs now sit on the merged vertex
        assert!(looped.legs().iter().all(|l| l.vertex == "v1"));

        let merged = fig1().contract_edge("e5").unwrap();
        assert_eq!(merged.vertex_count(), 3);
        assert_eq!(merged.edge_count(), 4);
        assert_eq!(merged.incident_edges("v1").len(), 4);
        assert_eq!(merged.loop_number(), 2);

        assert_eq!(
            looped.contract_edge("e2"),
            Err(GraphError::SelfLoopContraction("e2".into()))
        );
    }

    #[test]
    fn regular_edge_detection() {
        assert!(bubble().is_regular_edge("e1").unwrap());
        let single =
            FeynGraph::from_parts("stick", &["v1", "v2"], &[("e1", "v1", "v2", 1)], &[]).unwrap();
        assert!(!single.is_regular_edge("e1").unwrap()); // bridge
        let tadpole =
            FeynGraph::from_parts("tadpole", &["v1"], &[("e1", "v1", "v1", 1)], &[]).unwrap();
        assert!(!tadpole.is_regular_edge("e1").unwrap()); // self-loop
    }

    #[test]
    fn minors_shift_loop_number_as_expected() {
        for g in [bubble(), triangle(), fig1(), two_triangles()] {
            let l = g.loop_number();
            for e in g.regular_edges() {
                assert_eq!(g.contract_edge(&e).unwrap().loop_number(), l);
                assert_eq!(g.delete_edge(&e).unwrap().loop_number(), l - 1);
            }
        }
    }

    #[test]
    fn delete_contract_commute_on_disjoint_edges() {
        let g = fig1();
        for del in ["e1", "e2", "e3", "e4", "e5"] {
            for con in ["e1", "e2", "e3", "e4", "e5"] {
                if del == con {
                    continue;
                }
                let a = g.delete_edge(del).unwrap().contract_edge(con).unwrap();
                let b = g.contract_edge(con).unwrap().delete_edge(del).unwrap();
                assert_eq!(a, b, "commute failed for delete {del}, contract {con}");
            }
        }
    }

    #[test]
    fn extension_appends_external_block() {
        let g = bubble();
        let ext = g.extend_with_external_vertices();
        assert_eq!(ext.vertex_count(), 4);
        assert_eq!(ext.edge_count(), 4);
        assert!(ext.legs().is_empty());
        assert_eq!(
            &ext.vertices()[2..],
            &["ext1".to_string(), "ext2".to_string()]
        );

        let ext1 = fig1().extend_with_external_vertices();
        assert_eq!(ext1.vertex_count(), 8);
        assert_eq!(ext1.edge_count(), 9);

        let plain = triangle().extend_with_external_vertices();
        assert_eq!(plain.vertex_count(), 3);
        assert_eq!(plain.edge_count(), 3);
    }

    #[test]
    fn component_partitions() {
        assert_eq!(bubble().connected_components().len(), 1);
        assert_eq!(two_triangles().connected_components().len(), 2);
        let empty = FeynGraph::from_parts("empty", &[], &[], &[]).unwrap();
        assert!(empty.connected_components().is_empty());
    }

    #[test]
    fn identify_and_cleave_round_trip() {
        let g = two_triangles();
        let bowtie = g
            .apply_whitney_move(&WhitneyMove::Identify {
                u: "a".into(),
                v: "d".into(),
            })
            .unwrap();
        assert_eq!(bowtie.vertex_count(), 5);
        assert_eq!(bowtie.edge_count(), 6);
        assert!(bowtie.is_connected());
        assert_eq!(bowtie.loop_number(), 2);

        // cleaving the bowtie centre apart again gives two triangles back
        let part: BTreeSet<EdgeId> = ["e4".to_string(), "e6".to_string()].into();
        let split = bowtie
            .apply_whitney_move(&WhitneyMove::Cleave {
                w: "a".into(),
                part,
            })
            .unwrap();
        assert_eq!(split.connected_components().len(), 2);
        assert_eq!(split.edge_count(), 6);

        let same_comp = bowtie.apply_whitney_move(&WhitneyMove::Identify {
            u: "b".into(),
            v: "c".into(),
        });
        assert_eq!(
            same_comp,
            Err(GraphError::InvalidMove(MoveRejection::SameComponent))
        );
    }

    #[test]
    fn cleave_rejects_branch_splitting() {
        let bowtie = two_triangles()
            .apply_whitney_move(&WhitneyMove::Identify {
                u: "a".into(),
                v: "d".into(),
            })
            .unwrap();
        // e1 and e4 lie in different branches; separating e1 from e3 splits
        // the left triangle's branch.
        let bad: BTreeSet<EdgeId> = ["e1".to_string()].into();
        assert_eq!(
            bowtie.apply_whitney_move(&WhitneyMove::Cleave {
                w: "a".into(),
                part: bad
            }),
            Err(GraphError::InvalidMove(MoveRejection::NotACutVertex))
        );
    }

    #[test]
    fn twist_requires_two_separation() {
        // leg-free copy of the two-loop square: legs on u or v would be
        // rejected before the separation check runs
        let g = FeynGraph::from_parts(
            "square",
            &["v1", "v2", "v3", "v4"],
            &[
                ("e1", "v4", "v1", 1),
                ("e2", "v1", "v2", 2),
                ("e3", "v2", "v3", 3),
                ("e4", "v3", "v4", 4),
                ("e5", "v1", "v3", 5),
            ],
            &[],
        )
        .unwrap();
        // side {e2} has interior v2, which the rest also touches via e3
        let bad: BTreeSet<EdgeId> = ["e2".to_string()].into();
        assert_eq!(
            g.apply_whitney_move(&WhitneyMove::Twist {
                u: "v1".into(),
                v: "v3".into(),
                side: bad
            }),
            Err(GraphError::InvalidMove(MoveRejection::NotATwoSeparation))
        );

        // the two arcs of the box form a genuine 2-separation at {v1, v3}
        let side: BTreeSet<EdgeId> = ["e1".to_string(), "e4".to_string()].into();
        let twisted = g
            .apply_whitney_move(&WhitneyMove::Twist {
                u: "v1".into(),
                v: "v3".into(),
                side,
            })
            .unwrap();
        assert_eq!(twisted.edge_count(), g.edge_count());
        assert_eq!(twisted.loop_number(), g.loop_number());
        // e1 used to run v4-v1, now runs v4-v3
        let e1 = twisted.edge("e1").unwrap();
        assert!(e1.touches("v3") && e1.touches("v4"));
    }

    #[test]
    fn twist_rejects_legs_on_separating_pair() {
        let g = bubble();
        let side: BTreeSet<EdgeId> = ["e1".to_string()].into();
        assert_eq!(
            g.apply_whitney_move(&WhitneyMove::Twist {
                u: "v1".into(),
                v: "v2".into(),
                side
            }),
            Err(GraphError::InvalidMove(MoveRejection::AmbiguousLeg))
        );
    }

    #[test]
    fn whitney_moves_preserve_edge_labels_and_loops() {
        let g = two_triangles();
        let moved = g
            .apply_whitney_move(&WhitneyMove::Identify {
                u: "a".into(),
                v: "d".into(),
            })
            .unwrap();
        assert_eq!(moved.edge_count(), g.edge_count());
        assert_eq!(moved.loop_number(), g.loop_number());
        for e in g.edges() {
            assert_eq!(moved.edge(&e.id).unwrap().var, e.var);
        }
    }

    #[test]
    fn validation_rejects_duplicates() {
        assert!(FeynGraph::from_parts("bad", &["v", "v"], &[], &[]).is_err());
        assert!(FeynGraph::from_parts(
            "bad",
            &["v1", "v2"],
            &[("e1", "v1", "v2", 1), ("e1", "v1", "v2", 2)],
            &[]
        )
        .is_err());
        assert!(FeynGraph::from_parts(
            "bad",
            &["v1", "v2"],
            &[("e1", "v1", "v2", 1), ("e2", "v1", "v2", 1)],
            &[]
        )
        .is_err());
        assert!(FeynGraph::from_parts("bad", &["v1"], &[("e1", "v1", "v9", 1)], &[]).is_err());
    }
}
