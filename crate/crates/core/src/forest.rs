//! Spanning-forest enumeration and the forest-side graph polynomials.
//!
//! Enumeration walks edge subsets of the required cardinality and keeps the
//! acyclic ones. This brute-force route is deliberately independent of the
//! determinant route in `laplacian`, so the two can serve as oracles for one
//! another.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use thiserror::Error;

use crate::atom::Monomial;
use crate::coeff::Coeff;
use crate::graph::{acyclic_and_components, EdgeId, FeynGraph, VertexId};
use crate::poly::MultiPoly;
use crate::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ForestError {
    #[error("graph must be connected")]
    Disconnected,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("the three marked vertices must be distinct")]
    VerticesNotDistinct,
    #[error("edge `{0}` is not regular (self-loop or bridge)")]
    NotRegularEdge(String),
}

/// A spanning forest: an acyclic edge set covering every vertex of the host
/// graph, together with the vertex partition it induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningForest {
    pub edges: BTreeSet<EdgeId>,
    pub components: Vec<BTreeSet<VertexId>>,
}

/// Kinematic invariant of a spanning 2-forest: the squared momentum flowing
/// between the two components, expanded into dot atoms after momentum
/// conservation eliminated the highest momentum index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KinematicInvariant<C: Coeff> {
    pub expansion: MultiPoly<C>,
}

/// All spanning `k`-forests, in the deterministic order induced by the edge
/// list. A `k`-forest on `r` vertices has exactly `r - k` edges; the list is
/// empty when no such forest exists.
pub fn enumerate_spanning_forests(g: &FeynGraph, k: usize) -> Vec<SpanningForest> {
    assert!(k >= 1, "a spanning forest has at least one component");
    let r = g.vertex_count();
    if k > r {
        return Vec::new();
    }
    let picks = r - k;
    if picks > g.edge_count() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for subset in g.edges().iter().combinations(picks) {
        if let Some(components) = acyclic_and_components(g.vertices(), &subset) {
            debug_assert_eq!(components.len(), k);
            out.push(SpanningForest {
                edges: subset.iter().map(|e| e.id.clone()).collect(),
                components,
            });
        }
    }
    out
}

fn forest_monomial(g: &FeynGraph, in_forest: bool, f: &SpanningForest) -> Monomial {
    Monomial::from_powers(
        g.edges()
            .iter()
            .filter(|e| f.edges.contains(&e.id) == in_forest)
            .map(|e| (e.var.atom(), 1)),
    )
}

/// Tree-side first polynomial `U`: one monomial per spanning tree, built
/// from the edges belonging to the tree. Zero when no spanning tree exists.
pub fn first_symanzik_u<C: Coeff>(g: &FeynGraph) -> MultiPoly<C> {
    enumerate_spanning_forests(g, 1)
        .iter()
        .fold(MultiPoly::zero(), |acc, t| {
            acc + MultiPoly::from_term(forest_monomial(g, true, t), C::one())
        })
}

/// Complement-side sum over spanning trees as a total function: the empty
/// sum makes it vanish on graphs without a spanning tree. The identity
/// machinery needs this convention for minors that fall apart.
pub fn calu_total<C: Coeff>(g: &FeynGraph) -> MultiPoly<C> {
    enumerate_spanning_forests(g, 1)
        .iter()
        .fold(MultiPoly::zero(), |acc, t| {
            acc + MultiPoly::from_term(forest_monomial(g, false, t), C::one())
        })
}

/// First Symanzik polynomial: one monomial per spanning tree, built from the
/// edges removed to obtain the tree.
pub fn first_symanzik_calu<C: Coeff>(g: &FeynGraph) -> Result<MultiPoly<C>, ForestError> {
    if !g.is_connected() {
        return Err(ForestError::Disconnected);
    }
    Ok(calu_total(g))
}

/// Squared momentum cut by a spanning 2-forest. The momenta are summed over
/// the legs attached to the forest's first component; conservation makes the
/// choice of side irrelevant.
pub fn kinematic_invariant<C: Coeff>(g: &FeynGraph, f: &SpanningForest) -> KinematicInvariant<C> {
    assert_eq!(
        f.components.len(),
        2,
        "kinematic invariant needs a 2-forest"
    );
    let basis = MomentumBasis::of(g);
    let side = &f.components[0];
    let mut flow: BTreeMap<u32, i64> = BTreeMap::new();
    for leg in g.legs() {
        if side.contains(&leg.vertex) {
            *flow.entry(leg.momentum).or_default() += 1;
        }
    }
    let reduced = basis.reduce(&flow);
    KinematicInvariant {
        expansion: basis.bilinear(&reduced, &reduced),
    }
}

/// Conservation basis over the momenta actually present on a graph's legs:
/// the largest present index is eliminated against the others. Leg indices
/// need not be contiguous.
pub(crate) struct MomentumBasis {
    kept: Vec<u32>,
    pivot: Option<u32>,
}

impl MomentumBasis {
    pub(crate) fn of(g: &FeynGraph) -> Self {
        let mut present: Vec<u32> = g.legs().iter().map(|l| l.momentum).collect();
        present.sort_unstable();
        let pivot = present.pop();
        MomentumBasis {
            kept: present,
            pivot,
        }
    }

    // Substitutes p_pivot = -(sum of the kept momenta).
    fn reduce(&self, flow: &BTreeMap<u32, i64>) -> BTreeMap<u32, i64> {
        let mut reduced: BTreeMap<u32, i64> = BTreeMap::new();
        for (&j, &c) in flow {
            if Some(j) == self.pivot {
                for &k in &self.kept {
                    *reduced.entry(k).or_default() -= c;
                }
            } else {
                debug_assert!(self.kept.contains(&j), "momentum p{j} is not a leg");
                *reduced.entry(j).or_default() += c;
            }
        }
        reduced.retain(|_, c| *c != 0);
        reduced
    }

    // Expands the product of two reduced momentum combinations into dot atoms.
    fn bilinear<C: Coeff>(&self, a: &BTreeMap<u32, i64>, b: &BTreeMap<u32, i64>) -> MultiPoly<C> {
        let mut out = MultiPoly::zero();
        for (&s, &ca) in a {
            for (&t, &cb) in b {
                let c = ca * cb;
                if c != 0 {
                    out += &MultiPoly::dot(s, t).scale(&C::from_i64(c).unwrap());
                }
            }
        }
        out
    }

    /// Dot product `p_i . p_j` expanded in the conservation basis.
    pub(crate) fn dot<C: Coeff>(&self, i: u32, j: u32) -> MultiPoly<C> {
        let unit = |k: u32| self.reduce(&BTreeMap::from([(k, 1)]));
        self.bilinear(&unit(i), &unit(j))
    }
}

// Tree-side second polynomial as a total sum over spanning 2-forests.
fn f0_side_sum<C: Coeff>(g: &FeynGraph, in_forest: bool) -> MultiPoly<C> {
    let mut out = MultiPoly::zero();
    for f in enumerate_spanning_forests(g, 2) {
        let s = kinematic_invariant::<C>(g, &f).expansion;
        let term = MultiPoly::from_term(forest_monomial(g, in_forest, &f), C::one());
        out -= &(term * s);
    }
    out
}

/// Complement-side second polynomial as a total function (see [`calu_total`]).
pub fn calf0_total<C: Coeff>(g: &FeynGraph) -> MultiPoly<C> {
    f0_side_sum(g, false)
}

/// Tree-side second polynomial as a total function.
pub fn f0_total<C: Coeff>(g: &FeynGraph) -> MultiPoly<C> {
    f0_side_sum(g, true)
}

/// Tree-side `F0`: sum over spanning 2-forests of the in-forest edge product
/// times the negated cut invariant.
pub fn second_symanzik_f0<C: Coeff>(g: &FeynGraph) -> Result<MultiPoly<C>, ForestError> {
    if !g.is_connected() {
        return Err(ForestError::Disconnected);
    }
    Ok(f0_side_sum(g, true))
}

/// Second Symanzik polynomial without the mass term, generated by the edges
/// removed to obtain each spanning 2-forest.
pub fn second_symanzik_calf0<C: Coeff>(g: &FeynGraph) -> Result<MultiPoly<C>, ForestError> {
    if !g.is_connected() {
        return Err(ForestError::Disconnected);
    }
    Ok(f0_side_sum(g, false))
}

/// Full second Symanzik polynomial including masses:
/// `calF0 + calU * sum_i x_i * msq_i` over the edges carrying a mass.
pub fn full_f<C: Coeff>(g: &FeynGraph) -> Result<MultiPoly<C>, ForestError> {
    let calf0 = second_symanzik_calf0::<C>(g)?;
    let calu = first_symanzik_calu::<C>(g)?;
    let mut mass_sum = MultiPoly::zero();
    for e in g.edges() {
        if let Some(m) = g.masses().get(&e.id) {
            mass_sum += &(MultiPoly::from_atom(e.var.atom()) * MultiPoly::mass(*m));
        }
    }
    Ok(calf0 + calu * mass_sum)
}

/// Sum over spanning 2-forests separating `vi, vj` from `vk` of the
/// complement edge product. Linear in every Feynman parameter.
pub fn delta1<C: Coeff>(
    g: &FeynGraph,
    vi: &str,
    vj: &str,
    vk: &str,
) -> Result<MultiPoly<C>, ForestError> {
    for v in [vi, vj, vk] {
        if !g.has_vertex(v) {
            return Err(ForestError::UnknownVertex(v.to_string()));
        }
    }
    if vi == vj || vi == vk || vj == vk {
        return Err(ForestError::VerticesNotDistinct);
    }
    if !g.is_connected() {
        return Err(ForestError::Disconnected);
    }
    let mut out = MultiPoly::zero();
    for f in enumerate_spanning_forests(g, 2) {
        let apart = f
            .components
            .iter()
            .find(|c| !c.contains(vk))
            .expect("2-forest has two components");
        if apart.contains(vi) && apart.contains(vj) {
            out += &MultiPoly::from_term(forest_monomial(g, false, &f), C::one());
        }
    }
    Ok(out)
}

/// Verifies both deletion-contraction recursions for a regular edge:
/// `calU(G) = calU(G/e) + x_e * calU(G-e)` and the same shape for `calF0`.
pub fn deletion_contraction_check(g: &FeynGraph, e: &str) -> Result<bool, ForestError> {
    let edge = g
        .edge(e)
        .map_err(|_| ForestError::UnknownEdge(e.to_string()))?
        .clone();
    if !g
        .is_regular_edge(e)
        .map_err(|_| ForestError::UnknownEdge(e.to_string()))?
    {
        return Err(ForestError::NotRegularEdge(e.to_string()));
    }
    let contracted = g.contract_edge(e).expect("regular edge contracts");
    let deleted = g.delete_edge(e).expect("edge exists");
    let x = Poly::from_atom(edge.var.atom());

    let u_ok = calu_total::<num_bigint::BigInt>(g)
        == calu_total(&contracted) + x.clone() * calu_total(&deleted);
    let f_ok = calf0_total::<num_bigint::BigInt>(g)
        == calf0_total(&contracted) + x * calf0_total(&deleted);
    Ok(u_ok && f_ok)
}
