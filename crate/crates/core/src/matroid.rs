//! Cycle matroids, matroid isomorphism, and the bridge between graph moves
//! and polynomial isomorphism.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;

use crate::atom::{Atom, Monomial};
use crate::coeff::Coeff;
use crate::graph::{EdgeId, FeynGraph, GraphError, WhitneyMove};
use crate::poly::{self, MultiPoly};
use crate::Poly;

/// Cycle matroid of a graph: the ground set is the edge set, the bases are
/// the edge sets of maximal spanning forests. For connected graphs these are
/// exactly the spanning trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleMatroid {
    pub ground: Vec<EdgeId>,
    pub bases: BTreeSet<BTreeSet<EdgeId>>,
    /// Edge variable of each ground element, for the basis polynomial.
    pub vars: BTreeMap<EdgeId, Atom>,
    /// Whether the source graph was connected; disconnected sources have
    /// bases that are unions of per-component spanning trees.
    pub source_connected: bool,
}

/// Builds the cycle matroid. A self-loop is a one-edge cycle, so it belongs
/// to no independent set.
pub fn cycle_matroid(g: &FeynGraph) -> CycleMatroid {
    let c = g.connected_components().len().max(1);
    let bases = crate::forest::enumerate_spanning_forests(g, c)
        .into_iter()
        .map(|f| f.edges)
        .collect();
    CycleMatroid {
        ground: g.edges().iter().map(|e| e.id.clone()).collect(),
        bases,
        vars: g
            .edges()
            .iter()
            .map(|e| (e.id.clone(), e.var.atom()))
            .collect(),
        source_connected: g.is_connected(),
    }
}

/// Downward closure of the bases.
pub fn independent_sets(m: &CycleMatroid) -> BTreeSet<BTreeSet<EdgeId>> {
    let mut out: BTreeSet<BTreeSet<EdgeId>> = BTreeSet::new();
    let mut frontier: Vec<BTreeSet<EdgeId>> = m.bases.iter().cloned().collect();
    while let Some(set) = frontier.pop() {
        if !out.insert(set.clone()) {
            continue;
        }
        for e in &set {
            let mut smaller = set.clone();
            smaller.remove(e);
            if !out.contains(&smaller) {
                frontier.push(smaller);
            }
        }
    }
    if out.is_empty() {
        out.insert(BTreeSet::new());
    }
    out
}

/// Basis-generating polynomial `sum over bases of the product of the base's
/// edge variables`. Coincides with the tree-side first polynomial on
/// connected graphs; the empty base contributes 1.
pub fn u_from_bases<C: Coeff>(m: &CycleMatroid) -> MultiPoly<C> {
    m.bases.iter().fold(MultiPoly::zero(), |acc, base| {
        acc + MultiPoly::from_term(
            Monomial::from_powers(base.iter().map(|e| (m.vars[e], 1))),
            C::one(),
        )
    })
}

/// Ground-set bijection carrying the bases of `m1` onto the bases of `m2`,
/// or `None`. Exhaustive search pruned by base-occurrence counts and
/// pairwise co-occurrence; the lexicographically least bijection is
/// returned.
pub fn matroid_isomorphic(
    m1: &CycleMatroid,
    m2: &CycleMatroid,
) -> Option<BTreeMap<EdgeId, EdgeId>> {
    if m1.ground.len() != m2.ground.len() || m1.bases.len() != m2.bases.len() {
        return None;
    }
    let rank1 = m1.bases.iter().next().map_or(0, |b| b.len());
    let rank2 = m2.bases.iter().next().map_or(0, |b| b.len());
    if rank1 != rank2 {
        return None;
    }
    let occ = |m: &CycleMatroid| -> BTreeMap<EdgeId, usize> {
        m.ground
            .iter()
            .map(|e| (e.clone(), m.bases.iter().filter(|b| b.contains(e)).count()))
            .collect()
    };
    let occ1 = occ(m1);
    let occ2 = occ(m2);
    {
        let mut c1: Vec<usize> = occ1.values().copied().collect();
        let mut c2: Vec<usize> = occ2.values().copied().collect();
        c1.sort_unstable();
        c2.sort_unstable();
        if c1 != c2 {
            return None;
        }
    }
    let cooc = |m: &CycleMatroid| -> HashMap<(EdgeId, EdgeId), usize> {
        let mut counts = HashMap::new();
        for b in &m.bases {
            let elems: Vec<&EdgeId> = b.iter().collect();
            for (i, e) in elems.iter().enumerate() {
                for f in &elems[i + 1..] {
                    counts
                        .entry(((*e).clone(), (*f).clone()))
                        .and_modify(|c| *c += 1)
                        .or_insert(1usize);
                }
            }
        }
        counts
    };
    let cooc1 = cooc(m1);
    let cooc2 = cooc(m2);

    let mut ground1: Vec<EdgeId> = m1.ground.clone();
    ground1.sort();
    let mut ground2: Vec<EdgeId> = m2.ground.clone();
    ground2.sort();

    let mut assignment: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    search(
        m1,
        m2,
        &ground1,
        &ground2,
        &occ1,
        &occ2,
        &cooc1,
        &cooc2,
        0,
        &mut assignment,
        &mut used,
    )
}

fn pair_count(counts: &HashMap<(EdgeId, EdgeId), usize>, a: &EdgeId, b: &EdgeId) -> usize {
    let key = if a < b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    counts.get(&key).copied().unwrap_or(0)
}

#[allow(clippy::too_many_arguments)]
fn search(
    m1: &CycleMatroid,
    m2: &CycleMatroid,
    ground1: &[EdgeId],
    ground2: &[EdgeId],
    occ1: &BTreeMap<EdgeId, usize>,
    occ2: &BTreeMap<EdgeId, usize>,
    cooc1: &HashMap<(EdgeId, EdgeId), usize>,
    cooc2: &HashMap<(EdgeId, EdgeId), usize>,
    depth: usize,
    assignment: &mut BTreeMap<EdgeId, EdgeId>,
    used: &mut BTreeSet<EdgeId>,
) -> Option<BTreeMap<EdgeId, EdgeId>> {
    if depth == ground1.len() {
        let mapped: BTreeSet<BTreeSet<EdgeId>> = m1
            .bases
            .iter()
            .map(|b| b.iter().map(|e| assignment[e].clone()).collect())
            .collect();
        return (mapped == m2.bases).then(|| assignment.clone());
    }
    let e = &ground1[depth];
    for f in ground2 {
        if used.contains(f) || occ1[e] != occ2[f] {
            continue;
        }
        let consistent = assignment
            .iter()
            .all(|(a, b)| pair_count(cooc1, e, a) == pair_count(cooc2, f, b));
        if !consistent {
            continue;
        }
        assignment.insert(e.clone(), f.clone());
        used.insert(f.clone());
        if let Some(found) = search(
            m1,
            m2,
            ground1,
            ground2,
            occ1,
            occ2,
            cooc1,
            cooc2,
            depth + 1,
            assignment,
            used,
        ) {
            return Some(found);
        }
        assignment.remove(e);
        used.remove(f);
    }
    None
}

/// Exhaustive base-exchange check: for bases `B1 != B2` and `e` in `B1 - B2`
/// there must be an `f` in `B2 - B1` with `B1 - e + f` again a base.
pub fn verify_base_exchange(m: &CycleMatroid) -> bool {
    for b1 in &m.bases {
        for b2 in &m.bases {
            if b1 == b2 {
                continue;
            }
            for e in b1.difference(b2) {
                let found = b2.difference(b1).any(|f| {
                    let mut candidate = b1.clone();
                    candidate.remove(e);
                    candidate.insert(f.clone());
                    m.bases.contains(&candidate)
                });
                if !found {
                    return false;
                }
            }
        }
    }
    true
}

/// Outcome of a Whitney experiment: the moved graph, and the two bijections
/// the 2-isomorphism theorem predicts.
#[derive(Clone, Debug)]
pub struct WhitneyReport {
    pub transformed: FeynGraph,
    pub matroid_bijection: Option<BTreeMap<EdgeId, EdgeId>>,
    pub u_bijection: Option<BTreeMap<u32, u32>>,
}

impl WhitneyReport {
    pub fn both_found(&self) -> bool {
        self.matroid_bijection.is_some() && self.u_bijection.is_some()
    }
}

/// Applies the moves in sequence, then compares cycle matroids and basis
/// polynomials of the original and transformed graphs. Isolated vertices
/// are stripped before comparison, and legs are ignored (matroids see only
/// internal edges).
pub fn whitney_equivalence_check(
    g: &FeynGraph,
    moves: &[WhitneyMove],
) -> Result<WhitneyReport, GraphError> {
    let mut moved = g.clone();
    for mv in moves {
        moved = moved.apply_whitney_move(mv)?;
    }
    let m1 = cycle_matroid(&g.strip_isolated_vertices());
    let m2 = cycle_matroid(&moved.strip_isolated_vertices());
    let matroid_bijection = matroid_isomorphic(&m1, &m2);
    let u1: Poly = u_from_bases::<BigInt>(&m1);
    let u2: Poly = u_from_bases::<BigInt>(&m2);
    let u_bijection = poly::find_variable_isomorphism(&u1, &u2);
    Ok(WhitneyReport {
        transformed: moved,
        matroid_bijection,
        u_bijection,
    })
}
