//! Seeded random multigraph generation for cross-oracle sweeps.
//!
//! Connected graphs are grown from a random spanning tree; extra edges may
//! duplicate existing pairs or close self-loops, so parallel edges and
//! tadpoles appear with healthy frequency.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{EdgeId, FeynGraph, WhitneyMove};

#[derive(Clone, Debug)]
pub struct GraphGenConfig {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_legs: u32,
    /// Probability (percent) that an edge carries a mass.
    pub mass_percent: u32,
}

impl Default for GraphGenConfig {
    fn default() -> Self {
        GraphGenConfig {
            max_vertices: 6,
            max_edges: 7,
            max_legs: 4,
            mass_percent: 25,
        }
    }
}

/// Deterministic generator over a fixed seed.
pub fn rng_for_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random connected multigraph within the configured bounds.
pub fn random_connected_graph<R: Rng>(rng: &mut R, cfg: &GraphGenConfig) -> FeynGraph {
    let r = rng.gen_range(1..=cfg.max_vertices);
    let vertices: Vec<String> = (1..=r).map(|i| format!("v{i}")).collect();
    let mut edges: Vec<(String, String)> = Vec::new();
    // random spanning tree first
    for i in 1..r {
        let parent = rng.gen_range(0..i);
        edges.push((vertices[parent].clone(), vertices[i].clone()));
    }
    let extra_budget = cfg.max_edges.saturating_sub(edges.len());
    let extras = rng.gen_range(0..=extra_budget);
    for _ in 0..extras {
        let a = rng.gen_range(0..r);
        // 1-in-5 chance of a self-loop
        let b = if rng.gen_range(0..5) == 0 {
            a
        } else {
            rng.gen_range(0..r)
        };
        edges.push((vertices[a].clone(), vertices[b].clone()));
    }
    let legs = rng.gen_range(0..=cfg.max_legs);
    let leg_list: Vec<(u32, String)> = (1..=legs)
        .map(|j| (j, vertices[rng.gen_range(0..r)].clone()))
        .collect();

    let mut masses: BTreeMap<EdgeId, u32> = BTreeMap::new();
    for (idx, _) in edges.iter().enumerate() {
        if rng.gen_range(0..100) < cfg.mass_percent {
            masses.insert(format!("e{}", idx + 1), idx as u32 + 1);
        }
    }

    let edge_specs: Vec<(String, String, String, u32)> = edges
        .into_iter()
        .enumerate()
        .map(|(idx, (a, b))| (format!("e{}", idx + 1), a, b, idx as u32 + 1))
        .collect();
    let edge_refs: Vec<(&str, &str, &str, u32)> = edge_specs
        .iter()
        .map(|(id, a, b, v)| (id.as_str(), a.as_str(), b.as_str(), *v))
        .collect();
    let leg_refs: Vec<(u32, &str)> = leg_list.iter().map(|(j, v)| (*j, v.as_str())).collect();
    let vertex_refs: Vec<&str> = vertices.iter().map(|v| v.as_str()).collect();

    FeynGraph::from_parts("random", &vertex_refs, &edge_refs, &leg_refs)
        .expect("generated graph is well formed")
        .with_masses(masses)
        .expect("generated masses are well formed")
}

/// Which kind of Whitney instance to construct.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhitneyKind {
    Identify,
    Cleave,
    Twist,
}

/// Builds a (graph, valid move) pair of the requested kind. Instances are
/// assembled constructively, so the move always satisfies its precondition:
/// identification acts on a disjoint union, cleaving undoes a one-point
/// gluing, and twisting acts on a two-point gluing.
pub fn random_whitney_instance<R: Rng>(rng: &mut R, kind: WhitneyKind) -> (FeynGraph, WhitneyMove) {
    let cfg = GraphGenConfig {
        max_vertices: 4,
        max_edges: 5,
        max_legs: 0,
        mass_percent: 0,
    };
    let g1 = random_connected_graph(rng, &cfg);
    let g2 = random_connected_graph(rng, &cfg);
    let union = g1.disjoint_union(&g2, "w_");
    let pick = |rng: &mut R, names: &[String]| names[rng.gen_range(0..names.len())].clone();
    let left: Vec<String> = g1.vertices().to_vec();
    let right: Vec<String> = g2.vertices().iter().map(|v| format!("w_{v}")).collect();
    let right_edges: BTreeSet<EdgeId> = g2.edges().iter().map(|e| format!("w_{}", e.id)).collect();

    match kind {
        WhitneyKind::Identify => {
            let u = pick(rng, &left);
            let v = pick(rng, &right);
            (union, WhitneyMove::Identify { u, v })
        }
        WhitneyKind::Cleave => {
            // glue at one vertex, then cleave the glued vertex back apart
            let u = pick(rng, &left);
            let v = pick(rng, &right);
            let glued = union
                .apply_whitney_move(&WhitneyMove::Identify { u: u.clone(), v })
                .expect("identification of disjoint components");
            let part: BTreeSet<EdgeId> = glued
                .incident_edges(&u)
                .iter()
                .filter(|e| right_edges.contains(&e.id))
                .map(|e| e.id.clone())
                .collect();
            if part.is_empty() || part.len() == glued.incident_edges(&u).len() {
                // the glued vertex has edges on one side only; fall back to
                // an identification instance
                return random_whitney_instance(rng, WhitneyKind::Identify);
            }
            (glued, WhitneyMove::Cleave { w: u, part })
        }
        WhitneyKind::Twist => {
            if g1.vertex_count() < 2 || g2.vertex_count() < 2 {
                return random_whitney_instance(rng, WhitneyKind::Twist);
            }
            let u = pick(rng, &left);
            let v = {
                let mut v = pick(rng, &left);
                while v == u {
                    v = pick(rng, &left);
                }
                v
            };
            let u2 = pick(rng, &right);
            let v2 = {
                let mut v2 = pick(rng, &right);
                while v2 == u2 {
                    v2 = pick(rng, &right);
                }
                v2
            };
            // the second merge is a two-point gluing, not an identification
            // of components, so it goes through the raw merge
            let glued = union
                .apply_whitney_move(&WhitneyMove::Identify {
                    u: u.clone(),
                    v: u2,
                })
                .expect("first gluing")
                .merge_vertices(&v, &v2)
                .expect("second gluing");
            (
                glued,
                WhitneyMove::Twist {
                    u,
                    v,
                    side: right_edges,
                },
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic_per_seed() {
        let cfg = GraphGenConfig::default();
        let a: Vec<FeynGraph> = {
            let mut rng = rng_for_seed(99);
            (0..10)
                .map(|_| random_connected_graph(&mut rng, &cfg))
                .collect()
        };
        let b: Vec<FeynGraph> = {
            let mut rng = rng_for_seed(99);
            (0..10)
                .map(|_| random_connected_graph(&mut rng, &cfg))
                .collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn generated_graphs_are_connected_and_bounded() {
        let cfg = GraphGenConfig::default();
        let mut rng = rng_for_seed(3);
        let mut saw_self_loop = false;
        let mut saw_parallel = false;
        for _ in 0..100 {
            let g = random_connected_graph(&mut rng, &cfg);
            assert!(g.is_connected());
            assert!(g.vertex_count() <= cfg.max_vertices);
            assert!(g.edge_count() <= cfg.max_edges);
            saw_self_loop |= g.edges().iter().any(|e| e.is_self_loop());
            saw_parallel |= g.edges().iter().enumerate().any(|(i, e)| {
                g.edges().iter().skip(i + 1).any(|f| {
                    !e.is_self_loop()
                        && ((e.ends == f.ends) || (e.ends.0 == f.ends.1 && e.ends.1 == f.ends.0))
                })
            });
        }
        assert!(saw_self_loop && saw_parallel);
    }

    #[test]
    fn whitney_instances_are_valid() {
        let mut rng = rng_for_seed(17);
        for kind in [
            WhitneyKind::Identify,
            WhitneyKind::Cleave,
            WhitneyKind::Twist,
        ] {
            for _ in 0..5 {
                let (g, mv) = random_whitney_instance(&mut rng, kind);
                g.apply_whitney_move(&mv).expect("constructed move applies");
            }
        }
    }
}
