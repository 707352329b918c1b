//! Dodgson's determinant relation and the derived factorisation identities
//! between first and second Symanzik polynomials.
//!
//! The graph-side identities are evaluated entirely through forest sums, so
//! they stay independent of the determinant machinery they originate from;
//! `dodgson_determinant_check` exercises the raw matrix relation separately.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use thiserror::Error;

use crate::coeff::Coeff;
use crate::forest;
use crate::graph::{EdgeId, EdgeVar, FeynGraph, VertexId};
use crate::laplacian::PolyMatrix;
use crate::poly::PolyError;
use crate::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DodgsonError {
    #[error("invalid setup: {0}")]
    InvalidSetup(String),
    #[error("degenerate setup: the constrained forest polynomial vanishes")]
    DegenerateDelta1,
    #[error("row/column indices out of range or equal")]
    IndexError,
    #[error("identity violated: {0}")]
    NotDivisible(#[from] PolyError),
}

/// Two regular edges sharing exactly one vertex: `ea` joins `vi` to `vk`,
/// `eb` joins `vj` to `vk`, with `vi != vj`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DodgsonSetup {
    pub graph: FeynGraph,
    pub ea: EdgeId,
    pub eb: EdgeId,
    pub vi: VertexId,
    pub vj: VertexId,
    pub vk: VertexId,
}

impl DodgsonSetup {
    /// Infers the vertex roles from the two edges. The shared endpoint
    /// becomes `vk`; parallel edges (sharing both ends) are rejected.
    pub fn new(graph: &FeynGraph, ea: &str, eb: &str) -> Result<Self, DodgsonError> {
        if ea == eb {
            return Err(DodgsonError::InvalidSetup("edges must be distinct".into()));
        }
        let a = graph
            .edge(ea)
            .map_err(|e| DodgsonError::InvalidSetup(e.to_string()))?
            .clone();
        let b = graph
            .edge(eb)
            .map_err(|e| DodgsonError::InvalidSetup(e.to_string()))?
            .clone();
        for id in [ea, eb] {
            if !graph
                .is_regular_edge(id)
                .map_err(|e| DodgsonError::InvalidSetup(e.to_string()))?
            {
                return Err(DodgsonError::InvalidSetup(format!(
                    "edge `{id}` is not regular"
                )));
            }
        }
        let ends_a = [a.ends.0.clone(), a.ends.1.clone()];
        let ends_b = [b.ends.0.clone(), b.ends.1.clone()];
        let shared: Vec<&VertexId> = ends_a.iter().filter(|v| ends_b.contains(v)).collect();
        match shared.len() {
            1 => {}
            0 => {
                return Err(DodgsonError::InvalidSetup(
                    "edges do not share a vertex".into(),
                ))
            }
            _ => {
                return Err(DodgsonError::InvalidSetup(
                    "edges are parallel; the free endpoints must differ".into(),
                ))
            }
        }
        let vk = shared[0].clone();
        let vi = ends_a.iter().find(|v| **v != vk).unwrap().clone();
        let vj = ends_b.iter().find(|v| **v != vk).unwrap().clone();
        if vi == vj {
            return Err(DodgsonError::InvalidSetup("free endpoints coincide".into()));
        }
        Ok(DodgsonSetup {
            graph: graph.clone(),
            ea: ea.to_string(),
            eb: eb.to_string(),
            vi,
            vj,
            vk,
        })
    }

    fn edge_var_product(&self) -> Poly {
        let xa = Poly::from_atom(self.graph.edge(&self.ea).unwrap().var.atom());
        let xb = Poly::from_atom(self.graph.edge(&self.eb).unwrap().var.atom());
        xa * xb
    }

    // The four minors entering both identities.
    fn minors(&self) -> [FeynGraph; 4] {
        let g = &self.graph;
        let contract_a_delete_b = g
            .contract_edge(&self.ea)
            .expect("regular edge contracts")
            .delete_edge(&self.eb)
            .expect("edge exists");
        let contract_b_delete_a = g
            .contract_edge(&self.eb)
            .expect("regular edge contracts")
            .delete_edge(&self.ea)
            .expect("edge exists");
        let delete_both = g
            .delete_edge(&self.ea)
            .expect("edge exists")
            .delete_edge(&self.eb)
            .expect("edge exists");
        let contract_both = g
            .contract_edge(&self.ea)
            .expect("regular edge contracts")
            .contract_edge(&self.eb)
            .expect("shared-vertex partner stays contractible");
        [
            contract_a_delete_b,
            contract_b_delete_a,
            delete_both,
            contract_both,
        ]
    }
}

/// Raw determinant relation
/// `det(A) det(A[i,j]) = det(A[i]) det(A[j]) - det(A[i;j]) det(A[j;i])`
/// for any square matrix and two distinct indices (0-based).
pub fn dodgson_determinant_check<C: Coeff>(
    a: &PolyMatrix<C>,
    i: usize,
    j: usize,
) -> Result<bool, DodgsonError> {
    let n = a.dim();
    if i == j || i >= n || j >= n || n < 2 {
        return Err(DodgsonError::IndexError);
    }
    let one = |r: usize, c: usize| a.minor(&BTreeSet::from([r]), &BTreeSet::from([c]));
    let both = a.minor(&BTreeSet::from([i, j]), &BTreeSet::from([i, j]));
    let lhs = a.det() * both.det();
    let rhs = one(i, i).det() * one(j, j).det() - one(i, j).det() * one(j, i).det();
    Ok(lhs == rhs)
}

/// Outcome of the first-polynomial identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DodgsonUReport {
    /// `calU(G/ea-eb) calU(G/eb-ea) - calU(G-ea-eb) calU(G/ea/eb)`.
    pub lhs: Poly,
    /// `delta1 / (xa xb)`, extracted by exact division.
    pub delta1_quotient: Poly,
    pub holds: bool,
}

/// Checks `lhs = (delta1/(xa xb))^2` with `delta1` computed from constrained
/// spanning 2-forests. Disconnected minors contribute a vanishing
/// first polynomial, which the forest sum produces on its own.
pub fn dodgson_u_identity(setup: &DodgsonSetup) -> Result<DodgsonUReport, DodgsonError> {
    let [ca_db, cb_da, d_ab, c_ab] = setup.minors();
    let u = forest::calu_total::<BigInt>;
    let lhs = u(&ca_db) * u(&cb_da) - u(&d_ab) * u(&c_ab);

    let delta1 = forest::delta1::<BigInt>(&setup.graph, &setup.vi, &setup.vj, &setup.vk)
        .map_err(|e| DodgsonError::InvalidSetup(e.to_string()))?;
    let delta1_quotient = delta1.exact_div(&setup.edge_var_product())?;
    let holds = lhs == delta1_quotient.pow(2);
    Ok(DodgsonUReport {
        lhs,
        delta1_quotient,
        holds,
    })
}

/// Outcome of the mixed identity relating first and second polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DodgsonMixedReport {
    pub lhs: Poly,
    /// `delta2 / (xa xb)`; `None` when the extraction division fails, which
    /// would falsify the identity.
    pub delta2_quotient: Option<Poly>,
    pub holds: bool,
    /// Leg-free setups reduce to `0 = 0` and report a zero quotient.
    pub trivially_zero: bool,
}

/// Evaluates the four-term combination of first and second polynomials and
/// extracts `delta2/(xa xb)` by exact division against `2 delta1/(xa xb)`.
/// Holds when the division is exact and the recovered polynomial is linear
/// in every Feynman parameter.
pub fn dodgson_mixed_identity(setup: &DodgsonSetup) -> Result<DodgsonMixedReport, DodgsonError> {
    let [ca_db, cb_da, d_ab, c_ab] = setup.minors();
    let u = forest::calu_total::<BigInt>;
    let f = forest::calf0_total::<BigInt>;
    let lhs =
        u(&ca_db) * f(&cb_da) - u(&d_ab) * f(&c_ab) + f(&ca_db) * u(&cb_da) - f(&d_ab) * u(&c_ab);

    if setup.graph.legs().is_empty() {
        debug_assert!(lhs.is_zero());
        return Ok(DodgsonMixedReport {
            lhs,
            delta2_quotient: Some(Poly::zero()),
            holds: true,
            trivially_zero: true,
        });
    }

    let delta1 = forest::delta1::<BigInt>(&setup.graph, &setup.vi, &setup.vj, &setup.vk)
        .map_err(|e| DodgsonError::InvalidSetup(e.to_string()))?;
    if delta1.is_zero() {
        return Err(DodgsonError::DegenerateDelta1);
    }
    let xab = setup.edge_var_product();
    let delta1_quotient = delta1.exact_div(&xab)?;
    let divisor = delta1_quotient.scale(&BigInt::from(2));

    let feyn_vars: Vec<u32> = setup
        .graph
        .edges()
        .iter()
        .filter_map(|e| match e.var {
            EdgeVar::Feyn(i) => Some(i),
            EdgeVar::Leg(_) => None,
        })
        .collect();

    match lhs.exact_div(&divisor) {
        Ok(quotient) => {
            let delta2 = &quotient * &xab;
            let holds = delta2.is_multilinear(&feyn_vars);
            Ok(DodgsonMixedReport {
                lhs,
                delta2_quotient: Some(quotient),
                holds,
                trivially_zero: false,
            })
        }
        Err(PolyError::NotDivisible) => Ok(DodgsonMixedReport {
            lhs,
            delta2_quotient: None,
            holds: false,
            trivially_zero: false,
        }),
        Err(e) => Err(e.into()),
    }
}

/// All distinct shared-vertex pairs of regular edges that form valid setups.
pub fn valid_setups(g: &FeynGraph) -> Vec<DodgsonSetup> {
    let regular = g.regular_edges();
    let mut out = Vec::new();
    for (i, ea) in regular.iter().enumerate() {
        for eb in regular.iter().skip(i + 1) {
            if let Ok(setup) = DodgsonSetup::new(g, ea, eb) {
                out.push(setup);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FeynGraph;
    use crate::poly::MultiPoly;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    type P = MultiPoly<BigInt>;

    fn x(i: u32) -> P {
        P::feyn(i)
    }

    fn triangle_with_legs(legs: &[(u32, &str)]) -> FeynGraph {
        FeynGraph::from_parts(
            "triangle",
            &["a", "b", "c"],
            &[
                ("e1", "a", "b", 1),
                ("e2", "b", "c", 2),
                ("e3", "c", "a", 3),
            ],
            legs,
        )
        .unwrap()
    }

    fn fig1() -> FeynGraph {
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

    #[test]
    fn determinant_relation_two_by_two() {
        let m = PolyMatrix::from_rows(vec![vec![x(1), x(2)], vec![x(3), x(4)]]);
        assert!(dodgson_determinant_check(&m, 0, 1).unwrap());
        assert_eq!(
            dodgson_determinant_check(&m, 0, 0),
            Err(DodgsonError::IndexError)
        );
        assert_eq!(
            dodgson_determinant_check(&m, 0, 5),
            Err(DodgsonError::IndexError)
        );
    }

    #[test]
    fn determinant_relation_random_integer_matrices() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..25 {
            let n = rng.gen_range(2..=4usize);
            let m = PolyMatrix::from_rows(
                (0..n)
                    .map(|_| (0..n).map(|_| P::int(rng.gen_range(-9i64..=9))).collect())
                    .collect(),
            );
            let i = rng.gen_range(0..n);
            let j = (i + 1 + rng.gen_range(0..n - 1)) % n;
            assert!(dodgson_determinant_check(&m, i, j).unwrap());
        }
    }

    #[test]
    fn determinant_relation_random_symbolic_matrices() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let n = rng.gen_range(2..=5usize);
            let m = PolyMatrix::from_rows(
                (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                // degree-one entries in a small atom pool
                                let mut entry = P::int(rng.gen_range(-3i64..=3));
                                if rng.gen_bool(0.7) {
                                    entry += &x(rng.gen_range(1..=3))
                                        .scale(&BigInt::from(rng.gen_range(-2i64..=2)));
                                }
                                entry
                            })
                            .collect()
                    })
                    .collect(),
            );
            assert!(dodgson_determinant_check(&m, 0, n - 1).unwrap());
        }
    }

    #[test]
    fn setup_inference_and_rejection() {
        let g = triangle_with_legs(&[]);
        let s = DodgsonSetup::new(&g, "e3", "e2").unwrap();
        assert_eq!(s.vk, "c");
        assert_eq!(s.vi, "a");
        assert_eq!(s.vj, "b");

        // parallel edges share both endpoints
        let bubble = FeynGraph::from_parts(
            "bubble",
            &["v1", "v2"],
            &[("e1", "v1", "v2", 1), ("e2", "v1", "v2", 2)],
            &[],
        )
        .unwrap();
        assert!(matches!(
            DodgsonSetup::new(&bubble, "e1", "e2"),
            Err(DodgsonError::InvalidSetup(_))
        ));

        // disjoint edges share nothing
        let square = fig1().delete_edge("e5").unwrap();
        assert!(matches!(
            DodgsonSetup::new(&square, "e1", "e3"),
            Err(DodgsonError::InvalidSetup(_))
        ));
    }

    #[test]
    fn triangle_u_identity_by_hand() {
        let g = triangle_with_legs(&[]);
        let s = DodgsonSetup::new(&g, "e3", "e2").unwrap();
        let report = dodgson_u_identity(&s).unwrap();
        assert!(report.holds);
        assert_eq!(report.lhs, P::one());
        assert_eq!(report.delta1_quotient, P::one());
    }

    #[test]
    fn fig1_u_identity_all_pairs() {
        let g = fig1();
        let setups = valid_setups(&g);
        assert!(!setups.is_empty());
        for s in setups {
            let report = dodgson_u_identity(&s).unwrap();
            assert!(report.holds, "failed for ({}, {})", s.ea, s.eb);
        }
    }

    #[test]
    fn triangle_mixed_identity_with_legs() {
        let g = triangle_with_legs(&[(1, "a"), (2, "b"), (3, "c")]);
        let s = DodgsonSetup::new(&g, "e3", "e2").unwrap();
        let report = dodgson_mixed_identity(&s).unwrap();
        assert!(report.holds);
        assert!(!report.trivially_zero);
        let quotient = report.delta2_quotient.unwrap();
        let delta2 = quotient * (x(3) * x(2));
        assert!(delta2.is_multilinear(&[1, 2, 3]));
    }

    #[test]
    fn fig1_mixed_identity_all_pairs() {
        let g = fig1();
        for s in valid_setups(&g) {
            match dodgson_mixed_identity(&s) {
                Ok(report) => assert!(report.holds, "failed for ({}, {})", s.ea, s.eb),
                Err(DodgsonError::DegenerateDelta1) => {}
                Err(e) => panic!("unexpected error: {e}"),
            }
        }
    }

    #[test]
    fn legless_mixed_identity_is_trivial() {
        let g = triangle_with_legs(&[]);
        let s = DodgsonSetup::new(&g, "e3", "e2").unwrap();
        let report = dodgson_mixed_identity(&s).unwrap();
        assert!(report.holds && report.trivially_zero);
        assert_eq!(report.lhs, P::zero());
        assert_eq!(report.delta2_quotient, Some(P::zero()));
    }

    #[test]
    fn degenerate_delta1_is_flagged() {
        // bowtie with a leg: removing the centre separates the free ends of
        // the two chosen edges, so delta1 vanishes.
        let bowtie = FeynGraph::from_parts(
            "bowtie",
            &["a", "b", "w", "d", "e"],
            &[
                ("e1", "a", "b", 1),
                ("e2", "b", "w", 2),
                ("e3", "w", "a", 3),
                ("e4", "w", "d", 4),
                ("e5", "d", "e", 5),
                ("e6", "e", "w", 6),
            ],
            &[(1, "a")],
        )
        .unwrap();
        let s = DodgsonSetup::new(&bowtie, "e3", "e4").unwrap();
        assert_eq!(
            dodgson_mixed_identity(&s),
            Err(DodgsonError::DegenerateDelta1)
        );
        // the squared identity still holds with a vanishing right-hand side
        let report = dodgson_u_identity(&s).unwrap();
        assert!(report.holds);
        assert_eq!(report.lhs, P::zero());
    }
}
