//! Laplacian matrices over the polynomial ring and their symbolic minors.
//!
//! Determinants use fraction-free Gaussian elimination, whose intermediate
//! divisions are exact in the integer polynomial ring; cofactor expansion is
//! kept as an independent oracle and cross-checks every minor determinant up
//! to dimension four.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use thiserror::Error;

use crate::atom::{Atom, Monomial};
use crate::coeff::Coeff;
use crate::forest;
use crate::graph::{FeynGraph, VertexId};
use crate::poly::MultiPoly;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LaplacianError {
    #[error("graph must be connected")]
    Disconnected,
    #[error("graph has no external legs")]
    NoLegs,
}

/// Dense square matrix of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix<C: Coeff> {
    entries: Vec<Vec<MultiPoly<C>>>,
}

impl<C: Coeff> PolyMatrix<C> {
    pub fn from_rows(entries: Vec<Vec<MultiPoly<C>>>) -> Self {
        let n = entries.len();
        assert!(
            entries.iter().all(|row| row.len() == n),
            "matrix must be square"
        );
        PolyMatrix { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly<C> {
        &self.entries[i][j]
    }

    /// Submatrix after removing the given row and column index sets.
    pub fn minor(&self, removed_rows: &BTreeSet<usize>, removed_cols: &BTreeSet<usize>) -> Self {
        assert!(
            removed_rows
                .iter()
                .chain(removed_cols)
                .all(|&i| i < self.dim()),
            "removed index out of range"
        );
        let keep = |removed: &BTreeSet<usize>| -> Vec<usize> {
            (0..self.dim()).filter(|i| !removed.contains(i)).collect()
        };
        let rows = keep(removed_rows);
        let cols = keep(removed_cols);
        assert_eq!(rows.len(), cols.len(), "minor must be square");
        PolyMatrix {
            entries: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }

    /// Determinant by fraction-free elimination. The 0x0 determinant is 1.
    pub fn det(&self) -> MultiPoly<C> {
        let n = self.dim();
        if n == 0 {
            return MultiPoly::one();
        }
        let mut m = self.entries.clone();
        let mut positive = true;
        let mut prev = MultiPoly::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        positive = !positive;
                    }
                    None => return MultiPoly::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num
                        .exact_div(&prev)
                        .expect("fraction-free elimination divides exactly");
                }
                m[i][k] = MultiPoly::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if positive {
            det
        } else {
            -det
        }
    }

    /// Determinant by cofactor expansion along the first row; exponential,
    /// used as an independent oracle at small dimension.
    pub fn det_cofactor(&self) -> MultiPoly<C> {
        let n = self.dim();
        if n == 0 {
            return MultiPoly::one();
        }
        if n == 1 {
            return self.entries[0][0].clone();
        }
        let mut det = MultiPoly::zero();
        for j in 0..n {
            if self.entries[0][j].is_zero() {
                continue;
            }
            let sub = self.minor(&BTreeSet::from([0]), &BTreeSet::from([j]));
            let term = &self.entries[0][j] * &sub.det_cofactor();
            if j % 2 == 0 {
                det += &term;
            } else {
                det -= &term;
            }
        }
        det
    }
}

/// Laplacian of a graph: weighted degrees on the diagonal, negated
/// adjacency sums off the diagonal; self-loops contribute nowhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplacianMatrix<C: Coeff> {
    pub matrix: PolyMatrix<C>,
    pub vertex_order: Vec<VertexId>,
}

impl<C: Coeff> LaplacianMatrix<C> {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Builds the Laplacian over the graph's edge variables (Feynman parameters
/// for ordinary graphs, leg variables included for extended graphs). Rows
/// and columns follow the graph's vertex order.
pub fn build_laplacian<C: Coeff>(g: &FeynGraph) -> LaplacianMatrix<C> {
    let r = g.vertex_count();
    let mut entries = vec![vec![MultiPoly::zero(); r]; r];
    for e in g.edges() {
        if e.is_self_loop() {
            continue;
        }
        let i = g
            .vertices()
            .iter()
            .position(|v| *v == e.ends.0)
            .expect("edge endpoint exists");
        let j = g
            .vertices()
            .iter()
            .position(|v| *v == e.ends.1)
            .expect("edge endpoint exists");
        let x = MultiPoly::from_atom(e.var.atom());
        entries[i][i] += &x;
        entries[j][j] += &x;
        entries[i][j] -= &x;
        entries[j][i] -= &x;
    }
    LaplacianMatrix {
        matrix: PolyMatrix::from_rows(entries),
        vertex_order: g.vertices().to_vec(),
    }
}

/// Exact determinant of the Laplacian minor with the given rows and columns
/// removed, cross-checked by cofactor expansion when the minor is small.
pub fn minor_det<C: Coeff>(
    lap: &LaplacianMatrix<C>,
    removed_rows: &BTreeSet<usize>,
    removed_cols: &BTreeSet<usize>,
) -> MultiPoly<C> {
    let minor = lap.matrix.minor(removed_rows, removed_cols);
    let det = minor.det();
    if minor.dim() <= 4 {
        assert_eq!(
            det,
            minor.det_cofactor(),
            "elimination and cofactor expansion disagree"
        );
    }
    det
}

/// Matrix-tree check: every principal minor determinant of the Laplacian
/// must equal the tree-side polynomial `U`.
pub fn matrix_tree_check(g: &FeynGraph) -> Result<bool, LaplacianError> {
    if !g.is_connected() {
        return Err(LaplacianError::Disconnected);
    }
    let u = forest::first_symanzik_u::<BigInt>(g);
    let lap = build_laplacian::<BigInt>(g);
    for i in 0..lap.dim() {
        let removed = BTreeSet::from([i]);
        if minor_det(&lap, &removed, &removed) != u {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Determinant route to `U`: the principal minor at the first vertex.
pub fn laplacian_u<C: Coeff>(g: &FeynGraph) -> Result<MultiPoly<C>, LaplacianError> {
    if !g.is_connected() {
        return Err(LaplacianError::Disconnected);
    }
    let lap = build_laplacian::<C>(g);
    if lap.dim() == 0 {
        return Ok(MultiPoly::zero());
    }
    let removed = BTreeSet::from([0]);
    Ok(minor_det(&lap, &removed, &removed))
}

/// Determinant of the extended graph's Laplacian with all external rows and
/// columns removed. Contains the full tower of leg-graded polynomials.
pub fn w_polynomial<C: Coeff>(g: &FeynGraph) -> Result<MultiPoly<C>, LaplacianError> {
    if !g.is_connected() {
        return Err(LaplacianError::Disconnected);
    }
    let m = g.legs().len();
    if m == 0 {
        return Err(LaplacianError::NoLegs);
    }
    let extended = g.extend_with_external_vertices();
    let lap = build_laplacian::<C>(&extended);
    let r = g.vertex_count();
    let removed: BTreeSet<usize> = (r..r + m).collect();
    Ok(minor_det(&lap, &removed, &removed))
}

/// Determinant route to the tree-side `F0`: the degree-2 leg grade of `W`
/// with every leg pair replaced by the corresponding momentum dot product.
/// Leg-free graphs have no 2-forest invariants, hence a vanishing `F0`.
pub fn f0_via_w<C: Coeff>(g: &FeynGraph) -> Result<MultiPoly<C>, LaplacianError> {
    if !g.is_connected() {
        return Err(LaplacianError::Disconnected);
    }
    if g.legs().is_empty() {
        return Ok(MultiPoly::zero());
    }
    let w = w_polynomial::<C>(g)?;
    let grades = w.grade_by_leg_degree();
    let w2 = grades.get(2).cloned().unwrap_or_default();
    Ok(substitute_leg_pairs(&w2, &forest::MomentumBasis::of(g)))
}

/// Outcome of grading the `W` determinant by leg degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WExpansionReport {
    /// The degree-0 part vanishes.
    pub w0_zero: bool,
    /// The degree-1 part equals `U * sum_j z_j`.
    pub w1_matches: bool,
    /// The degree-2 part with `z_i z_j -> p_i.p_j` equals the tree-side `F0`.
    pub w2_matches_f0: bool,
}

impl WExpansionReport {
    pub fn all_hold(&self) -> bool {
        self.w0_zero && self.w1_matches && self.w2_matches_f0
    }
}

/// Grades `W` by leg degree and verifies the three structural statements
/// about its lowest components.
pub fn w_expansion_check(g: &FeynGraph) -> Result<WExpansionReport, LaplacianError> {
    let w = w_polynomial::<BigInt>(g)?;
    let grades = w.grade_by_leg_degree();
    let w0_zero = grades[0].is_zero();

    let u = forest::first_symanzik_u::<BigInt>(g);
    let leg_sum = g
        .legs()
        .iter()
        .fold(MultiPoly::zero(), |acc: MultiPoly<BigInt>, l| {
            acc + MultiPoly::leg(l.momentum)
        });
    let w1_matches = grades.get(1).cloned().unwrap_or_default() == u * leg_sum;

    let w2 = grades.get(2).cloned().unwrap_or_default();
    let substituted = substitute_leg_pairs(&w2, &forest::MomentumBasis::of(g));
    let w2_matches_f0 = substituted == forest::f0_total::<BigInt>(g);

    Ok(WExpansionReport {
        w0_zero,
        w1_matches,
        w2_matches_f0,
    })
}

// Replaces the two leg variables of each degree-2 monomial by the expanded
// dot product of the corresponding momenta (z_i^2 maps to p_i.p_i).
fn substitute_leg_pairs<C: Coeff>(
    w2: &MultiPoly<C>,
    basis: &forest::MomentumBasis,
) -> MultiPoly<C> {
    let mut out = MultiPoly::zero();
    for (mono, c) in w2.terms() {
        let mut legs: Vec<u32> = Vec::new();
        let mut rest: Vec<(Atom, u32)> = Vec::new();
        for (a, p) in mono.factors() {
            match a {
                Atom::Leg(j) => {
                    for _ in 0..*p {
                        legs.push(*j);
                    }
                }
                other => rest.push((*other, *p)),
            }
        }
        assert_eq!(legs.len(), 2, "degree-2 leg component expected");
        let dot = basis.dot::<C>(legs[0], legs[1]);
        let base = MultiPoly::from_term(Monomial::from_powers(rest), c.clone());
        out += &(base * dot);
    }
    out
}
