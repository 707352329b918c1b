//! Exact sparse multivariate polynomials over an integer scalar.
//!
//! Terms live in a `BTreeMap` keyed by the graded-lexicographic monomial
//! order, so equality, iteration and text output are canonical. No stored
//! coefficient is ever zero and no operation rounds.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use thiserror::Error;

use crate::atom::{Atom, Monomial};
use crate::coeff::Coeff;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PolyError {
    /// Exact division failed; in identity checks this signals a violated
    /// identity rather than a recoverable condition.
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    /// A variable appears with power two or higher, or a monomial uses a
    /// Feynman atom outside the declared variable set.
    #[error("polynomial is not multilinear over the given variables")]
    NotMultilinear,
}

/// Sparse exact polynomial with coefficients in `C`.
///
/// The zero polynomial is the empty term map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly<C: Coeff> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> Default for MultiPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> MultiPoly<C> {
    pub fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::from_term(Monomial::one(), c)
    }

    /// Small integer constant; convenient in tests and identity right-hand sides.
    pub fn int(n: i64) -> Self {
        Self::constant(C::from_i64(n).expect("scalar does not represent this integer"))
    }

    pub fn from_atom(a: Atom) -> Self {
        Self::from_term(Monomial::atom(a), C::one())
    }

    pub fn feyn(i: u32) -> Self {
        Self::from_atom(Atom::feyn(i))
    }

    pub fn leg(j: u32) -> Self {
        Self::from_atom(Atom::leg(j))
    }

    pub fn dot(i: u32, j: u32) -> Self {
        Self::from_atom(Atom::dot(i, j))
    }

    pub fn mass(i: u32) -> Self {
        Self::from_atom(Atom::mass(i))
    }

    pub fn from_term(m: Monomial, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .is_some_and(|c| *c == C::one())
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&C> {
        self.terms.get(m)
    }

    /// Greatest term in the monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.clone(), k.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Exact quotient `self / divisor` in the integer polynomial ring.
    ///
    /// Repeatedly cancels the leading term; any monomial or coefficient that
    /// fails to divide proves that no exact quotient exists.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (dm, dc) = divisor.leading_term().expect("nonzero divisor");
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading_term().expect("nonzero remainder");
            let qm = rm.try_div(&dm).ok_or(PolyError::NotDivisible)?;
            let (qc, r) = rc.clone().div_rem(&dc);
            if !r.is_zero() {
                return Err(PolyError::NotDivisible);
            }
            let t = Self::from_term(qm, qc);
            rem -= &(&t * divisor);
            quot += &t;
        }
        Ok(quot)
    }

    /// Sum of all coefficients, i.e. the value at every atom set to 1.
    pub fn coefficient_sum(&self) -> C {
        self.terms
            .values()
            .fold(C::zero(), |acc, c| acc + c.clone())
    }

    /// All atoms occurring in the polynomial.
    pub fn support(&self) -> BTreeSet<Atom> {
        self.terms.keys().flat_map(|m| m.atoms()).collect()
    }

    /// Indices of the Feynman parameters occurring in the polynomial.
    pub fn feyn_support(&self) -> BTreeSet<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.atoms())
            .filter_map(|a| match a {
                Atom::Feyn(i) => Some(i),
                _ => None,
            })
            .collect()
    }

    /// Splits into homogeneous components by total degree in the leg
    /// variables; index `k` holds the degree-`k` part. The zero polynomial
    /// yields a single zero component.
    pub fn grade_by_leg_degree(&self) -> Vec<Self> {
        let max = self
            .terms
            .keys()
            .map(|m| m.degree_where(Atom::is_leg))
            .max()
            .unwrap_or(0);
        let mut parts = vec![Self::zero(); max as usize + 1];
        for (m, c) in &self.terms {
            let k = m.degree_where(Atom::is_leg) as usize;
            parts[k].add_term(m.clone(), c.clone());
        }
        parts
    }

    /// True when no listed Feynman parameter occurs with power two or more.
    pub fn is_multilinear(&self, vars: &[u32]) -> bool {
        let vars: BTreeSet<u32> = vars.iter().copied().collect();
        self.terms.keys().all(|m| {
            m.factors().iter().all(|(a, p)| match a {
                Atom::Feyn(i) if vars.contains(i) => *p <= 1,
                _ => true,
            })
        })
    }

    /// True when every monomial has the stated total degree over the listed
    /// Feynman parameters. Vacuously true for the zero polynomial.
    pub fn is_homogeneous(&self, vars: &[u32], degree: u32) -> bool {
        let vars: BTreeSet<u32> = vars.iter().copied().collect();
        self.is_homogeneous_where(|a| matches!(a, Atom::Feyn(i) if vars.contains(i)), degree)
    }

    /// Homogeneity over an arbitrary atom selection.
    pub fn is_homogeneous_where(&self, counted: impl Fn(&Atom) -> bool, degree: u32) -> bool {
        self.terms
            .keys()
            .all(|m| m.degree_where(&counted) == degree)
    }

    /// Maximum total degree over the selected atoms (0 for the zero polynomial).
    pub fn max_degree_where(&self, counted: impl Fn(&Atom) -> bool) -> u32 {
        self.terms
            .keys()
            .map(|m| m.degree_where(&counted))
            .max()
            .unwrap_or(0)
    }

    /// Multiplies by `x_1...x_n` and substitutes `x_i -> 1/x_i` for the
    /// listed variables, i.e. maps each monomial to its complement within
    /// `vars`. Requires the polynomial to be multilinear with Feynman
    /// support inside `vars`; atoms of other kinds pass through unchanged.
    /// Applying the transform twice is the identity.
    pub fn reciprocal_transform(&self, vars: &[u32]) -> Result<Self, PolyError> {
        let vars: BTreeSet<u32> = vars.iter().copied().collect();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut present: BTreeSet<u32> = BTreeSet::new();
            let mut rest: Vec<(Atom, u32)> = Vec::new();
            for (a, p) in m.factors() {
                match a {
                    Atom::Feyn(i) => {
                        if *p >= 2 || !vars.contains(i) {
                            return Err(PolyError::NotMultilinear);
                        }
                        present.insert(*i);
                    }
                    _ => rest.push((*a, *p)),
                }
            }
            let complement = vars
                .iter()
                .filter(|i| !present.contains(i))
                .map(|i| (Atom::feyn(*i), 1));
            out.add_term(
                Monomial::from_powers(rest.into_iter().chain(complement)),
                c.clone(),
            );
        }
        Ok(out)
    }

    /// Renames Feynman parameters through `map`; indices absent from the map
    /// are left alone. `map` must be injective on the polynomial's support.
    pub fn map_feyn_vars(&self, map: &BTreeMap<u32, u32>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let renamed = Monomial::from_powers(m.factors().iter().map(|(a, p)| match a {
                Atom::Feyn(i) => (Atom::feyn(*map.get(i).unwrap_or(i)), *p),
                other => (*other, *p),
            }));
            out.add_term(renamed, c.clone());
        }
        out
    }
}

impl<C: Coeff> AddAssign<&MultiPoly<C>> for MultiPoly<C> {
    fn add_assign(&mut self, rhs: &MultiPoly<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<C: Coeff> SubAssign<&MultiPoly<C>> for MultiPoly<C> {
    fn sub_assign(&mut self, rhs: &MultiPoly<C>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone().neg());
        }
    }
}

impl<C: Coeff> Add for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(mut self, rhs: MultiPoly<C>) -> MultiPoly<C> {
        self += &rhs;
        self
    }
}

impl<C: Coeff> Add for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<C: Coeff> Sub for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(mut self, rhs: MultiPoly<C>) -> MultiPoly<C> {
        self -= &rhs;
        self
    }
}

impl<C: Coeff> Sub for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<C: Coeff> Neg for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        MultiPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, c.neg())).collect(),
        }
    }
}

impl<C: Coeff> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        self.clone().neg()
    }
}

impl<C: Coeff> Mul for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Mul for MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: MultiPoly<C>) -> MultiPoly<C> {
        &self * &rhs
    }
}

/// Canonical text rendering: descending monomial order, terms joined by
/// " + " / " - ", unit coefficients omitted, powers as `x1^2`.
impl<C: Coeff> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if magnitude.is_one() {
                write!(f, "{m}")?;
            } else if m.is_one() {
                write!(f, "{magnitude}")?;
            } else {
                write!(f, "{magnitude}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Searches for a bijection on the Feynman parameters carrying `p` onto `q`.
///
/// The search is exhaustive over variable bijections, pruned by per-variable
/// occurrence signatures and pairwise co-occurrence counts; the returned map
/// is the lexicographically least solution. `None` means no bijection exists.
pub fn find_variable_isomorphism<C: Coeff>(
    p: &MultiPoly<C>,
    q: &MultiPoly<C>,
) -> Option<BTreeMap<u32, u32>> {
    if p.term_count() != q.term_count() {
        return None;
    }
    let vp: Vec<u32> = p.feyn_support().into_iter().collect();
    let vq: Vec<u32> = q.feyn_support().into_iter().collect();
    if vp.len() != vq.len() {
        return None;
    }
    if vp.is_empty() {
        return (p == q).then(BTreeMap::new);
    }

    let sig_p: HashMap<u32, VarSignature<C>> =
        vp.iter().map(|&v| (v, VarSignature::of(p, v))).collect();
    let sig_q: HashMap<u32, VarSignature<C>> =
        vq.iter().map(|&v| (v, VarSignature::of(q, v))).collect();
    let cooc_p = cooccurrence(p);
    let cooc_q = cooccurrence(q);

    let mut assignment: BTreeMap<u32, u32> = BTreeMap::new();
    let mut used: BTreeSet<u32> = BTreeSet::new();
    search_bijection(
        p,
        q,
        &vp,
        &vq,
        &sig_p,
        &sig_q,
        &cooc_p,
        &cooc_q,
        0,
        &mut assignment,
        &mut used,
    )
}

#[derive(PartialEq, Eq)]
struct VarSignature<C: Coeff> {
    // Sorted (power, monomial degree, coefficient) over monomials containing
    // the variable; invariant under variable bijections.
    occurrences: Vec<(u32, u32, C)>,
}

impl<C: Coeff> VarSignature<C> {
    fn of(p: &MultiPoly<C>, v: u32) -> Self {
        let a = Atom::feyn(v);
        let mut occurrences: Vec<(u32, u32, C)> = p
            .terms()
            .filter(|(m, _)| m.power_of(&a) > 0)
            .map(|(m, c)| (m.power_of(&a), m.degree(), c.clone()))
            .collect();
        occurrences.sort();
        VarSignature { occurrences }
    }
}

fn cooccurrence<C: Coeff>(p: &MultiPoly<C>) -> HashMap<(u32, u32), usize> {
    let mut counts: HashMap<(u32, u32), usize> = HashMap::new();
    for (m, _) in p.terms() {
        let vars: Vec<u32> = m
            .atoms()
            .filter_map(|a| match a {
                Atom::Feyn(i) => Some(i),
                _ => None,
            })
            .collect();
        for (i, &u) in vars.iter().enumerate() {
            for &w in &vars[i + 1..] {
                let key = if u < w { (u, w) } else { (w, u) };
                *counts.entry(key).or_default() += 1;
            }
        }
    }
    counts
}

fn pair_count(counts: &HashMap<(u32, u32), usize>, a: u32, b: u32) -> usize {
    let key = if a < b { (a, b) } else { (b, a) };
    counts.get(&key).copied().unwrap_or(0)
}

#[allow(clippy::too_many_arguments)]
fn search_bijection<C: Coeff>(
    p: &MultiPoly<C>,
    q: &MultiPoly<C>,
    vp: &[u32],
    vq: &[u32],
    sig_p: &HashMap<u32, VarSignature<C>>,
    sig_q: &HashMap<u32, VarSignature<C>>,
    cooc_p: &HashMap<(u32, u32), usize>,
    cooc_q: &HashMap<(u32, u32), usize>,
    depth: usize,
    assignment: &mut BTreeMap<u32, u32>,
    used: &mut BTreeSet<u32>,
) -> Option<BTreeMap<u32, u32>> {
    if depth == vp.len() {
        return (p.map_feyn_vars(assignment) == *q).then(|| assignment.clone());
    }
    let v = vp[depth];
    for &w in vq {
        if used.contains(&w) || sig_p[&v] != sig_q[&w] {
            continue;
        }
        let consistent = assignment
            .iter()
            .all(|(&u, &u2)| pair_count(cooc_p, v, u) == pair_count(cooc_q, w, u2));
        if !consistent {
            continue;
        }
        assignment.insert(v, w);
        used.insert(w);
        if let Some(found) = search_bijection(
            p,
            q,
            vp,
            vq,
            sig_p,
            sig_q,
            cooc_p,
            cooc_q,
            depth + 1,
            assignment,
            used,
        ) {
            return Some(found);
        }
        assignment.remove(&v);
        used.remove(&w);
    }
    None
}
