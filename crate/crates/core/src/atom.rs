//! Variable atoms and power products.

use std::cmp::Ordering;
use std::fmt;

/// A single symbolic variable of the polynomial ring.
///
/// The derived total order sorts Feynman parameters first, then leg
/// variables, then momentum dot products, then squared masses; atoms of the
/// same kind sort by their indices. This order is the basis of the canonical
/// monomial order and of the text rendering.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    /// Feynman parameter `x_i` of an internal edge.
    Feyn(u32),
    /// Leg variable `z_j` of an external leg.
    Leg(u32),
    /// Scalar product `p_i.p_j` of external momenta, stored with `i <= j`.
    Dot(u32, u32),
    /// Squared mass `m_i^2`.
    Mass(u32),
}

impl Atom {
    pub fn feyn(i: u32) -> Self {
        assert!(i >= 1, "feyn index must be positive");
        Atom::Feyn(i)
    }

    pub fn leg(j: u32) -> Self {
        assert!(j >= 1, "leg index must be positive");
        Atom::Leg(j)
    }

    /// Dot products are symmetric; the pair is stored sorted.
    pub fn dot(i: u32, j: u32) -> Self {
        assert!(i >= 1 && j >= 1, "momentum index must be positive");
        if i <= j {
            Atom::Dot(i, j)
        } else {
            Atom::Dot(j, i)
        }
    }

    pub fn mass(i: u32) -> Self {
        assert!(i >= 1, "mass index must be positive");
        Atom::Mass(i)
    }

    pub fn is_feyn(&self) -> bool {
        matches!(self, Atom::Feyn(_))
    }

    pub fn is_leg(&self) -> bool {
        matches!(self, Atom::Leg(_))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Feyn(i) => write!(f, "x{i}"),
            Atom::Leg(j) => write!(f, "z{j}"),
            Atom::Dot(i, j) => write!(f, "sp({i},{j})"),
            Atom::Mass(i) => write!(f, "msq{i}"),
        }
    }
}

/// A power product of atoms.
///
/// Factors are kept sorted by atom with strictly positive exponents; the
/// empty product is the constant monomial 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    factors: Vec<(Atom, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn atom(a: Atom) -> Self {
        Monomial {
            factors: vec![(a, 1)],
        }
    }

    /// Builds a monomial from arbitrary (atom, power) pairs, merging
    /// duplicates and dropping zero powers.
    pub fn from_powers<I: IntoIterator<Item = (Atom, u32)>>(powers: I) -> Self {
        let mut factors: Vec<(Atom, u32)> = Vec::new();
        for (a, p) in powers {
            if p == 0 {
                continue;
            }
            match factors.iter_mut().find(|(b, _)| *b == a) {
                Some((_, q)) => *q += p,
                None => factors.push((a, p)),
            }
        }
        factors.sort_by_key(|(a, _)| *a);
        Monomial { factors }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Atom, u32)] {
        &self.factors
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.factors.iter().map(|(a, _)| *a)
    }

    /// Total degree over all atoms.
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, p)| p).sum()
    }

    /// Total degree over the atoms selected by `counted`.
    pub fn degree_where(&self, counted: impl Fn(&Atom) -> bool) -> u32 {
        self.factors
            .iter()
            .filter(|(a, _)| counted(a))
            .map(|(_, p)| p)
            .sum()
    }

    pub fn power_of(&self, a: &Atom) -> u32 {
        self.factors
            .iter()
            .find(|(b, _)| b == a)
            .map_or(0, |(_, p)| *p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Monomial::from_powers(
            self.factors
                .iter()
                .copied()
                .chain(other.factors.iter().copied()),
        )
    }

    /// Exact monomial quotient, or `None` when some power of `other`
    /// exceeds the corresponding power of `self`.
    pub fn try_div(&self, other: &Self) -> Option<Self> {
        let mut factors = self.factors.clone();
        for (a, p) in &other.factors {
            let (_, q) = factors.iter_mut().find(|(b, _)| b == a)?;
            if *q < *p {
                return None;
            }
            *q -= *p;
        }
        factors.retain(|(_, p)| *p > 0);
        Some(Monomial { factors })
    }
}

/// Graded lexicographic order: total degree first, ties broken by comparing
/// exponents along increasing atoms (a higher power on an earlier atom wins).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| lex_cmp(&self.factors, &other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn lex_cmp(a: &[(Atom, u32)], b: &[(Atom, u32)]) -> Ordering {
    let mut ia = a.iter();
    let mut ib = b.iter();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some((aa, ap)), Some((ba, bp))) => match aa.cmp(ba) {
                // A positive power on a smaller atom beats a zero power.
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    if ap != bp {
                        return ap.cmp(bp);
                    }
                }
            },
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (a, p) in &self.factors {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *p == 1 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{a}^{p}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_order_by_kind_then_index() {
        let mut atoms = vec![
            Atom::mass(1),
            Atom::dot(2, 1),
            Atom::leg(3),
            Atom::feyn(2),
            Atom::feyn(1),
        ];
        atoms.sort();
        assert_eq!(
            atoms,
            vec![
                Atom::feyn(1),
                Atom::feyn(2),
                Atom::leg(3),
                Atom::dot(1, 2),
                Atom::mass(1),
            ]
        );
    }

    #[test]
    fn dot_is_stored_sorted() {
        assert_eq!(Atom::dot(3, 1), Atom::dot(1, 3));
        assert_eq!(format!("{}", Atom::dot(3, 1)), "sp(1,3)");
    }

    #[test]
    fn grlex_prefers_degree_then_early_atoms() {
        let x1 = Monomial::atom(Atom::feyn(1));
        let x2 = Monomial::atom(Atom::feyn(2));
        let x1x2 = x1.mul(&x2);
        let x1sq = x1.mul(&x1);
        assert!(x1x2 > x1);
        assert!(x1sq > x1x2); // same degree, higher power on x1
        assert!(x1 > x2);
    }

    #[test]
    fn monomial_quotients() {
        let x1 = Monomial::atom(Atom::feyn(1));
        let x2 = Monomial::atom(Atom::feyn(2));
        let m = x1.mul(&x2);
        assert_eq!(m.try_div(&x1), Some(x2.clone()));
        assert_eq!(x1.try_div(&m), None);
        assert_eq!(m.try_div(&Monomial::one()), Some(m.clone()));
    }

    #[test]
    fn display_forms() {
        let m =
            Monomial::from_powers([(Atom::feyn(1), 2), (Atom::mass(4), 1), (Atom::dot(1, 2), 1)]);
        assert_eq!(m.to_string(), "x1^2*sp(1,2)*msq4");
        assert_eq!(Monomial::one().to_string(), "1");
    }
}
