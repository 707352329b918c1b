//! Coefficient scalar for the polynomial ring.

use std::fmt;
use std::hash::Hash;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};

/// Exact integer scalar used as polynomial coefficient.
///
/// Every identity in this crate is an exact identity over the integers, so
/// the scalar must support exact comparison and euclidean division with
/// remainder. `num_bigint::BigInt` is the canonical choice (determinants and
/// Dodgson products overflow any fixed width); the machine integers qualify
/// for small experiments.
pub trait Coeff:
    Integer + Signed + FromPrimitive + Clone + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}

impl<T> Coeff for T where
    T: Integer
        + Signed
        + FromPrimitive
        + Clone
        + Hash
        + fmt::Debug
        + fmt::Display
        + Send
        + Sync
        + 'static
{
}
