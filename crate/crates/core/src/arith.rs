//! Coordinate-level multiplication for unipotent matrix tuples.
//!
//! An element is stored as the vector of its live strictly-upper entries.
//! For `A = I + a`, `B = I + b` the product has entries
//! `a_ij + b_ij + sum_k a_ik b_kj`, and erased entries are dropped, so the
//! whole group law is a precomputed table of `(ik, kj)` index pairs.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Integer type the engine can run on. Machine integers report overflow as `None`.
pub trait Scalar: Clone + Eq + Hash + Ord + Send + Sync + Debug {
    fn zero_value() -> Self;
    fn is_zero_value(&self) -> bool;
    fn add_checked(&self, other: &Self) -> Option<Self>;
    fn mul_checked(&self, other: &Self) -> Option<Self>;
    fn neg_checked(&self) -> Option<Self>;
    fn from_big(value: &BigInt) -> Option<Self>;
}

impl Scalar for i64 {
    fn zero_value() -> Self {
        0
    }
    fn is_zero_value(&self) -> bool {
        *self == 0
    }
    fn add_checked(&self, other: &Self) -> Option<Self> {
        self.checked_add(*other)
    }
    fn mul_checked(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn neg_checked(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn from_big(value: &BigInt) -> Option<Self> {
        value.to_i64()
    }
}

impl Scalar for BigInt {
    fn zero_value() -> Self {
        Zero::zero()
    }
    fn is_zero_value(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_checked(&self, other: &Self) -> Option<Self> {
        Some(self + other)
    }
    fn mul_checked(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn neg_checked(&self) -> Option<Self> {
        Some(-self)
    }
    fn from_big(value: &BigInt) -> Option<Self> {
        Some(value.clone())
    }
}

/// Product table of a group: for each live coordinate `(i,j)`, the pairs of
/// live coordinates `((i,k), (k,j))` inside the same factor.
#[derive(Debug, Clone)]
pub(crate) struct Layout {
    terms: Vec<Vec<(u32, u32)>>,
}

impl Layout {
    /// `terms[t]` must only reference coordinates of strictly smaller span, which
    /// holds for the (factor, span, row) ordering used by `Group`.
    pub(crate) fn new(terms: Vec<Vec<(u32, u32)>>) -> Self {
        debug_assert!(terms
            .iter()
            .enumerate()
            .all(|(t, ts)| ts.iter().all(|&(a, b)| (a as usize) < t && (b as usize) < t)));
        Layout { terms }
    }

    pub(crate) fn terms(&self, t: usize) -> &[(u32, u32)] {
        &self.terms[t]
    }

    pub(crate) fn mul<T: Scalar>(&self, a: &[T], b: &[T]) -> Option<Vec<T>> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (t, terms) in self.terms.iter().enumerate() {
            let mut acc = a[t].add_checked(&b[t])?;
            for &(left, right) in terms {
                let (x, y) = (&a[left as usize], &b[right as usize]);
                if x.is_zero_value() || y.is_zero_value() {
                    continue;
                }
                acc = acc.add_checked(&x.mul_checked(y)?)?;
            }
            out.push(acc);
        }
        Some(out)
    }

    pub(crate) fn inv<T: Scalar>(&self, a: &[T]) -> Option<Vec<T>> {
        let mut out: Vec<T> = Vec::with_capacity(self.terms.len());
        for (t, terms) in self.terms.iter().enumerate() {
            let mut acc = a[t].clone();
            for &(left, right) in terms {
                let (x, y) = (&a[left as usize], &out[right as usize]);
                if x.is_zero_value() || y.is_zero_value() {
                    continue;
                }
                acc = acc.add_checked(&x.mul_checked(y)?)?;
            }
            out.push(acc.neg_checked()?);
        }
        Some(out)
    }

    pub(crate) fn identity<T: Scalar>(&self) -> Vec<T> {
        vec![T::zero_value(); self.terms.len()]
    }
}
