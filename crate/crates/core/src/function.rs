//! Rational-valued functions on the points of a finite space.

use num_traits::{One, Zero};

use crate::rational::Rational;
use crate::topology::{FiniteSpace, Subset};

/// A function `points -> Q`, indexed by point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointFunction {
    values: Vec<Rational>,
}

impl PointFunction {
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    pub fn constant(len: usize, value: Rational) -> Self {
        Self {
            values: vec![value; len],
        }
    }

    pub fn zero(len: usize) -> Self {
        Self::constant(len, Rational::zero())
    }

    /// `1_set` on `len` points.
    pub fn indicator(len: usize, set: Subset) -> Self {
        Self {
            values: (0..len)
                .map(|x| {
                    if set.contains(x) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, point: usize) -> &Rational {
        &self.values[point]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Points where the function is nonzero.
    pub fn support(&self) -> Subset {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .fold(Subset::EMPTY, |acc, (x, _)| acc.with(x))
    }

    /// True when the function takes a single value on `set`.
    pub fn is_constant_on(&self, set: Subset) -> bool {
        let mut points = set.iter();
        match points.next() {
            None => true,
            Some(first) => points.all(|x| self.values[x] == self.values[first]),
        }
    }

    /// Level sets `f^{-1}(v)` for each value in the image, ordered by value.
    pub fn level_sets(&self) -> Vec<(Rational, Subset)> {
        let mut image: Vec<Rational> = self.values.clone();
        image.sort();
        image.dedup();
        image
            .into_iter()
            .map(|v| {
                let set = self
                    .values
                    .iter()
                    .enumerate()
                    .filter(|(_, w)| **w == v)
                    .fold(Subset::EMPTY, |acc, (x, _)| acc.with(x));
                (v, set)
            })
            .collect()
    }

    /// Continuity into the reals. The image is finite, so its subspace
    /// topology is discrete and continuity reduces to every level set being
    /// open.
    pub fn is_continuous(&self, space: &FiniteSpace) -> bool {
        self.values.len() == space.len()
            && self
                .level_sets()
                .into_iter()
                .all(|(_, level)| space.is_open(level))
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &PointFunction) -> bool {
        self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }
}
