//! Decreasing rearrangement of `|f|` as a list of `(value, mass)` pieces.

use std::cmp::Ordering;

use crate::element::{AtomicVector, DyadicStep, Element};

/// One constant piece of a decreasing rearrangement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub value: f64,
    pub mass: f64,
}

/// Nonincreasing step representation of `f*`.
///
/// Values are nonnegative and nonincreasing, masses strictly positive.
/// Atomic sources have unit masses before merging; dyadic steps have mass
/// `2^-level` per cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RearrangementProfile {
    steps: Vec<Piece>,
    total_mass: f64,
}

fn by_value_desc(a: &Piece, b: &Piece) -> Ordering {
    b.value.total_cmp(&a.value)
}

impl RearrangementProfile {
    /// Sorts `(|value|, mass)` pairs into a profile without merging ties.
    /// Pieces with zero mass are dropped.
    pub fn from_weighted_unmerged<I>(pieces: I) -> Self
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut steps: Vec<Piece> = pieces
            .into_iter()
            .filter(|&(_, m)| m > 0.0)
            .map(|(v, m)| Piece {
                value: v.abs(),
                mass: m,
            })
            .collect();
        steps.sort_by(by_value_desc);
        let total_mass = steps.iter().map(|s| s.mass).sum();
        Self { steps, total_mass }
    }

    /// Like [`Self::from_weighted_unmerged`] followed by [`Self::merged`].
    pub fn from_weighted<I>(pieces: I) -> Self
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        Self::from_weighted_unmerged(pieces).merged()
    }

    /// Combines adjacent pieces with identical values.
    pub fn merged(self) -> Self {
        let mut out: Vec<Piece> = Vec::with_capacity(self.steps.len());
        for s in self.steps {
            match out.last_mut() {
                Some(last) if last.value == s.value => last.mass += s.mass,
                _ => out.push(s),
            }
        }
        Self {
            steps: out,
            total_mass: self.total_mass,
        }
    }

    pub fn steps(&self) -> &[Piece] {
        &self.steps
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Anything with a decreasing rearrangement.
pub trait Rearrange {
    fn rearrange(&self) -> RearrangementProfile;
}

impl Rearrange for AtomicVector {
    fn rearrange(&self) -> RearrangementProfile {
        RearrangementProfile::from_weighted(self.atoms.iter().map(|&a| (a, 1.0)))
    }
}

impl Rearrange for [f64] {
    fn rearrange(&self) -> RearrangementProfile {
        RearrangementProfile::from_weighted(self.iter().map(|&a| (a, 1.0)))
    }
}

impl Rearrange for DyadicStep {
    fn rearrange(&self) -> RearrangementProfile {
        let mass = self.cell_mass();
        RearrangementProfile::from_weighted(self.values().iter().map(|&v| (v, mass)))
    }
}

impl Rearrange for Element {
    fn rearrange(&self) -> RearrangementProfile {
        match self {
            Element::Atoms(a) => a.rearrange(),
            Element::Step(s) => s.rearrange(),
        }
    }
}

impl Rearrange for RearrangementProfile {
    fn rearrange(&self) -> RearrangementProfile {
        self.clone()
    }
}

/// Free-function form of [`Rearrange::rearrange`].
pub fn rearrange<R: Rearrange + ?Sized>(source: &R) -> RearrangementProfile {
    source.rearrange()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(p: &RearrangementProfile) -> Vec<(f64, f64)> {
        p.steps().iter().map(|s| (s.value, s.mass)).collect()
    }

    #[test]
    fn sorts_atoms() {
        let p = rearrange(&AtomicVector::new(vec![1.0, 3.0, 2.0]));
        assert_eq!(pairs(&p), vec![(3.0, 1.0), (2.0, 1.0), (1.0, 1.0)]);
        assert_eq!(p.total_mass(), 3.0);
    }

    #[test]
    fn absolute_value_and_merge() {
        let p = rearrange(&AtomicVector::new(vec![-2.0, 2.0]));
        assert_eq!(pairs(&p), vec![(2.0, 2.0)]);
    }

    #[test]
    fn step_masses_are_cell_lengths() {
        let s = DyadicStep::new(1, 1, vec![0.0, 5.0]).unwrap();
        assert_eq!(pairs(&rearrange(&s)), vec![(5.0, 0.5), (0.0, 0.5)]);
    }

    #[test]
    fn empty_source() {
        let p = rearrange(&AtomicVector::default());
        assert!(p.is_empty());
        assert_eq!(p.total_mass(), 0.0);
    }

    #[test]
    fn zero_mass_dropped() {
        let p = RearrangementProfile::from_weighted([(1.0, 0.0), (2.0, 1.0)]);
        assert_eq!(pairs(&p), vec![(2.0, 1.0)]);
    }
}
