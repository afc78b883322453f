//! Finite atomic sequences and dyadic step functions on `[0, k]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dyadic level accepted for step functions and stacks.
pub const MAX_LEVEL: usize = 40;

/// A finite real sequence under counting measure (each atom has mass 1).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AtomicVector {
    pub atoms: Vec<f64>,
}

impl AtomicVector {
    pub fn new(atoms: Vec<f64>) -> Self {
        Self { atoms }
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            atoms: vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(i) = self.atoms.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput {
                field: "atoms",
                reason: format!("entry {i} is not finite"),
            });
        }
        Ok(())
    }

    /// `Σ f_i g_i`.
    pub fn pairing(&self, other: &AtomicVector) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch(format!(
                "atomic lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .atoms
            .iter()
            .zip(&other.atoms)
            .map(|(a, b)| a * b)
            .sum())
    }
}

impl From<Vec<f64>> for AtomicVector {
    fn from(atoms: Vec<f64>) -> Self {
        Self { atoms }
    }
}

/// Step function on `[0, k]` that is constant on each of the `k * 2^level`
/// dyadic intervals `[(j-1)/2^level, j/2^level]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStep")]
pub struct DyadicStep {
    k: usize,
    level: usize,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawStep {
    k: usize,
    level: usize,
    values: Vec<f64>,
}

impl TryFrom<RawStep> for DyadicStep {
    type Error = Error;

    fn try_from(raw: RawStep) -> Result<Self> {
        DyadicStep::new(raw.k, raw.level, raw.values)
    }
}

/// Number of level-`level` dyadic intervals in `[0, k]`, checked.
pub(crate) fn cells(k: usize, level: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::InvalidInput {
            field: "k",
            reason: "must be at least 1".into(),
        });
    }
    if level > MAX_LEVEL {
        return Err(Error::InvalidInput {
            field: "level",
            reason: format!("{level} exceeds the maximum {MAX_LEVEL}"),
        });
    }
    k.checked_mul(1usize << level).ok_or(Error::InvalidInput {
        field: "k",
        reason: "k * 2^level overflows".into(),
    })
}

impl DyadicStep {
    pub fn new(k: usize, level: usize, values: Vec<f64>) -> Result<Self> {
        let expected = cells(k, level)?;
        if values.len() != expected {
            return Err(Error::InvalidInput {
                field: "values",
                reason: format!(
                    "expected k*2^level = {expected} entries, found {}",
                    values.len()
                ),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput {
                field: "values",
                reason: format!("entry {i} is not finite"),
            });
        }
        Ok(Self { k, level, values })
    }

    pub fn zeros(k: usize, level: usize) -> Result<Self> {
        let n = cells(k, level)?;
        Ok(Self {
            k,
            level,
            values: vec![0.0; n],
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Lebesgue measure of one cell, `2^-level`.
    pub fn cell_mass(&self) -> f64 {
        (-(self.level as f64)).exp2()
    }

    /// `∫ f g = Σ f_j g_j 2^-level`.
    pub fn pairing(&self, other: &DyadicStep) -> Result<f64> {
        if self.k != other.k || self.level != other.level {
            return Err(Error::ShapeMismatch(format!(
                "steps (k={}, level={}) and (k={}, level={})",
                self.k, self.level, other.k, other.level
            )));
        }
        let dot: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum();
        Ok(dot * self.cell_mass())
    }

    /// Conditional expectation onto the level-`target` dyadic partition:
    /// every coarse cell takes the mean of the `2^(level - target)` cells it
    /// covers.
    pub fn cond_expect(&self, target: usize) -> Result<DyadicStep> {
        if target > self.level {
            return Err(Error::LevelTooFine {
                target,
                source_level: self.level,
            });
        }
        let width = 1usize << (self.level - target);
        let scale = 1.0 / width as f64;
        let values = self
            .values
            .chunks_exact(width)
            .map(|c| c.iter().sum::<f64>() * scale)
            .collect();
        Ok(DyadicStep {
            k: self.k,
            level: target,
            values,
        })
    }

    /// `∫ f` over `[0, k]`.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_mass()
    }
}

/// Either kind of finite object the norms accept.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Atoms(AtomicVector),
    Step(DyadicStep),
}

impl Element {
    pub fn pairing(&self, other: &Element) -> Result<f64> {
        match (self, other) {
            (Element::Atoms(a), Element::Atoms(b)) => a.pairing(b),
            (Element::Step(a), Element::Step(b)) => a.pairing(b),
            _ => Err(Error::ShapeMismatch(
                "cannot pair an atomic vector with a step function".into(),
            )),
        }
    }
}

impl From<AtomicVector> for Element {
    fn from(a: AtomicVector) -> Self {
        Element::Atoms(a)
    }
}

impl From<DyadicStep> for Element {
    fn from(s: DyadicStep) -> Self {
        Element::Step(s)
    }
}

/// Free-function form of the pairing.
pub fn pairing(f: &Element, g: &Element) -> Result<f64> {
    f.pairing(g)
}

/// Free-function form of [`DyadicStep::cond_expect`].
pub fn cond_expect(f: &DyadicStep, target: usize) -> Result<DyadicStep> {
    f.cond_expect(target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn step(k: usize, level: usize, v: &[f64]) -> DyadicStep {
        DyadicStep::new(k, level, v.to_vec()).unwrap()
    }

    #[test]
    fn step_length_checked() {
        let err = DyadicStep::new(2, 1, vec![1.0; 3]).unwrap_err();
        assert!(matches!(err, Error::InvalidInput { field: "values", .. }));
        assert!(DyadicStep::new(0, 0, vec![]).is_err());
        assert!(DyadicStep::new(1, 0, vec![f64::NAN]).is_err());
    }

    #[test]
    fn atomic_dot() {
        let a = AtomicVector::new(vec![1.0, 2.0]);
        let b = AtomicVector::new(vec![3.0, 4.0]);
        assert_eq!(a.pairing(&b).unwrap(), 11.0);
        let e1 = AtomicVector::new(vec![1.0, 0.0]);
        let e2 = AtomicVector::new(vec![0.0, 1.0]);
        assert_eq!(e1.pairing(&e2).unwrap(), 0.0);
    }

    #[test]
    fn step_pairing_is_integral() {
        let one = step(1, 1, &[1.0, 1.0]);
        assert_eq!(one.pairing(&one).unwrap(), 1.0);
    }

    #[test]
    fn pairing_shape_errors() {
        let a: Element = AtomicVector::new(vec![1.0]).into();
        let b: Element = AtomicVector::new(vec![1.0, 2.0]).into();
        let s: Element = step(1, 0, &[1.0]).into();
        let t: Element = step(1, 1, &[1.0, 1.0]).into();
        assert!(matches!(pairing(&a, &b), Err(Error::ShapeMismatch(_))));
        assert!(matches!(pairing(&a, &s), Err(Error::ShapeMismatch(_))));
        assert!(matches!(pairing(&s, &t), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn cond_expect_examples() {
        assert_eq!(step(1, 1, &[2.0, 4.0]).cond_expect(0).unwrap(), step(1, 0, &[3.0]));
        let f = step(1, 2, &[1.0, 3.0, 5.0, 7.0]);
        assert_eq!(f.cond_expect(2).unwrap(), f);
        assert_eq!(f.cond_expect(1).unwrap(), step(1, 1, &[2.0, 6.0]));
        assert!(matches!(
            f.cond_expect(3),
            Err(Error::LevelTooFine { target: 3, source_level: 2 })
        ));
    }

    #[test]
    fn cond_expect_preserves_integral() {
        let f = step(3, 3, &(0..24).map(|i| (i as f64 * 0.37).sin()).collect::<Vec<_>>());
        for n in 0..=3 {
            let g = f.cond_expect(n).unwrap();
            assert!((g.integral() - f.integral()).abs() < 1e-12);
        }
    }

    #[test]
    fn json_shape() {
        let s: DyadicStep = serde_json::from_str(r#"{"k":1,"level":1,"values":[0,5]}"#).unwrap();
        assert_eq!(s, step(1, 1, &[0.0, 5.0]));
        let bad = serde_json::from_str::<DyadicStep>(r#"{"k":1,"level":1,"values":[0]}"#);
        assert!(bad.unwrap_err().to_string().contains("values"));
    }
}
