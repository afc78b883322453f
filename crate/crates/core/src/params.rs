use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Conjugate exponent pair `(p, q)` with `1/p + 1/q = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    p: f64,
    q: f64,
}

impl Params {
    /// Builds the pair from `p`, rejecting `p <= 1`, non-finite `p`, and
    /// values so large that the conjugate rounds to 1.
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        let q = p / (p - 1.0);
        if !q.is_finite() || q <= 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn inv_p(&self) -> f64 {
        1.0 / self.p
    }

    pub fn inv_q(&self) -> f64 {
        1.0 / self.q
    }
}

impl<'de> Deserialize<'de> for Params {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            p: f64,
        }
        let raw = Raw::deserialize(de)?;
        Params::new(raw.p).map_err(serde::de::Error::custom)
    }
}

/// Free-function form of [`Params::new`].
pub fn make_params(p: f64) -> Result<Params> {
    Params::new(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_conjugate() {
        let params = make_params(2.0).unwrap();
        assert_eq!(params.q(), 2.0);
    }

    #[test]
    fn p_three() {
        assert_eq!(make_params(3.0).unwrap().q(), 1.5);
    }

    #[test]
    fn rejects_out_of_domain() {
        for p in [1.0, 0.5, -3.0, f64::NAN, f64::INFINITY, 1e300] {
            assert!(
                matches!(make_params(p), Err(Error::InvalidExponent(_))),
                "p={p} accepted"
            );
        }
    }

    #[test]
    fn conjugate_identity() {
        for p in [1.001, 1.5, 2.0, 3.0, 7.25, 1e6] {
            let params = make_params(p).unwrap();
            let s = params.inv_p() + params.inv_q();
            assert!((s - 1.0).abs() <= 1e-15, "p={p}: {s}");
            assert!(params.q() > 1.0);
        }
    }
}
