//! Truncated level stacks and the dyadic-averaging embedding `T_k`.

use serde::{Deserialize, Serialize};

use crate::element::{cells, DyadicStep};
use crate::error::{Error, Result};
use crate::norms::weak_norm_of;
use crate::params::Params;

/// Tolerance under which a stack counts as dyadically consistent.
pub const YK_TOLERANCE: f64 = 1e-12;

/// Tolerance accepted by [`yk_reconstruct`].
pub const RECONSTRUCT_TOLERANCE: f64 = 1e-9;

/// Element of the truncated `ℓ^∞`-sum of `ℓ^{p,∞}(k·2^n)`, `n = 0..=N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStack")]
pub struct LevelStack {
    k: usize,
    #[serde(rename = "N")]
    top_level: usize,
    levels: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
struct RawStack {
    k: usize,
    #[serde(rename = "N")]
    top_level: usize,
    levels: Vec<Vec<f64>>,
}

impl TryFrom<RawStack> for LevelStack {
    type Error = Error;

    fn try_from(raw: RawStack) -> Result<Self> {
        LevelStack::new(raw.k, raw.top_level, raw.levels)
    }
}

impl LevelStack {
    pub fn new(k: usize, top_level: usize, levels: Vec<Vec<f64>>) -> Result<Self> {
        cells(k, top_level)?;
        if levels.len() != top_level + 1 {
            return Err(Error::InvalidInput {
                field: "levels",
                reason: format!("expected N+1 = {} levels, found {}", top_level + 1, levels.len()),
            });
        }
        for (n, level) in levels.iter().enumerate() {
            let expected = k << n;
            if level.len() != expected {
                return Err(Error::InvalidInput {
                    field: "levels",
                    reason: format!("level {n} must have k*2^n = {expected} entries, found {}", level.len()),
                });
            }
            if let Some(i) = level.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidInput {
                    field: "levels",
                    reason: format!("level {n} entry {i} is not finite"),
                });
            }
        }
        Ok(Self { k, top_level, levels })
    }

    pub fn zeros(k: usize, top_level: usize) -> Result<Self> {
        cells(k, top_level)?;
        let levels = (0..=top_level).map(|n| vec![0.0; k << n]).collect();
        Ok(Self { k, top_level, levels })
    }

    /// The stack `u` with `u_n(j) = (k·2^n)^{-1/p}`.
    pub fn unit(k: usize, top_level: usize, params: Params) -> Result<Self> {
        cells(k, top_level)?;
        let levels = (0..=top_level)
            .map(|n| {
                let len = k << n;
                vec![(len as f64).powf(-params.inv_p()); len]
            })
            .collect();
        Ok(Self { k, top_level, levels })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn top_level(&self) -> usize {
        self.top_level
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> &[f64] {
        &self.levels[n]
    }

    pub fn level_mut(&mut self, n: usize) -> &mut [f64] {
        &mut self.levels[n]
    }

    pub fn top(&self) -> &[f64] {
        &self.levels[self.top_level]
    }

    pub fn same_shape(&self, other: &LevelStack) -> bool {
        self.k == other.k && self.top_level == other.top_level
    }

    /// Entrywise `self + scale * other`.
    pub fn add_scaled(&self, other: &LevelStack, scale: f64) -> Result<LevelStack> {
        if !self.same_shape(other) {
            return Err(Error::ShapeMismatch(format!(
                "stacks (k={}, N={}) and (k={}, N={})",
                self.k, self.top_level, other.k, other.top_level
            )));
        }
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + scale * y).collect())
            .collect();
        Ok(LevelStack { k: self.k, top_level: self.top_level, levels })
    }

    pub fn scale(&self, factor: f64) -> LevelStack {
        LevelStack {
            k: self.k,
            top_level: self.top_level,
            levels: self
                .levels
                .iter()
                .map(|l| l.iter().map(|v| v * factor).collect())
                .collect(),
        }
    }

    pub(crate) fn from_parts(k: usize, top_level: usize, levels: Vec<Vec<f64>>) -> Self {
        debug_assert_eq!(levels.len(), top_level + 1);
        Self { k, top_level, levels }
    }

    pub(crate) fn check_block(&self, n: usize, j: usize) -> Result<()> {
        if n > self.top_level || j >= self.k << n {
            return Err(Error::BlockOutOfRange {
                level: n,
                block: j,
                k: self.k,
                top_level: self.top_level,
            });
        }
        Ok(())
    }
}

/// Fills coarser levels from the top one by the consistency recursion
/// `x_n(j) = 2^{-1/q} (x_{n+1}(2j-1) + x_{n+1}(2j))`.
pub(crate) fn cascade_down(k: usize, top: Vec<f64>, top_level: usize, params: Params) -> LevelStack {
    let c = coarsen_factor(params);
    let mut levels = vec![Vec::new(); top_level + 1];
    levels[top_level] = top;
    for n in (0..top_level).rev() {
        let next = levels[n + 1].chunks_exact(2).map(|p| c * (p[0] + p[1])).collect();
        levels[n] = next;
    }
    LevelStack::from_parts(k, top_level, levels)
}

pub(crate) fn coarsen_factor(params: Params) -> f64 {
    (-params.inv_q()).exp2()
}

/// `T_k f`: `x_n(j) = 2^{n/q} ∫ f` over the `j`-th level-`n` interval, for
/// `n = 0..=N` where `N` is the level of `f`.
///
/// The finest level is `x_N = 2^{-N/p} f`; coarser levels follow from
/// pairwise sums, which is exactly additivity of the integral.
pub fn t_embed(f: &DyadicStep, params: Params) -> LevelStack {
    let top_level = f.level();
    let scale = (-(top_level as f64) * params.inv_p()).exp2();
    let top = f.values().iter().map(|v| v * scale).collect();
    cascade_down(f.k(), top, top_level, params)
}

/// `sup_n ‖x_n‖`.
pub fn stack_norm(x: &LevelStack, params: Params) -> f64 {
    x.levels()
        .iter()
        .map(|l| weak_norm_of(l, params))
        .fold(0.0, f64::max)
}

/// Worst deviation from the dyadic consistency relation.
#[derive(Debug, Clone, PartialEq)]
pub struct YkMembership<'a> {
    pub stack: &'a LevelStack,
    pub max_violation: f64,
    /// `(n, j)` (0-based `j`) where the worst violation occurs.
    pub worst: Option<(usize, usize)>,
}

impl YkMembership<'_> {
    pub fn is_member(&self) -> bool {
        self.max_violation <= YK_TOLERANCE
    }
}

pub fn yk_check(x: &LevelStack, params: Params) -> YkMembership<'_> {
    let c = coarsen_factor(params);
    let mut max_violation = 0.0f64;
    let mut worst = None;
    for n in 0..x.top_level() {
        let fine = x.level(n + 1);
        for (j, &coarse) in x.level(n).iter().enumerate() {
            let v = (coarse - c * (fine[2 * j] + fine[2 * j + 1])).abs();
            if v > max_violation {
                max_violation = v;
                worst = Some((n, j));
            }
        }
    }
    YkMembership { stack: x, max_violation, worst }
}

/// Inverse of [`t_embed`] on consistent stacks: `f_N = 2^{N/p} x_N`.
pub fn yk_reconstruct(x: &LevelStack, params: Params) -> Result<DyadicStep> {
    let check = yk_check(x, params);
    if check.max_violation > RECONSTRUCT_TOLERANCE {
        let (level, block) = check.worst.unwrap_or((0, 0));
        return Err(Error::NotConsistent {
            level,
            block,
            violation: check.max_violation,
        });
    }
    let scale = (x.top_level() as f64 * params.inv_p()).exp2();
    DyadicStep::new(x.k(), x.top_level(), x.top().iter().map(|v| v * scale).collect())
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::params::make_params;

    fn p2() -> Params {
        make_params(2.0).unwrap()
    }

    #[test]
    fn embed_indicator_of_unit_interval() {
        let f = DyadicStep::new(1, 2, vec![1.0; 4]).unwrap();
        let x = t_embed(&f, p2());
        let h = 0.5f64.sqrt();
        assert_relative_eq!(x.level(0)[0], 1.0, max_relative = 1e-15);
        for &v in x.level(1) {
            assert_relative_eq!(v, h, max_relative = 1e-15);
        }
        for &v in x.level(2) {
            assert_relative_eq!(v, 0.5, max_relative = 1e-15);
        }
        assert_relative_eq!(stack_norm(&x, p2()), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn embed_half_indicator() {
        let f = DyadicStep::new(1, 1, vec![1.0, 0.0]).unwrap();
        let x = t_embed(&f, p2());
        assert_relative_eq!(x.level(0)[0], 0.5, max_relative = 1e-15);
        assert_relative_eq!(x.level(1)[0], 0.5f64.sqrt(), max_relative = 1e-15);
        assert_eq!(x.level(1)[1], 0.0);
        assert_relative_eq!(stack_norm(&x, p2()), 0.5f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn embed_zero() {
        let x = t_embed(&DyadicStep::zeros(3, 2).unwrap(), p2());
        assert_eq!(x, LevelStack::zeros(3, 2).unwrap());
        assert_eq!(stack_norm(&x, p2()), 0.0);
    }

    #[test]
    fn embed_matches_defining_integrals() {
        let params = make_params(3.0).unwrap();
        let vals: Vec<f64> = (0..16).map(|i| (i as f64 * 1.3).cos()).collect();
        let f = DyadicStep::new(2, 3, vals.clone()).unwrap();
        let x = t_embed(&f, params);
        for n in 0..=3usize {
            let width = 1 << (3 - n);
            for j in 0..(2 << n) {
                let integral: f64 = vals[j * width..(j + 1) * width].iter().sum::<f64>() / 8.0;
                let expected = (n as f64 / params.q()).exp2() * integral;
                assert!((x.level(n)[j] - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn single_level_norm() {
        let mut x = LevelStack::zeros(1, 2).unwrap();
        x.level_mut(1).copy_from_slice(&[3.0, -1.0]);
        assert_eq!(stack_norm(&x, p2()), weak_norm_of(&[3.0, -1.0], p2()));
    }

    #[test]
    fn yk_examples() {
        let f = DyadicStep::new(2, 4, (0..32).map(|i| i as f64 - 7.5).collect()).unwrap();
        let x = t_embed(&f, p2());
        assert!(yk_check(&x, p2()).max_violation <= 1e-12);

        let x = LevelStack::new(1, 1, vec![vec![0.0], vec![1.0, -1.0]]).unwrap();
        assert_eq!(yk_check(&x, p2()).max_violation, 0.0);

        let x = LevelStack::new(1, 1, vec![vec![1.0], vec![0.0, 0.0]]).unwrap();
        let m = yk_check(&x, p2());
        assert_eq!(m.max_violation, 1.0);
        assert_eq!(m.worst, Some((0, 0)));
        assert!(!m.is_member());
    }

    #[test]
    fn reconstruct_roundtrip() {
        let params = make_params(1.5).unwrap();
        let f = DyadicStep::new(3, 3, (0..24).map(|i| (i as f64).sqrt() - 2.0).collect()).unwrap();
        let g = yk_reconstruct(&t_embed(&f, params), params).unwrap();
        for (a, b) in f.values().iter().zip(g.values()) {
            assert!((a - b).abs() <= 1e-12);
        }
        let z = yk_reconstruct(&LevelStack::zeros(2, 2).unwrap(), params).unwrap();
        assert_eq!(z, DyadicStep::zeros(2, 2).unwrap());
    }

    #[test]
    fn reconstruct_point_mass() {
        let top = vec![1.0, 0.0, 0.0, 0.0];
        let x = cascade_down(1, top, 2, p2());
        let f = yk_reconstruct(&x, p2()).unwrap();
        assert_relative_eq!(f.values()[0], 2.0, max_relative = 1e-15);
        assert_eq!(&f.values()[1..], &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn reconstruct_rejects_inconsistent() {
        let x = LevelStack::new(1, 1, vec![vec![1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            yk_reconstruct(&x, p2()),
            Err(Error::NotConsistent { level: 0, block: 0, .. })
        ));
    }

    #[test]
    fn stack_shape_validation() {
        assert!(LevelStack::new(1, 1, vec![vec![0.0]]).is_err());
        assert!(LevelStack::new(1, 1, vec![vec![0.0], vec![0.0]]).is_err());
        let err = serde_json::from_str::<LevelStack>(r#"{"k":2,"N":0,"levels":[[1]]}"#).unwrap_err();
        assert!(err.to_string().contains("levels"));
        let ok: LevelStack = serde_json::from_str(r#"{"k":1,"N":1,"levels":[[1],[2,3]]}"#).unwrap();
        assert_eq!(serde_json::to_string(&ok).unwrap(), r#"{"k":1,"N":1,"levels":[[1.0],[2.0,3.0]]}"#);
    }
}
