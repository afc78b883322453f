//! The truncated functional `Φ_N`, its block pieces `Φ_{n,j}`, the cyclic
//! shifts `S_{n,j}`, and the projection `P_k` onto the consistent subspace.
//!
//! `Φ_N(x) = (k·2^N)^{-1/q} Σ_j x_N(j)` reads only the finest level. It
//! takes the value 1 on `u`, vanishes on stacks whose finest level sums to
//! zero, and has norm at most 1. Block sums are accumulated as balanced
//! pairwise trees aligned with the dyadic blocks, so identical blocks at
//! different offsets give bit-identical sums.

use crate::error::Result;
use crate::params::Params;

use super::stack::{cascade_down, LevelStack};

/// Sum of a power-of-two-length slice as a balanced binary tree.
fn tree_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            tree_sum(a) + tree_sum(b)
        }
    }
}

/// `Φ_N` for stacks of a fixed shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncFunctional {
    k: usize,
    top_level: usize,
    weight: f64,
}

impl TruncFunctional {
    pub fn new(k: usize, top_level: usize, params: Params) -> Self {
        let len = (k << top_level) as f64;
        Self {
            k,
            top_level,
            weight: len.powf(-params.inv_q()),
        }
    }

    pub fn for_stack(x: &LevelStack, params: Params) -> Self {
        Self::new(x.k(), x.top_level(), params)
    }

    /// `(k·2^N)^{-1/q}`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn eval(&self, x: &LevelStack) -> f64 {
        debug_assert_eq!((x.k(), x.top_level()), (self.k, self.top_level));
        let width = 1usize << self.top_level;
        let s: f64 = x.top().chunks_exact(width).map(tree_sum).sum();
        self.weight * s
    }

    /// `Φ_{n,j}(x)`: `Φ_N` of `x` restricted to the descendants of the
    /// level-`n` cell `j` (0-based).
    pub fn eval_block(&self, x: &LevelStack, n: usize, j: usize) -> Result<f64> {
        x.check_block(n, j)?;
        let width = 1usize << (self.top_level - n);
        Ok(self.weight * tree_sum(&x.top()[j * width..(j + 1) * width]))
    }
}

/// `Φ_N(x)`.
pub fn phi_eval(x: &LevelStack, params: Params) -> f64 {
    TruncFunctional::for_stack(x, params).eval(x)
}

/// `Φ_{n,j}(x)` with 0-based `j < k·2^n`.
pub fn phi_nj_eval(x: &LevelStack, n: usize, j: usize, params: Params) -> Result<f64> {
    TruncFunctional::for_stack(x, params).eval_block(x, n, j)
}

/// `χ_{A_{n,j}} x`: keeps, on every level `m ≥ n`, the `2^{m-n}` entries
/// descending from cell `(n, j)`; everything else is zeroed.
pub fn restrict_block(x: &LevelStack, n: usize, j: usize) -> Result<LevelStack> {
    x.check_block(n, j)?;
    let mut out = LevelStack::zeros(x.k(), x.top_level())?;
    for m in n..=x.top_level() {
        let width = 1usize << (m - n);
        let range = j * width..(j + 1) * width;
        out.level_mut(m)[range.clone()].copy_from_slice(&x.level(m)[range]);
    }
    Ok(out)
}

/// `S_{n,j}`: zeroes levels below `n` and cyclically shifts every level
/// `m ≥ n` left by `j·2^{m-n}` places (0-based `j`), so cell `(n, j)` lands
/// on cell `(n, 0)`.
pub fn shift_snj(x: &LevelStack, n: usize, j: usize) -> Result<LevelStack> {
    x.check_block(n, j)?;
    let mut out = LevelStack::zeros(x.k(), x.top_level())?;
    for m in n..=x.top_level() {
        let src = x.level(m);
        let offset = (j << (m - n)) % src.len();
        let dst = out.level_mut(m);
        dst[..src.len() - offset].copy_from_slice(&src[offset..]);
        dst[src.len() - offset..].copy_from_slice(&src[..offset]);
    }
    Ok(out)
}

/// `P_k x`: level `n` cell `j` becomes `(k·2^n)^{1/q} Φ_{n,j}(x)`, i.e.
/// `2^{-(N-n)/q}` times the sum of `x_N` over the block. The finest level is
/// kept and input levels below `N` are discarded.
pub fn p_project(x: &LevelStack, params: Params) -> LevelStack {
    cascade_down(x.k(), x.top().to_vec(), x.top_level(), params)
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;
    use crate::element::DyadicStep;
    use crate::embeddings::stack::{stack_norm, t_embed, yk_check};
    use crate::error::Error;
    use crate::params::make_params;

    fn sample(k: usize, top_level: usize) -> LevelStack {
        let levels = (0..=top_level)
            .map(|n| (0..k << n).map(|i| ((i * 31 + n * 17) % 13) as f64 / 4.0 - 1.5).collect())
            .collect();
        LevelStack::new(k, top_level, levels).unwrap()
    }

    #[test]
    fn phi_of_unit_is_one() {
        for p in [1.5, 2.0, 3.0] {
            let params = make_params(p).unwrap();
            for (k, n) in [(1, 0), (1, 3), (2, 4), (4, 2)] {
                let u = LevelStack::unit(k, n, params).unwrap();
                assert_relative_eq!(phi_eval(&u, params), 1.0, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn phi_annihilates_zero_sum_top() {
        let params = make_params(2.0).unwrap();
        let mut x = sample(2, 2);
        x.level_mut(2).copy_from_slice(&[1.0, -1.0, 3.5, -3.5, 0.25, -0.25, 7.0, -7.0]);
        assert_eq!(phi_eval(&x, params), 0.0);
    }

    #[test]
    fn phi_bounded_by_stack_norm() {
        for p in [1.5, 2.0, 3.0] {
            let params = make_params(p).unwrap();
            let x = sample(3, 4);
            assert!(phi_eval(&x, params).abs() <= stack_norm(&x, params) + 1e-12);
        }
    }

    #[test]
    fn block_functionals_sum_to_phi() {
        let params = make_params(3.0).unwrap();
        let x = sample(2, 4);
        let total = phi_eval(&x, params);
        for n in 0..=4 {
            let s: f64 = (0..2 << n).map(|j| phi_nj_eval(&x, n, j, params).unwrap()).sum();
            assert!((s - total).abs() <= 1e-12);
        }
    }

    #[test]
    fn block_functional_on_unit() {
        let params = make_params(1.5).unwrap();
        let (k, top) = (2, 3);
        let u = LevelStack::unit(k, top, params).unwrap();
        for n in 0..=top {
            for j in 0..k << n {
                let v = phi_nj_eval(&u, n, j, params).unwrap();
                assert_relative_eq!(v, 1.0 / (k << n) as f64, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn block_functional_outside_support() {
        let params = make_params(2.0).unwrap();
        let mut x = LevelStack::zeros(1, 3).unwrap();
        x.level_mut(3)[5] = 4.0;
        assert_eq!(phi_nj_eval(&x, 1, 0, params).unwrap(), 0.0);
        assert!(phi_nj_eval(&x, 1, 1, params).unwrap() > 0.0);
    }

    #[test]
    fn block_range_errors() {
        let params = make_params(2.0).unwrap();
        let x = sample(1, 2);
        assert!(matches!(phi_nj_eval(&x, 3, 0, params), Err(Error::BlockOutOfRange { .. })));
        assert!(matches!(phi_nj_eval(&x, 1, 2, params), Err(Error::BlockOutOfRange { .. })));
        assert!(shift_snj(&x, 0, 1).is_err());
        assert!(restrict_block(&x, 2, 4).is_err());
    }

    #[test]
    fn shift_by_zero_only_truncates() {
        let x = sample(2, 3);
        let z = shift_snj(&x, 2, 0).unwrap();
        for m in 0..2 {
            assert!(z.level(m).iter().all(|&v| v == 0.0));
        }
        for m in 2..=3 {
            assert_eq!(z.level(m), x.level(m));
        }
    }

    #[test]
    fn shift_examples() {
        let x = LevelStack::new(1, 2, vec![vec![9.0], vec![1.0, 2.0], vec![1.0, 2.0, 3.0, 4.0]]).unwrap();
        let z = shift_snj(&x, 1, 1).unwrap();
        assert_eq!(z.levels(), &[vec![0.0], vec![2.0, 1.0], vec![3.0, 4.0, 1.0, 2.0]]);
    }

    #[test]
    fn shift_is_contractive_and_in_kernel() {
        let params = make_params(2.0).unwrap();
        let x = sample(2, 4);
        for n in 0..=4 {
            for j in 0..2 << n {
                let z = shift_snj(&x, n, j).unwrap();
                assert!(stack_norm(&z, params) <= stack_norm(&x, params));
                let y = shift_snj(&x, n, 0).unwrap();
                let diff = y.add_scaled(&z, -1.0).unwrap();
                assert!(phi_eval(&diff, params).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn shift_moves_block_functional_exactly() {
        let params = make_params(1.5).unwrap();
        let x = sample(4, 4);
        for n in 0..=4 {
            for j in 0..4 << n {
                let moved = shift_snj(&restrict_block(&x, n, j).unwrap(), n, j).unwrap();
                assert_eq!(
                    phi_nj_eval(&x, n, j, params).unwrap(),
                    phi_nj_eval(&moved, n, 0, params).unwrap()
                );
            }
        }
    }

    #[test]
    fn project_example() {
        let params = make_params(2.0).unwrap();
        let x = LevelStack::new(1, 1, vec![vec![5.0], vec![1.0, 1.0]]).unwrap();
        let y = p_project(&x, params);
        assert_relative_eq!(y.level(0)[0], 2f64.sqrt(), max_relative = 1e-15);
        assert_eq!(y.level(1), &[1.0, 1.0]);
    }

    #[test]
    fn project_is_consistent_idempotent_and_fixes_embedded() {
        let params = make_params(3.0).unwrap();
        let x = sample(2, 5);
        let y = p_project(&x, params);
        assert!(yk_check(&y, params).max_violation <= 1e-12);
        assert_eq!(p_project(&y, params), y);

        let f = DyadicStep::new(2, 4, (0..32).map(|i| (i as f64 * 0.7).sin()).collect()).unwrap();
        let t = t_embed(&f, params);
        let pt = p_project(&t, params);
        for (a, b) in t.levels().iter().flatten().zip(pt.levels().iter().flatten()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn project_matches_block_functionals() {
        let params = make_params(1.5).unwrap();
        let x = sample(2, 3);
        let y = p_project(&x, params);
        for n in 0..=3 {
            let scale = ((2usize << n) as f64).powf(params.inv_q());
            for j in 0..2 << n {
                let expected = scale * phi_nj_eval(&x, n, j, params).unwrap();
                assert!((y.level(n)[j] - expected).abs() <= 1e-12);
            }
        }
    }
}
