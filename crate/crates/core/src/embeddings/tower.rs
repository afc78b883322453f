//! Restrictions `f ↦ (f χ_{[0,1]}, f χ_{[0,2]}, …)` and their finite
//! left inverse.

use crate::element::DyadicStep;
use crate::error::{Error, Result};

/// Component `k - 1` is `f` restricted to `[0, k]`, for `k = 1..=K`.
pub fn restrict_tower(f: &DyadicStep) -> Vec<DyadicStep> {
    let per_unit = 1usize << f.level();
    (1..=f.k())
        .map(|k| {
            DyadicStep::new(k, f.level(), f.values()[..k * per_unit].to_vec())
                .expect("prefix of a valid step is valid")
        })
        .collect()
}

/// Last component of the tower. For a tower produced by
/// [`restrict_tower`] this is the original function.
pub fn tower_limit(tower: &[DyadicStep]) -> Result<DyadicStep> {
    let last = tower.last().ok_or(Error::EmptyTower)?;
    for pair in tower.windows(2) {
        if pair[0].level() != pair[1].level() {
            return Err(Error::ShapeMismatch(format!(
                "tower mixes levels {} and {}",
                pair[0].level(),
                pair[1].level()
            )));
        }
        if pair[1].k() < pair[0].k() {
            return Err(Error::ShapeMismatch(format!(
                "tower intervals shrink from [0,{}] to [0,{}]",
                pair[0].k(),
                pair[1].k()
            )));
        }
    }
    Ok(last.clone())
}
