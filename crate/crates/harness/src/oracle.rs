//! Literal subset enumeration for the weak norm.

use weaklp::{AtomicVector, Params};

use crate::error::{HarnessError, Result};

pub const ORACLE_MAX_LEN: usize = 20;

/// `max_B Σ_{i∈B} |a_i| / |B|^{1/q}` over all `2^n - 1` nonempty subsets.
pub fn oracle_norm(a: &AtomicVector, params: Params) -> Result<f64> {
    let n = a.len();
    if n > ORACLE_MAX_LEN {
        return Err(HarnessError::OracleTooLarge { len: n, limit: ORACLE_MAX_LEN });
    }
    let abs: Vec<f64> = a.atoms.iter().map(|v| v.abs()).collect();
    let denominators: Vec<f64> = (0..=n).map(|c| (c as f64).powf(params.inv_q())).collect();
    let mut best = 0.0f64;
    for mask in 1u32..(1u32 << n) {
        let mut sum = 0.0;
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            sum += abs[i];
            bits &= bits - 1;
        }
        best = best.max(sum / denominators[mask.count_ones() as usize]);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let p2 = Params::new(2.0).unwrap();
        assert_eq!(oracle_norm(&AtomicVector::new(vec![3.0, 1.0, 1.0]), p2).unwrap(), 3.0);
        assert_eq!(oracle_norm(&AtomicVector::new(vec![1.0; 4]), p2).unwrap(), 2.0);
        for p in [1.5, 3.0] {
            let params = Params::new(p).unwrap();
            assert_eq!(oracle_norm(&AtomicVector::new(vec![-4.25]), params).unwrap(), 4.25);
        }
    }

    #[test]
    fn refuses_long_input() {
        let p2 = Params::new(2.0).unwrap();
        assert!(matches!(
            oracle_norm(&AtomicVector::zeros(21), p2),
            Err(HarnessError::OracleTooLarge { len: 21, .. })
        ));
        assert_eq!(oracle_norm(&AtomicVector::default(), p2).unwrap(), 0.0);
    }
}
