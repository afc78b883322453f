//! The three Lorentz-type functionals evaluated exactly on a rearrangement.
//!
//! * `weak_norm`: `‖f‖ = sup_B ∫_B |f| / μ(B)^{1/q}`. Over a nonatomic measure
//!   (or over sets of fixed cardinality) the supremum is attained by initial
//!   segments of `f*`, so it equals `sup_t G(t)` with
//!   `G(t) = t^{-1/q} ∫_0^t f*`.
//! * `quasi_norm`: `|||f||| = sup_t t^{1/p} f*(t)`.
//! * `lq1_norm`: `‖f‖_{q,1} = ∫_0^∞ t^{-1/p} f*(t) dt`.

use serde::Serialize;

use crate::params::Params;
use crate::rearrange::{Rearrange, RearrangementProfile};

/// Exact `sup_t G(t)` over a step profile.
///
/// On a piece of constant value `v > 0` starting at `t0` with accumulated
/// integral `A`, `G` has a single stationary point
/// `t* = (A - v t0) / (v (q - 1))`. Both the piece endpoints and `t*` (when
/// it falls strictly inside the piece) are evaluated.
pub fn weak_norm(f: &RearrangementProfile, params: Params) -> f64 {
    let inv_q = params.inv_q();
    let q = params.q();
    let mut best = 0.0f64;
    let mut acc = 0.0;
    let mut t0 = 0.0;
    for piece in f.steps() {
        let v = piece.value;
        let t1 = t0 + piece.mass;
        if v > 0.0 {
            let t_star = (acc - v * t0) / (v * (q - 1.0));
            if t_star > t0 && t_star < t1 {
                let g = (acc + v * (t_star - t0)) / t_star.powf(inv_q);
                best = best.max(g);
            }
        }
        acc += v * piece.mass;
        t0 = t1;
        if t0 > 0.0 {
            best = best.max(acc / t0.powf(inv_q));
        }
    }
    best
}

/// `max_i v_i · t_i^{1/p}` over right endpoints `t_i`.
pub fn quasi_norm(f: &RearrangementProfile, params: Params) -> f64 {
    let inv_p = params.inv_p();
    let mut t = 0.0;
    let mut best = 0.0f64;
    for piece in f.steps() {
        t += piece.mass;
        best = best.max(piece.value * t.powf(inv_p));
    }
    best
}

/// Closed form `Σ_i v_i q (t_i^{1/q} - t_{i-1}^{1/q})`.
pub fn lq1_norm(f: &RearrangementProfile, params: Params) -> f64 {
    let inv_q = params.inv_q();
    let q = params.q();
    let mut t = 0.0f64;
    let mut prev = 0.0;
    let mut total = 0.0;
    for piece in f.steps() {
        t += piece.mass;
        let cur = t.powf(inv_q);
        total += piece.value * q * (cur - prev);
        prev = cur;
    }
    total
}

/// All three values for one object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormTriple {
    pub weak: f64,
    pub quasi: f64,
    pub lq1: f64,
}

pub fn norms_of<R: Rearrange + ?Sized>(f: &R, params: Params) -> NormTriple {
    let profile = f.rearrange();
    NormTriple {
        weak: weak_norm(&profile, params),
        quasi: quasi_norm(&profile, params),
        lq1: lq1_norm(&profile, params),
    }
}

/// `‖·‖` of a plain slice under counting measure.
pub fn weak_norm_of(values: &[f64], params: Params) -> f64 {
    weak_norm(&values.rearrange(), params)
}

/// `|||·|||` of a plain slice under counting measure.
pub fn quasi_norm_of(values: &[f64], params: Params) -> f64 {
    quasi_norm(&values.rearrange(), params)
}
