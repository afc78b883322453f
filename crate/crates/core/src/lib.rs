//! Exact computations in finite weak-`L^p` (Lorentz) spaces.
//!
//! Objects are finite atomic sequences (counting measure) and step functions
//! on `[0, k]` that are constant on dyadic intervals. For these the norm
//! `‖f‖ = sup_B ∫_B |f| / μ(B)^{1/q}`, the quasi-norm
//! `|||f||| = sup_t t^{1/p} f*(t)` and the `L^{q,1}` norm are computed in
//! closed form from the decreasing rearrangement.
//!
//! The [`embeddings`] module holds truncated versions of the operators
//! relating `L^{p,∞}[0,k]`, the level-stack spaces `X_k` and `ℓ^{p,∞}`.

pub mod element;
pub mod embeddings;
pub mod error;
pub mod norms;
pub mod params;
pub mod rearrange;

pub use element::{cond_expect, pairing, AtomicVector, DyadicStep, Element};
pub use error::{Error, Result};
pub use norms::{lq1_norm, norms_of, quasi_norm, quasi_norm_of, weak_norm, weak_norm_of, NormTriple};
pub use params::{make_params, Params};
pub use rearrange::{rearrange, Piece, Rearrange, RearrangementProfile};
