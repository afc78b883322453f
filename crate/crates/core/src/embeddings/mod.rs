//! Finite truncations of the operators that embed `L^{p,∞}[0,∞)`
//! complementably into `ℓ^{p,∞}`.

mod functional;
mod layout;
mod stack;
mod tower;

pub use functional::{p_project, phi_eval, phi_nj_eval, restrict_block, shift_snj, TruncFunctional};
pub use layout::{
    build_layout, r_embed, r_embed_profile, r_split, w_project, BlockLayout, BlockRunVector, SplitDiagnostic,
    MATERIALIZE_LIMIT,
};
pub use stack::{
    stack_norm, t_embed, yk_check, yk_reconstruct, LevelStack, YkMembership, RECONSTRUCT_TOLERANCE, YK_TOLERANCE,
};
pub use tower::{restrict_tower, tower_limit};
