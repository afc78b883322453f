//! Suites for the block embedding into a single sequence space, the
//! block-averaging projection and the restriction tower.

use rand::Rng;
use weaklp::embeddings::{self as emb, BlockLayout, LevelStack};
use weaklp::{rearrange, weak_norm, weak_norm_of, AtomicVector};

use super::{TrialCtx, BLOCK_SUITE_MAX_LEVEL, SLACK_CLOSED, SLACK_IDENTITY, SLACK_NORM};
use crate::error::Result;
use crate::generate::{random_stack, random_step, random_values};
use crate::report::{Check, TrialOutcome};

fn k1_stack(ctx: &mut TrialCtx) -> Result<(LevelStack, BlockLayout, String)> {
    let top = ctx.level_up_to(BLOCK_SUITE_MAX_LEVEL);
    let dist = ctx.dist();
    let x = random_stack(&mut ctx.rng, 1, top, dist);
    let layout = emb::build_layout(top)?;
    Ok((x, layout, format!("stack k=1 N={top} dist={}", dist.name())))
}

/// `‖x‖ ≤ ‖Rx‖ ≤ 2^{1+1/p}‖x‖` and the layout capacity condition.
pub fn r_embed(ctx: &mut TrialCtx) -> Result<TrialOutcome> {
    let params = ctx.params;
    let (x, layout, digest) = k1_stack(ctx)?;
    let r = emb::r_embed(&x, &layout, params)?;
    let nr = weak_norm_of(&r.atoms, params);
    let nr_profile = weak_norm(&emb::r_embed_profile(&x, &layout, params)?, params);
    let nx = emb::stack_norm(&x, params);
    let upper = (1.0 + params.inv_p()).exp2();

    let mut out = TrialOutcome::new(digest);
    out.measure("stack_norm", nx);
    out.measure("r_norm", nr);
    out.check(Check::le("lower", nx, nr, SLACK_NORM));
    out.check(Check::le("upper", nr, upper * nx, SLACK_NORM));
    out.check(Check::close("profile_agrees", nr_profile, nr, SLACK_IDENTITY));
    for l in 1..=layout.top_level() {
        out.check(Check::le("capacity", layout.mass_below(l) as f64, layout.m()[l] as f64, 0.0));
    }
    out.observe_ratio(nr, nx);
    Ok(out)
}

/// Split of `Rx` into dominated and undominated blocks.
pub fn parts(ctx: &mut TrialCtx) -> Result<TrialOutcome> {
    let params = ctx.params;
    let (x, layout, digest) = k1_stack(ctx)?;
    let split = emb::r_split(&x, &layout, params)?;
    let nx = emb::stack_norm(&x, params);
    let bound = params.inv_p().exp2() * nx;

    let mut out = TrialOutcome::new(digest);
    out.measure("stack_norm", nx);
    out.measure("norm_a", split.norm_a);
    out.measure("norm_ac", split.norm_ac);
    out.measure("a_size", split.a_set.len() as f64);
    out.check(Check::le("a_le_ac", split.norm_a, split.norm_ac, SLACK_NORM));
    out.check(Check::le("ac_le_2^(1/p)", split.norm_ac, bound, SLACK_NORM));
    out.observe_ratio(split.norm_ac, nx);
    Ok(out)
}

/// Block averaging: idempotent, block-constant, contractive.
pub fn w_project(ctx: &mut TrialCtx) -> Result<TrialOutcome> {
    let params = ctx.params;
    let top = ctx.level_up_to(BLOCK_SUITE_MAX_LEVEL);
    let layout = emb::build_layout(top)?;
    let dist = ctx.dist();
    let a = AtomicVector::new(random_values(&mut ctx.rng, layout.total_length(), dist));
    let w = emb::w_project(&a, &layout)?;
    let ww = emb::w_project(&w, &layout)?;
    let constant = layout
        .blocks()
        .all(|(_, _, start, len)| w.atoms[start..start + len].iter().all(|&v| v == w.atoms[start]));
    let na = weak_norm(&rearrange(&a), params);
    let nw = weak_norm(&rearrange(&w), params);

    let mut out = TrialOutcome::new(format!("layout N={top} len={} dist={}", layout.total_length(), dist.name()));
    out.measure("norm", na);
    out.measure("projected_norm", nw);
    out.check(Check::exact("idempotent", ww == w));
    out.check(Check::exact("block_constant", constant));
    out.check(Check::le("contraction", nw, na, SLACK_CLOSED));
    out.observe_ratio(nw, na);
    Ok(out)
}

/// Restriction tower of a compactly supported step: isometry and exact
/// recovery by the last component.
pub fn tower(ctx: &mut TrialCtx) -> Result<TrialOutcome> {
    let params = ctx.params;
    let k = ctx.any_k();
    let level = ctx.level_up_to(ctx.caps.max_level);
    let dist = ctx.dist();
    let mut f = random_step(&mut ctx.rng, k, level, dist);
    // Support inside [0, cut / 2^level].
    let cut = ctx.rng.random_range(0..=f.values().len());
    let mut values = f.values().to_vec();
    values[cut..].fill(0.0);
    f = weaklp::DyadicStep::new(k, level, values)?;

    let tower = emb::restrict_tower(&f);
    let limit = emb::tower_limit(&tower)?;
    let nf = weak_norm(&rearrange(&f), params);
    let norms: Vec<f64> = tower.iter().map(|c| weak_norm(&rearrange(c), params)).collect();
    let max = norms.iter().copied().fold(0.0, f64::max);

    let mut out = TrialOutcome::new(format!("step K={k} level={level} cut={cut} dist={}", dist.name()));
    out.measure("norm", nf);
    out.measure("max_component_norm", max);
    out.check(Check::exact("limit_recovers_f", limit == f));
    out.check(Check::exact("component_count", tower.len() == k));
    out.check(Check::close("isometry", max, nf, SLACK_IDENTITY));
    for n in &norms {
        out.check(Check::le("component_le_norm", *n, nf, SLACK_CLOSED));
    }
    out.observe_ratio(max, nf);
    Ok(out)
}
