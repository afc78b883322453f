//! Suites for the level-stack embedding, the truncated functional and the
//! projection onto consistent stacks.

use rand::Rng;
use weaklp::embeddings::{self as emb, LevelStack};
use weaklp::{lq1_norm, quasi_norm_of, rearrange, weak_norm, weak_norm_of, DyadicStep};

use super::{TrialCtx, SLACK_IDENTITY, SLACK_NORM};
use crate::error::Result;
use crate::generate::{random_stack, random_step, random_values};
use crate::report::{Check, TrialOutcome};

fn step_instance(ctx: &mut TrialCtx, dyadic_k: bool) -> (DyadicStep, String) {
    let k = if dyadic_k { ctx.dyadic_k() } else { ctx.any_k() };
    let level = ctx.level_up_to(ctx.caps.max_level);
    let dist = ctx.dist();
    let f = random_step(&mut ctx.rng, k, level, dist);
    (f, format!("step k={k} N={level} dist={}", dist.name()))
}

fn stack_instance(ctx: &mut TrialCtx) -> (LevelStack, String) {
    let k = ctx.dyadic_k();
    let top = ctx.level_up_to(ctx.caps.max_level);
    let dist = ctx.dist();
    let x = random_stack(&mut ctx.rng, k, top, dist);
    (x, format!("stack k={k} N={top} dist={}", dist.name()))
}

fn max_abs_diff(a: &LevelStack, b: &LevelStack) -> f64 {
    a.levels()
        .iter()
        .flatten()
        .zip(b.levels().iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn max_abs(x: &LevelStack) -> f64 {
    x.levels().iter().flatten().map(|v| v.abs()).fold(0.0, f64::max)
}

/// `2^{n/q} |||(∫_{I_{n,j}} f)_j||| ≤ ‖f‖` for every level `n`.
pub fn boundf(ctx: &mut TrialCtx) -> Result<TrialOutcome> {
    let (f, digest) = step_instance(ctx, false);
    let params = ctx.params;
    let norm = weak_norm(&rearrange(&f), params);
    let mut out = TrialOutcome::new(digest);
    out.measure("weak_norm", norm);
    for n in 0..=f.level() {
        let cell = (-(n as f64)).exp2();
        let integrals: Vec<f64> = f.cond_expect(n)?.values().iter().map(|v| v * cell).collect();
        let lhs = (n as f64 * params.inv_q()).exp2() * quasi_norm_of(&integrals, params);
        out.check(Check::le("boundf", lhs, norm, SLACK_NORM));
        out.observe_ratio(lhs, norm);
    }
    Ok(out)
}

/// `‖f‖/q ≤ ‖T_k f‖ ≤ q‖f‖`, consistency of `T_k f`, and reconstruction.
pub fn t_embed(ctx: &mut TrialCtx) -> Result<TrialOutcome> {
    let (f, digest) = step_instance(ctx, true);
    let params = ctx.params;
    let q = params.q();
    let x = emb::t_embed(&f, params);
    let nf = weak_norm(&rearrange(&f), params);
    let nx = emb::stack_norm(&x, params);
    let violation = emb::yk_check(&x, params).max_violation;
    let back = emb::yk_reconstruct(&x, params)?;
    let scale = f.values().iter().map(|v| v.abs()).fold(1.0, f64::max);
    let roundtrip = f
        .values()
        .iter()
        .zip(back.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let mut out = TrialOutcome::new(digest);
    out.measure("weak_norm", nf);
    out.measure("stack_norm", nx);
    out.measure("yk_violation", violation);
    out.measure("roundtrip_error", roundtrip);
    out.check(Check::le("lower", nf / q, nx, SLACK_NORM));
    out.check(Check::le("upper", nx, q * nf, SLACK_NORM));
    let x_scale = max_abs(&x).max(1.0);
    out.check(Check { name: "yk_violation", lhs: violation, rhs: 0.0, tol: SLACK_IDENTITY * x_scale });
    out.check(Check { name: "roundtrip", lhs: roundtrip, rhs: 0.0, tol: SLACK_IDENTITY * scale });
    out.observe_ratio(nx, nf);
    Ok(out)
}

/// `Φ` on `z + a·u` with `z` in the kernel, level additivity of `Φ_{n,j}`,
/// the `Φ_{n,j}` norm bound, and the shift identity behind equal norms.
pub fn phi(ctx: &mut TrialCtx) -> Result<TrialOutcome> {
    let params = ctx.params;
    let k = ctx.dyadic_k();
    let top = ctx.level_up_to(ctx.caps.max_level);
    let dist = ctx.dist();
    let mut z = random_stack(&mut ctx.rng, k, top, dist);
    {
        // Finest level as adjacent (v, -v) pairs: its pairwise tree sum is 0.
        let fine = z.level_mut(top);
        if fine.len() % 2 == 1 {
            fine[0] = 0.0;
        }
        for pair in fine.chunks_exact_mut(2) {
            pair[1] = -pair[0];
        }
    }
    let a: f64 = ctx.rng.random_range(-3.0..3.0);
    let u = LevelStack::unit(k, top, params)?;
    let x = z.add_scaled(&u, a)?;

    let mut out = TrialOutcome::new(format!("stack k={k} N={top} dist={} a={a}", dist.name()));
    let phi_z = emb::phi_eval(&z, params);
    let phi_x = emb::phi_eval(&x, params);
    let nx = emb::stack_norm(&x, params);
    out.measure("phi_z", phi_z);
    out.measure("phi_z_plus_au", phi_x);
    out.measure("a", a);
    out.measure("stack_norm", nx);
    out.check(Check::exact("annihilates_kernel", phi_z == 0.0));
    out.check(Check::close("phi_recovers_a", phi_x.abs(), a.abs(), SLACK_NORM));
    out.check(Check::le("phi_norm_le_1", a.abs(), nx, SLACK_NORM));

    let functional = emb::TruncFunctional::for_stack(&x, params);
    for n in 0..=top {
        let bound = ((k << n) as f64).powf(-params.inv_q()) * nx;
        for j in 0..k << n {
            let v = functional.eval_block(&x, n, j)?;
            out.check(Check::le("normphi", v.abs(), bound, SLACK_NORM));
            out.observe_ratio(v.abs(), bound);
            if n < top {
                let left = functional.eval_block(&x, n + 1, 2 * j)?;
                let right = functional.eval_block(&x, n + 1, 2 * j + 1)?;
                out.check(Check::close("additivity", left + right, v, SLACK_IDENTITY));
            }
        }
    }
    // Equal norms of Φ_{n,j} and Φ_{n,1}: the shift carries one onto the
    // other. Sampled on a few blocks since each probe copies the stack.
    for _ in 0..4 {
        let n = ctx.rng.random_range(0..=top);
        let j = ctx.rng.random_range(0..k << n);
        let moved = emb::shift_snj(&emb::restrict_block(&x, n, j)?, n, j)?;
        let same = functional.eval_block(&moved, n, 0)? == functional.eval_block(&x, n, j)?;
        out.check(Check::exact("shift_identity", same));
    }
    Ok(out)
}

/// `‖(Σ_j b_j c_{li+j})_l‖ ≤ q² Σ_j b*_j (j^{1/q} - (j-1)^{1/q})` for `c` in
/// the unit ball.
pub fn lemma_bound(ctx: &mut TrialCtx) -> Result<TrialOutcome> {
    let params = ctx.params;
    let q = params.q();
    let width = ctx.rng.random_range(1..=8usize);
    let rows = ctx.rng.random_range(1..=32usize);
    let (db, dc) = (ctx.dist(), ctx.dist());
    let b = random_values(&mut ctx.rng, width, db);
    let mut c = random_values(&mut ctx.rng, width * rows, dc);
    let nc = weak_norm_of(&c, params);
    if nc > 0.0 {
        let shrink = ctx.rng.random_range(0.5..=1.0) / nc;
        c.iter_mut().for_each(|v| *v *= shrink);
    }
    let sums: Vec<f64> = c
        .chunks_exact(width)
        .map(|row| row.iter().zip(&b).map(|(x, y)| x * y).sum())
        .collect();
    let lhs = weak_norm_of(&sums, params);
    let mut b_star: Vec<f64> = b.iter().map(|v| v.abs()).collect();
    b_star.sort_by(|x, y| y.total_cmp(x));
    let rhs = q * q
        * b_star
            .iter()
            .enumerate()
            .map(|(j, v)| v * ((j + 1) as f64).powf(params.inv_q()) - v * (j as f64).powf(params.inv_q()))
            .sum::<f64>();

    let mut out = TrialOutcome::new(format!("width={width} rows={rows} dist_b={} dist_c={}", db.name(), dc.name()));
    out.measure("strided_norm", lhs);
    out.measure("bound", rhs);
    out.measure("c_norm", weak_norm_of(&c, params));
    out.check(Check::le("c_in_unit_ball", weak_norm_of(&c, params), 1.0, SLACK_NORM));
    out.check(Check::le("lemma_bound", lhs, rhs, SLACK_NORM));
    out.observe_ratio(lhs, rhs);
    Ok(out)
}

/// `|Σ_j a_j Φ_{n,j}(x)| ≤ q k^{-1/q} ‖Σ_j a_j χ_{n,j}‖_{q,1}` for `‖x‖ ≤ 1`.
pub fn lemma_compare(ctx: &mut TrialCtx) -> Result<TrialOutcome> {
    let params = ctx.params;
    let (x, digest) = stack_instance(ctx);
    let nx = emb::stack_norm(&x, params);
    let x = if nx > 0.0 { x.scale(1.0 / nx) } else { x };
    let n = ctx.rng.random_range(0..=x.top_level());
    let k = x.k();
    let dist = ctx.dist();
    let a = random_values(&mut ctx.rng, k << n, dist);
    let functional = emb::TruncFunctional::for_stack(&x, params);
    let mut lhs = 0.0;
    for (j, aj) in a.iter().enumerate() {
        lhs += aj * functional.eval_block(&x, n, j)?;
    }
    let lhs = lhs.abs();
    let step = DyadicStep::new(k, n, a)?;
    let rhs = params.q() * (k as f64).powf(-params.inv_q()) * lq1_norm(&rearrange(&step), params);

    let mut out = TrialOutcome::new(format!("{digest} n={n} dist_a={}", dist.name()));
    out.measure("stack_norm", emb::stack_norm(&x, params));
    out.measure("pairing", lhs);
    out.measure("bound", rhs);
    out.check(Check::le("x_in_unit_ball", emb::stack_norm(&x, params), 1.0, SLACK_NORM));
    out.check(Check::le("lemma_compare", lhs, rhs, SLACK_NORM));
    out.observe_ratio(lhs, rhs);
    Ok(out)
}

/// `‖P_k x‖ ≤ q²‖x‖`, consistency, exact idempotence, identity on `Y_k`.
pub fn p_project(ctx: &mut TrialCtx) -> Result<TrialOutcome> {
    let params = ctx.params;
    let (x, digest) = stack_instance(ctx);
    let q2 = params.q() * params.q();
    let y = emb::p_project(&x, params);
    let nx = emb::stack_norm(&x, params);
    let ny = emb::stack_norm(&y, params);
    let violation = emb::yk_check(&y, params).max_violation;

    let dist = ctx.dist();
    let f = random_step(&mut ctx.rng, x.k(), x.top_level(), dist);
    let embedded = emb::t_embed(&f, params);
    let fixed_err = max_abs_diff(&emb::p_project(&embedded, params), &embedded);

    let mut out = TrialOutcome::new(format!("{digest}; fixed-point step dist={}", dist.name()));
    out.measure("stack_norm", nx);
    out.measure("projected_norm", ny);
    out.measure("yk_violation", violation);
    out.measure("fixed_point_error", fixed_err);
    out.check(Check::le("norm_le_q2", ny, q2 * nx, SLACK_NORM));
    out.check(Check { name: "output_consistent", lhs: violation, rhs: 0.0, tol: SLACK_IDENTITY * max_abs(&y).max(1.0) });
    out.check(Check::exact("idempotent", emb::p_project(&y, params) == y));
    out.check(Check {
        name: "identity_on_yk",
        lhs: fixed_err,
        rhs: 0.0,
        tol: SLACK_IDENTITY * max_abs(&embedded).max(1.0),
    });
    out.observe_ratio(ny, nx);
    Ok(out)
}
