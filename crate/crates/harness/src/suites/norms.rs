//! Suites over the three functionals on atomic vectors and dyadic steps.

use rand::seq::SliceRandom;
use rand::Rng;
use weaklp::{lq1_norm, quasi_norm, rearrange, weak_norm, AtomicVector, DyadicStep, Element, Params, Rearrange};

use super::{TrialCtx, ORACLE_SUITE_MAX_LEN, SLACK_CLOSED, SLACK_NORM};
use crate::error::Result;
use crate::generate::{random_step, random_values};
use crate::oracle::oracle_norm;
use crate::report::{Check, TrialOutcome};

fn random_atoms(ctx: &mut TrialCtx, max_len: usize) -> (AtomicVector, String) {
    let len = ctx.len_up_to(max_len);
    let dist = ctx.dist();
    let a = AtomicVector::new(random_values(&mut ctx.rng, len, dist));
    (a, format!("atoms len={len} dist={}", dist.name()))
}

fn random_dyadic(ctx: &mut TrialCtx) -> (DyadicStep, String) {
    let k = ctx.any_k();
    let level = ctx.level_up_to(ctx.caps.max_level);
    let dist = ctx.dist();
    let f = random_step(&mut ctx.rng, k, level, dist);
    (f, format!("step k={k} level={level} dist={}", dist.name()))
}

/// Prefix-maximization norm against literal subset enumeration.
pub fn norm_oracle(ctx: &mut TrialCtx) -> Result<TrialOutcome> {
    let (a, digest) = random_atoms(ctx, ctx.caps.max_atoms.min(ORACLE_SUITE_MAX_LEN));
    let mut out = TrialOutcome::new(digest);
    let fast = weak_norm(&rearrange(&a), ctx.params);
    let oracle = oracle_norm(&a, ctx.params)?;
    out.measure("weak_norm", fast);
    out.measure("oracle_norm", oracle);
    out.check(Check {
        name: "oracle_agreement",
        lhs: (fast - oracle).abs(),
        rhs: 0.0,
        tol: SLACK_NORM * oracle.max(1.0),
    });
    out.observe_ratio(fast, oracle);
    Ok(out)
}

fn sandwich_checks<R: Rearrange + ?Sized>(out: &mut TrialOutcome, f: &R, params: Params, tag: &str) {
    let prof = f.rearrange();
    let w = weak_norm(&prof, params);
    let qn = quasi_norm(&prof, params);
    out.measure(&format!("{tag}_weak"), w);
    out.measure(&format!("{tag}_quasi"), qn);
    out.check(Check::le("quasi_le_weak", qn, w, SLACK_CLOSED));
    out.check(Check::le("weak_le_q_quasi", w, params.q() * qn, SLACK_CLOSED));
    out.observe_ratio(w, qn);
}

/// `|||f||| ≤ ‖f‖ ≤ q|||f|||` for one atomic and one step input per trial.
pub fn sandwich(ctx: &mut TrialCtx) -> Result<TrialOutcome> {
    let (a, da) = random_atoms(ctx, ctx.caps.max_atoms);
    let (f, df) = random_dyadic(ctx);
    let mut out = TrialOutcome::new(format!("{da}; {df}"));
    sandwich_checks(&mut out, &a, ctx.params, "atoms");
    sandwich_checks(&mut out, &f, ctx.params, "step");
    Ok(out)
}

/// Upper p-estimate with constant 1 for disjointly supported pairs.
pub fn p_estimate(ctx: &mut TrialCtx) -> Result<TrialOutcome> {
    let (v, digest) = random_atoms(ctx, ctx.caps.max_atoms);
    let mut f = v.atoms.clone();
    let mut g = vec![0.0; v.len()];
    for i in 0..v.len() {
        if ctx.rng.random::<bool>() {
            g[i] = f[i];
            f[i] = 0.0;
        }
    }
    let params = ctx.params;
    let p = params.p();
    let nsum = weak_norm(&v.atoms.rearrange(), params);
    let nf = weak_norm(&f.rearrange(), params);
    let ng = weak_norm(&g.rearrange(), params);
    let mut out = TrialOutcome::new(digest);
    out.measure("norm_sum", nsum);
    out.measure("norm_f", nf);
    out.measure("norm_g", ng);
    let lhs = nsum.powf(p);
    let rhs = nf.powf(p) + ng.powf(p);
    out.check(Check::le("upper_p_estimate", lhs, rhs, SLACK_NORM));
    out.observe_ratio(lhs, rhs);
    Ok(out)
}

/// Signed indicator of the `j` largest `|f|` cells, as the same kind of
/// element as `f`.
fn top_indicator(values: &[f64], j: usize) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].abs().total_cmp(&values[a].abs()));
    let mut b = vec![0.0; values.len()];
    for &i in &order[..j] {
        b[i] = if values[i] < 0.0 { -1.0 } else { 1.0 };
    }
    b
}

fn pairing_checks(out: &mut TrialOutcome, f: &Element, g: &Element, params: Params, tag: &str) -> Result<()> {
    let fp = f.rearrange();
    let gp = g.rearrange();
    let dot = f.pairing(g)?;
    let holder = quasi_norm(&fp, params) * lq1_norm(&gp, params);
    out.measure(&format!("{tag}_pairing"), dot);
    out.measure(&format!("{tag}_holder_bound"), holder);
    out.check(Check::le("holder", dot.abs(), holder, SLACK_NORM));
    out.observe_ratio(dot.abs(), holder);

    let values: &[f64] = match f {
        Element::Atoms(a) => &a.atoms,
        Element::Step(s) => s.values(),
    };
    let mut best = 0.0f64;
    for j in 1..=values.len() {
        let b = top_indicator(values, j);
        let b: Element = match f {
            Element::Atoms(_) => AtomicVector::new(b).into(),
            Element::Step(s) => DyadicStep::new(s.k(), s.level(), b)?.into(),
        };
        let norm_b = lq1_norm(&b.rearrange(), params);
        if norm_b > 0.0 {
            best = best.max(f.pairing(&b)? / norm_b);
        }
    }
    let target = weak_norm(&fp, params) / params.q();
    out.measure(&format!("{tag}_dual_sup"), best);
    out.check(Check::le("dual_lower_bound", target, best, SLACK_NORM));
    Ok(())
}

/// Hölder-type upper bound and the indicator lower bound for the pairing.
pub fn pairing(ctx: &mut TrialCtx) -> Result<TrialOutcome> {
    let len = ctx.len_up_to(ctx.caps.max_atoms);
    let (df, dg) = (ctx.dist(), ctx.dist());
    let f = AtomicVector::new(random_values(&mut ctx.rng, len, df));
    let mut g = AtomicVector::new(random_values(&mut ctx.rng, len, dg));
    g.atoms.shuffle(&mut ctx.rng);

    let k = ctx.any_k();
    let level = ctx.level_up_to(6);
    let (sf, sg) = (ctx.dist(), ctx.dist());
    let s = random_step(&mut ctx.rng, k, level, sf);
    let t = random_step(&mut ctx.rng, k, level, sg);

    let mut out = TrialOutcome::new(format!(
        "atoms len={len} dist={}/{}; step k={k} level={level} dist={}/{}",
        df.name(),
        dg.name(),
        sf.name(),
        sg.name()
    ));
    pairing_checks(&mut out, &f.into(), &g.into(), ctx.params, "atoms")?;
    pairing_checks(&mut out, &s.into(), &t.into(), ctx.params, "step")?;
    Ok(out)
}
