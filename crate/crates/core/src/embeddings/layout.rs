//! Disjoint blocks `B_{n,j}` of sizes `m_n`, the block embedding `R`, the
//! split diagnostic behind its upper bound, and the block-averaging
//! projection onto the block-constant subspace `W`.

use serde::{Deserialize, Serialize};

use crate::element::AtomicVector;
use crate::error::{Error, Result};
use crate::norms::weak_norm;
use crate::params::Params;
use crate::rearrange::RearrangementProfile;

use super::stack::LevelStack;

/// Refuse to materialize vectors longer than this; use the profile forms.
pub const MATERIALIZE_LIMIT: usize = 1 << 26;

/// Block sizes `m_0..=m_N` and the contiguous placement of `B_{n,j}` in
/// `(n, j)` lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawLayout", into = "RawLayout")]
pub struct BlockLayout {
    top_level: usize,
    m: Vec<usize>,
    level_start: Vec<usize>,
    total_length: usize,
}

#[derive(Serialize, Deserialize)]
struct RawLayout {
    #[serde(rename = "N")]
    top_level: usize,
    m: Vec<usize>,
}

impl TryFrom<RawLayout> for BlockLayout {
    type Error = Error;

    fn try_from(raw: RawLayout) -> Result<Self> {
        BlockLayout::new(raw.top_level, raw.m)
    }
}

impl From<BlockLayout> for RawLayout {
    fn from(l: BlockLayout) -> Self {
        RawLayout { top_level: l.top_level, m: l.m }
    }
}

fn overflow() -> Error {
    Error::InvalidInput {
        field: "m",
        reason: "layout size overflows".into(),
    }
}

impl BlockLayout {
    /// Validates `m` (starting at 1, strictly increasing, and
    /// `m_n ≥ Σ_{j<n} 2^j m_j`) and derives the offsets.
    pub fn new(top_level: usize, m: Vec<usize>) -> Result<Self> {
        let bad = |reason: String| Error::InvalidInput { field: "m", reason };
        if m.len() != top_level + 1 {
            return Err(bad(format!("expected N+1 = {} sizes, found {}", top_level + 1, m.len())));
        }
        if top_level >= usize::BITS as usize - 1 {
            return Err(overflow());
        }
        if m[0] != 1 {
            return Err(bad(format!("m_0 must be 1, found {}", m[0])));
        }
        let mut level_start = Vec::with_capacity(top_level + 1);
        let mut below = 0usize;
        for n in 0..=top_level {
            if n > 0 && m[n] <= m[n - 1] {
                return Err(bad(format!("sizes must strictly increase at n={n}")));
            }
            if m[n] < below {
                return Err(bad(format!("m_{n} = {} is below the capacity bound {below}", m[n])));
            }
            level_start.push(below);
            let level_len = m[n].checked_mul(1usize << n).ok_or_else(overflow)?;
            below = below.checked_add(level_len).ok_or_else(overflow)?;
        }
        Ok(Self { top_level, m, level_start, total_length: below })
    }

    pub fn top_level(&self) -> usize {
        self.top_level
    }

    pub fn m(&self) -> &[usize] {
        &self.m
    }

    pub fn total_length(&self) -> usize {
        self.total_length
    }

    /// Number of positions in all blocks of levels below `n`,
    /// `Σ_{i<n} 2^i m_i`.
    pub fn mass_below(&self, n: usize) -> usize {
        self.level_start[n]
    }

    /// First position of `B_{n,j}` (0-based `j < 2^n`).
    pub fn offset(&self, n: usize, j: usize) -> usize {
        self.level_start[n] + j * self.m[n]
    }

    /// Iterates `(n, j, start, len)` for every block in layout order.
    pub fn blocks(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        (0..=self.top_level).flat_map(move |n| {
            (0..1usize << n).map(move |j| (n, j, self.offset(n, j), self.m[n]))
        })
    }

    pub fn block_count(&self) -> usize {
        (2usize << self.top_level) - 1
    }
}

/// Minimal layout with `m_0 = 1` and
/// `m_n = max(m_{n-1} + 1, Σ_{j<n} 2^j m_j)`.
pub fn build_layout(top_level: usize) -> Result<BlockLayout> {
    let mut m = vec![1usize];
    let mut below = 1usize;
    for n in 1..=top_level {
        let next = below.max(m[n - 1] + 1);
        m.push(next);
        let level_len = next.checked_mul(1usize << n).ok_or_else(overflow)?;
        below = below.checked_add(level_len).ok_or_else(overflow)?;
    }
    BlockLayout::new(top_level, m)
}

fn check_r_input(x: &LevelStack, layout: &BlockLayout) -> Result<()> {
    if x.k() != 1 {
        return Err(Error::Unsupported(format!(
            "the block embedding is defined for k = 1, got k = {}",
            x.k()
        )));
    }
    if x.top_level() != layout.top_level() {
        return Err(Error::ShapeMismatch(format!(
            "stack N = {} but layout N = {}",
            x.top_level(),
            layout.top_level()
        )));
    }
    Ok(())
}

/// `m_n^{-1/p} x_n(j)` for every block, in layout order.
fn scaled_entries(x: &LevelStack, layout: &BlockLayout, params: Params) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::with_capacity(layout.block_count());
    for n in 0..=layout.top_level() {
        let s = (layout.m()[n] as f64).powf(-params.inv_p());
        out.extend(x.level(n).iter().enumerate().map(|(j, &v)| (n, j, v * s)));
    }
    out
}

/// `Rx`: the vector equal to `x_n(j) / m_n^{1/p}` on `B_{n,j}`. The blocks
/// are disjoint, so the pointwise supremum over blocks is that single value.
pub fn r_embed(x: &LevelStack, layout: &BlockLayout, params: Params) -> Result<AtomicVector> {
    check_r_input(x, layout)?;
    if layout.total_length() > MATERIALIZE_LIMIT {
        return Err(Error::Unsupported(format!(
            "layout length {} exceeds the materialization limit {MATERIALIZE_LIMIT}",
            layout.total_length()
        )));
    }
    let mut out = vec![0.0; layout.total_length()];
    for (n, j, v) in scaled_entries(x, layout, params) {
        let start = layout.offset(n, j);
        out[start..start + layout.m()[n]].fill(v);
    }
    Ok(AtomicVector::new(out))
}

/// Rearrangement of `Rx` without materializing it: one piece of mass `m_n`
/// per block.
pub fn r_embed_profile(x: &LevelStack, layout: &BlockLayout, params: Params) -> Result<RearrangementProfile> {
    check_r_input(x, layout)?;
    Ok(RearrangementProfile::from_weighted(
        scaled_entries(x, layout, params)
            .into_iter()
            .map(|(n, _, v)| (v, layout.m()[n] as f64)),
    ))
}

/// Blocks dominated by a strictly larger scaled entry at a later level,
/// and the weak norms of `Rx` restricted to them and to the rest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitDiagnostic {
    /// `(n, j)` pairs (0-based `j`) in layout order.
    pub a_set: Vec<(usize, usize)>,
    pub norm_a: f64,
    pub norm_ac: f64,
}

impl SplitDiagnostic {
    pub fn contains(&self, n: usize, j: usize) -> bool {
        self.a_set.binary_search(&(n, j)).is_ok()
    }
}

pub fn r_split(x: &LevelStack, layout: &BlockLayout, params: Params) -> Result<SplitDiagnostic> {
    check_r_input(x, layout)?;
    let entries = scaled_entries(x, layout, params);
    let top = layout.top_level();

    // later_max[n] = max |scaled| over levels strictly above n.
    let mut level_max = vec![0.0f64; top + 1];
    for &(n, _, v) in &entries {
        level_max[n] = level_max[n].max(v.abs());
    }
    let mut later_max = vec![0.0f64; top + 1];
    for n in (0..top).rev() {
        later_max[n] = later_max[n + 1].max(level_max[n + 1]);
    }

    let mut a_set = Vec::new();
    let mut a_part = Vec::new();
    let mut ac_part = Vec::new();
    for (n, j, v) in entries {
        let piece = (v, layout.m()[n] as f64);
        if v.abs() < later_max[n] {
            a_set.push((n, j));
            a_part.push(piece);
        } else {
            ac_part.push(piece);
        }
    }
    Ok(SplitDiagnostic {
        a_set,
        norm_a: weak_norm(&RearrangementProfile::from_weighted(a_part), params),
        norm_ac: weak_norm(&RearrangementProfile::from_weighted(ac_part), params),
    })
}

/// Mean computed about the first entry, so constant blocks are returned
/// unchanged bit for bit.
fn shifted_mean(block: &[f64]) -> f64 {
    let first = block[0];
    first + block.iter().map(|v| v - first).sum::<f64>() / block.len() as f64
}

/// Conditional expectation onto sequences constant on every `B_{n,j}`.
pub fn w_project(a: &AtomicVector, layout: &BlockLayout) -> Result<AtomicVector> {
    if a.len() != layout.total_length() {
        return Err(Error::LengthMismatch {
            expected: layout.total_length(),
            found: a.len(),
        });
    }
    let mut out = vec![0.0; a.len()];
    for (_, _, start, len) in layout.blocks() {
        out[start..start + len].fill(shifted_mean(&a.atoms[start..start + len]));
    }
    Ok(AtomicVector::new(out))
}

/// A vector over a layout stored as runs of constant value inside each
/// block, for layouts too long to materialize.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockRunVector {
    /// `runs[b]` lists `(value, length)` for the `b`-th block in layout
    /// order; lengths sum to that block's size.
    runs: Vec<Vec<(f64, usize)>>,
}

impl BlockRunVector {
    pub fn new(layout: &BlockLayout, runs: Vec<Vec<(f64, usize)>>) -> Result<Self> {
        if runs.len() != layout.block_count() {
            return Err(Error::LengthMismatch {
                expected: layout.block_count(),
                found: runs.len(),
            });
        }
        for ((n, j, _, len), block) in layout.blocks().zip(&runs) {
            let covered: usize = block.iter().map(|r| r.1).sum();
            if covered != len {
                return Err(Error::InvalidInput {
                    field: "runs",
                    reason: format!("block ({n}, {j}) covers {covered} positions, expected {len}"),
                });
            }
        }
        Ok(Self { runs })
    }

    pub fn profile(&self) -> RearrangementProfile {
        RearrangementProfile::from_weighted(
            self.runs.iter().flatten().map(|&(v, len)| (v, len as f64)),
        )
    }

    /// Rearrangement of the block-averaged vector.
    pub fn projected_profile(&self) -> RearrangementProfile {
        RearrangementProfile::from_weighted(self.runs.iter().map(|block| {
            let len: usize = block.iter().map(|r| r.1).sum();
            let first = block[0].0;
            let dev: f64 = block.iter().map(|&(v, l)| (v - first) * l as f64).sum();
            (first + dev / len as f64, len as f64)
        }))
    }

    pub fn materialize(&self) -> AtomicVector {
        let mut out = Vec::new();
        for &(v, len) in self.runs.iter().flatten() {
            out.extend(std::iter::repeat_n(v, len));
        }
        AtomicVector::new(out)
    }
}
