//! Lower convex and upper concave envelopes of sampled scalar functions,
//! with the contact/chord structure that classifies rarefactions and
//! admissible discontinuities.
//!
//! Envelopes are computed on grids by a monotone-chain lower-hull pass.
//! Hull values are copied bit-exactly at vertices and interpolated
//! elsewhere, which makes the envelope idempotent on the grid.

use crate::error::{FtError, Result};

/// A scalar function sampled on a strictly increasing grid.
#[derive(Clone, Debug)]
pub struct SampledFunction {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(FtError::Config(
                "sampled function needs matching grids with at least 2 nodes".into(),
            ));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(FtError::Config("grid must be strictly increasing".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(FtError::Config("values must be finite".into()));
        }
        Ok(SampledFunction { grid, values })
    }

    pub fn from_fn(a: f64, b: f64, n: usize, f: impl Fn(f64) -> f64) -> Self {
        let grid: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
        let values = grid.iter().map(|&t| f(t)).collect();
        SampledFunction { grid, values }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Parses the two-column fixture format (τ, f̃); `#` lines ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut grid = Vec::new();
        let mut values = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let t: f64 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| FtError::Config("bad fixture line".into()))?;
            let v: f64 = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| FtError::Config("bad fixture line".into()))?;
            grid.push(t);
            values.push(v);
        }
        SampledFunction::new(grid, values)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# tau  f\n");
        for (t, v) in self.grid.iter().zip(self.values.iter()) {
            out.push_str(&format!("{t:.17e} {v:.17e}\n"));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvelopeSide {
    LowerConvex,
    UpperConcave,
}

/// Envelope restricted to grid nodes `a..=b` of the parent function.
#[derive(Clone, Debug)]
pub struct EnvelopeResult {
    pub a: usize,
    pub b: usize,
    pub side: EnvelopeSide,
    /// Envelope values at nodes a..=b.
    pub values: Vec<f64>,
    /// Slope per cell; nondecreasing for convex, nonincreasing concave.
    pub slopes: Vec<f64>,
    /// Contact mask per node: envelope touches the function there.
    pub contact: Vec<bool>,
    /// Hull vertex node indices (absolute, ascending).
    pub vertices: Vec<usize>,
}

impl EnvelopeResult {
    pub fn value_at(&self, node: usize) -> f64 {
        self.values[node - self.a]
    }

    pub fn is_contact(&self, node: usize) -> bool {
        self.contact[node - self.a]
    }
}

/// Default contact tolerance: 1e-10·(1 + max|f̃|).
pub fn default_contact_tol(f: &SampledFunction) -> f64 {
    1e-10 * (1.0 + f.values.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Greatest convex minorant of the grid restriction of f to nodes a..=b.
pub fn lower_convex_envelope(f: &SampledFunction, a: usize, b: usize) -> Result<EnvelopeResult> {
    if a >= b || b >= f.len() {
        return Err(FtError::EmptyInterval(a, b));
    }
    let env = hull_envelope(&f.grid[a..=b], &f.values[a..=b], false);
    Ok(finish(f, a, b, env, EnvelopeSide::LowerConvex))
}

/// Least concave majorant; computed as −conv(−f), which makes the duality
/// identity conc(f) = −conv(−f) exact.
pub fn upper_concave_envelope(f: &SampledFunction, a: usize, b: usize) -> Result<EnvelopeResult> {
    if a >= b || b >= f.len() {
        return Err(FtError::EmptyInterval(a, b));
    }
    let env = hull_envelope(&f.grid[a..=b], &f.values[a..=b], true);
    Ok(finish(f, a, b, env, EnvelopeSide::UpperConcave))
}

struct HullOutput {
    values: Vec<f64>,
    vertices: Vec<usize>, // relative to the slice
}

/// Monotone-chain lower hull (or upper for `concave`). Collinear triples
/// are popped with a relative epsilon so the result is stable under
/// re-enveloping.
fn hull_envelope(grid: &[f64], values: &[f64], concave: bool) -> HullOutput {
    let sgn = if concave { -1.0 } else { 1.0 };
    let n = grid.len();
    let mut stack: Vec<usize> = Vec::with_capacity(n);
    for j in 0..n {
        let yj = sgn * values[j];
        while stack.len() >= 2 {
            let i1 = stack[stack.len() - 2];
            let i2 = stack[stack.len() - 1];
            let (x0, y0) = (grid[i1], sgn * values[i1]);
            let (x1, y1) = (grid[i2], sgn * values[i2]);
            let cross = (x1 - x0) * (yj - y0) - (y1 - y0) * (grid[j] - x0);
            let eps = 1e-14
                * (grid[j] - x0).abs()
                * (y0.abs() + y1.abs() + yj.abs() + 1.0);
            if cross <= eps {
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(j);
    }
    let mut out = vec![0.0; n];
    for w in stack.windows(2) {
        let (i, k) = (w[0], w[1]);
        out[i] = values[i];
        let slope = (values[k] - values[i]) / (grid[k] - grid[i]);
        for j in i + 1..k {
            out[j] = values[i] + slope * (grid[j] - grid[i]);
        }
    }
    let last = *stack.last().unwrap();
    out[last] = values[last];
    HullOutput {
        values: out,
        vertices: stack,
    }
}

fn finish(
    f: &SampledFunction,
    a: usize,
    b: usize,
    hull: HullOutput,
    side: EnvelopeSide,
) -> EnvelopeResult {
    let tol = default_contact_tol(f);
    let values = hull.values;
    let slopes: Vec<f64> = (0..b - a)
        .map(|j| (values[j + 1] - values[j]) / (f.grid[a + j + 1] - f.grid[a + j]))
        .collect();
    let contact: Vec<bool> = (0..=b - a)
        .map(|j| (f.values[a + j] - values[j]).abs() <= tol)
        .collect();
    EnvelopeResult {
        a,
        b,
        side,
        values,
        slopes,
        contact,
        vertices: hull.vertices.into_iter().map(|v| v + a).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalKind {
    Contact,
    Chord,
}

/// A maximal interval [lo, hi] (node indices) of uniform kind. Adjacent
/// intervals share their boundary node.
#[derive(Clone, Copy, Debug)]
pub struct LabeledInterval {
    pub lo: usize,
    pub hi: usize,
    pub kind: IntervalKind,
}

/// Splits [a, b] into maximal CONTACT / CHORD intervals. A cell counts as
/// contact when both its endpoint nodes touch the envelope within `tol`;
/// adjacent same-label cells are merged.
pub fn contact_decomposition(
    f: &SampledFunction,
    env: &EnvelopeResult,
    tol: f64,
) -> Vec<LabeledInterval> {
    let (a, b) = (env.a, env.b);
    let node_contact = |j: usize| (f.values[j] - env.value_at(j)).abs() <= tol;
    let mut out: Vec<LabeledInterval> = Vec::new();
    for cell in a..b {
        let kind = if node_contact(cell) && node_contact(cell + 1) {
            IntervalKind::Contact
        } else {
            IntervalKind::Chord
        };
        match out.last_mut() {
            Some(seg) if seg.kind == kind => seg.hi = cell + 1,
            _ => out.push(LabeledInterval {
                lo: cell,
                hi: cell + 1,
                kind,
            }),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parabola(n: usize) -> SampledFunction {
        SampledFunction::from_fn(0.0, 1.0, n, |t| t * t)
    }

    #[test]
    fn convex_input_is_its_own_envelope() {
        let f = parabola(100);
        let env = lower_convex_envelope(&f, 0, 100).unwrap();
        for j in 0..=100 {
            assert!((env.values[j] - f.values[j]).abs() <= 1e-13);
            assert!(env.contact[j]);
        }
    }

    #[test]
    fn concave_input_gives_chord() {
        let f = SampledFunction::from_fn(0.0, 1.0, 100, |t| -t * t);
        let env = lower_convex_envelope(&f, 0, 100).unwrap();
        // Chord from (0,0) to (1,-1).
        for j in 0..=100 {
            let want = -f.grid[j];
            assert!((env.values[j] - want).abs() < 1e-12, "j={j}");
        }
        assert!(env.contact[0] && env.contact[100]);
        assert!(!env.contact[50]);
    }

    #[test]
    fn endpoints_exact() {
        let f = SampledFunction::from_fn(-1.0, 2.0, 57, |t| t.sin() - t * t * 0.3);
        let env = lower_convex_envelope(&f, 0, 57).unwrap();
        assert_eq!(env.values[0], f.values[0]);
        assert_eq!(env.values[57], f.values[57]);
    }

    #[test]
    fn upper_is_negated_lower() {
        let f = SampledFunction::from_fn(0.0, 1.0, 64, |t| (5.0 * t).sin());
        let neg = SampledFunction::new(f.grid.clone(), f.values.iter().map(|v| -v).collect())
            .unwrap();
        let conc = upper_concave_envelope(&f, 0, 64).unwrap();
        let conv = lower_convex_envelope(&neg, 0, 64).unwrap();
        for j in 0..=64 {
            assert_eq!(conc.values[j], -conv.values[j]);
        }
    }

    #[test]
    fn bump_decomposes_contact_chord_contact() {
        // Convex with an interior concave bump.
        let f = SampledFunction::from_fn(-2.0, 2.0, 400, |t| t * t + 1.5 * (-4.0 * t * t).exp());
        let env = lower_convex_envelope(&f, 0, 400).unwrap();
        let segs = contact_decomposition(&f, &env, default_contact_tol(&f));
        let kinds: Vec<IntervalKind> = segs.iter().map(|s| s.kind).collect();
        assert_eq!(
            kinds,
            vec![IntervalKind::Contact, IntervalKind::Chord, IntervalKind::Contact]
        );
    }

    #[test]
    fn idempotent_bit_exact() {
        let f = SampledFunction::from_fn(0.0, 3.0, 257, |t| (t * 2.3).sin() + 0.2 * t);
        let env = lower_convex_envelope(&f, 0, 257).unwrap();
        let g = SampledFunction::new(f.grid.clone(), env.values.clone()).unwrap();
        let env2 = lower_convex_envelope(&g, 0, 257).unwrap();
        assert_eq!(env.values, env2.values);
    }
}
